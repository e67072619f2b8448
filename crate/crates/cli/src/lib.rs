//! Command-line front end for the STIRAP simulator: named scenarios, config
//! files, CSV artifacts and parameter sweeps.

pub mod config;
pub mod error;
pub mod run;
pub mod sweep;

pub use config::{ConfigOverrides, Scenario, ScenarioConfig};
pub use error::CliError;
pub use run::{run_scenario, Branch, RunOutput, RunReport};
pub use sweep::sweep;

/// Generic plotting helper written next to the CSVs on request.
pub const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
"""Plot populations and fidelity from trajectory.csv (needs pandas + matplotlib)."""
import sys

import matplotlib.pyplot as plt
import pandas as pd

path = sys.argv[1] if len(sys.argv) > 1 else "trajectory.csv"
df = pd.read_csv(path)
fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
for col in df.columns:
    if col.startswith("pop_") and df[col].max() > 1e-3:
        top.plot(df["t_over_tau"], df[col], label=col[4:])
top.set_ylabel("population")
top.legend(fontsize="small")
if df["fidelity"].notna().any():
    bottom.plot(df["t_over_tau"], df["fidelity"], color="k")
bottom.set_ylabel("fidelity")
bottom.set_xlabel("t / tau")
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"#;
