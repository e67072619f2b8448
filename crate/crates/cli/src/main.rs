use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stirap_cli::sweep::parse_values;
use stirap_cli::{run_scenario, sweep, CliError, ConfigOverrides, ScenarioConfig, PLOT_SCRIPT};

#[derive(Parser)]
#[command(name = "stirap", version, about = "Cavity-QED STIRAP entanglement simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a scenario and write report.json and trajectory.csv.
    Simulate(Common),
    /// Freeze the dark state and write the measurement branch table.
    Project(Common),
    /// Rerun a scenario over values of one numeric field.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        axis: String,
        /// Comma-separated values; may be empty.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        values: String,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scenario: Option<String>,
    /// Flat `key = value` file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    g10_tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    g20_tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta_tau: Option<f64>,
    #[arg(long)]
    t_sep: Option<f64>,
    #[arg(long)]
    n_photons: Option<u32>,
    #[arg(long)]
    mu: Option<u32>,
    #[arg(long)]
    atoms: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    t_freeze: Option<f64>,
    #[arg(long)]
    record_every: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write plot_trajectory.py next to the CSVs.
    #[arg(long)]
    plot_script: bool,
}

impl Common {
    fn resolve(&self) -> Result<ScenarioConfig, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                ConfigOverrides::parse(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => ConfigOverrides::default(),
        };
        let flags = ConfigOverrides {
            scenario: self.scenario.clone(),
            atoms: self.atoms,
            n_photons: self.n_photons,
            mu: self.mu,
            g10_tau: self.g10_tau,
            g20_tau: self.g20_tau,
            delta_tau: self.delta_tau,
            t_sep: self.t_sep,
            steps: self.steps,
            t_freeze: self.t_freeze,
            record_every: self.record_every,
        };
        ScenarioConfig::resolve(&file.merge(flags))
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn report_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(common) => {
            let config = common.resolve()?;
            let out = run_scenario(&config)?;
            write(&common.out, "report.json", &report_json(&out.report))?;
            write(&common.out, "trajectory.csv", &out.trajectory_csv)?;
            if let Some(b) = &out.branches_csv {
                write(&common.out, "branches.csv", b)?;
            }
            if common.plot_script {
                write(&common.out, "plot_trajectory.py", PLOT_SCRIPT)?;
            }
            if let Some(f) = out.report.fidelity {
                println!("fidelity {f:.6}");
            }
        }
        Command::Project(common) => {
            let config = common.resolve()?;
            if !config.scenario.is_projection() {
                return Err(CliError::Config(format!(
                    "project needs ghz_project or qutrit_project, got {}",
                    config.scenario
                )));
            }
            let out = run_scenario(&config)?;
            write(&common.out, "report.json", &report_json(&out.report))?;
            write(&common.out, "branches.csv", out.branches_csv.as_deref().unwrap_or_default())?;
            if common.plot_script {
                write(&common.out, "trajectory.csv", &out.trajectory_csv)?;
                write(&common.out, "plot_trajectory.py", PLOT_SCRIPT)?;
            }
            for b in &out.report.branches {
                println!("{} {:.6}", b.name, b.probability);
            }
        }
        Command::Sweep { common, axis, values } => {
            let config = common.resolve()?;
            let values = parse_values(&values)?;
            let (reports, table) = sweep(&config, &axis, &values)?;
            write(&common.out, "sweep.csv", &table)?;
            write(&common.out, "sweep_reports.json", &report_json(&reports))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
