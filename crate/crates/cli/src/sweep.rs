//! One-parameter sweeps. Rows run in parallel and are written in input order.

use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::run::{run_scenario, RunReport};

const SUMMARY_COLUMNS: [&str; 9] = [
    "fidelity",
    "field_purity",
    "concurrence",
    "excited_leakage",
    "excited_population",
    "max_norm_drift",
    "max_charge_drift",
    "min_gap",
    "renormalizations",
];

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.15e}")).unwrap_or_default()
}

/// Header of the sweep table for `template`'s scenario.
pub fn header(template: &ScenarioConfig, axis: &str) -> Vec<String> {
    let mut h = vec![axis.to_string()];
    if template.scenario.is_projection() {
        h.extend(["branch", "probability", "branch_fidelity"].map(String::from));
    } else {
        h.extend(SUMMARY_COLUMNS.map(String::from));
    }
    h
}

fn rows(value: f64, report: &RunReport) -> Vec<Vec<String>> {
    let axis = format!("{value}");
    if report.config.scenario.is_projection() {
        report
            .branches
            .iter()
            .map(|b| vec![axis.clone(), b.name.clone(), format!("{:.15e}", b.probability), opt(b.fidelity)])
            .collect()
    } else {
        let e = report.pair_entanglement.as_ref();
        vec![vec![
            axis,
            opt(report.fidelity),
            opt(Some(report.field_purity)),
            opt(e.map(|e| e.concurrence)),
            opt(e.map(|e| e.excited_leakage)),
            opt(Some(report.excited_population)),
            opt(Some(report.max_norm_drift)),
            opt(Some(report.max_charge_drift)),
            opt(report.min_gap),
            report.renormalizations.to_string(),
        ]]
    }
}

/// Run `template` once per value of `axis`; returns the reports in input
/// order and the CSV table.
pub fn sweep(template: &ScenarioConfig, axis: &str, values: &[f64]) -> Result<(Vec<RunReport>, String), CliError> {
    // reject a bad axis even for an empty value list
    if !ScenarioConfig::SWEEP_AXES.contains(&axis) {
        template.with_axis(axis, 0.0)?;
    }
    let configs = values.iter().map(|&v| template.with_axis(axis, v)).collect::<Result<Vec<_>, _>>()?;
    let reports = configs
        .par_iter()
        .map(|c| run_scenario(c).map(|o| o.report))
        .collect::<Result<Vec<_>, _>>()?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(template, axis))?;
    for (v, r) in values.iter().zip(&reports) {
        for row in rows(*v, r) {
            w.write_record(&row)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok((reports, String::from_utf8(bytes).expect("csv output is utf-8")))
}

/// Parse `a,b,c`; an empty string is an empty list.
pub fn parse_values(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse::<f64>().map_err(|_| CliError::Config(format!("sweep value `{v}` is not a number"))))
        .collect()
}
