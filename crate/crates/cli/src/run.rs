//! Scenario execution and its CSV artifacts.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use stirap_core::dark::spectral_gap;
use stirap_core::metrics::overlap_fidelity;
use stirap_core::{
    concurrence, fidelity, freeze_state, partial_trace, project, project_qutrit, propagate, AtomLevel,
    AtomSpace, BasisState, DarkStateCoefficients, Error as CoreError, ModelConfig, Projector, PulseSchedule,
    ReducedState, Sector, Sign, StateVector, Subsystem, TargetState, TimeGrid, Trajectory,
};

use crate::config::{Scenario, ScenarioConfig};
use crate::error::CliError;

/// Largest tolerated change of a normalized charge expectation over a run.
pub const CHARGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Population {
    pub label: String,
    pub population: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub name: String,
    pub probability: f64,
    /// Overlap with the named target for this outcome, where one exists.
    pub fidelity: Option<f64>,
    /// Post-measurement state on the unmeasured subsystems, empty when the
    /// outcome is impossible.
    #[serde(skip)]
    pub post_state: Vec<(String, Complex64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entanglement {
    /// Spin-flip concurrence of atoms A and B restricted to `{g, f}`.
    pub concurrence: f64,
    /// Weight on `e` dropped by that restriction.
    pub excited_leakage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub sector_dim: usize,
    pub t_end: f64,
    pub final_populations: Vec<Population>,
    /// Final overlap with the scenario target (the frozen dark state for
    /// projection scenarios).
    pub fidelity: Option<f64>,
    /// Purity of the two-mode field after tracing out the atoms.
    pub field_purity: f64,
    pub excited_population: f64,
    pub pair_entanglement: Option<Entanglement>,
    pub max_norm_drift: f64,
    pub renormalizations: usize,
    pub max_charge_drift: f64,
    /// Smallest nonzero `|λ|` of `H(t)` over recorded times in `[0, T]`.
    pub min_gap: Option<f64>,
    pub branches: Vec<Branch>,
    /// Probability and EPR fidelity after projecting the field onto
    /// `|n−1, μ+1⟩` (two-atom `ghz_project` only).
    pub field_projection: Option<Branch>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub trajectory_csv: String,
    pub branches_csv: Option<String>,
}

fn schedule(c: &ScenarioConfig) -> Result<PulseSchedule, CliError> {
    Ok(PulseSchedule::new(c.g10_tau, c.g20_tau, 1.0, c.t_sep)?)
}

pub fn model(c: &ScenarioConfig) -> Result<(ModelConfig, BasisState), CliError> {
    let initial = BasisState::ground(c.atoms, c.n_photons, c.mu);
    let sector = Arc::new(Sector::build(&initial)?);
    Ok((ModelConfig::new(c.delta_tau, schedule(c)?, sector)?, initial))
}

fn target(c: &ScenarioConfig) -> Option<TargetState> {
    let field = Some((0, c.mu + 1));
    match c.scenario {
        Scenario::Epr2 => Some(TargetState::Epr2 { field }),
        Scenario::W(_) => Some(TargetState::W { n_atoms: c.atoms, field }),
        _ => None,
    }
}

fn time_grid(c: &ScenarioConfig) -> Result<TimeGrid, CliError> {
    let t_start = -stirap_core::dynamics::WINDOW_PADDING;
    let t_end = match c.t_freeze {
        Some(t) if c.scenario.is_projection() => t,
        _ => c.t_sep + stirap_core::dynamics::WINDOW_PADDING,
    };
    if t_end <= t_start {
        return Err(CliError::Config(format!("field `t_freeze`: must exceed {t_start}, got {t_end}")));
    }
    Ok(TimeGrid::new(t_start, t_end, c.steps)?)
}

fn charge_drift(traj: &Trajectory, k0: (i64, i64)) -> f64 {
    traj.points
        .iter()
        .map(|p| {
            let w = p.norm().powi(2);
            let (ka, kb) = p.charge_expectations();
            (ka / w - k0.0 as f64).abs().max((kb / w - k0.1 as f64).abs())
        })
        .fold(0.0, f64::max)
}

fn min_gap(config: &ModelConfig, traj: &Trajectory, t_sep: f64) -> Option<f64> {
    traj.points
        .iter()
        .map(|p| p.t)
        .filter(|&t| (0.0..=t_sep).contains(&t))
        .filter_map(|t| spectral_gap(config, t))
        .min_by(f64::total_cmp)
}

fn field_purity(psi: &ReducedState) -> Result<f64, CliError> {
    let r = partial_trace(psi, &[Subsystem::ModeA, Subsystem::ModeB], AtomSpace::ThreeLevel)?;
    Ok(r.rho.purity())
}

fn pair_entanglement(psi: &ReducedState) -> Result<Entanglement, CliError> {
    let r = partial_trace(psi, &[Subsystem::Atom(0), Subsystem::Atom(1)], AtomSpace::Qubit)?;
    Ok(Entanglement { concurrence: concurrence(&r.rho)?, excited_leakage: r.discarded })
}

fn branch(
    name: String,
    outcome: Result<stirap_core::MeasurementOutcome, CoreError>,
    target: Option<TargetState>,
) -> Result<Branch, CliError> {
    match outcome {
        Ok(o) => {
            let fidelity = target.map(|t| fidelity(&o.post_state, &t)).transpose()?;
            Ok(Branch { name, probability: o.probability, fidelity, post_state: o.post_state.labelled() })
        }
        Err(CoreError::ImpossibleOutcome { probability }) => {
            Ok(Branch { name, probability, fidelity: None, post_state: Vec::new() })
        }
        Err(e) => Err(e.into()),
    }
}

fn symmetric_coefficients(config: &ModelConfig, c: &ScenarioConfig, t: f64) -> Option<DarkStateCoefficients> {
    let g = config.couplings_at(t);
    DarkStateCoefficients::symmetric(g.pump[0], g.stokes[0], c.n_photons, c.mu).ok()
}

fn ghz_branches(config: &ModelConfig, c: &ScenarioConfig, frozen: &ReducedState, t: f64) -> Result<Vec<Branch>, CliError> {
    let last = c.atoms - 1;
    let k = symmetric_coefficients(config, c, t);
    let two_atoms = c.atoms == 2;
    [AtomLevel::G, AtomLevel::F]
        .into_iter()
        .map(|level| {
            let proj = Projector::atom_level(last, level)?;
            let tgt = k.filter(|_| two_atoms).map(|coefficients| {
                let (n, mu, remaining) = (c.n_photons, c.mu, 0);
                if level == AtomLevel::G {
                    TargetState::GhzEquivalentPrime { coefficients, n, mu, remaining }
                } else {
                    TargetState::GhzEquivalentDoublePrime { coefficients, n, mu, remaining }
                }
            });
            branch(proj.name(), project(frozen, &proj), tgt)
        })
        .collect()
}

fn qutrit_branches(config: &ModelConfig, c: &ScenarioConfig, frozen: &ReducedState, t: f64) -> Result<Vec<Branch>, CliError> {
    let k = symmetric_coefficients(config, c, t);
    let mut out = Vec::new();
    for sa in [Sign::Plus, Sign::Minus] {
        for sb in [Sign::Plus, Sign::Minus] {
            let tgt = k.and_then(|coefficients| {
                let (n, mu) = (c.n_photons, c.mu);
                match (sa, sb) {
                    (Sign::Plus, Sign::Plus) => Some(TargetState::QutritPlus { coefficients, n, mu }),
                    (Sign::Minus, Sign::Minus) => Some(TargetState::QutritMinus { coefficients, n, mu }),
                    _ => None,
                }
            });
            let name = Projector::qutrit_pair(sa, sb).name();
            out.push(branch(name, project_qutrit(frozen, sa, sb), tgt)?);
        }
    }
    Ok(out)
}

fn num(x: f64) -> String {
    format!("{x:.15e}")
}

fn trajectory_csv(
    config: &ModelConfig,
    traj: &Trajectory,
    target: Option<&ReducedState>,
) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t_over_tau".to_string(), "g1_tau".into(), "g2_tau".into()];
    header.extend(config.sector().states().iter().map(|s| format!("pop_{}", s.label())));
    header.extend(["fidelity".to_string(), "norm_drift".into()]);
    w.write_record(&header)?;
    for (p, drift) in traj.points.iter().zip(&traj.norm_drift) {
        let g = config.couplings_at(p.t);
        let mut row = vec![num(p.t), num(g.pump[0]), num(g.stokes[0])];
        row.extend(p.amplitudes.iter().map(|a| num(a.norm_sqr())));
        row.push(match target {
            Some(t) => num(overlap_fidelity(&ReducedState::from(p), t)?),
            None => String::new(),
        });
        row.push(num(*drift));
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?)
        .expect("csv output is utf-8"))
}

/// `label=re+imi`, e.g. `gA.na2.nb0=3.1e-1-0e0i`.
pub fn component(label: &str, a: Complex64) -> String {
    let mut s = String::new();
    write!(s, "{label}={:.15e}{:+.15e}i", a.re, a.im).expect("writing to a String");
    s
}

/// Ragged rows `branch,probability,<component>...`.
pub fn branches_csv(branches: &[Branch]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    w.write_record(["branch", "probability", "post_state_components"])?;
    for b in branches {
        let mut row = vec![b.name.clone(), num(b.probability)];
        row.extend(b.post_state.iter().map(|(l, a)| component(l, *a)));
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?)
        .expect("csv output is utf-8"))
}

/// Propagate the scenario, score it and collect its artifacts.
pub fn run_scenario(c: &ScenarioConfig) -> Result<RunOutput, CliError> {
    c.validate()?;
    let (config, initial) = model(c)?;
    let grid = time_grid(c)?;
    let psi0 = StateVector::basis(config.sector().clone(), &initial, grid.t_start)?;
    let traj = propagate(&config, &psi0, &grid, c.record_every)?;

    let max_charge_drift = charge_drift(&traj, config.sector().charges());
    if max_charge_drift > CHARGE_TOLERANCE {
        return Err(CliError::Numerical(format!(
            "charge expectation drifted by {max_charge_drift:.3e} (limit {CHARGE_TOLERANCE:.0e})"
        )));
    }

    let final_state = traj.final_state();
    let final_reduced = ReducedState::from(final_state);

    let mut branches = Vec::new();
    let mut field_projection = None;
    let target_state = if c.scenario.is_projection() {
        let t = grid.t_end;
        let frozen = freeze_state(&config, t)?;
        let frozen = ReducedState::from(&frozen);
        branches = match c.scenario {
            Scenario::GhzProject => ghz_branches(&config, c, &frozen, t)?,
            _ => qutrit_branches(&config, c, &frozen, t)?,
        };
        if c.scenario == Scenario::GhzProject && c.atoms == 2 {
            let proj = Projector::field(c.n_photons - 1, c.mu + 1);
            field_projection =
                Some(branch(proj.name(), project(&frozen, &proj), Some(TargetState::Epr2 { field: None }))?);
        }
        Some(frozen)
    } else {
        target(c).map(|t| t.expand()).transpose()?
    };

    let fidelity = target_state.as_ref().map(|t| overlap_fidelity(&final_reduced, t)).transpose()?;
    let pair_entanglement = match c.scenario {
        Scenario::Epr2 | Scenario::W(_) if c.atoms >= 2 => Some(pair_entanglement(&final_reduced)?),
        _ => None,
    };

    let report = RunReport {
        config: c.clone(),
        sector_dim: config.dim(),
        t_end: grid.t_end,
        final_populations: final_state
            .populations()
            .into_iter()
            .map(|(s, population)| Population { label: s.label(), population })
            .collect(),
        fidelity,
        field_purity: field_purity(&final_reduced)?,
        excited_population: final_state.excited_population(),
        pair_entanglement,
        max_norm_drift: traj.max_norm_drift,
        renormalizations: traj.renormalizations,
        max_charge_drift,
        min_gap: min_gap(&config, &traj, c.t_sep),
        branches,
        field_projection,
    };
    let trajectory_csv = trajectory_csv(&config, &traj, target_state.as_ref())?;
    let branches_csv = c.scenario.is_projection().then(|| branches_csv(&report.branches)).transpose()?;
    Ok(RunOutput { report, trajectory_csv, branches_csv })
}
