//! End-to-end protocol runs through the public core API.

use std::sync::Arc;

use stirap_core::dynamics::DEFAULT_STEPS;
use stirap_core::metrics::overlap_fidelity;
use stirap_core::{
    concurrence, fidelity, freeze_state, partial_trace, project, propagate, AtomLevel, AtomSpace, BasisState,
    ModelConfig, Projector, PulseSchedule, ReducedState, Sector, StateVector, Subsystem, TargetState, TimeGrid,
};

const T_SEP: f64 = 4.0 / 3.0;

fn run(n_atoms: usize, n: u32, g0: f64, steps: usize) -> (ModelConfig, stirap_core::Trajectory) {
    let initial = BasisState::ground(n_atoms, n, 0);
    let sector = Arc::new(Sector::build(&initial).unwrap());
    let cfg = ModelConfig::new(0.0, PulseSchedule::symmetric(g0, 1.0, T_SEP).unwrap(), sector).unwrap();
    let grid = TimeGrid::for_schedule(1.0, T_SEP, steps).unwrap();
    let psi0 = StateVector::basis(cfg.sector().clone(), &initial, grid.t_start).unwrap();
    let traj = propagate(&cfg, &psi0, &grid, 100).unwrap();
    (cfg, traj)
}

#[test]
fn epr_transfer() {
    let (_, traj) = run(2, 1, 15.0, DEFAULT_STEPS);
    let psi = ReducedState::from(traj.final_state());
    let f = fidelity(&psi, &TargetState::Epr2 { field: Some((0, 1)) }).unwrap();
    assert!(f > 0.99, "{f}");
    assert!(traj.max_norm_drift < 1e-9);
}

#[test]
fn step_halving_is_converged() {
    let (_, fine) = run(2, 1, 15.0, DEFAULT_STEPS);
    let (_, coarse) = run(2, 1, 15.0, DEFAULT_STEPS / 2);
    let a = fine.final_state().populations();
    let b = coarse.final_state().populations();
    let worst = a.iter().zip(&b).map(|((_, x), (_, y))| (x - y).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst}");
}

#[test]
fn ideal_w_pair_concurrence_is_two_over_n() {
    for n in 3..=5 {
        let w = TargetState::W { n_atoms: n, field: None }.expand().unwrap();
        for (a, b) in [(0, 1), (0, n - 1), (1, 2)] {
            let r = partial_trace(&w, &[Subsystem::Atom(a), Subsystem::Atom(b)], AtomSpace::Qubit).unwrap();
            let c = concurrence(&r.rho).unwrap();
            assert!((c - 2.0 / n as f64).abs() < 1e-9, "N={n} pair ({a},{b}): {c}");
        }
    }
}

#[test]
fn simulated_w3_keeps_pair_entanglement() {
    let (_, traj) = run(3, 1, 15.0, DEFAULT_STEPS);
    let psi = ReducedState::from(traj.final_state());
    let r = partial_trace(&psi, &[Subsystem::Atom(0), Subsystem::Atom(1)], AtomSpace::Qubit).unwrap();
    assert!(concurrence(&r.rho).unwrap() > 0.6);
    assert!(r.discarded < 1e-3);
}

#[test]
fn adiabatic_following_reaches_frozen_dark_state() {
    // propagate to the midpoint and compare with the instantaneous dark state
    let initial = BasisState::ground(2, 2, 0);
    let sector = Arc::new(Sector::build(&initial).unwrap());
    let cfg = ModelConfig::new(0.0, PulseSchedule::symmetric(15.0, 1.0, T_SEP).unwrap(), sector).unwrap();
    let grid = TimeGrid::new(-5.0, T_SEP / 2.0, DEFAULT_STEPS).unwrap();
    let psi0 = StateVector::basis(cfg.sector().clone(), &initial, grid.t_start).unwrap();
    let traj = propagate(&cfg, &psi0, &grid, DEFAULT_STEPS).unwrap();
    let frozen = freeze_state(&cfg, T_SEP / 2.0).unwrap();
    let f = overlap_fidelity(&ReducedState::from(traj.final_state()), &ReducedState::from(&frozen)).unwrap();
    assert!(f > 0.9, "{f}");
}

#[test]
fn field_detection_heralds_epr_pair() {
    let sector = Arc::new(Sector::build(&BasisState::ground(2, 2, 0)).unwrap());
    let cfg = ModelConfig::new(0.0, PulseSchedule::symmetric(15.0, 1.0, T_SEP).unwrap(), sector).unwrap();
    let frozen = ReducedState::from(&freeze_state(&cfg, 0.3).unwrap());
    let out = project(&frozen, &Projector::field(1, 1)).unwrap();
    let f = fidelity(&out.post_state, &TargetState::Epr2 { field: None }).unwrap();
    assert!((f - 1.0).abs() < 1e-12);
    let g = project(&frozen, &Projector::atom_level(0, AtomLevel::G).unwrap()).unwrap();
    assert!(g.probability > 0.0 && g.probability < 1.0);
}
