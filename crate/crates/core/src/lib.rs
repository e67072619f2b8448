//! Simulation of N three-level Λ atoms coupled to a two-mode cavity:
//! conserved basis sectors, the interaction-picture Hamiltonian with
//! Gaussian STIRAP pulses, RK4 propagation, dark states, projective
//! measurements and entanglement metrics.

pub mod basis;
pub mod dark;
pub mod dynamics;
pub mod error;
pub mod measurement;
pub mod metrics;
pub mod model;
pub mod reduced;

pub use basis::{build_sector, conserved_charges, AtomLevel, BasisState, Sector};
pub use dark::{
    dark_state_closed_form_2atom, dark_states_numeric, dark_subspace, freeze_state,
    DarkStateCoefficients, TwoAtomCouplings,
};
pub use dynamics::{populations, propagate, StateVector, TimeGrid, Trajectory};
pub use error::{Error, Result};
pub use measurement::{
    collapse, outcome_distribution, project, project_qutrit, MeasurementOutcome, Projector, Sign,
};
pub use metrics::{
    concurrence, fidelity, partial_trace, AtomSpace, DensityMatrix, ReducedDensity, Subsystem,
    TargetState,
};
pub use model::{coupling_at, hamiltonian_at, Couplings, ModelConfig, PulseSchedule};
pub use reduced::{Ket, Layout, ReducedState};
