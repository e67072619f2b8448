//! Fixed-step RK4 propagation of `i dψ/dt = H(t) ψ` on a sector.
//!
//! The norm is never silently restored. Recorded states whose norm drifted
//! by more than [`RENORM_THRESHOLD`] are renormalized and the event is
//! reported; drift beyond [`DRIFT_LIMIT`] aborts the run.

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::basis::{BasisState, Sector};
use crate::error::{Error, Result};
use crate::model::ModelConfig;

pub const DEFAULT_STEPS: usize = 8_000;
/// Window padding on each side of the pulse pair, in units of `tau`.
pub const WINDOW_PADDING: f64 = 5.0;
pub const RENORM_THRESHOLD: f64 = 1e-9;
pub const DRIFT_LIMIT: f64 = 1e-6;

/// Complex amplitudes aligned with a sector's canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    sector: Arc<Sector>,
    pub amplitudes: DVector<Complex64>,
    pub t: f64,
}

impl StateVector {
    pub fn new(sector: Arc<Sector>, amplitudes: DVector<Complex64>, t: f64) -> Result<Self> {
        if amplitudes.len() != sector.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a sector of {} states",
                amplitudes.len(),
                sector.len()
            )));
        }
        Ok(Self { sector, amplitudes, t })
    }

    /// The basis ket `s` at time `t`.
    pub fn basis(sector: Arc<Sector>, s: &BasisState, t: f64) -> Result<Self> {
        let i = sector
            .index_of(s)
            .ok_or_else(|| Error::InvalidArgument(format!("{s} is not in the sector")))?;
        let mut amplitudes = DVector::zeros(sector.len());
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(Self { sector, amplitudes, t })
    }

    pub fn sector(&self) -> &Arc<Sector> {
        &self.sector
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn amplitude(&self, s: &BasisState) -> Complex64 {
        self.sector.index_of(s).map_or(Complex64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    pub fn populations(&self) -> Vec<(BasisState, f64)> {
        populations(self)
    }

    /// Expectation values of the two conserved charges.
    pub fn charge_expectations(&self) -> (f64, f64) {
        let (mut ka, mut kb) = (0.0, 0.0);
        for (s, p) in self.sector.states().iter().zip(self.amplitudes.iter()) {
            let (a, b) = crate::basis::conserved_charges(s);
            ka += a as f64 * p.norm_sqr();
            kb += b as f64 * p.norm_sqr();
        }
        (ka, kb)
    }

    /// Probability weight on basis states with at least one atom in `e`.
    pub fn excited_population(&self) -> f64 {
        self.sector
            .states()
            .iter()
            .zip(self.amplitudes.iter())
            .filter(|(s, _)| s.has_excited())
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// `|⟨other|self⟩|²`.
    pub fn overlap_probability(&self, other: &StateVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "states of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(other.amplitudes.dotc(&self.amplitudes).norm_sqr())
    }
}

/// `|amplitude|²` per basis state.
pub fn populations(psi: &StateVector) -> Vec<(BasisState, f64)> {
    psi.sector
        .states()
        .iter()
        .zip(psi.amplitudes.iter())
        .map(|(s, a)| (s.clone(), a.norm_sqr()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_start >= t_end {
            return Err(Error::InvalidArgument(format!(
                "time grid needs t_start < t_end, got [{t_start}, {t_end}]"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidArgument("time grid needs at least one step".into()));
        }
        Ok(Self { t_start, t_end, steps })
    }

    /// `[−5τ, T + 5τ]` with the given step count.
    pub fn for_schedule(tau: f64, separation: f64, steps: usize) -> Result<Self> {
        Self::new(-WINDOW_PADDING * tau, separation + WINDOW_PADDING * tau, steps)
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / self.steps as f64
    }

    pub fn time(&self, step: usize) -> f64 {
        self.t_start + step as f64 * self.dt()
    }
}

/// Recorded states plus integration diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<StateVector>,
    /// Largest `|‖ψ‖ − 1|` seen at any recorded point, before renormalization.
    pub max_norm_drift: f64,
    /// Drift at each recorded point, aligned with `points`.
    pub norm_drift: Vec<f64>,
    pub renormalizations: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> &StateVector {
        self.points.last().expect("trajectory always records the final state")
    }
}

/// Integrate from `psi0` over `grid`, recording every `record_every` steps
/// (the initial and final states are always recorded).
pub fn propagate(
    config: &ModelConfig,
    psi0: &StateVector,
    grid: &TimeGrid,
    record_every: usize,
) -> Result<Trajectory> {
    if psi0.dim() != config.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state has {} amplitudes, sector has {}",
            psi0.dim(),
            config.dim()
        )));
    }
    let initial_drift = (psi0.norm() - 1.0).abs();
    if initial_drift > RENORM_THRESHOLD {
        return Err(Error::InvalidArgument(format!(
            "initial state is not normalized (|‖ψ‖ − 1| = {initial_drift:.3e})"
        )));
    }
    let record_every = record_every.max(1);
    let dt = grid.dt();
    let n = config.dim();
    let minus_i = Complex64::new(0.0, -1.0);

    let mut psi = psi0.amplitudes.clone();
    let mut k = [DVector::zeros(n), DVector::zeros(n), DVector::zeros(n), DVector::zeros(n)];
    let mut tmp = DVector::<Complex64>::zeros(n);

    let mut points = vec![StateVector { sector: config.sector().clone(), amplitudes: psi.clone(), t: grid.t_start }];
    let mut norm_drift = vec![initial_drift];
    let mut max_norm_drift = initial_drift;
    let mut renormalizations = 0;

    for step in 0..grid.steps {
        let t = grid.time(step);
        let c0 = config.couplings_at(t);
        let c_mid = config.couplings_at(t + 0.5 * dt);
        let c1 = config.couplings_at(t + dt);

        config.apply(&c0, &psi, &mut k[0]);
        k[0] *= minus_i;
        tmp.copy_from(&psi);
        tmp.axpy(Complex64::new(0.5 * dt, 0.0), &k[0], Complex64::new(1.0, 0.0));
        config.apply(&c_mid, &tmp, &mut k[1]);
        k[1] *= minus_i;
        tmp.copy_from(&psi);
        tmp.axpy(Complex64::new(0.5 * dt, 0.0), &k[1], Complex64::new(1.0, 0.0));
        config.apply(&c_mid, &tmp, &mut k[2]);
        k[2] *= minus_i;
        tmp.copy_from(&psi);
        tmp.axpy(Complex64::new(dt, 0.0), &k[2], Complex64::new(1.0, 0.0));
        config.apply(&c1, &tmp, &mut k[3]);
        k[3] *= minus_i;

        let w = dt / 6.0;
        for i in 0..n {
            psi[i] += (k[0][i] + k[1][i] * 2.0 + k[2][i] * 2.0 + k[3][i]) * w;
        }

        let last = step + 1 == grid.steps;
        if (step + 1) % record_every == 0 || last {
            let t_now = if last { grid.t_end } else { grid.time(step + 1) };
            let drift = (psi.norm() - 1.0).abs();
            if drift > DRIFT_LIMIT {
                return Err(Error::IntegrationFailure { drift, t: t_now, limit: DRIFT_LIMIT });
            }
            max_norm_drift = max_norm_drift.max(drift);
            if drift > RENORM_THRESHOLD {
                psi.unscale_mut(psi.norm());
                renormalizations += 1;
            }
            norm_drift.push(drift);
            points.push(StateVector { sector: config.sector().clone(), amplitudes: psi.clone(), t: t_now });
        }
    }

    Ok(Trajectory { points, max_norm_drift, norm_drift, renormalizations })
}
