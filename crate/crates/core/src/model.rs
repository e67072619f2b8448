//! Interaction-picture Hamiltonian on a conserved sector.
//!
//! With both legs on two-photon resonance the free evolution is removed by a
//! rotating frame, leaving the one-photon detuning `Δ` on every atom in `e`
//! plus the real couplings `g_1k(t) |e_k⟩⟨g_k| a` and `g_2k(t) |e_k⟩⟨f_k| b`
//! (and conjugates). Units: ħ = 1, time in the same unit as `tau`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{AtomLevel, Leg, Sector};
use crate::error::{Error, Result};

/// Gaussian pulse pair in counterintuitive order: the Stokes pulse `g_2`
/// peaks at `t = 0`, the pump pulse `g_1` at `t = separation`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    pub g10: f64,
    pub g20: f64,
    pub tau: f64,
    pub separation: f64,
    /// Per-atom `(pump, stokes)` multipliers; `None` means all ones.
    pub per_atom_scale: Option<Vec<(f64, f64)>>,
}

impl PulseSchedule {
    pub fn new(g10: f64, g20: f64, tau: f64, separation: f64) -> Result<Self> {
        let schedule = Self { g10, g20, tau, separation, per_atom_scale: None };
        schedule.validate()?;
        Ok(schedule)
    }

    /// Equal amplitudes `g0` on both legs.
    pub fn symmetric(g0: f64, tau: f64, separation: f64) -> Result<Self> {
        Self::new(g0, g0, tau, separation)
    }

    pub fn with_per_atom_scale(mut self, scale: Vec<(f64, f64)>) -> Result<Self> {
        self.per_atom_scale = Some(scale);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.g10, self.g20, self.tau, self.separation].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("pulse parameters must be finite".into()));
        }
        if self.tau <= 0.0 {
            return Err(Error::InvalidArgument(format!("pulse width must be > 0, got {}", self.tau)));
        }
        if self.g10 < 0.0 || self.g20 < 0.0 {
            return Err(Error::InvalidArgument("pulse amplitudes must be non-negative".into()));
        }
        if self.separation <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "pulse separation must be > 0 (Stokes before pump), got {}",
                self.separation
            )));
        }
        if let Some(scale) = &self.per_atom_scale {
            if scale.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
                return Err(Error::InvalidArgument("per-atom scales must be finite".into()));
            }
        }
        Ok(())
    }

    /// Pump envelope `g10 · exp(−(t−T)²/τ²)` before per-atom scaling.
    pub fn pump_envelope(&self, t: f64) -> f64 {
        let x = (t - self.separation) / self.tau;
        self.g10 * (-x * x).exp()
    }

    /// Stokes envelope `g20 · exp(−t²/τ²)` before per-atom scaling.
    pub fn stokes_envelope(&self, t: f64) -> f64 {
        let x = t / self.tau;
        self.g20 * (-x * x).exp()
    }

    fn scale(&self, k: usize) -> (f64, f64) {
        self.per_atom_scale.as_ref().map_or((1.0, 1.0), |s| s[k])
    }

    /// Per-atom couplings at time `t`.
    pub fn coupling_at(&self, n_atoms: usize, t: f64) -> Couplings {
        let g1 = self.pump_envelope(t);
        let g2 = self.stokes_envelope(t);
        let (pump, stokes) = (0..n_atoms)
            .map(|k| {
                let (s1, s2) = self.scale(k);
                (s1 * g1, s2 * g2)
            })
            .unzip();
        Couplings { pump, stokes }
    }
}

/// Instantaneous per-atom coupling strengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Couplings {
    pub pump: Vec<f64>,
    pub stokes: Vec<f64>,
}

impl Couplings {
    pub fn uniform(n_atoms: usize, g1: f64, g2: f64) -> Self {
        Self { pump: vec![g1; n_atoms], stokes: vec![g2; n_atoms] }
    }

    pub fn n_atoms(&self) -> usize {
        self.pump.len()
    }

    fn get(&self, leg: Leg, atom: usize) -> f64 {
        match leg {
            Leg::Pump => self.pump[atom],
            Leg::Stokes => self.stokes[atom],
        }
    }
}

/// Free function form of [`PulseSchedule::coupling_at`].
pub fn coupling_at(schedule: &PulseSchedule, n_atoms: usize, t: f64) -> Couplings {
    schedule.coupling_at(n_atoms, t)
}

/// A single off-diagonal coupling, stored once per unordered pair.
#[derive(Debug, Clone, Copy)]
struct Term {
    row: usize,
    col: usize,
    leg: Leg,
    atom: usize,
    bosonic: f64,
}

/// Detuning, pulse schedule and the sector they act on, with the coupling
/// pattern precomputed.
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub delta: f64,
    pub schedule: PulseSchedule,
    sector: Arc<Sector>,
    excited_count: Vec<f64>,
    terms: Vec<Term>,
}

impl ModelConfig {
    pub fn new(delta: f64, schedule: PulseSchedule, sector: Arc<Sector>) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::InvalidArgument("detuning must be finite".into()));
        }
        schedule.validate()?;
        let n_atoms = sector.n_atoms();
        if let Some(scale) = &schedule.per_atom_scale {
            if scale.len() != n_atoms {
                return Err(Error::AtomCountMismatch { expected: n_atoms, got: scale.len() });
            }
        }

        let excited_count =
            sector.states().iter().map(|s| s.count(AtomLevel::E) as f64).collect();
        let mut terms = Vec::new();
        for (col, s) in sector.states().iter().enumerate() {
            for (next, c) in s.neighbours() {
                let row = sector
                    .index_of(&next)
                    .expect("sector is closed under the coupling terms");
                if row < col {
                    terms.push(Term { row, col, leg: c.leg, atom: c.atom, bosonic: c.bosonic });
                }
            }
        }
        Ok(Self { delta, schedule, sector, excited_count, terms })
    }

    pub fn sector(&self) -> &Arc<Sector> {
        &self.sector
    }

    pub fn dim(&self) -> usize {
        self.sector.len()
    }

    pub fn n_atoms(&self) -> usize {
        self.sector.n_atoms()
    }

    pub fn couplings_at(&self, t: f64) -> Couplings {
        self.schedule.coupling_at(self.n_atoms(), t)
    }

    fn check_couplings(&self, c: &Couplings) -> Result<()> {
        if c.pump.len() != self.n_atoms() || c.stokes.len() != self.n_atoms() {
            return Err(Error::AtomCountMismatch {
                expected: self.n_atoms(),
                got: c.pump.len().max(c.stokes.len()),
            });
        }
        Ok(())
    }

    /// Dense Hamiltonian for fixed couplings.
    pub fn hamiltonian_with(&self, couplings: &Couplings) -> Result<DMatrix<Complex64>> {
        self.check_couplings(couplings)?;
        let n = self.dim();
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        for (i, &ne) in self.excited_count.iter().enumerate() {
            h[(i, i)] = Complex64::new(self.delta * ne, 0.0);
        }
        for term in &self.terms {
            let v = Complex64::new(couplings.get(term.leg, term.atom) * term.bosonic, 0.0);
            h[(term.row, term.col)] += v;
            h[(term.col, term.row)] += v.conj();
        }
        Ok(h)
    }

    pub fn hamiltonian_at(&self, t: f64) -> DMatrix<Complex64> {
        self.hamiltonian_with(&self.couplings_at(t))
            .expect("schedule couplings match the sector atom count")
    }

    /// `out = H(couplings) · psi` without forming the dense matrix.
    pub fn apply(&self, couplings: &Couplings, psi: &DVector<Complex64>, out: &mut DVector<Complex64>) {
        for (i, &ne) in self.excited_count.iter().enumerate() {
            out[i] = psi[i] * (self.delta * ne);
        }
        for term in &self.terms {
            let g = couplings.get(term.leg, term.atom) * term.bosonic;
            out[term.row] += psi[term.col] * g;
            out[term.col] += psi[term.row] * g;
        }
    }
}

/// Free function form of [`ModelConfig::hamiltonian_at`].
pub fn hamiltonian_at(config: &ModelConfig, t: f64) -> DMatrix<Complex64> {
    config.hamiltonian_at(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{conserved_charges, AtomLevel::*, BasisState};

    fn config(n_atoms: usize, n: u32, mu: u32, delta: f64) -> ModelConfig {
        let sector = Arc::new(Sector::build(&BasisState::ground(n_atoms, n, mu)).unwrap());
        ModelConfig::new(delta, PulseSchedule::symmetric(15.0, 1.0, 4.0 / 3.0).unwrap(), sector)
            .unwrap()
    }

    #[test]
    fn couplings_at_pulse_centres() {
        let s = PulseSchedule::symmetric(15.0, 1.0, 4.0 / 3.0).unwrap();
        let c = s.coupling_at(2, 0.0);
        assert_eq!(c.stokes, vec![15.0, 15.0]);
        assert!((c.pump[0] - 15.0 * (-16.0f64 / 9.0).exp()).abs() < 1e-14);
        let c = s.coupling_at(2, 4.0 / 3.0);
        assert_eq!(c.pump[1], 15.0);
        assert!((c.stokes[0] - 15.0 * (-16.0f64 / 9.0).exp()).abs() < 1e-14);
        assert!((c.stokes[0] - 2.535).abs() < 1e-3);
        let far = s.coupling_at(1, 50.0);
        assert!(far.pump[0] < 1e-300 && far.stokes[0] < 1e-300);
        let far = s.coupling_at(1, -50.0);
        assert!(far.pump[0] < 1e-300 && far.stokes[0] < 1e-300);
    }

    #[test]
    fn schedule_validation() {
        assert!(PulseSchedule::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(PulseSchedule::new(-1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PulseSchedule::new(1.0, 1.0, 1.0, -1.0).is_err());
        assert!(PulseSchedule::new(1.0, 1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn zero_couplings_zero_matrix() {
        let c = config(2, 1, 0, 0.0);
        let h = c.hamiltonian_with(&Couplings::uniform(2, 0.0, 0.0)).unwrap();
        assert!(h.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn pump_element_single_photon() {
        let c = config(2, 1, 0, 0.0);
        let h = c.hamiltonian_with(&Couplings::uniform(2, 0.7, 0.3)).unwrap();
        let s = c.sector();
        let gg = s.index_of(&BasisState::new(vec![G, G], 1, 0)).unwrap();
        let ge = s.index_of(&BasisState::new(vec![G, E], 0, 0)).unwrap();
        assert_eq!(h[(ge, gg)], Complex64::new(0.7, 0.0));
    }

    #[test]
    fn stokes_element_two_photons() {
        let c = config(2, 2, 0, 0.0);
        let h = c.hamiltonian_with(&Couplings::uniform(2, 0.7, 0.3)).unwrap();
        let s = c.sector();
        let ge = s.index_of(&BasisState::new(vec![G, E], 1, 0)).unwrap();
        let gf = s.index_of(&BasisState::new(vec![G, F], 1, 1)).unwrap();
        assert_eq!(h[(gf, ge)], Complex64::new(0.3, 0.0));
        assert_eq!(h[(ge, gf)], Complex64::new(0.3, 0.0));
    }

    #[test]
    fn detuning_counts_excited_atoms() {
        let c = config(2, 2, 0, 1.5);
        let h = c.hamiltonian_with(&Couplings::uniform(2, 0.0, 0.0)).unwrap();
        let s = c.sector();
        let ee = s.index_of(&BasisState::new(vec![E, E], 0, 0)).unwrap();
        let ef = s.index_of(&BasisState::new(vec![E, F], 0, 1)).unwrap();
        assert_eq!(h[(ee, ee)].re, 3.0);
        assert_eq!(h[(ef, ef)].re, 1.5);
    }

    #[test]
    fn per_atom_scale_length_checked() {
        let sector = Arc::new(Sector::build(&BasisState::ground(3, 1, 0)).unwrap());
        let sched = PulseSchedule::symmetric(1.0, 1.0, 1.0)
            .unwrap()
            .with_per_atom_scale(vec![(1.0, 1.0); 2])
            .unwrap();
        let err = ModelConfig::new(0.0, sched, sector).unwrap_err();
        assert_eq!(err, Error::AtomCountMismatch { expected: 3, got: 2 });
    }

    #[test]
    fn mismatched_couplings_rejected() {
        let c = config(2, 1, 0, 0.0);
        assert!(c.hamiltonian_with(&Couplings::uniform(3, 1.0, 1.0)).is_err());
    }

    #[test]
    fn hermitian_and_charge_preserving() {
        let c = config(3, 3, 1, 2.0);
        for &t in &[-2.0, 0.0, 0.5, 1.0, 3.0] {
            let h = c.hamiltonian_at(t);
            let scale = h.norm().max(1.0);
            assert!((&h - h.adjoint()).norm() <= 1e-12 * scale);
            for (i, si) in c.sector().states().iter().enumerate() {
                for (j, sj) in c.sector().states().iter().enumerate() {
                    if h[(i, j)].norm() > 0.0 {
                        assert_eq!(conserved_charges(si), conserved_charges(sj));
                    }
                }
            }
        }
    }

    #[test]
    fn apply_matches_dense() {
        let c = config(3, 2, 0, -1.0);
        let cp = c.couplings_at(0.4);
        let h = c.hamiltonian_with(&cp).unwrap();
        let psi = DVector::from_fn(c.dim(), |i, _| Complex64::new(i as f64 * 0.1, 1.0 - i as f64 * 0.05));
        let mut out = DVector::zeros(c.dim());
        c.apply(&cp, &psi, &mut out);
        assert!((&h * &psi - out).norm() < 1e-12);
    }
}
