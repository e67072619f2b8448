//! Zero-energy eigenstates of the interaction Hamiltonian.
//!
//! For two atoms the dark state has a closed form on the four kets with no
//! atom in `e`. For any N the null space is found by full Hermitian
//! eigendecomposition. At `Δ = 0` and `n ≥ 2` the Hamiltonian is bipartite
//! (even vs. odd number of excited atoms) and its null space also contains
//! states with `e` weight; [`dark_subspace`] keeps only the `e`-free part,
//! which is what adiabatic following and freezing use.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::basis::{AtomLevel, BasisState, Sector};
use crate::dynamics::StateVector;
use crate::error::{Error, Result};
use crate::model::{Couplings, ModelConfig};

/// Null eigenvalues are those with `|λ| ≤ NULL_TOLERANCE · ‖H‖`.
pub const NULL_TOLERANCE: f64 = 1e-10;
/// Null vectors whose `e`-block has a singular value above this are bright.
const EXCITED_WEIGHT_TOLERANCE: f64 = 1e-6;
/// Components within this relative distance of the largest magnitude tie
/// for the phase reference; the first one in sector order wins.
const PHASE_TIE: f64 = 1e-9;

/// Coefficients of the two-atom dark state under symmetric couplings
/// `g_1A = g_1B = g1`, `g_2A = g_2B = g2`:
///
/// `|ψ₀⟩ = [α|gg;n,μ⟩ + β|ff;n−2,μ+2⟩ + γ(|gf;n−1,μ+1⟩ + |fg;n−1,μ+1⟩)] / P`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkStateCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `P = √(α² + β² + 2γ²)`.
    pub norm: f64,
}

impl DarkStateCoefficients {
    pub fn symmetric(g1: f64, g2: f64, n: u32, mu: u32) -> Result<Self> {
        let (n, mu) = (f64::from(n), f64::from(mu));
        let alpha = g2 * g2 * ((mu + 1.0) * (mu + 2.0)).sqrt();
        let beta = g1 * g1 * (n * (n - 1.0)).max(0.0).sqrt();
        let gamma = -g1 * g2 * (n * (mu + 2.0)).sqrt();
        let norm = (alpha * alpha + beta * beta + 2.0 * gamma * gamma).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::UndefinedDarkState);
        }
        Ok(Self { alpha, beta, gamma, norm })
    }

    /// `C' = √(α² + γ²)`, norm of the branch with the measured atom in `g`.
    pub fn c_prime(&self) -> f64 {
        self.alpha.hypot(self.gamma)
    }

    /// `C'' = √(β² + γ²)`, norm of the branch with the measured atom in `f`.
    pub fn c_double_prime(&self) -> f64 {
        self.beta.hypot(self.gamma)
    }

    /// `P' = √(α² + β² + 4γ²)`.
    pub fn qutrit_norm(&self) -> f64 {
        (self.alpha.powi(2) + self.beta.powi(2) + 4.0 * self.gamma.powi(2)).sqrt()
    }
}

/// Individual couplings of the two atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAtomCouplings {
    pub g1a: f64,
    pub g1b: f64,
    pub g2a: f64,
    pub g2b: f64,
}

impl TwoAtomCouplings {
    pub fn symmetric(g1: f64, g2: f64) -> Self {
        Self { g1a: g1, g1b: g1, g2a: g2, g2b: g2 }
    }

    pub fn from_couplings(c: &Couplings) -> Result<Self> {
        if c.n_atoms() != 2 {
            return Err(Error::AtomCountMismatch { expected: 2, got: c.n_atoms() });
        }
        Ok(Self { g1a: c.pump[0], g1b: c.pump[1], g2a: c.stokes[0], g2b: c.stokes[1] })
    }
}

/// Closed-form two-atom dark state, embedded in `sector` (which must be
/// built from `|g,g; n, μ⟩`) and phase-aligned.
pub fn dark_state_closed_form_2atom(
    g: TwoAtomCouplings,
    n: u32,
    mu: u32,
    sector: Arc<Sector>,
) -> Result<StateVector> {
    use AtomLevel::{F, G};
    if n == 0 {
        return Err(Error::InvalidArgument("closed form needs n ≥ 1".into()));
    }
    if sector.n_atoms() != 2 {
        return Err(Error::AtomCountMismatch { expected: 2, got: sector.n_atoms() });
    }
    let initial = BasisState::ground(2, n, mu);
    if !sector.contains(&initial) {
        return Err(Error::InvalidArgument(format!("sector does not contain {initial}")));
    }

    let (nf, muf) = (f64::from(n), f64::from(mu));
    let mut terms = vec![
        (initial, g.g2a * g.g2b * ((muf + 1.0) * (muf + 2.0)).sqrt()),
        (BasisState::new(vec![G, F], n - 1, mu + 1), -g.g1b * g.g2a * (nf * (muf + 2.0)).sqrt()),
        (BasisState::new(vec![F, G], n - 1, mu + 1), -g.g1a * g.g2b * (nf * (muf + 2.0)).sqrt()),
    ];
    if n >= 2 {
        terms.push((
            BasisState::new(vec![F, F], n - 2, mu + 2),
            g.g1a * g.g1b * (nf * (nf - 1.0)).sqrt(),
        ));
    }
    let norm = terms.iter().map(|(_, c)| c * c).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::UndefinedDarkState);
    }

    let mut amplitudes = DVector::zeros(sector.len());
    for (s, c) in terms {
        let i = sector.index_of(&s).expect("dark-state kets lie in the sector");
        amplitudes[i] = Complex64::new(c / norm, 0.0);
    }
    align_phase(&mut amplitudes);
    StateVector::new(sector, amplitudes, 0.0)
}

/// Multiply by a global phase so the largest-magnitude component is real
/// and positive.
pub fn align_phase(v: &mut DVector<Complex64>) {
    let max = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .find(|c| c.norm() >= max * (1.0 - PHASE_TIE))
        .copied()
        .expect("some component attains the maximum");
    let phase = pivot.conj() / pivot.norm();
    v.apply(|c| *c *= phase);
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(h: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(h.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Spectral norm of a Hermitian matrix.
pub fn spectral_norm(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Orthonormal basis (as columns) of `{v : ‖Hv‖ small}` from the eigenvalues
/// with `|λ| ≤ tol`.
fn null_basis(h: &DMatrix<Complex64>, tol: Option<f64>) -> DMatrix<Complex64> {
    let (values, vectors) = hermitian_eigen(h);
    let tol = tol.unwrap_or(NULL_TOLERANCE * spectral_norm(&values));
    let cols: Vec<usize> = (0..values.len()).filter(|&i| values[i].abs() <= tol).collect();
    DMatrix::from_fn(h.nrows(), cols.len(), |r, c| vectors[(r, cols[c])])
}

fn columns_as_states(basis: &DMatrix<Complex64>, sector: &Arc<Sector>, t: f64) -> Vec<StateVector> {
    basis
        .column_iter()
        .map(|col| {
            let mut v: DVector<Complex64> = col.into_owned();
            align_phase(&mut v);
            StateVector::new(sector.clone(), v, t).expect("column length equals sector size")
        })
        .collect()
}

/// Orthonormal basis of the null eigenspace of `H(t)`. `tol` defaults to
/// `1e−10 · ‖H(t)‖`.
pub fn dark_states_numeric(config: &ModelConfig, t: f64, tol: Option<f64>) -> Vec<StateVector> {
    let h = config.hamiltonian_at(t);
    columns_as_states(&null_basis(&h, tol), config.sector(), t)
}

/// Null eigenstates of the Hamiltonian for fixed couplings.
pub fn dark_states_for(config: &ModelConfig, couplings: &Couplings) -> Result<Vec<StateVector>> {
    let h = config.hamiltonian_with(couplings)?;
    Ok(columns_as_states(&null_basis(&h, None), config.sector(), 0.0))
}

/// The part of the null space with no amplitude on any state containing an
/// atom in `e`.
pub fn dark_subspace_for(config: &ModelConfig, couplings: &Couplings, t: f64) -> Result<Vec<StateVector>> {
    let h = config.hamiltonian_with(couplings)?;
    let null = null_basis(&h, None);
    if null.ncols() == 0 {
        return Ok(Vec::new());
    }
    let excited = config.sector().excited_indices();
    let block = DMatrix::from_fn(excited.len(), null.ncols(), |r, c| null[(excited[r], c)]);
    let gram = block.adjoint() * &block;
    let (values, vectors) = hermitian_eigen(&gram);
    let keep: Vec<usize> = (0..values.len())
        .filter(|&i| values[i] <= EXCITED_WEIGHT_TOLERANCE * EXCITED_WEIGHT_TOLERANCE)
        .collect();
    let mix = DMatrix::from_fn(null.ncols(), keep.len(), |r, c| vectors[(r, keep[c])]);
    Ok(columns_as_states(&(null * mix), config.sector(), t))
}

pub fn dark_subspace(config: &ModelConfig, t: f64) -> Vec<StateVector> {
    dark_subspace_for(config, &config.couplings_at(t), t)
        .expect("schedule couplings match the sector atom count")
}

/// State left behind when the couplings are switched off suddenly at
/// `t_freeze`: the unique `e`-free dark state for the couplings at that time.
pub fn freeze_state(config: &ModelConfig, t_freeze: f64) -> Result<StateVector> {
    freeze_with(config, &config.couplings_at(t_freeze), t_freeze)
}

pub fn freeze_with(config: &ModelConfig, couplings: &Couplings, t: f64) -> Result<StateVector> {
    let mut states = dark_subspace_for(config, couplings, t)?;
    match states.len() {
        1 => Ok(states.remove(0)),
        dimension => Err(Error::AmbiguousDarkSpace { dimension }),
    }
}

/// Smallest nonzero `|λ|` of `H(t)`: the gap protecting adiabatic following.
/// `None` when every eigenvalue is null.
pub fn spectral_gap(config: &ModelConfig, t: f64) -> Option<f64> {
    let (values, _) = hermitian_eigen(&config.hamiltonian_at(t));
    let tol = NULL_TOLERANCE * spectral_norm(&values);
    values.iter().map(|x| x.abs()).filter(|&x| x > tol).min_by(f64::total_cmp)
}
