//! Fidelity against named target states, reduced density matrices and
//! two-qubit concurrence.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::AtomLevel;
use crate::dark::{hermitian_eigen, DarkStateCoefficients};
use crate::error::{Error, Result};
use crate::reduced::{Ket, Layout, ReducedState};

const TRACE_TOLERANCE: f64 = 1e-12;
const POSITIVITY_TOLERANCE: f64 = 1e-12;

/// Target states of the preparation protocols.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetState {
    /// `(|g_A f_B⟩ + |f_A g_B⟩)/√2`, optionally times a field ket.
    Epr2 { field: Option<(u32, u32)> },
    /// `N^{−1/2} Σ_k |g…f_k…g⟩`, optionally times a field ket.
    W { n_atoms: usize, field: Option<(u32, u32)> },
    /// `(α|g;n,μ⟩ + γ|f;n−1,μ+1⟩)/C'` on the atom `remaining` and the field.
    GhzEquivalentPrime { coefficients: DarkStateCoefficients, n: u32, mu: u32, remaining: usize },
    /// `(β|f;n−2,μ+2⟩ + γ|g;n−1,μ+1⟩)/C''` on the atom `remaining` and the field.
    GhzEquivalentDoublePrime { coefficients: DarkStateCoefficients, n: u32, mu: u32, remaining: usize },
    /// `(α|n,μ⟩ + β|n−2,μ+2⟩ + 2γ|n−1,μ+1⟩)/P'` on the field.
    QutritPlus { coefficients: DarkStateCoefficients, n: u32, mu: u32 },
    /// `(α|n,μ⟩ + β|n−2,μ+2⟩ − 2γ|n−1,μ+1⟩)/P'` on the field.
    QutritMinus { coefficients: DarkStateCoefficients, n: u32, mu: u32 },
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl TargetState {
    /// Normalized expansion on the target's natural layout.
    pub fn expand(&self) -> Result<ReducedState> {
        use AtomLevel::{F, G};
        let state = match self {
            TargetState::Epr2 { field } => ReducedState::from_terms(
                Layout { atoms: vec![0, 1], field: field.is_some() },
                [
                    (Ket::new(vec![G, F], *field), real(FRAC_1_SQRT_2)),
                    (Ket::new(vec![F, G], *field), real(FRAC_1_SQRT_2)),
                ],
            )?,
            TargetState::W { n_atoms, field } => {
                if *n_atoms == 0 {
                    return Err(Error::InvalidArgument("W state needs at least one atom".into()));
                }
                let amp = real(1.0 / (*n_atoms as f64).sqrt());
                let terms = (0..*n_atoms).map(|k| {
                    let mut atoms = vec![G; *n_atoms];
                    atoms[k] = F;
                    (Ket::new(atoms, *field), amp)
                });
                ReducedState::from_terms(Layout { atoms: (0..*n_atoms).collect(), field: field.is_some() }, terms)?
            }
            TargetState::GhzEquivalentPrime { coefficients: k, n, mu, remaining } => {
                let terms = vec![(Ket::new(vec![G], Some((*n, *mu))), real(k.alpha))]
                    .into_iter()
                    .chain(lowered(*n, 1).map(|n1| (Ket::new(vec![F], Some((n1, mu + 1))), real(k.gamma))));
                ReducedState::from_terms(Layout { atoms: vec![*remaining], field: true }, terms)?
            }
            TargetState::GhzEquivalentDoublePrime { coefficients: k, n, mu, remaining } => {
                let terms = lowered(*n, 2)
                    .map(|n2| (Ket::new(vec![F], Some((n2, mu + 2))), real(k.beta)))
                    .into_iter()
                    .chain(lowered(*n, 1).map(|n1| (Ket::new(vec![G], Some((n1, mu + 1))), real(k.gamma))));
                ReducedState::from_terms(Layout { atoms: vec![*remaining], field: true }, terms)?
            }
            TargetState::QutritPlus { coefficients, n, mu } => qutrit(coefficients, *n, *mu, 1.0)?,
            TargetState::QutritMinus { coefficients, n, mu } => qutrit(coefficients, *n, *mu, -1.0)?,
        };
        // drop structurally zero legs (e.g. beta at n = 1) before normalizing
        let terms: Vec<(Ket, Complex64)> =
            state.iter().filter(|(_, a)| a.norm() > 0.0).map(|(k, a)| (k.clone(), a)).collect();
        ReducedState::from_terms(state.layout().clone(), terms)?.normalized()
    }
}

fn lowered(n: u32, by: u32) -> Option<u32> {
    n.checked_sub(by)
}

fn qutrit(k: &DarkStateCoefficients, n: u32, mu: u32, sign: f64) -> Result<ReducedState> {
    let mut terms = vec![(Ket::field(n, mu), real(k.alpha))];
    if let Some(n1) = lowered(n, 1) {
        terms.push((Ket::field(n1, mu + 1), real(sign * 2.0 * k.gamma)));
    }
    if let Some(n2) = lowered(n, 2) {
        terms.push((Ket::field(n2, mu + 2), real(k.beta)));
    }
    ReducedState::from_terms(Layout { atoms: vec![], field: true }, terms)
}

/// `|⟨target|ψ⟩|²`.
pub fn fidelity(psi: &ReducedState, target: &TargetState) -> Result<f64> {
    overlap_fidelity(psi, &target.expand()?)
}

/// `|⟨b|a⟩|²` for two states on the same layout.
pub fn overlap_fidelity(a: &ReducedState, b: &ReducedState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// A subsystem that can be kept in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subsystem {
    Atom(usize),
    ModeA,
    ModeB,
}

/// Local basis used for kept atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomSpace {
    /// `{g, e, f}`.
    ThreeLevel,
    /// `{g, f}`; weight on `e` is discarded and reported.
    Qubit,
}

impl AtomSpace {
    fn levels(self) -> Vec<AtomLevel> {
        match self {
            AtomSpace::ThreeLevel => AtomLevel::ALL.to_vec(),
            AtomSpace::Qubit => vec![AtomLevel::G, AtomLevel::F],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocalValue {
    Level(AtomLevel),
    Photons(u32),
}

/// A tensor factor of a density matrix and its local basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub subsystem: Subsystem,
    pub basis: Vec<LocalValue>,
}

/// Density matrix on the row-major product of its factors' local bases.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub factors: Vec<Factor>,
    pub matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates shape, Hermiticity, unit trace and positivity.
    pub fn new(factors: Vec<Factor>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim: usize = factors.iter().map(|f| f.basis.len()).product();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} matrix for a product space of dimension {dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = (&matrix - matrix.adjoint()).norm();
        if herm > TRACE_TOLERANCE {
            return Err(Error::NonPhysical(format!("not Hermitian (‖ρ − ρ†‖ = {herm:.3e})")));
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::NonPhysical(format!("trace {trace} ≠ 1")));
        }
        let rho = Self { factors, matrix };
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -POSITIVITY_TOLERANCE {
            return Err(Error::NonPhysical(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).0
    }

    /// Trace out every factor not listed in `keep`; kept factors stay in
    /// their current order.
    pub fn partial_trace(&self, keep: &[Subsystem]) -> Result<DensityMatrix> {
        for s in keep {
            if !self.factors.iter().any(|f| f.subsystem == *s) {
                return Err(Error::InvalidSubsystem(format!("{s:?} is not a factor of this density matrix")));
            }
        }
        let dims: Vec<usize> = self.factors.iter().map(|f| f.basis.len()).collect();
        let kept: Vec<usize> = (0..self.factors.len()).filter(|&i| keep.contains(&self.factors[i].subsystem)).collect();
        let factors: Vec<Factor> = kept.iter().map(|&i| self.factors[i].clone()).collect();
        let kept_dim: usize = kept.iter().map(|&i| dims[i]).product();

        let split = |mut idx: usize| -> (usize, Vec<usize>) {
            let mut digits = vec![0; dims.len()];
            for f in (0..dims.len()).rev() {
                digits[f] = idx % dims[f];
                idx /= dims[f];
            }
            let mut k = 0;
            let mut env = Vec::new();
            for (f, &d) in digits.iter().enumerate() {
                if kept.contains(&f) {
                    k = k * dims[f] + d;
                } else {
                    env.push(d);
                }
            }
            (k, env)
        };
        let parts: Vec<(usize, Vec<usize>)> = (0..self.dim()).map(split).collect();
        let mut out = DMatrix::<Complex64>::zeros(kept_dim, kept_dim);
        for (i, (ki, ei)) in parts.iter().enumerate() {
            for (j, (kj, ej)) in parts.iter().enumerate() {
                if ei == ej {
                    out[(*ki, *kj)] += self.matrix[(i, j)];
                }
            }
        }
        DensityMatrix::new(factors, out)
    }
}

/// Reduced density matrix together with the weight dropped by a qubit
/// restriction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    pub rho: DensityMatrix,
    /// Probability on kept atoms in `e` (zero for [`AtomSpace::ThreeLevel`]).
    pub discarded: f64,
}

type EnvironmentKey = (Vec<AtomLevel>, Option<u32>, Option<u32>);

/// Reduced density matrix of a pure state over `keep` (in the given order).
/// Photon-number bases span the values the state occupies.
pub fn partial_trace(psi: &ReducedState, keep: &[Subsystem], space: AtomSpace) -> Result<ReducedDensity> {
    let layout = psi.layout();
    let mut seen = Vec::new();
    for s in keep {
        if seen.contains(s) {
            return Err(Error::InvalidSubsystem(format!("{s:?} listed twice")));
        }
        seen.push(*s);
        let present = match s {
            Subsystem::Atom(k) => layout.position(*k).is_some(),
            Subsystem::ModeA | Subsystem::ModeB => layout.field,
        };
        if !present {
            return Err(Error::InvalidSubsystem(format!("{s:?} is not part of the state")));
        }
    }

    let mut photons_a: Vec<u32> = psi.kets().iter().filter_map(|k| k.field.map(|f| f.0)).collect();
    let mut photons_b: Vec<u32> = psi.kets().iter().filter_map(|k| k.field.map(|f| f.1)).collect();
    photons_a.sort_unstable();
    photons_a.dedup();
    photons_b.sort_unstable();
    photons_b.dedup();

    let factors: Vec<Factor> = keep
        .iter()
        .map(|s| Factor {
            subsystem: *s,
            basis: match s {
                Subsystem::Atom(_) => space.levels().into_iter().map(LocalValue::Level).collect(),
                Subsystem::ModeA => photons_a.iter().map(|&n| LocalValue::Photons(n)).collect(),
                Subsystem::ModeB => photons_b.iter().map(|&n| LocalValue::Photons(n)).collect(),
            },
        })
        .collect();
    let dim: usize = factors.iter().map(|f| f.basis.len()).product();

    let local = |s: &Subsystem, ket: &Ket| -> LocalValue {
        match s {
            Subsystem::Atom(k) => LocalValue::Level(ket.atoms[layout.position(*k).expect("checked")]),
            Subsystem::ModeA => LocalValue::Photons(ket.field.expect("checked").0),
            Subsystem::ModeB => LocalValue::Photons(ket.field.expect("checked").1),
        }
    };

    // environment = everything not kept
    let traced_atoms: Vec<usize> =
        (0..layout.atoms.len()).filter(|&i| !keep.contains(&Subsystem::Atom(layout.atoms[i]))).collect();
    let keep_a = keep.contains(&Subsystem::ModeA);
    let keep_b = keep.contains(&Subsystem::ModeB);

    // environment ket (traced atoms, traced photon numbers) -> kept index and amplitude
    let mut groups: BTreeMap<EnvironmentKey, Vec<(usize, Complex64)>> = BTreeMap::new();
    let mut discarded = 0.0;
    let mut total = 0.0;
    'kets: for (ket, amp) in psi.iter() {
        total += amp.norm_sqr();
        let mut index = 0;
        for f in &factors {
            let v = local(&f.subsystem, ket);
            match f.basis.iter().position(|b| *b == v) {
                Some(p) => index = index * f.basis.len() + p,
                None => {
                    discarded += amp.norm_sqr();
                    continue 'kets;
                }
            }
        }
        let env_atoms = traced_atoms.iter().map(|&i| ket.atoms[i]).collect();
        let env_a = if keep_a { None } else { ket.field.map(|f| f.0) };
        let env_b = if keep_b { None } else { ket.field.map(|f| f.1) };
        groups.entry((env_atoms, env_a, env_b)).or_default().push((index, amp));
    }
    if total == 0.0 {
        return Err(Error::InvalidArgument("zero state".into()));
    }

    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for entries in groups.values() {
        for &(i, a) in entries {
            for &(j, b) in entries {
                m[(i, j)] += a * b.conj();
            }
        }
    }
    let kept_weight = total - discarded;
    if kept_weight <= 1e-14 * total {
        return Err(Error::InvalidSubsystem("no weight left in the kept qubit subspace".into()));
    }
    m.unscale_mut(kept_weight);
    let rho = DensityMatrix::new(factors, m)?;
    Ok(ReducedDensity { rho, discarded: discarded / total })
}

/// `σ_y ⊗ σ_y` in the basis `|gg⟩, |gf⟩, |fg⟩, |ff⟩`.
fn spin_flip() -> DMatrix<Complex64> {
    let mut y = DMatrix::<Complex64>::zeros(4, 4);
    y[(0, 3)] = real(-1.0);
    y[(1, 2)] = real(1.0);
    y[(2, 1)] = real(1.0);
    y[(3, 0)] = real(-1.0);
    y
}

/// Spin-flip concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` of a two-qubit density
/// matrix, with `λ_i` the square roots of the eigenvalues of
/// `√ρ ρ̃ √ρ`, `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let qubit_atoms = rho.factors.len() == 2
        && rho.factors.iter().all(|f| {
            matches!(f.subsystem, Subsystem::Atom(_))
                && f.basis == [LocalValue::Level(AtomLevel::G), LocalValue::Level(AtomLevel::F)]
        });
    if !qubit_atoms {
        return Err(Error::InvalidSubsystem("concurrence needs two atoms restricted to {g, f}".into()));
    }
    concurrence_matrix(&rho.matrix)
}

pub fn concurrence_matrix(rho: &DMatrix<Complex64>) -> Result<f64> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch("concurrence needs a 4×4 matrix".into()));
    }
    let (values, vectors) = hermitian_eigen(rho);
    if let Some(&min) = values.first() {
        if min < -POSITIVITY_TOLERANCE {
            return Err(Error::NonPhysical(format!("negative eigenvalue {min:.3e}")));
        }
    }
    let sqrt_diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        values.iter().map(|v| real(v.max(0.0).sqrt())),
    ));
    let sqrt_rho = &vectors * sqrt_diag * vectors.adjoint();
    let y = spin_flip();
    let flipped = &y * rho.map(|c| c.conj()) * &y;
    let mut m = &sqrt_rho * flipped * &sqrt_rho;
    // symmetrize away rounding before the Hermitian solver
    m = (&m + m.adjoint()) * real(0.5);
    let (mut lambdas, _) = hermitian_eigen(&m);
    for l in lambdas.iter_mut() {
        *l = l.max(0.0).sqrt();
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use AtomLevel::*;

    fn two_qubit(amps: [f64; 4]) -> ReducedState {
        let kets = [vec![G, G], vec![G, F], vec![F, G], vec![F, F]];
        ReducedState::from_terms(
            Layout { atoms: vec![0, 1], field: false },
            kets.into_iter().zip(amps).map(|(a, c)| (Ket::new(a, None), real(c))),
        )
        .unwrap()
        .normalized()
        .unwrap()
    }

    /// `C = |⟨ψ|σ_y⊗σ_y|ψ*⟩|` for pure states.
    fn pure_concurrence(amps: [f64; 4]) -> f64 {
        let n: f64 = amps.iter().map(|a| a * a).sum();
        2.0 * (amps[0] * amps[3] - amps[1] * amps[2]).abs() / n
    }

    #[test]
    fn epr_target_has_unit_fidelity_with_itself() {
        let t = TargetState::Epr2 { field: Some((0, 1)) };
        let psi = t.expand().unwrap();
        assert!((fidelity(&psi, &t).unwrap() - 1.0).abs() < 1e-15);
        let mut rotated = psi.clone();
        rotated.amplitudes *= Complex64::from_polar(1.0, 0.7);
        assert!((fidelity(&rotated, &t).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fidelity_layout_mismatch() {
        let psi = TargetState::Epr2 { field: None }.expand().unwrap();
        assert!(fidelity(&psi, &TargetState::Epr2 { field: Some((0, 1)) }).is_err());
        assert!(fidelity(&psi, &TargetState::W { n_atoms: 3, field: None }).is_err());
    }

    #[test]
    fn product_state_traces_to_pure() {
        let psi = two_qubit([0.0, 1.0, 0.0, 0.0]);
        for keep in [Subsystem::Atom(0), Subsystem::Atom(1)] {
            let r = partial_trace(&psi, &[keep], AtomSpace::Qubit).unwrap();
            assert!((r.rho.purity() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn epr_reduced_is_maximally_mixed() {
        let psi = TargetState::Epr2 { field: None }.expand().unwrap();
        let r = partial_trace(&psi, &[Subsystem::Atom(0)], AtomSpace::Qubit).unwrap();
        assert!((r.rho.matrix[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((r.rho.matrix[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(r.rho.matrix[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn w3_single_trace_spectrum() {
        let psi = TargetState::W { n_atoms: 3, field: None }.expand().unwrap();
        let r = partial_trace(&psi, &[Subsystem::Atom(0), Subsystem::Atom(1)], AtomSpace::Qubit).unwrap();
        let ev = r.rho.eigenvalues();
        let nonzero: Vec<f64> = ev.into_iter().filter(|e| *e > 1e-12).collect();
        assert_eq!(nonzero.len(), 2);
        assert!((nonzero[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((nonzero[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn concurrence_of_pure_states() {
        for amps in [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.0], [0.3, 0.5, -0.2, 0.7], [0.6, 0.0, 0.8, 0.0]] {
            let psi = two_qubit(amps);
            let r = partial_trace(&psi, &[Subsystem::Atom(0), Subsystem::Atom(1)], AtomSpace::Qubit).unwrap();
            let c = concurrence(&r.rho).unwrap();
            assert!((c - pure_concurrence(amps)).abs() < 1e-7, "{amps:?}: {c}");
        }
    }

    #[test]
    fn concurrence_of_x_states() {
        // X-state oracle: C = 2 max(0, |ρ_14| − √(ρ_22 ρ_33), |ρ_23| − √(ρ_11 ρ_44))
        let cases = [(0.1, 0.4, 0.3, 0.2, 0.05, 0.3), (0.25, 0.25, 0.25, 0.25, 0.0, 0.25), (0.0, 0.5, 0.5, 0.0, 0.0, 0.5)];
        for (a, b, c, d, z14, z23) in cases {
            let mut m = DMatrix::<Complex64>::zeros(4, 4);
            for (i, v) in [a, b, c, d].into_iter().enumerate() {
                m[(i, i)] = real(v);
            }
            m[(0, 3)] = real(z14);
            m[(3, 0)] = real(z14);
            m[(1, 2)] = real(z23);
            m[(2, 1)] = real(z23);
            let oracle = 2.0 * (0.0f64).max(z14 - (b * c).sqrt()).max(z23 - (a * d).sqrt());
            let got = concurrence_matrix(&m).unwrap();
            assert!((got - oracle).abs() < 1e-7, "{got} vs {oracle}");
        }
    }

    #[test]
    fn non_physical_rejected() {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 0)] = real(1.5);
        m[(1, 1)] = real(-0.5);
        assert!(matches!(concurrence_matrix(&m), Err(Error::NonPhysical(_))));
    }

    #[test]
    fn qubit_restriction_reports_discarded_weight() {
        let psi = ReducedState::from_terms(
            Layout { atoms: vec![0], field: false },
            [(Ket::new(vec![E], None), real(0.6)), (Ket::new(vec![G], None), real(0.8))],
        )
        .unwrap();
        let r = partial_trace(&psi, &[Subsystem::Atom(0)], AtomSpace::Qubit).unwrap();
        assert!((r.discarded - 0.36).abs() < 1e-15);
        assert!((r.rho.matrix[(0, 0)].re - 1.0).abs() < 1e-15);
        let full = partial_trace(&psi, &[Subsystem::Atom(0)], AtomSpace::ThreeLevel).unwrap();
        assert_eq!(full.discarded, 0.0);
        assert_eq!(full.rho.dim(), 3);
    }

    #[test]
    fn invalid_subsystems() {
        let psi = TargetState::Epr2 { field: None }.expand().unwrap();
        assert!(partial_trace(&psi, &[Subsystem::ModeA], AtomSpace::Qubit).is_err());
        assert!(partial_trace(&psi, &[Subsystem::Atom(4)], AtomSpace::Qubit).is_err());
        assert!(partial_trace(&psi, &[Subsystem::Atom(0), Subsystem::Atom(0)], AtomSpace::Qubit).is_err());
    }

    #[test]
    fn density_partial_trace_matches_state_route() {
        let psi = TargetState::W { n_atoms: 3, field: Some((0, 1)) }.expand().unwrap();
        let keep3 = [Subsystem::Atom(0), Subsystem::Atom(1), Subsystem::Atom(2)];
        let full = partial_trace(&psi, &keep3, AtomSpace::Qubit).unwrap().rho;
        let via_rho = full.partial_trace(&[Subsystem::Atom(0), Subsystem::Atom(2)]).unwrap();
        let direct = partial_trace(&psi, &[Subsystem::Atom(0), Subsystem::Atom(2)], AtomSpace::Qubit).unwrap().rho;
        assert!((&via_rho.matrix - &direct.matrix).norm() < 1e-15);
        assert!(full.partial_trace(&[Subsystem::ModeA]).is_err());
    }

    #[test]
    fn qutrit_target_norm() {
        let k = DarkStateCoefficients::symmetric(1.0, 1.0, 2, 0).unwrap();
        let t = TargetState::QutritPlus { coefficients: k, n: 2, mu: 0 }.expand().unwrap();
        let r10 = 10f64.sqrt();
        let expect = [1.0 / r10, -2.0 * 2f64.sqrt() / r10, 1.0 / r10];
        for (a, e) in t.amplitudes.iter().zip(expect) {
            assert!((a.re - e).abs() < 1e-15);
        }
        let one = DarkStateCoefficients::symmetric(1.0, 1.0, 1, 0).unwrap();
        let q = TargetState::QutritMinus { coefficients: one, n: 1, mu: 0 }.expand().unwrap();
        assert_eq!(q.len(), 2);
    }
}
