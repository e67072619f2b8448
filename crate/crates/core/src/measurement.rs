//! Projective measurements on frozen dark states.
//!
//! Every projector here is rank one on the subsystems it measures
//! (`|n_a,n_b⟩`, `|l⟩_k`, `|ψ±⟩_k = (|g⟩ ± |f⟩)_k/√2`, or a tensor product
//! of those), so the unmeasured remainder of `P|ψ⟩` is a pure state on the
//! surviving subsystems.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;


use crate::basis::{atom_name, AtomLevel};
use crate::error::{Error, Result};
use crate::reduced::{Ket, Layout, ReducedState};

/// Outcomes with probability below this are reported as impossible.
pub const PROBABILITY_FLOOR: f64 = 1e-14;
const NORMALIZATION_TOLERANCE: f64 = 1e-9;
const BASIS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projector {
    /// Both field modes in the Fock state `|n_a, n_b⟩`.
    FieldNumber { n_a: u32, n_b: u32 },
    /// Atom `atom` in level `g` or `f`.
    AtomLevel { atom: usize, level: AtomLevel },
    /// Atom `atom` in `(|g⟩ ± |f⟩)/√2`.
    AtomSuperposition { atom: usize, sign: Sign },
    /// Joint outcome on disjoint subsystems.
    Product(Vec<Projector>),
}

/// Subsystems touched by a projector.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Measured {
    atoms: BTreeSet<usize>,
    field: bool,
}

impl Projector {
    pub fn field(n_a: u32, n_b: u32) -> Self {
        Projector::FieldNumber { n_a, n_b }
    }

    pub fn atom_level(atom: usize, level: AtomLevel) -> Result<Self> {
        if level == AtomLevel::E {
            return Err(Error::InvalidProjector("atomic projections are restricted to g and f".into()));
        }
        Ok(Projector::AtomLevel { atom, level })
    }

    pub fn superposition(atom: usize, sign: Sign) -> Self {
        Projector::AtomSuperposition { atom, sign }
    }

    /// `|ψ^a⟩_A ⊗ |ψ^b⟩_B` on atoms 0 and 1.
    pub fn qutrit_pair(sign_a: Sign, sign_b: Sign) -> Self {
        Projector::Product(vec![Self::superposition(0, sign_a), Self::superposition(1, sign_b)])
    }

    /// Short name used in branch tables, e.g. `field_na1_nb1`, `atomB_g`,
    /// `atomA_plus.atomB_minus`.
    pub fn name(&self) -> String {
        match self {
            Projector::FieldNumber { n_a, n_b } => format!("field_na{n_a}_nb{n_b}"),
            Projector::AtomLevel { atom, level } => format!("atom{}_{}", atom_name(*atom), level),
            Projector::AtomSuperposition { atom, sign } => {
                let s = match sign {
                    Sign::Plus => "plus",
                    Sign::Minus => "minus",
                };
                format!("atom{}_{}", atom_name(*atom), s)
            }
            Projector::Product(parts) => parts.iter().map(Projector::name).collect::<Vec<_>>().join("."),
        }
    }

    fn measured(&self) -> Result<Measured> {
        let mut m = Measured::default();
        self.collect_measured(&mut m)?;
        Ok(m)
    }

    fn collect_measured(&self, m: &mut Measured) -> Result<()> {
        match self {
            Projector::FieldNumber { .. } => {
                if std::mem::replace(&mut m.field, true) {
                    return Err(Error::InvalidProjector("field measured twice".into()));
                }
            }
            Projector::AtomLevel { atom, level } => {
                if *level == AtomLevel::E {
                    return Err(Error::InvalidProjector("atomic projections are restricted to g and f".into()));
                }
                if !m.atoms.insert(*atom) {
                    return Err(Error::InvalidProjector(format!("atom {atom} measured twice")));
                }
            }
            Projector::AtomSuperposition { atom, .. } => {
                if !m.atoms.insert(*atom) {
                    return Err(Error::InvalidProjector(format!("atom {atom} measured twice")));
                }
            }
            Projector::Product(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidProjector("empty product".into()));
                }
                for p in parts {
                    p.collect_measured(m)?;
                }
            }
        }
        Ok(())
    }

    /// `⟨v| (measured part of ket)`, where `P = |v⟩⟨v| ⊗ 1`.
    fn coefficient(&self, layout: &Layout, ket: &Ket) -> f64 {
        match self {
            Projector::FieldNumber { n_a, n_b } => {
                if ket.field == Some((*n_a, *n_b)) {
                    1.0
                } else {
                    0.0
                }
            }
            Projector::AtomLevel { atom, level } => {
                let pos = layout.position(*atom).expect("validated against layout");
                if ket.atoms[pos] == *level {
                    1.0
                } else {
                    0.0
                }
            }
            Projector::AtomSuperposition { atom, sign } => {
                let pos = layout.position(*atom).expect("validated against layout");
                match ket.atoms[pos] {
                    AtomLevel::G => FRAC_1_SQRT_2,
                    AtomLevel::F => sign.factor() * FRAC_1_SQRT_2,
                    AtomLevel::E => 0.0,
                }
            }
            Projector::Product(parts) => parts.iter().map(|p| p.coefficient(layout, ket)).product(),
        }
    }

    fn check_layout(&self, layout: &Layout) -> Result<Measured> {
        let m = self.measured()?;
        if m.field && !layout.field {
            return Err(Error::InvalidProjector("state has no field left to measure".into()));
        }
        for a in &m.atoms {
            if layout.position(*a).is_none() {
                return Err(Error::InvalidProjector(format!("atom {} is not part of the state", atom_name(*a))));
            }
        }
        Ok(m)
    }
}

impl fmt::Display for Projector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Projector::FieldNumber { n_a, n_b } => write!(f, "|{n_a},{n_b}⟩"),
            Projector::AtomLevel { atom, level } => write!(f, "|{}⟩_{}", level, atom_name(*atom)),
            Projector::AtomSuperposition { atom, sign } => {
                write!(f, "|ψ{}⟩_{}", sign.symbol(), atom_name(*atom))
            }
            Projector::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "⊗")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub probability: f64,
    /// Normalized state of the unmeasured subsystems.
    pub post_state: ReducedState,
}

fn check_normalized(psi: &ReducedState) -> Result<()> {
    let drift = (psi.norm() - 1.0).abs();
    if drift > NORMALIZATION_TOLERANCE {
        return Err(Error::InvalidArgument(format!("state is not normalized (|‖ψ‖ − 1| = {drift:.3e})")));
    }
    Ok(())
}

/// Remainder of `P|ψ⟩` on the unmeasured subsystems, unnormalized.
fn reduce(psi: &ReducedState, proj: &Projector) -> Result<ReducedState> {
    let layout = psi.layout();
    let measured = proj.check_layout(layout)?;
    let keep: Vec<usize> =
        (0..layout.atoms.len()).filter(|&i| !measured.atoms.contains(&layout.atoms[i])).collect();
    let rest = Layout {
        atoms: keep.iter().map(|&i| layout.atoms[i]).collect(),
        field: layout.field && !measured.field,
    };
    let keep_field = rest.field;
    let terms = psi.iter().filter_map(|(ket, amp)| {
        let c = proj.coefficient(layout, ket);
        (c != 0.0).then(|| {
            let atoms = keep.iter().map(|&i| ket.atoms[i]).collect();
            let field = if keep_field { ket.field } else { None };
            (Ket::new(atoms, field), amp * c)
        })
    });
    ReducedState::from_terms(rest, terms)
}

/// Probability of `proj` and the normalized post-measurement state of the
/// remaining subsystems.
pub fn project(psi: &ReducedState, proj: &Projector) -> Result<MeasurementOutcome> {
    check_normalized(psi)?;
    let rest = reduce(psi, proj)?;
    let probability = rest.norm().powi(2);
    if probability < PROBABILITY_FLOOR {
        return Err(Error::ImpossibleOutcome { probability });
    }
    Ok(MeasurementOutcome { probability, post_state: rest.normalized()? })
}

/// `P|ψ⟩/‖P|ψ⟩‖` kept on the full layout (measured subsystems included).
pub fn collapse(psi: &ReducedState, proj: &Projector) -> Result<(f64, ReducedState)> {
    check_normalized(psi)?;
    proj.check_layout(psi.layout())?;
    // P = |v⟩⟨v| ⊗ 1, so P|ψ⟩ = |v⟩ ⊗ (reduced remainder)
    let rest = reduce(psi, proj)?;
    let probability = rest.norm().powi(2);
    if probability < PROBABILITY_FLOOR {
        return Err(Error::ImpossibleOutcome { probability });
    }
    let rest = rest.normalized()?;
    let measured_kets = projector_vector(proj);
    let layout = psi.layout().clone();
    let mut terms = Vec::new();
    for (mket, vcoef) in &measured_kets {
        for (rket, amp) in rest.iter() {
            terms.push((merge_ket(&layout, proj, mket, rket), amp * *vcoef));
        }
    }
    Ok((probability, ReducedState::from_terms(layout, terms)?))
}

/// The measured-subsystem vector `|v⟩` as `(partial ket, coefficient)` pairs;
/// a partial ket lists levels of measured atoms (ascending label) and the
/// field if measured.
fn projector_vector(proj: &Projector) -> Vec<(Ket, f64)> {
    let measured = proj.measured().expect("validated");
    let atoms: Vec<usize> = measured.atoms.iter().copied().collect();
    let mut field_values = vec![None];
    if measured.field {
        field_values = vec![Some(find_field(proj).expect("field is measured"))];
    }
    let mut out = Vec::new();
    let n = atoms.len();
    let sub = Layout { atoms: atoms.clone(), field: measured.field };
    let choices = [AtomLevel::G, AtomLevel::F];
    for mask in 0..(1usize << n) {
        let levels: Vec<AtomLevel> = (0..n).map(|i| choices[(mask >> i) & 1]).collect();
        for &field in &field_values {
            let ket = Ket::new(levels.clone(), field);
            let c = proj.coefficient(&sub, &ket);
            if c != 0.0 {
                out.push((ket, c));
            }
        }
    }
    out
}

fn find_field(proj: &Projector) -> Option<(u32, u32)> {
    match proj {
        Projector::FieldNumber { n_a, n_b } => Some((*n_a, *n_b)),
        Projector::Product(parts) => parts.iter().find_map(find_field),
        _ => None,
    }
}

fn merge_ket(layout: &Layout, proj: &Projector, measured: &Ket, rest: &Ket) -> Ket {
    let m = proj.measured().expect("validated");
    let measured_atoms: Vec<usize> = m.atoms.iter().copied().collect();
    let mut mi = 0;
    let mut ri = 0;
    let mut atoms = Vec::with_capacity(layout.atoms.len());
    for label in &layout.atoms {
        if measured_atoms.contains(label) {
            atoms.push(measured.atoms[mi]);
            mi += 1;
        } else {
            atoms.push(rest.atoms[ri]);
            ri += 1;
        }
    }
    let field = if m.field { measured.field } else { rest.field };
    Ket::new(atoms, field)
}

/// Project atoms 0 and 1 onto `|ψ^a⟩_A |ψ^b⟩_B`, leaving the two-mode field.
pub fn project_qutrit(psi: &ReducedState, sign_a: Sign, sign_b: Sign) -> Result<MeasurementOutcome> {
    if psi.layout().atoms != [0, 1] || !psi.layout().field {
        return Err(Error::InvalidArgument("qutrit projection needs a two-atom state with its field".into()));
    }
    project(psi, &Projector::qutrit_pair(sign_a, sign_b))
}

/// Probabilities of every outcome of an orthonormal, complete basis of
/// projectors on a common set of subsystems. Completeness is checked on the
/// local values the state actually occupies.
pub fn outcome_distribution(psi: &ReducedState, basis: &[Projector]) -> Result<Vec<(Projector, f64)>> {
    check_normalized(psi)?;
    let first = basis.first().ok_or_else(|| Error::InvalidBasis("empty basis".into()))?;
    let measured = first.check_layout(psi.layout())?;
    for p in &basis[1..] {
        if p.check_layout(psi.layout())? != measured {
            return Err(Error::InvalidBasis("projectors act on different subsystems".into()));
        }
    }

    // local values occupied by the state on the measured subsystems
    let layout = psi.layout();
    let positions: Vec<usize> =
        measured.atoms.iter().map(|a| layout.position(*a).expect("checked")).collect();
    let mut support: BTreeSet<Ket> = BTreeSet::new();
    for (ket, amp) in psi.iter() {
        // rounding-level weight (e.g. on `e` in a numeric dark state) is not occupation
        if amp.norm_sqr() < PROBABILITY_FLOOR {
            continue;
        }
        let atoms = positions.iter().map(|&p| ket.atoms[p]).collect();
        let field = if measured.field { ket.field } else { None };
        support.insert(Ket::new(atoms, field));
    }
    let sub = Layout { atoms: measured.atoms.iter().copied().collect(), field: measured.field };

    // per-subsystem local values, so completeness covers their full product
    let mut local_levels: Vec<BTreeSet<AtomLevel>> = vec![BTreeSet::new(); positions.len()];
    let mut fields: BTreeSet<(u32, u32)> = BTreeSet::new();
    for k in &support {
        for (i, l) in k.atoms.iter().enumerate() {
            local_levels[i].insert(*l);
        }
        if let Some(f) = k.field {
            fields.insert(f);
        }
    }
    for p in basis {
        if let Some(f) = find_field(p) {
            fields.insert(f);
        }
    }
    let mut space: Vec<Ket> = vec![Ket::new(Vec::new(), None)];
    for levels in &local_levels {
        space = space
            .into_iter()
            .flat_map(|k| {
                levels.iter().map(move |l| {
                    let mut a = k.atoms.clone();
                    a.push(*l);
                    Ket::new(a, None)
                })
            })
            .collect();
    }
    if measured.field {
        space = space
            .into_iter()
            .flat_map(|k| fields.iter().map(move |f| Ket::new(k.atoms.clone(), Some(*f))))
            .collect();
    }
    // an occupied `e` level gets zero weight from every projector, so the
    // completeness check below rejects it
    let vectors: Vec<Vec<f64>> =
        basis.iter().map(|p| space.iter().map(|k| p.coefficient(&sub, k)).collect()).collect();
    for (i, vi) in vectors.iter().enumerate() {
        for (j, vj) in vectors.iter().enumerate() {
            let dot: f64 = vi.iter().zip(vj).map(|(a, b)| a * b).sum();
            if i != j && dot.abs() > BASIS_TOLERANCE {
                return Err(Error::InvalidBasis(format!("{} and {} overlap ({dot:.3e})", basis[i], basis[j])));
            }
        }
    }
    for (col, k) in space.iter().enumerate() {
        let weight: f64 = vectors.iter().map(|v| v[col] * v[col]).sum();
        if (weight - 1.0).abs() > BASIS_TOLERANCE {
            return Err(Error::InvalidBasis(format!(
                "local state {} is covered with weight {weight:.6}",
                sub.ket_label(k)
            )));
        }
    }

    basis
        .iter()
        .map(|p| Ok((p.clone(), reduce(psi, p)?.norm().powi(2))))
        .collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisState, Sector};
    use crate::dark::{dark_state_closed_form_2atom, DarkStateCoefficients, TwoAtomCouplings};
    use std::sync::Arc;
    use AtomLevel::*;

    fn frozen(g1: f64, g2: f64, n: u32, mu: u32) -> ReducedState {
        let sector = Arc::new(Sector::build(&BasisState::ground(2, n, mu)).unwrap());
        let psi = dark_state_closed_form_2atom(TwoAtomCouplings::symmetric(g1, g2), n, mu, sector).unwrap();
        ReducedState::from(&psi)
    }

    /// Brute-force amplitude lookup on the frozen state with the closed-form
    /// sign restored (alpha > 0).
    fn sign_of_alpha(psi: &ReducedState, n: u32, mu: u32) -> f64 {
        psi.amplitude(&Ket::new(vec![G, G], Some((n, mu)))).re.signum()
    }

    #[test]
    fn field_projection_gives_epr() {
        let psi = frozen(0.8, 1.3, 2, 1);
        let out = project(&psi, &Projector::field(1, 2)).unwrap();
        let k = DarkStateCoefficients::symmetric(0.8, 1.3, 2, 1).unwrap();
        assert!((out.probability - 2.0 * k.gamma.powi(2) / k.norm.powi(2)).abs() < 1e-14);
        let h = FRAC_1_SQRT_2;
        assert_eq!(out.post_state.len(), 2);
        for (_, a) in out.post_state.iter() {
            assert!((a.norm() - h).abs() < 1e-14);
        }
        let gf = out.post_state.amplitude(&Ket::new(vec![G, F], None));
        let fg = out.post_state.amplitude(&Ket::new(vec![F, G], None));
        assert!((gf - fg).norm() < 1e-14);
    }

    #[test]
    fn atom_level_branches_match_ghz_equivalents() {
        let (g1, g2, n, mu) = (1.1, 0.6, 3, 0);
        let psi = frozen(g1, g2, n, mu);
        let k = DarkStateCoefficients::symmetric(g1, g2, n, mu).unwrap();
        let s = sign_of_alpha(&psi, n, mu);

        let g = project(&psi, &Projector::atom_level(1, G).unwrap()).unwrap();
        assert!((g.probability.sqrt() - k.c_prime() / k.norm).abs() < 1e-14);
        let a = g.post_state.amplitude(&Ket::new(vec![G], Some((n, mu))));
        let c = g.post_state.amplitude(&Ket::new(vec![F], Some((n - 1, mu + 1))));
        assert!((s * a.re - k.alpha / k.c_prime()).abs() < 1e-14);
        assert!((s * c.re - k.gamma / k.c_prime()).abs() < 1e-14);

        let f = project(&psi, &Projector::atom_level(1, F).unwrap()).unwrap();
        assert!((f.probability.sqrt() - k.c_double_prime() / k.norm).abs() < 1e-14);
        let b = f.post_state.amplitude(&Ket::new(vec![F], Some((n - 2, mu + 2))));
        let c = f.post_state.amplitude(&Ket::new(vec![G], Some((n - 1, mu + 1))));
        assert!((s * b.re - k.beta / k.c_double_prime()).abs() < 1e-14);
        assert!((s * c.re - k.gamma / k.c_double_prime()).abs() < 1e-14);
    }

    #[test]
    fn qutrit_branches_equal_couplings() {
        let psi = frozen(1.0, 1.0, 2, 0);
        let s = sign_of_alpha(&psi, 2, 0);
        // alpha = beta = sqrt2, gamma = -2: (|2,0> + |0,2> - 2 sqrt2 |1,1>)/sqrt10
        let pp = project_qutrit(&psi, Sign::Plus, Sign::Plus).unwrap();
        let amps: Vec<f64> = pp.post_state.amplitudes.iter().map(|a| s * a.re).collect();
        let r10 = 10f64.sqrt();
        let expect = [1.0 / r10, -2.0 * 2f64.sqrt() / r10, 1.0 / r10];
        for (a, e) in amps.iter().zip(expect) {
            assert!((a - e).abs() < 1e-14, "{amps:?}");
        }
        let pm = project_qutrit(&psi, Sign::Plus, Sign::Minus).unwrap();
        let amp = |n_a, n_b| s * pm.post_state.amplitude(&Ket::field(n_a, n_b)).re;
        assert!((amp(2, 0) - FRAC_1_SQRT_2).abs() < 1e-14);
        assert!(amp(1, 1).abs() < 1e-14);
        assert!((amp(0, 2) + FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn single_photon_qutrit_branch_is_a_qubit() {
        let psi = frozen(0.7, 1.4, 1, 0);
        let k = DarkStateCoefficients::symmetric(0.7, 1.4, 1, 0).unwrap();
        let out = project_qutrit(&psi, Sign::Plus, Sign::Plus).unwrap();
        assert_eq!(out.post_state.len(), 2);
        let s = sign_of_alpha(&psi, 1, 0);
        let a = out.post_state.amplitude(&Ket::field(1, 0)).re * s;
        let c = out.post_state.amplitude(&Ket::field(0, 1)).re * s;
        assert!((a - k.alpha / k.qutrit_norm()).abs() < 1e-14);
        assert!((c + 2.0 * k.gamma.abs() / k.qutrit_norm()).abs() < 1e-14);
    }

    #[test]
    fn distribution_over_atom_b() {
        let psi = frozen(0.9, 1.7, 2, 2);
        let k = DarkStateCoefficients::symmetric(0.9, 1.7, 2, 2).unwrap();
        let basis = [Projector::atom_level(1, G).unwrap(), Projector::atom_level(1, F).unwrap()];
        let d = outcome_distribution(&psi, &basis).unwrap();
        let p2 = k.norm.powi(2);
        assert!((d[0].1 - (k.alpha.powi(2) + k.gamma.powi(2)) / p2).abs() < 1e-14);
        assert!((d[1].1 - (k.beta.powi(2) + k.gamma.powi(2)) / p2).abs() < 1e-14);
    }

    #[test]
    fn four_branch_distribution_sums_to_one() {
        let psi = frozen(1.2, 0.5, 3, 1);
        let basis: Vec<Projector> = [Sign::Plus, Sign::Minus]
            .iter()
            .flat_map(|&a| [Sign::Plus, Sign::Minus].map(move |b| Projector::qutrit_pair(a, b)))
            .collect();
        let d = outcome_distribution(&psi, &basis).unwrap();
        let total: f64 = d.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incomplete_and_overlapping_bases_rejected() {
        let psi = frozen(1.0, 1.0, 2, 0);
        let incomplete = [Projector::atom_level(1, G).unwrap()];
        assert!(matches!(outcome_distribution(&psi, &incomplete), Err(Error::InvalidBasis(_))));
        let overlapping = [Projector::atom_level(1, G).unwrap(), Projector::superposition(1, Sign::Plus)];
        assert!(matches!(outcome_distribution(&psi, &overlapping), Err(Error::InvalidBasis(_))));
        let mixed = [Projector::atom_level(0, G).unwrap(), Projector::atom_level(1, F).unwrap()];
        assert!(matches!(outcome_distribution(&psi, &mixed), Err(Error::InvalidBasis(_))));
    }

    #[test]
    fn impossible_outcome_is_an_error() {
        let psi = frozen(1.0, 1.0, 1, 0);
        // n = 1: no |ff⟩ component, so both atoms in f never happens
        let both_f = Projector::Product(vec![
            Projector::atom_level(0, F).unwrap(),
            Projector::atom_level(1, F).unwrap(),
        ]);
        assert!(matches!(project(&psi, &both_f), Err(Error::ImpossibleOutcome { .. })));
    }

    #[test]
    fn invalid_projectors() {
        assert!(Projector::atom_level(0, E).is_err());
        let psi = frozen(1.0, 1.0, 2, 0);
        assert!(project(&psi, &Projector::atom_level(5, G).unwrap()).is_err());
        let twice = Projector::Product(vec![Projector::field(1, 1), Projector::field(2, 0)]);
        assert!(matches!(project(&psi, &twice), Err(Error::InvalidProjector(_))));
    }

    #[test]
    fn collapse_is_idempotent() {
        let psi = frozen(0.9, 1.1, 2, 0);
        for proj in [
            Projector::atom_level(1, G).unwrap(),
            Projector::field(1, 1),
            Projector::qutrit_pair(Sign::Minus, Sign::Plus),
        ] {
            let first = project(&psi, &proj).unwrap();
            let (p, collapsed) = collapse(&psi, &proj).unwrap();
            assert!((p - first.probability).abs() < 1e-15);
            assert!((collapsed.norm() - 1.0).abs() < 1e-14);
            let again = project(&collapsed, &proj).unwrap();
            assert!((again.probability - 1.0).abs() < 1e-12);
            assert!((&again.post_state.amplitudes - &first.post_state.amplitudes).norm() < 1e-12);
        }
    }

    #[test]
    fn names() {
        assert_eq!(Projector::field(1, 1).name(), "field_na1_nb1");
        assert_eq!(Projector::atom_level(1, G).unwrap().name(), "atomB_g");
        assert_eq!(Projector::qutrit_pair(Sign::Plus, Sign::Minus).name(), "atomA_plus.atomB_minus");
    }
}
