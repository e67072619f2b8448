//! Basis states of N three-level atoms in two cavity modes and the
//! dynamically closed sector reachable from an initial occupation.
//!
//! The pump leg `|e⟩⟨g| a` and the Stokes leg `|e⟩⟨f| b` conserve two
//! charges, `K_a = n_a + N_e + N_f` and `K_b = n_b − N_f`. A [`Sector`] is the
//! breadth-first closure of the initial state under every coupling term, so
//! every member shares the initial charges.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Default upper bound on sector size.
pub const DEFAULT_SECTOR_CAP: usize = 100_000;

/// Internal level of a Λ-type atom. The derived order fixes the canonical
/// basis layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomLevel {
    G,
    E,
    F,
}

impl AtomLevel {
    pub const ALL: [AtomLevel; 3] = [AtomLevel::G, AtomLevel::E, AtomLevel::F];

    pub fn symbol(self) -> char {
        match self {
            AtomLevel::G => 'g',
            AtomLevel::E => 'e',
            AtomLevel::F => 'f',
        }
    }
}

impl fmt::Display for AtomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Display name of atom `k`: `A`, `B`, `C`, ... then `A26`, `A27`, ...
pub fn atom_name(k: usize) -> String {
    if k < 26 {
        char::from(b'A' + k as u8).to_string()
    } else {
        format!("A{k}")
    }
}

/// Occupation record `|l_1, …, l_N; n_a, n_b⟩`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisState {
    pub atoms: Vec<AtomLevel>,
    pub n_a: u32,
    pub n_b: u32,
}

impl BasisState {
    pub fn new(atoms: Vec<AtomLevel>, n_a: u32, n_b: u32) -> Self {
        Self { atoms, n_a, n_b }
    }

    /// All atoms in `g`, with the given photon numbers.
    pub fn ground(n_atoms: usize, n_a: u32, n_b: u32) -> Self {
        Self::new(vec![AtomLevel::G; n_atoms], n_a, n_b)
    }

    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn count(&self, level: AtomLevel) -> usize {
        self.atoms.iter().filter(|&&l| l == level).count()
    }

    pub fn has_excited(&self) -> bool {
        self.atoms.contains(&AtomLevel::E)
    }

    /// Label used in CSV headers, e.g. `gA.fB.na0.nb1`.
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self
            .atoms
            .iter()
            .enumerate()
            .map(|(k, l)| format!("{}{}", l, atom_name(k)))
            .collect();
        parts.push(format!("na{}", self.n_a));
        parts.push(format!("nb{}", self.n_b));
        parts.join(".")
    }

    /// Every state reached by a single application of one coupling term
    /// (or its conjugate), paired with the term that produced it.
    pub fn neighbours(&self) -> Vec<(BasisState, Coupling)> {
        let mut out = Vec::new();
        for (k, &level) in self.atoms.iter().enumerate() {
            match level {
                AtomLevel::G => {
                    if self.n_a > 0 {
                        let s = self.with_atom(k, AtomLevel::E, self.n_a - 1, self.n_b);
                        out.push((s, Coupling::pump(k, self.n_a)));
                    }
                }
                AtomLevel::E => {
                    let s = self.with_atom(k, AtomLevel::G, self.n_a + 1, self.n_b);
                    out.push((s, Coupling::pump(k, self.n_a + 1)));
                    let s = self.with_atom(k, AtomLevel::F, self.n_a, self.n_b + 1);
                    out.push((s, Coupling::stokes(k, self.n_b + 1)));
                }
                AtomLevel::F => {
                    if self.n_b > 0 {
                        let s = self.with_atom(k, AtomLevel::E, self.n_a, self.n_b - 1);
                        out.push((s, Coupling::stokes(k, self.n_b)));
                    }
                }
            }
        }
        out
    }

    fn with_atom(&self, k: usize, level: AtomLevel, n_a: u32, n_b: u32) -> BasisState {
        let mut atoms = self.atoms.clone();
        atoms[k] = level;
        BasisState { atoms, n_a, n_b }
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (k, l) in self.atoms.iter().enumerate() {
            write!(f, "{}_{},", l, atom_name(k))?;
        }
        write!(f, "{},{}⟩", self.n_a, self.n_b)
    }
}

/// Which cavity leg a matrix element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Leg {
    /// `g ↔ e` on mode a.
    Pump,
    /// `e ↔ f` on mode b.
    Stokes,
}

/// One coupling term connecting two basis states: the leg, the atom it acts
/// on, and the bosonic factor `√n` carried by the matrix element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub leg: Leg,
    pub atom: usize,
    pub bosonic: f64,
}

impl Coupling {
    fn pump(atom: usize, photons: u32) -> Self {
        Self { leg: Leg::Pump, atom, bosonic: f64::from(photons).sqrt() }
    }

    fn stokes(atom: usize, photons: u32) -> Self {
        Self { leg: Leg::Stokes, atom, bosonic: f64::from(photons).sqrt() }
    }
}

/// `(K_a, K_b)` of a basis state.
pub fn conserved_charges(s: &BasisState) -> (i64, i64) {
    let n_e = s.count(AtomLevel::E) as i64;
    let n_f = s.count(AtomLevel::F) as i64;
    (i64::from(s.n_a) + n_e + n_f, i64::from(s.n_b) - n_f)
}

/// Shorthand for [`Sector::build`] with the default capacity.
pub fn build_sector(initial: &BasisState) -> Result<Sector> {
    Sector::build(initial)
}

/// Canonically ordered, closed set of basis states sharing two conserved
/// charges. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
    charge_a: i64,
    charge_b: i64,
}

impl Sector {
    pub fn build(initial: &BasisState) -> Result<Self> {
        Self::build_with_cap(initial, DEFAULT_SECTOR_CAP)
    }

    pub fn build_with_cap(initial: &BasisState, cap: usize) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(initial.clone());
        queue.push_back(initial.clone());
        while let Some(s) = queue.pop_front() {
            for (next, _) in s.neighbours() {
                if seen.contains(&next) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(Error::Capacity { cap, reached: seen.len() + 1 });
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }

        let mut states: Vec<BasisState> = seen.into_iter().collect();
        states.sort();
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let (charge_a, charge_b) = conserved_charges(initial);
        Ok(Self { states, index, charge_a, charge_b })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn n_atoms(&self) -> usize {
        self.states[0].n_atoms()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &BasisState {
        &self.states[i]
    }

    pub fn index_of(&self, s: &BasisState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn charges(&self) -> (i64, i64) {
        (self.charge_a, self.charge_b)
    }

    pub fn contains(&self, s: &BasisState) -> bool {
        self.index.contains_key(s)
    }

    /// Indices of states with at least one atom in `e`.
    pub fn excited_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.states[i].has_excited()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AtomLevel::*;

    fn st(atoms: &[AtomLevel], n_a: u32, n_b: u32) -> BasisState {
        BasisState::new(atoms.to_vec(), n_a, n_b)
    }

    #[test]
    fn charges_examples() {
        assert_eq!(conserved_charges(&st(&[G, G], 1, 0)), (1, 0));
        assert_eq!(conserved_charges(&st(&[G, F], 0, 1)), (1, 0));
        assert_eq!(conserved_charges(&st(&[E, E], 0, 0)), (2, 0));
    }

    #[test]
    fn two_atoms_two_photons_has_nine_states() {
        let sector = Sector::build(&st(&[G, G], 2, 0)).unwrap();
        // kets of the two-atom expansion with n = 2, mu = 0
        let expected = [
            st(&[G, G], 2, 0),
            st(&[G, E], 1, 0),
            st(&[G, F], 1, 1),
            st(&[E, F], 0, 1),
            st(&[E, E], 0, 0),
            st(&[F, F], 0, 2),
            st(&[F, E], 0, 1),
            st(&[F, G], 1, 1),
            st(&[E, G], 1, 0),
        ];
        assert_eq!(sector.len(), 9);
        for s in &expected {
            assert!(sector.contains(s), "missing {s}");
        }
    }

    #[test]
    fn single_photon_two_atoms() {
        let sector = Sector::build(&st(&[G, G], 1, 0)).unwrap();
        let expected = vec![
            st(&[G, G], 1, 0),
            st(&[G, E], 0, 0),
            st(&[G, F], 0, 1),
            st(&[E, G], 0, 0),
            st(&[F, G], 0, 1),
        ];
        assert_eq!(sector.states(), expected.as_slice());
    }

    #[test]
    fn single_photon_three_atoms() {
        let sector = Sector::build(&st(&[G, G, G], 1, 0)).unwrap();
        assert_eq!(sector.len(), 7);
        assert_eq!(sector.states().iter().filter(|s| s.count(E) == 1 && s.n_a == 0).count(), 3);
        assert_eq!(sector.states().iter().filter(|s| s.count(F) == 1 && s.n_b == 1).count(), 3);
    }

    #[test]
    fn capacity_error() {
        let err = Sector::build_with_cap(&BasisState::ground(4, 4, 0), 10).unwrap_err();
        assert!(matches!(err, Error::Capacity { cap: 10, .. }));
    }

    #[test]
    fn label_format() {
        assert_eq!(st(&[G, F], 0, 1).label(), "gA.fB.na0.nb1");
    }

    #[test]
    fn neighbour_factors() {
        let s = st(&[E, G], 1, 0);
        let n = s.neighbours();
        let (to_g, c) = n.iter().find(|(t, _)| t.atoms == vec![G, G]).unwrap();
        assert_eq!(to_g.n_a, 2);
        assert!((c.bosonic - 2f64.sqrt()).abs() < 1e-15);
        let (_, c) = n.iter().find(|(t, _)| t.atoms == vec![F, G]).unwrap();
        assert_eq!(c.leg, Leg::Stokes);
        assert_eq!(c.bosonic, 1.0);
    }
}
