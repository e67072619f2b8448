//! Pure states over a subset of the subsystems (some atoms, with or without
//! the two-mode field), as left behind by projective measurements.
//!
//! Atoms keep their original labels. Kets are ordered by atom levels, then
//! by `n_b` ascending (`n_a` descending), so the field qutrit of two atoms
//! reads `(|n,μ⟩, |n−1,μ+1⟩, |n−2,μ+2⟩)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::basis::{atom_name, AtomLevel};
use crate::dynamics::StateVector;
use crate::error::{Error, Result};

/// A product ket over the remaining subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ket {
    pub atoms: Vec<AtomLevel>,
    pub field: Option<(u32, u32)>,
}

impl Ket {
    pub fn new(atoms: Vec<AtomLevel>, field: Option<(u32, u32)>) -> Self {
        Self { atoms, field }
    }

    pub fn field(n_a: u32, n_b: u32) -> Self {
        Self { atoms: Vec::new(), field: Some((n_a, n_b)) }
    }
}

impl Ord for Ket {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |k: &Ket| k.field.map(|(a, b)| (b, std::cmp::Reverse(a)));
        self.atoms.cmp(&other.atoms).then_with(|| key(self).cmp(&key(other)))
    }
}

impl PartialOrd for Ket {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which subsystems a [`ReducedState`] describes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    /// Original labels of the atoms still present, ascending.
    pub atoms: Vec<usize>,
    pub field: bool,
}

impl Layout {
    pub fn position(&self, atom: usize) -> Option<usize> {
        self.atoms.iter().position(|&a| a == atom)
    }

    pub fn ket_label(&self, ket: &Ket) -> String {
        let mut parts: Vec<String> = self
            .atoms
            .iter()
            .zip(&ket.atoms)
            .map(|(&k, l)| format!("{}{}", l, atom_name(k)))
            .collect();
        if let Some((a, b)) = ket.field {
            parts.push(format!("na{a}"));
            parts.push(format!("nb{b}"));
        }
        if parts.is_empty() {
            "vac".into()
        } else {
            parts.join(".")
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    layout: Layout,
    kets: Vec<Ket>,
    pub amplitudes: DVector<Complex64>,
}

impl ReducedState {
    /// Collect `(ket, amplitude)` pairs, summing repeated kets. Not normalized.
    pub fn from_terms(layout: Layout, terms: impl IntoIterator<Item = (Ket, Complex64)>) -> Result<Self> {
        let mut sorted = layout.atoms.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != layout.atoms {
            return Err(Error::InvalidSubsystem("atom labels must be ascending and distinct".into()));
        }
        let mut acc: BTreeMap<Ket, Complex64> = BTreeMap::new();
        for (ket, amp) in terms {
            if ket.atoms.len() != layout.atoms.len() || ket.field.is_some() != layout.field {
                return Err(Error::DimensionMismatch(format!(
                    "ket with {} atoms and field {:?} does not fit the layout",
                    ket.atoms.len(),
                    ket.field
                )));
            }
            *acc.entry(ket).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        let (kets, amps): (Vec<Ket>, Vec<Complex64>) = acc.into_iter().unzip();
        Ok(Self { layout, kets, amplitudes: DVector::from_vec(amps) })
    }

    pub fn from_state_vector(psi: &StateVector) -> Self {
        let n_atoms = psi.sector().n_atoms();
        let layout = Layout { atoms: (0..n_atoms).collect(), field: true };
        let terms = psi
            .sector()
            .states()
            .iter()
            .zip(psi.amplitudes.iter())
            .map(|(s, &a)| (Ket::new(s.atoms.clone(), Some((s.n_a, s.n_b))), a));
        Self::from_terms(layout, terms).expect("sector kets fit the full layout")
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn kets(&self) -> &[Ket] {
        &self.kets
    }

    pub fn len(&self) -> usize {
        self.kets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ket, Complex64)> {
        self.kets.iter().zip(self.amplitudes.iter().copied())
    }

    pub fn amplitude(&self, ket: &Ket) -> Complex64 {
        self.kets
            .binary_search(ket)
            .map_or(Complex64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        self.amplitudes.unscale_mut(n);
        Ok(self)
    }

    /// `⟨other|self⟩`; layouts must agree.
    pub fn inner(&self, other: &ReducedState) -> Result<Complex64> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch(format!(
                "layouts differ: {:?} vs {:?}",
                self.layout, other.layout
            )));
        }
        Ok(other.iter().map(|(k, b)| b.conj() * self.amplitude(k)).sum())
    }

    /// `(label, amplitude)` per ket, e.g. `("gA.na1.nb1", 0.7)`.
    pub fn labelled(&self) -> Vec<(String, Complex64)> {
        self.iter().map(|(k, a)| (self.layout.ket_label(k), a)).collect()
    }
}

impl From<&StateVector> for ReducedState {
    fn from(psi: &StateVector) -> Self {
        Self::from_state_vector(psi)
    }
}
