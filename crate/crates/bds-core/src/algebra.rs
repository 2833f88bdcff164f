//! The powerset algebra over the atom set: elements, ideals, ultrafilters.
//!
//! Elements are just finite sets of atom indices. The algebra structure is
//! union / intersection / relative complement; `≤` is inclusion. Because the
//! algebra is the full powerset of a finite atom set, the filter axioms
//! collapse: every ultrafilter is the principal filter of a single atom
//! (exhaustively checked in the tests here, since the Stone-duality modules
//! lean on this identification everywhere).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::BdsError;
use crate::system::{Atom, Bds};

/// An element of the algebra: a set of atom indices, kept sorted.
///
/// Comparison, hashing, and iteration order are all canonical, so sets are
/// directly usable as map keys and serialize deterministically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AtomSet(BTreeSet<usize>);

impl AtomSet {
    pub fn empty() -> Self {
        AtomSet::default()
    }

    pub fn singleton(u: usize) -> Self {
        AtomSet(BTreeSet::from([u]))
    }

    /// The unit of the algebra over `n` atoms.
    pub fn full(n: usize) -> Self {
        AtomSet((0..n).collect())
    }

    pub fn from_iter(atoms: impl IntoIterator<Item = usize>) -> Self {
        AtomSet(atoms.into_iter().collect())
    }

    /// Decode a bitmask over at most 64 atoms.
    pub fn from_mask(mask: u64) -> Self {
        AtomSet((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    /// Encode as a bitmask; requires every index `< 64`.
    pub fn to_mask(&self) -> u64 {
        let mut mask = 0u64;
        for &u in &self.0 {
            assert!(u < 64, "atom index {u} does not fit a 64-bit mask");
            mask |= 1 << u;
        }
        mask
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.0.contains(&u)
    }

    pub fn insert(&mut self, u: usize) -> bool {
        self.0.insert(u)
    }

    pub fn remove(&mut self, u: usize) -> bool {
        self.0.remove(&u)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Smallest atom index in the set. Named `first` rather than `min` so the
    /// derived `Ord::min` cannot shadow it on owned receivers.
    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        AtomSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        AtomSet(self.0.intersection(&other.0).copied().collect())
    }

    /// Relative complement `self \ other`.
    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        AtomSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &AtomSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Complement inside the universe of `n` atoms.
    pub fn complement_in(&self, n: usize) -> AtomSet {
        AtomSet((0..n).filter(|u| !self.0.contains(u)).collect())
    }

    /// All subsets, smallest masks first. Caller guards the size.
    pub fn subsets(&self) -> Vec<AtomSet> {
        let atoms: Vec<usize> = self.iter().collect();
        assert!(atoms.len() <= crate::MAX_ENUM_ATOMS, "subset enumeration over {} atoms", atoms.len());
        (0u64..(1 << atoms.len()))
            .map(|mask| {
                AtomSet::from_iter(
                    atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &u)| u),
                )
            })
            .collect()
    }
}

impl fmt::Display for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, u) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for AtomSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        AtomSet(iter.into_iter().collect())
    }
}

/// The four basic algebra operations on a checked pair of elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetOps {
    pub union: AtomSet,
    pub intersection: AtomSet,
    /// Relative complement of the second argument in the first.
    pub difference: AtomSet,
    /// `A ≤ B` in the algebra order, i.e. inclusion.
    pub leq: bool,
}

/// The algebra ideal generated by one element: all of its subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraIdeal {
    generator: AtomSet,
}

impl AlgebraIdeal {
    pub fn generator(&self) -> &AtomSet {
        &self.generator
    }

    pub fn contains(&self, b: &AtomSet) -> bool {
        b.is_subset(&self.generator)
    }

    /// Materialize the members. Exponential in the generator size, so only
    /// meaningful for small generators; guarded by the enumeration cap.
    pub fn members(&self) -> Vec<AtomSet> {
        self.generator.subsets()
    }
}

/// An ultrafilter of the powerset algebra: the principal filter of one atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultrafilter {
    pub principal: Atom,
}

impl Ultrafilter {
    pub fn contains(&self, a: &AtomSet) -> bool {
        a.contains(self.principal.index)
    }
}

/// Representative of the class of `A` in the quotient by the ideal of subsets
/// of `H`: the part of `A` outside `H`. Two sets are identified in the
/// quotient exactly when these representatives coincide.
pub fn quotient_class(a: &AtomSet, h: &AtomSet) -> AtomSet {
    a.difference(h)
}

impl Bds {
    /// Checked entry point for the basic operations on two elements.
    pub fn algebra_ops(&self, a: &AtomSet, b: &AtomSet) -> Result<SetOps, BdsError> {
        self.check_set(a)?;
        self.check_set(b)?;
        Ok(SetOps {
            union: a.union(b),
            intersection: a.intersection(b),
            difference: a.difference(b),
            leq: a.is_subset(b),
        })
    }

    pub fn generated_ideal(&self, a: &AtomSet) -> Result<AlgebraIdeal, BdsError> {
        self.check_set(a)?;
        Ok(AlgebraIdeal { generator: a.clone() })
    }

    /// All ultrafilters, in atom order.
    pub fn ultrafilters(&self) -> Vec<Ultrafilter> {
        (0..self.atom_count()).map(|u| Ultrafilter { principal: self.atom(u) }).collect()
    }

    /// The ultrafilters containing `A`: exactly those whose principal atom
    /// lies in `A`.
    pub fn cylinder(&self, a: &AtomSet) -> Result<Vec<Ultrafilter>, BdsError> {
        self.check_set(a)?;
        Ok(a.iter().map(|u| Ultrafilter { principal: self.atom(u) }).collect())
    }
}
