//! System description: atoms, labels, and one partial dual map per label.
//!
//! The Boolean algebra itself is never materialized. Its elements are the
//! subsets of the atom set ([`AtomSet`](crate::AtomSet)), and the action of a
//! label `l` is the *preimage* map of `dual_map(l)`. Words act by composing
//! label actions; see [`apply_theta`](crate::apply_theta) for the composition
//! convention, which is fixed once here and relied on everywhere else.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::AtomSet;
use crate::error::BdsError;

/// An atom of the Boolean algebra, resolved to both its position and its id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub index: usize,
    pub id: String,
}

/// A word over the label alphabet, stored as label indices.
///
/// Letters are kept in the order in which the word is written: for a word
/// `α = α_1 … α_n`, `letters()[0]` is `α_1`. The action convention (which end
/// applies first) is owned by [`apply_theta`](crate::apply_theta) and
/// [`dual_step`](crate::dual_step), not by this type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn from_indices(letters: Vec<usize>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The prefix `α_1 … α_j` (`j` may be 0 or the full length).
    pub fn prefix(&self, j: usize) -> Word {
        Word { letters: self.letters[..j].to_vec() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    pub fn reversed(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { letters }
    }

    /// True iff `self = root^k` for some `k ≥ 1`.
    pub fn is_power_of(&self, root: &Word) -> bool {
        if root.is_empty() || self.is_empty() || self.len() % root.len() != 0 {
            return false;
        }
        self.letters
            .iter()
            .enumerate()
            .all(|(i, &l)| l == root.letters[i % root.len()])
    }

    /// Smallest-period scan: the shortest `ρ` with `self = ρ^k`.
    pub fn primitive_root(&self) -> Word {
        let n = self.len();
        for p in 1..=n {
            if n % p == 0 {
                let periodic = (p..n).all(|i| self.letters[i] == self.letters[i - p]);
                if periodic {
                    return self.prefix(p);
                }
            }
        }
        self.clone()
    }
}

/// A finite Boolean dynamical system in dual-map form.
///
/// `maps[l][u]` is the image of atom `u` under the dual map of label `l`,
/// or `None` where the partial map is undefined. Atom and label ids are
/// unique; indices are positions in the declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bds {
    atoms: Vec<String>,
    labels: Vec<String>,
    maps: Vec<Vec<Option<usize>>>,
}

impl Bds {
    /// Validates ids and map shape. Requires at least one atom; the label
    /// alphabet may be empty (every quantifier over words is then vacuous).
    pub fn new(
        atoms: Vec<String>,
        labels: Vec<String>,
        maps: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, BdsError> {
        if atoms.is_empty() {
            return Err(BdsError::InvalidSystem("at least one atom is required".into()));
        }
        for (list, kind) in [(&atoms, "atom"), (&labels, "label")] {
            let mut seen = std::collections::BTreeSet::new();
            for id in list.iter() {
                if id.is_empty() {
                    return Err(BdsError::InvalidSystem(format!("empty {kind} id")));
                }
                if !seen.insert(id.clone()) {
                    return Err(BdsError::InvalidSystem(format!("duplicate {kind} id {id:?}")));
                }
            }
        }
        if maps.len() != labels.len() {
            return Err(BdsError::InvalidSystem(format!(
                "{} dual maps for {} labels",
                maps.len(),
                labels.len()
            )));
        }
        for (l, map) in maps.iter().enumerate() {
            if map.len() != atoms.len() {
                return Err(BdsError::InvalidSystem(format!(
                    "dual map of {:?} covers {} atoms, system has {}",
                    labels[l],
                    map.len(),
                    atoms.len()
                )));
            }
            for target in map.iter().flatten() {
                if *target >= atoms.len() {
                    return Err(BdsError::InvalidSystem(format!(
                        "dual map of {:?} hits atom index {} out of {}",
                        labels[l],
                        target,
                        atoms.len()
                    )));
                }
            }
        }
        Ok(Bds { atoms, labels, maps })
    }

    /// Convenience constructor from `(label, from_atom, to_atom)` entries.
    ///
    /// ```
    /// use bds_core::Bds;
    /// let swap = Bds::build(["x", "y"], ["a"], [("a", "x", "y"), ("a", "y", "x")]).unwrap();
    /// assert_eq!(swap.atom_count(), 2);
    /// ```
    pub fn build<'a>(
        atoms: impl IntoIterator<Item = &'a str>,
        labels: impl IntoIterator<Item = &'a str>,
        entries: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    ) -> Result<Self, BdsError> {
        let atoms: Vec<String> = atoms.into_iter().map(str::to_owned).collect();
        let labels: Vec<String> = labels.into_iter().map(str::to_owned).collect();
        let find = |list: &[String], id: &str, kind: &str| -> Result<usize, BdsError> {
            list.iter().position(|x| x == id).ok_or_else(|| match kind {
                "label" => BdsError::UnknownLabel(id.to_owned()),
                _ => BdsError::UnknownAtom(id.to_owned()),
            })
        };
        let mut maps = vec![vec![None; atoms.len()]; labels.len()];
        for (label, from, to) in entries {
            let l = find(&labels, label, "label")?;
            let u = find(&atoms, from, "atom")?;
            let v = find(&atoms, to, "atom")?;
            if let Some(old) = maps[l][u] {
                if old != v {
                    return Err(BdsError::InvalidSystem(format!(
                        "dual map of {label:?} sends {from:?} to two different atoms"
                    )));
                }
            }
            maps[l][u] = Some(v);
        }
        Bds::new(atoms, labels, maps)
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn atom_ids(&self) -> &[String] {
        &self.atoms
    }

    pub fn label_ids(&self) -> &[String] {
        &self.labels
    }

    pub fn atom(&self, index: usize) -> Atom {
        Atom { index, id: self.atoms[index].clone() }
    }

    pub fn atom_id(&self, index: usize) -> &str {
        &self.atoms[index]
    }

    pub fn label_id(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn atom_index(&self, id: &str) -> Result<usize, BdsError> {
        self.atoms
            .iter()
            .position(|a| a == id)
            .ok_or_else(|| BdsError::UnknownAtom(id.to_owned()))
    }

    pub fn label_index(&self, id: &str) -> Result<usize, BdsError> {
        self.labels
            .iter()
            .position(|l| l == id)
            .ok_or_else(|| BdsError::UnknownLabel(id.to_owned()))
    }

    /// Image of atom `u` under the dual map of label `l`.
    pub fn dual_map(&self, l: usize, u: usize) -> Option<usize> {
        self.maps[l][u]
    }

    /// Raw dual map of one label, indexed by atom.
    pub fn dual_map_of(&self, l: usize) -> &[Option<usize>] {
        &self.maps[l]
    }

    /// The unit of the algebra: the full atom set.
    pub fn unit(&self) -> AtomSet {
        AtomSet::full(self.atom_count())
    }

    /// Bounds-check a set against this universe.
    pub fn check_set(&self, a: &AtomSet) -> Result<(), BdsError> {
        match a.iter().find(|&u| u >= self.atom_count()) {
            Some(index) => Err(BdsError::UniverseMismatch { index, atoms: self.atom_count() }),
            None => Ok(()),
        }
    }

    /// Build a word from label ids.
    pub fn word<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<Word, BdsError> {
        let mut letters = Vec::new();
        for id in ids {
            letters.push(self.label_index(id)?);
        }
        Ok(Word::from_indices(letters))
    }

    /// Build a word from a compact string, one character per label.
    /// Only usable when every label id is a single character.
    pub fn word_compact(&self, s: &str) -> Result<Word, BdsError> {
        let mut letters = Vec::new();
        for ch in s.chars() {
            letters.push(self.label_index(&ch.to_string())?);
        }
        Ok(Word::from_indices(letters))
    }

    /// Render a set as `{id,id,…}` in atom-index order.
    pub fn render_set(&self, a: &AtomSet) -> String {
        let names: Vec<&str> = a.iter().map(|u| self.atom_id(u)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Render a word by joining label ids; a separator appears only when some
    /// label id is longer than one character.
    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_owned();
        }
        let names: Vec<&str> = w.letters().iter().map(|&l| self.label_id(l)).collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(".")
        }
    }
}

impl fmt::Display for Bds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{} atoms; {} labels⟩", self.atoms.len(), self.labels.len())
    }
}

/// The four standard one- and two-atom systems used throughout the tests and
/// documentation, plus two composites with a richer ideal structure.
pub mod fixtures {
    use super::Bds;

    /// One atom, one self-loop label. Fails both exit conditions.
    pub fn loop_system() -> Bds {
        Bds::build(["x"], ["a"], [("a", "x", "x")]).unwrap()
    }

    /// One atom, two self-loop labels. Satisfies both exit conditions.
    pub fn double_loop() -> Bds {
        Bds::build(["x"], ["a", "b"], [("a", "x", "x"), ("b", "x", "x")]).unwrap()
    }

    /// Two atoms swapped by a single label.
    pub fn swap_pair() -> Bds {
        Bds::build(["x", "y"], ["a"], [("a", "x", "y"), ("a", "y", "x")]).unwrap()
    }

    /// Self-loop at `x` plus a second label feeding `x` into `y`.
    pub fn loop_with_entry() -> Bds {
        Bds::build(["x", "y"], ["a", "b"], [("a", "x", "x"), ("b", "x", "y")]).unwrap()
    }

    /// Two disjoint self-loop components.
    pub fn two_loops() -> Bds {
        Bds::build(["x", "y"], ["a", "b"], [("a", "x", "x"), ("b", "y", "y")]).unwrap()
    }

    /// Double loop at `x` with an extra atom `y` mapping onto `x`.
    /// Smallest system whose tail space is a nontrivial chain while
    /// Condition (K) holds.
    pub fn double_loop_with_entry() -> Bds {
        Bds::build(
            ["x", "y"],
            ["a", "b", "c"],
            [("a", "x", "x"), ("b", "x", "x"), ("c", "y", "x")],
        )
        .unwrap()
    }
}
