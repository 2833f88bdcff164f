//! Word actions, cycles and exits, and the Condition (L) decider.
//!
//! # Composition convention
//!
//! For a word `α = α_1 … α_n` the action is
//! `θ_α = θ_{α_n} ∘ ⋯ ∘ θ_{α_1}`: the *first* letter acts first. On the dual
//! side this makes `θ_α` the preimage map of
//! `F_α = dual_map(α_1) ∘ ⋯ ∘ dual_map(α_n)`, which consumes the *last*
//! letter first (see [`dual_step`](crate::dual_step)).
//!
//! Worked trace on the swap system (atoms `x,y`; one label `a` with
//! `a: x↦y, y↦x`):
//!
//! ```
//! use bds_core::{apply_theta, AtomSet, Bds};
//! let swap = Bds::build(["x", "y"], ["a"], [("a", "x", "y"), ("a", "y", "x")]).unwrap();
//! let x = AtomSet::singleton(0);
//! let a = swap.word(["a"]).unwrap();
//! let aa = swap.word(["a", "a"]).unwrap();
//! // θ_a({x}) is the a-preimage of {x}: the atom that maps to x, namely y.
//! assert_eq!(apply_theta(&swap, &a, &x), AtomSet::singleton(1));
//! // θ_aa = θ_a ∘ θ_a brings it back.
//! assert_eq!(apply_theta(&swap, &aa, &x), x);
//! ```
//!
//! Concatenation therefore satisfies
//! `apply_theta(αβ, A) = apply_theta(β, apply_theta(α, A))`.

use std::collections::HashSet;

use crate::algebra::AtomSet;
use crate::error::BdsError;
use crate::system::{Bds, Word};

/// One-letter action: the preimage of `a` under the label's dual map.
pub(crate) fn theta_label(sys: &Bds, label: usize, a: &AtomSet) -> AtomSet {
    let map = sys.dual_map_of(label);
    AtomSet::from_iter((0..sys.atom_count()).filter(|&u| matches!(map[u], Some(v) if a.contains(v))))
}

/// Action of a word on a set, first letter first. The empty word acts as the
/// identity. Panics on letters or atoms outside the system; words built via
/// [`Bds::word`] and sets checked by [`Bds::check_set`] are always in range.
pub fn apply_theta(sys: &Bds, word: &Word, a: &AtomSet) -> AtomSet {
    debug_assert!(sys.check_set(a).is_ok());
    let mut s = a.clone();
    for &l in word.letters() {
        assert!(l < sys.label_count(), "word letter {l} outside the label alphabet");
        s = theta_label(sys, l, &s);
    }
    s
}

/// Range data of a word action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeInfo {
    /// `R_α = θ_α(1)`: the atoms on which the dual map of the word is defined.
    pub range: AtomSet,
    /// A set with `θ_α(D) = R_α`; the unit always works and is what is
    /// reported.
    pub domain_witness: AtomSet,
}

/// Domain of definition of the word's dual map, with its closed-domain
/// witness. For the empty word this is the unit.
pub fn range_set(sys: &Bds, word: &Word) -> RangeInfo {
    let unit = sys.unit();
    RangeInfo { range: apply_theta(sys, word, &unit), domain_witness: unit }
}

/// Label and finiteness data of one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetClass {
    /// Labels whose action leaves something of `A`: `Δ_A = {l : θ_l(A) ≠ ∅}`.
    pub delta: Vec<usize>,
    /// `λ_A = |Δ_A|`.
    pub lambda: usize,
    /// `A` is regular: every nonempty subset `B ⊆ A` has `0 < λ_B < ∞`.
    /// Atom criterion: every atom of `A` lies in the image of some dual map.
    pub regular: bool,
}

/// Labels acting on the single atom `v`.
pub(crate) fn delta_atom(sys: &Bds, v: usize) -> Vec<usize> {
    (0..sys.label_count())
        .filter(|&l| sys.dual_map_of(l).iter().any(|&t| t == Some(v)))
        .collect()
}

/// Classify a set: its acting labels and regularity.
pub fn classify_set(sys: &Bds, a: &AtomSet) -> SetClass {
    debug_assert!(sys.check_set(a).is_ok());
    let delta: Vec<usize> = (0..sys.label_count())
        .filter(|&l| !theta_label(sys, l, a).is_empty())
        .collect();
    let regular = a.iter().all(|u| !delta_atom(sys, u).is_empty());
    SetClass { lambda: delta.len(), delta, regular }
}

/// Local finiteness: every ultrafilter contains an element acted on by only
/// finitely many labels. Checked by the literal quantifier; on a finite
/// label alphabet the principal generator `{u}` always witnesses the
/// existential, so finite systems are always locally finite.
pub fn is_locally_finite(sys: &Bds) -> bool {
    sys.ultrafilters().iter().all(|uf| {
        let gen = AtomSet::singleton(uf.principal.index);
        classify_set(sys, &gen).lambda < usize::MAX
    })
}

/// Verdict of [`cycle_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleStatus {
    NotCycle,
    CycleWithExit,
    CycleNoExit,
}

/// An exit of a cycle `(α, A)`: a stage `t` and a nonempty
/// `B ⊆ θ_{α_1…α_t}(A)` whose label set differs from `{α_{t+1}}`
/// (indices wrap: `α_{|α|+1} = α_1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExitWitness {
    pub step: usize,
    pub set: AtomSet,
}

/// Outcome of classifying a candidate cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub word: Word,
    pub base: AtomSet,
    pub status: CycleStatus,
    /// Present exactly when `status == CycleWithExit`; smallest stage first,
    /// then smallest atom.
    pub exit: Option<ExitWitness>,
}

/// Classify `(word, base)`: is it a cycle, and if so does it have an exit?
///
/// `(α, A)` is a cycle when `θ_α(B) = B` for every `B ⊆ A`; equivalently
/// every atom `u ∈ A` has `θ_α({u}) = {u}`, which is what is checked. The
/// exit search also only needs atoms: a stage-`t` set deviates from
/// `{α_{t+1}}` iff one of its atoms does. The stage range `1..=|α|` covers
/// the base itself, since `θ_α(A) = A` on cycles.
///
/// Panics on an empty word or base; those never denote cycles.
pub fn cycle_check(sys: &Bds, word: &Word, base: &AtomSet) -> CycleWitness {
    assert!(!word.is_empty(), "a cycle needs a nonempty word");
    assert!(!base.is_empty(), "a cycle needs a nonempty base");
    debug_assert!(sys.check_set(base).is_ok());

    for u in base.iter() {
        if apply_theta(sys, word, &AtomSet::singleton(u)) != AtomSet::singleton(u) {
            return CycleWitness {
                word: word.clone(),
                base: base.clone(),
                status: CycleStatus::NotCycle,
                exit: None,
            };
        }
    }

    let n = word.len();
    let mut stage = base.clone();
    for t in 1..=n {
        stage = theta_label(sys, word.letters()[t - 1], &stage);
        let next = word.letters()[t % n];
        for v in stage.iter() {
            if delta_atom(sys, v) != vec![next] {
                return CycleWitness {
                    word: word.clone(),
                    base: base.clone(),
                    status: CycleStatus::CycleWithExit,
                    exit: Some(ExitWitness { step: t, set: AtomSet::singleton(v) }),
                };
            }
        }
    }
    CycleWitness { word: word.clone(), base: base.clone(), status: CycleStatus::CycleNoExit, exit: None }
}

/// Shrink an exitless cycle to its earliest sub-cycle with pairwise disjoint
/// stages.
///
/// Returns `(β, B)` where `β = α_1…α_j` for the minimal `j` admitting a
/// sub-cycle and `B` is a singleton base with `B ∩ θ_{β_1…β_k}(B) = ∅` for
/// `1 ≤ k < j`.
///
/// On an exitless cycle every atom's stage sets `θ_{α_1…α_k}({u})` are
/// singletons: stages stay nonempty (each stage atom is acted on by the next
/// letter), preimages of distinct atoms are disjoint, and the orbit closes up
/// at the singleton `{u}`, which forces singletons throughout. `j` is the
/// first stage at which some atom's orbit returns to itself; minimality of
/// the return gives the disjointness.
pub fn normalize_no_exit_cycle(
    sys: &Bds,
    word: &Word,
    base: &AtomSet,
) -> Result<(Word, AtomSet), BdsError> {
    let not_cycle = |reason: &str| BdsError::NotANoExitCycle {
        word: sys.render_word(word),
        base: sys.render_set(base),
        reason: reason.to_owned(),
    };
    if word.is_empty() || base.is_empty() {
        return Err(not_cycle("empty word or base"));
    }
    sys.check_set(base)?;
    match cycle_check(sys, word, base).status {
        CycleStatus::NotCycle => return Err(not_cycle("not a cycle")),
        CycleStatus::CycleWithExit => return Err(not_cycle("the cycle has an exit")),
        CycleStatus::CycleNoExit => {}
    }

    let mut best: Option<(usize, usize)> = None; // (period, atom)
    for u in base.iter() {
        let mut v = AtomSet::singleton(u);
        for k in 1..=word.len() {
            v = theta_label(sys, word.letters()[k - 1], &v);
            debug_assert_eq!(v.len(), 1, "stages of an exitless cycle are singletons");
            if v == AtomSet::singleton(u) {
                if best.map_or(true, |(j, _)| k < j) {
                    best = Some((k, u));
                }
                break;
            }
        }
    }
    let (j, u) = best.expect("every atom of an exitless cycle returns within the word");
    let beta = word.prefix(j);
    let b = AtomSet::singleton(u);
    let check = cycle_check(sys, &beta, &b);
    if check.status != CycleStatus::CycleNoExit {
        return Err(BdsError::Internal(format!(
            "normalized pair ({}, {}) failed re-validation",
            sys.render_word(&beta),
            sys.render_set(&b)
        )));
    }
    Ok((beta, b))
}

/// Verdict of the Condition (L) decider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionLVerdict {
    pub holds: bool,
    /// An exitless cycle when the condition fails.
    pub witness: Option<CycleWitness>,
}

/// Condition (L): every cycle has an exit.
///
/// Any exitless cycle restricts to one with a singleton base, and along an
/// exitless cycle every stage is forced: all atoms of the current set must
/// share a single acting label. So one forced simulation per starting atom is
/// complete: start at `S = {x}`, follow the unique shared label while it
/// exists, and report the traversed word when `{x}` recurs. Along forced
/// steps the preimage size never shrinks (each atom keeps a nonempty, and
/// disjoint, preimage), so a return to the singleton `{x}` keeps every
/// intermediate state a singleton and the traversed word is a genuine
/// exitless cycle on `{x}`. States live in a finite powerset, so each
/// simulation stops at the first repeated state.
pub fn check_condition_l(sys: &Bds) -> ConditionLVerdict {
    for x in 0..sys.atom_count() {
        let start = AtomSet::singleton(x);
        let mut s = start.clone();
        let mut seen: HashSet<AtomSet> = HashSet::new();
        let mut letters: Vec<usize> = Vec::new();
        loop {
            if !seen.insert(s.clone()) {
                break;
            }
            let mut shared: Option<usize> = None;
            let mut forced = true;
            for u in s.iter() {
                let delta = delta_atom(sys, u);
                match (delta.len(), shared) {
                    (1, None) => shared = Some(delta[0]),
                    (1, Some(a)) if delta[0] == a => {}
                    _ => {
                        forced = false;
                        break;
                    }
                }
            }
            let Some(a) = shared.filter(|_| forced) else { break };
            letters.push(a);
            s = theta_label(sys, a, &s);
            if s == start {
                let witness = cycle_check(sys, &Word::from_indices(letters), &start);
                debug_assert_eq!(witness.status, CycleStatus::CycleNoExit);
                return ConditionLVerdict { holds: false, witness: Some(witness) };
            }
        }
    }
    ConditionLVerdict { holds: true, witness: None }
}
