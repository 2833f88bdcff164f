//! Hereditary saturated ideals, quotients, and maximal tails.
//!
//! For an ideal `H` of atoms:
//! * hereditary: `f_l(u) ∈ H` forces `u ∈ H`, so forward walks started
//!   outside `H` never enter it;
//! * saturated: an atom outside `H` that is hit by at least one dual map and
//!   whose full preimage under every such label lies in `H` cannot exist.
//!
//! Complements of proper hereditary saturated ideals that are downward
//! directed under reachability are the maximal tails; those carrying an atom
//! with single-power returns are the cyclic ones.

use crate::algebra::AtomSet;
use crate::dual::{is_ultrafilter_cycle, return_language_single_power, DualGraph};
use crate::dynamics::delta_atom;
use crate::error::BdsError;
use crate::system::{Atom, Bds, Word};
use crate::MAX_ENUM_ATOMS;

/// A hereditary saturated set of atoms. The full set always qualifies and is
/// flagged improper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsIdeal {
    pub atoms: AtomSet,
    pub proper: bool,
}

/// Support of a maximal tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalTail {
    pub support: AtomSet,
}

/// A cyclic-tail certificate: `word` closes up at `atom` and every other
/// return there is a power of the same primitive word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicWitness {
    pub word: Word,
    pub atom: Atom,
    pub base: AtomSet,
}

pub fn is_hereditary(sys: &Bds, h: &AtomSet) -> bool {
    debug_assert!(sys.check_set(h).is_ok());
    (0..sys.label_count()).all(|l| {
        sys.dual_map_of(l)
            .iter()
            .enumerate()
            .all(|(u, &t)| !matches!(t, Some(v) if h.contains(v) && !h.contains(u)))
    })
}

pub fn is_saturated(sys: &Bds, h: &AtomSet) -> bool {
    debug_assert!(sys.check_set(h).is_ok());
    (0..sys.atom_count()).all(|u| {
        if h.contains(u) {
            return true;
        }
        let delta = delta_atom(sys, u);
        delta.is_empty()
            || !delta.iter().all(|&l| {
                sys.dual_map_of(l)
                    .iter()
                    .enumerate()
                    .all(|(p, &t)| t != Some(u) || h.contains(p))
            })
    })
}

/// Smallest hereditary saturated ideal containing `seed`. Fixpoint of the two
/// closure rules: pull atoms back along dual maps, and absorb atoms whose
/// complete preimages under all acting labels are already inside.
pub fn saturation_closure(sys: &Bds, seed: &AtomSet) -> HsIdeal {
    debug_assert!(sys.check_set(seed).is_ok());
    let mut h = seed.clone();
    loop {
        let mut grew = false;
        for u in 0..sys.atom_count() {
            if h.contains(u) {
                continue;
            }
            let hereditary_pull = (0..sys.label_count())
                .any(|l| matches!(sys.dual_map(l, u), Some(v) if h.contains(v)));
            let saturation_push = {
                let delta = delta_atom(sys, u);
                !delta.is_empty()
                    && delta.iter().all(|&l| {
                        sys.dual_map_of(l)
                            .iter()
                            .enumerate()
                            .all(|(p, &t)| t != Some(u) || h.contains(p))
                    })
            };
            if hereditary_pull || saturation_push {
                h.insert(u);
                grew = true;
            }
        }
        if !grew {
            let proper = h.len() < sys.atom_count();
            return HsIdeal { atoms: h, proper };
        }
    }
}

/// All hereditary saturated ideals, in mask-ascending order (bit `i` is atom
/// `i`), which linearly extends inclusion. Errors with a size limit beyond
/// [`MAX_ENUM_ATOMS`] atoms.
pub fn enumerate_hs_ideals(sys: &Bds) -> Result<Vec<HsIdeal>, BdsError> {
    let n = sys.atom_count();
    if n > MAX_ENUM_ATOMS {
        return Err(BdsError::SizeLimit { atoms: n, max: MAX_ENUM_ATOMS });
    }
    // Per-ideal checks run on masks: edges (u, f_l(u)) for heredity,
    // per-atom preimage masks for saturation.
    let edges: Vec<(u32, u32)> = (0..sys.label_count())
        .flat_map(|l| {
            sys.dual_map_of(l)
                .iter()
                .enumerate()
                .filter_map(|(u, &t)| t.map(|v| (1u32 << u, 1u32 << v)))
        })
        .collect();
    let preimages: Vec<Vec<u32>> = (0..sys.label_count())
        .map(|l| {
            let mut pre = vec![0u32; n];
            for (u, &t) in sys.dual_map_of(l).iter().enumerate() {
                if let Some(v) = t {
                    pre[v] |= 1 << u;
                }
            }
            pre
        })
        .collect();
    let deltas: Vec<Vec<usize>> = (0..n).map(|u| delta_atom(sys, u)).collect();

    let full: u64 = (1u64 << n) - 1;
    let mut out = Vec::new();
    for mask in 0..=full {
        let m = mask as u32;
        let hereditary = edges.iter().all(|&(ub, vb)| (m & vb) == 0 || (m & ub) != 0);
        if !hereditary {
            continue;
        }
        let saturated = (0..n).all(|u| {
            (m >> u) & 1 == 1
                || deltas[u].is_empty()
                || deltas[u].iter().any(|&l| preimages[l][u] & !m != 0)
        });
        if saturated {
            out.push(HsIdeal { atoms: AtomSet::from_mask(mask), proper: mask != full });
        }
    }
    Ok(out)
}

/// System restricted to the complement of a proper hereditary ideal. Atom
/// ids and the full label alphabet are preserved; dual maps restrict without
/// losing definedness, since heredity keeps images outside the ideal.
pub fn quotient_bds(sys: &Bds, h: &AtomSet) -> Result<Bds, BdsError> {
    sys.check_set(h)?;
    let invalid = |reason: &str| BdsError::InvalidQuotient {
        set: sys.render_set(h),
        reason: reason.to_owned(),
    };
    if !is_hereditary(sys, h) {
        return Err(invalid("not hereditary"));
    }
    if h.len() == sys.atom_count() {
        return Err(invalid("improper: nothing remains"));
    }
    let keep: Vec<usize> = (0..sys.atom_count()).filter(|&u| !h.contains(u)).collect();
    let reindex: Vec<Option<usize>> = {
        let mut r = vec![None; sys.atom_count()];
        for (new, &old) in keep.iter().enumerate() {
            r[old] = Some(new);
        }
        r
    };
    let atoms = keep.iter().map(|&u| sys.atom_id(u).to_owned()).collect();
    let labels = (0..sys.label_count()).map(|l| sys.label_id(l).to_owned()).collect();
    let maps = (0..sys.label_count())
        .map(|l| {
            keep.iter()
                .map(|&u| sys.dual_map(l, u).and_then(|v| reindex[v]))
                .collect()
        })
        .collect();
    Bds::new(atoms, labels, maps)
}

/// Is `w` the support of a maximal tail: nonempty, complement hereditary and
/// saturated, and downward directed (any two atoms of `w` are reachable from
/// a common atom of `w`; heredity of the complement keeps those walks inside
/// `w`).
pub fn is_maximal_tail(sys: &Bds, w: &AtomSet) -> bool {
    debug_assert!(sys.check_set(w).is_ok());
    if w.is_empty() {
        return false;
    }
    let complement = w.complement_in(sys.atom_count());
    if !is_hereditary(sys, &complement) || !is_saturated(sys, &complement) {
        return false;
    }
    let graph = DualGraph::new(sys);
    let reaches: Vec<AtomSet> = w.iter().map(|c| graph.reach(c)).collect();
    w.iter().all(|w1| {
        w.iter().all(|w2| reaches.iter().any(|r| r.contains(w1) && r.contains(w2)))
    })
}

/// All maximal tails, sorted by support mask. Size-limited like
/// [`enumerate_hs_ideals`].
pub fn enumerate_maximal_tails(sys: &Bds) -> Result<Vec<MaximalTail>, BdsError> {
    let ideals = enumerate_hs_ideals(sys)?;
    let mut tails: Vec<MaximalTail> = ideals
        .iter()
        .filter(|h| h.proper)
        .map(|h| h.atoms.complement_in(sys.atom_count()))
        .filter(|w| is_maximal_tail(sys, w))
        .map(|support| MaximalTail { support })
        .collect();
    tails.sort_by_key(|t| t.support.to_mask());
    Ok(tails)
}

/// Is the tail cyclic: does some atom see the whole support and return only
/// in powers of one word? The witness reports the first such atom in index
/// order with its shortest returning word.
pub fn is_cyclic_tail(sys: &Bds, tail: &MaximalTail) -> Result<Option<CyclicWitness>, BdsError> {
    if !is_maximal_tail(sys, &tail.support) {
        return Err(BdsError::NotAMaximalTail {
            support: sys.render_set(&tail.support),
            reason: "support fails the maximal-tail laws".to_owned(),
        });
    }
    let graph = DualGraph::new(sys);
    for u in tail.support.iter() {
        if graph.reach(u) != tail.support {
            continue;
        }
        let verdict = return_language_single_power(sys, u);
        if verdict.single_power.is_some() {
            let word = verdict.shortest_cycle.expect("single-power returns include a shortest one");
            return Ok(Some(CyclicWitness {
                word,
                atom: sys.atom(u),
                base: AtomSet::singleton(u),
            }));
        }
    }
    Ok(None)
}

/// Tail generated by an ultrafilter cycle with single-power returns: the
/// forward reach of its atom. Such a reach set is always a maximal tail
/// (its complement is hereditary and saturated since every reached atom has
/// a reached predecessor, and the base atom sees everything).
pub fn tail_from_ultrafilter_cycle(
    sys: &Bds,
    word: &Word,
    u: usize,
) -> Result<MaximalTail, BdsError> {
    let reject = |reason: &str| BdsError::NotACyclicWitness {
        word: sys.render_word(word),
        atom: sys.atom_id(u).to_owned(),
        reason: reason.to_owned(),
    };
    if u >= sys.atom_count() {
        return Err(BdsError::UnknownAtom(format!("atom index {u}")));
    }
    if !is_ultrafilter_cycle(sys, word, u) {
        return Err(reject("the word does not close up at the atom"));
    }
    let verdict = return_language_single_power(sys, u);
    let Some(rho) = verdict.single_power else {
        return Err(reject("the atom has branching returns"));
    };
    debug_assert!(word.is_power_of(&rho));
    let support = DualGraph::new(sys).reach(u);
    debug_assert!(is_maximal_tail(sys, &support));
    Ok(MaximalTail { support })
}
