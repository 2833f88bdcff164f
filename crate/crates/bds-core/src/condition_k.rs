//! Condition (K): no quotient by a hereditary saturated ideal has an
//! exitless cycle.
//!
//! Three deciders with independent shapes agree on the verdict:
//!
//! * [`decide_k_direct`] scans atoms for single-power return languages. An
//!   atom whose returns are all powers of one word seeds an exitless cycle in
//!   the quotient by the complement of its tail, and conversely every such
//!   quotient cycle forces single-power returns at its base atom.
//! * [`decide_k_via_quotients`] takes the definition literally: it runs the
//!   Condition (L) decider on every quotient.
//! * [`decide_k_via_tails`] looks for a cyclic maximal tail.

use crate::algebra::AtomSet;
use crate::dual::{return_language_single_power, DualGraph, ReturnVerdict};
use crate::dynamics::{apply_theta, check_condition_l, normalize_no_exit_cycle};
use crate::error::BdsError;
use crate::system::{Atom, Bds, Word};
use crate::tails::{enumerate_hs_ideals, enumerate_maximal_tails, is_cyclic_tail, quotient_bds};

/// Which decision path produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KMethod {
    Direct,
    Quotients,
    Tails,
}

/// Certificate for a Condition (K) failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KWitness {
    /// Shortest returning word of the witness atom; every other return is a
    /// power of its primitive root.
    pub word: Word,
    pub atom: Atom,
    /// The singleton at the witness atom; `(word, base)` is an exitless
    /// cycle in the quotient by the complement of `tail_support`.
    pub base: AtomSet,
    /// The cyclic maximal tail seeded by the atom: its forward reach.
    pub tail_support: AtomSet,
    /// Length of the exitless quotient cycle; the corner of the associated
    /// algebra it generates is an `n × n` matrix algebra over the circle
    /// functions.
    pub corner_n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KVerdict {
    pub satisfied: bool,
    pub witness: Option<KWitness>,
    pub method: KMethod,
}

/// First atom in index order whose return language is a single power.
fn first_single_power_atom(sys: &Bds) -> Option<ReturnVerdict> {
    (0..sys.atom_count())
        .map(|u| return_language_single_power(sys, u))
        .find(|v| v.single_power.is_some())
}

fn witness_at_atom(sys: &Bds, verdict: ReturnVerdict) -> KWitness {
    let word = verdict.shortest_cycle.expect("single-power returns include a shortest one");
    let u = verdict.atom.index;
    KWitness {
        corner_n: word.len(),
        word,
        base: AtomSet::singleton(u),
        tail_support: DualGraph::new(sys).reach(u),
        atom: verdict.atom,
    }
}

/// Decide Condition (K) by scanning return languages. Never enumerates
/// subsets, so it has no size cap.
pub fn decide_k_direct(sys: &Bds) -> KVerdict {
    match first_single_power_atom(sys) {
        Some(v) => KVerdict {
            satisfied: false,
            witness: Some(witness_at_atom(sys, v)),
            method: KMethod::Direct,
        },
        None => KVerdict { satisfied: true, witness: None, method: KMethod::Direct },
    }
}

/// Decide Condition (K) from the definition: Condition (L) must hold in the
/// quotient by every proper hereditary saturated ideal (including the empty
/// one, which is the system itself). Witnesses are lifted out of the first
/// failing quotient; the lifted pair is also a single-power certificate in
/// the original system, since walks started outside a hereditary ideal never
/// enter it.
pub fn decide_k_via_quotients(sys: &Bds) -> Result<KVerdict, BdsError> {
    for ideal in enumerate_hs_ideals(sys)? {
        if !ideal.proper {
            continue;
        }
        let q = quotient_bds(sys, &ideal.atoms)?;
        let verdict = check_condition_l(&q);
        let Some(cycle) = verdict.witness else { continue };
        let (beta, base_q) = normalize_no_exit_cycle(&q, &cycle.word, &cycle.base)
            .map_err(|e| BdsError::Internal(format!("quotient witness failed to normalize: {e}")))?;
        let u_q = base_q.first().expect("normalized bases are singletons");
        let u = sys.atom_index(q.atom_id(u_q))?;
        return Ok(KVerdict {
            satisfied: false,
            witness: Some(KWitness {
                corner_n: beta.len(),
                word: beta,
                atom: sys.atom(u),
                base: AtomSet::singleton(u),
                tail_support: DualGraph::new(sys).reach(u),
            }),
            method: KMethod::Quotients,
        });
    }
    Ok(KVerdict { satisfied: true, witness: None, method: KMethod::Quotients })
}

/// Decide Condition (K) through the tail space: it fails exactly when some
/// maximal tail is cyclic. The forward reach of a single-power atom is always
/// a maximal tail, so this sees every failure the direct scan sees.
pub fn decide_k_via_tails(sys: &Bds) -> Result<KVerdict, BdsError> {
    for tail in enumerate_maximal_tails(sys)? {
        let Some(cw) = is_cyclic_tail(sys, &tail)? else { continue };
        return Ok(KVerdict {
            satisfied: false,
            witness: Some(KWitness {
                corner_n: cw.word.len(),
                word: cw.word,
                atom: cw.atom,
                base: cw.base,
                tail_support: tail.support,
            }),
            method: KMethod::Tails,
        });
    }
    Ok(KVerdict { satisfied: true, witness: None, method: KMethod::Tails })
}

/// The strong form of Condition (K). On powerset algebras it coincides with
/// the plain form: both come down to the absence of single-power return
/// languages, because every ultrafilter is principal here. The separate entry
/// point keeps the two notions distinguishable at call sites.
pub fn decide_strong_k(sys: &Bds) -> bool {
    first_single_power_atom(sys).is_none()
}

/// Corner generated by one cyclic maximal tail: inside the quotient by the
/// tail's complement, the witness cycle sweeps out pairwise disjoint stage
/// sets whose union spans an `n × n` matrix algebra over the circle
/// functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerObstruction {
    pub tail_support: AtomSet,
    /// Union of the cycle's stage sets, in original atom indices.
    pub base: AtomSet,
    /// The exitless cycle in the quotient (label indices are shared with the
    /// original system).
    pub cycle: Word,
    pub matrix_dim: usize,
}

/// One corner per cyclic maximal tail, in tail order. Empty exactly when
/// Condition (K) holds.
pub fn corner_obstructions(sys: &Bds) -> Result<Vec<CornerObstruction>, BdsError> {
    let mut out = Vec::new();
    for tail in enumerate_maximal_tails(sys)? {
        let Some(cw) = is_cyclic_tail(sys, &tail)? else { continue };
        let h = tail.support.complement_in(sys.atom_count());
        let q = quotient_bds(sys, &h)?;
        let u_q = q.atom_index(sys.atom_id(cw.atom.index))?;
        let (beta, b0) = normalize_no_exit_cycle(&q, &cw.word, &AtomSet::singleton(u_q))
            .map_err(|e| {
                BdsError::Internal(format!("cyclic witness is not exitless in its quotient: {e}"))
            })?;
        let stages: Vec<AtomSet> =
            (1..=beta.len()).map(|k| apply_theta(&q, &beta.prefix(k), &b0)).collect();
        for (i, s) in stages.iter().enumerate() {
            for t in &stages[i + 1..] {
                if !s.is_disjoint(t) {
                    return Err(BdsError::Internal(format!(
                        "stage sets of {} overlap",
                        q.render_word(&beta)
                    )));
                }
            }
        }
        let mut base = AtomSet::empty();
        for s in &stages {
            for v in s.iter() {
                base.insert(sys.atom_index(q.atom_id(v))?);
            }
        }
        out.push(CornerObstruction {
            tail_support: tail.support,
            base,
            matrix_dim: beta.len(),
            cycle: beta,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::fixtures::*;
    use proptest::prelude::*;

    fn set(atoms: &[usize]) -> AtomSet {
        AtomSet::from_iter(atoms.iter().copied())
    }

    #[test]
    fn loop_fails_k_everywhere() {
        let lp = loop_system();
        for verdict in [
            decide_k_direct(&lp),
            decide_k_via_quotients(&lp).unwrap(),
            decide_k_via_tails(&lp).unwrap(),
        ] {
            assert!(!verdict.satisfied);
            let w = verdict.witness.unwrap();
            assert_eq!(w.word, lp.word(["a"]).unwrap());
            assert_eq!(w.atom.index, 0);
            assert_eq!(w.base, set(&[0]));
            assert_eq!(w.tail_support, set(&[0]));
            assert_eq!(w.corner_n, 1);
        }
        assert!(!decide_strong_k(&lp));
    }

    #[test]
    fn double_loop_satisfies_k() {
        let dl = double_loop();
        assert!(decide_k_direct(&dl).satisfied);
        assert!(decide_k_via_quotients(&dl).unwrap().satisfied);
        assert!(decide_k_via_tails(&dl).unwrap().satisfied);
        assert!(decide_strong_k(&dl));
        assert_eq!(corner_obstructions(&dl).unwrap(), vec![]);
    }

    #[test]
    fn swap_witness_has_a_two_step_corner() {
        let sw = swap_pair();
        let w = decide_k_direct(&sw).witness.unwrap();
        assert_eq!(w.word, sw.word_compact("aa").unwrap());
        assert_eq!((w.atom.index, w.corner_n), (0, 2));
        assert_eq!(w.tail_support, set(&[0, 1]));

        let corners = corner_obstructions(&sw).unwrap();
        assert_eq!(corners.len(), 1);
        assert_eq!(corners[0].tail_support, set(&[0, 1]));
        assert_eq!(corners[0].base, set(&[0, 1]));
        assert_eq!(corners[0].matrix_dim, 2);
    }

    #[test]
    fn entry_chain_fails_k_with_unit_corner() {
        let ch = loop_with_entry();
        let w = decide_k_via_quotients(&ch).unwrap().witness.unwrap();
        assert_eq!(w.word, ch.word(["a"]).unwrap());
        assert_eq!((w.atom.index, w.corner_n), (0, 1));
        assert_eq!(w.tail_support, set(&[0, 1]));

        let corners = corner_obstructions(&ch).unwrap();
        assert_eq!(corners.len(), 1);
        assert_eq!(corners[0].base, set(&[0]));
        assert_eq!(corners[0].matrix_dim, 1);
    }

    #[test]
    fn two_loops_fail_k_twice() {
        let tl = two_loops();
        assert!(!decide_k_direct(&tl).satisfied);
        let corners = corner_obstructions(&tl).unwrap();
        assert_eq!(corners.len(), 2);
        assert_eq!((corners[0].tail_support.clone(), corners[0].base.clone()), (set(&[0]), set(&[0])));
        assert_eq!((corners[1].tail_support.clone(), corners[1].base.clone()), (set(&[1]), set(&[1])));
    }

    #[test]
    fn entry_double_loop_satisfies_k() {
        let de = double_loop_with_entry();
        assert!(decide_k_direct(&de).satisfied);
        assert!(decide_k_via_quotients(&de).unwrap().satisfied);
        assert!(decide_k_via_tails(&de).unwrap().satisfied);
        assert_eq!(corner_obstructions(&de).unwrap(), vec![]);
    }

    fn arb_bds() -> impl Strategy<Value = Bds> {
        (1usize..=5, 1usize..=3).prop_flat_map(|(n, l)| {
            proptest::collection::vec(
                proptest::collection::vec(proptest::option::of(0..n), n),
                l,
            )
            .prop_map(move |maps| {
                let atoms = (0..n).map(|i| format!("x{i}")).collect();
                let labels = ["a", "b", "c"][..l].iter().map(|s| s.to_string()).collect();
                Bds::new(atoms, labels, maps).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn all_deciders_agree(sys in arb_bds()) {
            let direct = decide_k_direct(&sys);
            let quotients = decide_k_via_quotients(&sys).unwrap();
            let tails = decide_k_via_tails(&sys).unwrap();
            prop_assert_eq!(direct.satisfied, quotients.satisfied);
            prop_assert_eq!(direct.satisfied, tails.satisfied);
            prop_assert_eq!(direct.satisfied, decide_strong_k(&sys));
            prop_assert_eq!(direct.satisfied, corner_obstructions(&sys).unwrap().is_empty());
        }

        #[test]
        fn witnesses_certify_failures(sys in arb_bds()) {
            for verdict in [
                decide_k_direct(&sys),
                decide_k_via_quotients(&sys).unwrap(),
                decide_k_via_tails(&sys).unwrap(),
            ] {
                if let Some(w) = verdict.witness {
                    prop_assert!(!verdict.satisfied);
                    prop_assert!(crate::dual::is_ultrafilter_cycle(&sys, &w.word, w.atom.index));
                    let rv = return_language_single_power(&sys, w.atom.index);
                    prop_assert!(rv.single_power.is_some());
                    prop_assert_eq!(w.base, AtomSet::singleton(w.atom.index));
                    prop_assert_eq!(w.corner_n, w.word.len());
                    prop_assert!(crate::tails::is_maximal_tail(&sys, &w.tail_support));
                }
            }
        }
    }
}
