//! The finite topological space of maximal tails and the lattice of
//! hereditary saturated ideals.
//!
//! Points are maximal tails. The sets `U_A = {T : A ∩ W_T ≠ ∅}` form a basis
//! (not just a subbasis: directedness of tails shrinks any intersection onto
//! a single-atom `U_C`), the closure of a set of points collects every tail
//! whose support the set jointly covers, and specialization is support
//! inclusion. Complement pairs each tail with a proper hereditary saturated
//! ideal, reversing the order.

use crate::algebra::AtomSet;
use crate::condition_k::decide_k_direct;
use crate::dual::DualGraph;
use crate::error::BdsError;
use crate::system::Bds;
use crate::tails::{enumerate_hs_ideals, enumerate_maximal_tails, is_maximal_tail, HsIdeal, MaximalTail};

/// The space of maximal tails with its topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailSpace {
    tails: Vec<MaximalTail>,
}

pub fn build_tail_space(sys: &Bds) -> Result<TailSpace, BdsError> {
    Ok(TailSpace { tails: enumerate_maximal_tails(sys)? })
}

impl TailSpace {
    pub fn tails(&self) -> &[MaximalTail] {
        &self.tails
    }

    pub fn len(&self) -> usize {
        self.tails.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tails.is_empty()
    }

    /// Basic open set `U_A`: indices of the tails whose support meets `A`.
    pub fn open_set(&self, a: &AtomSet) -> Vec<usize> {
        (0..self.tails.len())
            .filter(|&i| !a.intersection(&self.tails[i].support).is_empty())
            .collect()
    }

    /// Topological closure of a set of points: the tails whose support is
    /// jointly covered. Directedness of each tail forces its support into a
    /// single member's support, so this is the specialization down-set and
    /// distributes over unions.
    pub fn closure_of(&self, points: &[usize]) -> Vec<usize> {
        let mut union = AtomSet::empty();
        for &p in points {
            union = union.union(&self.tails[p].support);
        }
        (0..self.tails.len())
            .filter(|&i| self.tails[i].support.is_subset(&union))
            .collect()
    }

    /// `i` lies in the closure of `{j}`: support inclusion.
    pub fn specializes(&self, i: usize, j: usize) -> bool {
        self.tails[i].support.is_subset(&self.tails[j].support)
    }

    /// For a point of `U_{A1} ∩ U_{A2}`, a single-atom `C` with
    /// `point ∈ U_C ⊆ U_{A1} ∩ U_{A2}`: a common ancestor of one met atom
    /// from each side. `None` when the point is not in the intersection.
    pub fn basis_witness(
        &self,
        sys: &Bds,
        point: usize,
        a1: &AtomSet,
        a2: &AtomSet,
    ) -> Option<AtomSet> {
        let w = &self.tails[point].support;
        let w1 = a1.intersection(w).first()?;
        let w2 = a2.intersection(w).first()?;
        let graph = DualGraph::new(sys);
        let c = w.iter().find(|&c| {
            let r = graph.reach(c);
            r.contains(w1) && r.contains(w2)
        });
        Some(AtomSet::singleton(c.expect("tail supports are directed")))
    }
}

/// The inclusion lattice of hereditary saturated ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealLattice {
    /// All ideals, smallest masks first; closed under intersection and
    /// saturated-union join.
    pub ideals: Vec<HsIdeal>,
    /// Covering pairs `(lower, upper)` of the inclusion order.
    pub covers: Vec<(usize, usize)>,
    /// Whether the ideal's complement is a maximal tail.
    pub prime: Vec<bool>,
    /// With Condition (K) the lattice shows every ideal of the associated
    /// algebra; without it only the gauge-invariant ones.
    pub complete: bool,
    pub description: String,
}

pub fn ideal_lattice(sys: &Bds) -> Result<IdealLattice, BdsError> {
    let ideals = enumerate_hs_ideals(sys)?;
    let below = |i: usize, j: usize| {
        i != j && ideals[i].atoms.is_subset(&ideals[j].atoms)
    };
    let mut covers = Vec::new();
    for i in 0..ideals.len() {
        for j in 0..ideals.len() {
            if below(i, j) && !(0..ideals.len()).any(|k| below(i, k) && below(k, j)) {
                covers.push((i, j));
            }
        }
    }
    let prime = ideals
        .iter()
        .map(|h| is_maximal_tail(sys, &h.atoms.complement_in(sys.atom_count())))
        .collect();
    let complete = decide_k_direct(sys).satisfied;
    let description = if complete {
        "complete ideal lattice of the associated algebra".to_owned()
    } else {
        "gauge-invariant ideals only (an exitless quotient cycle exists)".to_owned()
    };
    Ok(IdealLattice { ideals, covers, prime, complete, description })
}

/// Pairing of the tail space with the prime ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimReport {
    pub space: TailSpace,
    pub ideals: Vec<HsIdeal>,
    /// `pairing[i]` indexes the ideal complementary to tail `i`.
    pub pairing: Vec<usize>,
    /// Closure order of points against reverse inclusion of their ideals,
    /// checked over all pairs.
    pub order_consistent: bool,
    pub k_satisfied: bool,
    /// Present when Condition (K) fails: the space then only describes the
    /// gauge-invariant part of the primitive spectrum.
    pub warning: Option<String>,
}

pub fn prim_report(sys: &Bds) -> Result<PrimReport, BdsError> {
    let space = build_tail_space(sys)?;
    let ideals = enumerate_hs_ideals(sys)?;
    let pairing = space
        .tails()
        .iter()
        .map(|t| {
            let h = t.support.complement_in(sys.atom_count());
            ideals
                .iter()
                .position(|i| i.atoms == h)
                .expect("tail complements are hereditary saturated")
        })
        .collect::<Vec<_>>();
    let order_consistent = (0..space.len()).all(|i| {
        (0..space.len()).all(|j| {
            let closure = space.closure_of(&[j]).contains(&i);
            let reverse =
                ideals[pairing[j]].atoms.is_subset(&ideals[pairing[i]].atoms);
            closure == reverse
        })
    });
    let k_satisfied = decide_k_direct(sys).satisfied;
    let warning = (!k_satisfied).then(|| {
        "Condition (K) fails: points below cover the gauge-invariant primitive ideals only"
            .to_owned()
    });
    Ok(PrimReport { space, ideals, pairing, order_consistent, k_satisfied, warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::fixtures::*;

    fn set(atoms: &[usize]) -> AtomSet {
        AtomSet::from_iter(atoms.iter().copied())
    }

    #[test]
    fn entry_double_loop_is_sierpinski() {
        let de = double_loop_with_entry();
        let space = build_tail_space(&de).unwrap();
        assert_eq!(space.len(), 2);
        assert_eq!(space.tails()[0].support, set(&[0]));
        assert_eq!(space.tails()[1].support, set(&[0, 1]));

        assert_eq!(space.open_set(&set(&[0])), vec![0, 1]);
        assert_eq!(space.open_set(&set(&[1])), vec![1]);
        assert_eq!(space.open_set(&AtomSet::empty()), Vec::<usize>::new());

        // The small tail is a closed point, the big one is dense.
        assert_eq!(space.closure_of(&[0]), vec![0]);
        assert_eq!(space.closure_of(&[1]), vec![0, 1]);
        assert!(space.specializes(0, 1) && !space.specializes(1, 0));

        let c = space.basis_witness(&de, 1, &set(&[0]), &set(&[1])).unwrap();
        assert_eq!(c, set(&[1]));
        let u_c = space.open_set(&c);
        for t in &u_c {
            assert!(space.open_set(&set(&[0])).contains(t));
            assert!(space.open_set(&set(&[1])).contains(t));
        }
        assert!(u_c.contains(&1));
        assert_eq!(space.basis_witness(&de, 0, &set(&[0]), &set(&[1])), None);
    }

    #[test]
    fn two_loops_are_discrete() {
        let space = build_tail_space(&two_loops()).unwrap();
        assert_eq!(space.len(), 2);
        assert_eq!(space.closure_of(&[0]), vec![0]);
        assert_eq!(space.closure_of(&[1]), vec![1]);
        assert_eq!(space.closure_of(&[0, 1]), vec![0, 1]);
        assert!(!space.specializes(0, 1));
    }

    #[test]
    fn lattice_of_two_loops() {
        let lat = ideal_lattice(&two_loops()).unwrap();
        assert_eq!(lat.ideals.len(), 4);
        assert_eq!(lat.covers, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        // The zero ideal is not prime here: the unit is not a tail.
        assert_eq!(lat.prime, vec![false, true, true, false]);
        assert!(!lat.complete);
    }

    #[test]
    fn lattice_of_the_entry_double_loop() {
        let lat = ideal_lattice(&double_loop_with_entry()).unwrap();
        let masks: Vec<u64> = lat.ideals.iter().map(|h| h.atoms.to_mask()).collect();
        assert_eq!(masks, vec![0b00, 0b10, 0b11]);
        assert_eq!(lat.covers, vec![(0, 1), (1, 2)]);
        assert_eq!(lat.prime, vec![true, true, false]);
        assert!(lat.complete);
    }

    #[test]
    fn lattices_are_closed_under_meet_and_join() {
        for sys in [loop_system(), swap_pair(), loop_with_entry(), two_loops(), double_loop_with_entry()] {
            let lat = ideal_lattice(&sys).unwrap();
            for a in &lat.ideals {
                for b in &lat.ideals {
                    let meet = a.atoms.intersection(&b.atoms);
                    assert!(lat.ideals.iter().any(|h| h.atoms == meet));
                    let join = crate::tails::saturation_closure(&sys, &a.atoms.union(&b.atoms));
                    assert!(lat.ideals.iter().any(|h| h.atoms == join.atoms));
                }
            }
        }
    }

    #[test]
    fn reports_pair_tails_with_ideals() {
        let rep = prim_report(&double_loop_with_entry()).unwrap();
        assert!(rep.order_consistent);
        assert!(rep.k_satisfied && rep.warning.is_none());
        // Tail {x} pairs with {y}, the dense tail with the zero ideal.
        assert_eq!(rep.ideals[rep.pairing[0]].atoms, set(&[1]));
        assert_eq!(rep.ideals[rep.pairing[1]].atoms, AtomSet::empty());

        let rep = prim_report(&two_loops()).unwrap();
        assert!(rep.order_consistent);
        assert!(!rep.k_satisfied && rep.warning.is_some());
        assert_eq!(rep.space.len(), 2);
    }
}
