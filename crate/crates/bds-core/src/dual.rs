//! The dual graph: atoms as vertices, one edge `u → f_l(u)` per defined
//! label, and the return-word analysis behind Condition (K).
//!
//! Words act on atoms through [`dual_step`]: `F_α = f_{α_1} ∘ ⋯ ∘ f_{α_n}`,
//! so the *last* letter is consumed first and a forward walk in the dual
//! graph reads its word back to front. [`apply_theta`](crate::apply_theta)
//! is the preimage map of `F_α`.

use std::collections::VecDeque;

use crate::algebra::AtomSet;
use crate::scc::tarjan;
use crate::system::{Atom, Bds, Word};

/// Forward dual graph with its strongly connected components.
#[derive(Debug, Clone)]
pub struct DualGraph {
    /// `edges[u]` = `(label, f_label(u))`, label-ascending.
    edges: Vec<Vec<(usize, usize)>>,
    comp: Vec<usize>,
}

impl DualGraph {
    pub fn new(sys: &Bds) -> Self {
        let n = sys.atom_count();
        let edges: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|u| {
                (0..sys.label_count())
                    .filter_map(|l| sys.dual_map(l, u).map(|v| (l, v)))
                    .collect()
            })
            .collect();
        let adj: Vec<Vec<usize>> = edges
            .iter()
            .map(|out| out.iter().map(|&(_, v)| v).collect())
            .collect();
        let comp = tarjan(&adj);
        DualGraph { edges, comp }
    }

    /// Outgoing edges of `u` as `(label, target)`, label-ascending.
    pub fn successors(&self, u: usize) -> &[(usize, usize)] {
        &self.edges[u]
    }

    /// Component id of `u` (larger ids reach smaller ones).
    pub fn component(&self, u: usize) -> usize {
        self.comp[u]
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.comp[u] == self.comp[v]
    }

    /// Atoms reachable from `u` by forward walks, including `u`.
    pub fn reach(&self, u: usize) -> AtomSet {
        let mut seen = AtomSet::singleton(u);
        let mut queue = VecDeque::from([u]);
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &self.edges[v] {
                if !seen.contains(w) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

/// Apply the dual map of a word to one atom: `F_α(u)`, last letter first.
/// `None` when some step is undefined. The empty word is the identity.
pub fn dual_step(sys: &Bds, word: &Word, u: usize) -> Option<usize> {
    assert!(u < sys.atom_count(), "atom index {u} outside the system");
    let mut v = u;
    for &l in word.letters().iter().rev() {
        assert!(l < sys.label_count(), "word letter {l} outside the label alphabet");
        v = sys.dual_map(l, v)?;
    }
    Some(v)
}

/// Does `(α, u)` close up: `F_α(u) = u` with `α` nonempty?
pub fn is_ultrafilter_cycle(sys: &Bds, word: &Word, u: usize) -> bool {
    !word.is_empty() && dual_step(sys, word, u) == Some(u)
}

/// Return-word analysis of one atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnVerdict {
    pub atom: Atom,
    /// Some word returns to the atom.
    pub has_return: bool,
    /// Length-then-lexicographically minimal returning word, when one exists.
    pub shortest_cycle: Option<Word>,
    /// When every returning word is a power of a single primitive word, that
    /// word; `None` if there is no return or the returns genuinely branch.
    pub single_power: Option<Word>,
}

/// Decide whether the set of returning words of `u` is `{ρ, ρ², ρ³, …}` for
/// a single primitive `ρ`.
///
/// Every returning walk stays inside the strongly connected component of
/// `u`, so the check runs a product of that component with the cyclic phase
/// automaton of `ρ`: breadth-first from `(u, 0)`, following only edges with
/// both endpoints in the component. An in-component edge leaving a reachable
/// `(v, p)` with a label other than position `p` of `ρ`'s walk word can be
/// completed to a returning walk that deviates from `ρ^∞`, and re-entering
/// `u` at a nonzero phase is a return of non-multiple length; either sinks
/// the verdict. If neither occurs, induction along walks puts every return
/// in `ρ⁺`.
pub fn return_language_single_power(sys: &Bds, u: usize) -> ReturnVerdict {
    assert!(u < sys.atom_count(), "atom index {u} outside the system");
    let graph = DualGraph::new(sys);
    let atom = sys.atom(u);

    let Some(walk) = shortest_closed_walk(&graph, u) else {
        return ReturnVerdict { atom, has_return: false, shortest_cycle: None, single_power: None };
    };
    // Walks read words back to front.
    let w = Word::from_indices(walk.iter().rev().copied().collect::<Vec<_>>());
    let rho = w.primitive_root();
    let rho_walk: Vec<usize> = rho.letters().iter().rev().copied().collect();
    let m = rho_walk.len();

    let n = sys.atom_count();
    let mut seen = vec![false; n * m];
    seen[u * m] = true;
    let mut queue = VecDeque::from([(u, 0usize)]);
    let mut uniform = true;
    'bfs: while let Some((v, p)) = queue.pop_front() {
        for &(l, t) in graph.successors(v) {
            if !graph.same_component(t, u) {
                continue;
            }
            if l != rho_walk[p] {
                uniform = false;
                break 'bfs;
            }
            let q = (p + 1) % m;
            if t == u && q != 0 {
                uniform = false;
                break 'bfs;
            }
            if !seen[t * m + q] {
                seen[t * m + q] = true;
                queue.push_back((t, q));
            }
        }
    }

    ReturnVerdict {
        atom,
        has_return: true,
        shortest_cycle: Some(w),
        single_power: uniform.then_some(rho),
    }
}

/// Shortest closed walk from `u` back to `u`, as the label sequence in walk
/// order; ties broken lexicographically. Standard parent-pointer BFS where
/// only the final step may re-enter `u`: expanding labels in ascending order
/// from a FIFO queue makes the first hit length-then-lex minimal.
fn shortest_closed_walk(graph: &DualGraph, u: usize) -> Option<Vec<usize>> {
    let n = graph.edges.len();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut queue = VecDeque::from([u]);
    while let Some(v) = queue.pop_front() {
        for &(l, t) in graph.successors(v) {
            if t == u {
                let mut labels = vec![l];
                let mut cur = v;
                while cur != u {
                    let (pv, pl) = parent[cur].expect("walk reconstruction reaches the start");
                    labels.push(pl);
                    cur = pv;
                }
                labels.reverse();
                return Some(labels);
            }
            if !visited[t] {
                visited[t] = true;
                parent[t] = Some((v, l));
                queue.push_back(t);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::apply_theta;
    use crate::system::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn stepping_consumes_last_letter_first() {
        let ch = loop_with_entry();
        // F_ba = f_b ∘ f_a: a fixes x, then b sends x to y.
        assert_eq!(dual_step(&ch, &ch.word_compact("ba").unwrap(), 0), Some(1));
        // F_ab needs f_a after f_b, but a is undefined at y.
        assert_eq!(dual_step(&ch, &ch.word_compact("ab").unwrap(), 0), None);
        assert_eq!(dual_step(&ch, &Word::empty(), 1), Some(1));
    }

    #[test]
    fn ultrafilter_cycles() {
        let lp = loop_system();
        assert!(is_ultrafilter_cycle(&lp, &lp.word(["a"]).unwrap(), 0));
        assert!(!is_ultrafilter_cycle(&lp, &Word::empty(), 0));

        let sw = swap_pair();
        assert!(!is_ultrafilter_cycle(&sw, &sw.word(["a"]).unwrap(), 0));
        assert!(is_ultrafilter_cycle(&sw, &sw.word_compact("aa").unwrap(), 0));
        assert!(is_ultrafilter_cycle(&sw, &sw.word_compact("aaaa").unwrap(), 1));
    }

    #[test]
    fn reachability_and_components() {
        let ch = loop_with_entry();
        let g = DualGraph::new(&ch);
        assert_eq!(g.reach(0), AtomSet::from_iter([0, 1]));
        assert_eq!(g.reach(1), AtomSet::singleton(1));
        assert!(!g.same_component(0, 1));

        let sw = swap_pair();
        let g = DualGraph::new(&sw);
        assert!(g.same_component(0, 1));
    }

    #[test]
    fn return_words_on_standard_systems() {
        let lp = loop_system();
        let v = return_language_single_power(&lp, 0);
        assert!(v.has_return);
        assert_eq!(v.shortest_cycle, Some(lp.word(["a"]).unwrap()));
        assert_eq!(v.single_power, Some(lp.word(["a"]).unwrap()));

        // Two self-loops branch immediately.
        let dl = double_loop();
        let v = return_language_single_power(&dl, 0);
        assert!(v.has_return);
        assert_eq!(v.shortest_cycle, Some(dl.word(["a"]).unwrap()));
        assert_eq!(v.single_power, None);

        // Swap: every return has even length and reads a^{2k} = (a)^{2k}.
        let sw = swap_pair();
        let v = return_language_single_power(&sw, 0);
        assert_eq!(v.shortest_cycle, Some(sw.word_compact("aa").unwrap()));
        assert_eq!(v.single_power, Some(sw.word(["a"]).unwrap()));

        // Entry chain: the b-edge leaves the component, so x stays uniform.
        let ch = loop_with_entry();
        let v = return_language_single_power(&ch, 0);
        assert_eq!(v.single_power, Some(ch.word(["a"]).unwrap()));
        let v = return_language_single_power(&ch, 1);
        assert!(!v.has_return);
        assert_eq!(v.shortest_cycle, None);

        let de = double_loop_with_entry();
        assert_eq!(return_language_single_power(&de, 0).single_power, None);
        assert!(!return_language_single_power(&de, 1).has_return);
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
        fn theta_is_the_preimage_of_the_dual_map(
            (sys, word, am) in arb_bds().prop_flat_map(|sys| {
                let n = sys.atom_count();
                let l = sys.label_count();
                (
                    Just(sys),
                    proptest::collection::vec(0..l, 0..=4),
                    0u64..(1 << n),
                )
            })
        ) {
            let word = Word::from_indices(word);
            let a = AtomSet::from_mask(am);
            let theta = apply_theta(&sys, &word, &a);
            for v in 0..sys.atom_count() {
                let maps_in = matches!(dual_step(&sys, &word, v), Some(t) if a.contains(t));
                prop_assert_eq!(theta.contains(v), maps_in);
            }
        }

        #[test]
        fn dual_step_composes_last_letter_first(
            (sys, alpha, beta, u) in arb_bds().prop_flat_map(|sys| {
                let n = sys.atom_count();
                let l = sys.label_count();
                (
                    Just(sys),
                    proptest::collection::vec(0..l, 0..=3),
                    proptest::collection::vec(0..l, 0..=3),
                    0..n,
                )
            })
        ) {
            let (alpha, beta) = (Word::from_indices(alpha), Word::from_indices(beta));
            let chained = dual_step(&sys, &beta, u).and_then(|v| dual_step(&sys, &alpha, v));
            prop_assert_eq!(dual_step(&sys, &alpha.concat(&beta), u), chained);
        }

        #[test]
        fn reported_cycles_are_minimal_ultrafilter_cycles(
            sys in arb_bds(),
        ) {
            for u in 0..sys.atom_count() {
                let v = return_language_single_power(&sys, u);
                if let Some(w) = &v.shortest_cycle {
                    prop_assert!(is_ultrafilter_cycle(&sys, w, u));
                    // The root divides every return but need not return
                    // itself (swap: returns are (aa)⁺, the root is a).
                    if let Some(rho) = &v.single_power {
                        prop_assert!(w.is_power_of(rho));
                        prop_assert_eq!(&rho.primitive_root(), rho);
                    }
                } else {
                    prop_assert!(!v.has_return);
                }
            }
        }
    }
}
