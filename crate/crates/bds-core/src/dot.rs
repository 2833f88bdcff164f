//! Graphviz renderings of the tail space and the ideal lattice.
//!
//! Both are drawn bottom-up (`rankdir=BT`) with one edge per covering pair
//! of the inclusion order, so the picture is the Hasse diagram. Output is
//! deterministic for a given system.

use crate::prim::{IdealLattice, TailSpace};
use crate::system::Bds;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Covering pairs of inclusion among the given masks-as-sets.
fn covers_of(sets: &[crate::algebra::AtomSet]) -> Vec<(usize, usize)> {
    let below =
        |i: usize, j: usize| i != j && sets[i].is_subset(&sets[j]);
    let mut out = Vec::new();
    for i in 0..sets.len() {
        for j in 0..sets.len() {
            if below(i, j) && !(0..sets.len()).any(|k| below(i, k) && below(k, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// The specialization order of the tail space as a Hasse diagram. An edge
/// `T → S` means `T` lies in the closure of `S` with nothing in between;
/// closed points sit at the bottom, dense points at the top.
pub fn tail_space_dot(sys: &Bds, space: &TailSpace) -> String {
    let supports: Vec<_> = space.tails().iter().map(|t| t.support.clone()).collect();
    let mut out = String::from("digraph tail_space {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, w) in supports.iter().enumerate() {
        out.push_str(&format!("  t{i} [label=\"W={}\"];\n", escape(&sys.render_set(w))));
    }
    for (i, j) in covers_of(&supports) {
        out.push_str(&format!("  t{i} -> t{j};\n"));
    }
    out.push_str("}\n");
    out
}

/// The ideal lattice as a Hasse diagram. Prime ideals (complements of
/// maximal tails) are doubly framed. The graph label records whether the
/// lattice is complete for the associated algebra.
pub fn ideal_lattice_dot(sys: &Bds, lattice: &IdealLattice) -> String {
    let mut out = String::from("digraph ideal_lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    out.push_str(&format!("  label=\"{}\";\n", escape(&lattice.description)));
    for (i, h) in lattice.ideals.iter().enumerate() {
        let frame = if lattice.prime[i] { ", peripheries=2" } else { "" };
        out.push_str(&format!(
            "  i{i} [label=\"H={}\"{frame}];\n",
            escape(&sys.render_set(&h.atoms))
        ));
    }
    for &(i, j) in &lattice.covers {
        out.push_str(&format!("  i{i} -> i{j};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prim::{build_tail_space, ideal_lattice};
    use crate::system::fixtures::*;

    #[test]
    fn single_point_space() {
        let lp = loop_system();
        let dot = tail_space_dot(&lp, &build_tail_space(&lp).unwrap());
        assert_eq!(
            dot,
            "digraph tail_space {\n  rankdir=BT;\n  node [shape=box];\n  t0 [label=\"W={x}\"];\n}\n"
        );
    }

    #[test]
    fn sierpinski_space_and_chain_lattice() {
        let de = double_loop_with_entry();
        let dot = tail_space_dot(&de, &build_tail_space(&de).unwrap());
        assert!(dot.contains("t0 [label=\"W={x}\"]"));
        assert!(dot.contains("t1 [label=\"W={x,y}\"]"));
        assert!(dot.contains("t0 -> t1;"));

        let dot = ideal_lattice_dot(&de, &ideal_lattice(&de).unwrap());
        assert!(dot.contains("label=\"complete ideal lattice"));
        assert!(dot.contains("i0 [label=\"H={}\", peripheries=2]"));
        assert!(dot.contains("i1 [label=\"H={y}\", peripheries=2]"));
        assert!(dot.contains("i2 [label=\"H={x,y}\"]"));
        assert!(dot.contains("i0 -> i1;"));
        assert!(dot.contains("i1 -> i2;"));
        assert!(!dot.contains("i0 -> i2;"));
    }

    #[test]
    fn escaping() {
        let sys = Bds::build(["x\"y"], ["a"], [("a", "x\"y", "x\"y")]).unwrap();
        let dot = tail_space_dot(&sys, &build_tail_space(&sys).unwrap());
        assert!(dot.contains("W={x\\\"y}"));
    }
}
