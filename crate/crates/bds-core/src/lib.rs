//! Structural analysis of finite Boolean dynamical systems.
//!
//! A *Boolean dynamical system* here is the powerset algebra of a finite atom
//! set together with one ∅-preserving endomorphism per label. Every such
//! endomorphism is the preimage map of a partial function on atoms (the *dual
//! map*), so a system is specified by `⟨atoms; labels; one partial map per
//! label⟩` and everything downstream is finite combinatorics.
//!
//! The library decides the two exit conditions that control the ideal theory
//! of the associated operator algebra:
//!
//! * **Condition (L)**: every cycle has an exit ([`check_condition_l`]);
//! * **Condition (K)**: no quotient by a hereditary saturated ideal acquires
//!   an exitless cycle ([`decide_k_direct`], [`decide_k_via_quotients`]).
//!
//! Around these sit the supporting structure: hereditary saturated ideals and
//! their lattice ([`enumerate_hs_ideals`], [`ideal_lattice`]), maximal tails
//! and their cyclicity witnesses ([`enumerate_maximal_tails`]), the finite
//! topological space of tails ([`build_tail_space`], [`prim_report`]), and two
//! constructions that turn a finite directed graph into a system
//! ([`vertex_construction`], [`boundary_construction`]) for cross-checking
//! against the purely graph-theoretic decider [`graph_condition_k`].
//!
//! ```
//! use bds_core::{Bds, check_condition_l, decide_k_direct};
//!
//! // One atom, two self-loop labels: every cycle has an exit.
//! let sys = Bds::build(["x"], ["a", "b"], [("a", "x", "x"), ("b", "x", "x")]).unwrap();
//! assert!(check_condition_l(&sys).holds);
//! assert!(decide_k_direct(&sys).satisfied);
//! ```

mod algebra;
mod condition_k;
pub mod document;
pub mod dot;
mod dual;
mod dynamics;
mod error;
mod graph;
mod prim;
pub mod sampling;
mod scc;
mod system;
mod tails;

pub use algebra::{quotient_class, AlgebraIdeal, AtomSet, SetOps, Ultrafilter};
pub use condition_k::{
    corner_obstructions, decide_k_direct, decide_k_via_quotients, decide_k_via_tails,
    decide_strong_k, CornerObstruction, KMethod, KVerdict, KWitness,
};
pub use dual::{
    dual_step, is_ultrafilter_cycle, return_language_single_power, DualGraph, ReturnVerdict,
};
pub use dynamics::{
    apply_theta, check_condition_l, classify_set, cycle_check, is_locally_finite,
    normalize_no_exit_cycle, range_set, ConditionLVerdict, CycleStatus, CycleWitness,
    ExitWitness, RangeInfo, SetClass,
};
pub use error::BdsError;
pub use graph::{
    boundary_construction, boundary_paths, graph_condition_k, vertex_construction, BoundaryPath,
    Edge, GraphKVerdict, GraphKWitness, GraphSpec,
};
pub use prim::{build_tail_space, ideal_lattice, prim_report, IdealLattice, PrimReport, TailSpace};
pub use system::fixtures;
pub use system::{Atom, Bds, Word};
pub use tails::{
    enumerate_hs_ideals, enumerate_maximal_tails, is_cyclic_tail, is_hereditary, is_maximal_tail,
    is_saturated, quotient_bds, saturation_closure, tail_from_ultrafilter_cycle, CyclicWitness,
    HsIdeal, MaximalTail,
};

/// Hard cap on the atom count for the enumerative operations (ideal and tail
/// enumeration, the quotient-based Condition (K) decider, the tail space).
/// Everything behind this cap walks all `2^n` subsets of the atom set.
pub const MAX_ENUM_ATOMS: usize = 20;
