use thiserror::Error;

/// Errors surfaced by the structural operations.
///
/// Witness-carrying variants keep their payloads as rendered names so that a
/// caller without the originating [`crate::Bds`] can still report them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BdsError {
    /// A set refers to atom indices outside the system's universe.
    #[error("set uses atom index {index} but the system has {atoms} atoms")]
    UniverseMismatch { index: usize, atoms: usize },

    /// A label name does not belong to the system.
    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    /// An atom name does not belong to the system.
    #[error("unknown atom {0:?}")]
    UnknownAtom(String),

    /// Construction-time validation failure (duplicate ids, empty alphabet, …).
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// The pair handed to the cycle normalizer is not an exitless cycle.
    #[error("({word}, {base}) is not an exitless cycle: {reason}")]
    NotANoExitCycle {
        word: String,
        base: String,
        reason: String,
    },

    /// The word/atom pair does not satisfy the cyclic-witness contract.
    #[error("({word}, {atom}) is not a cyclic-tail witness: {reason}")]
    NotACyclicWitness {
        word: String,
        atom: String,
        reason: String,
    },

    /// The support handed to a tail operation is not a maximal tail.
    #[error("{support} is not a maximal tail support: {reason}")]
    NotAMaximalTail { support: String, reason: String },

    /// Quotient construction needs a hereditary, proper ideal.
    #[error("cannot form quotient by {set}: {reason}")]
    InvalidQuotient { set: String, reason: String },

    /// Enumerative operation refused: the atom count exceeds the hard cap.
    #[error("{atoms} atoms exceed the enumeration cap of {max}")]
    SizeLimit { atoms: usize, max: usize },

    /// The boundary-path space of the graph is infinite; the witness cycle
    /// can be pumped through the exit edge.
    #[error("boundary path space is infinite: cycle [{cycle}] has exit edge {exit:?}")]
    InfiniteBoundary { cycle: String, exit: String },

    /// Two independent code paths disagreed on a value they must agree on.
    #[error("internal disagreement: {0}")]
    Internal(String),
}
