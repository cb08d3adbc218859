use num_bigint::BigInt;

/// Domain errors shared by every module of the crate.
///
/// `Invalid` marks malformed payloads (shape or schema violations found
/// after parsing); everything else is a mathematical precondition failure
/// on well-formed data.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("not prime: the quotient lattice has torsion (invariant factor {factor} > 1)")]
    NotPrime { factor: BigInt },

    #[error("no origin: the kernel of A contains no strictly positive vector")]
    NoOrigin,

    #[error("ker B trivial: the monomial kernel is zero, so no obstruction exists")]
    KerBTrivial,

    #[error("not pointed: the cone contains a line")]
    NotPointed,

    #[error("search budget exceeded: examined {examined} fiber selections of cap {budget}")]
    SearchBudgetExceeded { examined: u64, budget: u64 },

    #[error("unbounded fiber: column {column} of the basis matrix has no positive entry")]
    UnboundedFiber { column: usize },

    #[error("empty fiber: divisor column for prime {prime} has no nonnegative preimage")]
    EmptyFiber { prime: String },

    #[error("divisor column for prime {prime} is not in the kernel of A")]
    ColumnNotInKernel { prime: String },

    #[error("missing diagonal row: no row of the basis matrix is supported only at column {column}")]
    MissingDiagonalRow { column: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for errors that indicate malformed input rather than a
    /// mathematical precondition failure.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Invalid(_))
    }
}
