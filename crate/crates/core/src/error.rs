use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {p}^{n} exceeds 2^32")]
    DegreeTooLarge { p: u32, n: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element {value} is outside a field of order {order}")]
    ElementOutOfRange { value: u64, order: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ambient spaces differ")]
    AmbientMismatch,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("group closure exceeds {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("collection is empty")]
    EmptyCollection,
    #[error("subset is empty")]
    EmptySubset,
    #[error("collection has {size} subspaces, above the configured cap of {cap}")]
    CollectionTooLarge { size: usize, cap: usize },
    #[error("group of order {order} is above the subset-enumeration cap of {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("hypothesis violated for pair ({}, {}): observed {observed} > r = {r}", pair.0, pair.1)]
    HypothesisViolated { pair: (usize, usize), observed: usize, r: usize },
    #[error("characteristic {p} divides the group order {order}")]
    CharDividesGroupOrder { p: u32, order: usize },
    #[error("subspace is not invariant under the group")]
    NotInvariant,
    #[error("subspace is not stable under Frobenius power {0}")]
    NotStable(u32),
    #[error("descent failed: {0}")]
    DescentFailed(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures that mean the input lies outside a theorem's hypotheses.
    pub fn is_hypothesis(&self) -> bool {
        matches!(self, Error::HypothesisViolated { .. } | Error::CharDividesGroupOrder { .. })
    }

    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Internal(_) | Error::DescentFailed(_) | Error::NotInvariant | Error::DivisionByZero
        )
    }

    /// Process exit code: 2 for a violated hypothesis, 4 for an internal failure, 3 for
    /// anything wrong with the input itself.
    pub fn exit_code(&self) -> i32 {
        if self.is_hypothesis() {
            2
        } else if self.is_internal() {
            4
        } else {
            3
        }
    }
}
