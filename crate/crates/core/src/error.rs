use thiserror::Error;

use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("exact division by {divisor} failed, remainder {remainder}")]
    NotDivisible {
        divisor: String,
        remainder: LaurentPoly,
    },

    #[error("common 1-eigenspace is trivial; the scheme cannot converge")]
    EmptyEigenspace,

    /// Eigenvalue 1 of `M_B` is defective, so `ker(M_B - I)` has no
    /// invariant complement and no canonical transformation exists.
    #[error("eigenvalue 1 of M_B is not semisimple or exceeds the common eigenspace; no canonical transformation")]
    NoCanonicalComplement,

    #[error("re-Taylorization needs beta11(1) != 2")]
    DegenerateA,

    #[error("common 1-eigenspace of the Taylor scheme is not span{{e2}}")]
    NotInTilde,

    #[error("operation needs a {expected} mask, got {found}")]
    WrongKind {
        expected: &'static str,
        found: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
