//! Exact symbol calculus for raising the smoothness of scalar, vector and
//! Hermite subdivision schemes.

pub mod catalog;
pub mod engine;
pub mod error;
pub mod exact;
pub mod hermite_smoothing;
pub mod io;
pub mod laurent;
pub mod mask;
pub mod vector_smoothing;

pub use engine::{Certificate, CertificateKind, FinSeq, LimitSample, Refusal, Verdict};
pub use error::{Error, Result};
pub use exact::{Rat, RatMatrix};
pub use laurent::{Binomial, LaurentPoly, Point, SymbolMatrix};
pub use mask::{Eigenstructure, Mask, MaskKind};
