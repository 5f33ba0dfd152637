//! Exact constructions of group-invariant approximations to almost-invariant subspaces,
//! operators and subsets over finite fields, each returned with a checkable certificate.

pub mod conjecture;
pub mod error;
pub mod field;
pub mod galois;
pub mod group;
pub mod io;
pub mod matrix;
pub mod operator;
pub mod set_majority;
pub mod subspace;
pub mod verify;
pub mod wagner;

pub use error::{Error, Result};
pub use field::{build_field, Field, FieldElement, FieldOp, FieldSpec};
pub use group::{MatrixGroup, PermGroup, SemilinearElement};
pub use matrix::Matrix;
pub use subspace::Subspace;
pub use wagner::{wagner_approximate, WagnerCertificate};
