//! Exact symbolic algebra of integro-differential operators, with solvers
//! for regular and singular boundary problems of linear ODEs: Green's
//! operators and functions, composition and factorization, compatibility
//! conditions and generalized Green's operators.

pub mod error;
pub mod funcalg;
pub mod linalg;
pub mod opalg;
pub mod rewrite;
pub mod boundary;
pub mod singular;
pub mod text;

pub use error::{Error, Result};
