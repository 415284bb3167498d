//! The concrete ordinary integro-differential algebra: exact constants
//! over cyclotomic-extended `Q(i)[pi, e^alpha, e^pi]` and exponential
//! polynomials with derivation, cumulative integral and evaluations.

mod constant;
mod cyclotomic;
mod exppoly;
mod gauss;

pub use constant::{ConstFraction, ConstKey, ConstValue, RawConstTerm};
pub use cyclotomic::Cyclotomic;
pub use exppoly::{EvalPoint, ExpPoly, FnKey};
pub use gauss::{rat, rat_int, GaussRat, Rat};
