//! Root finding and quadrature primitives shared by the model.
//!
//! Everything that needs a root in this crate bisects: all solved functions
//! are monotone on their brackets, where bisection cannot be fooled.

pub mod bisect;
pub mod quad;

pub use bisect::{bisect, expand_upper, BisectError, Bisection, Root};
pub use quad::{integrate, QuadError, Quadrature};
