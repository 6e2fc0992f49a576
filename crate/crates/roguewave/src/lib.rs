//! A rogue-wave model on the 1-D Saint-Venant equations with Strickler
//! friction.
//!
//! The water surface is built from two traveling source-wave profiles, each a
//! straight line `m = a q - b` in the `(q, m)` phase plane: a West wave
//! referred to the still state `(q_0, 0)` and an East wave referred to
//! `(q_star, 0)`. The branches meet at the junction depth `q_p`. Because the
//! West branch travels slightly faster, a discontinuity grows at the junction;
//! [`shock`] tracks its position and left/right states over time, and [`fv`]
//! provides an independent first-order finite-volume solver of the same
//! system for validation.
//!
//! All numerics are generic over the scalar type through [`scalar::Real`];
//! the `*64` aliases below pin the common double-precision instantiation.

// Negated comparisons like `!(v > T::zero())` are deliberate: they reject
// NaN, which plain `v <= T::zero()` would wave through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod fv;
pub mod model;
pub mod numerics;
pub mod profiles;
pub mod scalar;
pub mod shock;

pub use scalar::Real;

/// Double-precision physical constants.
pub type PhysicalConstants64 = model::PhysicalConstants<f64>;
/// Double-precision scenario configuration.
pub type WaveConfig64 = model::WaveConfig<f64>;
/// Double-precision profile branch.
pub type ProfileBranch64 = profiles::ProfileBranch<f64>;
/// Double-precision shock state.
pub type ShockState64 = shock::ShockState<f64>;
/// Double-precision simulation record.
pub type SimulationRecord64 = shock::SimulationRecord<f64>;
/// Double-precision finite-volume grid.
pub type FvGrid64 = fv::FvGrid<f64>;
