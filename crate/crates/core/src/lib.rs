//! Quantum mechanics of a particle in a dispiration medium (a wedge
//! disclination combined with a screw dislocation along one axis).
//!
//! The library covers the defect geometry, the bound-state spectrum, the
//! Euclidean-time propagator with its partial-wave and winding-number
//! representations, and brute-force oracles that check each closed form.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod acceptance;
pub mod cli;
pub mod defect_geometry;
pub mod error;
pub mod numerics;
pub mod propagator;
pub mod special_functions;
pub mod spectrum;
pub mod verification_oracles;

pub use error::{Error, Result};
