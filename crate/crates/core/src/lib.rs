//! Electrostatic capacity on rotationally symmetric asymptotically flat
//! 3-manifolds: capacitary potentials, the first variation of capacity with
//! respect to the metric, harmonic-static potentials, and the round-sphere
//! maximum-capacity formulas.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod config;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod harmonicstatic;
pub mod ode;
pub mod potential;
pub mod quadrature;
pub mod variation;

pub use error::{Error, Result};
pub use geometry::{RadialFn, RadialMetric, RadialTensor, SchwarzschildParams};
pub use potential::CapacitaryPotential;
pub use quadrature::Quadrature;
