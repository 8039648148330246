//! Numerical machinery for pull-back Carleson measures on the unit disk.
//!
//! The crate is `no_std` (it needs `alloc`) so that the numerical kernels can be
//! embedded anywhere. IO, configuration and the command line live in the
//! `carleson-lab` companion crate.
//!
//! Module map:
//!
//! - [`geometry`]: points of the disk and half-plane, the Cayley transform, the
//!   exponential transfer `E(z) = exp(-pi z)`, pseudo-hyperbolic metrics, regions
//!   and the dyadic grid on `Omega = (0,2) x (-1,1)`.
//! - [`measures`]: densities and exact samplers for the weighted Bergman measure
//!   and its transfers, plus the integration engine.
//! - [`selfmaps`]: certified analytic maps between the disk and the half-plane.
//! - [`pullback`]: window pull-backs, Carleson profiles, the scaling experiment
//!   and the tail-inequality audits.
//! - [`czdecomp`]: conditional expectations, the dyadic maximal function and the
//!   Calderon-Zygmund stopping-time decomposition.
//! - [`orlicz`]: Orlicz functions and compactness indicators.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod czdecomp;
mod error;
mod exec;
pub mod geometry;
mod math;
pub mod measures;
pub mod orlicz;
pub mod pullback;
pub mod quadrature;
pub mod rng;
pub mod selfmaps;
pub mod stats;
mod tally;

pub use error::{Error, Result};
pub use geometry::{ComplexPoint, Domain, DyadicIndex, Rect, Region};
pub use measures::{Estimate, IntegrationConfig, MeasureKind, Method, WeightParameter};
pub use selfmaps::HoloMap;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
