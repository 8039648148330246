// Scalar math routed through libm so results do not depend on the `std` feature.
pub(crate) use libm::{atan2, ceil, cos, exp, fabs, floor, log, pow, sin, sqrt, tanh};

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const TAU: f64 = core::f64::consts::TAU;
