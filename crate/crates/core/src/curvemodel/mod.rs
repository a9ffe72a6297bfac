//! Explicit curve models over prime fields: hyperelliptic curves with exact
//! divisor arithmetic and Riemann-Roch bases, smooth plane quartics, and
//! genus-4 canonical complete intersections.

pub mod hyperelliptic;
pub mod ops;
pub mod genus4;
pub mod quartic;
pub mod poly;

pub use hyperelliptic::{CurveError, Divisor, HyperellipticCurve, Place, RRBasis};
