//! Exact computational backend for syzygies of algebraic curves.
//!
//! The crate is organised around five subsystems:
//!
//! * [`exactla`] — sparse/dense linear algebra over prime fields and exact
//!   rational arithmetic; every downstream computation reduces to ranks and
//!   kernels here.
//! * [`lattice`] — a catalog of rank-two/three and Nikulin-type Picard
//!   lattices given by explicit Gram matrices, together with certifiers that
//!   replay each nef/base-point-free/effectivity argument as a bounded
//!   enumeration with a machine-checkable verdict.
//! * [`curvemodel`] — explicit curve models over prime fields: hyperelliptic
//!   curves with divisor arithmetic and Riemann–Roch section bases, smooth
//!   plane quartics and genus-4 complete intersections, with difference
//!   variety and secant membership tests.
//! * [`koszul`] — the Koszul cohomology engine: graded Betti tables of
//!   embedded curves from point-evaluation models, with an independent
//!   minimal-resolution oracle, diagonal Euler checks and the predicted
//!   Prym-canonical tables.
//! * [`moduli`] — exact symbolic divisor-class calculus in the span of the
//!   Hodge class and the symmetric sum of cotangent classes on moduli of
//!   2g-pointed curves.

pub mod curvemodel;
pub mod exactla;
pub mod koszul;
pub mod lattice;
pub mod moduli;
