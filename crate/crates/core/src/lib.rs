//! Exact computation of the three term relations connecting basic
//! hypergeometric series whose parameters differ by integer powers of `q`.
//!
//! For a shift triple `(k, l, m)` the series `phi(a q^k, b q^l; c q^m; q, x)`
//! is a linear combination `Q * phi(aq, bq; cq; q, x) + R * phi(a, b; c; q, x)`
//! with coefficients `Q`, `R` that are rational functions of `x` over the
//! (exact rational) parameters. This crate computes the pair by three
//! independent algorithms whose agreement is checked exactly:
//!
//! * route `T2` — ascending series expansion: a case-split polynomial built
//!   from terminating sums of four-upper/three-lower shape;
//! * route `T3` — descending series expansion: a second case-split
//!   polynomial with its own prefactors, proportional to the first;
//! * route `OP` — operator algebra: compose one first-order contiguity
//!   factor per unit shift and reduce modulo the second-order q-difference
//!   operator annihilating the base series.
//!
//! Everything is exact: scalars are arbitrary-precision rationals, rational
//! functions are kept in canonical reduced form, and "numeric" verification
//! compares exact partial sums under certified truncation bounds.

pub mod coefficients;
pub mod error;
pub mod operator;
pub mod params;
pub mod poly;
pub mod qpoch;
pub mod qseries;
pub mod rat;
pub mod scalar;
pub mod sweep;
pub mod threeterm;

pub use coefficients::{CoeffContext, ShiftTriple};
pub use error::{Error, Result, Violation};
pub use operator::{QDiffOp, ReducedOp};
pub use params::{default_param_sets, GenericityCertificate, ParamSet};
pub use poly::PolyX;
pub use qpoch::{in_q_power_lattice, qpoch, qpoch_x};
pub use qseries::{Certified, PhiSpec};
pub use rat::RatX;
pub use scalar::{parse_scalar, Scalar};
pub use sweep::{run_sweep, SweepCheck, SweepConfig, SweepReport};
pub use threeterm::{qr, Route, ThreeTermCoeffs};
