//! Order-theoretic fixed-point toolkit: cones, chains and monotone
//! iteration, machine-checked.
//!
//! The crate has three layers:
//!
//! * [`cone`] — cone-induced partial orders and norms on coordinate and
//!   piecewise-polynomial spaces, with exact-rational counterexample chains
//!   separating completeness, normality and regularity properties.
//! * [`poset`] — finite partially ordered sets: chain-completeness and
//!   inductivity certificates, set-valued isotone maps, fixed-point
//!   existence checks and lattice iteration.
//! * [`hammerstein`] — discretized kernel-integral equations solved by
//!   monotone iteration from the zero function, with auditable
//!   growth/monotonicity conditions and an independent oracle for
//!   separable problems.
//!
//! Everything numeric is generic over a [`scalar::Scalar`] type; exact
//! results use [`Rational`], floating results use `f64`.  Verification
//! routines return [`report::ClaimReport`]s — flat lists of
//! claim/expected/measured/pass records that serialize to stable JSON.

pub mod cone;
pub mod hammerstein;
pub mod poset;
pub mod report;
pub mod scalar;

/// Exact rational scalar used by all zero-tolerance checks.
pub type Rational = num::BigRational;

/// Exact piecewise polynomial on a closed rational interval.
pub type RationalPoly = cone::poly::PiecewisePoly<Rational>;

/// A point of an exact-rational ordered space.
pub type RationalElement = cone::Element<Rational>;

pub use report::{Claim, ClaimReport};
pub use scalar::{RealScalar, Scalar};
