//! Cone-induced partial orders and norms on finite-dimensional and
//! piecewise-polynomial function spaces.
//!
//! A cone `K` turns a vector space into a partially ordered space via
//! `x <= y  iff  y - x in K`.  This module provides the cones, norms and
//! order predicates used by the counterexample suites: componentwise and
//! ice-cream cones on coordinate vectors, and pointwise value (resp. value
//! plus derivative) cones on piecewise polynomials.
//!
//! Membership tests are exact for exact-rational scalars (zero tolerance)
//! and tolerance-relaxed for floats.

pub mod counterexamples;
pub mod poly;
pub mod sampling;
pub mod sequences;

use thiserror::Error;

use crate::scalar::Scalar;
use poly::{PiecewisePoly, PolyError};

/// Errors from cone, norm and sequence operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("element has the wrong shape for this space: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("sampler produced no usable pairs")]
    EmptySample,
    #[error("sample {index} violates the sampling contract: {reason}")]
    BadSample { index: usize, reason: String },
    #[error("sequence is not increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("sequence violates its bound at index {index}")]
    BoundViolated { index: usize },
    #[error("sequence tail is not convergent: Cauchy defect {defect}")]
    NotConvergent { defect: f64 },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("candidate is not an upper bound: below chain member {n} at t = {at}")]
    NotAnUpperBound { n: usize, at: String },
    #[error("candidate does not dominate chain member {n} at grid point {at}")]
    NotDominating { n: usize, at: String },
    #[error("norm {norm} is not supported here: {reason}")]
    UnsupportedNorm { norm: String, reason: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A point of one of the supported spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Element<S> {
    /// A coordinate vector.
    Vector(Vec<S>),
    /// A piecewise polynomial on a closed interval.
    Function(PiecewisePoly<S>),
}

impl<S: Scalar> Element<S> {
    pub fn vector(coords: impl Into<Vec<S>>) -> Self {
        Element::Vector(coords.into())
    }

    pub fn function(poly: PiecewisePoly<S>) -> Self {
        Element::Function(poly)
    }

    fn shape(&self) -> String {
        match self {
            Element::Vector(v) => format!("vector of length {}", v.len()),
            Element::Function(f) => {
                let (a, b) = f.interval();
                format!("function on [{a}, {b}]")
            }
        }
    }

    /// `self - other`, the difference used by order comparisons.
    pub fn sub(&self, other: &Self) -> Result<Element<S>, ConeError> {
        match (self, other) {
            (Element::Vector(a), Element::Vector(b)) if a.len() == b.len() => Ok(Element::Vector(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.clone() - y.clone())
                    .collect(),
            )),
            (Element::Function(a), Element::Function(b)) => Ok(Element::Function(a.sub(b)?)),
            _ => Err(ConeError::DimensionMismatch {
                expected: self.shape(),
                got: other.shape(),
            }),
        }
    }
}

/// The supported cone shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeKind {
    /// Nonnegative orthant of an n-dimensional coordinate space.
    Componentwise { dim: usize },
    /// `{(s, t) : |s| <= t}` in the plane.
    IceCream2d,
    /// Pointwise-nonnegative piecewise polynomials.
    PointwiseFunction,
    /// Pointwise-nonnegative value and derivative (order of a C^1 model).
    C1Pair,
}

/// A cone plus the comparison tolerance appropriate for the scalar type.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec<S> {
    pub kind: ConeKind,
    pub tolerance: S,
}

impl<S: Scalar> ConeSpec<S> {
    /// A cone with the scalar type's default tolerance (zero for exact
    /// rationals, `1e-12` for `f64`).
    pub fn new(kind: ConeKind) -> Self {
        ConeSpec {
            kind,
            tolerance: S::default_tolerance(),
        }
    }

    pub fn with_tolerance(kind: ConeKind, tolerance: S) -> Self {
        ConeSpec { kind, tolerance }
    }

    /// Whether `v` lies in the cone (within tolerance).
    pub fn contains(&self, v: &Element<S>) -> Result<bool, ConeError> {
        let tol = &self.tolerance;
        let neg_tol = -tol.clone();
        match (&self.kind, v) {
            (ConeKind::Componentwise { dim }, Element::Vector(coords)) => {
                if coords.len() != *dim {
                    return Err(ConeError::DimensionMismatch {
                        expected: format!("vector of length {dim}"),
                        got: v.shape(),
                    });
                }
                Ok(coords.iter().all(|c| *c >= neg_tol))
            }
            (ConeKind::IceCream2d, Element::Vector(coords)) => {
                if coords.len() != 2 {
                    return Err(ConeError::DimensionMismatch {
                        expected: "vector of length 2".into(),
                        got: v.shape(),
                    });
                }
                Ok(coords[0].abs() <= coords[1].clone() + tol.clone())
            }
            (ConeKind::PointwiseFunction, Element::Function(f)) => Ok(f.is_nonnegative(tol)),
            (ConeKind::C1Pair, Element::Function(f)) => {
                Ok(f.is_nonnegative(tol) && f.derivative().is_nonnegative(tol))
            }
            _ => Err(ConeError::DimensionMismatch {
                expected: match self.kind {
                    ConeKind::PointwiseFunction | ConeKind::C1Pair => "a function".into(),
                    _ => "a vector".into(),
                },
                got: v.shape(),
            }),
        }
    }

    /// The cone-induced order: `x <= y` iff `y - x` lies in the cone.
    pub fn leq(&self, x: &Element<S>, y: &Element<S>) -> Result<bool, ConeError> {
        self.contains(&y.sub(x)?)
    }
}

/// The supported norms.
#[derive(Debug, Clone, PartialEq)]
pub enum NormKind<S> {
    /// `max |v_i|` on vectors, `max |f|` on functions.
    SupAbs,
    /// `sum |v_i|` on vectors.
    Ell1,
    /// `(sum |v_i|^p)^(1/p)` on vectors; needs real powers unless `p = 1`.
    EllP { p: S },
    /// `max |f| + max |f'|` on functions.
    C1Sum,
    /// `(sum w_i |v_i|^p)^(1/p)` on vectors with quadrature weights.
    LpQuadrature { p: S, weights: Vec<S> },
}

/// A norm on one of the supported spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec<S> {
    pub kind: NormKind<S>,
}

impl<S: Scalar> NormSpec<S> {
    pub fn sup_abs() -> Self {
        NormSpec {
            kind: NormKind::SupAbs,
        }
    }

    pub fn ell1() -> Self {
        NormSpec {
            kind: NormKind::Ell1,
        }
    }

    pub fn ellp(p: S) -> Self {
        NormSpec {
            kind: NormKind::EllP { p },
        }
    }

    pub fn c1_sum() -> Self {
        NormSpec {
            kind: NormKind::C1Sum,
        }
    }

    pub fn lp_quadrature(p: S, weights: Vec<S>) -> Self {
        NormSpec {
            kind: NormKind::LpQuadrature { p, weights },
        }
    }

    fn name(&self) -> String {
        match &self.kind {
            NormKind::SupAbs => "sup_abs".into(),
            NormKind::Ell1 => "ell1".into(),
            NormKind::EllP { p } => format!("ellp({p})"),
            NormKind::C1Sum => "c1_sum".into(),
            NormKind::LpQuadrature { p, .. } => format!("lp_quadrature({p})"),
        }
    }

    /// Evaluates the norm; exact whenever the scalar type is exact and the
    /// norm needs no real roots.
    pub fn eval(&self, x: &Element<S>) -> Result<S, ConeError> {
        match (&self.kind, x) {
            (NormKind::SupAbs, Element::Vector(v)) => Ok(v
                .iter()
                .map(|c| c.abs())
                .fold(S::zero(), |acc, c| if c > acc { c } else { acc })),
            (NormKind::SupAbs, Element::Function(f)) => Ok(f.sup_norm()),
            (NormKind::Ell1, Element::Vector(v)) => {
                Ok(v.iter().fold(S::zero(), |acc, c| acc + c.abs()))
            }
            (NormKind::EllP { p }, Element::Vector(v)) => {
                if *p < S::one() {
                    return Err(ConeError::BadParams(format!(
                        "p-norm exponent must be >= 1, got {p}"
                    )));
                }
                if *p == S::one() {
                    return NormSpec::ell1().eval(x);
                }
                self.power_sum_norm(p, v.iter().map(|c| (S::one(), c)))
            }
            (NormKind::LpQuadrature { p, weights }, Element::Vector(v)) => {
                if weights.len() != v.len() {
                    return Err(ConeError::DimensionMismatch {
                        expected: format!("vector of length {}", weights.len()),
                        got: x.shape(),
                    });
                }
                if *p < S::one() {
                    return Err(ConeError::BadParams(format!(
                        "p-norm exponent must be >= 1, got {p}"
                    )));
                }
                self.power_sum_norm(p, weights.iter().cloned().zip(v.iter()))
            }
            (NormKind::C1Sum, Element::Function(f)) => {
                Ok(f.sup_norm() + f.derivative().sup_norm())
            }
            _ => Err(ConeError::UnsupportedNorm {
                norm: self.name(),
                reason: format!("not defined on {}", x.shape()),
            }),
        }
    }

    /// `(sum w |c|^p)^(1/p)` over `(w, c)` pairs, in deterministic order.
    fn power_sum_norm<'a>(
        &self,
        p: &S,
        terms: impl Iterator<Item = (S, &'a S)>,
    ) -> Result<S, ConeError>
    where
        S: 'a,
    {
        let unsupported = || ConeError::UnsupportedNorm {
            norm: self.name(),
            reason: "scalar type has no real powers".into(),
        };
        let mut sum = S::zero();
        for (w, c) in terms {
            let powered = c.abs().try_powf(p).ok_or_else(unsupported)?;
            sum = sum + w * powered;
        }
        let inv_p = S::one() / p.clone();
        sum.try_powf(&inv_p).ok_or_else(unsupported)
    }
}

/// A cone together with a norm: the ambient structure for sequence probes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec<S> {
    pub cone: ConeSpec<S>,
    pub norm: NormSpec<S>,
}

impl<S: Scalar> SpaceSpec<S> {
    pub fn new(cone: ConeSpec<S>, norm: NormSpec<S>) -> Self {
        SpaceSpec { cone, norm }
    }

    pub fn leq(&self, x: &Element<S>, y: &Element<S>) -> Result<bool, ConeError> {
        self.cone.leq(x, y)
    }

    pub fn norm(&self, x: &Element<S>) -> Result<S, ConeError> {
        self.norm.eval(x)
    }

    /// Norm distance `||x - y||`.
    pub fn distance(&self, x: &Element<S>, y: &Element<S>) -> Result<S, ConeError> {
        self.norm.eval(&x.sub(y)?)
    }
}
