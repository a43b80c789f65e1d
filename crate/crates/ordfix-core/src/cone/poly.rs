//! Piecewise polynomials of degree at most two with exact extrema.
//!
//! A [`PiecewisePoly`] is a function on a closed interval `[a, b]` given by
//! contiguous segments, each carrying coefficients `[c0, c1, c2]` for
//! `c0 + c1 t + c2 t^2`.  Because every segment has degree <= 2, minima and
//! maxima are attained at segment endpoints or at the interior vertex
//! `-c1 / (2 c2)`, all of which need only field operations — so over exact
//! rationals every norm, order comparison and distance below is exact.
//!
//! At an interior breakpoint where the two adjacent segments disagree,
//! [`PiecewisePoly::eval`] takes the left segment's value; continuity is a
//! checkable property ([`PiecewisePoly::value_jumps`]), not an invariant.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{parse_rational, Scalar};
use crate::Rational;

/// Errors from constructing or combining piecewise polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("a piecewise polynomial needs at least one segment")]
    EmptySegments,
    #[error("segment {index} is degenerate: `from` must be strictly below `to`")]
    BadSegment { index: usize },
    #[error("segment {index} does not start where segment {} ends", index - 1)]
    NotContiguous { index: usize },
    #[error("operands are defined on different intervals")]
    DomainMismatch,
    #[error("pointwise min/max crossing on segment {index} has no exact representation")]
    IrrationalCrossing { index: usize },
}

/// One polynomial piece `c0 + c1 t + c2 t^2` on `[from, to]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment<S> {
    pub from: S,
    pub to: S,
    pub coeffs: [S; 3],
}

impl<S: Scalar> Segment<S> {
    pub fn new(from: S, to: S, coeffs: [S; 3]) -> Self {
        Segment { from, to, coeffs }
    }

    fn eval(&self, t: &S) -> S {
        let [c0, c1, c2] = &self.coeffs;
        c0.clone() + t.clone() * (c1.clone() + t.clone() * c2.clone())
    }

    /// Extremal values of the piece on `[lo, hi] ∩ [from, to]`.
    fn extrema_on(&self, lo: &S, hi: &S) -> Option<(S, S)> {
        let lo = if lo > &self.from { lo } else { &self.from };
        let hi = if hi < &self.to { hi } else { &self.to };
        if lo > hi {
            return None;
        }
        let mut min = self.eval(lo);
        let mut max = self.eval(hi);
        if max < min {
            std::mem::swap(&mut min, &mut max);
        }
        let c2 = &self.coeffs[2];
        if !c2.is_zero() {
            let two = S::from_int(2);
            let vertex = -self.coeffs[1].clone() / (two * c2.clone());
            if &vertex > lo && &vertex < hi {
                let v = self.eval(&vertex);
                if v < min {
                    min = v;
                } else if v > max {
                    max = v;
                }
            }
        }
        Some((min, max))
    }
}

/// A contiguous, ordered list of polynomial segments on a closed interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly<S> {
    segments: Vec<Segment<S>>,
}

impl<S: Scalar> PiecewisePoly<S> {
    /// Validates that the segments are nondegenerate and contiguous.
    pub fn new(segments: Vec<Segment<S>>) -> Result<Self, PolyError> {
        if segments.is_empty() {
            return Err(PolyError::EmptySegments);
        }
        for (index, seg) in segments.iter().enumerate() {
            if seg.from >= seg.to {
                return Err(PolyError::BadSegment { index });
            }
            if index > 0 && segments[index - 1].to != seg.from {
                return Err(PolyError::NotContiguous { index });
            }
        }
        Ok(PiecewisePoly { segments })
    }

    /// The constant function `c` on `[a, b]`.
    pub fn constant(a: S, b: S, c: S) -> Self {
        PiecewisePoly {
            segments: vec![Segment::new(a, b, [c, S::zero(), S::zero()])],
        }
    }

    /// The identity-based line `c0 + c1 t` on `[a, b]`.
    pub fn line(a: S, b: S, c0: S, c1: S) -> Self {
        PiecewisePoly {
            segments: vec![Segment::new(a, b, [c0, c1, S::zero()])],
        }
    }

    pub fn segments(&self) -> &[Segment<S>] {
        &self.segments
    }

    pub fn interval(&self) -> (&S, &S) {
        (
            &self.segments[0].from,
            &self.segments[self.segments.len() - 1].to,
        )
    }

    /// Evaluates at `t`; `None` outside the interval.  At interior jump
    /// points the left segment wins.
    pub fn eval(&self, t: &S) -> Option<S> {
        self.segments
            .iter()
            .find(|seg| &seg.from <= t && t <= &seg.to)
            .map(|seg| seg.eval(t))
    }

    /// The piecewise derivative (one-sided at breakpoints): the derivative
    /// of `c0 + c1 t + c2 t^2` is `c1 + 2 c2 t` on each segment.
    pub fn derivative(&self) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|seg| {
                Segment::new(
                    seg.from.clone(),
                    seg.to.clone(),
                    [
                        seg.coeffs[1].clone(),
                        seg.coeffs[2].clone() * S::from_int(2),
                        S::zero(),
                    ],
                )
            })
            .collect();
        PiecewisePoly { segments }
    }

    /// Breakpoints of this polynomial, interval endpoints included.
    fn breakpoints(&self) -> Vec<S> {
        let mut points = Vec::with_capacity(self.segments.len() + 1);
        points.push(self.segments[0].from.clone());
        for seg in &self.segments {
            points.push(seg.to.clone());
        }
        points
    }

    /// Rebuilds `self` over the union of both operands' breakpoints.
    fn aligned_with(&self, other: &Self) -> Result<(Vec<Segment<S>>, Vec<Segment<S>>), PolyError> {
        if self.interval().0 != other.interval().0 || self.interval().1 != other.interval().1 {
            return Err(PolyError::DomainMismatch);
        }
        let mut cuts = self.breakpoints();
        cuts.extend(other.breakpoints());
        cuts.sort_by(|a, b| a.partial_cmp(b).expect("breakpoints must be comparable"));
        cuts.dedup();
        Ok((self.cut_at(&cuts), other.cut_at(&cuts)))
    }

    fn cut_at(&self, cuts: &[S]) -> Vec<Segment<S>> {
        let mut out = Vec::with_capacity(cuts.len() - 1);
        for window in cuts.windows(2) {
            let (lo, hi) = (&window[0], &window[1]);
            let seg = self
                .segments
                .iter()
                .find(|seg| &seg.from <= lo && hi <= &seg.to)
                .expect("cut points refine existing segments");
            out.push(Segment::new(lo.clone(), hi.clone(), seg.coeffs.clone()));
        }
        out
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&[S; 3], &[S; 3]) -> [S; 3],
    ) -> Result<Self, PolyError> {
        let (left, right) = self.aligned_with(other)?;
        let segments = left
            .into_iter()
            .zip(right)
            .map(|(a, b)| {
                let coeffs = f(&a.coeffs, &b.coeffs);
                Segment::new(a.from, a.to, coeffs)
            })
            .collect();
        Ok(PiecewisePoly { segments }.merged())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.zip_with(other, |a, b| {
            [
                a[0].clone() + b[0].clone(),
                a[1].clone() + b[1].clone(),
                a[2].clone() + b[2].clone(),
            ]
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.zip_with(other, |a, b| {
            [
                a[0].clone() - b[0].clone(),
                a[1].clone() - b[1].clone(),
                a[2].clone() - b[2].clone(),
            ]
        })
    }

    pub fn scale(&self, k: &S) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|seg| {
                Segment::new(
                    seg.from.clone(),
                    seg.to.clone(),
                    [
                        seg.coeffs[0].clone() * k.clone(),
                        seg.coeffs[1].clone() * k.clone(),
                        seg.coeffs[2].clone() * k.clone(),
                    ],
                )
            })
            .collect();
        PiecewisePoly { segments }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    /// Coalesces adjacent segments that share coefficients.
    fn merged(self) -> Self {
        let mut segments: Vec<Segment<S>> = Vec::with_capacity(self.segments.len());
        for seg in self.segments {
            match segments.last_mut() {
                Some(prev) if prev.coeffs == seg.coeffs && prev.to == seg.from => {
                    prev.to = seg.to;
                }
                _ => segments.push(seg),
            }
        }
        PiecewisePoly { segments }
    }

    /// Exact minimum over the whole interval.
    pub fn min_value(&self) -> S {
        let (a, b) = (self.interval().0.clone(), self.interval().1.clone());
        self.min_on(&a, &b).expect("interval is nonempty")
    }

    /// Exact maximum over the whole interval.
    pub fn max_value(&self) -> S {
        let (a, b) = (self.interval().0.clone(), self.interval().1.clone());
        self.max_on(&a, &b).expect("interval is nonempty")
    }

    /// Exact minimum over `[lo, hi]` (intersected with the interval).
    pub fn min_on(&self, lo: &S, hi: &S) -> Option<S> {
        self.segments
            .iter()
            .filter_map(|seg| seg.extrema_on(lo, hi))
            .map(|(min, _)| min)
            .min_by(|a, b| a.partial_cmp(b).expect("values must be comparable"))
    }

    /// Exact maximum over `[lo, hi]` (intersected with the interval).
    pub fn max_on(&self, lo: &S, hi: &S) -> Option<S> {
        self.segments
            .iter()
            .filter_map(|seg| seg.extrema_on(lo, hi))
            .map(|(_, max)| max)
            .max_by(|a, b| a.partial_cmp(b).expect("values must be comparable"))
    }

    /// Exact uniform norm `max |f|`.
    pub fn sup_norm(&self) -> S {
        let lo = self.min_value().abs();
        let hi = self.max_value().abs();
        if lo > hi {
            lo
        } else {
            hi
        }
    }

    /// Whether `f >= -tol` everywhere.
    pub fn is_nonnegative(&self, tol: &S) -> bool {
        self.min_value() >= -tol.clone()
    }

    pub fn is_identically_zero(&self) -> bool {
        self.segments
            .iter()
            .all(|seg| seg.coeffs.iter().all(|c| c.is_zero()))
    }

    /// `(breakpoint, left value, right value)` at every interior breakpoint
    /// where the adjacent segments disagree by more than `tol`.
    pub fn value_jumps(&self, tol: &S) -> Vec<(S, S, S)> {
        let mut jumps = Vec::new();
        for pair in self.segments.windows(2) {
            let at = &pair[0].to;
            let left = pair[0].eval(at);
            let right = pair[1].eval(at);
            if (left.clone() - right.clone()).abs() > *tol {
                jumps.push((at.clone(), left, right));
            }
        }
        jumps
    }

    pub fn is_continuous(&self, tol: &S) -> bool {
        self.value_jumps(tol).is_empty()
    }

    /// Exact pointwise minimum.  Fails with [`PolyError::IrrationalCrossing`]
    /// when two pieces cross at a point the scalar type cannot represent
    /// (never the case for floats, and only for non-square discriminants
    /// over exact rationals).
    pub fn pointwise_min(&self, other: &Self) -> Result<Self, PolyError> {
        let (left, right) = self.aligned_with(other)?;
        let mut segments = Vec::new();
        for (index, (a, b)) in left.iter().zip(&right).enumerate() {
            let diff = [
                a.coeffs[0].clone() - b.coeffs[0].clone(),
                a.coeffs[1].clone() - b.coeffs[1].clone(),
                a.coeffs[2].clone() - b.coeffs[2].clone(),
            ];
            let mut cuts = vec![a.from.clone()];
            cuts.extend(
                crossing_points(&diff, &a.from, &a.to)
                    .map_err(|_| PolyError::IrrationalCrossing { index })?,
            );
            cuts.push(a.to.clone());
            for window in cuts.windows(2) {
                let (lo, hi) = (&window[0], &window[1]);
                if lo >= hi {
                    continue;
                }
                let winner = if diff_sign(&diff, lo, hi) <= 0 { a } else { b };
                segments.push(Segment::new(lo.clone(), hi.clone(), winner.coeffs.clone()));
            }
        }
        Ok(PiecewisePoly { segments }.merged())
    }
}

/// Sign of `d` on `(lo, hi)`, a crossing-free open interval: samples interior
/// points until one is nonzero; all-zero samples mean `d` vanishes there.
fn diff_sign<S: Scalar>(d: &[S; 3], lo: &S, hi: &S) -> i8 {
    let eval = |t: &S| d[0].clone() + t.clone() * (d[1].clone() + t.clone() * d[2].clone());
    for (num, den) in [(1, 2), (1, 4), (3, 4)] {
        let t = lo.clone() + (hi.clone() - lo.clone()) * S::ratio(num, den);
        let v = eval(&t);
        if v.is_positive() {
            return 1;
        }
        if v.is_negative() {
            return -1;
        }
    }
    0
}

/// Points strictly inside `(lo, hi)` where the degree-<=-2 polynomial `d`
/// changes sign, in increasing order.  `Err(())` when a sign change exists
/// but its location is not representable in `S`.
fn crossing_points<S: Scalar>(d: &[S; 3], lo: &S, hi: &S) -> Result<Vec<S>, ()> {
    let [c0, c1, c2] = d;
    let mut roots: Vec<S> = Vec::new();
    if c2.is_zero() {
        if !c1.is_zero() {
            roots.push(-c0.clone() / c1.clone());
        }
        // Constant difference never crosses.
    } else {
        let two = S::from_int(2);
        let four = S::from_int(4);
        let disc = c1.clone() * c1.clone() - four * c2.clone() * c0.clone();
        if disc.is_positive() {
            match disc.try_sqrt() {
                Some(sq) => {
                    let denom = two * c2.clone();
                    roots.push((-c1.clone() - sq.clone()) / denom.clone());
                    roots.push((-c1.clone() + sq) / denom);
                }
                None => {
                    // Irrational simple roots: only an error if one actually
                    // falls inside the open interval.  Detect via sign
                    // comparison at the endpoints and vertex.
                    let vertex = -c1.clone() / (two.clone() * c2.clone());
                    let eval = |t: &S| {
                        d[0].clone() + t.clone() * (d[1].clone() + t.clone() * d[2].clone())
                    };
                    let candidates = if &vertex > lo && &vertex < hi {
                        vec![eval(lo), eval(&vertex), eval(hi)]
                    } else {
                        vec![eval(lo), eval(hi)]
                    };
                    let has_pos = candidates.iter().any(|v| v.is_positive());
                    let has_neg = candidates.iter().any(|v| v.is_negative());
                    if has_pos && has_neg {
                        return Err(());
                    }
                    return Ok(Vec::new());
                }
            }
        }
        // disc <= 0: at most a touching double root, no sign change.
    }
    roots.retain(|r| r > lo && r < hi);
    roots.sort_by(|a, b| a.partial_cmp(b).expect("roots must be comparable"));
    roots.dedup();
    Ok(roots)
}

impl<S: Scalar> fmt::Display for PiecewisePoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.interval();
        write!(f, "piecewise[{a}, {b}; {} segments]", self.segments.len())
    }
}

// --- JSON interchange for the exact-rational instantiation ------------------
//
// Schema: {"interval": ["a", "b"],
//          "segments": [{"from": "p/q", "to": "p/q",
//                        "coeffs": ["c0", "c1", "c2"]}, ...]}
// with every rational rendered as a `"p/q"` (or plain integer) string.

#[derive(Serialize, Deserialize)]
struct PolyWire {
    interval: [String; 2],
    segments: Vec<SegmentWire>,
}

#[derive(Serialize, Deserialize)]
struct SegmentWire {
    from: String,
    to: String,
    coeffs: [String; 3],
}

fn rational_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Serialize for PiecewisePoly<Rational> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let (a, b) = self.interval();
        let wire = PolyWire {
            interval: [rational_text(a), rational_text(b)],
            segments: self
                .segments
                .iter()
                .map(|seg| SegmentWire {
                    from: rational_text(&seg.from),
                    to: rational_text(&seg.to),
                    coeffs: [
                        rational_text(&seg.coeffs[0]),
                        rational_text(&seg.coeffs[1]),
                        rational_text(&seg.coeffs[2]),
                    ],
                })
                .collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PiecewisePoly<Rational> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = PolyWire::deserialize(deserializer)?;
        let parse = |text: &str| {
            parse_rational(text)
                .ok_or_else(|| D::Error::custom(format!("bad rational literal {text:?}")))
        };
        let segments = wire
            .segments
            .iter()
            .map(|seg| {
                Ok(Segment::new(
                    parse(&seg.from)?,
                    parse(&seg.to)?,
                    [
                        parse(&seg.coeffs[0])?,
                        parse(&seg.coeffs[1])?,
                        parse(&seg.coeffs[2])?,
                    ],
                ))
            })
            .collect::<Result<Vec<_>, D::Error>>()?;
        let poly = PiecewisePoly::new(segments).map_err(D::Error::custom)?;
        let (a, b) = poly.interval();
        if *a != parse(&wire.interval[0])? || *b != parse(&wire.interval[1])? {
            return Err(D::Error::custom(
                "interval field disagrees with segment endpoints",
            ));
        }
        Ok(poly)
    }
}
