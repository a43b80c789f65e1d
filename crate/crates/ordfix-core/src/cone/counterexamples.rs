//! Builtin chain families in partially ordered normed spaces, with exact
//! machine verification of their cited properties.
//!
//! Five named fixtures construct increasing chains that separate the
//! classical completeness, normality and regularity notions:
//!
//! * `lemma_2_4` — continuous ramps on `[0, 2]` under the pointwise order:
//!   an increasing norm-one chain with pairwise distances `1 - m/n`.
//! * `example_2_7` — indicator-prefix vectors under the componentwise
//!   order: pairwise distance exactly one, supremum the all-ones vector.
//! * `lemma_2_8` — ramps rising after `t = 1`: every continuous upper bound
//!   can be strictly improved, so the chain has no least upper bound.
//! * `lemma_2_9` — a smooth chain under the value-and-derivative order
//!   whose pointwise limit has a derivative jump, so no smooth function can
//!   be a least upper bound in the ball of radius two.
//! * `lemma_2_11` — constant-norm segments inside the planar ice-cream
//!   cone: increasing chains of equal norm that still converge.
//!
//! All chain members are exact rational objects; every claim checked here
//! is decided with zero tolerance unless stated otherwise.

use std::fmt;
use std::str::FromStr;

use num::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::report::{Claim, ClaimReport};
use crate::scalar::{format_rational, rat, Scalar};
use crate::Rational;

use super::poly::{PiecewisePoly, Segment};
use super::sequences::{
    cauchy_defect, componentwise_sup, regularity_probe, sup_of_increasing_sequence,
    RegularityBound,
};
use super::{ConeError, ConeKind, ConeSpec, Element, NormSpec, SpaceSpec};

/// Names of the builtin chain fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainName {
    Lemma2_4,
    Example2_7,
    Lemma2_8,
    Lemma2_9,
    Lemma2_11,
}

impl ChainName {
    pub const ALL: [ChainName; 5] = [
        ChainName::Lemma2_4,
        ChainName::Example2_7,
        ChainName::Lemma2_8,
        ChainName::Lemma2_9,
        ChainName::Lemma2_11,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ChainName::Lemma2_4 => "lemma_2_4",
            ChainName::Example2_7 => "example_2_7",
            ChainName::Lemma2_8 => "lemma_2_8",
            ChainName::Lemma2_9 => "lemma_2_9",
            ChainName::Lemma2_11 => "lemma_2_11",
        }
    }
}

impl fmt::Display for ChainName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChainName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ChainName::ALL
            .iter()
            .copied()
            .find(|name| name.as_str() == s)
            .ok_or_else(|| format!("unknown chain fixture {s:?}"))
    }
}

/// Which of the two constant-norm segments of the `lemma_2_11` fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentSide {
    /// From `(-1/2, 1/2)` toward `(0, 1)`.
    Left,
    /// From `(1/2, 1/2)` toward `(0, 1)`.
    Right,
}

/// Parameters of the chain constructors; the defaults reproduce the cited
/// configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainParams {
    /// First element of the geometric parameter sequence of `lemma_2_9`.
    pub lambda1: Rational,
    /// Ratio of that sequence; must be strictly below one half.
    pub ratio: Rational,
    /// Number of retained coordinates in the `example_2_7` truncation.
    pub truncation: usize,
    /// Segment choice for `lemma_2_11` chain elements.
    pub segment: SegmentSide,
    /// Seed for the randomized probes inside [`verify_counterexample`].
    pub seed: u64,
}

impl Default for ChainParams {
    fn default() -> Self {
        ChainParams {
            lambda1: rat(9, 10),
            ratio: rat(49, 100),
            truncation: 256,
            segment: SegmentSide::Left,
            seed: 0,
        }
    }
}

impl ChainParams {
    fn validate_lambda(&self) -> Result<(), ConeError> {
        let zero = Rational::zero();
        let one = Rational::one();
        if self.lambda1 <= zero || self.lambda1 >= one {
            return Err(ConeError::BadParams(format!(
                "lambda1 must lie in (0, 1), got {}",
                format_rational(&self.lambda1)
            )));
        }
        if self.ratio <= zero || self.ratio >= rat(1, 2) {
            return Err(ConeError::BadParams(format!(
                "ratio must lie in (0, 1/2), got {}",
                format_rational(&self.ratio)
            )));
        }
        Ok(())
    }

    /// The n-th parameter `lambda1 * ratio^(n-1)` (n >= 1).
    pub fn lambda(&self, n: usize) -> Result<Rational, ConeError> {
        self.validate_lambda()?;
        if n == 0 {
            return Err(ConeError::BadParams("chain indices start at 1".into()));
        }
        let mut value = self.lambda1.clone();
        for _ in 1..n {
            value *= self.ratio.clone();
        }
        Ok(value)
    }
}

/// The ambient space (cone and norm) each fixture lives in.
pub fn chain_space(name: ChainName, params: &ChainParams) -> SpaceSpec<Rational> {
    match name {
        ChainName::Lemma2_4 | ChainName::Lemma2_8 => SpaceSpec::new(
            ConeSpec::new(ConeKind::PointwiseFunction),
            NormSpec::sup_abs(),
        ),
        ChainName::Example2_7 => SpaceSpec::new(
            ConeSpec::new(ConeKind::Componentwise {
                dim: params.truncation,
            }),
            NormSpec::sup_abs(),
        ),
        ChainName::Lemma2_9 => {
            SpaceSpec::new(ConeSpec::new(ConeKind::C1Pair), NormSpec::c1_sum())
        }
        ChainName::Lemma2_11 => {
            SpaceSpec::new(ConeSpec::new(ConeKind::IceCream2d), NormSpec::ell1())
        }
    }
}

/// The n-th member of the named chain (n >= 1).
pub fn chain_element(
    name: ChainName,
    n: usize,
    params: &ChainParams,
) -> Result<Element<Rational>, ConeError> {
    if n == 0 {
        return Err(ConeError::BadParams("chain indices start at 1".into()));
    }
    Ok(match name {
        ChainName::Lemma2_4 => Element::function(lemma_2_4_element(n)),
        ChainName::Example2_7 => {
            Element::vector(prefix_indicator(n, params.truncation))
        }
        ChainName::Lemma2_8 => Element::function(lemma_2_8_element(n)),
        ChainName::Lemma2_9 => Element::function(smooth_plateau(&params.lambda(n)?)),
        ChainName::Lemma2_11 => {
            // theta_n = 1 - 1/n climbs toward the segment tip (0, 1).
            let theta = Rational::one() - rat(1, n as i64);
            Element::vector(segment_point(&theta, params.segment))
        }
    })
}

/// Ramp `n t` on `[0, 1/n]`, then constant one up to `t = 2`.
pub fn lemma_2_4_element(n: usize) -> PiecewisePoly<Rational> {
    let n_r = rat(n as i64, 1);
    let break_at = rat(1, n as i64);
    let zero = Rational::zero();
    let segments = if n == 1 {
        vec![
            Segment::new(zero.clone(), rat(1, 1), [zero.clone(), Rational::one(), zero.clone()]),
            Segment::new(rat(1, 1), rat(2, 1), [Rational::one(), zero.clone(), zero]),
        ]
    } else {
        vec![
            Segment::new(zero.clone(), break_at.clone(), [zero.clone(), n_r, zero.clone()]),
            Segment::new(break_at, rat(2, 1), [Rational::one(), zero.clone(), zero]),
        ]
    };
    PiecewisePoly::new(segments).expect("fixture segments are well formed")
}

/// Zero on `[0, 1]`, ramp `n (t - 1)` to one, then constant one up to `t = 2`.
pub fn lemma_2_8_element(n: usize) -> PiecewisePoly<Rational> {
    let zero = Rational::zero();
    let one = Rational::one();
    let n_r = rat(n as i64, 1);
    let knee = one.clone() + rat(1, n as i64);
    let mut segments = vec![
        Segment::new(zero.clone(), one.clone(), [zero.clone(), zero.clone(), zero.clone()]),
        Segment::new(one.clone(), knee.clone(), [-n_r.clone(), n_r, zero.clone()]),
    ];
    if knee < rat(2, 1) {
        segments.push(Segment::new(knee, rat(2, 1), [one, zero.clone(), zero]));
    }
    PiecewisePoly::new(segments).expect("fixture segments are well formed")
}

/// The smooth chain member of `lemma_2_9` with parameter `lambda`:
/// `t + 1` on `[-1, -lambda]`, the parabola `-t^2/(2 lambda) + 1 - lambda/2`
/// on `[-lambda, 0]`, then the plateau `1 - lambda/2` on `[0, 1]`.
/// Value and derivative are continuous.
pub fn smooth_plateau(lambda: &Rational) -> PiecewisePoly<Rational> {
    assert!(
        lambda.is_positive() && *lambda < Rational::one(),
        "plateau parameter must lie in (0, 1)"
    );
    let zero = Rational::zero();
    let one = Rational::one();
    let plateau = one.clone() - lambda / rat(2, 1);
    PiecewisePoly::new(vec![
        Segment::new(rat(-1, 1), -lambda.clone(), [one.clone(), one.clone(), zero.clone()]),
        Segment::new(
            -lambda.clone(),
            zero.clone(),
            [
                plateau.clone(),
                zero.clone(),
                -(one.clone() / (rat(2, 1) * lambda.clone())),
            ],
        ),
        Segment::new(zero.clone(), one, [plateau, zero.clone(), zero]),
    ])
    .expect("fixture segments are well formed")
}

/// The pointwise limit of the `lemma_2_9` chain: `t + 1` on `[-1, 0]`,
/// constant one on `[0, 1]`.  Continuous, but its derivative jumps from
/// one to zero at `t = 0`.
pub fn lemma_2_9_limit() -> PiecewisePoly<Rational> {
    let zero = Rational::zero();
    let one = Rational::one();
    PiecewisePoly::new(vec![
        Segment::new(rat(-1, 1), zero.clone(), [one.clone(), one.clone(), zero.clone()]),
        Segment::new(zero.clone(), one.clone(), [one, zero.clone(), zero]),
    ])
    .expect("fixture segments are well formed")
}

/// First `n` coordinates one, the rest zero, truncated to `len` entries.
pub fn prefix_indicator(n: usize, len: usize) -> Vec<Rational> {
    (0..len)
        .map(|i| if i < n { Rational::one() } else { Rational::zero() })
        .collect()
}

/// The point at parameter `theta` in `[0, 1]` on one of the two cited
/// constant-norm segments ending at `(0, 1)`.
pub fn segment_point(theta: &Rational, side: SegmentSide) -> Vec<Rational> {
    let one = Rational::one();
    let half = rat(1, 2);
    let first = (one.clone() - theta.clone()) * half.clone();
    let second = (one + theta.clone()) * half;
    match side {
        SegmentSide::Left => vec![-first, second],
        SegmentSide::Right => vec![first, second],
    }
}

/// The clipping ramp used to improve upper bounds of the `lemma_2_8` chain:
/// zero on `[0, 1 - delta]`, rising linearly to one at `t = 1`, then one.
pub fn clipping_ramp(delta: &Rational) -> PiecewisePoly<Rational> {
    assert!(
        delta.is_positive() && *delta < Rational::one(),
        "ramp width must lie in (0, 1)"
    );
    let zero = Rational::zero();
    let one = Rational::one();
    let start = one.clone() - delta.clone();
    PiecewisePoly::new(vec![
        Segment::new(zero.clone(), start.clone(), [zero.clone(), zero.clone(), zero.clone()]),
        Segment::new(
            start,
            one.clone(),
            [
                (delta.clone() - one.clone()) / delta.clone(),
                one.clone() / delta.clone(),
                zero.clone(),
            ],
        ),
        Segment::new(one.clone(), rat(2, 1), [one, zero.clone(), zero]),
    ])
    .expect("ramp segments are well formed")
}

/// A point in `(lo, hi]` where `poly` drops strictly below `threshold`,
/// if one exists.  Used to produce concrete upper-bound violations.
fn violation_point(
    poly: &PiecewisePoly<Rational>,
    lo: &Rational,
    hi: &Rational,
    threshold: &Rational,
) -> Option<Rational> {
    let min = poly.min_on(lo, hi)?;
    if min >= *threshold {
        return None;
    }
    // Some extremum candidate attains the minimum; prefer one inside (lo, hi].
    let mut best: Option<Rational> = None;
    for seg in poly.segments() {
        let s_lo = if &seg.from > lo { seg.from.clone() } else { lo.clone() };
        let s_hi = if &seg.to < hi { seg.to.clone() } else { hi.clone() };
        if s_lo > s_hi {
            continue;
        }
        let mut candidates = vec![s_lo.clone(), s_hi.clone()];
        if !seg.coeffs[2].is_zero() {
            let vertex = -seg.coeffs[1].clone() / (rat(2, 1) * seg.coeffs[2].clone());
            if vertex > s_lo && vertex < s_hi {
                candidates.push(vertex);
            }
        }
        for t in candidates {
            if poly.eval(&t).map_or(false, |v| v < *threshold) && t > *lo {
                best = Some(t);
                break;
            }
        }
        if best.is_some() {
            break;
        }
    }
    // The minimum can sit exactly on the left endpoint `lo`; walk right into
    // the open interval, where continuity keeps the value below threshold.
    best.or_else(|| {
        let mut step = (hi.clone() - lo.clone()) / rat(2, 1);
        for _ in 0..64 {
            let t = lo.clone() + step.clone();
            if poly.eval(&t).map_or(false, |v| v < *threshold) {
                return Some(t);
            }
            step /= rat(2, 1);
        }
        None
    })
}

/// Strictly improves a continuous upper bound of the `lemma_2_8` chain by
/// clipping it with [`clipping_ramp`]: the pointwise minimum is again an
/// upper bound, lies below the candidate, and for small `delta` is strictly
/// smaller somewhere — so no continuous upper bound is least.
pub fn improve_upper_bound_2_8(
    candidate: &PiecewisePoly<Rational>,
    delta: &Rational,
) -> Result<PiecewisePoly<Rational>, ConeError> {
    if !(delta.is_positive() && *delta < Rational::one()) {
        return Err(ConeError::BadParams(format!(
            "delta must lie in (0, 1), got {}",
            format_rational(delta)
        )));
    }
    let (a, b) = candidate.interval();
    if *a != Rational::zero() || *b != rat(2, 1) {
        return Err(ConeError::BadParams(
            "candidate must be defined on [0, 2]".into(),
        ));
    }
    let zero_tol = Rational::zero();
    if !candidate.is_continuous(&zero_tol) {
        return Err(ConeError::BadParams("candidate must be continuous".into()));
    }
    ensure_upper_bound_2_8(candidate)?;
    let clipped = candidate.pointwise_min(&clipping_ramp(delta))?;
    debug_assert!(ensure_upper_bound_2_8(&clipped).is_ok());
    Ok(clipped)
}

/// Checks `candidate >= x_n` for every chain member of `lemma_2_8`
/// (equivalently: nonnegative on `[0, 1]` and `>= 1` on `[1, 2]`).
fn ensure_upper_bound_2_8(candidate: &PiecewisePoly<Rational>) -> Result<(), ConeError> {
    let zero = Rational::zero();
    let one = Rational::one();
    let two = rat(2, 1);
    if let Some(t) = violation_point(candidate, &zero, &one, &zero) {
        return Err(ConeError::NotAnUpperBound {
            n: 1,
            at: format_rational(&t),
        });
    }
    if let Some(t) = violation_point(candidate, &one, &two, &one) {
        // x_n(t) = 1 there once 1 + 1/n < t.
        let gap = t.clone() - one;
        let n = (Rational::one() / gap)
            .ceil()
            .to_integer()
            .to_usize()
            .map_or(usize::MAX, |k| k.saturating_add(1));
        return Err(ConeError::NotAnUpperBound {
            n,
            at: format_rational(&t),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Sampled smooth candidates and their refutation (`lemma_2_9`, part 6).
// ---------------------------------------------------------------------------

/// A would-be smooth function on `[-1, 1]`, given by samples of its value
/// and derivative on a grid.  The refuter shows that no such candidate can
/// be an upper bound of the `lemma_2_9` chain inside the norm ball of
/// radius two.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledC1Candidate {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
}

impl SampledC1Candidate {
    /// Samples a piecewise polynomial and its derivative on `grid`, in
    /// floating point (the refuter's comparisons are tolerance-based).
    pub fn from_poly(poly: &PiecewisePoly<Rational>, grid: &[f64]) -> Self {
        let to_float = |p: &PiecewisePoly<Rational>| -> Vec<(f64, f64, [f64; 3])> {
            p.segments()
                .iter()
                .map(|seg| {
                    (
                        seg.from.approx_f64(),
                        seg.to.approx_f64(),
                        [
                            seg.coeffs[0].approx_f64(),
                            seg.coeffs[1].approx_f64(),
                            seg.coeffs[2].approx_f64(),
                        ],
                    )
                })
                .collect()
        };
        let eval = |segs: &[(f64, f64, [f64; 3])], t: f64| -> f64 {
            let (_, _, c) = segs
                .iter()
                .find(|(a, b, _)| *a <= t && t <= *b)
                .expect("grid point inside interval");
            c[0] + t * (c[1] + t * c[2])
        };
        let value_segs = to_float(poly);
        let deriv_segs = to_float(&poly.derivative());
        SampledC1Candidate {
            grid: grid.to_vec(),
            values: grid.iter().map(|t| eval(&value_segs, *t)).collect(),
            derivs: grid.iter().map(|t| eval(&deriv_segs, *t)).collect(),
        }
    }
}

/// A uniform sampling grid on `[-1, 1]`.
pub fn symmetric_grid(points: usize) -> Vec<f64> {
    assert!(points >= 3, "need at least three grid points");
    let h = 2.0 / (points - 1) as f64;
    (0..points).map(|i| -1.0 + h * i as f64).collect()
}

/// A random candidate that genuinely dominates the first `depth` chain
/// members and stays inside the norm ball of radius two: the deepest chain
/// member plus nonnegative noise within the remaining norm budget.
pub fn random_dominating_candidate_2_9(
    rng: &mut impl Rng,
    grid: &[f64],
    params: &ChainParams,
    depth: usize,
) -> Result<SampledC1Candidate, ConeError> {
    let lambda = params.lambda(depth)?;
    let top = smooth_plateau(&lambda);
    let mut candidate = SampledC1Candidate::from_poly(&top, grid);
    // Norm budget: sup |values| tops out at 1 - lambda/2, sup |derivs| at 1,
    // so lambda/2 of headroom keeps the sampled norm at most 2.
    let budget = lambda.approx_f64() / 2.0;
    for value in candidate
        .values
        .iter_mut()
        .chain(candidate.derivs.iter_mut())
    {
        *value += 0.5 * budget * rng.random::<f64>();
    }
    Ok(candidate)
}

/// Config for [`refute_upper_bound_2_9`].
#[derive(Debug, Clone, PartialEq)]
pub struct RefuteConfig {
    /// How many chain members the candidate must dominate.
    pub depth: usize,
    /// Sample-consistency tolerance.
    pub tol: f64,
}

impl Default for RefuteConfig {
    fn default() -> Self {
        RefuteConfig {
            depth: 24,
            tol: 1e-9,
        }
    }
}

/// Rejects a sampled smooth candidate claiming to be an upper bound of the
/// `lemma_2_9` chain within the norm ball of radius two.
///
/// Sequence of forced constraints: dominating the whole chain pushes the
/// sampled derivative to one on the negative axis and the sampled value to
/// one on `[0, 1]` (up to the vanishing parameter of the deepest chain
/// member), while the ball cap makes both saturations tight.  The value
/// plateau forces the consistent right slope at zero toward zero, so the
/// candidate's derivative must jump by about one at `t = 0` — impossible
/// for a continuously differentiable function.  Every candidate is
/// rejected: by the ball constraint if its norm exceeds two, otherwise by
/// the derivative jump.
pub fn refute_upper_bound_2_9(
    candidate: &SampledC1Candidate,
    params: &ChainParams,
    config: &RefuteConfig,
) -> Result<ClaimReport, ConeError> {
    let SampledC1Candidate {
        grid,
        values,
        derivs,
    } = candidate;
    if grid.len() < 3 || grid.len() != values.len() || grid.len() != derivs.len() {
        return Err(ConeError::BadParams(
            "candidate needs matching grid/value/derivative samples (>= 3 points)".into(),
        ));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ConeError::BadParams("grid must be strictly increasing".into()));
    }
    if (grid[0] - (-1.0)).abs() > 1e-12 || (grid[grid.len() - 1] - 1.0).abs() > 1e-12 {
        return Err(ConeError::BadParams("grid must span [-1, 1]".into()));
    }
    let lambda_deep = params.lambda(config.depth)?.approx_f64();
    let last_negative = grid.iter().rposition(|t| *t < 0.0).ok_or_else(|| {
        ConeError::BadParams("grid must contain negative points".into())
    })?;
    if grid[last_negative] > -lambda_deep {
        return Err(ConeError::BadParams(format!(
            "grid too fine near zero: last negative point {} is above -lambda_depth = {}",
            grid[last_negative], -lambda_deep
        )));
    }

    let mut report = ClaimReport::new();
    let tol = config.tol;

    // Domination against every chain member, value and derivative.
    for n in 1..=config.depth {
        let member = smooth_plateau(&params.lambda(n)?);
        let sampled = SampledC1Candidate::from_poly(&member, grid);
        for i in 0..grid.len() {
            if values[i] < sampled.values[i] - tol || derivs[i] < sampled.derivs[i] - tol {
                return Err(ConeError::NotDominating {
                    n,
                    at: format!("{}", grid[i]),
                });
            }
        }
    }
    report.check(
        "refute_2_9/dominates_chain",
        format!("candidate >= chain members 1..={} on the grid", config.depth),
        "dominates (value and derivative)".to_string(),
        true,
    );

    // Ball constraint.
    let max_value = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let max_deriv = derivs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let norm = max_value + max_deriv;
    let in_ball = norm <= 2.0 + tol;
    report.check(
        "refute_2_9/ball",
        "sampled norm (max |w| + max |w'|) <= 2",
        format!("{norm}"),
        in_ball,
    );
    if !in_ball {
        report.check(
            "refute_2_9/rejected",
            "candidate cannot be an upper bound inside the ball of radius 2",
            format!("rejected: sampled norm {norm} exceeds 2"),
            true,
        );
        return Ok(report);
    }

    // Forced saturation: derivative one on the negative axis...
    let forced_left_min = grid
        .iter()
        .zip(derivs)
        .filter(|(t, _)| **t <= -lambda_deep)
        .map(|(_, d)| *d)
        .fold(f64::INFINITY, f64::min);
    report.check(
        "refute_2_9/forced_left_slope",
        format!("w' >= 1 on [-1, {:-e}] (domination limit)", -lambda_deep),
        format!("min sampled w' there = {forced_left_min}"),
        forced_left_min >= 1.0 - tol,
    );

    // ...and a value plateau at one on [0, 1]: domination pins it from
    // below, the ball cap (norm <= 2 with max |w'| >= forced_left_min)
    // pins it from above.
    let plateau_low = 1.0 - lambda_deep / 2.0 - tol;
    let plateau_high = 2.0 + tol - forced_left_min;
    let plateau: Vec<(f64, f64)> = grid
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= 0.0)
        .map(|(t, v)| (*t, *v))
        .collect();
    let plateau_dev = plateau
        .iter()
        .map(|(_, v)| (v - 1.0).abs())
        .fold(0.0f64, f64::max);
    let window = (plateau_high - 1.0).max(1.0 - plateau_low);
    report.check(
        "refute_2_9/forced_flat_top",
        format!("|w - 1| <= {window:e} on [0, 1] (domination + ball squeeze)"),
        format!("max deviation {plateau_dev:e}"),
        plateau_dev <= window,
    );

    // The plateau forces the consistent right slope at zero toward zero,
    // while the left slope is pinned at one: a derivative jump.
    let (t_first, v_first) = plateau[0];
    let (t_last, v_last) = plateau[plateau.len() - 1];
    let right_slope = (v_last - v_first) / (t_last - t_first);
    let jump = derivs[last_negative] - right_slope;
    report.check(
        "refute_2_9/derivative_jump",
        "left slope minus consistent right slope at t = 0 stays >= 1 - 1e-6",
        format!("{jump}"),
        jump >= 1.0 - 1e-6,
    );
    report.check(
        "refute_2_9/rejected",
        "candidate cannot be smooth: a continuous derivative admits no jump",
        format!("rejected: derivative jump {jump} at t = 0"),
        true,
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Full fixture verification.
// ---------------------------------------------------------------------------

/// Aggregates repetitive per-index checks into one claim.
struct Tally {
    total: usize,
    failed: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            total: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn into_claim(self, id: &str, expected: &str) -> Claim {
        let measured = match &self.first_failure {
            None => format!("all {} checks hold", self.total),
            Some(first) => format!(
                "{} of {} checks failed; first: {first}",
                self.failed, self.total
            ),
        };
        Claim::new(id, expected, measured, self.failed == 0)
    }
}

/// Runs the full claim suite for one named fixture with chain members
/// `1..=n_max` and returns the resulting report.
pub fn verify_counterexample(
    name: ChainName,
    n_max: usize,
    params: &ChainParams,
) -> Result<ClaimReport, ConeError> {
    if n_max < 3 {
        return Err(ConeError::BadParams("n_max must be at least 3".into()));
    }
    match name {
        ChainName::Lemma2_4 => verify_ramp_family(name, n_max, params, false),
        ChainName::Lemma2_8 => verify_ramp_family(name, n_max, params, true),
        ChainName::Example2_7 => verify_prefix_vectors(n_max, params),
        ChainName::Lemma2_9 => verify_smooth_chain(n_max, params),
        ChainName::Lemma2_11 => verify_ice_cream_segments(n_max, params),
    }
}

/// First tail index (1-based) used for "not Cauchy" claims: half the chain.
fn half_tail(n_max: usize) -> usize {
    (n_max / 2).max(1)
}

/// Shared suite for the two ramp families (`lemma_2_4`, `lemma_2_8`):
/// continuity, exact unit norms, monotonicity, the exact distance table
/// `1 - m/n`, domination by the constant one, and a non-vanishing tail
/// defect.  For `lemma_2_8` additionally runs the upper-bound improvement
/// rounds showing no continuous least upper bound exists.
fn verify_ramp_family(
    name: ChainName,
    n_max: usize,
    params: &ChainParams,
    with_improvement: bool,
) -> Result<ClaimReport, ConeError> {
    let space = chain_space(name, params);
    let id = |suffix: &str| format!("{name}/{suffix}");
    let build = |n: usize| match name {
        ChainName::Lemma2_4 => lemma_2_4_element(n),
        _ => lemma_2_8_element(n),
    };
    let chain: Vec<PiecewisePoly<Rational>> = (1..=n_max).map(build).collect();
    let elements: Vec<Element<Rational>> =
        chain.iter().cloned().map(Element::function).collect();
    let mut report = ClaimReport::new();
    let zero = Rational::zero();
    let one = Rational::one();

    let mut continuity = Tally::new();
    let mut norms = Tally::new();
    for (k, member) in chain.iter().enumerate() {
        continuity.record(member.is_continuous(&zero), || format!("member {}", k + 1));
        let norm = member.sup_norm();
        norms.record(norm == one, || {
            format!("member {} has norm {}", k + 1, format_rational(&norm))
        });
    }
    report.push(continuity.into_claim(&id("continuity"), "every chain member is continuous"));
    report.push(norms.into_claim(&id("norm_const"), "every chain member has sup norm exactly 1"));

    let mut increasing = Tally::new();
    for (k, pair) in elements.windows(2).enumerate() {
        increasing.record(space.leq(&pair[0], &pair[1])?, || {
            format!("members {} and {}", k + 1, k + 2)
        });
    }
    report.push(increasing.into_claim(
        &id("increasing"),
        "the chain increases in the pointwise order",
    ));

    let mut distances = Tally::new();
    for n in 2..=n_max {
        for m in 1..n {
            let expected = one.clone() - rat(m as i64, n as i64);
            let d = space.distance(&elements[n - 1], &elements[m - 1])?;
            distances.record(d == expected, || {
                format!(
                    "distance({n}, {m}) = {} instead of {}",
                    format_rational(&d),
                    format_rational(&expected)
                )
            });
        }
    }
    report.push(distances.into_claim(
        &id("pairwise_distance"),
        "sup distance between members n > m is exactly 1 - m/n",
    ));

    let bound = Element::function(PiecewisePoly::constant(zero.clone(), rat(2, 1), one.clone()));
    let mut bounded = Tally::new();
    for (k, member) in elements.iter().enumerate() {
        bounded.record(space.leq(member, &bound)?, || format!("member {}", k + 1));
    }
    report.push(bounded.into_claim(
        &id("upper_bound_v"),
        "the constant function 1 dominates every chain member",
    ));

    if name == ChainName::Lemma2_8 {
        // The chain also sits inside the order interval [-1, 1]: the setting
        // where an increasing bounded chain still has no supremum.
        let lower =
            Element::function(PiecewisePoly::constant(zero.clone(), rat(2, 1), -one.clone()));
        let mut interval = Tally::new();
        for (k, member) in elements.iter().enumerate() {
            interval.record(space.leq(&lower, member)?, || format!("member {}", k + 1));
        }
        report.push(interval.into_claim(
            &id("order_interval"),
            "the chain lies in the order interval [-1, 1]",
        ));
    }

    let tail_first = half_tail(n_max);
    let probe = regularity_probe(
        &space,
        &elements,
        &RegularityBound::Order(bound.clone()),
        tail_first - 1,
    )?;
    let expected_defect = one.clone() - rat(tail_first as i64, n_max as i64);
    report.check(
        id("tail_defect"),
        format!(
            "Cauchy defect of the tail from member {tail_first} is exactly {} (>= 1/2: not Cauchy)",
            format_rational(&expected_defect)
        ),
        format_rational(&probe.defect),
        probe.defect == expected_defect && probe.defect >= rat(1, 2),
    );

    if with_improvement {
        let mut rounds = Tally::new();
        let mut current = match bound {
            Element::Function(f) => f,
            _ => unreachable!(),
        };
        let mut delta = rat(1, 2);
        for round in 1..=5 {
            let improved = improve_upper_bound_2_8(&current, &delta)?;
            let still_bound = ensure_upper_bound_2_8(&improved).is_ok();
            let below = improved
                .sub(&current)
                .map(|d| d.max_value() <= zero)
                .unwrap_or(false);
            let strict = current
                .sub(&improved)
                .map(|d| d.max_value() > zero)
                .unwrap_or(false);
            rounds.record(still_bound && below && strict, || {
                format!("round {round}: bound={still_bound}, below={below}, strict={strict}")
            });
            current = improved;
            delta /= rat(2, 1);
        }
        report.push(rounds.into_claim(
            &id("improvement_rounds"),
            "five rounds of ramp clipping strictly improve each upper bound",
        ));
    }
    Ok(report)
}

/// Suite for the prefix-indicator vectors (`example_2_7`).
fn verify_prefix_vectors(n_max: usize, params: &ChainParams) -> Result<ClaimReport, ConeError> {
    let m = params.truncation;
    if m < 2 || n_max > m {
        return Err(ConeError::BadParams(format!(
            "truncation {m} must be >= 2 and >= n_max = {n_max}"
        )));
    }
    let space = chain_space(ChainName::Example2_7, params);
    let one = Rational::one();
    let elements: Vec<Element<Rational>> = (1..=n_max)
        .map(|n| Element::vector(prefix_indicator(n, m)))
        .collect();
    let mut report = ClaimReport::new();

    let mut norms = Tally::new();
    for (k, x) in elements.iter().enumerate() {
        let norm = space.norm(x)?;
        norms.record(norm == one, || {
            format!("member {} has norm {}", k + 1, format_rational(&norm))
        });
    }
    report.push(norms.into_claim(
        "example_2_7/norm_const",
        "every truncated member has sup norm exactly 1",
    ));

    let mut increasing = Tally::new();
    for (k, pair) in elements.windows(2).enumerate() {
        increasing.record(space.leq(&pair[0], &pair[1])?, || {
            format!("members {} and {}", k + 1, k + 2)
        });
    }
    report.push(increasing.into_claim(
        "example_2_7/increasing",
        "the chain increases in the componentwise order",
    ));

    let mut distances = Tally::new();
    for n in 2..=n_max {
        for m_idx in 1..n {
            let d = space.distance(&elements[n - 1], &elements[m_idx - 1])?;
            distances.record(d == one, || {
                format!("distance({n}, {m_idx}) = {}", format_rational(&d))
            });
        }
    }
    report.push(distances.into_claim(
        "example_2_7/pairwise_distance",
        "distinct members are at sup distance exactly 1",
    ));

    // The supremum claim needs the chain continued to the truncation length.
    let full: Vec<Element<Rational>> = (1..=m)
        .map(|n| Element::vector(prefix_indicator(n, m)))
        .collect();
    let sup = componentwise_sup(&full)?;
    let all_ones = Element::vector(vec![one.clone(); m]);
    report.check(
        "example_2_7/sup_all_ones",
        "the componentwise supremum of the full truncated chain is the all-ones vector",
        if sup == all_ones {
            "all-ones".to_string()
        } else {
            "differs from all-ones".to_string()
        },
        sup == all_ones,
    );

    let tail_first = half_tail(n_max);
    let defect = cauchy_defect(&space, &elements, tail_first - 1)?;
    report.check(
        "example_2_7/tail_defect",
        format!("Cauchy defect of the tail from member {tail_first} is exactly 1"),
        format_rational(&defect),
        defect == one,
    );
    Ok(report)
}

/// Suite for the smooth plateau chain (`lemma_2_9`).
fn verify_smooth_chain(n_max: usize, params: &ChainParams) -> Result<ClaimReport, ConeError> {
    let space = chain_space(ChainName::Lemma2_9, params);
    let zero = Rational::zero();
    let one = Rational::one();
    let two = rat(2, 1);
    let lambdas: Vec<Rational> = (1..=n_max)
        .map(|n| params.lambda(n))
        .collect::<Result<_, _>>()?;
    let chain: Vec<PiecewisePoly<Rational>> =
        lambdas.iter().map(smooth_plateau).collect();
    let elements: Vec<Element<Rational>> =
        chain.iter().cloned().map(Element::function).collect();
    let mut report = ClaimReport::new();

    let mut smoothness = Tally::new();
    for (k, member) in chain.iter().enumerate() {
        let ok = member.is_continuous(&zero) && member.derivative().is_continuous(&zero);
        smoothness.record(ok, || format!("member {}", k + 1));
    }
    report.push(smoothness.into_claim(
        "lemma_2_9/c1_membership",
        "every chain member has continuous value and derivative",
    ));

    let mut norms = Tally::new();
    for (k, (member, lambda)) in chain.iter().zip(&lambdas).enumerate() {
        let expected = two.clone() - lambda / two.clone();
        let norm = NormSpec::c1_sum().eval(&Element::function(member.clone()))?;
        norms.record(norm == expected, || {
            format!(
                "member {} has norm {} instead of {}",
                k + 1,
                format_rational(&norm),
                format_rational(&expected)
            )
        });
    }
    report.push(norms.into_claim(
        "lemma_2_9/norm_exact",
        "member n has norm exactly 2 - lambda_n / 2",
    ));

    let mut increasing = Tally::new();
    for (k, pair) in elements.windows(2).enumerate() {
        increasing.record(space.leq(&pair[0], &pair[1])?, || {
            format!("members {} and {}", k + 1, k + 2)
        });
    }
    report.push(increasing.into_claim(
        "lemma_2_9/increasing",
        "the chain increases in the value-and-derivative order",
    ));

    let limit = lemma_2_9_limit();
    let mut pointwise = Tally::new();
    for (k, (member, lambda)) in chain.iter().zip(&lambdas).enumerate() {
        let diff = limit.sub(member)?;
        let nonneg = diff.min_value() >= zero;
        let gap = diff.max_value();
        let expected_gap = lambda / two.clone();
        pointwise.record(nonneg && gap == expected_gap, || {
            format!(
                "member {}: min {} max {} (expected max {})",
                k + 1,
                format_rational(&diff.min_value()),
                format_rational(&gap),
                format_rational(&expected_gap)
            )
        });
    }
    report.push(pointwise.into_claim(
        "lemma_2_9/pointwise_limit",
        "the limit dominates member n pointwise with gap exactly lambda_n / 2",
    ));

    let jump = {
        let d = limit.derivative();
        d.value_jumps(&zero)
            .first()
            .map(|(at, left, right)| (at.clone(), left.clone() - right.clone()))
    };
    report.check(
        "lemma_2_9/limit_not_c1",
        "the pointwise limit has derivative jump exactly 1 at t = 0",
        jump.as_ref()
            .map(|(at, j)| format!("jump {} at t = {}", format_rational(j), format_rational(at)))
            .unwrap_or_else(|| "no jump found".into()),
        jump == Some((zero.clone(), one.clone())),
    );

    let mut gaps = Tally::new();
    for n in 0..n_max - 1 {
        let diff = chain[n + 1].sub(&chain[n])?;
        let gap_norm = diff.sup_norm() + diff.derivative().sup_norm();
        let ratio = lambdas[n + 1].clone() / lambdas[n].clone();
        let lower = one.clone() - ratio;
        // The derivative difference attains exactly 1 - lambda_{n+1}/lambda_n
        // at t = -lambda_{n+1}.
        let at = -lambdas[n + 1].clone();
        let deriv_gap_at = chain[n + 1]
            .derivative()
            .eval(&at)
            .zip(chain[n].derivative().eval(&at))
            .map(|(a, b)| a - b);
        let ok = gap_norm >= lower
            && gap_norm > rat(1, 2)
            && deriv_gap_at == Some(lower.clone());
        gaps.record(ok, || {
            format!(
                "pair ({}, {}): gap {} lower bound {}",
                n + 1,
                n + 2,
                format_rational(&gap_norm),
                format_rational(&lower)
            )
        });
    }
    report.push(gaps.into_claim(
        "lemma_2_9/consecutive_gap",
        "consecutive gaps satisfy ||y_{n+1} - y_n|| >= 1 - lambda_{n+1}/lambda_n > 1/2",
    ));

    // Part 6: the sampled limit candidate is rejected as a smooth upper
    // bound in the ball of radius two.
    let grid = symmetric_grid(201);
    let candidate = SampledC1Candidate::from_poly(&limit, &grid);
    let refutation = refute_upper_bound_2_9(&candidate, params, &RefuteConfig::default())?;
    report.check(
        "lemma_2_9/limit_candidate_refuted",
        "the sampled limit is rejected as a smooth upper bound in the radius-2 ball",
        format!(
            "{} of {} refutation claims hold",
            refutation.claims.iter().filter(|c| c.pass).count(),
            refutation.len()
        ),
        refutation.all_pass(),
    );
    report.absorb("lemma_2_9/", refutation);
    Ok(report)
}

/// Suite for the ice-cream-cone segments (`lemma_2_11`).
fn verify_ice_cream_segments(n_max: usize, params: &ChainParams) -> Result<ClaimReport, ConeError> {
    let space = chain_space(ChainName::Lemma2_11, params);
    let one = Rational::one();
    let tip = Element::vector(vec![Rational::zero(), one.clone()]);
    let mut report = ClaimReport::new();

    // Cited comparable unit-norm points.
    let left = Element::vector(segment_point(&Rational::zero(), SegmentSide::Left));
    let right = Element::vector(segment_point(&Rational::zero(), SegmentSide::Right));
    let cited_ok = space.leq(&left, &tip)?
        && space.leq(&right, &tip)?
        && space.norm(&left)? == one
        && space.norm(&right)? == one
        && space.norm(&tip)? == one;
    report.check(
        "lemma_2_11/cited_points",
        "(-1/2, 1/2) <= (0, 1) and (1/2, 1/2) <= (0, 1), all of norm exactly 1",
        if cited_ok { "holds" } else { "violated" }.to_string(),
        cited_ok,
    );

    // Eleven evenly spaced points per segment: pairwise comparable, norm 1.
    for (side, side_name) in [(SegmentSide::Left, "left"), (SegmentSide::Right, "right")] {
        let points: Vec<Element<Rational>> = (0..=10)
            .map(|k| Element::vector(segment_point(&rat(k, 10), side)))
            .collect();
        let mut tally = Tally::new();
        for i in 0..points.len() {
            let norm = space.norm(&points[i])?;
            tally.record(norm == one, || {
                format!("point {i} has norm {}", format_rational(&norm))
            });
            for j in i + 1..points.len() {
                tally.record(space.leq(&points[i], &points[j])?, || {
                    format!("points {i} and {j} are not comparable")
                });
            }
        }
        report.push(tally.into_claim(
            &format!("lemma_2_11/segment_chain_{side_name}"),
            "eleven evenly spaced segment points are increasing with norm exactly 1",
        ));
    }

    // The chain z(1 - 1/k) converges to the tip: exact defect accounting.
    let elements: Vec<Element<Rational>> = (1..=n_max)
        .map(|n| chain_element(ChainName::Lemma2_11, n, params))
        .collect::<Result<_, _>>()?;
    let tail_first = half_tail(n_max);
    let probe = regularity_probe(
        &space,
        &elements,
        &RegularityBound::Norm(one.clone()),
        tail_first - 1,
    )?;
    // ell1 distance between members k < l is exactly theta_l - theta_k =
    // 1/k - 1/l, so the tail defect is 1/tail_first - 1/n_max.
    let expected_defect = rat(1, tail_first as i64) - rat(1, n_max as i64);
    report.check(
        "lemma_2_11/chain_tail_defect",
        format!(
            "tail defect from member {tail_first} is exactly {}",
            format_rational(&expected_defect)
        ),
        format_rational(&probe.defect),
        probe.defect == expected_defect,
    );

    // Numerical supremum: the last member approaches (0, 1), which bounds
    // the whole chain.
    let eps = rat(1, tail_first as i64);
    let sup = sup_of_increasing_sequence(&space, &elements, &[tip.clone()], tail_first - 1, &eps)?;
    let residual = space.distance(&sup.limit, &tip)?;
    let expected_residual = rat(1, n_max as i64);
    let sup_ok = sup.dominates_all
        && sup.candidates[0].bounds_sequence
        && sup.candidates[0].dominates_limit
        && residual == expected_residual;
    report.check(
        "lemma_2_11/sup_limit",
        format!(
            "the numerical limit dominates the chain, (0, 1) dominates it, and ||limit - (0,1)|| = {}",
            format_rational(&expected_residual)
        ),
        format_rational(&residual),
        sup_ok,
    );

    // Randomized regularity probe: increasing norm-bounded sequences in
    // this cone are Cauchy — full regularity in action.
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(params.seed);
    let float_space = SpaceSpec::new(
        ConeSpec::<f64>::new(ConeKind::IceCream2d),
        NormSpec::ell1(),
    );
    let sequences = 1000;
    let length = 1024;
    let tail_start = 1000;
    let mut worst = 0.0f64;
    let mut tally = Tally::new();
    for k in 0..sequences {
        let seq = super::sampling::increasing_ice_cream_sequence(&mut rng, length, 1.0);
        match regularity_probe(&float_space, &seq, &RegularityBound::Norm(1.0), tail_start) {
            Ok(probe) => {
                worst = worst.max(probe.defect);
                // Bound from the cone geometry: the tail defect is at most
                // the norm bound minus the second coordinate at the tail.
                let t_at_tail = match &seq[tail_start] {
                    Element::Vector(v) => v[1],
                    _ => unreachable!(),
                };
                let ok = probe.defect < 1e-6 && probe.defect <= 1.0 - t_at_tail + 1e-12;
                tally.record(ok, || format!("sequence {k}: defect {}", probe.defect));
            }
            Err(err) => tally.record(false, || format!("sequence {k}: {err}")),
        }
    }
    report.push(tally.into_claim(
        "lemma_2_11/random_regularity",
        "1000 random increasing norm-bounded sequences have tail defect < 1e-6 \
         (and defect <= bound minus tail height)",
    ));
    report.check(
        "lemma_2_11/random_regularity_worst",
        "worst observed tail defect stays below 1e-6",
        format!("{worst:e}"),
        worst < 1e-6,
    );
    Ok(report)
}
