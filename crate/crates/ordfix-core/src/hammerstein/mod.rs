//! Nonlinear integral equations of the form
//! `x(t) = ∫ T(t, s) · f(s, x(s)) ds`, discretized on a quadrature grid and
//! solved by monotone iteration inside a weighted `p`-norm ball.
//!
//! The continuous operator is collapsed to node vectors: a grid carries
//! nodes `t_1 < … < t_n` and positive weights `w_1, …, w_n`, and the
//! discrete operator sends `x` to
//! `(F x)_i = Σ_j w_j · T(t_i, s_j) · f(s_j, x_j)`.
//!
//! The module provides
//!
//! * [`build_grid`] — trapezoid and Gauss–Legendre rules on an interval;
//! * [`Kernel`] / [`Nonlinearity`] — small parametric families for `T`
//!   and `f`, serializable for configuration files;
//! * [`HammersteinProblem`] — the discretized problem together with the
//!   conjugate exponent pair `(p, q)` and the ball radius `gamma`;
//! * [`compute_lambda`] — the growth constant
//!   `λ = Σ_i w_i · (Σ_j w_j |T(t_i, s_j)|^q)^{p/q}` that calibrates the
//!   solvability audit;
//! * [`audit_conditions`] — machine checks of the solvability conditions
//!   (positivity, monotonicity, ball growth), with sampled checks flagged
//!   as non-exhaustive;
//! * [`monotone_solve`] — iteration from the zero vector with monotonicity
//!   and ball certificates at every step;
//! * [`separable_oracle`] — an independent scalar-equation solver for
//!   rank-one kernels, used to cross-check the iteration;
//! * [`explore_solution_set`] — iteration from caller-provided sub- and
//!   supersolution seeds, with a comparability report on everything found.

mod config;
mod families;
mod oracle;
mod solve;

pub use config::{parse_problem_config, SolveSettings};
pub use families::{Kernel, Nonlinearity, Profile};
pub use oracle::{separable_oracle, OracleRun};
pub use solve::{
    apply_operator, audit_conditions, compute_lambda, explore_solution_set, monotone_solve,
    monotone_solve_with, residual, weighted_p_norm, AuditReport, ConditionVerdict,
    ExplorationReport, PairComparison, SeedOutcome, SolveControls, SolveReport,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack for nodewise monotonicity comparisons between iterates.
pub const MONOTONE_SLACK: f64 = 1e-12;

/// Slack for the ball-membership check `‖x‖_p ≤ gamma`.
pub const BALL_SLACK: f64 = 1e-10;

/// Errors surfaced by grid construction, auditing, and solving.
#[derive(Debug, Error)]
pub enum HammersteinError {
    /// The integration interval is empty, inverted, or non-finite.
    #[error("integration domain [{lower}, {upper}] is not a finite increasing interval")]
    BadDomain {
        /// Requested lower endpoint.
        lower: f64,
        /// Requested upper endpoint.
        upper: f64,
    },
    /// Fewer than two quadrature nodes were requested.
    #[error("a quadrature grid needs at least two nodes, got {count}")]
    BadCount {
        /// Requested node count.
        count: usize,
    },
    /// The growth exponent must be finite and strictly greater than one.
    #[error("growth exponent p must be finite and exceed 1, got {p}")]
    BadExponent {
        /// Requested exponent.
        p: f64,
    },
    /// The ball radius must be positive and finite.
    #[error("ball radius gamma must be positive and finite, got {gamma}")]
    BadRadius {
        /// Requested radius.
        gamma: f64,
    },
    /// A sum or power blew up to a non-finite value.
    #[error("numeric overflow while computing {what}")]
    Overflow {
        /// Description of the failing computation.
        what: String,
    },
    /// A kernel or nonlinearity evaluation produced a non-finite value.
    #[error("non-finite value while evaluating {what}")]
    EvalFailure {
        /// Description of the failing evaluation.
        what: String,
    },
    /// The solvability audit failed and the caller did not override it.
    #[error("solvability audit failed at condition `{name}`; iteration refused without an override")]
    ConditionsFailed {
        /// Name of the first failing condition.
        name: String,
    },
    /// Consecutive iterates lost their nodewise ordering.
    #[error("iterate {iteration} dropped below its predecessor at node {node}")]
    MonotonicityBroken {
        /// One-based index of the offending operator application.
        iteration: usize,
        /// Zero-based node where the ordering failed.
        node: usize,
    },
    /// An iterate left the radius-`gamma` ball.
    #[error("iterate {iteration} left the ball: weighted p-norm {norm}")]
    BallEscaped {
        /// One-based index of the offending operator application.
        iteration: usize,
        /// Weighted `p`-norm of the escaping iterate.
        norm: f64,
    },
    /// The step size never dropped below the requested tolerance.
    #[error("no convergence after {max_iter} iterations; last step size {defect}")]
    NoConvergence {
        /// Iteration budget that was exhausted.
        max_iter: usize,
        /// Weighted `p`-norm of the final step.
        defect: f64,
    },
    /// The scalar oracle found no sign change while expanding its bracket.
    #[error("no sign change for the scalar equation on [{lo}, {hi}]")]
    NoBracket {
        /// Last bracket lower end scanned.
        lo: f64,
        /// Last bracket upper end scanned.
        hi: f64,
    },
    /// Bisection shrank the bracket to nothing without meeting the tolerance.
    #[error("bisection stalled with residual {residual}")]
    BisectionStalled {
        /// Scalar-equation defect at the stalling point.
        residual: f64,
    },
    /// An exploration seed is not ordered against its own image.
    #[error("seed {index} is neither below nor above its image nodewise")]
    BadSeed {
        /// Zero-based position of the seed in the caller's list.
        index: usize,
    },
    /// A configuration document could not be interpreted.
    #[error("malformed solver configuration: {message}")]
    BadConfig {
        /// Human-readable description of the defect.
        message: String,
    },
}

/// Quadrature rule for [`build_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    /// Composite trapezoid rule on equally spaced nodes.
    Trapezoid,
    /// Single Gauss–Legendre rule scaled to the interval.
    GaussLegendre,
}

/// A one-dimensional quadrature grid: strictly increasing nodes inside the
/// interval and positive weights summing to its length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    /// Lower interval end.
    pub lower: f64,
    /// Upper interval end.
    pub upper: f64,
    /// Rule that produced the grid.
    pub rule: QuadratureRule,
    /// Strictly increasing node coordinates.
    pub nodes: Vec<f64>,
    /// Positive weights, one per node, summing to `upper - lower`.
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Number of nodes.
    #[must_use]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Whether the grid is empty (never true for a built grid).
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Builds a quadrature grid on `[lower, upper]` with `count` nodes.
///
/// The trapezoid rule places equally spaced nodes with endpoint weights
/// halved; the Gauss–Legendre rule finds the Legendre roots by Newton
/// iteration and scales nodes and weights to the interval.  Both rules
/// produce weights that sum to the interval length to machine precision.
///
/// # Errors
///
/// [`HammersteinError::BadDomain`] unless `lower < upper` with both ends
/// finite, and [`HammersteinError::BadCount`] for fewer than two nodes.
pub fn build_grid(
    lower: f64,
    upper: f64,
    count: usize,
    rule: QuadratureRule,
) -> Result<QuadratureGrid, HammersteinError> {
    if !lower.is_finite() || !upper.is_finite() || lower >= upper {
        return Err(HammersteinError::BadDomain { lower, upper });
    }
    if count < 2 {
        return Err(HammersteinError::BadCount { count });
    }
    let (nodes, weights) = match rule {
        QuadratureRule::Trapezoid => trapezoid_rule(lower, upper, count),
        QuadratureRule::GaussLegendre => gauss_legendre_rule(lower, upper, count),
    };
    Ok(QuadratureGrid {
        lower,
        upper,
        rule,
        nodes,
        weights,
    })
}

fn trapezoid_rule(lower: f64, upper: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
    let h = (upper - lower) / (count as f64 - 1.0);
    let nodes: Vec<f64> = (0..count)
        .map(|i| {
            if i + 1 == count {
                upper
            } else {
                lower + i as f64 * h
            }
        })
        .collect();
    let weights: Vec<f64> = (0..count)
        .map(|i| if i == 0 || i + 1 == count { h / 2.0 } else { h })
        .collect();
    (nodes, weights)
}

/// Value and derivative of the degree-`n` Legendre polynomial at `x`,
/// via the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut curr = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * curr - (kf - 1.0) * prev) / kf;
        prev = curr;
        curr = next;
    }
    let derivative = n as f64 * (x * curr - prev) / (x * x - 1.0);
    (curr, derivative)
}

fn gauss_legendre_rule(lower: f64, upper: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
    let half = (upper - lower) / 2.0;
    let mid = (upper + lower) / 2.0;
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(count);
    for i in 1..=count {
        // Standard root guess; Newton converges in a handful of steps.
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (count as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (value, derivative) = legendre_pair(count, x);
            let step = value / derivative;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, derivative) = legendre_pair(count, x);
        let weight = 2.0 / ((1.0 - x * x) * derivative * derivative);
        pairs.push((mid + half * x, half * weight));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// A discretized integral-operator problem: grid, kernel, nonlinearity,
/// growth exponents, and the radius of the ball the iteration lives in.
#[derive(Debug, Clone, Serialize)]
pub struct HammersteinProblem {
    /// Quadrature grid shared by collocation points and integration nodes.
    pub grid: QuadratureGrid,
    /// Kernel `T(t, s)` of the integral operator.
    pub kernel: Kernel,
    /// Superposition nonlinearity `f(s, u)`.
    pub nonlinearity: Nonlinearity,
    /// Growth exponent `p > 1` of the norm the iteration is measured in.
    pub p: f64,
    /// Conjugate exponent, `1/p + 1/q = 1`.
    pub q: f64,
    /// Radius of the weighted `p`-norm ball.
    pub gamma: f64,
}

impl HammersteinProblem {
    /// Assembles a problem and probes every kernel node pair and a spread
    /// of nonlinearity arguments for finiteness.
    ///
    /// The conjugate exponent is derived as `q = p / (p - 1)`, which
    /// satisfies `1/p + 1/q = 1` to machine precision.
    ///
    /// # Errors
    ///
    /// [`HammersteinError::BadExponent`] unless `p` is finite and
    /// exceeds 1; [`HammersteinError::BadRadius`] unless `gamma` is
    /// positive and finite; [`HammersteinError::EvalFailure`] if the
    /// kernel or nonlinearity produces a non-finite value on the probe
    /// set.
    pub fn new(
        grid: QuadratureGrid,
        kernel: Kernel,
        nonlinearity: Nonlinearity,
        p: f64,
        gamma: f64,
    ) -> Result<Self, HammersteinError> {
        if !p.is_finite() || p <= 1.0 {
            return Err(HammersteinError::BadExponent { p });
        }
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(HammersteinError::BadRadius { gamma });
        }
        let q = p / (p - 1.0);
        for &t in &grid.nodes {
            for &s in &grid.nodes {
                let value = kernel.eval(t, s);
                if !value.is_finite() {
                    return Err(HammersteinError::EvalFailure {
                        what: format!("kernel at (t, s) = ({t}, {s})"),
                    });
                }
            }
        }
        for &s in &grid.nodes {
            for u in [-gamma, -1.0, 0.0, 1.0, gamma] {
                let value = nonlinearity.eval(s, u);
                if !value.is_finite() {
                    return Err(HammersteinError::EvalFailure {
                        what: format!("nonlinearity at (s, u) = ({s}, {u})"),
                    });
                }
            }
        }
        Ok(Self {
            grid,
            kernel,
            nonlinearity,
            p,
            q,
            gamma,
        })
    }

    /// Number of grid nodes.
    #[must_use]
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    /// Whether the grid is empty (never true for a built problem).
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}
