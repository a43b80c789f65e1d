//! Independent scalar oracle for rank-one kernels.
//!
//! When `T(t, s) = g(t) · h(s)`, every fixed point of the discretized
//! operator has the form `x_i = g(t_i) · c` where the scalar `c` solves
//!
//! `c = Σ_j w_j · h(s_j) · f(s_j, g(s_j) · c)`.
//!
//! This module solves that one-dimensional equation by bracketing and
//! bisection, sharing no code with the vector iteration — it exists to
//! cross-check [`monotone_solve`](super::monotone_solve) from a different
//! computational path.

use super::families::{Nonlinearity, Profile};
use super::{HammersteinError, QuadratureGrid};
use serde::Serialize;

/// Largest bracket end tried while hunting for a sign change.
const BRACKET_CAP: f64 = 1e18;

/// Bisection budget; the bracket halves each round.
const BISECTION_ROUNDS: usize = 500;

/// Root found by [`separable_oracle`].
#[derive(Debug, Clone, Serialize)]
pub struct OracleRun {
    /// Scalar root of the reduced equation.
    pub c_star: f64,
    /// Absolute defect of the scalar equation at the root.
    pub residual: f64,
    /// Node values `g(t_i) · c_star` of the matching fixed point.
    pub solution: Vec<f64>,
}

/// Scalar defect `φ(c) = Σ_j w_j · h(s_j) · f(s_j, g(s_j)·c) − c`.
fn scalar_defect(
    g: &Profile,
    h: &Profile,
    f: &Nonlinearity,
    grid: &QuadratureGrid,
    c: f64,
) -> Result<f64, HammersteinError> {
    let mut total = 0.0;
    for (&s, &w) in grid.nodes.iter().zip(&grid.weights) {
        let value = f.eval(s, g.eval(s) * c);
        if !value.is_finite() {
            return Err(HammersteinError::EvalFailure {
                what: format!("nonlinearity at (s, u) = ({s}, {})", g.eval(s) * c),
            });
        }
        total += w * h.eval(s) * value;
    }
    if !total.is_finite() {
        return Err(HammersteinError::EvalFailure {
            what: format!("scalar equation at c = {c}"),
        });
    }
    Ok(total - c)
}

/// Solves the rank-one fixed-point problem on the nonnegative half-line.
///
/// The search starts at `c = 0`.  A nonnegative defect there (guaranteed
/// for the positive nonlinearities the iteration targets) lets the
/// bracket grow by doubling until the defect changes sign; bisection then
/// shrinks the bracket until `|φ(c)| < tol`.
///
/// # Errors
///
/// [`HammersteinError::BadConfig`] for a non-positive tolerance;
/// [`HammersteinError::NoBracket`] when the defect is already negative at
/// zero or never changes sign below the cap;
/// [`HammersteinError::BisectionStalled`] if the bracket collapses before
/// the tolerance is met; plus evaluation failures.
pub fn separable_oracle(
    g: &Profile,
    h: &Profile,
    f: &Nonlinearity,
    grid: &QuadratureGrid,
    tol: f64,
) -> Result<OracleRun, HammersteinError> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(HammersteinError::BadConfig {
            message: format!("oracle tolerance must be positive and finite, got {tol}"),
        });
    }
    let at_zero = scalar_defect(g, h, f, grid, 0.0)?;
    if at_zero == 0.0 {
        return Ok(finish(g, grid, 0.0, 0.0));
    }
    if at_zero < 0.0 {
        return Err(HammersteinError::NoBracket { lo: 0.0, hi: 0.0 });
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    loop {
        let at_hi = scalar_defect(g, h, f, grid, hi)?;
        if at_hi == 0.0 {
            return Ok(finish(g, grid, hi, 0.0));
        }
        if at_hi < 0.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_CAP {
            return Err(HammersteinError::NoBracket { lo, hi });
        }
    }
    // φ(lo) > 0 > φ(hi): bisect.
    let mut best = lo;
    let mut best_defect = at_zero;
    for _ in 0..BISECTION_ROUNDS {
        let mid = 0.5 * (lo + hi);
        let at_mid = scalar_defect(g, h, f, grid, mid)?;
        if at_mid.abs() < best_defect.abs() {
            best = mid;
            best_defect = at_mid;
        }
        if at_mid.abs() < tol {
            return Ok(finish(g, grid, mid, at_mid.abs()));
        }
        if at_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    if best_defect.abs() < tol {
        return Ok(finish(g, grid, best, best_defect.abs()));
    }
    Err(HammersteinError::BisectionStalled {
        residual: best_defect.abs(),
    })
}

fn finish(g: &Profile, grid: &QuadratureGrid, c_star: f64, residual: f64) -> OracleRun {
    let solution = grid.nodes.iter().map(|&t| g.eval(t) * c_star).collect();
    OracleRun {
        c_star,
        residual,
        solution,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_grid, QuadratureRule};
    use super::*;

    const ONES: Profile = Profile {
        intercept: 1.0,
        slope: 0.0,
    };

    #[test]
    fn the_constant_problem_has_root_one() {
        let grid = build_grid(0.0, 1.0, 65, QuadratureRule::Trapezoid).unwrap();
        let run = separable_oracle(
            &ONES,
            &ONES,
            &Nonlinearity::Constant { value: 1.0 },
            &grid,
            1e-12,
        )
        .unwrap();
        assert!((run.c_star - 1.0).abs() < 1e-10);
        assert!(run.residual < 1e-12);
    }

    #[test]
    fn a_vanishing_nonlinearity_roots_at_zero() {
        let grid = build_grid(0.0, 1.0, 5, QuadratureRule::Trapezoid).unwrap();
        let run = separable_oracle(
            &ONES,
            &ONES,
            &Nonlinearity::Constant { value: 0.0 },
            &grid,
            1e-12,
        )
        .unwrap();
        assert_eq!(run.c_star, 0.0);
        assert!(run.solution.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn a_negative_start_reports_the_missing_bracket() {
        let grid = build_grid(0.0, 1.0, 5, QuadratureRule::Trapezoid).unwrap();
        let run = separable_oracle(
            &ONES,
            &ONES,
            &Nonlinearity::Constant { value: -1.0 },
            &grid,
            1e-12,
        );
        assert!(matches!(run, Err(HammersteinError::NoBracket { .. })));
    }

    #[test]
    fn an_unbounded_growth_never_brackets() {
        // f = 2 + 2u against g = h ≡ 1 on [0, 1] gives
        // φ(c) = 2 + 2c − c = 2 + c: positive for every nonnegative c,
        // so the doubling search must give up at its cap.
        let grid = build_grid(0.0, 1.0, 5, QuadratureRule::Trapezoid).unwrap();
        let run = separable_oracle(
            &ONES,
            &ONES,
            &Nonlinearity::AffineClamped {
                intercept: 2.0,
                slope: 2.0,
                min: f64::NEG_INFINITY,
                max: f64::INFINITY,
            },
            &grid,
            1e-12,
        );
        assert!(matches!(run, Err(HammersteinError::NoBracket { .. })));
    }

    #[test]
    fn tolerances_are_validated() {
        let grid = build_grid(0.0, 1.0, 5, QuadratureRule::Trapezoid).unwrap();
        let run = separable_oracle(
            &ONES,
            &ONES,
            &Nonlinearity::Constant { value: 1.0 },
            &grid,
            0.0,
        );
        assert!(matches!(run, Err(HammersteinError::BadConfig { .. })));
    }
}
