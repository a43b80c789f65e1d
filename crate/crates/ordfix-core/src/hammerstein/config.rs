//! JSON configuration for solver runs.
//!
//! A configuration document pins the whole problem:
//!
//! ```json
//! {
//!   "domain": [0.0, 1.0],
//!   "nodes": 129,
//!   "rule": "trapezoid",
//!   "p": 2.0,
//!   "gamma": 1.0,
//!   "kernel": { "family": "constant", "value": 1.0 },
//!   "nonlinearity": { "family": "constant", "value": 1.0 }
//! }
//! ```
//!
//! Optional `eps`, `max_iter`, and `ball_samples` keys override the
//! solver defaults; unknown keys are rejected so typos fail loudly.

use super::families::{Kernel, Nonlinearity};
use super::{build_grid, HammersteinError, HammersteinProblem, QuadratureRule};
use serde::Deserialize;

/// Solver settings attached to a parsed configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveSettings {
    /// Step tolerance for both convergence norms.
    pub eps: f64,
    /// Iteration budget.
    pub max_iter: usize,
    /// Random ball points for the growth audit.
    pub ball_samples: usize,
}

impl Default for SolveSettings {
    fn default() -> Self {
        Self {
            eps: 1e-12,
            max_iter: 200,
            ball_samples: 200,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemConfig {
    domain: [f64; 2],
    nodes: usize,
    rule: QuadratureRule,
    p: f64,
    gamma: f64,
    kernel: Kernel,
    nonlinearity: Nonlinearity,
    #[serde(default)]
    eps: Option<f64>,
    #[serde(default)]
    max_iter: Option<usize>,
    #[serde(default)]
    ball_samples: Option<usize>,
}

/// Parses a configuration document into a problem plus solver settings.
///
/// # Errors
///
/// [`HammersteinError::BadConfig`] for malformed JSON or unknown keys,
/// plus the validation errors of [`build_grid`] and
/// [`HammersteinProblem::new`].
pub fn parse_problem_config(
    text: &str,
) -> Result<(HammersteinProblem, SolveSettings), HammersteinError> {
    let config: ProblemConfig =
        serde_json::from_str(text).map_err(|err| HammersteinError::BadConfig {
            message: err.to_string(),
        })?;
    let grid = build_grid(config.domain[0], config.domain[1], config.nodes, config.rule)?;
    let problem =
        HammersteinProblem::new(grid, config.kernel, config.nonlinearity, config.p, config.gamma)?;
    let defaults = SolveSettings::default();
    let settings = SolveSettings {
        eps: config.eps.unwrap_or(defaults.eps),
        max_iter: config.max_iter.unwrap_or(defaults.max_iter),
        ball_samples: config.ball_samples.unwrap_or(defaults.ball_samples),
    };
    Ok((problem, settings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_full_document_parses_with_defaults() {
        let text = r#"{
            "domain": [0.0, 1.0],
            "nodes": 129,
            "rule": "trapezoid",
            "p": 2.0,
            "gamma": 1.0,
            "kernel": {"family": "constant", "value": 1.0},
            "nonlinearity": {"family": "constant", "value": 1.0}
        }"#;
        let (problem, settings) = parse_problem_config(text).unwrap();
        assert_eq!(problem.len(), 129);
        assert_eq!(settings, SolveSettings::default());
    }

    #[test]
    fn optional_keys_override_the_defaults() {
        let text = r#"{
            "domain": [0.0, 1.0],
            "nodes": 17,
            "rule": "gauss_legendre",
            "p": 2.0,
            "gamma": 0.5,
            "kernel": {"family": "affine", "c0": 1.0, "ct": 1.0, "cs": 0.0},
            "nonlinearity": {"family": "bounded_sigmoid", "a": 0.2, "b": 0.3},
            "eps": 1e-9,
            "max_iter": 77,
            "ball_samples": 13
        }"#;
        let (problem, settings) = parse_problem_config(text).unwrap();
        assert_eq!(problem.grid.rule, QuadratureRule::GaussLegendre);
        assert_eq!(settings.eps, 1e-9);
        assert_eq!(settings.max_iter, 77);
        assert_eq!(settings.ball_samples, 13);
    }

    #[test]
    fn typos_and_bad_values_fail_loudly() {
        assert!(matches!(
            parse_problem_config("{"),
            Err(HammersteinError::BadConfig { .. })
        ));
        // Unknown top-level key.
        let text = r#"{
            "domain": [0.0, 1.0],
            "nodes": 5,
            "rule": "trapezoid",
            "p": 2.0,
            "gamma": 1.0,
            "kernel": {"family": "constant", "value": 1.0},
            "nonlinearity": {"family": "constant", "value": 1.0},
            "surprise": true
        }"#;
        assert!(matches!(
            parse_problem_config(text),
            Err(HammersteinError::BadConfig { .. })
        ));
        // Valid JSON, invalid interval.
        let text = r#"{
            "domain": [1.0, 0.0],
            "nodes": 5,
            "rule": "trapezoid",
            "p": 2.0,
            "gamma": 1.0,
            "kernel": {"family": "constant", "value": 1.0},
            "nonlinearity": {"family": "constant", "value": 1.0}
        }"#;
        assert!(matches!(
            parse_problem_config(text),
            Err(HammersteinError::BadDomain { .. })
        ));
    }
}
