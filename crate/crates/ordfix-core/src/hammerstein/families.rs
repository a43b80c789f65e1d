//! Parametric kernel and nonlinearity families.
//!
//! Each family is a small closed-form expression chosen so that problems
//! round-trip through JSON configuration files.  Kernels are functions of
//! the collocation point `t` and integration point `s`; nonlinearities
//! are functions of `s` and the state value `u` (the provided families
//! happen to be `s`-independent, but the signature keeps the slot).

use serde::{Deserialize, Serialize};

/// An affine profile `x ↦ intercept + slope · x`, used as a factor of
/// rank-one kernels.  `slope = 0` gives a constant profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    /// Value at `x = 0`.
    pub intercept: f64,
    /// Linear coefficient.
    pub slope: f64,
}

impl Profile {
    /// Evaluates the profile.
    #[must_use]
    pub fn eval(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Kernel families `T(t, s)` for the integral operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Kernel {
    /// `T ≡ value`.
    Constant {
        /// Constant kernel value.
        value: f64,
    },
    /// `T(t, s) = c0 + ct·t + cs·s`.
    Affine {
        /// Constant coefficient.
        c0: f64,
        /// Coefficient of the collocation variable `t`.
        ct: f64,
        /// Coefficient of the integration variable `s`.
        cs: f64,
    },
    /// Rank-one kernel `T(t, s) = g(t) · h(s)`.
    Separable {
        /// Factor in the collocation variable.
        g: Profile,
        /// Factor in the integration variable.
        h: Profile,
    },
    /// Smoothing kernel `T(t, s) = amplitude · exp(−((t − s) / width)²)`.
    GaussianBump {
        /// Peak value on the diagonal `t = s`.
        amplitude: f64,
        /// Length scale of the bump; must be nonzero to evaluate.
        width: f64,
    },
}

impl Kernel {
    /// Evaluates the kernel at a node pair.
    #[must_use]
    pub fn eval(&self, t: f64, s: f64) -> f64 {
        match self {
            Kernel::Constant { value } => *value,
            Kernel::Affine { c0, ct, cs } => c0 + ct * t + cs * s,
            Kernel::Separable { g, h } => g.eval(t) * h.eval(s),
            Kernel::GaussianBump { amplitude, width } => {
                let z = (t - s) / width;
                amplitude * (-z * z).exp()
            }
        }
    }
}

fn negative_infinity() -> f64 {
    f64::NEG_INFINITY
}

fn positive_infinity() -> f64 {
    f64::INFINITY
}

/// Nonlinearity families `f(s, u)` for the superposition term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Nonlinearity {
    /// `f ≡ value`.
    Constant {
        /// Constant nonlinearity value.
        value: f64,
    },
    /// `f(s, u) = clamp(intercept + slope·u, min, max)`; the clamp bounds
    /// default to `∓∞`, i.e. no clamping.
    AffineClamped {
        /// Value at `u = 0` before clamping.
        intercept: f64,
        /// Linear coefficient; negative slopes model order-breaking terms.
        slope: f64,
        /// Lower clamp bound (defaults to `-∞` when omitted).
        #[serde(default = "negative_infinity")]
        min: f64,
        /// Upper clamp bound (defaults to `+∞` when omitted).
        #[serde(default = "positive_infinity")]
        max: f64,
    },
    /// Bounded shifted sigmoid `f(s, u) = a + b · u / (1 + |u|)`, with
    /// values confined to `(a − |b|, a + |b|)`.
    BoundedSigmoid {
        /// Vertical shift.
        a: f64,
        /// Sigmoid amplitude.
        b: f64,
    },
    /// Arctangent shape `f(s, u) = a + b · atan(scale · u)`.
    Arctan {
        /// Vertical shift.
        a: f64,
        /// Amplitude in front of the arctangent.
        b: f64,
        /// Horizontal scale inside the arctangent.
        scale: f64,
    },
}

impl Nonlinearity {
    /// Evaluates the nonlinearity at `(s, u)`.
    #[must_use]
    pub fn eval(&self, _s: f64, u: f64) -> f64 {
        match self {
            Nonlinearity::Constant { value } => *value,
            Nonlinearity::AffineClamped {
                intercept,
                slope,
                min,
                max,
            } => (intercept + slope * u).max(*min).min(*max),
            Nonlinearity::BoundedSigmoid { a, b } => a + b * u / (1.0 + u.abs()),
            Nonlinearity::Arctan { a, b, scale } => a + b * (scale * u).atan(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_evaluate_their_closed_forms() {
        assert_eq!(Kernel::Constant { value: 2.5 }.eval(0.3, 0.7), 2.5);
        let affine = Kernel::Affine {
            c0: 1.0,
            ct: 2.0,
            cs: -1.0,
        };
        assert!((affine.eval(0.5, 0.25) - 1.75).abs() < 1e-15);
        let product = Kernel::Separable {
            g: Profile {
                intercept: 0.0,
                slope: 1.0,
            },
            h: Profile {
                intercept: 0.0,
                slope: 1.0,
            },
        };
        assert!((product.eval(0.5, 0.4) - 0.2).abs() < 1e-15);
        let bump = Kernel::GaussianBump {
            amplitude: 3.0,
            width: 0.5,
        };
        assert!((bump.eval(0.7, 0.7) - 3.0).abs() < 1e-15);
        assert!(bump.eval(0.0, 1.0) < 3.0 * (-3.9f64).exp());
    }

    #[test]
    fn nonlinearities_evaluate_and_respect_bounds() {
        let clamped = Nonlinearity::AffineClamped {
            intercept: 0.2,
            slope: 1.0,
            min: 0.0,
            max: 1.0,
        };
        assert_eq!(clamped.eval(0.0, -5.0), 0.0);
        assert_eq!(clamped.eval(0.0, 5.0), 1.0);
        assert!((clamped.eval(0.0, 0.3) - 0.5).abs() < 1e-15);
        let sigmoid = Nonlinearity::BoundedSigmoid { a: 0.2, b: 0.3 };
        assert!((sigmoid.eval(0.0, 0.0) - 0.2).abs() < 1e-15);
        assert!(sigmoid.eval(0.0, 1e9) < 0.5);
        assert!(sigmoid.eval(0.0, -1e9) > -0.1);
        let arc = Nonlinearity::Arctan {
            a: 1.0,
            b: 2.0,
            scale: 3.0,
        };
        assert!((arc.eval(0.0, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn families_round_trip_through_tagged_json() {
        let kernel = Kernel::Separable {
            g: Profile {
                intercept: 1.0,
                slope: 1.0,
            },
            h: Profile {
                intercept: 1.0,
                slope: 0.0,
            },
        };
        let text = serde_json::to_string(&kernel).unwrap();
        assert!(text.contains("\"family\":\"separable\""));
        let back: Kernel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, kernel);

        let f: Nonlinearity =
            serde_json::from_str(r#"{"family":"bounded_sigmoid","a":0.2,"b":0.3}"#).unwrap();
        assert_eq!(f, Nonlinearity::BoundedSigmoid { a: 0.2, b: 0.3 });
        // Clamp bounds default to the whole line when omitted.
        let f: Nonlinearity =
            serde_json::from_str(r#"{"family":"affine_clamped","intercept":0.0,"slope":-1.0}"#)
                .unwrap();
        assert_eq!(f.eval(0.0, 7.0), -7.0);
        assert!(serde_json::from_str::<Nonlinearity>(r#"{"family":"unknown"}"#).is_err());
    }
}
