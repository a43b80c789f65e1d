//! Scalar abstraction shared by the exact-rational and floating-point paths.
//!
//! Everything in this crate that only needs ordered-field arithmetic is
//! generic over [`Scalar`], so the same code runs exactly over rationals
//! (zero comparison slack) and approximately over `f32`/`f64` (small slack).
//! Operations that genuinely need real powers or transcendental functions
//! (p-norms, quadrature solvers) require the tighter [`RealScalar`] bound.

use std::fmt::{Debug, Display};

use num::bigint::BigInt;
use num::pow::Pow;
use num::{BigRational, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Ordered-field scalar: the common ground between exact rationals and floats.
pub trait Scalar:
    Num + Signed + PartialOrd + Clone + Debug + Display + FromPrimitive + ToPrimitive
{
    /// Comparison slack appropriate for the representation: zero for exact
    /// types, a small epsilon for floating point.
    fn default_tolerance() -> Self;

    /// `self` raised to the power `exp`, when the representation supports it.
    /// Exact rationals only support integer exponents; floats support any.
    fn try_powf(&self, exp: &Self) -> Option<Self>;

    /// The square root, when representable: floats always (for nonnegative
    /// input), exact rationals only when numerator and denominator are
    /// perfect squares.
    fn try_sqrt(&self) -> Option<Self>;

    /// Converts a small integer.
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("small integer must be representable")
    }

    /// The fraction `num / den` (`den` must be nonzero).
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "ratio denominator must be nonzero");
        Self::from_int(num) / Self::from_int(den)
    }

    /// Lossy `f64` view, for diagnostics and report formatting only.
    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Floating-point scalar: adds real powers, roots and transcendentals.
pub trait RealScalar: Scalar + num::Float {}

impl Scalar for f64 {
    fn default_tolerance() -> Self {
        1e-12
    }

    fn try_powf(&self, exp: &Self) -> Option<Self> {
        Some(self.powf(*exp))
    }

    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl Scalar for f32 {
    fn default_tolerance() -> Self {
        1e-6
    }

    fn try_powf(&self, exp: &Self) -> Option<Self> {
        Some(self.powf(*exp))
    }

    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl Scalar for BigRational {
    fn default_tolerance() -> Self {
        BigRational::zero()
    }

    fn try_powf(&self, exp: &Self) -> Option<Self> {
        if !exp.is_integer() {
            return None;
        }
        let e = exp.to_integer().to_i32()?;
        if self.is_zero() && e < 0 {
            return None;
        }
        Some(Pow::pow(self.clone(), e))
    }

    fn try_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let numer = value_sqrt(self.numer())?;
        let denom = value_sqrt(self.denom())?;
        return Some(BigRational::new(numer, denom));

        fn value_sqrt(n: &BigInt) -> Option<BigInt> {
            let root = n.sqrt();
            (&root * &root == *n).then_some(root)
        }
    }
}

impl RealScalar for f64 {}
impl RealScalar for f32 {}

/// Builds the exact rational `num / den` from machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    assert!(den != 0, "rat denominator must be nonzero");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational whose reduced denominator is of the form `2^a * 5^b`
/// as an exact terminating decimal (`"1.5"`, `"-0.25"`, `"3"`).  Returns
/// `None` for rationals with no terminating decimal expansion.
pub fn decimal_string(value: &BigRational) -> Option<String> {
    let mut denom = value.denom().clone();
    if denom.is_zero() {
        return None;
    }
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    let shift = twos.max(fives);
    let scale = Pow::pow(BigInt::from(10), shift);
    let scaled = (value * BigRational::from_integer(scale)).to_integer();
    let digits = scaled.magnitude().to_string();
    let sign = if scaled.sign() == num::bigint::Sign::Minus {
        "-"
    } else {
        ""
    };
    let text = if shift == 0 {
        digits
    } else {
        let width = shift as usize;
        let padded = if digits.len() <= width {
            format!("{}{}", "0".repeat(width + 1 - digits.len()), digits)
        } else {
            digits
        };
        let split = padded.len() - width;
        let fraction = padded[split..].trim_end_matches('0');
        if fraction.is_empty() {
            padded[..split].to_string()
        } else {
            format!("{}.{}", &padded[..split], fraction)
        }
    };
    Some(format!("{sign}{text}"))
}

/// Renders a rational compactly: as a terminating decimal when one exists,
/// otherwise as `"p/q"`.
pub fn format_rational(value: &BigRational) -> String {
    decimal_string(value).unwrap_or_else(|| format!("{}/{}", value.numer(), value.denom()))
}

/// Parses a scalar from `"p/q"`, a plain integer, or a terminating decimal
/// such as `"0.25"`.  Used by fixture parameters and interchange files.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let i: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let f: BigInt = frac_part.parse().ok()?;
        let scale = Pow::pow(BigInt::from(10), frac_part.len() as u32);
        let magnitude = BigRational::new(i.magnitude().clone().into(), BigInt::one())
            + BigRational::new(f, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = text.parse().ok()?;
    Some(BigRational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_tolerance_is_exact_zero() {
        assert!(BigRational::default_tolerance().is_zero());
        assert_eq!(f64::default_tolerance(), 1e-12);
    }

    #[test]
    fn powf_on_rationals_only_accepts_integer_exponents() {
        let half = rat(1, 2);
        assert_eq!(half.try_powf(&rat(2, 1)), Some(rat(1, 4)));
        assert_eq!(half.try_powf(&rat(-1, 1)), Some(rat(2, 1)));
        assert_eq!(half.try_powf(&rat(1, 2)), None);
        assert_eq!(rat(0, 1).try_powf(&rat(-1, 1)), None);
    }

    #[test]
    fn sqrt_on_rationals_requires_perfect_squares() {
        assert_eq!(rat(9, 4).try_sqrt(), Some(rat(3, 2)));
        assert_eq!(rat(2, 1).try_sqrt(), None);
        assert_eq!(rat(-1, 1).try_sqrt(), None);
        assert_eq!(4.0f64.try_sqrt(), Some(2.0));
        assert_eq!((-1.0f64).try_sqrt(), None);
    }

    #[test]
    fn decimal_rendering_round_trips_dyadic_values() {
        assert_eq!(decimal_string(&rat(3, 2)).as_deref(), Some("1.5"));
        assert_eq!(decimal_string(&rat(-1, 4)).as_deref(), Some("-0.25"));
        assert_eq!(decimal_string(&rat(7, 1)).as_deref(), Some("7"));
        assert_eq!(decimal_string(&rat(1, 10)).as_deref(), Some("0.1"));
        assert_eq!(decimal_string(&rat(1, 3)), None);
    }

    #[test]
    fn parse_rational_accepts_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("-2"), Some(rat(-2, 1)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
