//! Configurable-precision scalars, 1-D root finders and real polynomial roots.
//!
//! All arbitrary-precision values are MPFR floats ([`rug::Float`]). A
//! [`PrecisionContext`] fixes the working precision in decimal digits; every
//! constructor goes through it so that arithmetic between values stays at one
//! precision.

mod complex;
mod poly;
mod roots;
mod scalar;

pub use complex::Complex;
pub use poly::{real_roots, RealPolynomial, RealRoot};
pub use roots::{
    bracket_root, bracket_root_with, polish_root_secant, Bracket, RootTolerance,
    DEFAULT_MAX_ITERATIONS,
};
pub use rug::Float;
pub use scalar::{FieldScalar, Scalar};

use crate::error::{Error, Result};
use rug::ops::Pow;

/// log2(10), for converting decimal digits to mantissa bits.
const LOG2_10: f64 = std::f64::consts::LOG2_10;
/// Extra mantissa bits carried beyond the requested decimal digits.
const GUARD_BITS: u32 = 16;

/// Working precision in decimal digits.
///
/// `epsilon` (10^(5−digits)) is the acceptance scale for relative residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}

impl PrecisionContext {
    pub const DEFAULT_DIGITS: u32 = 50;
    pub const MIN_DIGITS: u32 = 16;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::InvalidPrecision(digits));
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa bits: enough for `digits` decimal digits plus guard bits.
    pub fn bits(&self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// Same context with `factor` times the digits.
    pub fn scaled(&self, factor: u32) -> Self {
        Self {
            digits: self.digits * factor,
        }
    }

    pub fn epsilon(&self) -> Float {
        self.pow10(5 - self.digits as i32)
    }

    pub fn pow10(&self, exponent: i32) -> Float {
        Float::with_val(self.bits(), 10).pow(exponent)
    }

    pub fn float<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits())
    }

    pub fn one(&self) -> Float {
        self.float(1)
    }

    /// Parses a decimal string, correctly rounded to the working precision.
    pub fn parse(&self, text: &str) -> Result<Float> {
        let trimmed = text.trim();
        Float::parse(trimmed)
            .map(|incomplete| Float::with_val(self.bits(), incomplete))
            .map_err(|_| Error::Parse(format!("`{trimmed}` is not a decimal number")))
    }

    /// Rounds an existing value to this context's precision.
    pub fn round(&self, value: &Float) -> Float {
        Float::with_val(self.bits(), value)
    }
}

/// Plain (non-exponential) decimal rendering with at most `significant`
/// significant digits and trailing zeros removed.
pub fn to_decimal_string(value: &Float, significant: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let (negative, mut digits, exponent) = value.to_sign_string_exp(10, Some(significant.max(1)));
    // value = 0.DIGITS × 10^exponent
    let exponent = exponent.unwrap_or(0);
    while digits.len() > 1 && digits.ends_with('0') {
        digits.pop();
    }
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exponent <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat('0').take((-exponent) as usize));
        out.push_str(&digits);
    } else {
        let exponent = exponent as usize;
        if digits.len() <= exponent {
            out.push_str(&digits);
            out.extend(std::iter::repeat('0').take(exponent - digits.len()));
        } else {
            out.push_str(&digits[..exponent]);
            out.push('.');
            out.push_str(&digits[exponent..]);
        }
    }
    out
}

/// `|a − b| ≤ tol · max(1, |a|, |b|)`.
pub fn close(a: &Float, b: &Float, tol: &Float) -> bool {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    let scale = Float::with_val(prec, a.abs_ref())
        .max(&Float::with_val(prec, b.abs_ref()))
        .max(&Float::with_val(prec, 1));
    diff <= Float::with_val(prec, tol * &scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bounds_and_epsilon() {
        assert_eq!(
            PrecisionContext::new(15),
            Err(Error::InvalidPrecision(15))
        );
        let ctx = PrecisionContext::default();
        assert_eq!(ctx.digits(), 50);
        assert!(ctx.bits() >= 167);
        let e50 = ctx.epsilon();
        let e100 = ctx.scaled(2).epsilon();
        assert!(e50 > 0 && e100 > 0 && e100 < e50);
        assert_eq!(e50, ctx.parse("1e-45").unwrap());
    }

    #[test]
    fn decimal_rendering() {
        let ctx = PrecisionContext::default();
        let cases = [
            ("-0.25", "-0.25"),
            ("937.986077318663675020", "937.98607731866367502"),
            ("0.000125", "0.000125"),
            ("1200", "1200"),
            ("2", "2"),
        ];
        for (input, expected) in cases {
            assert_eq!(to_decimal_string(&ctx.parse(input).unwrap(), 40), expected);
        }
        let third = ctx.one() / ctx.float(3);
        assert_eq!(to_decimal_string(&third, 5), "0.33333");
        assert_eq!(to_decimal_string(&ctx.zero(), 5), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        let ctx = PrecisionContext::default();
        assert!(matches!(ctx.parse("2.x"), Err(Error::Parse(_))));
    }
}
