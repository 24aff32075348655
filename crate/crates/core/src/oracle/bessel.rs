//! Integer-order Bessel functions of the first kind at arbitrary precision.

use crate::error::{Error, Result};
use crate::numerics::{bracket_root_with, Bracket, Float, PrecisionContext, RootTolerance};

/// `J_ν(x)` from its power series, evaluated with enough guard bits to
/// absorb the cancellation (about `x·log₂e` bits) and rounded to `x.prec()`.
pub fn bessel_j(nu: u32, x: &Float) -> Float {
    let prec = x.prec();
    let guard = (x.to_f64().abs() * std::f64::consts::LOG2_E) as u32 + 64;
    let work = prec + guard;
    let half = Float::with_val(work, x) / 2u32;
    let q = -Float::with_val(work, half.square_ref());

    // term_0 = (x/2)^ν / ν!
    let mut term = Float::with_val(work, rug::ops::Pow::pow(&half, nu));
    let mut fact = Float::with_val(work, 1);
    for k in 2..=nu {
        fact *= k;
    }
    term /= &fact;

    let mut sum = term.clone();
    let limit = Float::with_val(work, 1) >> (work as i32 + 8);
    let mut k: u32 = 0;
    loop {
        k += 1;
        term *= &q;
        term /= k;
        term /= k + nu;
        sum += &term;
        if Float::with_val(work, term.abs_ref()) <= Float::with_val(work, sum.abs_ref()) * &limit && k > 4 {
            break;
        }
        if term.is_zero() {
            break;
        }
    }
    Float::with_val(prec, &sum)
}

/// The `k`-th positive zero of `J_ν` (k ≥ 1), to the context precision.
pub fn bessel_j_zero(nu: u32, k: u32, ctx: &PrecisionContext) -> Result<Float> {
    if k == 0 {
        return Err(Error::IndexOutOfRange { index: 0, count: 0 });
    }
    // Zeros are more than π/2 apart; a step of 1/4 cannot skip one.
    let step = ctx.float(0.25);
    let f = |x: &Float| Ok(bessel_j(nu, x));
    let mut lo = step.clone();
    let mut f_lo = bessel_j(nu, &lo);
    let mut found = 0;
    let limit = (f64::from(k) + f64::from(nu) / 2.0 + 2.0) * std::f64::consts::PI + 10.0;
    while lo.to_f64() < limit {
        let hi = Float::with_val(ctx.bits(), &lo + &step);
        let f_hi = bessel_j(nu, &hi);
        if let Ok(bracket) = Bracket::new(lo.clone(), hi.clone(), f_lo.clone(), f_hi.clone()) {
            if !f_hi.is_zero() {
                found += 1;
                if found == k {
                    let tol = RootTolerance::x_only(Float::with_val(ctx.bits(), &hi * &ctx.pow10(-(ctx.digits() as i32) - 3)));
                    return bracket_root_with(f, &bracket, &tol);
                }
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::BracketNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_zeros() {
        let ctx = PrecisionContext::new(40).unwrap();
        let j01 = bessel_j_zero(0, 1, &ctx).unwrap();
        let expected = ctx.parse("2.404825557695772768621631879326454643124").unwrap();
        assert!(Float::with_val(ctx.bits(), &j01 - &expected).abs() < 1e-37);
        // j_{1,1} = 3.8317059702075123156...
        let j11 = bessel_j_zero(1, 1, &ctx).unwrap();
        let expected = ctx.parse("3.831705970207512315614435886308160766564").unwrap();
        assert!(Float::with_val(ctx.bits(), &j11 - &expected).abs() < 1e-37);
    }

    #[test]
    fn series_values() {
        let ctx = PrecisionContext::new(30).unwrap();
        let v = bessel_j(0, &ctx.float(1));
        let expected = ctx.parse("0.765197686557966551449717526103").unwrap();
        assert!(Float::with_val(ctx.bits(), &v - &expected).abs() < 1e-28);
        let v = bessel_j(3, &ctx.float(20));
        let expected = ctx.parse("-0.0989013945604496756128772236501").unwrap();
        assert!(Float::with_val(ctx.bits(), &v - &expected).abs() < 1e-28);
    }
}
