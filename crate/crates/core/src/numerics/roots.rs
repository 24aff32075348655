//! Hybrid bisection/secant root finding at arbitrary precision.

use super::Float;
use crate::error::{Error, Result};
use std::cmp::Ordering;

pub const DEFAULT_MAX_ITERATIONS: usize = 2000;

/// Bisection runs until the bracket has shrunk by this many halvings (or
/// reached the tolerance) before the secant polish takes over.
const BISECTION_HALVINGS: u32 = 24;

/// An interval `[lo, hi]` on which `f` changes sign.
#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    pub lo: Float,
    pub hi: Float,
    pub f_lo: Float,
    pub f_hi: Float,
}

impl Bracket {
    /// Validates ordering and sign change. An exact zero at either end
    /// counts as a sign change.
    pub fn new(lo: Float, hi: Float, f_lo: Float, f_hi: Float) -> Result<Self> {
        if lo >= hi || !sign_change(&f_lo, &f_hi) {
            return Err(Error::NoSignChange {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    pub fn from_fn<F>(mut f: F, lo: Float, hi: Float) -> Result<Self>
    where
        F: FnMut(&Float) -> Result<Float>,
    {
        let f_lo = f(&lo)?;
        let f_hi = f(&hi)?;
        Self::new(lo, hi, f_lo, f_hi)
    }

    pub fn width(&self) -> Float {
        Float::with_val(self.lo.prec(), &self.hi - &self.lo)
    }
}

fn sign_change(a: &Float, b: &Float) -> bool {
    a.is_zero() || b.is_zero() || a.is_sign_negative() != b.is_sign_negative()
}

/// Stopping rules for [`bracket_root_with`].
#[derive(Clone, Debug)]
pub struct RootTolerance {
    /// Stop once the bracket or the last step is at most this wide.
    pub x_abs: Float,
    /// Stop once `|f(x)|` is at most this (never, if `None`, except on an
    /// exact zero).
    pub f_abs: Option<Float>,
    pub max_iterations: usize,
}

impl RootTolerance {
    pub fn x_only(x_abs: Float) -> Self {
        Self {
            x_abs,
            f_abs: None,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// Root of `f` inside `bracket`: returns `x` with `|f(x)| ≤ tol` or an
/// enclosing interval no wider than `tol`.
pub fn bracket_root<F>(f: F, bracket: &Bracket, tol: &Float) -> Result<Float>
where
    F: FnMut(&Float) -> Result<Float>,
{
    let tolerance = RootTolerance {
        x_abs: tol.clone(),
        f_abs: Some(tol.clone()),
        max_iterations: DEFAULT_MAX_ITERATIONS,
    };
    bracket_root_with(f, bracket, &tolerance)
}

/// Bisection until the bracket is small, then a secant polish that falls
/// back to bisection whenever an iterate leaves the current bracket.
pub fn bracket_root_with<F>(mut f: F, bracket: &Bracket, tol: &RootTolerance) -> Result<Float>
where
    F: FnMut(&Float) -> Result<Float>,
{
    let prec = bracket.lo.prec().max(bracket.hi.prec());
    let mut lo = Float::with_val(prec, &bracket.lo);
    let mut hi = Float::with_val(prec, &bracket.hi);
    let mut f_lo = bracket.f_lo.clone();
    let mut f_hi = bracket.f_hi.clone();
    if f_lo.is_zero() {
        return Ok(lo);
    }
    if f_hi.is_zero() {
        return Ok(hi);
    }
    let small_enough = |value: &Float| match &tol.f_abs {
        Some(limit) => Float::with_val(prec, value.abs_ref()) <= *limit,
        None => false,
    };

    let initial_width = Float::with_val(prec, &hi - &lo);
    let switch_width = (initial_width >> BISECTION_HALVINGS).max(&tol.x_abs);
    let mut iterations = 0usize;

    let mut width = Float::with_val(prec, &hi - &lo);
    while width > switch_width {
        iterations += 1;
        if iterations > tol.max_iterations {
            return Err(Error::NoConvergence(tol.max_iterations));
        }
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        let f_mid = checked(f(&mid)?)?;
        if f_mid.is_zero() || small_enough(&f_mid) {
            return Ok(mid);
        }
        if f_mid.is_sign_negative() == f_lo.is_sign_negative() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        width = Float::with_val(prec, &hi - &lo);
    }

    // Secant polish, safeguarded by the bracket.
    let (mut x0, mut f0) = (lo.clone(), f_lo.clone());
    let (mut x1, mut f1) = (hi.clone(), f_hi.clone());
    loop {
        iterations += 1;
        if iterations > tol.max_iterations {
            return Err(Error::NoConvergence(tol.max_iterations));
        }
        let mut candidate = secant_step(&x0, &f0, &x1, &f1, prec);
        let inside = candidate
            .as_ref()
            .map(|x| *x > lo && *x < hi)
            .unwrap_or(false);
        if !inside {
            candidate = Some(Float::with_val(prec, &lo + &hi) / 2u32);
        }
        let x2 = candidate.expect("candidate set above");
        let f2 = checked(f(&x2)?)?;
        if f2.is_zero() || small_enough(&f2) {
            return Ok(x2);
        }
        if f2.is_sign_negative() == f_lo.is_sign_negative() {
            lo = x2.clone();
            f_lo = f2.clone();
        } else {
            hi = x2.clone();
        }
        let step = Float::with_val(prec, &x2 - &x1).abs();
        let width = Float::with_val(prec, &hi - &lo);
        x0 = std::mem::replace(&mut x1, x2);
        f0 = std::mem::replace(&mut f1, f2);
        if step <= tol.x_abs || width <= tol.x_abs {
            return Ok(x1);
        }
    }
}

/// Plain secant iteration from two seeds until `|Δx| ≤ tol`.
///
/// With `trust = Some((lo, hi))` an iterate outside `[lo, hi]` is an error.
pub fn polish_root_secant<F>(
    mut f: F,
    x0: &Float,
    x1: &Float,
    tol: &Float,
    trust: Option<(&Float, &Float)>,
) -> Result<Float>
where
    F: FnMut(&Float) -> Result<Float>,
{
    let prec = x0.prec().max(x1.prec());
    let mut a = Float::with_val(prec, x0);
    let mut b = Float::with_val(prec, x1);
    let mut fa = checked(f(&a)?)?;
    let mut fb = checked(f(&b)?)?;
    if fb.is_zero() {
        return Ok(b);
    }
    if fa.is_zero() {
        return Ok(a);
    }
    for _ in 0..DEFAULT_MAX_ITERATIONS {
        let next = secant_step(&a, &fa, &b, &fb, prec).ok_or(Error::NoConvergence(0))?;
        if let Some((lo, hi)) = trust {
            if next.partial_cmp(lo) == Some(Ordering::Less)
                || next.partial_cmp(hi) == Some(Ordering::Greater)
            {
                return Err(Error::DivergedIterate(next.to_string()));
            }
        }
        let step = Float::with_val(prec, &next - &b).abs();
        let f_next = checked(f(&next)?)?;
        a = std::mem::replace(&mut b, next);
        fa = std::mem::replace(&mut fb, f_next);
        if fb.is_zero() || step <= *tol {
            return Ok(b);
        }
    }
    Err(Error::NoConvergence(DEFAULT_MAX_ITERATIONS))
}

fn secant_step(x0: &Float, f0: &Float, x1: &Float, f1: &Float, prec: u32) -> Option<Float> {
    let df = Float::with_val(prec, f1 - f0);
    if df.is_zero() {
        return None;
    }
    let dx = Float::with_val(prec, x1 - x0);
    let step = Float::with_val(prec, f1 * &dx) / &df;
    let next = Float::with_val(prec, x1 - &step);
    next.is_finite().then_some(next)
}

fn checked(value: Float) -> Result<Float> {
    if value.is_nan() || value.is_infinite() {
        Err(Error::NumericOverflow)
    } else {
        Ok(value)
    }
}
