//! Box radii at which a state crosses E = 0.
//!
//! At `a = 0` the coefficients no longer involve the energy, and the box
//! radius itself becomes the spectral parameter: δ_n(R) at r₀ = R/2.

use crate::aim::{
    monitored_delta, solve_parameter, Axis, CoefficientSource, ExpansionPoint, ParameterRoot,
    SeedOrBracket, SolveOptions,
};
use crate::error::{Error, Result};
use crate::jet::{AffineFactor, RationalFn};
use crate::numerics::{bracket_root_with, Bracket, Float, PrecisionContext, RootTolerance, Scalar};

/// λ₀ = 2(1/(R−r) − (l+1)/r), s₀ = −A/r + (2l+2)/(r(R−r)) with `R` as the
/// parameter. Only real parameter values are meaningful.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSource {
    coulomb: Float,
    l: u32,
}

impl CriticalSource {
    pub fn new(coulomb: Float, l: u32) -> Result<Self> {
        if !(coulomb.is_finite() && coulomb > 0) {
            return Err(Error::InvalidModel(format!("A must be positive, got {}", coulomb.to_f64())));
        }
        Ok(Self { coulomb, l })
    }
}

impl CoefficientSource for CriticalSource {
    fn coefficients<T: Scalar>(&self, radius: &T) -> Result<(RationalFn<T>, RationalFn<T>)> {
        let radius = radius.as_real().ok_or(Error::NotAffineInParameter)?;
        let prec = radius.prec();
        let inv_r = AffineFactor::new(Float::new(prec), Float::with_val(prec, 1));
        let inv_gap = AffineFactor::new(radius, Float::with_val(prec, -1));
        let two_l2 = 2 * i64::from(self.l) + 2;
        let real = |v: Float| T::from_real(&v);
        let lambda0 = RationalFn::new()
            .term(real(Float::with_val(prec, 2)), vec![inv_gap.clone()])
            .term(real(Float::with_val(prec, -two_l2)), vec![inv_r.clone()]);
        let s0 = RationalFn::new()
            .term(real(-Float::with_val(prec, &self.coulomb)), vec![inv_r.clone()])
            .term(real(Float::with_val(prec, two_l2)), vec![inv_r, inv_gap]);
        Ok((lambda0, s0))
    }

    fn check_point(&self, radius: Option<&Float>, r0: &Float) -> Result<()> {
        match radius {
            Some(radius) if *r0 > 0 && r0 < radius => Ok(()),
            _ => Err(Error::ExpansionPointOutOfDomain),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalOptions {
    pub digits: u32,
    pub n_max: usize,
    /// Grid points (uniform in √R) for the initial sign-change scan.
    pub scan_points: usize,
    pub scan_pairs: Vec<(usize, usize)>,
    pub filter_tolerance: f64,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        Self {
            digits: PrecisionContext::DEFAULT_DIGITS,
            n_max: 200,
            scan_points: 400,
            scan_pairs: vec![(16, 24), (32, 44), (60, 80)],
            filter_tolerance: 1e-3,
        }
    }
}

/// Large-zero estimate `((n + ν/2 − 1/4)π)² / (4A)` with `ν = 2l + 1`.
fn asymptotic_radius(l: u32, n: u32, coulomb: &Float) -> Float {
    let prec = coulomb.prec();
    let nu = f64::from(2 * l + 1);
    let j = Float::with_val(prec, f64::from(n) + nu / 2.0 - 0.25)
        * Float::with_val(prec, rug::float::Constant::Pi);
    Float::with_val(prec, j.square_ref()) / (Float::with_val(prec, coulomb * 4u32))
}

/// Critical radius of state `(n, l)`: the n-th ascending root family of
/// δ(R) that is stable between the orders of a scan pair, refined with
/// the n schedule.
pub fn critical_radius(l: u32, n: u32, coulomb: &Float, opts: &CriticalOptions) -> Result<ParameterRoot> {
    if n == 0 {
        return Err(Error::StateNotFound { n, l });
    }
    let ctx = PrecisionContext::new(opts.digits)?;
    let src = CriticalSource::new(coulomb.clone(), l)?;
    let r0 = ExpansionPoint::ParameterFraction(ctx.float(0.5));
    let r_max = asymptotic_radius(l, n, &ctx.round(coulomb)) * ctx.float(1.3);

    for &(n1, n2) in &opts.scan_pairs {
        let roots = stable_scan(&src, &r0, &r_max, n1, n2, opts, &ctx)?;
        let Some((estimate, spread)) = roots.into_iter().nth(n as usize - 1) else {
            continue;
        };
        let solve_opts = SolveOptions::new(opts.digits).with_n_max(opts.n_max).starting_near(n2);
        let mut width = (spread * 10u32).max(&(estimate.clone() * ctx.float(1e-12)));
        for _ in 0..4 {
            let lo = Float::with_val(ctx.bits(), &estimate - &width);
            let hi = Float::with_val(ctx.bits(), &estimate + &width);
            match solve_parameter(&src, Axis::Real, &SeedOrBracket::Bracket(lo, hi), &r0, &solve_opts) {
                Err(Error::NoRootInBracket) => width *= 100u32,
                other => return other,
            }
        }
    }
    Err(Error::StateNotFound { n, l })
}

/// Ascending roots of δ_{n1}(R) on (0, r_max] confirmed by a nearby root of
/// δ_{n2}, as (root at n2, |difference|).
fn stable_scan(
    src: &CriticalSource,
    r0: &ExpansionPoint,
    r_max: &Float,
    n1: usize,
    n2: usize,
    opts: &CriticalOptions,
    ctx: &PrecisionContext,
) -> Result<Vec<(Float, Float)>> {
    let points = opts.scan_points.max(8);
    let sqrt_max = r_max.clone().sqrt();
    let grid: Vec<Float> = (1..=points)
        .map(|k| {
            let s = Float::with_val(ctx.bits(), &sqrt_max * k as u64) / points as u64;
            Float::with_val(ctx.bits(), s.square_ref())
        })
        .collect();
    let f1 = |x: &Float| monitored_delta(src, Axis::Real, x, r0, n1);
    let f2 = |x: &Float| monitored_delta(src, Axis::Real, x, r0, n2);
    let values: Vec<Float> = grid.iter().map(f1).collect::<Result<_>>()?;
    let tol = RootTolerance::x_only(ctx.float(1e-20) * r_max);

    let mut out = Vec::new();
    for k in 0..points - 1 {
        let Ok(bracket) = Bracket::new(grid[k].clone(), grid[k + 1].clone(), values[k].clone(), values[k + 1].clone()) else {
            continue;
        };
        let first = bracket_root_with(f1, &bracket, &tol)?;
        let half = Float::with_val(ctx.bits(), &first * opts.filter_tolerance);
        let lo = Float::with_val(ctx.bits(), &first - &half);
        let hi = Float::with_val(ctx.bits(), &first + &half);
        let Ok(partner) = Bracket::from_fn(f2, lo, hi) else {
            continue;
        };
        let second = bracket_root_with(f2, &partner, &tol)?;
        let diff = Float::with_val(ctx.bits(), &second - &first).abs();
        out.push((second, diff));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn source_requires_real_radius_and_interior_point() {
        let ctx = PrecisionContext::default();
        let src = CriticalSource::new(ctx.float(2), 0).unwrap();
        assert!(src.check_point(Some(&ctx.float(2)), &ctx.float(1)).is_ok());
        assert_eq!(
            src.check_point(Some(&ctx.float(2)), &ctx.float(2)),
            Err(Error::ExpansionPointOutOfDomain)
        );
        let poly = crate::numerics::RealPolynomial::identity(ctx.bits());
        assert_eq!(src.coefficients(&poly).unwrap_err(), Error::NotAffineInParameter);
    }

    #[test]
    fn ground_state_critical_radius() {
        let ctx = PrecisionContext::default();
        let root = critical_radius(0, 1, &ctx.float(2), &CriticalOptions::default()).unwrap();
        let expected = ctx.parse("1.8352463302654866572").unwrap();
        assert!(Float::with_val(ctx.bits(), &root.value - &expected).abs() < 1e-18);
    }
}
