//! The asymptotic iteration method for `y″ = λ₀(r) y′ + s₀(r) y`.
//!
//! The iterates λ_n, s_n are carried as jets at a fixed expansion point r₀,
//! so every step is exact up to truncation order and working precision.
//! Eigenvalues are the zeros of the termination function
//! `δ_n = λ_n s_{n−1} − s_n λ_{n−1}` at r₀, taken as a function of a
//! spectral parameter.

mod factor;
mod polynomial;
mod solve;

pub use factor::reconstruct_factor;
pub use polynomial::delta_polynomial;
pub use solve::{
    monitored_delta, solve_parameter, Axis, ParameterRoot, SeedOrBracket, SolveOptions,
};

use crate::error::{Error, Result};
use crate::jet::{BoundRational, Jet, JetMultiplier, RationalFn};
use crate::numerics::{FieldScalar, Float, PrecisionContext, Scalar};

/// Produces λ₀ and s₀ as rational functions of r for a parameter value.
///
/// The parameter enters through the term coefficients only, so the same
/// source works for real, complex and polynomial-valued parameters.
pub trait CoefficientSource: Sync {
    fn coefficients<T: Scalar>(&self, param: &T) -> Result<(RationalFn<T>, RationalFn<T>)>;

    /// Fails unless `r0` is a regular point. `param` is the real parameter
    /// value when it affects the domain.
    fn check_point(&self, param: Option<&Float>, r0: &Float) -> Result<()>;
}

/// Where to expand: a fixed point, or a fixed fraction of the (real)
/// parameter when the parameter is the domain size.
#[derive(Clone, Debug, PartialEq)]
pub enum ExpansionPoint {
    Fixed(Float),
    ParameterFraction(Float),
}

impl ExpansionPoint {
    pub fn resolve(&self, param: &Float) -> Float {
        match self {
            Self::Fixed(r0) => Float::with_val(param.prec(), r0),
            Self::ParameterFraction(f) => Float::with_val(param.prec(), f * param),
        }
    }
}

/// λ_n, s_n and their predecessors as jets at r₀.
#[derive(Clone, Debug)]
pub struct AimState<T> {
    n: i64,
    lambda: Jet<T>,
    s: Jet<T>,
    lambda_prev: Jet<T>,
    s_prev: Jet<T>,
}

impl<T: Scalar> AimState<T> {
    /// λ₋₁ = 1, s₋₁ = 0 at `order`. Enough for `order − 1` steps to n = order − 1.
    pub fn seed(point: &Float, order: usize, template: &T) -> Self {
        let one = T::from_real(&Float::with_val(template.prec(), 1));
        let lambda = Jet::constant(point, one, order);
        let s = Jet::constant(point, template.zero_like(), order);
        Self {
            n: -1,
            lambda_prev: lambda.clone(),
            s_prev: s.clone(),
            lambda,
            s,
        }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn lambda(&self) -> &Jet<T> {
        &self.lambda
    }

    pub fn s(&self) -> &Jet<T> {
        &self.s
    }

    pub fn lambda_prev(&self) -> &Jet<T> {
        &self.lambda_prev
    }

    pub fn s_prev(&self) -> &Jet<T> {
        &self.s_prev
    }

    pub fn order(&self) -> usize {
        self.lambda.order()
    }
}

/// One AIM step. The jet order drops by one.
pub fn aim_step<T, M>(state: &AimState<T>, lambda0: &M, s0: &M) -> Result<AimState<T>>
where
    T: Scalar,
    M: JetMultiplier<T>,
{
    let order = state.order();
    if order == 0 {
        return Err(Error::OrderExhausted);
    }
    let lower = order - 1;
    let lambda_product = lambda0.multiply(&state.lambda)?.truncate(lower);
    let s_product = s0.multiply(&state.lambda)?.truncate(lower);
    let lambda = state
        .lambda
        .derivative()?
        .add(&state.s.truncate(lower))?
        .add(&lambda_product)?;
    let s = state.s.derivative()?.add(&s_product)?;
    if !lambda.is_finite() || !s.is_finite() {
        return Err(Error::NumericOverflow);
    }
    Ok(AimState {
        n: state.n + 1,
        lambda_prev: state.lambda.truncate(lower),
        s_prev: state.s.truncate(lower),
        lambda,
        s,
    })
}

/// δ_n at the expansion point.
pub fn delta_at<T: Scalar>(state: &AimState<T>) -> T {
    state
        .lambda
        .value()
        .mul_ref(state.s_prev.value())
        .sub_ref(&state.s.value().mul_ref(state.lambda_prev.value()))
}

/// δ_n as a jet in r around the expansion point.
pub fn delta_jet<T: Scalar>(state: &AimState<T>) -> Result<Jet<T>> {
    state
        .lambda
        .mul(&state.s_prev)?
        .sub(&state.s.mul(&state.lambda_prev)?)
}

/// `|δ_n| / max(|λ_n s_{n−1}|, |s_n λ_{n−1}|, μ |λ_n λ_{n−1}|)` at r₀, where
/// μ is the size of λ₀ at r₀. The μ term keeps the scale meaningful when
/// s_n vanishes identically, as it does at exactly solvable points.
pub fn relative_residual<T: Scalar>(state: &AimState<T>, mu: &Float) -> Float {
    let delta = delta_at(state);
    let prec = delta.prec();
    if delta.is_exact_zero() {
        return Float::new(prec);
    }
    let lambda = state.lambda.value();
    let lambda_prev = state.lambda_prev.value();
    let scale = lambda
        .mul_ref(state.s_prev.value())
        .magnitude()
        .max(&state.s.value().mul_ref(lambda_prev).magnitude())
        .max(&Float::with_val(prec, mu * &lambda.mul_ref(lambda_prev).magnitude()));
    if scale.is_zero() {
        return Float::with_val(prec, rug::float::Special::Infinity);
    }
    delta.magnitude() / scale
}

/// Outcome of running the recursion at one parameter value.
#[derive(Clone, Debug)]
pub struct TerminationReport<T> {
    /// δ₁, …, δ_n at r₀.
    pub delta_sequence: Vec<T>,
    pub relative_residual: Float,
    pub converged: bool,
    /// s_n / λ_n at r₀.
    pub alpha: T,
    pub n: usize,
}

/// Bound λ₀, s₀ at r₀ plus the μ scale for residuals.
pub(crate) struct BoundCoefficients<T> {
    pub lambda0: BoundRational<T>,
    pub s0: BoundRational<T>,
    pub mu: Float,
}

pub(crate) fn bind_coefficients<S, T>(src: &S, param: &T, r0: &Float) -> Result<BoundCoefficients<T>>
where
    S: CoefficientSource,
    T: Scalar,
{
    src.check_point(param.as_real().as_ref(), r0)?;
    let (lambda0, s0) = src.coefficients(param)?;
    let lambda0 = lambda0.bind(r0)?;
    let s0 = s0.bind(r0)?;
    let mu = lambda0.magnitude();
    Ok(BoundCoefficients { lambda0, s0, mu })
}

/// The state after exactly `n` steps (δ_n available), no early stop.
pub fn state_at<S, T>(src: &S, param: &T, r0: &Float, n: usize) -> Result<(AimState<T>, Float)>
where
    S: CoefficientSource,
    T: Scalar,
{
    let bound = bind_coefficients(src, param, r0)?;
    let mut state = AimState::seed(r0, n + 2, param);
    for _ in 0..=n {
        state = aim_step(&state, &bound.lambda0, &bound.s0)?;
    }
    Ok((state, bound.mu))
}

/// Runs up to `n_max` steps, stopping once the relative residual falls to
/// the context epsilon (checked from n = 1).
pub fn run_aim<S, T>(
    src: &S,
    param: &T,
    r0: &Float,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<TerminationReport<T>>
where
    S: CoefficientSource,
    T: FieldScalar,
{
    if n_max == 0 {
        return Err(Error::NotConverged(0));
    }
    let bound = bind_coefficients(src, param, r0)?;
    let epsilon = ctx.epsilon();
    let mut state = AimState::seed(r0, n_max + 2, param);
    state = aim_step(&state, &bound.lambda0, &bound.s0)?;
    let mut deltas = Vec::with_capacity(n_max);
    let mut residual = relative_residual(&state, &bound.mu);
    for _ in 1..=n_max {
        state = aim_step(&state, &bound.lambda0, &bound.s0)?;
        deltas.push(delta_at(&state));
        residual = relative_residual(&state, &bound.mu);
        if residual <= epsilon {
            break;
        }
    }
    let lambda = state.lambda.value();
    if lambda.is_exact_zero() {
        return Err(Error::NumericOverflow);
    }
    let alpha = state.s.value().div_ref(lambda);
    Ok(TerminationReport {
        converged: residual <= epsilon,
        n: deltas.len(),
        delta_sequence: deltas,
        relative_residual: residual,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::AffineFactor;
    use crate::numerics::Complex;

    /// Constant coefficients λ₀ = c, s₀ = d, independent of the parameter.
    struct Constant {
        c: f64,
        d: f64,
    }

    impl CoefficientSource for Constant {
        fn coefficients<T: Scalar>(&self, param: &T) -> Result<(RationalFn<T>, RationalFn<T>)> {
            let prec = param.prec();
            Ok((
                RationalFn::new().term(T::from_real(&Float::with_val(prec, self.c)), vec![]),
                RationalFn::new().term(T::from_real(&Float::with_val(prec, self.d)), vec![]),
            ))
        }

        fn check_point(&self, _: Option<&Float>, _: &Float) -> Result<()> {
            Ok(())
        }
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn first_steps_with_constant_coefficients() {
        let ctx = ctx();
        let src = Constant { c: 3.0, d: -2.0 };
        let (c, d) = (3.0, -2.0);
        let (state0, _) = state_at(&src, &ctx.zero(), &ctx.one(), 0).unwrap();
        assert_eq!(state0.n(), 0);
        assert_eq!(*state0.lambda().value(), c);
        assert_eq!(*state0.s().value(), d);
        assert_eq!(delta_at(&state0), -d);

        let (state1, _) = state_at(&src, &ctx.zero(), &ctx.one(), 1).unwrap();
        assert_eq!(*state1.lambda().value(), d + c * c);
        assert_eq!(*state1.s().value(), d * c);
        assert_eq!(delta_at(&state1), d * d);

        // λ₂ = s₁ + c λ₁, s₂ = d λ₁ (derivatives vanish).
        let (state2, _) = state_at(&src, &ctx.zero(), &ctx.one(), 2).unwrap();
        let (l1, s1) = (d + c * c, d * c);
        let (l2, s2) = (s1 + c * l1, d * l1);
        assert_eq!(*state2.lambda().value(), l2);
        assert_eq!(delta_at(&state2), l2 * s1 - s2 * l1);
    }

    #[test]
    fn order_drops_by_one_per_step() {
        let ctx = ctx();
        let src = Constant { c: 1.0, d: 1.0 };
        let bound = bind_coefficients(&src, &ctx.zero(), &ctx.one()).unwrap();
        let mut state = AimState::seed(&ctx.one(), 3, &ctx.zero());
        for expected in [2, 1, 0] {
            state = aim_step(&state, &bound.lambda0, &bound.s0).unwrap();
            assert_eq!(state.order(), expected);
        }
        assert_eq!(
            aim_step(&state, &bound.lambda0, &bound.s0).unwrap_err(),
            Error::OrderExhausted
        );
    }

    /// λ₀ = p + 1/(2 − r), s₀ = p/r, so both multiplication routes are exercised.
    struct Rational;

    impl CoefficientSource for Rational {
        fn coefficients<T: Scalar>(&self, param: &T) -> Result<(RationalFn<T>, RationalFn<T>)> {
            let prec = param.prec();
            let one = Float::with_val(prec, 1);
            let two = Float::with_val(prec, 2);
            let minus_one = Float::with_val(prec, -1);
            Ok((
                RationalFn::new()
                    .term(param.clone(), vec![])
                    .term(T::from_real(&one), vec![AffineFactor::new(two, minus_one)]),
                RationalFn::new().term(
                    param.clone(),
                    vec![AffineFactor::new(Float::new(prec), one)],
                ),
            ))
        }

        fn check_point(&self, _: Option<&Float>, r0: &Float) -> Result<()> {
            if *r0 > 0 && *r0 < 2 {
                Ok(())
            } else {
                Err(Error::ExpansionPointOutOfDomain)
            }
        }
    }

    #[test]
    fn fast_and_cauchy_routes_agree() {
        let ctx = ctx();
        let r0 = ctx.float(0.9);
        let param = Complex::new(ctx.float(0.4), ctx.float(1.3));
        let (fast, _) = state_at(&Rational, &param, &r0, 10).unwrap();

        let (l0, s0) = Rational.coefficients(&param).unwrap();
        let order = 12;
        let l0 = l0.jet(&r0, order).unwrap();
        let s0 = s0.jet(&r0, order).unwrap();
        let mut slow = AimState::seed(&r0, order, &param);
        for _ in 0..=10 {
            slow = aim_step(&slow, &l0, &s0).unwrap();
        }
        let diff = (&delta_at(&fast) - &delta_at(&slow)).abs();
        let scale = delta_at(&slow).abs();
        assert!(diff <= scale * ctx.parse("1e-40").unwrap());
    }

    #[test]
    fn seed_identity() {
        let ctx = ctx();
        for p in [-1.5, 0.25, 3.0] {
            let r0 = ctx.float(0.6);
            let (state, _) = state_at(&Rational, &ctx.float(p), &r0, 0).unwrap();
            let (_, s0) = Rational.coefficients(&ctx.float(p)).unwrap();
            let expected = Float::with_val(ctx.bits(), -s0.value_at(&r0).unwrap());
            assert_eq!(delta_at(&state), expected);
        }
    }

    #[test]
    fn run_aim_reports_sequence_and_alpha() {
        let ctx = ctx();
        let report = run_aim(&Rational, &ctx.float(0.7), &ctx.float(1), 6, &ctx).unwrap();
        assert_eq!(report.delta_sequence.len(), report.n);
        assert!(report.n <= 6);
        assert!(!report.relative_residual.is_nan());
        assert_eq!(
            run_aim(&Rational, &ctx.float(0.7), &ctx.float(2), 6, &ctx).unwrap_err(),
            Error::ExpansionPointOutOfDomain
        );
    }
}
