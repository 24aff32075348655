use super::{aim_step, delta_at, AimState, CoefficientSource};
use crate::error::{Error, Result};
use crate::numerics::{Float, PrecisionContext, RealPolynomial};

/// δ_n at `r0` as an exact polynomial in the spectral parameter.
///
/// Requires λ₀ and s₀ to be affine in the parameter. The jet coefficients
/// are then polynomials and the recursion runs once for all parameter
/// values. Real roots are real-axis eigenvalues; a root pair ±iκ shows up
/// as a real root of the polynomial in −p².
pub fn delta_polynomial<S: CoefficientSource>(
    src: &S,
    n: usize,
    r0: &Float,
    ctx: &PrecisionContext,
) -> Result<RealPolynomial> {
    let variable = RealPolynomial::identity(ctx.bits());
    let (lambda0, s0) = src
        .coefficients(&variable)
        .map_err(|_| Error::NotAffineInParameter)?;
    let affine = lambda0
        .terms
        .iter()
        .chain(&s0.terms)
        .all(|t| t.coeff.degree() <= 1);
    if !affine {
        return Err(Error::NotAffineInParameter);
    }
    src.check_point(None, r0)?;
    let r0 = ctx.round(r0);
    let lambda0 = lambda0.bind(&r0)?;
    let s0 = s0.bind(&r0)?;
    let mut state = AimState::seed(&r0, n + 2, &variable);
    for _ in 0..=n {
        state = aim_step(&state, &lambda0, &s0)?;
    }
    Ok(delta_at(&state))
}
