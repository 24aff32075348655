use super::{energy_from_parameter, HydrogenModel, StateLabel};
use crate::aim::{
    delta_polynomial, relative_residual, solve_parameter, state_at, Axis, ExpansionPoint,
    ParameterRoot, SeedOrBracket, SolveOptions,
};
use crate::error::{Error, Result};
use crate::numerics::{real_roots, Complex, Float, PrecisionContext, RealPolynomial};
use crate::oracle::{oracle_energy, IntegrationConfig};

/// r₀ = R/2 for R ≤ 1, otherwise 1.
pub fn expansion_point(radius: &Float) -> Float {
    if *radius <= 1 {
        Float::with_val(radius.prec(), radius / 2u32)
    } else {
        Float::with_val(radius.prec(), 1)
    }
}

#[derive(Clone, Debug)]
pub struct EnergyOptions {
    pub digits: u32,
    pub n_max: usize,
    /// Cross-check the state (and energy to 8 digits) with the shooting oracle.
    pub verify_with_oracle: bool,
    /// (n₁, n₂) pairs used to locate the state; roots of δ_{n₁} are kept only
    /// if δ_{n₂} has a root within `filter_tolerance` (relative).
    pub scan_pairs: Vec<(usize, usize)>,
    pub filter_tolerance: f64,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        Self {
            digits: PrecisionContext::DEFAULT_DIGITS,
            n_max: 200,
            verify_with_oracle: false,
            scan_pairs: vec![(16, 24), (32, 44), (60, 80)],
            filter_tolerance: 1e-3,
        }
    }
}

/// Converged eigenvalue `E = −a²` of one state.
#[derive(Clone, Debug)]
pub struct EnergyResult {
    pub state: StateLabel,
    pub energy: Float,
    /// Real for bound states, `i·κ` with `κ > 0` above threshold.
    pub parameter: Complex,
    pub axis: Axis,
    pub n_used: usize,
    pub relative_residual: Float,
    /// Working digits of the final run.
    pub digits: u32,
    pub stabilized: bool,
    pub stability: Float,
    pub oracle_energy: Option<f64>,
}

/// Where a state's root sits, from the low-order δ polynomials.
#[derive(Clone, Debug)]
pub struct StateEstimate {
    pub axis: Axis,
    pub value: Float,
    /// Change of the root between the two orders of the pair.
    pub spread: Float,
    pub pair: (usize, usize),
}

/// `Re p(iκ)` and `Im p(iκ)` as polynomials in κ.
fn imaginary_axis_parts(p: &RealPolynomial) -> (RealPolynomial, RealPolynomial) {
    let part = |keep: usize| {
        let coeffs = p
            .coefficients()
            .iter()
            .enumerate()
            .map(|(k, c)| match k % 4 {
                j if j == keep => c.clone(),
                j if j == keep + 2 => Float::with_val(c.prec(), -c),
                _ => Float::new(c.prec()),
            })
            .collect();
        RealPolynomial::new(coeffs)
    };
    (part(0), part(1))
}

/// Roots of `p1` that have a partner root of `p2` within `tol` (relative),
/// returned as (partner, |difference|).
fn stable_roots(p1: &RealPolynomial, p2: &RealPolynomial, interval: (&Float, &Float), tol: f64) -> Result<Vec<(Float, Float)>> {
    let first = real_roots(p1, interval)?;
    let second = real_roots(p2, interval)?;
    let mut out = Vec::new();
    for root in first.iter().filter(|r| r.value > 0) {
        let partner = second.iter().min_by(|a, b| {
            let da = Float::with_val(a.value.prec(), &a.value - &root.value).abs();
            let db = Float::with_val(b.value.prec(), &b.value - &root.value).abs();
            da.partial_cmp(&db).expect("finite roots")
        });
        if let Some(partner) = partner {
            let diff = Float::with_val(root.value.prec(), &partner.value - &root.value).abs();
            let scale = Float::with_val(root.value.prec(), root.value.abs_ref());
            if diff <= scale * tol {
                out.push((partner.value.clone(), diff));
            }
        }
    }
    out.dedup_by(|a, b| a.0 == b.0);
    Ok(out)
}

/// Locates the root of `state`: bound states are the real roots ordered by
/// decreasing `a` (increasing E), the rest continue on the imaginary axis
/// ordered by increasing κ.
pub fn locate_state(
    model: &HydrogenModel,
    state: StateLabel,
    ctx: &PrecisionContext,
    opts: &EnergyOptions,
) -> Result<StateEstimate> {
    if state.l != model.l() {
        return Err(Error::InvalidModel(format!(
            "state {state} does not match model l = {}",
            model.l()
        )));
    }
    let pi = ctx.float(rug::float::Constant::Pi);
    // The Coulomb term only lowers levels, so the n-th level lies below the
    // n-th level of the empty box.
    let kappa_max = ctx.float(f64::from(state.n) + f64::from(model.l()) / 2.0 + 1.0) * pi / ctx.round(model.radius());
    let a_free = ctx.round(model.coulomb()) / ctx.float(2 * (model.l() + 1));
    let a_max = a_free * ctx.float(1.01);
    for &(n1, n2) in &opts.scan_pairs {
        // Polynomial coefficients cancel heavily; roughly two digits are
        // lost per order.
        let scan = PrecisionContext::new(ctx.digits().max(2 * n2 as u32 + 20))?;
        let model = model.with_prec(scan.bits());
        let r0 = expansion_point(model.radius());
        let p1 = delta_polynomial(&model, n1, &r0, &scan)?;
        let p2 = delta_polynomial(&model, n2, &r0, &scan)?;
        let a_max = scan.round(&a_max);
        let mut bound = stable_roots(&p1, &p2, (&scan.zero(), &a_max), opts.filter_tolerance)?;
        bound.reverse();
        if let Some((value, spread)) = bound.get(state.n as usize - 1) {
            return Ok(StateEstimate {
                axis: Axis::Real,
                value: ctx.round(value),
                spread: ctx.round(spread),
                pair: (n1, n2),
            });
        }
        let k = state.n as usize - bound.len();
        // A level on the imaginary axis is a zero of both parts of δ(iκ);
        // zeros of the real part alone are artefacts of low order.
        let (re1, _) = imaginary_axis_parts(&p1);
        let (re2, im2) = imaginary_axis_parts(&p2);
        let window = (&scan.zero(), &scan.round(&kappa_max));
        let unbound = stable_roots(&re1, &re2, window, opts.filter_tolerance)?;
        let imaginary = real_roots(&im2, window)?;
        let unbound: Vec<_> = unbound
            .into_iter()
            .filter(|(value, _)| {
                imaginary.iter().any(|r| {
                    let diff = Float::with_val(value.prec(), &r.value - value).abs();
                    diff <= Float::with_val(value.prec(), value * opts.filter_tolerance)
                })
            })
            .collect();
        if let Some((value, spread)) = unbound.get(k - 1) {
            return Ok(StateEstimate {
                axis: Axis::Imaginary,
                value: ctx.round(value),
                spread: ctx.round(spread),
                pair: (n1, n2),
            });
        }
    }
    Err(Error::StateNotFound {
        n: state.n,
        l: state.l,
    })
}

/// Energy of `state` in `model`: locate the root, refine it with the n
/// schedule at r₀ = R/2 (R ≤ 1) or 1, and optionally confirm with the
/// shooting oracle.
pub fn solve_energy(model: &HydrogenModel, state: StateLabel, opts: &EnergyOptions) -> Result<EnergyResult> {
    let ctx = PrecisionContext::new(opts.digits)?;
    let estimate = locate_state(model, state, &ctx, opts)?;
    let r0 = ExpansionPoint::Fixed(expansion_point(&ctx.round(model.radius())));
    let solve_opts = SolveOptions::new(opts.digits)
        .with_n_max(opts.n_max)
        .starting_near(estimate.pair.1);
    let root = refine(model, &estimate, &r0, &solve_opts, &ctx)?;
    let prec = root.value.prec();
    let parameter = match root.axis {
        Axis::Real => Complex::from_real(root.value.clone()),
        Axis::Imaginary => Complex::imaginary(root.value.clone()),
    };
    let energy = energy_from_parameter(&parameter, &ctx.epsilon())?;
    let residual_model = model.with_prec(prec);
    let point = match &r0 {
        ExpansionPoint::Fixed(p) => Float::with_val(prec, p),
        ExpansionPoint::ParameterFraction(_) => unreachable!("energy solves use a fixed point"),
    };
    let (final_state, mu) = state_at(&residual_model, &parameter, &point, root.n_used)?;
    let relative_residual = relative_residual(&final_state, &mu);

    let oracle = if opts.verify_with_oracle {
        let result = oracle_energy(
            model.radius().to_f64(),
            state,
            model.coulomb().to_f64(),
            &IntegrationConfig::default(),
        )?;
        let aim = energy.to_f64();
        if (aim - result.energy).abs() > 1e-8 * aim.abs().max(1.0) {
            return Err(Error::OracleMismatch {
                aim: aim.to_string(),
                oracle: result.energy.to_string(),
            });
        }
        Some(result.energy)
    } else {
        None
    };

    Ok(EnergyResult {
        state,
        energy: ctx.round(&energy),
        parameter,
        axis: root.axis,
        n_used: root.n_used,
        relative_residual,
        digits: root.digits,
        stabilized: root.stabilized,
        stability: root.stability,
        oracle_energy: oracle,
    })
}

/// Runs the schedule from a bracket around the estimate, widening it when
/// the root has moved out.
fn refine(
    model: &HydrogenModel,
    estimate: &StateEstimate,
    r0: &ExpansionPoint,
    opts: &SolveOptions,
    ctx: &PrecisionContext,
) -> Result<ParameterRoot> {
    let value = &estimate.value;
    let magnitude = Float::with_val(ctx.bits(), value.abs_ref());
    let mut width = Float::with_val(ctx.bits(), &estimate.spread * 10u32)
        .max(&(magnitude.clone() * ctx.float(1e-12)));
    let mut last_error = Error::NoRootInBracket;
    for _ in 0..4 {
        let lo = Float::with_val(ctx.bits(), value - &width).max(&(magnitude.clone() * ctx.float(1e-6)));
        let hi = Float::with_val(ctx.bits(), value + &width);
        match solve_parameter(model, estimate.axis, &SeedOrBracket::Bracket(lo, hi), r0, opts) {
            Ok(root) => return Ok(root),
            Err(Error::NoRootInBracket | Error::NoSignChange { .. }) => {
                last_error = Error::NoRootInBracket;
            }
            Err(e) => return Err(e),
        }
        width *= 100u32;
    }
    Err(last_error)
}
