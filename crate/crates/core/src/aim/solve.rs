use super::{delta_at, relative_residual, state_at, CoefficientSource, ExpansionPoint};
use crate::error::{Error, Result};
use crate::numerics::{
    bracket_root_with, polish_root_secant, Bracket, Complex, Float, PrecisionContext,
    RootTolerance,
};
use std::collections::BTreeMap;

/// Which line of the complex parameter plane is searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Parameter `p` itself; δ_n is real.
    Real,
    /// Parameter `i·p`; the real part of δ_n is root-found.
    Imaginary,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Real => "real",
            Self::Imaginary => "imaginary",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeedOrBracket {
    Guess(Float),
    Bracket(Float, Float),
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Requested decimal digits. The stabilization target is 10^(10 − digits).
    pub digits: u32,
    /// Working precision may be raised up to this many digits.
    pub max_digits: u32,
    /// Iteration counts at which roots are compared against `n + step`.
    pub schedule: Vec<usize>,
    pub step: usize,
    /// A root whose best relative drift is at most this is returned with
    /// `stabilized = false` instead of failing.
    pub accept_stability: f64,
    /// Bound on the relative size of δ_n at the root along the imaginary
    /// axis. Defaults to √epsilon of the requested digits.
    pub cross_axis_tolerance: Option<Float>,
}

impl SolveOptions {
    pub const DEFAULT_SCHEDULE: [usize; 9] = [8, 12, 18, 27, 40, 60, 90, 135, 200];

    pub fn new(digits: u32) -> Self {
        Self {
            digits,
            max_digits: (2 * digits).max(100),
            schedule: Self::DEFAULT_SCHEDULE.to_vec(),
            step: 4,
            accept_stability: 1e-8,
            cross_axis_tolerance: None,
        }
    }

    /// Drops the schedule entries below `n`, keeping the one just below it
    /// so the first pair at or above `n` has a predecessor.
    pub fn starting_near(mut self, n: usize) -> Self {
        if let Some(first) = self.schedule.iter().rposition(|&k| k < n) {
            self.schedule.drain(..first);
        }
        self
    }

    /// Caps the schedule at `n_max`.
    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.schedule.retain(|&n| n + self.step <= n_max);
        if self.schedule.is_empty() {
            self.schedule.push(n_max.saturating_sub(self.step).max(1));
        }
        self
    }
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self::new(PrecisionContext::DEFAULT_DIGITS)
    }
}

#[derive(Clone, Debug)]
pub struct ParameterRoot {
    pub value: Float,
    pub axis: Axis,
    pub n_used: usize,
    pub stabilized: bool,
    /// Relative change of the root between `n_used − step` and `n_used`.
    pub stability: Float,
    /// Relative size of δ_n at the root (the ignored component on the
    /// imaginary axis); zero on the real axis.
    pub cross_axis_residual: Float,
    /// Working digits of the final run.
    pub digits: u32,
}

/// The real quantity whose zero is sought: δ_n(p) on the real axis,
/// Re δ_n(i·p) on the imaginary axis.
pub fn monitored_delta<S: CoefficientSource>(
    src: &S,
    axis: Axis,
    p: &Float,
    r0: &ExpansionPoint,
    n: usize,
) -> Result<Float> {
    let point = r0.resolve(p);
    match axis {
        Axis::Real => Ok(delta_at(&state_at(src, p, &point, n)?.0)),
        Axis::Imaginary => {
            let param = Complex::imaginary(p.clone());
            Ok(delta_at(&state_at(src, &param, &point, n)?.0).re)
        }
    }
}

fn cross_axis_residual<S: CoefficientSource>(
    src: &S,
    axis: Axis,
    p: &Float,
    r0: &ExpansionPoint,
    n: usize,
) -> Result<Float> {
    match axis {
        Axis::Real => Ok(Float::new(p.prec())),
        Axis::Imaginary => {
            let point = r0.resolve(p);
            let (state, mu) = state_at(src, &Complex::imaginary(p.clone()), &point, n)?;
            Ok(relative_residual(&state, &mu))
        }
    }
}

/// Smallest relative parameter change that δ_n can still resolve at `p`.
///
/// Near a simple root the relative residual grows like `slope·|Δp|/|p|`;
/// rounding leaves a floor of a few units in the last bit. At high n the
/// slope collapses and the computed root is set by rounding, not by δ;
/// then the residual also stops doubling with the shift.
fn resolution<S: CoefficientSource>(
    src: &S,
    axis: Axis,
    p: &Float,
    r0: &ExpansionPoint,
    n: usize,
) -> Result<Float> {
    let prec = p.prec();
    let scale = Float::with_val(prec, p.abs_ref()).max(&Float::with_val(prec, 1));
    let h = Float::with_val(prec, 1e-10);
    let residual_at = |shift: &Float| -> Result<Float> {
        let shifted = Float::with_val(prec, p + &Float::with_val(prec, &scale * shift));
        let point = r0.resolve(&shifted);
        match axis {
            Axis::Real => {
                let (state, mu) = state_at(src, &shifted, &point, n)?;
                Ok(relative_residual(&state, &mu))
            }
            Axis::Imaginary => {
                let (state, mu) = state_at(src, &Complex::imaginary(shifted.clone()), &point, n)?;
                Ok(relative_residual(&state, &mu))
            }
        }
    };
    let infinite = Float::with_val(prec, rug::float::Special::Infinity);
    let near = residual_at(&h)?;
    let far = residual_at(&Float::with_val(prec, &h * 2u32))?;
    if near.is_zero() {
        return Ok(infinite);
    }
    // Near a simple root the residual is linear in the shift; noise is not.
    let ratio = Float::with_val(prec, &far / &near);
    if ratio < 1.5 || ratio > 2.5 {
        return Ok(infinite);
    }
    let floor = Float::with_val(prec, 1) >> (prec as i32 - 4);
    Ok(floor * h / near)
}

/// Roots of δ_n at successive n from one precision level.
struct Level<'a, S> {
    src: &'a S,
    axis: Axis,
    r0: &'a ExpansionPoint,
    lo: Float,
    hi: Float,
    x_tol: Float,
    roots: BTreeMap<usize, Float>,
}

impl<S: CoefficientSource> Level<'_, S> {
    fn f(&self, n: usize) -> impl FnMut(&Float) -> Result<Float> + '_ {
        move |p: &Float| monitored_delta(self.src, self.axis, p, self.r0, n)
    }

    /// Im δ_n(i·p), which must vanish together with the monitored part.
    fn companion(&self, n: usize) -> impl FnMut(&Float) -> Result<Float> + '_ {
        move |p: &Float| {
            let param = Complex::imaginary(p.clone());
            Ok(delta_at(&state_at(self.src, &param, &self.r0.resolve(p), n)?.0).im)
        }
    }

    fn root(&mut self, n: usize, hint: Option<(&Float, &Float)>) -> Result<Float> {
        if let Some(root) = self.roots.get(&n) {
            return Ok(root.clone());
        }
        let root = match hint {
            Some((x, spread)) => self.local_root(n, x, spread, false)?,
            None => self.bracket_root(n, self.lo.clone(), self.hi.clone())?,
        };
        self.roots.insert(n, root.clone());
        Ok(root)
    }

    fn bracket_root(&self, n: usize, lo: Float, hi: Float) -> Result<Float> {
        let bracket = Bracket::from_fn(self.f(n), lo, hi).map_err(|e| match e {
            Error::NoSignChange { .. } => Error::NoRootInBracket,
            other => other,
        })?;
        bracket_root_with(self.f(n), &bracket, &RootTolerance::x_only(self.x_tol.clone()))
    }

    /// Searches outward from `x` in windows growing from a few `spread`s
    /// to the whole bracket, then refines by secant inside the first window
    /// that shows a sign change.
    fn local_root(&self, n: usize, x: &Float, spread: &Float, companion: bool) -> Result<Float> {
        if companion {
            self.local_root_of(|| self.companion(n), x, spread)
        } else {
            self.local_root_of(|| self.f(n), x, spread)
        }
    }

    fn local_root_of<F, G>(&self, make: G, x: &Float, spread: &Float) -> Result<Float>
    where
        F: FnMut(&Float) -> Result<Float>,
        G: Fn() -> F,
    {
        let prec = x.prec();
        let full = Float::with_val(prec, &self.hi - &self.lo);
        let mut width = Float::with_val(prec, spread * 4u32).max(&Float::with_val(prec, &self.x_tol * 1000u32));
        loop {
            let lo = Float::with_val(prec, x - &width).max(&self.lo);
            let hi = Float::with_val(prec, x + &width).min(&self.hi);
            let mut f = make();
            let (f_lo, f_hi) = (f(&lo)?, f(&hi)?);
            if let Ok(bracket) = Bracket::new(lo.clone(), hi.clone(), f_lo, f_hi) {
                let x1 = Float::with_val(prec, x + &(spread.clone() / 2u32)).clamp(&lo, &hi);
                let secant = if x1 != *x {
                    polish_root_secant(make(), x, &x1, &self.x_tol, Some((&lo, &hi)))
                } else {
                    Err(Error::NoConvergence(0))
                };
                return match secant {
                    Ok(root) => Ok(root),
                    Err(Error::DivergedIterate(_) | Error::NoConvergence(_)) => bracket_root_with(
                        make(),
                        &bracket,
                        &RootTolerance::x_only(self.x_tol.clone()),
                    ),
                    Err(other) => Err(other),
                };
            }
            if width >= full {
                return Err(Error::NoRootInBracket);
            }
            width *= 8u32;
        }
    }
}

/// Finds `p*` with δ_n(p*) = 0 (on the chosen axis) and follows it through
/// the n schedule until the roots at n and n + step agree to the target.
///
/// When the drift stops shrinking at the current precision the working
/// digits are doubled (up to `max_digits`) and the schedule restarted.
pub fn solve_parameter<S: CoefficientSource>(
    src: &S,
    axis: Axis,
    seed: &SeedOrBracket,
    r0: &ExpansionPoint,
    opts: &SolveOptions,
) -> Result<ParameterRoot> {
    let requested = PrecisionContext::new(opts.digits)?;
    let target = requested.pow10(10 - opts.digits as i32);
    let accept = requested.float(opts.accept_stability);

    let mut digits = opts.digits;
    let mut best: Option<ParameterRoot> = None;
    loop {
        let ctx = PrecisionContext::new(digits)?;
        let (lo, hi) = initial_bracket(src, axis, seed, r0, opts.schedule[0], &ctx)?;
        let magnitude = Float::with_val(ctx.bits(), lo.abs_ref())
            .max(&Float::with_val(ctx.bits(), hi.abs_ref()))
            .max(&ctx.one());
        let mut level = Level {
            src,
            axis,
            r0,
            x_tol: ctx.pow10(5 - digits as i32) * magnitude,
            lo,
            hi,
            roots: BTreeMap::new(),
        };
        let outcome = run_level(&mut level, opts, &target, digits);
        match outcome {
            Ok(level_best) => {
                if level_best.stabilized {
                    return finish(src, axis, r0, level_best, opts, &requested);
                }
                if best.as_ref().is_none_or(|b| level_best.stability < b.stability) {
                    best = Some(level_best);
                }
            }
            Err(e) if best.is_none() && digits * 2 > opts.max_digits => return Err(e),
            Err(_) => {}
        }
        if digits * 2 > opts.max_digits {
            break;
        }
        digits *= 2;
    }
    match best {
        Some(root) if root.stability <= accept => finish(src, axis, r0, root, opts, &requested),
        Some(root) => Err(Error::NotStabilized(format!(
            "best drift {} at n = {}",
            root.stability.to_f64(),
            root.n_used
        ))),
        None => Err(Error::NoRootInBracket),
    }
}

fn finish<S: CoefficientSource>(
    src: &S,
    axis: Axis,
    r0: &ExpansionPoint,
    mut root: ParameterRoot,
    opts: &SolveOptions,
    requested: &PrecisionContext,
) -> Result<ParameterRoot> {
    root.cross_axis_residual = cross_axis_residual(src, axis, &root.value, r0, root.n_used)?;
    let limit = opts
        .cross_axis_tolerance
        .clone()
        .unwrap_or_else(|| requested.epsilon().sqrt());
    if root.cross_axis_residual > limit {
        return Err(Error::CrossAxisResidualTooLarge(
            root.cross_axis_residual.to_f64().to_string(),
        ));
    }
    Ok(root)
}

/// Best root of one precision level. Errors only if no root was found at
/// the first scheduled n.
fn run_level<S: CoefficientSource>(
    level: &mut Level<'_, S>,
    opts: &SolveOptions,
    target: &Float,
    digits: u32,
) -> Result<ParameterRoot> {
    let prec = level.x_tol.prec();
    let mut best: Option<ParameterRoot> = None;
    let mut worse_in_a_row = 0;
    let mut last: Option<Float> = None;
    let mut last_drift: Option<Float> = None;
    let mut unbroken = true;
    let mut spread = Float::with_val(prec, &level.hi - &level.lo) / 16u32;
    for &n in &opts.schedule {
        let n2 = n + opts.step;
        let first = match last.clone() {
            Some(prev) => level.root(n, Some((&prev, &spread))),
            None => level.root(n, None),
        };
        let first = match first {
            Ok(root) => root,
            Err(e) if best.is_none() => return Err(e),
            Err(_) => break,
        };
        let local_spread = match &last {
            Some(prev) => Float::with_val(prec, &first - prev).abs().max(&level.x_tol),
            None => spread.clone(),
        };
        let second = match level.root(n2, Some((&first, &local_spread))) {
            Ok(root) => root,
            Err(e) if best.is_none() => return Err(e),
            Err(_) => break,
        };
        let drift = Float::with_val(prec, &second - &first).abs();
        let scale = Float::with_val(prec, second.abs_ref()).max(&Float::with_val(prec, 1));
        // Once rounding noise dominates δ, roots at neighbouring n can agree
        // by accident. A pair only counts if it continues an unbroken chain
        // from the first pair: each jump stays within a few previous drifts.
        let jump = match &last {
            Some(prev) => Float::with_val(prec, &second - prev).abs(),
            None => drift.clone(),
        };
        let continuous = last_drift.as_ref().map(|prev_drift| {
            let allowed = Float::with_val(prec, prev_drift * 10u32).max(&Float::with_val(prec, target * &scale));
            unbroken && jump <= allowed
        });
        unbroken &= continuous != Some(false);
        let mut settled = if continuous == Some(false) { jump.max(&drift) } else { drift.clone() };
        // On the imaginary axis a zero of the real part alone is not a
        // level; the nearest zero of the imaginary part must coincide.
        if level.axis == Axis::Imaginary {
            let window = Float::with_val(prec, &local_spread).max(&drift);
            settled = match level.local_root(n2, &second, &window, true) {
                Ok(partner) => settled.max(&Float::with_val(prec, &partner - &second).abs()),
                Err(Error::NoRootInBracket | Error::NoSignChange { .. }) => Float::with_val(prec, rug::float::Special::Infinity),
                Err(e) => return Err(e),
            };
        }
        let resolvable = resolution(level.src, level.axis, &second, level.r0, n2)?;
        let stability = Float::with_val(prec, settled / &scale).max(&resolvable);
        spread = drift.clone().max(&level.x_tol);
        last = Some(second.clone());
        last_drift = Some(drift);

        let candidate = ParameterRoot {
            value: second,
            axis: level.axis,
            n_used: n2,
            stabilized: continuous == Some(true) && stability <= *target,
            stability,
            cross_axis_residual: Float::new(prec),
            digits,
        };
        if candidate.stabilized {
            return Ok(candidate);
        }
        if best.as_ref().is_none_or(|b| candidate.stability < b.stability) {
            best = Some(candidate);
            worse_in_a_row = 0;
        } else {
            worse_in_a_row += 1;
            if worse_in_a_row >= 2 {
                break;
            }
        }
    }
    best.ok_or(Error::NoRootInBracket)
}

/// The caller's bracket, or one grown outward from a guess until δ_n at
/// the first scheduled n changes sign.
fn initial_bracket<S: CoefficientSource>(
    src: &S,
    axis: Axis,
    seed: &SeedOrBracket,
    r0: &ExpansionPoint,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<(Float, Float)> {
    match seed {
        SeedOrBracket::Bracket(lo, hi) => {
            if lo >= hi {
                return Err(Error::EmptyInterval);
            }
            Ok((ctx.round(lo), ctx.round(hi)))
        }
        SeedOrBracket::Guess(x) => {
            let x = ctx.round(x);
            let f = |p: &Float| monitored_delta(src, axis, p, r0, n);
            let fx = f(&x)?;
            let mut step = ctx.float(1e-3) * Float::with_val(ctx.bits(), x.abs_ref()).max(&ctx.one());
            for _ in 0..40 {
                for candidate in [Float::with_val(ctx.bits(), &x + &step), Float::with_val(ctx.bits(), &x - &step)] {
                    if let Ok(fc) = f(&candidate) {
                        if fc.is_sign_negative() != fx.is_sign_negative() || fc.is_zero() {
                            let (lo, hi) = if candidate > x { (x.clone(), candidate) } else { (candidate, x.clone()) };
                            return Ok((lo, hi));
                        }
                    }
                }
                step *= 2u32;
            }
            Err(Error::NoRootInBracket)
        }
    }
}
