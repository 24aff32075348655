//! Closed-form states at the special radii where the AIM recursion
//! terminates after finitely many steps.
//!
//! For Kummer degree `n` the parameter is `a = A/(2(n+l+1))` and the
//! admissible radii are `R = x (n+l+1)/A` with `x` a root of
//! `₁F₁(−n; 2l+2; x)`. The branch `m` (box radius `R_m`, ascending) is the
//! state with `m` radial nodes.

use super::StateLabel;
use crate::error::{Error, Result};
use crate::numerics::{real_roots, Float, PrecisionContext, RealPolynomial};

/// `A / (2(n+l+1))`.
pub fn special_parameter(n: u32, l: u32, coulomb: &Float) -> Float {
    Float::with_val(coulomb.prec(), coulomb / (2 * (n + l + 1)))
}

/// `−A² / (4(n+l+1)²)`.
pub fn exact_energy(n: u32, l: u32, coulomb: &Float) -> Float {
    -Float::with_val(coulomb.prec(), special_parameter(n, l, coulomb).square_ref())
}

/// Terminating series `Σ_{k≤n} (−n)_k / ((b)_k k!) x^k`.
pub fn kummer_eval(n: u32, b: &Float, x: &Float) -> Float {
    let prec = b.prec().max(x.prec());
    let mut term = Float::with_val(prec, 1);
    let mut sum = term.clone();
    for k in 0..n {
        let k_f = Float::with_val(prec, k);
        term *= Float::with_val(prec, &k_f - n) * x;
        term /= Float::with_val(prec, b + &k_f) * (k + 1);
        sum += &term;
    }
    sum
}

/// `₁F₁(−n; 2l+2; y)` as a polynomial in `y`.
pub fn kummer_polynomial(n: u32, l: u32, ctx: &PrecisionContext) -> RealPolynomial {
    let b = ctx.float(2 * l + 2);
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut term = ctx.one();
    coeffs.push(term.clone());
    for k in 0..n {
        term *= ctx.float(i64::from(k) - i64::from(n));
        term /= (ctx.float(&b + k)) * (k + 1);
        coeffs.push(term.clone());
    }
    RealPolynomial::new(coeffs)
}

/// Monic polynomial in `x = A R` whose roots are the special radii times `A`:
/// `Σ_k (−1)^{n+k} N^{n−k} C(n,k) (2l+n+1)!/(2l+k+1)! x^k` with `N = n+l+1`.
pub fn exact_radius_polynomial(n: u32, l: u32, ctx: &PrecisionContext) -> RealPolynomial {
    let big_n = ctx.float(n + l + 1);
    let coeffs = (0..=n)
        .map(|k| {
            let mut c = ctx.one();
            // C(n, k)
            for j in 0..k {
                c *= n - j;
                c /= j + 1;
            }
            // (2l+n+1)! / (2l+k+1)!
            for j in (2 * l + k + 2)..=(2 * l + n + 1) {
                c *= j;
            }
            c *= Float::with_val(ctx.bits(), rug::ops::Pow::pow(&big_n, n - k));
            if (n + k) % 2 == 1 {
                c = -c;
            }
            c
        })
        .collect();
    RealPolynomial::new(coeffs)
}

/// The `n` special radii `R_0 < … < R_{n−1}` for Kummer degree `n`.
pub fn exact_radii(n: u32, l: u32, coulomb: &Float, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let poly = kummer_polynomial(n, l, ctx);
    // Laguerre zeros lie below 4n + 2α + 2 with α = 2l + 1.
    let upper = ctx.float(4 * n + 4 * l + 8);
    let roots = real_roots(&poly, (&ctx.zero(), &upper))?;
    if roots.len() != n as usize {
        return Err(Error::NoRootInBracket);
    }
    let scale = ctx.float(n + l + 1) / ctx.round(coulomb);
    Ok(roots.into_iter().map(|r| r.value * &scale).collect())
}

/// `∏_{i≠m} (1 − r/R_i)` as a polynomial in `r`.
pub fn exact_factor(n: u32, l: u32, m: u32, coulomb: &Float, ctx: &PrecisionContext) -> Result<RealPolynomial> {
    if m >= n {
        return Err(Error::IndexOutOfRange {
            index: m as usize,
            count: n as usize,
        });
    }
    let radii = exact_radii(n, l, coulomb, ctx)?;
    Ok(factor_from_radii(&radii, m as usize, ctx))
}

fn factor_from_radii(radii: &[Float], m: usize, ctx: &PrecisionContext) -> RealPolynomial {
    radii
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != m)
        .fold(RealPolynomial::constant(ctx.one()), |acc, (_, radius)| {
            acc.mul(&RealPolynomial::new(vec![ctx.one(), -(ctx.one() / radius)]))
        })
}

/// `A·R = scale·(base + sign·√base)`; `sign = 0` gives `scale·base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub scale: u32,
    pub base: u32,
    pub sign: i32,
}

impl ClosedForm {
    pub fn value(&self, ctx: &PrecisionContext) -> Float {
        let base = ctx.float(self.base);
        let root = Float::with_val(ctx.bits(), base.sqrt_ref()) * self.sign;
        (base + root) * self.scale
    }
}

impl std::fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.sign {
            0 => write!(f, "{}/A", self.scale * self.base),
            s => {
                let op = if s < 0 { '-' } else { '+' };
                write!(f, "{}({}{op}sqrt({}))/A", self.scale, self.base, self.base)
            }
        }
    }
}

/// Closed form of `A·R_m` for n ≤ 2: `2(l+1)(l+2)` for n = 1 and
/// `(l+3)(2l+3 ∓ √(2l+3))` for n = 2, folded to an integer when `2l+3` is a
/// perfect square.
pub fn closed_form_radius(n: u32, l: u32, m: u32) -> Option<ClosedForm> {
    let integer = |v: u32| ClosedForm { scale: 1, base: v, sign: 0 };
    match (n, m) {
        (1, 0) => Some(integer(2 * (l + 1) * (l + 2))),
        (2, 0 | 1) => {
            let base = 2 * l + 3;
            let sign = if m == 0 { -1 } else { 1 };
            let root = (1..=base).find(|k| k * k == base);
            Some(match root {
                Some(k) => integer((l + 3) * (base as i64 + i64::from(sign) * i64::from(k)) as u32),
                None => ClosedForm { scale: l + 3, base, sign },
            })
        }
        _ => None,
    }
}

/// One exactly solvable configuration.
#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub n: u32,
    pub l: u32,
    pub m: u32,
    pub coulomb: Float,
    pub radii: Vec<Float>,
    pub energy: Float,
    pub parameter: Float,
    pub factor: RealPolynomial,
}

impl ExactSolution {
    pub fn new(n: u32, l: u32, m: u32, coulomb: &Float, ctx: &PrecisionContext) -> Result<Self> {
        if m >= n {
            return Err(Error::IndexOutOfRange {
                index: m as usize,
                count: n as usize,
            });
        }
        let coulomb = ctx.round(coulomb);
        let radii = exact_radii(n, l, &coulomb, ctx)?;
        let factor = factor_from_radii(&radii, m as usize, ctx);
        Ok(Self {
            n,
            l,
            m,
            energy: exact_energy(n, l, &coulomb),
            parameter: special_parameter(n, l, &coulomb),
            coulomb,
            radii,
            factor,
        })
    }

    /// The box radius `R_m`.
    pub fn radius(&self) -> &Float {
        &self.radii[self.m as usize]
    }

    /// Label of this state in the box of radius `R_m`.
    pub fn state(&self) -> StateLabel {
        StateLabel {
            n: self.m + 1,
            l: self.l,
        }
    }

    /// Unnormalized `ψ(r) = r^{l+1} e^{−a r} ∏_i (1 − r/R_i)` on `[0, R_m]`.
    pub fn wavefunction(&self, r: &Float) -> Result<Float> {
        if *r < 0 || r > self.radius() {
            return Err(Error::OutOfBox(r.to_string()));
        }
        let prec = self.coulomb.prec();
        let boundary = Float::with_val(prec, 1) - Float::with_val(prec, r / self.radius());
        Ok(psi_from_factor(self.l, &self.parameter, &self.factor.eval(r), r) * boundary)
    }

    /// `∫₀^{R_m} ψ² dr` by composite Simpson with `intervals` (rounded up
    /// to even) subintervals.
    pub fn norm_squared(&self, intervals: usize) -> Result<Float> {
        let intervals = intervals.max(2).next_multiple_of(2);
        let prec = self.coulomb.prec();
        let h = Float::with_val(prec, self.radius() / intervals as u64);
        let mut sum = Float::new(prec);
        for k in 0..=intervals {
            let r = Float::with_val(prec, &h * k as u64).min(self.radius());
            let psi = self.wavefunction(&r)?;
            let weight = if k == 0 || k == intervals {
                1
            } else if k % 2 == 1 {
                4
            } else {
                2
            };
            sum += Float::with_val(prec, psi.square_ref()) * weight;
        }
        Ok(sum * h / 3u32)
    }

    /// ψ scaled to unit norm (Simpson with `intervals` subintervals).
    pub fn normalized_wavefunction(&self, r: &Float, intervals: usize) -> Result<Float> {
        Ok(self.wavefunction(r)? / self.norm_squared(intervals)?.sqrt())
    }

    /// Interior sign changes of ψ on a uniform grid of `points` intervals.
    pub fn node_count(&self, points: usize) -> Result<usize> {
        let prec = self.coulomb.prec();
        let mut nodes = 0;
        let mut last_negative: Option<bool> = None;
        for k in 1..points {
            let r = Float::with_val(prec, self.radius() * k as u64) / points as u64;
            let psi = self.wavefunction(&r)?;
            if psi.is_zero() {
                continue;
            }
            let negative = psi.is_sign_negative();
            if last_negative.is_some_and(|prev| prev != negative) {
                nodes += 1;
            }
            last_negative = Some(negative);
        }
        Ok(nodes)
    }
}

/// `r^{l+1} e^{−a r} f` for a parameter `a` and factor value `f`; the
/// `(R − r)` boundary factor is left to the caller.
pub fn psi_from_factor(l: u32, a: &Float, factor_value: &Float, r: &Float) -> Float {
    let prec = a.prec().max(r.prec());
    let power = Float::with_val(prec, rug::ops::Pow::pow(r, l + 1));
    let decay = Float::with_val(prec, -Float::with_val(prec, a * r)).exp();
    power * decay * factor_value
}
