//! Double-precision shooting for `u″ = (l(l+1)/r² − A/r − E) u`.

use crate::error::{Error, Result};
use crate::hydrogen::StateLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Classical fourth-order Runge–Kutta.
    Rk4,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationConfig {
    /// Uniform steps on `[δ₀, R]`; at least 1000.
    pub steps: usize,
    pub method: Method,
    /// Start offset δ₀; defaults to `R·10⁻⁶` (capped at `R/steps`).
    pub start_offset: Option<f64>,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            steps: 20_000,
            method: Method::Rk4,
            start_offset: None,
        }
    }
}

impl IntegrationConfig {
    pub const MIN_STEPS: usize = 1000;

    fn start(&self, radius: f64) -> Result<f64> {
        if self.steps < Self::MIN_STEPS {
            return Err(Error::DomainTooSmall(self.steps));
        }
        let limit = radius / self.steps as f64;
        let delta = self.start_offset.unwrap_or(radius * 1e-6).min(limit);
        if !(delta > 0.0) || delta >= radius {
            return Err(Error::StepUnderflow);
        }
        Ok(delta)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub energy: f64,
    /// Interior sign changes of u.
    pub nodes: usize,
    /// `|u(R)| / max |u|`.
    pub boundary_residual: f64,
}

/// One outward integration.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub u_end: f64,
    /// Sign changes strictly inside `(0, R)`.
    pub nodes: usize,
    /// Zeros in `(0, R]`, counting `u(R)` when it has crossed.
    pub zeros_through_end: usize,
    pub max_abs: f64,
}

struct Equation {
    l: f64,
    coulomb: f64,
    energy: f64,
}

impl Equation {
    fn rhs(&self, r: f64, u: f64, v: f64) -> (f64, f64) {
        let centrifugal = self.l * (self.l + 1.0) / (r * r);
        (v, (centrifugal - self.coulomb / r - self.energy) * u)
    }

    fn rk4(&self, r: f64, h: f64, u: f64, v: f64) -> (f64, f64) {
        let (k1u, k1v) = self.rhs(r, u, v);
        let (k2u, k2v) = self.rhs(r + h / 2.0, u + h / 2.0 * k1u, v + h / 2.0 * k1v);
        let (k3u, k3v) = self.rhs(r + h / 2.0, u + h / 2.0 * k2u, v + h / 2.0 * k2v);
        let (k4u, k4v) = self.rhs(r + h, u + h * k3u, v + h * k3v);
        (
            u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )
    }
}

/// Visits `(r, u, u′)` on the uniform grid from δ₀ to `end`.
fn integrate_with<F: FnMut(f64, f64, f64)>(
    energy: f64,
    l: u32,
    coulomb: f64,
    end: f64,
    cfg: &IntegrationConfig,
    mut visit: F,
) -> Result<()> {
    let delta = cfg.start(end)?;
    let equation = Equation {
        l: f64::from(l),
        coulomb,
        energy,
    };
    let h = (end - delta) / cfg.steps as f64;
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::StepUnderflow);
    }
    // u = r^{l+1}(1 + c₁r + …) with c₁ = −A/(2(l+1)); the correction keeps
    // the start error at O(δ₀²) when δ₀ is not tiny (long E = 0 runs).
    let lp1 = f64::from(l) + 1.0;
    let c1 = -coulomb / (2.0 * lp1);
    let mut u = delta.powf(lp1) * (1.0 + c1 * delta);
    let mut v = delta.powf(lp1 - 1.0) * (lp1 + (lp1 + 1.0) * c1 * delta);
    visit(delta, u, v);
    for k in 0..cfg.steps {
        let r = delta + h * k as f64;
        (u, v) = match cfg.method {
            Method::Rk4 => equation.rk4(r, h, u, v),
        };
        // Rescale to stay in range; only signs and ratios matter.
        let size = u.abs().max(v.abs() * h);
        if size > 1e200 {
            u /= size;
            v /= size;
        }
        visit(delta + h * (k + 1) as f64, u, v);
    }
    Ok(())
}

/// Integrates outward from δ₀ (starting on the two-term series of the
/// regular solution, `u ≈ δ₀^{l+1}`) to `R` and counts sign changes.
pub fn integrate_radial(energy: f64, l: u32, coulomb: f64, radius: f64, cfg: &IntegrationConfig) -> Result<Trajectory> {
    let mut values = Vec::with_capacity(cfg.steps + 1);
    integrate_with(energy, l, coulomb, radius, cfg, |_, u, _| values.push(u))?;
    let (&u_end, interior) = values.split_last().expect("at least one point");
    let nodes = sign_changes(interior);
    let last_interior = interior.iter().rev().find(|u| **u != 0.0).copied();
    let crossed_at_end = u_end == 0.0 || last_interior.is_some_and(|prev| (prev < 0.0) != (u_end < 0.0));
    let max_abs = values.iter().fold(0.0f64, |m, u| m.max(u.abs()));
    Ok(Trajectory {
        u_end,
        nodes,
        zeros_through_end: nodes + usize::from(crossed_at_end),
        max_abs,
    })
}

fn sign_changes(values: &[f64]) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for &u in values {
        if u == 0.0 {
            continue;
        }
        let negative = u < 0.0;
        if last.is_some_and(|prev| prev != negative) {
            count += 1;
        }
        last = Some(negative);
    }
    count
}

/// Eigenvalue of `state` by bisection on the node count: E_n is where the
/// number of zeros in `(0, R]` jumps from `n − 1` to `n`.
pub fn oracle_energy(radius: f64, state: StateLabel, coulomb: f64, cfg: &IntegrationConfig) -> Result<OracleResult> {
    if !(radius > 0.0 && coulomb > 0.0) {
        return Err(Error::InvalidModel(format!("R = {radius}, A = {coulomb}")));
    }
    let target = state.n as usize;
    let zeros = |e: f64| integrate_radial(e, state.l, coulomb, radius, cfg).map(|t| t.zeros_through_end);

    // Below the free ground state no solution has a zero.
    let free_ground = coulomb * coulomb / (4.0 * f64::from(state.l + 1).powi(2));
    let mut lo = -free_ground - 1.0;
    if zeros(lo)? >= target {
        return Err(Error::BracketNotFound);
    }
    let box_level = (f64::from(state.n) + f64::from(state.l) / 2.0) * std::f64::consts::PI / radius;
    let mut hi = box_level * box_level + 1.0;
    let mut grown = 0;
    while zeros(hi)? < target {
        hi = 2.0 * hi + 1.0;
        grown += 1;
        if grown > 60 {
            return Err(Error::BracketNotFound);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if zeros(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let energy = 0.5 * (lo + hi);
    let trajectory = integrate_radial(energy, state.l, coulomb, radius, cfg)?;
    Ok(OracleResult {
        energy,
        nodes: trajectory.nodes,
        boundary_residual: trajectory.u_end.abs() / trajectory.max_abs,
    })
}

/// First `count` zeros of the E = 0 solution on `(0, r_max]`: the box
/// radii at which the states n = 1..count reach zero energy. Each zero is
/// refined on the cubic Hermite interpolant of its grid interval.
pub fn oracle_critical_radii_within(
    l: u32,
    count: usize,
    coulomb: f64,
    r_max: f64,
    cfg: &IntegrationConfig,
) -> Result<Vec<f64>> {
    let mut zeros = Vec::with_capacity(count);
    let mut previous: Option<(f64, f64, f64)> = None;
    integrate_with(0.0, l, coulomb, r_max, cfg, |r, u, v| {
        if zeros.len() < count {
            if let Some((r0, u0, v0)) = previous {
                if u0 != 0.0 && (u == 0.0 || (u0 < 0.0) != (u < 0.0)) {
                    zeros.push(hermite_zero(r0, u0, v0, r, u, v));
                }
            }
        }
        previous = Some((r, u, v));
    })?;
    if zeros.len() < count {
        return Err(Error::DomainTooSmall(zeros.len()));
    }
    Ok(zeros)
}

/// [`oracle_critical_radii_within`] on a range sized from the large-zero
/// asymptotics of the Bessel function of order 2l+1.
pub fn oracle_critical_radii(l: u32, count: usize, coulomb: f64, cfg: &IntegrationConfig) -> Result<Vec<f64>> {
    let nu = f64::from(2 * l + 1);
    let j = (count as f64 + nu / 2.0 - 0.25) * std::f64::consts::PI;
    let r_max = 1.3 * j * j / (4.0 * coulomb) + 1.0;
    oracle_critical_radii_within(l, count, coulomb, r_max, cfg)
}

/// Zero of the cubic Hermite interpolant on `[a, b]` (sign change assumed).
fn hermite_zero(a: f64, ua: f64, va: f64, b: f64, ub: f64, vb: f64) -> f64 {
    let h = b - a;
    let p = |t: f64| {
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * ua
            + (t3 - 2.0 * t2 + t) * h * va
            + (-2.0 * t3 + 3.0 * t2) * ub
            + (t3 - t2) * h * vb
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let negative_at_lo = ua < 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if (p(mid) < 0.0) == negative_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    a + h * 0.5 * (lo + hi)
}
