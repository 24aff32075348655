//! Hydrogen-like atom (Coulomb strength `A`) in an impenetrable sphere of
//! radius `R`:
//!
//! `−u″ + l(l+1)/r² u − A/r u = E u`, `u(0) = u(R) = 0`.
//!
//! With `u = r^{l+1} (R − r) e^{−a r} f(r)` and `E = −a²` the factor `f`
//! satisfies `f″ = λ₀ f′ + s₀ f` with
//! `λ₀ = 2(a + 1/(R−r) − (l+1)/r)` and
//! `s₀ = ((2l+2)a − A)/r + (2l+2)/(r(R−r)) − 2a/(R−r)`.
//! With `A = 2` energies are in Rydbergs and lengths in Bohr radii.

mod critical;
mod exact;
mod solve;

pub use critical::{critical_radius, CriticalOptions, CriticalSource};
pub use exact::{
    closed_form_radius, exact_energy, exact_factor, exact_radii, exact_radius_polynomial, kummer_eval,
    kummer_polynomial, special_parameter, ClosedForm, ExactSolution,
};
pub use solve::{expansion_point, locate_state, solve_energy, EnergyOptions, EnergyResult, StateEstimate};

use crate::aim::CoefficientSource;
use crate::error::{Error, Result};
use crate::jet::{AffineFactor, RationalFn};
use crate::numerics::{Complex, Float, PrecisionContext, Scalar};
use std::fmt;
use std::str::FromStr;

/// Coulomb strength, angular momentum and box radius.
#[derive(Clone, Debug, PartialEq)]
pub struct HydrogenModel {
    coulomb: Float,
    l: u32,
    radius: Float,
}

impl HydrogenModel {
    pub fn new(coulomb: Float, l: u32, radius: Float) -> Result<Self> {
        if !(coulomb.is_finite() && coulomb > 0) {
            return Err(Error::InvalidModel(format!("A must be positive, got {}", coulomb.to_f64())));
        }
        if !(radius.is_finite() && radius > 0) {
            return Err(Error::InvalidModel(format!("R must be positive, got {}", radius.to_f64())));
        }
        Ok(Self { coulomb, l, radius })
    }

    /// Parses decimal `A` and `R` at a precision well above any working
    /// precision, so later rounding to the working precision is exact.
    pub fn parse(coulomb: &str, l: u32, radius: &str) -> Result<Self> {
        let ctx = PrecisionContext::new(Self::INPUT_DIGITS)?;
        Self::new(ctx.parse(coulomb)?, l, ctx.parse(radius)?)
    }

    pub const INPUT_DIGITS: u32 = 400;

    pub fn coulomb(&self) -> &Float {
        &self.coulomb
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn radius(&self) -> &Float {
        &self.radius
    }

    /// Same model with every value rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self {
            coulomb: Float::with_val(prec, &self.coulomb),
            l: self.l,
            radius: Float::with_val(prec, &self.radius),
        }
    }
}

/// Builds λ₀ and s₀ in the spectral parameter `a`.
impl CoefficientSource for HydrogenModel {
    fn coefficients<T: Scalar>(&self, a: &T) -> Result<(RationalFn<T>, RationalFn<T>)> {
        let prec = a.prec();
        let inv_r = AffineFactor::new(Float::new(prec), Float::with_val(prec, 1));
        let inv_gap = AffineFactor::new(Float::with_val(prec, &self.radius), Float::with_val(prec, -1));
        let two_l2 = 2 * i64::from(self.l) + 2;
        let real = |v: Float| T::from_real(&v);
        let coulomb = Float::with_val(prec, &self.coulomb);

        let lambda0 = RationalFn::new()
            .term(a.mul_int(2), vec![])
            .term(real(Float::with_val(prec, 2)), vec![inv_gap.clone()])
            .term(real(Float::with_val(prec, -two_l2)), vec![inv_r.clone()]);
        let s0 = RationalFn::new()
            .term(a.mul_int(two_l2).sub_ref(&real(coulomb)), vec![inv_r.clone()])
            .term(real(Float::with_val(prec, two_l2)), vec![inv_r, inv_gap.clone()])
            .term(a.mul_int(-2), vec![inv_gap]);
        Ok((lambda0, s0))
    }

    fn check_point(&self, _: Option<&Float>, r0: &Float) -> Result<()> {
        if *r0 > 0 && *r0 < self.radius {
            Ok(())
        } else {
            Err(Error::ExpansionPointOutOfDomain)
        }
    }
}

/// Radial state: `n = 1 + number of radial nodes`, angular momentum `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateLabel {
    pub n: u32,
    pub l: u32,
}

const ORBITAL_LETTERS: &[u8] = b"spdfghik";

impl StateLabel {
    pub fn new(n: u32, l: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("state n must be at least 1".into()));
        }
        Ok(Self { n, l })
    }

    /// Free-atom principal quantum number.
    pub fn principal(&self) -> u32 {
        self.n + self.l
    }
}

/// Accepts spectroscopic labels (`1s`, `2p`, `3d`) or `n,l`.
impl FromStr for StateLabel {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Parse(format!("invalid state label {text:?}"));
        if let Some((n, l)) = text.split_once(',') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let l = l.trim().parse().map_err(|_| bad())?;
            return Self::new(n, l);
        }
        let letter = text.bytes().last().ok_or_else(bad)?.to_ascii_lowercase();
        let l = ORBITAL_LETTERS.iter().position(|&c| c == letter).ok_or_else(bad)? as u32;
        let principal: u32 = text[..text.len() - 1].parse().map_err(|_| bad())?;
        if principal <= l {
            return Err(bad());
        }
        Self::new(principal - l, l)
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match ORBITAL_LETTERS.get(self.l as usize) {
            Some(&c) => write!(f, "{}{}", self.principal(), c as char),
            None => write!(f, "{},{}", self.n, self.l),
        }
    }
}

/// `E = −a²`. The parameter must be real (bound) or purely imaginary
/// (`E = κ²`), each up to `tol` relative to `|a|`.
pub fn energy_from_parameter(a: &Complex, tol: &Float) -> Result<Float> {
    let prec = a.prec();
    let limit = Float::with_val(prec, tol * &a.abs().max(&Float::with_val(prec, 1)));
    if Float::with_val(prec, a.im.abs_ref()) <= limit {
        Ok(-Float::with_val(prec, a.re.square_ref()))
    } else if Float::with_val(prec, a.re.abs_ref()) <= limit {
        Ok(Float::with_val(prec, a.im.square_ref()))
    } else {
        Err(Error::NotOnAxis)
    }
}

/// Coulomb scaling `r → r·A_from/A_to`: returns `(R', E')` with
/// `R' = R·A_from/A_to` and `E' = E·(A_to/A_from)²`.
pub fn rescale(a_from: &Float, radius: &Float, energy: &Float, a_to: &Float) -> (Float, Float) {
    let prec = radius.prec().max(energy.prec());
    if a_from == a_to {
        return (radius.clone(), energy.clone());
    }
    let ratio = Float::with_val(prec, a_to / a_from);
    let new_radius = Float::with_val(prec, radius / &ratio);
    let new_energy = Float::with_val(prec, energy * &Float::with_val(prec, ratio.square_ref()));
    (new_radius, new_energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aim::{delta_at, state_at};
    use crate::numerics::PrecisionContext;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn donor(l: u32, radius: f64) -> HydrogenModel {
        let c = ctx();
        HydrogenModel::new(c.float(2), l, c.float(radius)).unwrap()
    }

    #[test]
    fn coefficient_values_at_exact_point() {
        let c = ctx();
        let model = donor(0, 2.0);
        let (l0, s0) = model.coefficients(&c.float(0.5)).unwrap();
        assert_eq!(l0.value_at(&c.one()).unwrap(), 1);
        assert_eq!(s0.value_at(&c.one()).unwrap(), 0);
        assert_eq!(model.check_point(None, &c.float(2)), Err(Error::ExpansionPointOutOfDomain));
        assert_eq!(model.check_point(None, &c.zero()), Err(Error::ExpansionPointOutOfDomain));
    }

    #[test]
    fn first_delta_vanishes_on_the_exact_radius() {
        let c = ctx();
        let model = donor(0, 2.0);
        for r0 in [0.3, 1.0, 1.7] {
            let (state, _) = state_at(&model, &c.float(0.5), &c.float(r0), 1).unwrap();
            assert!(delta_at(&state).abs() < c.epsilon());
        }
    }

    #[test]
    fn model_validation() {
        let c = ctx();
        assert!(HydrogenModel::new(c.float(2), 0, c.float(-1)).is_err());
        assert!(HydrogenModel::new(c.float(0), 0, c.float(1)).is_err());
    }

    #[test]
    fn state_labels() {
        assert_eq!("1s".parse::<StateLabel>().unwrap(), StateLabel { n: 1, l: 0 });
        assert_eq!("2p".parse::<StateLabel>().unwrap(), StateLabel { n: 1, l: 1 });
        assert_eq!("3s".parse::<StateLabel>().unwrap(), StateLabel { n: 3, l: 0 });
        assert_eq!("4d".parse::<StateLabel>().unwrap(), StateLabel { n: 2, l: 2 });
        assert_eq!("2,1".parse::<StateLabel>().unwrap(), StateLabel { n: 2, l: 1 });
        assert!("1p".parse::<StateLabel>().is_err());
        assert!("0,0".parse::<StateLabel>().is_err());
        assert!("x".parse::<StateLabel>().is_err());
        assert_eq!(StateLabel { n: 1, l: 1 }.to_string(), "2p");
    }

    #[test]
    fn energy_from_parameter_axes() {
        let c = ctx();
        let tol = c.epsilon();
        let e = energy_from_parameter(&Complex::from_real(c.float(0.5)), &tol).unwrap();
        assert_eq!(e, -0.25);
        let kappa = c.parse("2.178986400188704127").unwrap();
        let e = energy_from_parameter(&Complex::imaginary(kappa), &tol).unwrap();
        assert!(Float::with_val(c.bits(), &e - c.parse("4.747981732207327454").unwrap()).abs() < 1e-17);
        assert_eq!(energy_from_parameter(&Complex::zero(c.bits()), &tol).unwrap(), 0);
        assert_eq!(
            energy_from_parameter(&Complex::new(c.float(1), c.float(1)), &tol),
            Err(Error::NotOnAxis)
        );
    }

    #[test]
    fn rescale_examples() {
        let c = ctx();
        let (r, e) = rescale(&c.float(2), &c.float(2), &c.float(-0.25), &c.float(1));
        assert_eq!(r, 4);
        assert_eq!(e, -0.0625);
        let (r, e) = rescale(&c.float(2), &c.float(3), &c.float(-0.1), &c.float(2));
        assert_eq!((r, e), (c.float(3), c.float(-0.1)));
    }
}
