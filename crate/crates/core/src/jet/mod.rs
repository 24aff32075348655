//! Truncated Taylor expansions at a fixed point.
//!
//! A [`Jet`] of order `N` at `r₀` stores `c₀..c_N` with
//! `f(r₀ + h) = Σ c_k h^k + O(h^{N+1})`. Binary operations truncate to the
//! smaller order.

mod rational;

pub use rational::{AffineFactor, BoundRational, RationalFn, RationalTerm};

use crate::error::{Error, Result};
use crate::numerics::{FieldScalar, Float, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    point: Float,
    coeffs: Vec<T>,
}

/// Anything that can multiply a jet at a given point: another jet (Cauchy
/// product) or a rational function bound to that point (affine divisions).
pub trait JetMultiplier<T: Scalar> {
    fn point(&self) -> &Float;
    fn multiply(&self, jet: &Jet<T>) -> Result<Jet<T>>;
}

impl<T: Scalar> Jet<T> {
    pub fn new(point: Float, coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "jet needs at least one coefficient");
        Self { point, coeffs }
    }

    pub fn constant(point: &Float, value: T, order: usize) -> Self {
        let zero = value.zero_like();
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = value;
        Self::new(point.clone(), coeffs)
    }

    pub fn point(&self) -> &Float {
        &self.point
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Value at the expansion point.
    pub fn value(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Jet<U> {
        Jet::new(self.point.clone(), self.coeffs.iter().map(f).collect())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        Self::new(self.point.clone(), self.coeffs[..keep].to_vec())
    }

    fn check_point(&self, rhs: &Self) -> Result<()> {
        if self.point == rhs.point {
            Ok(())
        } else {
            Err(Error::PointMismatch)
        }
    }

    fn zip(&self, rhs: &Self, op: impl Fn(&T, &T) -> T) -> Result<Self> {
        self.check_point(rhs)?;
        Ok(Self::new(
            self.point.clone(),
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| op(a, b)).collect(),
        ))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, T::add_ref)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, T::sub_ref)
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_point(rhs)?;
        let len = self.coeffs.len().min(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                (1..=k).fold(self.coeffs[0].mul_ref(&rhs.coeffs[k]), |acc, j| {
                    acc.add_ref(&self.coeffs[j].mul_ref(&rhs.coeffs[k - j]))
                })
            })
            .collect();
        Ok(Self::new(self.point.clone(), coeffs))
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|c| c.mul_ref(factor))
    }

    pub fn mul_real(&self, factor: &Float) -> Self {
        self.map(|c| c.mul_real(factor))
    }

    pub fn neg(&self) -> Self {
        self.map(T::neg_ref)
    }

    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderExhausted);
        }
        Ok(Self::new(
            self.point.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul_int(k as i64))
                .collect(),
        ))
    }

    /// Divides by the affine jet `d + q·h` (value `d` at the point), in O(N).
    pub fn div_affine(&self, d: &Float, q: &Float) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let mut coeffs: Vec<T> = Vec::with_capacity(self.coeffs.len());
        for (k, a) in self.coeffs.iter().enumerate() {
            let numerator = if k == 0 {
                a.clone()
            } else {
                a.sub_ref(&coeffs[k - 1].mul_real(q))
            };
            coeffs.push(numerator.div_real(d));
        }
        Ok(Self::new(self.point.clone(), coeffs))
    }

    /// Horner evaluation at offset `h` from the point.
    pub fn eval(&self, h: &T) -> T {
        let mut acc = self.coeffs.last().expect("non-empty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul_ref(h).add_ref(c);
        }
        acc
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> Float {
        self.coeffs
            .iter()
            .map(T::magnitude)
            .reduce(|a, b| a.max(&b))
            .expect("non-empty")
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(T::is_finite)
    }
}

impl<T: FieldScalar> Jet<T> {
    /// Jet of `r ↦ 1/(p + q r)`.
    pub fn reciprocal_affine(p: &T, q: &T, point: &Float, order: usize) -> Result<Self> {
        let d = p.add_ref(&q.mul_real(point));
        if d.is_exact_zero() {
            return Err(Error::PoleAtPoint);
        }
        let ratio = q.neg_ref().div_ref(&d);
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(T::from_real(&Float::with_val(d.prec(), 1)).div_ref(&d));
        for k in 1..=order {
            let next = coeffs[k - 1].mul_ref(&ratio);
            coeffs.push(next);
        }
        Ok(Self::new(point.clone(), coeffs))
    }

    /// Long division `self / rhs` to the common order.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.check_point(rhs)?;
        let b0 = &rhs.coeffs[0];
        if b0.is_exact_zero() {
            return Err(Error::DivByZeroConstantTerm);
        }
        let len = self.coeffs.len().min(rhs.coeffs.len());
        let mut coeffs: Vec<T> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = acc.sub_ref(&rhs.coeffs[j].mul_ref(&coeffs[k - j]));
            }
            coeffs.push(acc.div_ref(b0));
        }
        Ok(Self::new(self.point.clone(), coeffs))
    }
}

impl<T: Scalar> JetMultiplier<T> for Jet<T> {
    fn point(&self) -> &Float {
        &self.point
    }

    fn multiply(&self, jet: &Jet<T>) -> Result<Jet<T>> {
        if self.order() < jet.order() {
            return Err(Error::OrderExhausted);
        }
        self.mul(jet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Complex, PrecisionContext};
    use proptest::prelude::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn real_jet(point: f64, coeffs: &[f64]) -> Jet<Float> {
        let c = ctx();
        Jet::new(c.float(point), coeffs.iter().map(|&x| c.float(x)).collect())
    }

    fn assert_coeffs(jet: &Jet<Float>, expected: &[f64]) {
        assert_eq!(jet.order() + 1, expected.len());
        let tol = ctx().parse("1e-45").unwrap();
        for (c, e) in jet.coeffs().iter().zip(expected) {
            assert!(Float::with_val(200, c - *e).abs() < tol, "{c} vs {e}");
        }
    }

    #[test]
    fn reciprocal_affine_series() {
        let c = ctx();
        let j = Jet::reciprocal_affine(&c.float(2), &c.float(-1), &c.float(1), 3).unwrap();
        assert_coeffs(&j, &[1.0, 1.0, 1.0, 1.0]);
        let j = Jet::reciprocal_affine(&c.float(0), &c.float(1), &c.float(1), 2).unwrap();
        assert_coeffs(&j, &[1.0, -1.0, 1.0]);
        assert_eq!(
            Jet::reciprocal_affine(&c.float(2), &c.float(-1), &c.float(2), 2),
            Err(Error::PoleAtPoint)
        );
    }

    #[test]
    fn ring_operations() {
        assert_coeffs(&real_jet(0.0, &[2.0, 3.0]).add(&real_jet(0.0, &[1.0, -1.0])).unwrap(), &[3.0, 2.0]);
        assert_coeffs(
            &real_jet(0.0, &[1.0, 1.0, 1.0]).mul(&real_jet(0.0, &[1.0, -1.0, 0.0])).unwrap(),
            &[1.0, 0.0, 0.0],
        );
        assert_coeffs(&real_jet(0.0, &[0.0, 1.0]).mul(&real_jet(0.0, &[0.0, 1.0])).unwrap(), &[0.0, 0.0]);
        assert_coeffs(
            &real_jet(0.0, &[0.0, 1.0, 0.0]).mul(&real_jet(0.0, &[0.0, 1.0, 0.0])).unwrap(),
            &[0.0, 0.0, 1.0],
        );
        assert_eq!(
            real_jet(0.0, &[1.0]).add(&real_jet(1.0, &[1.0])),
            Err(Error::PointMismatch)
        );
        let short = real_jet(0.0, &[1.0, 2.0]).mul(&real_jet(0.0, &[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(short.order(), 1);
    }

    #[test]
    fn division() {
        assert_coeffs(
            &real_jet(0.0, &[1.0, 0.0, 0.0]).div(&real_jet(0.0, &[1.0, -1.0, 0.0])).unwrap(),
            &[1.0, 1.0, 1.0],
        );
        let a = real_jet(0.5, &[3.0, -1.0, 4.0, 1.5]);
        assert_coeffs(&a.div(&a).unwrap(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            real_jet(0.0, &[0.0, 1.0]).div(&real_jet(0.0, &[0.0, 1.0])),
            Err(Error::DivByZeroConstantTerm)
        );
    }

    #[test]
    fn derivative() {
        assert_coeffs(&real_jet(1.0, &[1.0, 1.0, 1.0, 1.0]).derivative().unwrap(), &[1.0, 2.0, 3.0]);
        assert_coeffs(&real_jet(1.0, &[5.0, 7.0]).derivative().unwrap(), &[7.0]);
        assert_eq!(real_jet(1.0, &[5.0]).derivative(), Err(Error::OrderExhausted));

        let c = ctx();
        let inv = Jet::reciprocal_affine(&c.float(2), &c.float(-1), &c.float(1), 4).unwrap();
        let square = inv.mul(&inv).unwrap().truncate(3);
        let d = inv.derivative().unwrap();
        assert_eq!(d.order(), 3);
        let tol = c.parse("1e-45").unwrap();
        for (x, y) in d.coeffs().iter().zip(square.coeffs()) {
            assert!(Float::with_val(200, x - y).abs() < tol);
        }
    }

    #[test]
    fn div_affine_matches_reciprocal_product() {
        let c = ctx();
        let point = c.float(0.7);
        let a = real_jet(0.7, &[1.0, -2.0, 0.5, 3.0, -1.0]);
        let fast = a.div_affine(&(c.float(3) - &point), &c.float(-1)).unwrap();
        let slow = a
            .mul(&Jet::reciprocal_affine(&c.float(3), &c.float(-1), &point, 4).unwrap())
            .unwrap();
        let tol = c.parse("1e-45").unwrap();
        for (x, y) in fast.coeffs().iter().zip(slow.coeffs()) {
            assert!(Float::with_val(200, x - y).abs() < tol);
        }
        assert_eq!(a.div_affine(&c.zero(), &c.float(1)), Err(Error::PoleAtPoint));
    }

    #[test]
    fn complex_reciprocal() {
        let c = ctx();
        let p = Complex::new(c.float(1), c.float(1));
        let q = Complex::from_real(c.float(1));
        let j = Jet::reciprocal_affine(&p, &q, &c.float(0), 3).unwrap();
        let back = j.mul(&Jet::new(c.float(0), vec![p.clone(), q.clone(), Complex::zero(c.bits()), Complex::zero(c.bits())])).unwrap();
        assert!(Float::with_val(200, &back.value().re - 1).abs() < c.epsilon());
        for k in 1..=3 {
            assert!(back.coeffs()[k].abs() < c.epsilon());
        }
    }

    fn coeff_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0f64..10.0, len)
    }

    fn to_jet(values: &[f64]) -> Jet<Float> {
        real_jet(0.25, values)
    }

    fn close_jets(a: &Jet<Float>, b: &Jet<Float>) -> bool {
        let scale = a.max_magnitude().max(&b.max_magnitude()).max(&ctx().one());
        let tol = ctx().parse("1e-40").unwrap() * scale;
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .all(|(x, y)| Float::with_val(200, x - y).abs() <= tol)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn product_rule(a in coeff_strategy(8), b in coeff_strategy(8)) {
            let (a, b) = (to_jet(&a), to_jet(&b));
            let lhs = a.mul(&b).unwrap().derivative().unwrap();
            let rhs = a
                .derivative().unwrap()
                .mul(&b).unwrap()
                .add(&a.mul(&b.derivative().unwrap()).unwrap()).unwrap();
            prop_assert!(close_jets(&lhs, &rhs));
        }

        #[test]
        fn division_round_trip(a in coeff_strategy(8), b in coeff_strategy(8), b0 in 0.5f64..5.0) {
            let mut b = b;
            b[0] = if b[0] < 0.0 { -b0 } else { b0 };
            let (a, b) = (to_jet(&a), to_jet(&b));
            let back = a.div(&b).unwrap().mul(&b).unwrap();
            prop_assert!(close_jets(&back, &a));
        }
    }
}
