use super::{Complex, Float, RealPolynomial};
use std::fmt::Debug;

/// Ring operations needed by jets and the AIM recursion.
///
/// Implemented for real and complex MPFR values and for real polynomials
/// (jets whose coefficients are polynomials in a spectral parameter).
/// Values carry their own precision; results take the precision of `self`.
pub trait Scalar: Clone + Debug + Send + Sync {
    fn from_real(value: &Float) -> Self;
    fn zero_like(&self) -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_real(&self, rhs: &Float) -> Self;
    fn div_real(&self, rhs: &Float) -> Self;
    fn mul_int(&self, k: i64) -> Self;
    /// Modulus (max-norm of the coefficients for polynomials).
    fn magnitude(&self) -> Float;
    fn is_exact_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    fn prec(&self) -> u32;
    /// The value as a real number, if it has no other component.
    fn as_real(&self) -> Option<Float>;
}

/// Scalars with a multiplicative inverse.
pub trait FieldScalar: Scalar {
    fn div_ref(&self, rhs: &Self) -> Self;
    fn to_complex(&self) -> Complex;
}

impl Scalar for Float {
    fn from_real(value: &Float) -> Self {
        value.clone()
    }
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self + rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self - rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self * rhs)
    }
    fn neg_ref(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
    fn mul_real(&self, rhs: &Float) -> Self {
        Float::with_val(self.prec(), self * rhs)
    }
    fn div_real(&self, rhs: &Float) -> Self {
        Float::with_val(self.prec(), self / rhs)
    }
    fn mul_int(&self, k: i64) -> Self {
        Float::with_val(self.prec(), self * k)
    }
    fn magnitude(&self) -> Float {
        Float::with_val(self.prec(), self.abs_ref())
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn is_finite(&self) -> bool {
        Float::is_finite(self)
    }
    fn prec(&self) -> u32 {
        Float::prec(self)
    }
    fn as_real(&self) -> Option<Float> {
        Some(self.clone())
    }
}

impl FieldScalar for Float {
    fn div_ref(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self / rhs)
    }
    fn to_complex(&self) -> Complex {
        Complex::from_real(self.clone())
    }
}

impl Scalar for Complex {
    fn from_real(value: &Float) -> Self {
        Complex::from_real(value.clone())
    }
    fn zero_like(&self) -> Self {
        Complex::zero(self.prec())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_real(&self, rhs: &Float) -> Self {
        self.scale(rhs)
    }
    fn div_real(&self, rhs: &Float) -> Self {
        Complex::new(
            Float::with_val(self.prec(), &self.re / rhs),
            Float::with_val(self.prec(), &self.im / rhs),
        )
    }
    fn mul_int(&self, k: i64) -> Self {
        Complex::new(
            Float::with_val(self.prec(), &self.re * k),
            Float::with_val(self.prec(), &self.im * k),
        )
    }
    fn magnitude(&self) -> Float {
        self.abs()
    }
    fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn prec(&self) -> u32 {
        Complex::prec(self)
    }
    fn as_real(&self) -> Option<Float> {
        self.im.is_zero().then(|| self.re.clone())
    }
}

impl FieldScalar for Complex {
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn to_complex(&self) -> Complex {
        self.clone()
    }
}

impl Scalar for RealPolynomial {
    fn from_real(value: &Float) -> Self {
        RealPolynomial::constant(value.clone())
    }
    fn zero_like(&self) -> Self {
        RealPolynomial::constant(Float::new(self.prec()))
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.map(|c| Float::with_val(c.prec(), -c))
    }
    fn mul_real(&self, rhs: &Float) -> Self {
        self.map(|c| Float::with_val(c.prec(), c * rhs))
    }
    fn div_real(&self, rhs: &Float) -> Self {
        self.map(|c| Float::with_val(c.prec(), c / rhs))
    }
    fn mul_int(&self, k: i64) -> Self {
        self.map(|c| Float::with_val(c.prec(), c * k))
    }
    fn magnitude(&self) -> Float {
        self.coefficients()
            .iter()
            .fold(Float::new(self.prec()), |acc, c| acc.max(&Float::with_val(c.prec(), c.abs_ref())))
    }
    fn is_exact_zero(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_zero())
    }
    fn is_finite(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_finite())
    }
    fn prec(&self) -> u32 {
        RealPolynomial::prec(self)
    }
    fn as_real(&self) -> Option<Float> {
        (self.degree() == 0).then(|| self.coefficients()[0].clone())
    }
}
