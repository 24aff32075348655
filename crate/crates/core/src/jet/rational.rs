use super::{Jet, JetMultiplier};
use crate::error::{Error, Result};
use crate::numerics::{Float, Scalar};

/// The factor `1/(offset + slope·r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFactor {
    pub offset: Float,
    pub slope: Float,
}

impl AffineFactor {
    pub fn new(offset: Float, slope: Float) -> Self {
        Self { offset, slope }
    }

    /// `offset + slope·r`.
    pub fn denominator_at(&self, r: &Float) -> Float {
        let prec = self.offset.prec().max(r.prec());
        Float::with_val(prec, &self.slope * r) + &self.offset
    }
}

/// `coeff · ∏ factors`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalTerm<T> {
    pub coeff: T,
    pub factors: Vec<AffineFactor>,
}

/// A sum of terms `c · ∏ 1/(p_i + q_i r)` with real poles and scalar
/// coefficients. The coefficients carry the spectral parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn<T> {
    pub terms: Vec<RationalTerm<T>>,
}

impl<T: Scalar> Default for RationalFn<T> {
    fn default() -> Self {
        Self { terms: Vec::new() }
    }
}

impl<T: Scalar> RationalFn<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(mut self, coeff: T, factors: Vec<AffineFactor>) -> Self {
        self.terms.push(RationalTerm { coeff, factors });
        self
    }

    pub fn value_at(&self, r: &Float) -> Result<T> {
        let bound = self.bind(r)?;
        Ok(bound.value())
    }

    /// Precomputes the denominators at `point` for repeated multiplication.
    pub fn bind(&self, point: &Float) -> Result<BoundRational<T>> {
        let terms = self
            .terms
            .iter()
            .map(|term| {
                let factors = term
                    .factors
                    .iter()
                    .map(|f| {
                        let d = f.denominator_at(point);
                        if d.is_zero() {
                            Err(Error::PoleAtPoint)
                        } else {
                            Ok((d, f.slope.clone()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((term.coeff.clone(), factors))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundRational {
            point: point.clone(),
            terms,
        })
    }

    /// The full jet, built from reciprocal-affine jets and Cauchy products.
    /// Slower than [`BoundRational::multiply`]; kept as an independent route.
    pub fn jet(&self, point: &Float, order: usize) -> Result<Jet<T>> {
        let prec = point.prec();
        let mut total: Option<Jet<T>> = None;
        for term in &self.terms {
            let mut product = Jet::constant(point, Float::with_val(prec, 1), order);
            for f in &term.factors {
                let reciprocal = Jet::reciprocal_affine(&f.offset, &f.slope, point, order)?;
                product = product.mul(&reciprocal)?;
            }
            let contribution = product.map(|c| term.coeff.mul_real(c));
            total = Some(match total {
                Some(acc) => acc.add(&contribution)?,
                None => contribution,
            });
        }
        total.ok_or(Error::OrderExhausted)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> RationalFn<U> {
        RationalFn {
            terms: self
                .terms
                .iter()
                .map(|t| RationalTerm {
                    coeff: f(&t.coeff),
                    factors: t.factors.clone(),
                })
                .collect(),
        }
    }
}

/// A [`RationalFn`] evaluated at a fixed point, multiplying jets in O(N)
/// per affine factor.
#[derive(Clone, Debug)]
pub struct BoundRational<T> {
    point: Float,
    /// (coefficient, [(denominator at point, slope)])
    terms: Vec<(T, Vec<(Float, Float)>)>,
}

impl<T: Scalar> BoundRational<T> {
    pub fn value(&self) -> T {
        let mut terms = self.terms.iter().map(|(coeff, factors)| {
            factors.iter().fold(coeff.clone(), |acc, (d, _)| acc.div_real(d))
        });
        let first = terms.next().expect("rational function has at least one term");
        terms.fold(first, |acc, t| acc.add_ref(&t))
    }

    /// Sum of the absolute values of the terms at the point.
    pub fn magnitude(&self) -> Float {
        self.terms
            .iter()
            .map(|(coeff, factors)| {
                factors.iter().fold(coeff.magnitude(), |acc, (d, _)| {
                    acc / Float::with_val(d.prec(), d.abs_ref())
                })
            })
            .reduce(|a, b| a + b)
            .expect("rational function has at least one term")
    }
}

impl<T: Scalar> JetMultiplier<T> for BoundRational<T> {
    fn point(&self) -> &Float {
        &self.point
    }

    fn multiply(&self, jet: &Jet<T>) -> Result<Jet<T>> {
        if jet.point() != &self.point {
            return Err(Error::PointMismatch);
        }
        let mut total: Option<Jet<T>> = None;
        for (coeff, factors) in &self.terms {
            let mut part = jet.clone();
            for (d, q) in factors {
                part = part.div_affine(d, q)?;
            }
            let part = part.scale(coeff);
            total = Some(match total {
                Some(acc) => acc.add(&part)?,
                None => part,
            });
        }
        total.ok_or(Error::OrderExhausted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Complex, PrecisionContext};

    #[test]
    fn bound_multiply_matches_cauchy_route() {
        let ctx = PrecisionContext::default();
        let point = ctx.float(0.8);
        let box_radius = ctx.float(2.5);
        let coeff = Complex::new(ctx.float(0.3), ctx.float(-1.25));
        // c/r + 3/(r(R−r)) − 2
        let f = RationalFn::new()
            .term(coeff.clone(), vec![AffineFactor::new(ctx.zero(), ctx.one())])
            .term(
                Complex::from_real(ctx.float(3)),
                vec![
                    AffineFactor::new(ctx.zero(), ctx.one()),
                    AffineFactor::new(box_radius.clone(), ctx.float(-1)),
                ],
            )
            .term(Complex::from_real(ctx.float(-2)), vec![]);
        let order = 12;
        let jet = Jet::new(
            point.clone(),
            (0..=order)
                .map(|k| Complex::new(ctx.float(1) / ctx.float(k + 1), ctx.float(k as i32 - 3)))
                .collect(),
        );
        let fast = f.bind(&point).unwrap().multiply(&jet).unwrap();
        let slow = f.jet(&point, order).unwrap().mul(&jet).unwrap();
        for (a, b) in fast.coeffs().iter().zip(slow.coeffs()) {
            assert!((a - b).abs() < ctx.parse("1e-40").unwrap());
        }
        let value = f.value_at(&point).unwrap();
        assert!((&value - f.jet(&point, 0).unwrap().value()).abs() < ctx.epsilon());
        assert!(matches!(f.bind(&box_radius), Err(Error::PoleAtPoint)));
    }
}
