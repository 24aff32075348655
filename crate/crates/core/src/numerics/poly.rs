use super::{bracket_root_with, Bracket, Complex, Float, RootTolerance};
use crate::error::{Error, Result};

/// Dense real polynomial, coefficients in ascending degree.
///
/// Trailing (leading-degree) exact zeros are trimmed on construction, so the
/// degree is `coefficients.len() − 1`. The zero polynomial is `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<Float>,
}

/// A real root and its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub value: Float,
    pub multiplicity: usize,
}

impl RealPolynomial {
    pub fn new(mut coeffs: Vec<Float>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(value: Float) -> Self {
        Self { coeffs: vec![value] }
    }

    /// The monomial `x` at precision `prec`.
    pub fn identity(prec: u32) -> Self {
        Self::new(vec![Float::new(prec), Float::with_val(prec, 1)])
    }

    /// `∏ (x − r)`.
    pub fn from_roots(roots: &[Float], prec: u32) -> Self {
        roots.iter().fold(Self::constant(Float::with_val(prec, 1)), |acc, r| {
            acc.mul(&Self::new(vec![Float::with_val(prec, -r), Float::with_val(prec, 1)]))
        })
    }

    pub fn coefficients(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.coeffs[0].prec()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &Float {
        self.coeffs.last().expect("non-empty")
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self) -> Self {
        let lead = self.leading().clone();
        self.map(|c| Float::with_val(c.prec(), c / &lead))
    }

    pub fn map(&self, f: impl Fn(&Float) -> Float) -> Self {
        Self::new(self.coeffs.iter().map(f).collect())
    }

    pub fn eval(&self, x: &Float) -> Float {
        let prec = self.prec().max(x.prec());
        self.coeffs
            .iter()
            .rev()
            .fold(Float::new(prec), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let prec = self.prec().max(z.prec());
        self.coeffs.iter().rev().fold(Complex::zero(prec), |acc, c| {
            let mut next = &acc * z;
            next.re += c;
            next
        })
    }

    /// `Σ |c_k| |x|^k`, the natural scale for deciding whether `p(x) ≈ 0`.
    pub fn abs_eval(&self, x: &Float) -> Float {
        let prec = self.prec().max(x.prec());
        let ax = Float::with_val(prec, x.abs_ref());
        self.coeffs
            .iter()
            .rev()
            .fold(Float::new(prec), |acc, c| acc * &ax + Float::with_val(prec, c.abs_ref()))
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::constant(Float::new(self.prec()));
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Float::with_val(c.prec(), c * k as u64))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| Float::with_val(a.prec(), a + b))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| Float::with_val(a.prec(), a - b))
    }

    fn zip_with(&self, rhs: &Self, op: impl Fn(&Float, &Float) -> Float) -> Self {
        let prec = self.prec();
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Float::new(prec);
        Self::new(
            (0..len)
                .map(|k| {
                    op(
                        self.coeffs.get(k).unwrap_or(&zero),
                        rhs.coeffs.get(k).unwrap_or(&zero),
                    )
                })
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec();
        let mut out = vec![Float::new(prec); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Float::with_val(prec, a * b);
            }
        }
        Self::new(out)
    }
}

/// All real roots of `p` in the closed interval `[lo, hi]`, ascending.
///
/// The interval is cut at the real roots of `p′` (found recursively), so `p`
/// is monotone on every piece and each piece holds at most one simple root,
/// which is refined by bisection and secant to the working precision. A
/// derivative root where `p` also vanishes is reported as a multiple root.
/// The zero polynomial yields no roots.
pub fn real_roots(p: &RealPolynomial, interval: (&Float, &Float)) -> Result<Vec<RealRoot>> {
    let (lo, hi) = interval;
    if lo >= hi {
        return Err(Error::EmptyInterval);
    }
    if p.is_zero() {
        return Ok(Vec::new());
    }
    roots_in(p, lo, hi)
}

fn roots_in(p: &RealPolynomial, lo: &Float, hi: &Float) -> Result<Vec<RealRoot>> {
    let prec = p.prec().max(lo.prec());
    match p.degree() {
        0 => return Ok(Vec::new()),
        1 => {
            let c = p.coefficients();
            let x = Float::with_val(prec, -&c[0]) / &c[1];
            return Ok(if x >= *lo && x <= *hi {
                vec![RealRoot {
                    value: x,
                    multiplicity: 1,
                }]
            } else {
                Vec::new()
            });
        }
        _ => {}
    }

    let critical = roots_in(&p.derivative(), lo, hi)?;
    let vanishes = |x: &Float, value: &Float| {
        let scale = p.abs_eval(x);
        let limit = Float::with_val(prec, &scale >> (prec as i32 - 24));
        Float::with_val(prec, value.abs_ref()) <= limit
    };

    // (point, p(point), root multiplicity at point or 0)
    let mut points: Vec<(Float, Float, usize)> = Vec::with_capacity(critical.len() + 2);
    let lo_value = p.eval(lo);
    points.push((Float::with_val(prec, lo), lo_value.clone(), usize::from(lo_value.is_zero())));
    for c in critical {
        let value = p.eval(&c.value);
        let multiplicity = if vanishes(&c.value, &value) {
            c.multiplicity + 1
        } else {
            0
        };
        points.push((c.value, value, multiplicity));
    }
    let hi_value = p.eval(hi);
    points.push((Float::with_val(prec, hi), hi_value.clone(), usize::from(hi_value.is_zero())));

    let span = Float::with_val(prec, lo.abs_ref()).max(&Float::with_val(prec, hi.abs_ref())).max(&Float::with_val(prec, 1));
    let x_tol = span >> (prec as i32 - 8);
    let tolerance = RootTolerance::x_only(x_tol);

    let mut roots: Vec<RealRoot> = Vec::new();
    let mut push = |root: RealRoot| {
        if roots.last().is_none_or(|last| last.value != root.value) {
            roots.push(root);
        }
    };
    for window in points.windows(2) {
        let (a, fa, ma) = &window[0];
        let (b, fb, mb) = &window[1];
        if *ma > 0 {
            push(RealRoot {
                value: a.clone(),
                multiplicity: *ma,
            });
        }
        if *ma == 0 && *mb == 0 && a < b && fa.is_sign_negative() != fb.is_sign_negative() {
            let bracket = Bracket::new(a.clone(), b.clone(), fa.clone(), fb.clone())?;
            let value = bracket_root_with(|x| Ok(p.eval(x)), &bracket, &tolerance)?;
            push(RealRoot {
                value,
                multiplicity: 1,
            });
        }
    }
    if let Some((x, _, m)) = points.last() {
        if *m > 0 {
            push(RealRoot {
                value: x.clone(),
                multiplicity: *m,
            });
        }
    }
    Ok(roots)
}
