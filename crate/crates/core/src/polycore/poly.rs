use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::PolyError;

/// Complex scalar used throughout the crate.
pub type ComplexScalar = Complex64;

/// Coefficients below this fraction of the largest coefficient are dropped
/// from the top of a polynomial.
pub const TRIM_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense polynomial with complex coefficients stored in ascending degree order.
///
/// The leading coefficient is always nonzero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming negligible
    /// leading terms.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    /// Builds a polynomial without trimming anything except exact zeros.
    pub fn new_exact(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new_exact(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// The polynomial `z`.
    pub fn identity() -> Self {
        Polynomial { coeffs: vec![ZERO, ONE] }
    }

    /// `c * z^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Self::new_exact(coeffs)
    }

    /// `lead * prod (z - r)^k` over the given (root, multiplicity) pairs.
    pub fn from_roots(roots: &[(Complex64, usize)], lead: Complex64) -> Self {
        let mut coeffs = vec![lead];
        for &(r, k) in roots {
            for _ in 0..k {
                let mut next = vec![ZERO; coeffs.len() + 1];
                for (i, &c) in coeffs.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= r * c;
                }
                coeffs = next;
            }
        }
        Self::new_exact(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Coefficient of `z^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every coefficient has a negligible imaginary part.
    pub fn has_real_coeffs(&self) -> bool {
        let scale = self.max_coeff_norm().max(f64::MIN_POSITIVE);
        self.coeffs.iter().all(|c| c.im.abs() <= 1e-12 * scale)
    }

    fn trim(&mut self) {
        let tol = TRIM_TOLERANCE * self.max_coeff_norm();
        while self.coeffs.last().is_some_and(|c| c.norm() <= tol) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `sum |a_k| |z|^k`, the scale against which rounding in `eval` is measured.
    pub fn eval_abs(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Scale of the error in `eval(z)` for `|z| = r`: rounding in Horner's
    /// rule plus a coefficient-level uncertainty relative to the largest
    /// coefficient.
    pub fn error_scale(&self, r: f64) -> f64 {
        let max = self.max_coeff_norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm() + max)
    }

    /// Evaluates the coefficient-reversed polynomial `w^n p(1/w)`.
    pub fn eval_reversed(&self, w: Complex64) -> Complex64 {
        self.coeffs.iter().fold(ZERO, |acc, &c| acc * w + c)
    }

    /// `(p(z), p'(z), p''(z))` in one Horner pass.
    pub fn eval_with_derivatives(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let mut p = ZERO;
        let mut d1 = ZERO;
        let mut d2 = ZERO;
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * z + d1;
            d1 = d1 * z + p;
            p = p * z + c;
        }
        (p, d1, d2 * 2.0)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect();
        Polynomial::new_exact(coeffs)
    }

    /// k-th derivative.
    pub fn nth_derivative(&self, k: usize) -> Polynomial {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: Complex64) -> Polynomial {
        Polynomial::new_exact(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Polynomial { coeffs }
    }

    /// Polynomial division `self = q * divisor + r`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::ZeroPolynomial)?;
        let Some(nd) = self.degree() else {
            return Ok((Polynomial::zero(), Polynomial::zero()));
        };
        if nd < dd {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
        }
        rem.truncate(dd);
        Ok((Polynomial::new_exact(quot), Polynomial::new_exact(rem)))
    }

    /// Synthetic division by `(z - r)`: returns the quotient and `p(r)`.
    pub fn deflate(&self, r: Complex64) -> (Polynomial, Complex64) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Polynomial::zero(), ZERO);
        }
        let mut quot = vec![ZERO; n - 1];
        let mut acc = ZERO;
        for k in (0..n).rev() {
            acc = acc * r + self.coeffs[k];
            if k > 0 {
                quot[k - 1] = acc;
            }
        }
        (Polynomial::new_exact(quot), acc)
    }

    /// Quotient of `p` by `z - r`, discarding the remainder. Coefficients
    /// above the dominant term `|a_k r^k|` come from forward synthetic
    /// division and those below from backward division, so rounding is not
    /// amplified by powers of `|r|` or `1/|r|`.
    pub fn divide_out(&self, r: Complex64) -> Polynomial {
        let n = self.coeffs.len();
        if n <= 1 {
            return Polynomial::zero();
        }
        let a = &self.coeffs;
        let split = if r == ZERO {
            0
        } else {
            let (mut best, mut size) = (0, f64::NEG_INFINITY);
            for (k, ak) in a.iter().enumerate() {
                let t = ak.norm().ln() + k as f64 * r.norm().ln();
                if t > size {
                    best = k;
                    size = t;
                }
            }
            best
        };
        let mut quot = vec![ZERO; n - 1];
        let mut acc = ZERO;
        for k in (split + 1..n).rev() {
            acc = acc * r + a[k];
            quot[k - 1] = acc;
        }
        let mut below = ZERO;
        for k in 0..split {
            below = (below - a[k]) / r;
            quot[k] = below;
        }
        Polynomial::new_exact(quot)
    }

    /// `p(lambda * z)`.
    pub fn scale_argument(&self, lambda: Complex64) -> Polynomial {
        let mut pow = ONE;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * pow;
                pow *= lambda;
                v
            })
            .collect();
        Polynomial::new_exact(coeffs)
    }

    /// `c * p(a z + b)` for the affine map `T(z) = a z + b`.
    pub fn compose_affine(&self, t: &AffineMap, c: Complex64) -> Polynomial {
        let linear = Polynomial::new_exact(vec![t.b, t.a]);
        let mut acc = Polynomial::zero();
        for &coeff in self.coeffs.iter().rev() {
            acc = &(&acc * &linear) + &Polynomial::constant(coeff);
        }
        acc.scale(c)
    }

    /// Number of exact zero coefficients at the bottom, i.e. the order of
    /// the root at the origin when it is exact.
    pub fn exact_zero_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == ZERO).count()
    }

    /// Divides out `z^k`; the low coefficients are assumed to vanish.
    pub fn unshift(&self, k: usize) -> Polynomial {
        Polynomial::new_exact(self.coeffs.iter().skip(k).copied().collect())
    }
}

/// `(p(z), p'(z), p''(z))`.
pub fn eval_with_derivatives(p: &Polynomial, z: Complex64) -> (Complex64, Complex64, Complex64) {
    p.eval_with_derivatives(z)
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new_exact((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new_exact((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new_exact(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-ONE)
    }
}

/// Invertible affine change of variable `T(z) = a z + b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub a: Complex64,
    pub b: Complex64,
}

impl AffineMap {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self, PolyError> {
        if a.norm() == 0.0 || !a.is_finite() || !b.is_finite() {
            return Err(PolyError::SingularAffine);
        }
        Ok(AffineMap { a, b })
    }

    pub fn identity() -> Self {
        AffineMap { a: ONE, b: ZERO }
    }

    pub fn scaling(a: Complex64) -> Result<Self, PolyError> {
        Self::new(a, ZERO)
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }

    pub fn apply_inverse(&self, w: Complex64) -> Complex64 {
        (w - self.b) / self.a
    }

    pub fn inverse(&self) -> AffineMap {
        AffineMap { a: self.a.inv(), b: -self.b / self.a }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_with_derivatives_quadratic() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(p.eval_with_derivatives(c(2.0, 0.0)), (c(3.0, 0.0), c(4.0, 0.0), c(2.0, 0.0)));
    }

    #[test]
    fn eval_with_derivatives_cubic_family_at_one() {
        for b in [0.0, 1.0, -7.0, 62.5] {
            let p = Polynomial::from_real(&[b, 6.0, 0.0, 1.0]);
            let (v, d1, d2) = p.eval_with_derivatives(c(1.0, 0.0));
            assert_eq!(v, c(7.0 + b, 0.0));
            assert_eq!(d1, c(9.0, 0.0));
            assert_eq!(d2, c(6.0, 0.0));
        }
    }

    #[test]
    fn eval_with_derivatives_double_quadratic() {
        // (z^2 - 1)^2 = z^4 - 2 z^2 + 1
        let p = Polynomial::from_real(&[1.0, 0.0, -2.0, 0.0, 1.0]);
        assert_eq!(p.eval_with_derivatives(c(0.0, 0.0)), (c(1.0, 0.0), c(0.0, 0.0), c(-4.0, 0.0)));
    }

    #[test]
    fn trims_negligible_leading_terms() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-15, 0.0)]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::new(vec![c(0.0, 0.0)]).is_zero());
    }

    #[test]
    fn from_roots_expands() {
        let p = Polynomial::from_roots(&[(c(1.0, 0.0), 2), (c(0.0, 0.0), 1)], c(1.0, 0.0));
        assert_eq!(p, Polynomial::from_real(&[0.0, 1.0, -2.0, 1.0]));
    }

    #[test]
    fn compose_affine_examples() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(p.compose_affine(&AffineMap::identity(), c(1.0, 0.0)), p);

        let shifted = p.compose_affine(&AffineMap::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(shifted, Polynomial::from_real(&[0.0, 2.0, 1.0]));

        let a = c(0.3, 1.7);
        let q = Polynomial::new(vec![-a * a, c(0.0, 0.0), c(1.0, 0.0)]);
        let r = q.compose_affine(&AffineMap::scaling(a).unwrap(), (a * a).inv());
        for (x, y) in r.coeffs().iter().zip(p.coeffs()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn division_and_deflation() {
        let p = Polynomial::from_real(&[-6.0, 11.0, -6.0, 1.0]);
        let (q, r) = p.div_rem(&Polynomial::from_real(&[-1.0, 1.0])).unwrap();
        assert!(r.is_zero() || r.max_coeff_norm() < 1e-14);
        assert_eq!(q, Polynomial::from_real(&[6.0, -5.0, 1.0]));
        let (q2, rem) = p.deflate(c(2.0, 0.0));
        assert_eq!(rem, c(0.0, 0.0));
        assert_eq!(q2, Polynomial::from_real(&[3.0, -4.0, 1.0]));
    }

    #[test]
    fn affine_inverse_round_trip() {
        let t = AffineMap::new(c(2.0, -1.0), c(0.5, 3.0)).unwrap();
        let z = c(-0.7, 0.2);
        assert!((t.apply_inverse(t.apply(z)) - z).norm() < 1e-15);
        assert!((t.inverse().apply(t.apply(z)) - z).norm() < 1e-15);
        assert!(AffineMap::new(c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }
}
