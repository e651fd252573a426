use std::fmt;

use num_complex::Complex64;

use super::MapError;
use crate::polycore::{find_roots, Polynomial, RootCluster};

/// Beyond this modulus rational maps are evaluated in the chart `w = 1/z`.
pub const HANDOFF_RADIUS: f64 = 1e8;

/// Shared roots of numerator and denominator closer than this (relative to
/// `max(1, |r|)`) are cancelled during reduction.
pub const CANCEL_TOLERANCE: f64 = 1e-7;

/// Tolerance for `|R(z) - z|` (relative to `max(1, |z|)`) when a point is
/// required to be fixed.
pub const FIXED_TOLERANCE: f64 = 1e-7;

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// Chordal distance on the unit sphere (at most 2).
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(z), SpherePoint::Infinity) | (SpherePoint::Infinity, SpherePoint::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
                2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
        }
    }

    /// Relative error `|a - b| / max(|a|, |b|)`; zero when both are infinite,
    /// infinite when exactly one is.
    pub fn relative_error(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
                let scale = a.norm().max(b.norm());
                if scale == 0.0 {
                    0.0
                } else {
                    (a - b).norm() / scale
                }
            }
            _ => f64::INFINITY,
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        if z.is_finite() {
            SpherePoint::Finite(z)
        } else {
            SpherePoint::Infinity
        }
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "inf"),
            SpherePoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

/// A rational map `num / den`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
    reduced: bool,
}

impl RationalMap {
    /// Wraps a numerator/denominator pair as given, without reduction.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, MapError> {
        if den.is_zero() {
            return Err(MapError::ZeroDenominator);
        }
        Ok(RationalMap { num, den, reduced: false })
    }

    /// Builds the pair and cancels common roots by root matching.
    pub fn reduced(num: Polynomial, den: Polynomial) -> Result<Self, MapError> {
        Self::reduced_with_candidates(num, den, &[])
    }

    /// Like [`RationalMap::reduced`], but first strips common factors at the
    /// given candidate points (typically roots and critical points of the
    /// underlying polynomial, which are known to high accuracy).
    pub fn reduced_with_candidates(
        num: Polynomial,
        den: Polynomial,
        candidates: &[Complex64],
    ) -> Result<Self, MapError> {
        if den.is_zero() {
            return Err(MapError::ZeroDenominator);
        }
        let (mut num, mut den) = (num, den);
        for &c in candidates {
            while num.deg() > 0 && den.deg() > 0 && vanishes(&num, c) && vanishes(&den, c) {
                num = num.divide_out(c);
                den = den.divide_out(c);
            }
        }
        if !num.is_zero() && num.deg() > 0 && den.deg() > 0 {
            let num_roots = find_roots(&num)?;
            let den_roots = find_roots(&den)?;
            for d in &den_roots {
                let tol = CANCEL_TOLERANCE * d.location.norm().max(1.0);
                if let Some(n) = num_roots.iter().find(|n| (n.location - d.location).norm() <= tol) {
                    let at = (n.location + d.location) * 0.5;
                    for _ in 0..n.multiplicity.min(d.multiplicity) {
                        num = num.divide_out(at);
                        den = den.divide_out(at);
                    }
                }
            }
        }
        let lead = den.leading();
        Ok(RationalMap { num: num.scale(lead.inv()), den: den.scale(lead.inv()), reduced: true })
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.num.has_real_coeffs() && self.den.has_real_coeffs()
    }

    /// Value at a finite point; poles map to infinity.
    pub fn eval(&self, z: Complex64) -> Result<SpherePoint, MapError> {
        if z.norm() > HANDOFF_RADIUS {
            let w = z.inv();
            let n = self.num.eval_reversed(w);
            let d = self.den.eval_reversed(w);
            if d == Complex64::new(0.0, 0.0) {
                return if n == d { Err(MapError::Indeterminate) } else { Ok(SpherePoint::Infinity) };
            }
            let shift = self.num.deg() as i32 - self.den.deg() as i32;
            return Ok(SpherePoint::from(z.powi(shift) * (n / d)));
        }
        let n = self.num.eval(z);
        let d = self.den.eval(z);
        let r = z.norm();
        let d_small = d.norm() <= 1e-14 * self.den.eval_abs(r);
        if d_small {
            if n.norm() <= 1e-14 * self.num.eval_abs(r) {
                return Err(MapError::Indeterminate);
            }
            return Ok(SpherePoint::Infinity);
        }
        Ok(SpherePoint::from(n / d))
    }

    /// Value on the sphere, including the limit at infinity.
    pub fn eval_sphere(&self, z: SpherePoint) -> Result<SpherePoint, MapError> {
        match z {
            SpherePoint::Finite(z) => self.eval(z),
            SpherePoint::Infinity => Ok(self.value_at_infinity()),
        }
    }

    pub fn value_at_infinity(&self) -> SpherePoint {
        use std::cmp::Ordering;
        match self.num.deg().cmp(&self.den.deg()) {
            Ordering::Greater => SpherePoint::Infinity,
            Ordering::Equal => SpherePoint::Finite(self.num.leading() / self.den.leading()),
            Ordering::Less => SpherePoint::Finite(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn fixes_infinity(&self) -> bool {
        self.value_at_infinity().is_infinite()
    }

    /// Numerator of `R'`, i.e. `num' den - num den'`.
    pub fn derivative_numerator(&self) -> Polynomial {
        &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative())
    }

    /// `R'(z)` at a finite non-pole.
    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        let (n, n1, _) = self.num.eval_with_derivatives(z);
        let (d, d1, _) = self.den.eval_with_derivatives(z);
        (n1 * d - n * d1) / (d * d)
    }

    /// `lambda^{-1} R(lambda z)`, with the denominator made monic again.
    pub fn rotate_conjugate(&self, lambda: Complex64) -> RationalMap {
        let den = self.den.scale_argument(lambda).scale(lambda);
        let norm = den.leading().inv();
        RationalMap { num: self.num.scale_argument(lambda).scale(norm), den: den.scale(norm), reduced: self.reduced }
    }

    /// Finite fixed points (roots of `num - z den`) with multiplicities.
    pub fn finite_fixed_point_clusters(&self) -> Result<Vec<RootCluster>, MapError> {
        let g = &self.num - &(&self.den * &Polynomial::identity());
        if g.is_zero() {
            return Err(MapError::IdentityMap);
        }
        if g.deg() == 0 {
            return Ok(Vec::new());
        }
        Ok(find_roots(&g)?)
    }

    /// `|R(z) - z|` is within [`FIXED_TOLERANCE`].
    pub fn is_fixed(&self, z: SpherePoint) -> bool {
        match z {
            SpherePoint::Infinity => self.fixes_infinity(),
            SpherePoint::Finite(z) => match self.eval(z) {
                Ok(SpherePoint::Finite(w)) => (w - z).norm() <= FIXED_TOLERANCE * z.norm().max(1.0),
                _ => false,
            },
        }
    }
}

/// `q` vanishes at `c` when the Taylor expansion at `c` puts a root of `q`
/// within [`CANCEL_TOLERANCE`]: some `k` has `(|q(c)| / |q^(k)(c) / k!|)^(1/k)`
/// below it, or `q(c)` is at the rounding level of its evaluation. The
/// Taylor test stays meaningful when evaluating `q` cancels heavily.
fn vanishes(q: &Polynomial, c: Complex64) -> bool {
    let tol = CANCEL_TOLERANCE * c.norm().max(1.0);
    let (mut rest, value) = q.deflate(c);
    let value = value.norm();
    let rounding = 64.0 * (q.deg() as f64 + 1.0) * f64::EPSILON * q.eval_abs(c.norm());
    if value <= rounding {
        return true;
    }
    for k in 1..=q.deg() {
        let (next, taylor) = rest.deflate(c);
        if taylor.norm() > 0.0 && (value / taylor.norm()).powf(1.0 / k as f64) <= tol {
            return true;
        }
        rest = next;
    }
    false
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
