//! Superattracting 2-cycles of Halley's method in the cubic family
//! `p_b(z) = z^3 + 6z + b`.
//!
//! The free critical points of `H_b` are `1` and `-1`, and `H_b(1) = xi(b) =
//! (1 + 4b) / (b - 20)`. Requiring `H_b(xi) = 1` gives a sextic in `b` that
//! factors as `10 (b + 7) F(b)`; the five roots of the quintic `F` are the
//! parameters for which `{1, xi}` is a superattracting 2-cycle.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::polycore::{find_roots, Polynomial};
use crate::ratmap::{MapError, RationalMap, SpherePoint};

/// Coefficients of `F`, ascending.
pub const F_COEFFS: [f64; 6] = [-1830821.0, 388025.0, -92141.0, 9625.0, -757.0, 10.0];

/// The sextic cycle condition as printed, ascending. The `b^2` coefficient
/// is printed as `-2569622`; the product `10 (b + 7) F(b)` has `-256962`.
pub const PRINTED_SEXTIC: [f64; 7] = [-12815747.0, 885354.0, -2569622.0, -24766.0, 4326.0, -687.0, 10.0];

/// Where the cycle condition is interpolated: `SAMPLE_RADIUS * e^{2 pi i k / 7}`.
const SAMPLE_RADIUS: f64 = 10.0;
/// Held-out sample parameters used to validate the interpolant.
const HELD_OUT: [Complex64; 2] = [Complex64::new(3.7, -1.2), Complex64::new(-25.0, 4.0)];
/// Relative residual allowed at the held-out samples.
const INTERPOLATION_TOLERANCE: f64 = 1e-6;
/// `|H_b^2(c) - c|` accepted for a 2-cycle through the critical point `c`.
pub const CYCLE_TOLERANCE: f64 = 1e-8;
/// Distance from an excluded parameter that is still rejected.
const EXCLUSION_RADIUS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("b = {0} is excluded (p_b has a multiple root or b = 0)")]
    ExcludedParameter(Complex64),
    #[error("xi(b) has a pole at b = 20")]
    PoleAtTwenty,
    #[error("interpolated cycle condition is off by {residual:e} at a held-out sample")]
    InterpolationInconsistent { residual: f64 },
    #[error("no 2-cycle through a free critical point for b = {b} (residual {residual:e})")]
    NoCycle { b: Complex64, residual: f64 },
}

fn admissible(b: Complex64) -> Result<(), ParamError> {
    let s = 4.0 * 2f64.sqrt();
    let excluded = [Complex64::new(0.0, 0.0), Complex64::new(0.0, s), Complex64::new(0.0, -s)];
    if excluded.iter().any(|e| (b - e).norm() <= EXCLUSION_RADIUS * b.norm().max(1.0)) {
        return Err(ParamError::ExcludedParameter(b));
    }
    Ok(())
}

/// `z^3 + 6z + b`.
pub fn p_b(b: Complex64) -> Polynomial {
    Polynomial::new(vec![b, Complex64::new(6.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
}

/// Numerator and denominator of `H_b` in closed form:
/// `(z^5 - 2z^3 - 2b z^2 - 2b) / (2z^4 + 6z^2 - b z + 12)`.
fn closed_form(b: Complex64) -> (Polynomial, Polynomial) {
    let r = |x: f64| Complex64::new(x, 0.0);
    let num = Polynomial::new(vec![-2.0 * b, r(0.0), -2.0 * b, r(-2.0), r(0.0), r(1.0)]);
    let den = Polynomial::new(vec![r(12.0), -b, r(6.0), r(0.0), r(2.0)]);
    (num, den)
}

/// Halley's map of `p_b` from its closed form.
pub fn halley_b(b: Complex64) -> Result<RationalMap, ParamError> {
    admissible(b)?;
    let (num, den) = closed_form(b);
    Ok(RationalMap::reduced(num, den)?)
}

/// `xi(b) = H_b(1) = (1 + 4b) / (b - 20)`.
pub fn xi_of(b: Complex64) -> Result<Complex64, ParamError> {
    if b == Complex64::new(20.0, 0.0) {
        return Err(ParamError::PoleAtTwenty);
    }
    Ok((1.0 + 4.0 * b) / (b - 20.0))
}

/// `(b - 20)^5 (num_b(xi) - den_b(xi))`, a polynomial of degree 6 in `b`
/// whose roots are the parameters with `H_b(xi(b)) = 1`.
fn cleared_condition(b: Complex64) -> Complex64 {
    let (num, den) = closed_form(b);
    let xi = (1.0 + 4.0 * b) / (b - 20.0);
    (b - 20.0).powu(5) * (num.eval(xi) - den.eval(xi))
}

/// Interpolates the cycle condition from 7 samples on a circle (an inverse
/// DFT), checks it at two held-out parameters, and scales it to leading
/// coefficient 10.
pub fn cycle_condition_polynomial() -> Result<Polynomial, ParamError> {
    const N: usize = 7;
    let nodes: Vec<Complex64> =
        (0..N).map(|k| Complex64::from_polar(SAMPLE_RADIUS, std::f64::consts::TAU * k as f64 / N as f64)).collect();
    let values: Vec<Complex64> = nodes.iter().map(|&b| cleared_condition(b)).collect();
    let coeffs: Vec<Complex64> = (0..N)
        .map(|j| {
            let sum: Complex64 = (0..N)
                .map(|k| values[k] * Complex64::from_polar(1.0, -std::f64::consts::TAU * (j * k) as f64 / N as f64))
                .sum();
            sum / (N as f64 * SAMPLE_RADIUS.powi(j as i32))
        })
        .collect();
    let poly = Polynomial::new(coeffs);
    for b in HELD_OUT {
        let exact = cleared_condition(b);
        let residual = (poly.eval(b) - exact).norm() / exact.norm().max(poly.eval_abs(b.norm()) * 1e-12);
        if residual > INTERPOLATION_TOLERANCE {
            return Err(ParamError::InterpolationInconsistent { residual });
        }
    }
    Ok(poly.scale(Complex64::new(10.0, 0.0) / poly.leading()))
}

/// The quintic `F(b)`.
pub fn f_polynomial() -> Polynomial {
    Polynomial::from_real(&F_COEFFS)
}

/// The sextic exactly as printed.
pub fn printed_sextic() -> Polynomial {
    Polynomial::from_real(&PRINTED_SEXTIC)
}

/// Quotient and remainder of `q` by `b + 7`.
pub fn divide_by_b_plus_7(q: &Polynomial) -> (Polynomial, Complex64) {
    q.deflate(Complex64::new(-7.0, 0.0))
}

/// Largest coefficient-wise relative difference `|a_k - b_k| / |b_k|` (with
/// `max(|b_k|, 1)` in the denominator), one entry per coefficient.
pub fn coefficient_errors(a: &Polynomial, b: &Polynomial) -> Vec<f64> {
    let n = a.coeffs().len().max(b.coeffs().len());
    (0..n).map(|k| (a.coeff(k) - b.coeff(k)).norm() / b.coeff(k).norm().max(1.0)).collect()
}

/// The five roots of `F`.
pub fn roots_of_f() -> Result<Vec<Complex64>, ParamError> {
    let roots = find_roots(&f_polynomial()).map_err(MapError::from)?;
    Ok(roots.iter().flat_map(|r| std::iter::repeat_n(r.location, r.multiplicity)).collect())
}

/// A parameter with a superattracting 2-cycle through a free critical point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleCandidate {
    pub b: Complex64,
    /// `(c, H_b(c))` with `c = 1` or `c = -1`.
    pub cycle: (Complex64, Complex64),
    pub cycle_multiplier: Complex64,
    /// `|H_b^2(c) - c|`.
    pub residual: f64,
}

/// Looks for the 2-cycle `{c, H_b(c)}` for `c = 1`, then `c = -1`.
pub fn verify_cycle(b: Complex64) -> Result<CycleCandidate, ParamError> {
    let h = halley_b(b)?;
    let mut best = f64::INFINITY;
    for c in [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)] {
        let Ok(SpherePoint::Finite(xi)) = h.eval(c) else { continue };
        let Ok(SpherePoint::Finite(back)) = h.eval(xi) else { continue };
        let residual = (back - c).norm();
        if residual < CYCLE_TOLERANCE {
            let cycle_multiplier = h.derivative_at(c) * h.derivative_at(xi);
            return Ok(CycleCandidate { b, cycle: (c, xi), cycle_multiplier, residual });
        }
        best = best.min(residual);
    }
    Err(ParamError::NoCycle { b, residual: best })
}

/// Checks `H_b(-z) = -H_{-b}(z)` at `samples` seeded random points.
pub fn conjugacy_check(b: Complex64, samples: usize, seed: u64) -> Result<bool, ParamError> {
    let hb = halley_b(b)?;
    let hm = halley_b(-b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let z = Complex64::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
        let lhs = hb.eval(-z)?;
        let rhs = match hm.eval(z)? {
            SpherePoint::Finite(w) => SpherePoint::Finite(-w),
            SpherePoint::Infinity => SpherePoint::Infinity,
        };
        if lhs.relative_error(&rhs) > 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{basin_targets, free_critical_fates, iterate_orbit, OrbitOutcome, OrbitParams};
    use crate::ratmap::{critical_points, halley_of};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_values() {
        let h = halley_b(c(1.0, 0.0)).unwrap();
        assert!((h.eval(c(0.0, 0.0)).unwrap().finite().unwrap() - c(-1.0 / 6.0, 0.0)).norm() < 1e-15);
        assert!(halley_b(c(7.0, 0.0)).is_ok());
        assert_eq!(halley_b(c(0.0, 0.0)).unwrap_err(), ParamError::ExcludedParameter(c(0.0, 0.0)));
        assert!(matches!(halley_b(c(0.0, -4.0 * 2f64.sqrt())), Err(ParamError::ExcludedParameter(_))));
    }

    #[test]
    fn closed_form_matches_construction() {
        for b in [c(1.0, 0.0), c(-3.5, 2.0), c(62.5144396, 0.0)] {
            let closed = halley_b(b).unwrap();
            let built = halley_of(&p_b(b)).unwrap();
            for k in 0..20 {
                let z = Complex64::from_polar(0.3 + 0.2 * k as f64, 1.3 * k as f64);
                let (a, e) = (closed.eval(z).unwrap(), built.eval(z).unwrap());
                assert!(a.relative_error(&e) < 1e-10, "b = {b}, z = {z}");
            }
        }
    }

    #[test]
    fn free_critical_points_are_plus_minus_one() {
        let b = c(2.0, 1.0);
        let crit = critical_points(&halley_b(b).unwrap()).unwrap();
        let roots = find_roots(&p_b(b)).unwrap();
        for cl in crit {
            let at_root = roots.iter().any(|r| (r.location - cl.location).norm() < 1e-6);
            let at_unit = (cl.location - 1.0).norm() < 1e-8 || (cl.location + 1.0).norm() < 1e-8;
            assert!(at_root || at_unit, "{cl:?}");
        }
    }

    #[test]
    fn xi_values() {
        assert_eq!(xi_of(c(0.0, 0.0)).unwrap(), c(-0.05, 0.0));
        assert_eq!(xi_of(c(-7.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((xi_of(c(62.5144396, 0.0)).unwrap() - c(5.905235, 0.0)).norm() < 1e-4);
        assert_eq!(xi_of(c(20.0, 0.0)), Err(ParamError::PoleAtTwenty));
    }

    #[test]
    fn sextic_factors_through_b_plus_seven() {
        let q = cycle_condition_polynomial().unwrap();
        assert_eq!(q.deg(), 6);
        assert!(q.eval(c(-7.0, 0.0)).norm() < 1e-6 * q.eval_abs(7.0));
        let (quot, rem) = divide_by_b_plus_7(&q);
        assert!(rem.norm() < 1e-6 * q.leading().norm());
        assert!((quot.leading() - 10.0).norm() < 1e-8);
        assert!((quot.coeff(0) - (-1830821.0)).norm() < 1e-8 * 1830821.0);
        assert!(coefficient_errors(&quot, &f_polynomial()).iter().all(|e| *e < 1e-8));
    }

    #[test]
    fn printed_sextic_differs_only_in_b_squared() {
        // 10 (b + 7) F(b), expanded independently with integer arithmetic.
        let f: Vec<i64> = F_COEFFS.iter().map(|&x| x as i64).collect();
        let mut product = [0i64; 7];
        for (k, &fk) in f.iter().enumerate() {
            product[k] += 7 * fk;
            product[k + 1] += fk;
        }
        let expected = Polynomial::from_real(&product.iter().map(|&x| x as f64).collect::<Vec<_>>());
        let q = cycle_condition_polynomial().unwrap();
        assert!(coefficient_errors(&q, &expected).iter().all(|e| *e < 1e-8));
        let errs = coefficient_errors(&printed_sextic(), &expected);
        let off: Vec<usize> = (0..7).filter(|&k| errs[k] > 0.0).collect();
        assert_eq!(off, vec![2]);
        assert_eq!(product[2], -256962);
    }

    #[test]
    fn five_roots_of_f() {
        let roots = roots_of_f().unwrap();
        assert_eq!(roots.len(), 5);
        let real: Vec<&Complex64> = roots.iter().filter(|r| r.im.abs() < 1e-9).collect();
        assert!(real.iter().any(|r| (r.re - 62.5144396).abs() < 1e-5));
        for b in &roots {
            let h = halley_b(*b).unwrap();
            let xi = h.eval(c(1.0, 0.0)).unwrap().finite().unwrap();
            let back = h.eval(xi).unwrap().finite().unwrap();
            assert!((back - 1.0).norm() < 1e-7);
        }
    }

    #[test]
    fn real_root_cycle() {
        let b = roots_of_f().unwrap().into_iter().find(|r| r.im.abs() < 1e-9 && r.re > 60.0).unwrap();
        let cand = verify_cycle(b).unwrap();
        assert_eq!(cand.cycle.0, c(1.0, 0.0));
        assert!((cand.cycle.1 - c(5.905235, 0.0)).norm() < 1e-4);
        assert!(cand.cycle_multiplier.norm() < 1e-8);
        assert!(cand.residual < 1e-8);

        let mirrored = verify_cycle(-b).unwrap();
        assert_eq!(mirrored.cycle.0, c(-1.0, 0.0));
        assert!((mirrored.cycle.1 + cand.cycle.1).norm() < 1e-8);
    }

    #[test]
    fn generic_parameter_has_no_cycle() {
        assert!(matches!(verify_cycle(c(1.0, 0.0)), Err(ParamError::NoCycle { .. })));
    }

    #[test]
    fn critical_orbit_lands_on_cycle() {
        let b = c(62.5144396, 0.0);
        let p = p_b(b);
        let h = halley_of(&p).unwrap();
        let targets = basin_targets(&p, &h).unwrap();
        let out = iterate_orbit(&h, SpherePoint::Finite(c(1.0, 0.0)), &targets, 200, 1e-8);
        let OrbitOutcome::ConvergedToCycle { period, .. } = out else { panic!("{out:?}") };
        assert_eq!(period, 2);
        let fates = free_critical_fates(&p, &h, OrbitParams::default()).unwrap();
        assert!(fates
            .iter()
            .any(|(cp, f)| (cp - 1.0).norm() < 1e-8 && matches!(f, OrbitOutcome::ConvergedToCycle { .. })));
    }

    #[test]
    fn conjugacy() {
        assert!(conjugacy_check(c(3.0, 0.0), 50, 1).unwrap());
        assert!(conjugacy_check(c(0.0, 1.0), 50, 2).unwrap());
        assert!(matches!(conjugacy_check(c(0.0, 0.0), 5, 3), Err(ParamError::ExcludedParameter(_))));
    }
}
