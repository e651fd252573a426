//! The verification experiments E1 to E10.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::corpus::random_corpus;
use crate::classify::classify_fixed_points;
use crate::dynamics::{
    basin_targets, boundedness_evidence, classify_grid, free_critical_fates, immediate_basin_component,
    interval_convergence_check, iterate_orbit, BasinGrid, BoundednessVerdict, Label, Obstruction, OrbitOutcome,
    OrbitParams, Window, DEFAULT_CAPTURE_RADIUS, DEFAULT_MAX_ITER,
};
use crate::paramsearch::{
    coefficient_errors, cycle_condition_polynomial, divide_by_b_plus_7, f_polynomial, halley_b, p_b, printed_sextic,
    roots_of_f, verify_cycle,
};
use crate::polycore::{find_roots, Polynomial};
use crate::ratmap::{chebyshev_halley_of, degree_census, halley_of, konig_of, RationalMap, SpherePoint};
use crate::symmetry::{grid_symmetry_order, map_rotation_order};

pub const EXPERIMENTS: [&str; 10] = ["E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10"];
pub const CORPUS_SEED: u64 = 20_251_019;
pub const CORPUS_SIZE: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabConfig {
    pub capture_radius: f64,
    pub max_iter: usize,
    /// Side length of the square basin grids.
    pub resolution: usize,
    /// Seed for the polynomial corpus and random sample points.
    pub seed: u64,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            capture_radius: DEFAULT_CAPTURE_RADIUS,
            max_iter: DEFAULT_MAX_ITER,
            resolution: 800,
            seed: CORPUS_SEED,
        }
    }
}

impl LabConfig {
    fn params(&self) -> OrbitParams {
        OrbitParams { max_iter: self.max_iter, capture_radius: self.capture_radius }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub id: &'static str,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl ExperimentResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ExperimentResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<4} {}  {}", self.id, if self.passed() { "PASS" } else { "FAIL" }, self.title)?;
        let failed: Vec<String> = self.failed_checks().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        if !failed.is_empty() {
            write!(f, "  [{}]", failed.join("; "))?;
        }
        Ok(())
    }
}

type CheckResult = Result<(bool, String), String>;

fn check(name: impl Into<String>, f: impl FnOnce() -> CheckResult) -> Check {
    let name = name.into();
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `z (z^n - 1)`.
fn z_times_unity(n: usize) -> Polynomial {
    let mut coeffs = vec![c(0.0, 0.0); n + 2];
    coeffs[1] = c(-1.0, 0.0);
    coeffs[n + 1] = c(1.0, 0.0);
    Polynomial::new(coeffs)
}

fn grid_for(
    p: &Polynomial,
    window: Window,
    cfg: &LabConfig,
) -> Result<(RationalMap, Vec<Complex64>, BasinGrid), String> {
    let h = halley_of(p).map_err(|e| e.to_string())?;
    let targets = basin_targets(p, &h).map_err(|e| e.to_string())?;
    let grid = classify_grid(&h, &targets, window, cfg.resolution, cfg.resolution, cfg.params());
    Ok((h, targets, grid))
}

pub fn run_experiment(id: &str, cfg: &LabConfig) -> Option<ExperimentResult> {
    Some(match id {
        "E1" => e1(cfg),
        "E2" => e2(cfg),
        "E3" => e3(cfg),
        "E4" => e4(cfg),
        "E5" => e5(cfg),
        "E6" => e6(cfg),
        "E7" => e7(cfg),
        "E8" => e8(),
        "E9" => e9(),
        "E10" => e10(cfg),
        _ => return None,
    })
}

pub fn run_all(cfg: &LabConfig) -> Vec<ExperimentResult> {
    EXPERIMENTS.iter().filter_map(|id| run_experiment(id, cfg)).collect()
}

/// Basins of `(z^2 - 1)^k` are the two half planes.
fn e1(cfg: &LabConfig) -> ExperimentResult {
    let checks = (1..=3)
        .map(|k| {
            check(format!("k={k}"), || {
                let p = Polynomial::from_roots(&[(c(1.0, 0.0), k), (c(-1.0, 0.0), k)], c(1.0, 0.0));
                let (_, targets, grid) = grid_for(&p, Window::square(2.0), cfg)?;
                let margin = 2.0 * grid.pitch();
                let (mut total, mut unlabeled, mut agree) = (0usize, 0usize, 0usize);
                for iy in 0..grid.height {
                    for ix in 0..grid.width {
                        let z = grid.pixel_center(ix, iy);
                        if z.re.abs() <= margin {
                            continue;
                        }
                        total += 1;
                        match grid.label_at(ix, iy) {
                            Label::Root(r) if targets[r].re.signum() == z.re.signum() => agree += 1,
                            Label::Root(_) => {}
                            _ => unlabeled += 1,
                        }
                    }
                }
                let frac = agree as f64 / total as f64;
                Ok((
                    unlabeled == 0 && frac >= 0.9999,
                    format!("{unlabeled} unlabeled, sign agreement {:.4}%", 100.0 * frac),
                ))
            })
        })
        .collect();
    ExperimentResult { id: "E1", title: "Julia set of (z^2-1)^k is the imaginary axis", checks }
}

/// Starting `CONTRACTION_START` away from each root, the last step before
/// capture must contract like the fixed point's multiplier: superlinearly at
/// simple roots, by `(k-1)/(k+1)` at roots of multiplicity `k`. A capture
/// radius that swallows the starting point leaves nothing to measure.
const CONTRACTION_START: f64 = 1e-2;

fn convergence_rate(p: &Polynomial, h: &RationalMap, cfg: &LabConfig) -> CheckResult {
    let clusters = find_roots(p).map_err(|e| e.to_string())?;
    let targets = basin_targets(p, h).map_err(|e| e.to_string())?;
    for (i, (cl, &t)) in clusters.iter().zip(&targets).enumerate() {
        let z0 = t + Complex64::from_polar(CONTRACTION_START, 0.7);
        let iterations = match iterate_orbit(h, SpherePoint::Finite(z0), &targets, cfg.max_iter, cfg.capture_radius) {
            OrbitOutcome::ConvergedToRoot { root, iterations } if root == i => iterations,
            other => return Ok((false, format!("orbit near root {t} ended as {other:?}"))),
        };
        if iterations == 0 {
            return Ok((false, format!("capture radius {:e} swallows the start at root {t}", cfg.capture_radius)));
        }
        let mut z = z0;
        for _ in 0..iterations - 1 {
            z = h.eval(z).map_err(|e| e.to_string())?.finite().ok_or("orbit hit a pole")?;
        }
        let next = h.eval(z).map_err(|e| e.to_string())?.finite().ok_or("orbit hit a pole")?;
        let ratio = (next - t).norm() / (z - t).norm();
        let k = cl.multiplicity as f64;
        let ok = if cl.multiplicity == 1 { ratio <= 1e-2 } else { (ratio - (k - 1.0) / (k + 1.0)).abs() <= 5e-3 };
        if !ok {
            return Ok((false, format!("contraction {ratio:.3e} at root {t} of multiplicity {}", cl.multiplicity)));
        }
    }
    Ok((true, String::new()))
}

/// Fixed-point multipliers against their closed forms over the corpus.
fn e2(cfg: &LabConfig) -> ExperimentResult {
    let corpus = random_corpus(CORPUS_SIZE, cfg.seed);
    let mut checks = vec![check("multipliers", || {
        let mut fixed = 0;
        for (i, e) in corpus.iter().enumerate() {
            let h = halley_of(&e.poly).map_err(|e| format!("#{i}: {e}"))?;
            let records = classify_fixed_points(&e.poly, &h).map_err(|e| format!("#{i}: {e}"))?;
            if records.len() != h.degree() + 1 {
                return Ok((false, format!("#{i}: {} fixed points for degree {}", records.len(), h.degree())));
            }
            fixed += records.len();
        }
        Ok((true, format!("{fixed} fixed points over {} polynomials", corpus.len())))
    })];
    checks.push(check("convergence rate", || {
        for (i, e) in corpus.iter().enumerate() {
            let h = halley_of(&e.poly).map_err(|e| e.to_string())?;
            let (ok, detail) = convergence_rate(&e.poly, &h, cfg)?;
            if !ok {
                return Ok((false, format!("#{i}: {detail}")));
            }
        }
        Ok((true, String::new()))
    }));
    ExperimentResult { id: "E2", title: "fixed-point multipliers match (k-1)/(k+1), 1+2/l, (d+1)/(d-1)", checks }
}

/// Degree of the Halley map equals `2N + s - B - 1`.
fn e3(cfg: &LabConfig) -> ExperimentResult {
    let mut checks = vec![check("corpus", || {
        for (i, e) in random_corpus(CORPUS_SIZE, cfg.seed).iter().enumerate() {
            let h = halley_of(&e.poly).map_err(|e| e.to_string())?;
            let census = degree_census(&e.poly).map_err(|e| e.to_string())?;
            if h.degree() != census.predicted_degree {
                return Ok((false, format!("#{i}: degree {} vs census {}", h.degree(), census.predicted_degree)));
            }
        }
        Ok((true, String::new()))
    })];
    let named = [
        ("z^3-1", Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]), 4),
        ("z(z^2-1)", z_times_unity(2), 5),
        ("z^2(z^2-1)", Polynomial::from_real(&[0.0, 0.0, -1.0, 0.0, 1.0]), 5),
    ];
    for (name, p, expected) in named {
        checks.push(check(name, || {
            let d = halley_of(&p).map_err(|e| e.to_string())?.degree();
            let census = degree_census(&p).map_err(|e| e.to_string())?.predicted_degree;
            Ok((d == expected && census == expected, format!("degree {d}, census {census}, expected {expected}")))
        }));
    }
    ExperimentResult { id: "E3", title: "deg H_p = 2N + s - B - 1", checks }
}

/// Uniform point on the sphere, projected to the plane.
fn sphere_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let u: f64 = rng.random_range(-1.0..1.0);
    let phi = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(((1.0 + u) / (1.0 - u)).sqrt(), phi)
}

/// König of order 3 and Chebyshev-Halley with sigma = 1/2 are Halley's map.
fn e4(cfg: &LabConfig) -> ExperimentResult {
    let corpus = random_corpus(CORPUS_SIZE, cfg.seed);
    let checks = corpus
        .iter()
        .take(10)
        .enumerate()
        .map(|(i, e)| {
            check(format!("#{i}"), || {
                let h = halley_of(&e.poly).map_err(|e| e.to_string())?;
                let k = konig_of(&e.poly, 3).map_err(|e| e.to_string())?;
                let g = chebyshev_halley_of(&e.poly, c(0.5, 0.0)).map_err(|e| e.to_string())?;
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ i as u64);
                let mut worst = 0.0f64;
                for _ in 0..100 {
                    let z = sphere_point(&mut rng);
                    let hz = h.eval(z).map_err(|e| e.to_string())?;
                    for other in [&k, &g] {
                        worst = worst.max(hz.relative_error(&other.eval(z).map_err(|e| e.to_string())?));
                    }
                }
                Ok((worst < 1e-9, format!("max relative error {worst:.2e}")))
            })
        })
        .collect();
    ExperimentResult { id: "E4", title: "Konig order 3 and Chebyshev-Halley sigma=1/2 coincide with Halley", checks }
}

/// Convergence for the symmetric quartic and cubic families.
fn e5(cfg: &LabConfig) -> ExperimentResult {
    let cases = [
        ("z^3-1", Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]), false),
        ("z(z^2-1)", z_times_unity(2), true),
        ("z(z^3-1)", z_times_unity(3), true),
        ("z^2(z^2-1)", Polynomial::from_real(&[0.0, 0.0, -1.0, 0.0, 1.0]), false),
    ];
    let checks = cases
        .into_iter()
        .map(|(name, p, to_zero)| {
            check(name, || {
                let (h, targets, grid) = grid_for(&p, Window::square(2.0), cfg)?;
                let fates = free_critical_fates(&p, &h, cfg.params()).map_err(|e| e.to_string())?;
                let zero = targets.iter().position(|t| t.norm() < 1e-6);
                for (cp, fate) in &fates {
                    match fate.root() {
                        Some(r) if !to_zero || Some(r) == zero => {}
                        _ => return Ok((false, format!("free critical point {cp} ends as {fate:?}"))),
                    }
                }
                let frac = grid.root_fraction();
                Ok((frac >= 0.999, format!("{} free critical points, root-labeled {:.3}%", fates.len(), 100.0 * frac)))
            })
        })
        .collect();
    ExperimentResult { id: "E5", title: "Halley's method is convergent for the symmetric families", checks }
}

/// The immediate basin of 0 for `z (z^n - 1)` is bounded for n = 7, 9.
fn e6(cfg: &LabConfig) -> ExperimentResult {
    let mut checks = Vec::new();
    for n in [7, 9] {
        let p = z_times_unity(n);
        checks.push(check(format!("n={n} A0"), || {
            let h = halley_of(&p).map_err(|e| e.to_string())?;
            let targets = basin_targets(&p, &h).map_err(|e| e.to_string())?;
            let windows = [Window::square(2.0), Window::square(4.0), Window::square(8.0)];
            let rep = boundedness_evidence(&h, &targets, c(0.0, 0.0), &windows, cfg.resolution / 2, cfg.params())
                .map_err(|e| e.to_string())?;
            let ok = rep.verdict == BoundednessVerdict::Bounded && !rep.touches_border.iter().any(|&t| t);
            Ok((ok, format!("areas {:?}, touches border {:?}", rep.areas, rep.touches_border)))
        }));
        checks.push(check(format!("n={n} nonzero roots"), || {
            let (_, targets, grid) = grid_for(&p, Window::square(2.0), cfg)?;
            for t in targets.iter().filter(|t| t.norm() > 0.5) {
                let comp = immediate_basin_component(&grid, *t).map_err(|e| e.to_string())?;
                if !comp.touches_border {
                    return Ok((false, format!("component of {t} stays inside [-2,2]^2")));
                }
            }
            Ok((true, String::new()))
        }));
    }
    ExperimentResult { id: "E6", title: "A0 of z(z^n-1) is bounded for n = 7, 9", checks }
}

/// Rotation order of the map and of its basin picture equal n.
fn e7(cfg: &LabConfig) -> ExperimentResult {
    let checks = [2, 3, 7, 9]
        .into_iter()
        .map(|n| {
            check(format!("n={n}"), || {
                let p = z_times_unity(n);
                let (h, _, grid) = grid_for(&p, Window::square(2.0), cfg)?;
                let map_order = map_rotation_order(&h, 16);
                let grid_order = grid_symmetry_order(&grid, 16).map_err(|e| e.to_string())?;
                Ok((map_order == n && grid_order == n, format!("map {map_order}, grid {grid_order}")))
            })
        })
        .collect();
    ExperimentResult { id: "E7", title: "symmetry of z(z^n-1) carries over to H_p", checks }
}

pub const REAL_CYCLE_PARAMETER: f64 = 62.5144396;
pub const REAL_CYCLE_XI: f64 = 5.905235;

/// Superattracting 2-cycles in the family `z^3 + 6z + b`.
fn e8() -> ExperimentResult {
    let checks = vec![
        check("printed sextic", || {
            let q = cycle_condition_polynomial().map_err(|e| e.to_string())?;
            let errs = coefficient_errors(&q, &printed_sextic());
            let bad: Vec<String> = errs
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 1e-8)
                .map(|(k, _)| {
                    format!("b^{k}: computed {:.1} printed {:.1}", q.coeff(k).re, printed_sextic().coeff(k).re)
                })
                .collect();
            Ok((bad.is_empty(), bad.join(", ")))
        }),
        check("(b+7) F(b)", || {
            let q = cycle_condition_polynomial().map_err(|e| e.to_string())?;
            let (quot, rem) = divide_by_b_plus_7(&q);
            let worst = coefficient_errors(&quot, &f_polynomial()).into_iter().fold(0.0, f64::max);
            let rel_rem = rem.norm() / q.max_coeff_norm();
            Ok((worst <= 1e-8 && rel_rem <= 1e-8, format!("remainder {rel_rem:.1e}, quotient error {worst:.1e}")))
        }),
        check("five roots", || {
            let roots = roots_of_f().map_err(|e| e.to_string())?;
            let distinct = roots.iter().enumerate().all(|(i, a)| roots[..i].iter().all(|b| (a - b).norm() > 1e-6));
            Ok((roots.len() == 5 && distinct, format!("{} roots", roots.len())))
        }),
        check("real root", || {
            let roots = roots_of_f().map_err(|e| e.to_string())?;
            let real: Vec<f64> = roots.iter().filter(|r| r.im.abs() < 1e-9 * r.norm().max(1.0)).map(|r| r.re).collect();
            Ok((real.len() == 1 && (real[0] - REAL_CYCLE_PARAMETER).abs() <= 1e-5, format!("{real:?}")))
        }),
        check("cycle {1, xi}", || {
            let b = roots_of_f()
                .map_err(|e| e.to_string())?
                .into_iter()
                .find(|r| r.im.abs() < 1e-9 * r.norm().max(1.0))
                .ok_or("no real root")?;
            let cand = verify_cycle(b).map_err(|e| e.to_string())?;
            let ok = cand.cycle.0 == c(1.0, 0.0)
                && (cand.cycle.1 - REAL_CYCLE_XI).norm() <= 1e-4
                && cand.cycle_multiplier.norm() < 1e-8;
            Ok((ok, format!("xi = {}, |multiplier| = {:.1e}", cand.cycle.1, cand.cycle_multiplier.norm())))
        }),
    ];
    ExperimentResult { id: "E8", title: "superattracting 2-cycles of z^3+6z+b", checks }
}

/// Monotone convergence on real intervals, and the pole obstruction.
fn e9() -> ExperimentResult {
    let p = z_times_unity(2);
    let s = 1.0 / 3f64.sqrt();
    let mut checks: Vec<Check> = [(s, 1.0, 1.0), (-1.0, -s, -1.0), (1.0, f64::INFINITY, 1.0)]
        .into_iter()
        .map(|(a, b, limit)| {
            check(format!("({a:.4}, {b:.4})"), || {
                let h = halley_of(&p).map_err(|e| e.to_string())?;
                let rep = interval_convergence_check(&h, a, b, 50).map_err(|e| e.to_string())?;
                let ok = rep.obstruction.is_none() && rep.predicted_limit == Some(limit) && rep.verified;
                Ok((ok, format!("{rep:?}")))
            })
        })
        .collect();
    checks.push(check("pole of H for z(z^7-1) in (-inf, 0)", || {
        let h = halley_of(&z_times_unity(7)).map_err(|e| e.to_string())?;
        let rep = interval_convergence_check(&h, f64::NEG_INFINITY, 0.0, 50).map_err(|e| e.to_string())?;
        Ok((matches!(rep.obstruction, Some(Obstruction::Pole(_))), format!("{:?}", rep.obstruction)))
    }));
    ExperimentResult { id: "E9", title: "real intervals converge monotonically to their endpoints", checks }
}

/// Halley maps against closed forms written out by hand.
fn e10(cfg: &LabConfig) -> ExperimentResult {
    type Closed = Box<dyn Fn(Complex64) -> Complex64>;
    let z7 = |z: Complex64| {
        let n = 7.0;
        let zn = z.powi(7);
        n * z.powi(8) * ((n + 1.0) * zn + (n - 1.0))
            / ((n + 2.0) * (n + 1.0) * zn * zn + (n + 1.0) * (n - 4.0) * zn + 2.0)
    };
    let b = c(REAL_CYCLE_PARAMETER, 0.0);
    let cases: Vec<(&str, Polynomial, Closed)> = vec![
        (
            "z(z^2-1)",
            z_times_unity(2),
            Box::new(|z| z.powi(3) * (3.0 * z * z + 1.0) / (6.0 * z.powi(4) - 3.0 * z * z + 1.0)),
        ),
        (
            "z(z^3-1)",
            z_times_unity(3),
            Box::new(|z| 3.0 * z.powi(4) * (2.0 * z.powi(3) + 1.0) / (10.0 * z.powi(6) - 2.0 * z.powi(3) + 1.0)),
        ),
        ("z(z^7-1)", z_times_unity(7), Box::new(z7)),
        (
            "z^3+6z+b",
            p_b(b),
            Box::new(move |z| {
                (z.powi(5) - 2.0 * z.powi(3) - 2.0 * b * z * z - 2.0 * b)
                    / (2.0 * z.powi(4) + 6.0 * z * z - b * z + 12.0)
            }),
        ),
        (
            "z(z-1)^2",
            Polynomial::from_real(&[0.0, 1.0, -2.0, 1.0]),
            Box::new(|z| 3.0 * z.powi(3) / (6.0 * z * z - 4.0 * z + 1.0)),
        ),
    ];
    let mut checks: Vec<Check> = cases
        .into_iter()
        .enumerate()
        .map(|(i, (name, p, closed))| {
            check(name, || {
                let h = halley_of(&p).map_err(|e| e.to_string())?;
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
                let mut worst = 0.0f64;
                for _ in 0..50 {
                    let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                    let got = h.eval(z).map_err(|e| e.to_string())?;
                    worst = worst.max(got.relative_error(&SpherePoint::from(closed(z))));
                }
                Ok((worst < 1e-9, format!("max relative error {worst:.2e}")))
            })
        })
        .collect();
    checks.push(check("H_b closed form for random b", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let b = c(rng.random_range(-30.0..30.0), rng.random_range(-30.0..30.0));
            let closed = halley_b(b).map_err(|e| e.to_string())?;
            let built = halley_of(&p_b(b)).map_err(|e| e.to_string())?;
            for _ in 0..50 {
                let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                let (a, e) = (closed.eval(z).map_err(|e| e.to_string())?, built.eval(z).map_err(|e| e.to_string())?);
                worst = worst.max(a.relative_error(&e));
            }
        }
        Ok((worst < 1e-9, format!("max relative error {worst:.2e}")))
    }));
    ExperimentResult { id: "E10", title: "Halley maps match hand-derived closed forms", checks }
}
