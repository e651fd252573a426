//! Simultaneous root finding (Aberth–Ehrlich) with multiplicity clustering.
//!
//! Multiple roots come out of Aberth iteration as a tight ring of
//! approximations whose spread is roughly `eps^(1/k)`. They are grouped by
//! overlapping inclusion discs, replaced by their centroid, and polished with
//! Newton's method on the `(k-1)`-th derivative, where the root is simple.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PolyError, Polynomial};

/// Seed for the initial-guess perturbation when none is given.
pub const DEFAULT_ROOT_SEED: u64 = 0x4a11e7;

/// A root location together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCluster {
    pub location: Complex64,
    pub multiplicity: usize,
}

impl RootCluster {
    pub fn new(location: Complex64, multiplicity: usize) -> Self {
        RootCluster { location, multiplicity }
    }
}

#[derive(Clone, Debug)]
pub struct RootFinder {
    pub max_sweeps: usize,
    /// Approximations closer than this are always merged.
    pub cluster_radius: f64,
    /// Largest accepted `|p(r)| / sum |a_k| |r|^k` at a returned root.
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for RootFinder {
    fn default() -> Self {
        RootFinder { max_sweeps: 200, cluster_radius: 1e-6, residual_tol: 1e-6, seed: DEFAULT_ROOT_SEED }
    }
}

/// Roots of `p` with multiplicities, using the default [`RootFinder`].
pub fn find_roots(p: &Polynomial) -> Result<Vec<RootCluster>, PolyError> {
    RootFinder::default().find(p)
}

impl RootFinder {
    pub fn find(&self, p: &Polynomial) -> Result<Vec<RootCluster>, PolyError> {
        let degree = p.degree().ok_or(PolyError::ZeroPolynomial)?;
        if degree == 0 {
            return Err(PolyError::ConstantPolynomial);
        }
        let zeros = p.exact_zero_order();
        let q = p.unshift(zeros);
        let mut clusters = Vec::new();
        if zeros > 0 {
            clusters.push(RootCluster::new(Complex64::new(0.0, 0.0), zeros));
        }
        match q.deg() {
            0 => {}
            1 => clusters.push(RootCluster::new(-q.coeff(0) / q.coeff(1), 1)),
            _ => {
                let approx = self.aberth(&q)?;
                clusters.extend(self.cluster(&q, &approx)?);
            }
        }
        clusters.sort_by(|a, b| a.location.re.total_cmp(&b.location.re).then(a.location.im.total_cmp(&b.location.im)));
        Ok(clusters)
    }

    fn aberth(&self, p: &Polynomial) -> Result<Vec<Complex64>, PolyError> {
        let n = p.deg();
        let monic = p.scale(p.leading().inv());
        let deriv = monic.derivative();
        let radius = cauchy_bound(&monic);

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let offset = rng.random::<f64>() * TAU / n as f64;
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let jitter = 1.0 + 0.05 * (rng.random::<f64>() - 0.5);
                Complex64::from_polar(radius * jitter, offset + TAU * k as f64 / n as f64)
            })
            .collect();
        let mut done = vec![false; n];
        let noise = 4.0 * (n as f64 + 1.0) * f64::EPSILON;

        for _ in 0..self.max_sweeps {
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let zi = z[i];
                let value = monic.eval(zi);
                if value.norm() <= noise * monic.error_scale(zi.norm()) {
                    done[i] = true;
                    continue;
                }
                let slope = deriv.eval(zi);
                let ratio = value / slope;
                let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (zi - z[j]).inv()).sum();
                let step = ratio / (1.0 - ratio * repulsion);
                if !step.is_finite() {
                    // Degenerate derivative: nudge the approximation off the critical point.
                    z[i] = zi + Complex64::new(1e-8, 1e-8) * (1.0 + zi.norm());
                    continue;
                }
                z[i] = zi - step;
                if step.norm() <= f64::EPSILON * z[i].norm() {
                    done[i] = true;
                }
            }
            if done.iter().all(|d| *d) {
                break;
            }
        }

        if let Some(bad) =
            z.iter().find(|zi| monic.eval(**zi).norm() > self.residual_tol * monic.error_scale(zi.norm()).max(1e-300))
        {
            let residual = monic.eval(*bad).norm() / monic.error_scale(bad.norm());
            return Err(PolyError::NonConvergence { sweeps: self.max_sweeps, residual });
        }
        Ok(z)
    }

    fn cluster(&self, p: &Polynomial, z: &[Complex64]) -> Result<Vec<RootCluster>, PolyError> {
        let n = z.len();
        let monic = p.scale(p.leading().inv());
        let mu = 8.0 * n as f64 * f64::EPSILON;
        let radii: Vec<f64> = (0..n)
            .map(|i| {
                let num = monic.eval(z[i]).norm() + mu * monic.error_scale(z[i].norm());
                let den: f64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).norm()).product();
                if den == 0.0 {
                    f64::INFINITY
                } else {
                    n as f64 * num / den
                }
            })
            .collect();

        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (z[i] - z[j]).norm();
                if d <= radii[i] + radii[j] || d <= self.cluster_radius {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[b] = a;
                    }
                }
            }
        }

        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_of = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if group_of[r] == usize::MAX {
                group_of[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[group_of[r]].push(i);
        }

        groups
            .into_iter()
            .map(|members| {
                let k = members.len();
                let centroid = members.iter().map(|&i| z[i]).sum::<Complex64>() / k as f64;
                let spread = members.iter().map(|&i| (z[i] - centroid).norm()).fold(0.0, f64::max);
                let location = polish(&monic, centroid, k, spread);
                let residual = monic.eval(location).norm();
                let scale = monic.error_scale(location.norm());
                if residual > self.residual_tol * scale.max(1e-300) {
                    return Err(PolyError::NonConvergence { sweeps: self.max_sweeps, residual: residual / scale });
                }
                Ok(RootCluster::new(location, k))
            })
            .collect()
    }
}

/// Newton on `p^(k-1)` from the cluster centroid. Steps are kept only while
/// they shrink and stay inside the cluster.
fn polish(p: &Polynomial, start: Complex64, k: usize, spread: f64) -> Complex64 {
    let target = p.nth_derivative(k - 1);
    let slope = target.derivative();
    let limit = spread.max(1e-10 * (1.0 + start.norm())) * 2.0;
    let mut z = start;
    let mut last = f64::INFINITY;
    for _ in 0..8 {
        let step = target.eval(z) / slope.eval(z);
        if !step.is_finite() || step.norm() >= last || (z - step - start).norm() > limit {
            break;
        }
        z -= step;
        last = step.norm();
        if last <= f64::EPSILON * z.norm() {
            break;
        }
    }
    z
}

/// Unique positive root of `x^n - sum_{k<n} |a_k| x^k` for monic `p`; every
/// root of `p` lies in the disc of this radius.
pub fn cauchy_bound(monic: &Polynomial) -> f64 {
    let n = monic.deg();
    let abs: Vec<f64> = monic.coeffs().iter().map(|c| c.norm()).collect();
    let f = |x: f64| {
        let tail: f64 = abs[..n].iter().rev().fold(0.0, |acc, &a| acc * x + a);
        x.powi(n as i32) - tail
    };
    let mut hi = 1.0 + abs[..n].iter().cloned().fold(0.0, f64::max);
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    hi.max(f64::MIN_POSITIVE)
}
