//! Orbits of rational maps on the sphere: root capture, attracting-cycle
//! detection, basin grids, immediate-basin flood fills and real-axis
//! analysis.

mod grid;
mod interval;

use num_complex::Complex64;
use thiserror::Error;

use crate::polycore::Polynomial;
use crate::ratmap::{critical_points, partition_critical, MapError, RationalMap, SpherePoint};

pub use grid::{
    boundedness_evidence, classify_grid, flood_fill, immediate_basin_component, BasinGrid, BoundednessReport,
    BoundednessVerdict, Component, Label, Window,
};
pub use interval::{
    imaginary_axis_profile, interval_convergence_check, real_axis_profile, real_poles, write_profile_csv,
    IntervalReport, Obstruction, ProfileRow,
};

pub const DEFAULT_CAPTURE_RADIUS: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;
/// Chordal distance at which two orbit points are the same for cycle detection.
pub const CYCLE_TOLERANCE: f64 = 1e-9;
/// Longest cycle the detector reports.
pub const MAX_PERIOD: usize = 32;
/// Extra iterations a captured orbit must stay within the capture radius.
pub const CONFIRM_STEPS: usize = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("seed pixel is not labelled by a root or cycle")]
    SeedUnlabeled,
    #[error("seed {0} lies outside the window")]
    SeedOutside(Complex64),
    #[error("window extents must be positive and finite")]
    InvalidWindow,
    #[error("windows must be strictly increasing")]
    WindowsNotIncreasing,
    #[error("interval analysis needs a map with real coefficients")]
    NotReal,
    #[error("endpoint {0} is not a fixed point")]
    NotFixed(f64),
    #[error("invalid interval ({0}, {1})")]
    InvalidInterval(f64, f64),
}

/// Iteration cap and capture radius shared by orbit-based operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitParams {
    pub max_iter: usize,
    pub capture_radius: f64,
}

impl Default for OrbitParams {
    fn default() -> Self {
        OrbitParams { max_iter: DEFAULT_MAX_ITER, capture_radius: DEFAULT_CAPTURE_RADIUS }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OrbitOutcome {
    ConvergedToRoot { root: usize, iterations: usize },
    ConvergedToCycle { points: Vec<SpherePoint>, period: usize },
    Undecided { last: SpherePoint },
}

impl OrbitOutcome {
    pub fn root(&self) -> Option<usize> {
        match self {
            OrbitOutcome::ConvergedToRoot { root, .. } => Some(*root),
            _ => None,
        }
    }
}

fn step(r: &RationalMap, z: SpherePoint) -> Option<SpherePoint> {
    r.eval_sphere(z).ok()
}

fn captured_by(z: SpherePoint, roots: &[Complex64], radius: f64) -> Option<usize> {
    let z = z.finite()?;
    roots.iter().position(|&r| (z - r).norm() < radius)
}

/// The first `n + 1` points of the orbit of `z0` (fewer if it hits an
/// indeterminate point).
pub fn orbit(r: &RationalMap, z0: SpherePoint, n: usize) -> Vec<SpherePoint> {
    let mut out = vec![z0];
    let mut z = z0;
    for _ in 0..n {
        match step(r, z) {
            Some(w) => z = w,
            None => break,
        }
        out.push(z);
    }
    out
}

/// Iterates `r` from `z0`. An orbit converges to a root once a point and the
/// next [`CONFIRM_STEPS`] iterates all lie within `capture_radius` of it;
/// otherwise Brent's method on the orbit detects cycles of period at most
/// [`MAX_PERIOD`].
pub fn iterate_orbit(
    r: &RationalMap,
    z0: SpherePoint,
    roots: &[Complex64],
    max_iter: usize,
    capture_radius: f64,
) -> OrbitOutcome {
    let mut z = z0;
    let mut tortoise = z;
    let mut power = 1;
    let mut lam = 0;
    for i in 0..=max_iter {
        if let Some(k) = captured_by(z, roots, capture_radius) {
            let mut w = z;
            let stays = (0..CONFIRM_STEPS).all(|_| {
                w = match step(r, w) {
                    Some(next) => next,
                    None => return false,
                };
                captured_by(w, roots, capture_radius) == Some(k)
            });
            if stays {
                return OrbitOutcome::ConvergedToRoot { root: k, iterations: i };
            }
        }
        if i == max_iter {
            break;
        }
        z = match step(r, z) {
            Some(w) => w,
            None => return OrbitOutcome::Undecided { last: z },
        };
        lam += 1;
        if lam <= MAX_PERIOD && z.chordal_distance(&tortoise) <= CYCLE_TOLERANCE {
            return OrbitOutcome::ConvergedToCycle { points: orbit(r, z, lam - 1), period: lam };
        }
        if lam == power {
            tortoise = z;
            lam = 0;
            if power <= MAX_PERIOD {
                power *= 2;
            }
        }
    }
    OrbitOutcome::Undecided { last: z }
}

/// The attracting fixed points of `r` that sit at the roots of `p`, found by
/// iterating `r` from each root. Labelling orbits against these rather than
/// the roots of `p` keeps capture exact when reduction has moved a fixed
/// point by more than the capture radius.
pub fn basin_targets(p: &Polynomial, r: &RationalMap) -> Result<Vec<Complex64>, MapError> {
    let roots = crate::polycore::find_roots(p)?;
    Ok(roots
        .iter()
        .map(|root| {
            let mut z = root.location;
            for _ in 0..200 {
                match r.eval(z) {
                    Ok(SpherePoint::Finite(w)) => {
                        let moved = (w - z).norm();
                        z = w;
                        if moved <= f64::EPSILON * z.norm().max(1.0) {
                            break;
                        }
                    }
                    _ => break,
                }
            }
            z
        })
        .collect())
}

/// Critical points of `r` that are not at roots of `p`, each with the fate
/// of its orbit.
pub fn free_critical_fates(
    p: &Polynomial,
    r: &RationalMap,
    params: OrbitParams,
) -> Result<Vec<(Complex64, OrbitOutcome)>, MapError> {
    let targets = basin_targets(p, r)?;
    let roots: Vec<Complex64> = crate::polycore::find_roots(p)?.iter().map(|c| c.location).collect();
    let (_, free) = partition_critical(&critical_points(r)?, &roots);
    Ok(free
        .iter()
        .map(|c| {
            let fate =
                iterate_orbit(r, SpherePoint::Finite(c.location), &targets, params.max_iter, params.capture_radius);
            (c.location, fate)
        })
        .collect())
}
