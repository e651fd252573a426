//! Rotational symmetry of a polynomial, of its Halley map, and of a sampled
//! basin picture.
//!
//! A normalized polynomial `z^a p0(z^b)` with maximal `b` is invariant under
//! exactly the rotations of order dividing `b`. The Halley map of such a
//! polynomial commutes with the same rotations; whether it commutes with
//! more is checked on the map's coefficients (by sampling) and on a basin
//! grid.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dynamics::{basin_targets, classify_grid, BasinGrid, Label, OrbitParams, Window};
use crate::polycore::{find_roots, normalized_form, PolyError, Polynomial};
use crate::ratmap::{halley_of, MapError, RationalMap, SpherePoint};

/// Sample points used by [`map_rotation_order`].
pub const ROTATION_SAMPLES: usize = 64;
/// Relative tolerance of the equivariance check.
pub const ROTATION_TOLERANCE: f64 = 1e-9;
/// Minimum fraction of compared pixels that must agree after rotation.
pub const GRID_AGREEMENT: f64 = 0.99;
const ROTATION_SEED: u64 = 0x5eed_0f5e;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("grid window must be a square centred at the origin")]
    WindowNotCentered,
    #[error("need at least 3 distinct roots, found {0}")]
    TooFewRoots(usize),
    #[error("rotation order {sigma_p} of the polynomial does not divide {other} ({what})")]
    ContainmentViolated { sigma_p: usize, other: usize, what: &'static str },
}

impl From<PolyError> for SymmetryError {
    fn from(e: PolyError) -> Self {
        SymmetryError::Map(e.into())
    }
}

/// Order of the rotation group of a normalized polynomial.
pub fn polynomial_symmetry_order(p: &Polynomial) -> Result<usize, PolyError> {
    Ok(normalized_form(p)?.beta)
}

fn commutes_with(r: &RationalMap, n: usize, points: &[Complex64]) -> bool {
    let lambda = Complex64::from_polar(1.0, TAU / n as f64);
    let rotated = r.rotate_conjugate(lambda);
    points.iter().all(|&z| match (r.eval(z), rotated.eval(z)) {
        (Ok(a), Ok(b)) => a.relative_error(&b) <= ROTATION_TOLERANCE || a.chordal_distance(&b) <= ROTATION_TOLERANCE,
        _ => false,
    })
}

/// Largest `n <= n_max` with `lambda^-1 R(lambda z) = R(z)` for
/// `lambda = e^{2 pi i / n}` at [`ROTATION_SAMPLES`] seeded random points.
pub fn map_rotation_order(r: &RationalMap, n_max: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(ROTATION_SEED);
    let points: Vec<Complex64> = (0..ROTATION_SAMPLES)
        .map(|_| Complex64::from_polar(rng.random_range(0.1..2.0), rng.random_range(0.0..TAU)))
        .collect();
    (1..=n_max.max(1)).rev().find(|&n| commutes_with(r, n, &points)).unwrap_or(1)
}

fn on_label_boundary(grid: &BasinGrid, ix: usize, iy: usize) -> bool {
    let l = grid.label_at(ix, iy);
    ix == 0
        || iy == 0
        || ix + 1 == grid.width
        || iy + 1 == grid.height
        || grid.label_at(ix - 1, iy) != l
        || grid.label_at(ix + 1, iy) != l
        || grid.label_at(ix, iy - 1) != l
        || grid.label_at(ix, iy + 1) != l
}

/// Fraction of interior pixels whose label, after rotation by `2 pi / n`
/// about the origin, equals the image of their own label under the best
/// single label permutation; `None` if no injective permutation fits.
pub fn grid_rotation_agreement(grid: &BasinGrid, n: usize) -> Option<f64> {
    let lambda = Complex64::from_polar(1.0, TAU / n as f64);
    let radius = grid.window.half_width.min(grid.window.half_height);
    let mut pairs: HashMap<(Label, Label), usize> = HashMap::new();
    let mut total = 0usize;
    for iy in 0..grid.height {
        for ix in 0..grid.width {
            let z = grid.pixel_center(ix, iy);
            if z.norm() >= radius || on_label_boundary(grid, ix, iy) {
                continue;
            }
            let Some((jx, jy)) = grid.pixel_of(lambda * z) else { continue };
            if on_label_boundary(grid, jx, jy) {
                continue;
            }
            *pairs.entry((grid.label_at(ix, iy), grid.label_at(jx, jy))).or_default() += 1;
            total += 1;
        }
    }
    if total == 0 {
        return None;
    }
    let mut best: HashMap<Label, (Label, usize)> = HashMap::new();
    let mut keys: Vec<_> = pairs.iter().collect();
    keys.sort_by_key(|((a, b), _)| (a.code(), b.code()));
    for (&(a, b), &count) in keys {
        let entry = best.entry(a).or_insert((b, 0));
        if count > entry.1 {
            *entry = (b, count);
        }
    }
    let mut images: Vec<Label> = best.values().map(|v| v.0).collect();
    images.sort_by_key(Label::code);
    images.dedup();
    if images.len() != best.len() {
        return None;
    }
    let agree: usize = best.values().map(|v| v.1).sum();
    Some(agree as f64 / total as f64)
}

/// Largest `n <= n_max` for which rotating the grid by `2 pi / n` reproduces
/// the labels up to one global permutation on at least 99% of interior
/// pixels. Pixels on a label boundary are excluded.
pub fn grid_symmetry_order(grid: &BasinGrid, n_max: usize) -> Result<usize, SymmetryError> {
    let w = grid.window;
    let tol = 1e-12 * w.half_width;
    if w.center.norm() > tol || (w.half_width - w.half_height).abs() > tol || grid.width != grid.height {
        return Err(SymmetryError::WindowNotCentered);
    }
    Ok((2..=n_max).rev().find(|&n| grid_rotation_agreement(grid, n).is_some_and(|a| a >= GRID_AGREEMENT)).unwrap_or(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evidence {
    CoefficientIdentity,
    GridInvariance,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetryGroupEstimate {
    pub order: usize,
    pub evidence: Evidence,
    pub containment_checked: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    pub sigma_p_order: usize,
    pub map_order: usize,
    pub grid_order: usize,
    /// All three orders coincide.
    pub equality: bool,
    pub estimate: SymmetryGroupEstimate,
}

/// Compares the rotation order of `p` with those of its Halley map (by
/// coefficients and on a `resolution x resolution` basin grid) and checks
/// that the former divides both.
pub fn symmetry_report(p: &Polynomial, n_max: usize, resolution: usize) -> Result<SymmetryReport, SymmetryError> {
    let sigma_p = polynomial_symmetry_order(p)?;
    let roots = find_roots(p)?;
    if roots.len() < 3 {
        return Err(SymmetryError::TooFewRoots(roots.len()));
    }
    let h = halley_of(p)?;
    let map_order = map_rotation_order(&h, n_max);
    let extent = 2.0 * roots.iter().map(|r| r.location.norm()).fold(1.0, f64::max);
    let targets = basin_targets(p, &h)?;
    let grid = classify_grid(&h, &targets, Window::square(extent), resolution, resolution, OrbitParams::default());
    let grid_order = grid_symmetry_order(&grid, n_max)?;
    for (other, what) in [(map_order, "map rotation order"), (grid_order, "grid rotation order")] {
        if other % sigma_p != 0 {
            return Err(SymmetryError::ContainmentViolated { sigma_p, other, what });
        }
    }
    let equality = sigma_p == map_order && map_order == grid_order;
    let estimate = SymmetryGroupEstimate {
        order: map_order.min(grid_order),
        evidence: if map_order == grid_order { Evidence::Both } else { Evidence::CoefficientIdentity },
        containment_checked: true,
    };
    Ok(SymmetryReport { sigma_p_order: sigma_p, map_order, grid_order, equality, estimate })
}

/// True when rotating by `2 pi / n` about the origin maps `z` into the set
/// of fixed points of `r` (a cheap consistency check used in reports).
pub fn rotation_preserves_fixed_points(r: &RationalMap, n: usize) -> Result<bool, MapError> {
    let lambda = Complex64::from_polar(1.0, TAU / n as f64);
    let fixed = crate::ratmap::fixed_points(r)?;
    Ok(fixed.iter().all(|z| match z {
        SpherePoint::Infinity => true,
        SpherePoint::Finite(z) => r.is_fixed(SpherePoint::Finite(lambda * z)),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_times(n: usize) -> Polynomial {
        let mut coeffs = vec![0.0; n + 2];
        coeffs[1] = -1.0;
        coeffs[n + 1] = 1.0;
        Polynomial::from_real(&coeffs)
    }

    fn grid_of(p: &Polynomial, res: usize) -> BasinGrid {
        let h = halley_of(p).unwrap();
        let t = basin_targets(p, &h).unwrap();
        classify_grid(&h, &t, Window::square(2.0), res, res, OrbitParams::default())
    }

    #[test]
    fn polynomial_orders() {
        assert_eq!(polynomial_symmetry_order(&z_times(2)).unwrap(), 2);
        assert_eq!(polynomial_symmetry_order(&z_times(3)).unwrap(), 3);
        assert_eq!(polynomial_symmetry_order(&Polynomial::from_real(&[0.0, 0.0, -1.0, 0.0, 1.0])).unwrap(), 2);
        assert_eq!(polynomial_symmetry_order(&Polynomial::from_real(&[0.0, 1.0, 1.0])), Err(PolyError::NotNormalized));
    }

    #[test]
    fn map_orders() {
        let h = |p: &Polynomial| halley_of(p).unwrap();
        assert_eq!(map_rotation_order(&h(&Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0])), 12), 3);
        assert_eq!(map_rotation_order(&h(&z_times(7)), 12), 7);
        assert_eq!(map_rotation_order(&h(&Polynomial::from_real(&[0.0, 1.0, -2.0, 1.0])), 12), 1);
    }

    #[test]
    fn grid_orders() {
        assert_eq!(grid_symmetry_order(&grid_of(&z_times(2), 121), 8).unwrap(), 2);
        assert_eq!(grid_symmetry_order(&grid_of(&z_times(3), 121), 8).unwrap(), 3);
        // Generic real b in z^3 + 6z + b.
        assert_eq!(grid_symmetry_order(&grid_of(&Polynomial::from_real(&[2.5, 6.0, 0.0, 1.0]), 121), 8).unwrap(), 1);
    }

    #[test]
    fn off_centre_window_is_rejected() {
        let p = z_times(2);
        let h = halley_of(&p).unwrap();
        let t = basin_targets(&p, &h).unwrap();
        let w = Window::new(Complex64::new(0.5, 0.0), 1.0, 1.0).unwrap();
        let grid = classify_grid(&h, &t, w, 10, 10, OrbitParams::default());
        assert_eq!(grid_symmetry_order(&grid, 4), Err(SymmetryError::WindowNotCentered));
    }

    #[test]
    fn reports() {
        let rep = symmetry_report(&z_times(2), 8, 101).unwrap();
        assert_eq!((rep.sigma_p_order, rep.map_order, rep.grid_order, rep.equality), (2, 2, 2, true));
        let rep = symmetry_report(&z_times(7), 10, 151).unwrap();
        assert!(rep.equality && rep.sigma_p_order == 7);
        let two_roots = Polynomial::from_real(&[1.0, 0.0, -2.0, 0.0, 1.0]);
        assert_eq!(symmetry_report(&two_roots, 8, 21), Err(SymmetryError::TooFewRoots(2)));
    }

    #[test]
    fn rotations_permute_fixed_points() {
        let h = halley_of(&z_times(3)).unwrap();
        assert!(rotation_preserves_fixed_points(&h, 3).unwrap());
        assert!(!rotation_preserves_fixed_points(&h, 4).unwrap());
    }
}
