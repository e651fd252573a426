//! Root-finding iterations as reduced rational maps on the Riemann sphere:
//! construction, evaluation, fixed points, multipliers, critical points and
//! poles.

mod build;
mod map;

use num_complex::Complex64;
use thiserror::Error;

use crate::polycore::{find_roots, PolyError, RootCluster};

pub(crate) use build::same_point;
pub use build::{
    chebyshev_halley_of, degree_census, halley_of, konig_of, scaling_check, DegreeCensus, MATCH_TOLERANCE,
};
pub use map::{RationalMap, SpherePoint, CANCEL_TOLERANCE, FIXED_TOLERANCE, HANDOFF_RADIUS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("polynomial has {distinct_roots} distinct root(s); the iteration map is affine")]
    DegenerateMap { distinct_roots: usize },
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("numerator and denominator vanish together (map not reduced)")]
    Indeterminate,
    #[error("{point} is not a fixed point (|R(z) - z| = {defect:e})")]
    NotFixed { point: SpherePoint, defect: f64 },
    #[error("König order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("the map is the identity")]
    IdentityMap,
    #[error("scaling constant must be nonzero")]
    ZeroScale,
}

/// All fixed points on the sphere, one entry per distinct point; infinity
/// comes last when it is fixed.
pub fn fixed_points(r: &RationalMap) -> Result<Vec<SpherePoint>, MapError> {
    let mut out: Vec<SpherePoint> =
        r.finite_fixed_point_clusters()?.iter().map(|c| SpherePoint::Finite(c.location)).collect();
    if r.fixes_infinity() {
        out.push(SpherePoint::Infinity);
    }
    Ok(out)
}

fn not_fixed(r: &RationalMap, z: SpherePoint) -> MapError {
    let defect = match z {
        SpherePoint::Finite(z) => match r.eval(z) {
            Ok(SpherePoint::Finite(w)) => (w - z).norm(),
            _ => f64::INFINITY,
        },
        SpherePoint::Infinity => f64::INFINITY,
    };
    MapError::NotFixed { point: z, defect }
}

/// Multiplier of a fixed point. At infinity this is the derivative at 0 of
/// `w -> 1 / R(1/w)`, which equals `lead(den) / lead(num)` when
/// `deg num = deg den + 1` and vanishes when the gap is larger.
pub fn multiplier_at(r: &RationalMap, z: SpherePoint) -> Result<Complex64, MapError> {
    if !r.is_fixed(z) {
        return Err(not_fixed(r, z));
    }
    match z {
        SpherePoint::Finite(z) => Ok(r.derivative_at(z)),
        SpherePoint::Infinity => {
            if r.num().deg() == r.den().deg() + 1 {
                Ok(r.den().leading() / r.num().leading())
            } else {
                Ok(Complex64::new(0.0, 0.0))
            }
        }
    }
}

/// Finite critical points: roots of `num' den - num den'` with multiplicity.
pub fn critical_points(r: &RationalMap) -> Result<Vec<RootCluster>, MapError> {
    let w = r.derivative_numerator();
    if w.is_zero() || w.deg() == 0 {
        return Ok(Vec::new());
    }
    Ok(find_roots(&w)?)
}

/// Splits critical points into those located at one of `roots` and the free ones.
pub fn partition_critical(critical: &[RootCluster], roots: &[Complex64]) -> (Vec<RootCluster>, Vec<RootCluster>) {
    critical.iter().partition(|c| roots.iter().any(|&r| same_point(r, c.location)))
}

/// Finite poles (roots of the denominator) with multiplicity.
pub fn poles(r: &RationalMap) -> Result<Vec<RootCluster>, MapError> {
    if r.den().deg() == 0 {
        return Ok(Vec::new());
    }
    Ok(find_roots(r.den())?)
}

/// Local degree at a finite fixed point: one plus its multiplicity as a
/// critical point.
pub fn local_degree_at(r: &RationalMap, z0: Complex64) -> Result<usize, MapError> {
    if !r.is_fixed(SpherePoint::Finite(z0)) {
        return Err(not_fixed(r, SpherePoint::Finite(z0)));
    }
    let crit = critical_points(r)?;
    Ok(1 + crit.iter().find(|c| same_point(c.location, z0)).map_or(0, |c| c.multiplicity))
}

#[cfg(test)]
mod tests;
