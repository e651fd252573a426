use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MapError, RationalMap, SpherePoint};
use crate::polycore::{find_roots, AffineMap, Polynomial, RootCluster};

/// Two roots closer than this (relative to `max(1, |r|)`) are the same point.
pub const MATCH_TOLERANCE: f64 = 1e-6;

pub(crate) fn same_point(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= MATCH_TOLERANCE * a.norm().max(b.norm()).max(1.0)
}

/// Roots of `p` and of `p'`, checking that `p` has at least two distinct roots.
pub(crate) fn roots_and_critical(p: &Polynomial) -> Result<(Vec<RootCluster>, Vec<RootCluster>), MapError> {
    if p.is_zero() {
        return Err(MapError::DegenerateMap { distinct_roots: 0 });
    }
    if p.deg() == 0 {
        return Err(MapError::DegenerateMap { distinct_roots: 0 });
    }
    let roots = find_roots(p)?;
    if roots.len() < 2 {
        return Err(MapError::DegenerateMap { distinct_roots: roots.len() });
    }
    let crit = find_roots(&p.derivative())?;
    Ok((roots, crit))
}

fn reduce_for(p: &Polynomial, num: Polynomial, den: Polynomial) -> Result<RationalMap, MapError> {
    let (roots, crit) = roots_and_critical(p)?;
    let candidates: Vec<Complex64> = roots.iter().chain(crit.iter()).map(|r| r.location).collect();
    RationalMap::reduced_with_candidates(num, den, &candidates)
}

/// Halley's method `z - 2 p p' / (2 p'^2 - p p'')` as a reduced rational map.
pub fn halley_of(p: &Polynomial) -> Result<RationalMap, MapError> {
    let p1 = p.derivative();
    let p2 = p1.derivative();
    let den = &(&p1 * &p1).scale(2.0.into()) - &(p * &p2);
    let num = &(&den * &Polynomial::identity()) - &(p * &p1).scale(2.0.into());
    reduce_for(p, num, den)
}

/// König's method of order `n`, `z + (n-1) (1/p)^{[n-2]} / (1/p)^{[n-1]}`.
///
/// With `(1/p)^{[k]} = q_k / p^{k+1}` the numerators follow
/// `q_0 = 1`, `q_{k+1} = q_k' p - (k+1) q_k p'`.
pub fn konig_of(p: &Polynomial, n: usize) -> Result<RationalMap, MapError> {
    if n < 2 {
        return Err(MapError::InvalidOrder(n));
    }
    let p1 = p.derivative();
    let mut q = vec![Polynomial::one()];
    for k in 0..n - 1 {
        let next = &(&q[k].derivative() * p) - &(&q[k] * &p1).scale(Complex64::new((k + 1) as f64, 0.0));
        q.push(next);
    }
    let den = q[n - 1].clone();
    let num = &(&den * &Polynomial::identity()) + &(&q[n - 2] * p).scale(Complex64::new((n - 1) as f64, 0.0));
    reduce_for(p, num, den)
}

/// Chebyshev–Halley family
/// `z - [1 + p p'' / (2 (p'^2 - sigma p p''))] p / p'`.
pub fn chebyshev_halley_of(p: &Polynomial, sigma: Complex64) -> Result<RationalMap, MapError> {
    let p1 = p.derivative();
    let p2 = p1.derivative();
    let pp2 = p * &p2;
    let p1sq = &p1 * &p1;
    let inner = &p1sq - &pp2.scale(sigma);
    let den = (&p1 * &inner).scale(2.0.into());
    let bracket = &p1sq.scale(2.0.into()) + &pp2.scale(Complex64::new(1.0, 0.0) - sigma * 2.0);
    let num = &(&den * &Polynomial::identity()) - &(p * &bracket);
    reduce_for(p, num, den)
}

/// Root and critical-point counts that fix the degree of Halley's map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeCensus {
    /// Distinct roots of `p`.
    pub distinct_roots: usize,
    /// Multiple critical points of `p` that are not roots.
    pub special_critical: usize,
    /// Total multiplicity (as roots of `p'`) of the special critical points.
    pub special_multiplicity: usize,
    pub predicted_degree: usize,
}

pub fn degree_census(p: &Polynomial) -> Result<DegreeCensus, MapError> {
    let (roots, crit) = roots_and_critical(p)?;
    let special: Vec<&RootCluster> = crit
        .iter()
        .filter(|c| c.multiplicity >= 2 && !roots.iter().any(|r| same_point(r.location, c.location)))
        .collect();
    let n = roots.len();
    let s = special.len();
    let b: usize = special.iter().map(|c| c.multiplicity).sum();
    Ok(DegreeCensus {
        distinct_roots: n,
        special_critical: s,
        special_multiplicity: b,
        predicted_degree: 2 * n + s - b - 1,
    })
}

/// Checks `H_{c p o T} = T^{-1} o H_p o T` at `samples` seeded random points.
pub fn scaling_check(p: &Polynomial, t: &AffineMap, c: Complex64, samples: usize, seed: u64) -> Result<bool, MapError> {
    if c.norm() == 0.0 {
        return Err(MapError::ZeroScale);
    }
    let q = p.compose_affine(t, c);
    let hp = halley_of(p)?;
    let hq = halley_of(&q)?;
    let radius = 2.0 * (1.0 + find_roots(&q)?.iter().map(|r| r.location.norm()).fold(0.0, f64::max));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let z = Complex64::new(rng.random_range(-radius..radius), rng.random_range(-radius..radius));
        let lhs = hq.eval(z)?;
        let rhs = match hp.eval(t.apply(z))? {
            SpherePoint::Finite(w) => SpherePoint::Finite(t.apply_inverse(w)),
            SpherePoint::Infinity => SpherePoint::Infinity,
        };
        if lhs.relative_error(&rhs) > 1e-8 {
            return Ok(false);
        }
    }
    Ok(true)
}
