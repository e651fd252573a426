//! Seeded random polynomials with controlled root structure.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polycore::{Polynomial, RootCluster};

/// Roots are drawn from the disc of this radius.
const ROOT_RADIUS: f64 = 2.0;
/// Minimum distance between distinct roots.
pub const MIN_SEPARATION: f64 = 0.5;
pub const MAX_MULTIPLICITY: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub roots: Vec<RootCluster>,
    pub poly: Polynomial,
}

fn multiplicities(rng: &mut ChaCha8Rng, degree: usize) -> Vec<usize> {
    loop {
        let mut left = degree;
        let mut out = Vec::new();
        while left > 0 {
            let m = if rng.random_bool(0.6) { 1 } else { rng.random_range(2..=MAX_MULTIPLICITY) }.min(left);
            out.push(m);
            left -= m;
        }
        if out.len() >= 2 {
            return out;
        }
    }
}

/// `n` polynomials of degree 3 to 6, each with at least two distinct roots,
/// multiplicities up to 3, distinct roots at least [`MIN_SEPARATION`] apart,
/// and a random nonzero leading coefficient.
pub fn random_corpus(n: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let degree = rng.random_range(3..=6);
            let mults = multiplicities(&mut rng, degree);
            let mut locs: Vec<Complex64> = Vec::new();
            while locs.len() < mults.len() {
                let z = Complex64::from_polar(
                    ROOT_RADIUS * rng.random::<f64>().sqrt(),
                    rng.random_range(0.0..std::f64::consts::TAU),
                );
                if locs.iter().all(|w| (w - z).norm() >= MIN_SEPARATION) {
                    locs.push(z);
                }
            }
            let roots: Vec<RootCluster> = locs.iter().zip(&mults).map(|(&z, &m)| RootCluster::new(z, m)).collect();
            let pairs: Vec<(Complex64, usize)> = roots.iter().map(|r| (r.location, r.multiplicity)).collect();
            let lead = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..std::f64::consts::TAU));
            CorpusEntry { roots, poly: Polynomial::from_roots(&pairs, lead) }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let corpus = random_corpus(50, 7);
        assert_eq!(corpus, random_corpus(50, 7));
        assert!(corpus.iter().any(|e| e.roots.iter().any(|r| r.multiplicity > 1)));
        assert!(corpus.iter().any(|e| e.roots.iter().all(|r| r.multiplicity == 1)));
        for e in &corpus {
            assert!((3..=6).contains(&e.poly.deg()));
            assert!(e.roots.len() >= 2);
            assert_eq!(e.roots.iter().map(|r| r.multiplicity).sum::<usize>(), e.poly.deg());
            for r in &e.roots {
                assert!(e.poly.eval(r.location).norm() < 1e-9);
            }
        }
    }
}
