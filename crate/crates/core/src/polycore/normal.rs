use num_complex::Complex64;

use super::{PolyError, Polynomial};

const NORMAL_TOL: f64 = 1e-12;

/// `p(z) = z^alpha * p0(z^beta)` with `p0` monic and `beta` maximal.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedForm {
    pub alpha: usize,
    pub beta: usize,
    pub p0: Polynomial,
}

impl NormalizedForm {
    /// Rebuilds `z^alpha p0(z^beta)`.
    pub fn expand(&self) -> Polynomial {
        let deg = self.alpha + self.beta * self.p0.deg();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (j, &c) in self.p0.coeffs().iter().enumerate() {
            coeffs[self.alpha + j * self.beta] = c;
        }
        Polynomial::new_exact(coeffs)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Decomposes a normalized polynomial (monic, vanishing second-leading
/// coefficient). Monomials get `beta = 1` and `p0 = 1`.
pub fn normalized_form(p: &Polynomial) -> Result<NormalizedForm, PolyError> {
    let n = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    let scale = p.max_coeff_norm();
    let tol = NORMAL_TOL * scale.max(1.0);
    if (p.leading() - 1.0).norm() > NORMAL_TOL || (n >= 1 && p.coeff(n - 1).norm() > tol) {
        return Err(PolyError::NotNormalized);
    }
    let support: Vec<usize> = (0..=n).filter(|&k| p.coeff(k).norm() > tol).collect();
    let alpha = support[0];
    let beta = support.iter().skip(1).fold(0, |g, &k| gcd(g, k - alpha));
    let beta = beta.max(1);
    let p0 = Polynomial::new_exact(
        (0..=(n - alpha) / beta)
            .map(|j| {
                let c = p.coeff(alpha + j * beta);
                if c.norm() > tol {
                    c
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect(),
    );
    Ok(NormalizedForm { alpha, beta, p0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_odd() {
        let nf = normalized_form(&Polynomial::from_real(&[0.0, -1.0, 0.0, 1.0])).unwrap();
        assert_eq!((nf.alpha, nf.beta), (1, 2));
        assert_eq!(nf.p0, Polynomial::from_real(&[-1.0, 1.0]));
    }

    #[test]
    fn quartic_with_origin_root() {
        let nf = normalized_form(&Polynomial::from_real(&[0.0, -1.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!((nf.alpha, nf.beta), (1, 3));
        assert_eq!(nf.p0, Polynomial::from_real(&[-1.0, 1.0]));
        let nf2 = normalized_form(&Polynomial::from_real(&[0.0, 0.0, -1.0, 0.0, 1.0])).unwrap();
        assert_eq!((nf2.alpha, nf2.beta), (2, 2));
    }

    #[test]
    fn monomial_convention() {
        let nf = normalized_form(&Polynomial::monomial(Complex64::new(1.0, 0.0), 5)).unwrap();
        assert_eq!((nf.alpha, nf.beta), (5, 1));
        assert_eq!(nf.p0, Polynomial::one());
    }

    #[test]
    fn rejects_unnormalized() {
        assert_eq!(normalized_form(&Polynomial::from_real(&[0.0, 1.0, -2.0, 1.0])), Err(PolyError::NotNormalized));
        assert_eq!(normalized_form(&Polynomial::from_real(&[-1.0, 2.0])), Err(PolyError::NotNormalized));
    }

    #[test]
    fn expand_round_trips() {
        let p = Polynomial::from_real(&[0.0, 0.0, 3.0, 0.0, 0.0, -2.0, 0.0, 0.0, 1.0]);
        let nf = normalized_form(&p).unwrap();
        assert_eq!((nf.alpha, nf.beta), (2, 3));
        assert_eq!(nf.expand(), p);
    }
}
