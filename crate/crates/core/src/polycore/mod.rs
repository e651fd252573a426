//! Complex polynomials: evaluation, roots with multiplicities, affine
//! substitution and the `z^alpha p0(z^beta)` decomposition.

mod normal;
mod poly;
mod roots;

use thiserror::Error;

pub use normal::{normalized_form, NormalizedForm};
pub use poly::{eval_with_derivatives, AffineMap, ComplexScalar, Polynomial, TRIM_TOLERANCE};
pub use roots::{cauchy_bound, find_roots, RootCluster, RootFinder, DEFAULT_ROOT_SEED};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("the zero polynomial has no roots or degree")]
    ZeroPolynomial,
    #[error("a nonzero constant has no roots")]
    ConstantPolynomial,
    #[error("root finder did not converge after {sweeps} sweeps (relative residual {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },
    #[error("polynomial is not normalized (monic with zero second-leading coefficient)")]
    NotNormalized,
    #[error("affine map z -> a z + b needs a != 0")]
    SingularAffine,
}
