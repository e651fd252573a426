//! Root-finding iterations viewed as holomorphic dynamical systems.
//!
//! Halley's method, the König family and the Chebyshev–Halley family are built
//! as reduced rational maps of a complex polynomial. On top of that the crate
//! classifies fixed points, samples basins of attraction, estimates rotation
//! symmetry, and searches the cubic family `z^3 + 6z + b` for superattracting
//! 2-cycles.

pub mod classify;
pub mod dynamics;
pub mod lab;
pub mod paramsearch;
pub mod polycore;
pub mod ratmap;
pub mod render;
pub mod symmetry;

pub use num_complex::Complex64;
pub use polycore::{find_roots, AffineMap, Polynomial, RootCluster};
pub use ratmap::{halley_of, RationalMap, SpherePoint};
