//! Roots with multiplicities of a polynomial with a triple root.

use halley::{find_roots, Complex64, Polynomial};

fn main() {
    // (z - 1)^3 (z + 2)(z - i)
    let p = Polynomial::from_roots(
        &[(Complex64::new(1.0, 0.0), 3), (Complex64::new(-2.0, 0.0), 1), (Complex64::new(0.0, 1.0), 1)],
        Complex64::new(1.0, 0.0),
    );
    for r in find_roots(&p).expect("roots") {
        println!("{:>8.5}{:+.5}i  multiplicity {}", r.location.re, r.location.im, r.multiplicity);
    }
}
