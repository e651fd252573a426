//! Halley, König and Chebyshev-Halley maps of one polynomial, and the degree
//! of the Halley map against the root/critical-point census.

use halley::ratmap::{chebyshev_halley_of, degree_census, halley_of, konig_of};
use halley::{Complex64, Polynomial};

fn main() {
    // z^2 (z^2 - 1)
    let p = Polynomial::from_real(&[0.0, 0.0, -1.0, 0.0, 1.0]);
    let h = halley_of(&p).unwrap();
    let show = |c: &[Complex64]| c.iter().map(|a| format!("{:.4}", a.re)).collect::<Vec<_>>().join(", ");
    println!("H_p numerator   {}", show(h.num().coeffs()));
    println!("H_p denominator {}", show(h.den().coeffs()));
    let census = degree_census(&p).unwrap();
    println!("degree {} (census predicts {})", h.degree(), census.predicted_degree);

    let z = Complex64::new(0.3, 0.7);
    println!("H_p(z)            = {}", h.eval(z).unwrap());
    println!("Konig order 3     = {}", konig_of(&p, 3).unwrap().eval(z).unwrap());
    println!("Chebyshev s = 1/2 = {}", chebyshev_halley_of(&p, Complex64::new(0.5, 0.0)).unwrap().eval(z).unwrap());
    println!("Konig order 4     = {}", konig_of(&p, 4).unwrap().eval(z).unwrap());
}
