//! The immediate basin of 0 for z (z^7 - 1) stays inside growing windows,
//! while that of 0 for z (z^2 - 1) reaches the border.

use halley::dynamics::{basin_targets, boundedness_evidence, OrbitParams, Window};
use halley::{halley_of, Complex64, Polynomial};

fn main() {
    let windows = [Window::square(2.0), Window::square(4.0), Window::square(8.0)];
    for n in [2usize, 7] {
        let mut c = vec![0.0; n + 2];
        c[1] = -1.0;
        c[n + 1] = 1.0;
        let p = Polynomial::from_real(&c);
        let h = halley_of(&p).unwrap();
        let targets = basin_targets(&p, &h).unwrap();
        let rep = boundedness_evidence(&h, &targets, Complex64::new(0.0, 0.0), &windows, 300, OrbitParams::default())
            .unwrap();
        println!("n = {n}: {:?}, areas {:?}, touches border {:?}", rep.verdict, rep.areas, rep.touches_border);
    }
}
