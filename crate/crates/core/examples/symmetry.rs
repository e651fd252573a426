//! Rotation order of z (z^n - 1) and of its Halley map.

use halley::symmetry::symmetry_report;
use halley::Polynomial;

fn main() {
    for n in [2usize, 3, 5] {
        let mut c = vec![0.0; n + 2];
        c[1] = -1.0;
        c[n + 1] = 1.0;
        let rep = symmetry_report(&Polynomial::from_real(&c), 12, 300).unwrap();
        println!(
            "n = {n}: polynomial {}, map {}, basin grid {}, equal {}",
            rep.sigma_p_order, rep.map_order, rep.grid_order, rep.equality
        );
    }
}
