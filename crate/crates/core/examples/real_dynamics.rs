//! Monotone convergence on real intervals and a real-axis profile as CSV.

use halley::dynamics::{interval_convergence_check, real_axis_profile, write_profile_csv};
use halley::{halley_of, Polynomial};

fn main() {
    // z (z^2 - 1)
    let h = halley_of(&Polynomial::from_real(&[0.0, -1.0, 0.0, 1.0])).unwrap();
    let s = 1.0 / 3f64.sqrt();
    for (a, b) in [(s, 1.0), (-1.0, -s), (1.0, f64::INFINITY)] {
        let rep = interval_convergence_check(&h, a, b, 20).unwrap();
        println!("({a:.4}, {b}) -> {:?}, verified {}", rep.predicted_limit, rep.verified);
    }

    // z (z^7 - 1) has a real pole on the negative axis.
    let mut c = vec![0.0; 9];
    c[1] = -1.0;
    c[8] = 1.0;
    let h7 = halley_of(&Polynomial::from_real(&c)).unwrap();
    let rep = interval_convergence_check(&h7, f64::NEG_INFINITY, 0.0, 20).unwrap();
    println!("(-inf, 0) for z(z^7-1): {:?}", rep.obstruction);

    let rows = real_axis_profile(&h7, -1.5, 1.5, 13).unwrap();
    write_profile_csv(&rows, std::io::stdout()).unwrap();
}
