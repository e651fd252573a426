//! Parameters of z^3 + 6z + b for which {1, H_b(1)} is a superattracting
//! 2-cycle, and the orbit of the critical point 1 for the real one.

use halley::dynamics::{iterate_orbit, orbit};
use halley::paramsearch::{halley_b, roots_of_f, verify_cycle};
use halley::{Complex64, SpherePoint};

fn main() {
    for b in roots_of_f().unwrap() {
        let c = verify_cycle(b).unwrap();
        println!("b = {:.7}  xi = {:.6}  |multiplier| = {:.1e}", b, c.cycle.1, c.cycle_multiplier.norm());
    }
    let b = Complex64::new(62.5144396, 0.0);
    let h = halley_b(b).unwrap();
    let one = SpherePoint::Finite(Complex64::new(1.0, 0.0));
    for z in orbit(&h, one, 6) {
        println!("{z}");
    }
    println!("{:?}", iterate_orbit(&h, one, &[], 200, 1e-8));
}
