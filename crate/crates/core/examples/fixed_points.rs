//! Fixed points of the Halley map with multipliers, classes and origins.

use halley::classify::{classify_fixed_points, extraneous_fixed_points};
use halley::{halley_of, Polynomial};

fn main() {
    // z (z - 1)^2
    let p = Polynomial::from_real(&[0.0, 1.0, -2.0, 1.0]);
    let h = halley_of(&p).unwrap();
    let records = classify_fixed_points(&p, &h).unwrap();
    for r in &records {
        println!("{r}");
    }
    for e in extraneous_fixed_points(&records) {
        println!("extraneous: {}", e.location);
    }
}
