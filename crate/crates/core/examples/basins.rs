//! Basins of attraction of Halley's method for z^3 - 1, written as a PPM.
//!
//! cargo run --release --example basins -- out.ppm

use halley::dynamics::{basin_targets, classify_grid, OrbitParams, Window};
use halley::render::{write_image, ColorMap};
use halley::{halley_of, Polynomial};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| "basins.ppm".to_string());
    let p = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
    let h = halley_of(&p).unwrap();
    let targets = basin_targets(&p, &h).unwrap();
    let grid = classify_grid(&h, &targets, Window::square(2.0), 800, 800, OrbitParams::default());
    let cmap = ColorMap::default_for(targets.len(), 0.6).unwrap();
    write_image(&grid, &cmap, &path).unwrap();
    println!("wrote {path}, {:.3}% of pixels reach a root", 100.0 * grid.root_fraction());
}
