//! Basin grids to binary PPM images.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::dynamics::{BasinGrid, Label};

pub type Rgb = [u8; 3];

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("palette has {palette} colors but the grid uses root index {needed}")]
    PaletteTooSmall { palette: usize, needed: usize },
    #[error("color map colors are not distinct")]
    DuplicateColor,
    #[error("shading {0} is outside [0, 1]")]
    InvalidShading(f64),
    #[error("malformed PPM: {0}")]
    Malformed(&'static str),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColorMap {
    pub palette: Vec<Rgb>,
    pub cycle: Rgb,
    pub undecided: Rgb,
    /// Iteration-count dimming in `[0, 1]`; 0 leaves colors untouched.
    pub shading: f64,
}

impl ColorMap {
    pub fn new(palette: Vec<Rgb>, cycle: Rgb, undecided: Rgb, shading: f64) -> Result<Self, RenderError> {
        if !(0.0..=1.0).contains(&shading) {
            return Err(RenderError::InvalidShading(shading));
        }
        let mut all = palette.clone();
        all.push(cycle);
        all.push(undecided);
        for (i, a) in all.iter().enumerate() {
            if all[i + 1..].contains(a) {
                return Err(RenderError::DuplicateColor);
            }
        }
        Ok(ColorMap { palette, cycle, undecided, shading })
    }

    /// `n` well separated hues, white cycles, black undecided pixels.
    pub fn default_for(n: usize, shading: f64) -> Result<Self, RenderError> {
        let palette = (0..n).map(|k| hue(k as f64 * 0.618_033_988_749_895)).collect();
        ColorMap::new(palette, [255, 255, 255], [0, 0, 0], shading)
    }

    /// Color of a pixel with label `label` reached after `iterations` steps.
    pub fn color(&self, label: Label, iterations: u32, max_iter: usize) -> Rgb {
        let base = match label {
            Label::Root(k) => self.palette[k],
            Label::Cycle(_) => self.cycle,
            Label::Undecided => return self.undecided,
        };
        let t = if max_iter == 0 { 0.0 } else { f64::from(iterations) / max_iter as f64 };
        let factor = (1.0 - self.shading).powf(t);
        base.map(|c| (f64::from(c) * factor).round() as u8)
    }
}

/// Saturated color at hue `h` (in turns), avoiding pure black and white.
fn hue(h: f64) -> Rgb {
    let h = h.rem_euclid(1.0) * 6.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    let ch = |v: f64| (40.0 + 200.0 * v).round() as u8;
    [ch(r), ch(g), ch(b)]
}

/// Raw RGB bytes of the grid, row-major from the top-left pixel.
pub fn pixels(grid: &BasinGrid, cmap: &ColorMap) -> Result<Vec<u8>, RenderError> {
    if let Some(needed) = grid.labels.iter().filter_map(|l| if let Label::Root(k) = l { Some(*k) } else { None }).max()
    {
        if needed >= cmap.palette.len() {
            return Err(RenderError::PaletteTooSmall { palette: cmap.palette.len(), needed });
        }
    }
    let mut out = Vec::with_capacity(grid.labels.len() * 3);
    for (label, &it) in grid.labels.iter().zip(&grid.iterations) {
        out.extend_from_slice(&cmap.color(*label, it, grid.max_iter));
    }
    Ok(out)
}

pub fn encode_ppm(width: usize, height: usize, rgb: &[u8], mut out: impl Write) -> io::Result<()> {
    write!(out, "P6\n{width} {height}\n255\n")?;
    out.write_all(rgb)
}

/// Writes the grid as a P6 image.
pub fn write_image(grid: &BasinGrid, cmap: &ColorMap, path: impl AsRef<Path>) -> Result<(), RenderError> {
    let rgb = pixels(grid, cmap)?;
    let mut w = BufWriter::new(File::create(path)?);
    encode_ppm(grid.width, grid.height, &rgb, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Parses a P6 image with maxval 255 into `(width, height, rgb)`.
pub fn decode_ppm(mut input: impl Read) -> Result<(usize, usize, Vec<u8>), RenderError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut pos = 0;
    let mut token = || -> Result<String, RenderError> {
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err(RenderError::Malformed("truncated header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| !b.is_ascii_whitespace()) {
            pos += 1;
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    if token()? != "P6" {
        return Err(RenderError::Malformed("not P6"));
    }
    let mut number = || token()?.parse::<usize>().map_err(|_| RenderError::Malformed("bad number"));
    let (w, h, maxval) = (number()?, number()?, number()?);
    if maxval != 255 {
        return Err(RenderError::Malformed("maxval is not 255"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    let data = bytes.get(pos + 1..).ok_or(RenderError::Malformed("missing raster"))?;
    if data.len() != w * h * 3 {
        return Err(RenderError::Malformed("raster size mismatch"));
    }
    Ok((w, h, data.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{classify_grid, Window};
    use crate::{halley_of, Complex64, Polynomial};
    use proptest::prelude::*;

    fn tiny(labels: Vec<Label>, iterations: Vec<u32>) -> BasinGrid {
        BasinGrid {
            window: Window::square(1.0),
            width: 2,
            height: labels.len() / 2,
            labels,
            iterations,
            max_iter: 10,
            roots: vec![Complex64::new(0.0, 0.0)],
            cycles: vec![],
        }
    }

    #[test]
    fn unshaded_single_root() {
        let grid = tiny(vec![Label::Root(0); 4], vec![3, 7, 1, 10]);
        let cmap = ColorMap::new(vec![[10, 200, 30]], [255, 255, 255], [0, 0, 0], 0.0).unwrap();
        let mut buf = Vec::new();
        encode_ppm(2, 2, &pixels(&grid, &cmap).unwrap(), &mut buf).unwrap();
        assert!(buf.starts_with(b"P6\n2 2\n255\n"));
        assert_eq!(&buf[11..], [10, 200, 30].repeat(4).as_slice());
    }

    #[test]
    fn shading_dims_with_iterations() {
        let cmap = ColorMap::new(vec![[200, 200, 200]], [255, 255, 255], [0, 0, 0], 0.5).unwrap();
        assert_eq!(cmap.color(Label::Root(0), 0, 10), [200, 200, 200]);
        assert_eq!(cmap.color(Label::Root(0), 10, 10), [100, 100, 100]);
        assert_eq!(cmap.color(Label::Undecided, 10, 10), [0, 0, 0]);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            ColorMap::new(vec![[1, 2, 3], [1, 2, 3]], [9, 9, 9], [0, 0, 0], 0.0),
            Err(RenderError::DuplicateColor)
        ));
        assert!(matches!(ColorMap::new(vec![], [9, 9, 9], [0, 0, 0], 1.5), Err(RenderError::InvalidShading(_))));
        let grid = tiny(vec![Label::Root(1); 2], vec![0; 2]);
        let cmap = ColorMap::default_for(1, 0.0).unwrap();
        assert!(matches!(pixels(&grid, &cmap), Err(RenderError::PaletteTooSmall { palette: 1, needed: 1 })));
        assert!(ColorMap::default_for(12, 0.3).is_ok());
    }

    #[test]
    fn cube_roots_image_has_threefold_rotation() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let r = halley_of(&p).unwrap();
        let roots: Vec<Complex64> =
            (0..3).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0)).collect();
        let grid = classify_grid(&r, &roots, Window::square(2.0), 90, 90, Default::default());
        let rgb = pixels(&grid, &ColorMap::default_for(3, 0.0).unwrap()).unwrap();
        let distinct: std::collections::HashSet<&[u8]> = rgb.chunks(3).collect();
        assert_eq!(distinct.len(), 3);
        assert!(crate::symmetry::grid_rotation_agreement(&grid, 3).unwrap() >= 0.99);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn ppm_round_trip(w in 1usize..8, h in 1usize..8, seed in any::<u64>()) {
            let rgb: Vec<u8> = (0..w * h * 3).map(|i| (seed.wrapping_mul(i as u64 + 1) >> 7) as u8).collect();
            let mut buf = Vec::new();
            encode_ppm(w, h, &rgb, &mut buf).unwrap();
            let (w2, h2, back) = decode_ppm(buf.as_slice()).unwrap();
            prop_assert_eq!((w2, h2), (w, h));
            prop_assert_eq!(back, rgb);
        }
    }
}
