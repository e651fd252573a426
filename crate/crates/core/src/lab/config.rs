//! Flat `key = value` job files.
//!
//! ```text
//! # z^3 - 1, constant term first
//! coeff = -1,0
//! coeff = 0,0
//! coeff = 0,0
//! coeff = 1,0
//! method = halley          # or konig:N, chebyshev:SIGMA, chebyshev:RE,IM
//! window = 0,0,2,2         # cx,cy,hw,hh
//! res = 800x800
//! max_iter = 200
//! capture_radius = 1e-8
//! shading = 0.25
//! out = basins.ppm
//! summary = summary.csv
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use thiserror::Error;

use crate::dynamics::{Window, DEFAULT_CAPTURE_RADIUS, DEFAULT_MAX_ITER};
use crate::polycore::Polynomial;
use crate::ratmap::{chebyshev_halley_of, halley_of, konig_of, MapError, RationalMap};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("no job file given (use --config PATH)")]
    MissingConfig,
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("{key}: {msg}")]
    Invalid { key: String, msg: String },
    #[error("no `coeff` lines")]
    MissingCoefficients,
    #[error("polynomial must have degree at least 2")]
    DegreeTooLow,
}

fn invalid(key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key: key.to_string(), msg: msg.into() }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    Halley,
    Konig(usize),
    Chebyshev(Complex64),
}

impl Method {
    pub fn build(&self, p: &Polynomial) -> Result<RationalMap, MapError> {
        match *self {
            Method::Halley => halley_of(p),
            Method::Konig(n) => konig_of(p, n),
            Method::Chebyshev(s) => chebyshev_halley_of(p, s),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Halley => write!(f, "halley"),
            Method::Konig(n) => write!(f, "konig:{n}"),
            Method::Chebyshev(s) if s.im == 0.0 => write!(f, "chebyshev:{}", s.re),
            Method::Chebyshev(s) => write!(f, "chebyshev:{},{}", s.re, s.im),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let (name, arg) = s.split_once(':').map_or((s, None), |(a, b)| (a, Some(b)));
        match (name.trim(), arg) {
            ("halley", None) => Ok(Method::Halley),
            ("konig", Some(n)) => match n.trim().parse::<usize>() {
                Ok(n) if n >= 2 => Ok(Method::Konig(n)),
                _ => Err(invalid("method", "konig order must be an integer >= 2")),
            },
            ("chebyshev", Some(a)) => {
                let parts = parse_floats("method", a)?;
                match parts[..] {
                    [re] => Ok(Method::Chebyshev(Complex64::new(re, 0.0))),
                    [re, im] => Ok(Method::Chebyshev(Complex64::new(re, im))),
                    _ => Err(invalid("method", "chebyshev takes SIGMA or RE,IM")),
                }
            }
            _ => Err(invalid("method", format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    /// Coefficients, constant term first.
    pub coeffs: Vec<Complex64>,
    pub method: Method,
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub max_iter: usize,
    pub capture_radius: f64,
    pub shading: f64,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            coeffs: Vec::new(),
            method: Method::Halley,
            window: Window::square(2.0),
            width: 800,
            height: 800,
            max_iter: DEFAULT_MAX_ITER,
            capture_radius: DEFAULT_CAPTURE_RADIUS,
            shading: 0.0,
            out: None,
            summary: None,
        }
    }
}

fn parse_floats(key: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().map_err(|_| invalid(key, format!("`{}` is not a number", t.trim())))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(invalid(key, "not finite"))
            }
        })
        .collect()
}

fn parse_positive<T: std::str::FromStr + PartialOrd + Default>(key: &str, s: &str) -> Result<T, ConfigError> {
    match s.trim().parse::<T>() {
        Ok(v) if v > T::default() => Ok(v),
        _ => Err(invalid(key, format!("`{s}` is not a positive number"))),
    }
}

/// `cx,cy,hw,hh`.
pub fn parse_window(s: &str) -> Result<Window, ConfigError> {
    match parse_floats("window", s)?[..] {
        [cx, cy, hw, hh] => {
            Window::new(Complex64::new(cx, cy), hw, hh).map_err(|_| invalid("window", "half sizes must be positive"))
        }
        _ => Err(invalid("window", "expected cx,cy,hw,hh")),
    }
}

/// `WxH`.
pub fn parse_resolution(s: &str) -> Result<(usize, usize), ConfigError> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| invalid("res", "expected WxH"))?;
    Ok((parse_positive("res", w)?, parse_positive("res", h)?))
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = JobConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "coeff" => match parse_floats(key, value)?[..] {
                    [re] => cfg.coeffs.push(Complex64::new(re, 0.0)),
                    [re, im] => cfg.coeffs.push(Complex64::new(re, im)),
                    _ => return Err(invalid(key, "expected re,im")),
                },
                "method" => cfg.method = value.parse()?,
                "window" => cfg.window = parse_window(value)?,
                "res" => (cfg.width, cfg.height) = parse_resolution(value)?,
                "max_iter" => cfg.max_iter = parse_positive(key, value)?,
                "capture_radius" => cfg.capture_radius = parse_positive(key, value)?,
                "shading" => match value.parse::<f64>() {
                    Ok(s) if (0.0..=1.0).contains(&s) => cfg.shading = s,
                    _ => return Err(invalid(key, "expected a number in [0, 1]")),
                },
                "out" => cfg.out = Some(PathBuf::from(value)),
                "summary" => cfg.summary = Some(PathBuf::from(value)),
                _ => return Err(ConfigError::UnknownKey { line: i + 1, key: key.to_string() }),
            }
        }
        if cfg.coeffs.is_empty() {
            return Err(ConfigError::MissingCoefficients);
        }
        if cfg.polynomial().deg() < 2 {
            return Err(ConfigError::DegreeTooLow);
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        JobConfig::parse(&text)
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.coeffs.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let cfg = JobConfig::parse(
            "# cubic\ncoeff = -1,0\ncoeff = 0\ncoeff = 0,0\ncoeff = 1,0\nmethod = konig:4\nwindow = 0.5,0,1,2\n\
             res = 30x20\nmax_iter = 50\ncapture_radius = 1e-6\nshading = 0.5\nout = a.ppm  # image\n",
        )
        .unwrap();
        assert_eq!(cfg.polynomial().deg(), 3);
        assert_eq!(cfg.method, Method::Konig(4));
        assert_eq!(cfg.window, Window::new(Complex64::new(0.5, 0.0), 1.0, 2.0).unwrap());
        assert_eq!((cfg.width, cfg.height, cfg.max_iter), (30, 20, 50));
        assert_eq!(cfg.capture_radius, 1e-6);
        assert_eq!(cfg.out.as_deref(), Some(Path::new("a.ppm")));
    }

    #[test]
    fn methods() {
        assert_eq!("halley".parse::<Method>().unwrap(), Method::Halley);
        assert_eq!("chebyshev:0.5".parse::<Method>().unwrap(), Method::Chebyshev(Complex64::new(0.5, 0.0)));
        assert_eq!("chebyshev:1,-2".parse::<Method>().unwrap(), Method::Chebyshev(Complex64::new(1.0, -2.0)));
        assert!("konig:1".parse::<Method>().is_err());
        assert!("newton".parse::<Method>().is_err());
        for m in [Method::Halley, Method::Konig(5), Method::Chebyshev(Complex64::new(0.25, 0.0))] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(JobConfig::parse("method = halley\n"), Err(ConfigError::MissingCoefficients)));
        assert!(matches!(JobConfig::parse("coeff = 1,0\ncoeff = 1,0\n"), Err(ConfigError::DegreeTooLow)));
        assert!(matches!(JobConfig::parse("coeff 1,0\n"), Err(ConfigError::Syntax { line: 1 })));
        assert!(matches!(JobConfig::parse("colour = red\n"), Err(ConfigError::UnknownKey { .. })));
        let cubic = "coeff = 1\ncoeff = 0\ncoeff = 0\ncoeff = 1\n";
        for bad in [
            "max_iter = 0",
            "max_iter = -3",
            "res = 10",
            "res = 0x5",
            "window = 0,0,-1,1",
            "capture_radius = nan",
            "shading = 2",
        ] {
            assert!(JobConfig::parse(&format!("{cubic}{bad}\n")).is_err(), "{bad}");
        }
    }
}
