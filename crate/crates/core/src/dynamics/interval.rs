use std::fmt;
use std::io::{self, Write};

use num_complex::Complex64;

use super::DynamicsError;
use crate::polycore::{cauchy_bound, RootCluster};
use crate::ratmap::{critical_points, poles, MapError, RationalMap, SpherePoint};

/// Imaginary parts below this (relative to `max(1, |x|)`) count as real.
const REAL_TOLERANCE: f64 = 1e-8;
/// Fixed points closer than this (relative) to an endpoint are the endpoint.
const ENDPOINT_TOLERANCE: f64 = 1e-7;

/// Something inside an interval that breaks monotone convergence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Obstruction {
    CriticalPoint(f64),
    Pole(f64),
    FixedPoint(f64),
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::CriticalPoint(x) => write!(f, "critical point at {x}"),
            Obstruction::Pole(x) => write!(f, "pole at {x}"),
            Obstruction::FixedPoint(x) => write!(f, "fixed point at {x}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalReport {
    /// Endpoints; either may be infinite for a ray.
    pub x1: f64,
    pub x2: f64,
    pub obstruction: Option<Obstruction>,
    /// Endpoint every orbit in the interval converges to, when unobstructed.
    pub predicted_limit: Option<f64>,
    /// All sampled orbits reached the predicted limit.
    pub verified: bool,
}

fn real_points(clusters: &[RootCluster]) -> Vec<f64> {
    clusters
        .iter()
        .filter(|c| c.location.im.abs() <= REAL_TOLERANCE * c.location.re.abs().max(1.0))
        .map(|c| c.location.re)
        .collect()
}

/// Real poles of `r` in `[a, b]`, ascending.
pub fn real_poles(r: &RationalMap, a: f64, b: f64) -> Result<Vec<f64>, MapError> {
    let mut out: Vec<f64> = real_points(&poles(r)?).into_iter().filter(|x| *x >= a && *x <= b).collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn real_value(r: &RationalMap, x: f64) -> Option<f64> {
    match r.eval(Complex64::new(x, 0.0)) {
        Ok(SpherePoint::Finite(w)) => Some(w.re),
        _ => None,
    }
}

fn check_endpoint(r: &RationalMap, x: f64) -> Result<(), DynamicsError> {
    if x.is_infinite() {
        return if r.fixes_infinity() { Ok(()) } else { Err(DynamicsError::NotFixed(x)) };
    }
    match real_value(r, x) {
        Some(v) if (v - x).abs() <= ENDPOINT_TOLERANCE * x.abs().max(1.0) => Ok(()),
        _ => Err(DynamicsError::NotFixed(x)),
    }
}

/// Checks that on `(x1, x2)` the real map `r` has no critical point, pole or
/// fixed point, in which case every orbit is monotone and converges to `x1`
/// when `r(x) < x` and to `x2` when `r(x) > x`. Rays are given with an
/// infinite endpoint. The prediction is verified by iterating `samples`
/// points spread over the interval.
pub fn interval_convergence_check(
    r: &RationalMap,
    x1: f64,
    x2: f64,
    samples: usize,
) -> Result<IntervalReport, DynamicsError> {
    if !r.has_real_coeffs() {
        return Err(DynamicsError::NotReal);
    }
    if x1.is_nan() || x2.is_nan() || x1 >= x2 || (x1.is_infinite() && x2.is_infinite()) {
        return Err(DynamicsError::InvalidInterval(x1, x2));
    }
    check_endpoint(r, x1)?;
    check_endpoint(r, x2)?;

    let strictly_inside = |x: &f64| {
        let margin = |e: f64| ENDPOINT_TOLERANCE * e.abs().max(1.0);
        (x1.is_infinite() || *x > x1 + margin(x1)) && (x2.is_infinite() || *x < x2 - margin(x2))
    };
    let mut found: Vec<Obstruction> = Vec::new();
    found.extend(real_points(&poles(r)?).into_iter().filter(strictly_inside).map(Obstruction::Pole));
    found.extend(real_points(&critical_points(r)?).into_iter().filter(strictly_inside).map(Obstruction::CriticalPoint));
    found.extend(
        real_points(&r.finite_fixed_point_clusters()?).into_iter().filter(strictly_inside).map(Obstruction::FixedPoint),
    );
    if let Some(&first) = found.first() {
        return Ok(IntervalReport { x1, x2, obstruction: Some(first), predicted_limit: None, verified: false });
    }

    // Sample points: evenly spread for a bounded interval; for a ray, out to
    // past every finite feature of the map.
    let reach = {
        let monic = |p: &crate::polycore::Polynomial| p.scale(p.leading().inv());
        let mut b = 1.0f64;
        for p in [r.num(), r.den()] {
            if p.deg() > 0 {
                b = b.max(cauchy_bound(&monic(p)));
            }
        }
        4.0 * b
    };
    let (lo, hi) = match (x1.is_finite(), x2.is_finite()) {
        (true, true) => (x1, x2),
        (true, false) => (x1, x1.abs().max(reach) * 2.0 + x1.abs()),
        (false, true) => (-(x2.abs().max(reach) * 2.0 + x2.abs()), x2),
        (false, false) => unreachable!(),
    };
    let points: Vec<f64> =
        (1..=samples.max(1)).map(|k| lo + (hi - lo) * k as f64 / (samples.max(1) + 1) as f64).collect();
    let mid = points[points.len() / 2];
    let value = real_value(r, mid).ok_or(DynamicsError::Map(MapError::Indeterminate))?;
    let limit = if value > mid { x2 } else { x1 };

    let verified = points.iter().all(|&x0| {
        let mut x = x0;
        for _ in 0..super::DEFAULT_MAX_ITER {
            match real_value(r, x) {
                Some(v) => x = v,
                None => return false,
            }
            if limit.is_finite() && (x - limit).abs() <= 1e-9 * limit.abs().max(1.0) {
                return true;
            }
        }
        limit.is_infinite() && x.abs() > 1e12
    });
    Ok(IntervalReport { x1, x2, obstruction: None, predicted_limit: Some(limit), verified })
}

/// One sample of a real-axis profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileRow {
    pub x: f64,
    /// `R(x)`, or `None` at a pole.
    pub value: Option<f64>,
    /// A real pole lies in `(previous x, x]`.
    pub pole: bool,
}

impl ProfileRow {
    pub fn minus_x(&self) -> Option<f64> {
        self.value.map(|v| v - self.x)
    }
}

/// `R(x)` at `samples` evenly spaced points of `[x_min, x_max]`, with each
/// real pole flagged on the first sample at or after it.
pub fn real_axis_profile(
    r: &RationalMap,
    x_min: f64,
    x_max: f64,
    samples: usize,
) -> Result<Vec<ProfileRow>, DynamicsError> {
    if !r.has_real_coeffs() {
        return Err(DynamicsError::NotReal);
    }
    if x_min.partial_cmp(&x_max) != Some(std::cmp::Ordering::Less) || samples < 2 {
        return Err(DynamicsError::InvalidInterval(x_min, x_max));
    }
    let poles = real_poles(r, x_min, x_max)?;
    let step = (x_max - x_min) / (samples - 1) as f64;
    let mut rows = Vec::with_capacity(samples);
    let mut next_pole = 0;
    for k in 0..samples {
        let x = if k + 1 == samples { x_max } else { x_min + step * k as f64 };
        let mut pole = false;
        while next_pole < poles.len() && poles[next_pole] <= x {
            pole = true;
            next_pole += 1;
        }
        let value = real_value(r, x).filter(|v| v.is_finite());
        rows.push(ProfileRow { x, value, pole });
    }
    Ok(rows)
}

/// Profile of `y -> -i R(i y)`, the map restricted to the imaginary axis in
/// the coordinate `z = i y`.
pub fn imaginary_axis_profile(
    r: &RationalMap,
    y_min: f64,
    y_max: f64,
    samples: usize,
) -> Result<Vec<ProfileRow>, DynamicsError> {
    real_axis_profile(&r.rotate_conjugate(Complex64::i()), y_min, y_max, samples)
}

/// CSV with columns `x,Hx,Hx_minus_x,pole_flag`; values at poles are empty.
pub fn write_profile_csv(rows: &[ProfileRow], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "x,Hx,Hx_minus_x,pole_flag")?;
    let field = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:.17e}"));
    for row in rows {
        writeln!(out, "{:.17e},{},{},{}", row.x, field(row.value), field(row.minus_x()), u8::from(row.pole))?;
    }
    Ok(())
}
