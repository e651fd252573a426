//! Fixed points of a Halley map, their multipliers and where they come from.
//!
//! Every fixed point of `H_p` is a root of `p`, a critical point of `p` that
//! is not a root, or infinity, and each kind has a closed-form multiplier:
//! `(k-1)/(k+1)` at a root of multiplicity `k`, `1 + 2/l` at a critical point
//! of multiplicity `l`, and `(d+1)/(d-1)` at infinity for `d = deg p`.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::polycore::{find_roots, PolyError, Polynomial, RootCluster};
use crate::ratmap::{fixed_points, multiplier_at, MapError, RationalMap, SpherePoint, MATCH_TOLERANCE};

/// `|lambda|` below this is superattracting.
pub const SUPERATTRACTING_TOLERANCE: f64 = 1e-8;
/// Half-width of the band `| |lambda| - 1 | <= tol` treated as indifferent.
pub const INDIFFERENT_TOLERANCE: f64 = 1e-6;
/// Largest measured-vs-predicted multiplier gap accepted.
pub const MULTIPLIER_TOLERANCE: f64 = 1e-6;
/// Largest `q` tried when testing `lambda^q = 1`.
pub const MAX_ROTATION_DENOMINATOR: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPointClass {
    Superattracting,
    Attracting,
    Repelling,
    /// `lambda^q = 1` for the smallest such `q`.
    RationallyIndifferent {
        q: u32,
    },
    IrrationallyIndifferent,
}

impl FixedPointClass {
    pub fn of(lambda: Complex64) -> Self {
        let m = lambda.norm();
        if m < SUPERATTRACTING_TOLERANCE {
            FixedPointClass::Superattracting
        } else if m < 1.0 - INDIFFERENT_TOLERANCE {
            FixedPointClass::Attracting
        } else if m > 1.0 + INDIFFERENT_TOLERANCE {
            FixedPointClass::Repelling
        } else {
            (1..=MAX_ROTATION_DENOMINATOR)
                .find(|&q| (lambda.powu(q) - 1.0).norm() <= INDIFFERENT_TOLERANCE * q as f64)
                .map_or(FixedPointClass::IrrationallyIndifferent, |q| FixedPointClass::RationallyIndifferent { q })
        }
    }

    pub fn is_attracting(&self) -> bool {
        matches!(self, FixedPointClass::Superattracting | FixedPointClass::Attracting)
    }
}

impl fmt::Display for FixedPointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedPointClass::Superattracting => write!(f, "superattracting"),
            FixedPointClass::Attracting => write!(f, "attracting"),
            FixedPointClass::Repelling => write!(f, "repelling"),
            FixedPointClass::RationallyIndifferent { q } => write!(f, "rationally-indifferent({q})"),
            FixedPointClass::IrrationallyIndifferent => write!(f, "irrationally-indifferent"),
        }
    }
}

/// What a fixed point of `H_p` is in terms of `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// A root of `p` of the given multiplicity.
    RootOfP(usize),
    /// A critical point of `p` that is not a root, with its multiplicity as a
    /// root of `p'`.
    SpecialCritical(usize),
    Infinity,
    Other,
}

impl Origin {
    /// Closed-form multiplier of a Halley fixed point of this origin, for
    /// `deg p = d`.
    pub fn predicted_multiplier(&self, d: usize) -> Option<Complex64> {
        let v = match *self {
            Origin::RootOfP(k) => (k as f64 - 1.0) / (k as f64 + 1.0),
            Origin::SpecialCritical(l) => 1.0 + 2.0 / l as f64,
            Origin::Infinity => (d as f64 + 1.0) / (d as f64 - 1.0),
            Origin::Other => return None,
        };
        Some(Complex64::new(v, 0.0))
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::RootOfP(k) => write!(f, "root(k={k})"),
            Origin::SpecialCritical(l) => write!(f, "critical(l={l})"),
            Origin::Infinity => write!(f, "infinity"),
            Origin::Other => write!(f, "other"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointRecord {
    pub location: SpherePoint,
    pub multiplier: Complex64,
    pub class: FixedPointClass,
    pub origin: Origin,
    /// Closed-form multiplier for the origin, when there is one.
    pub predicted: Option<Complex64>,
}

impl FixedPointRecord {
    pub fn mismatch(&self) -> Option<f64> {
        self.predicted.map(|p| (p - self.multiplier).norm())
    }
}

impl fmt::Display for FixedPointRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} lambda={} {} {}", self.location, self.multiplier, self.class, self.origin)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("multiplier does not match its predicted value: {0}")]
    MultiplierMismatch(Box<FixedPointRecord>),
    #[error("fixed point {point} is within matching distance of several roots/critical points")]
    AmbiguousMatch { point: SpherePoint },
}

impl From<PolyError> for ClassifyError {
    fn from(e: PolyError) -> Self {
        ClassifyError::Map(e.into())
    }
}

/// Fixed points of an arbitrary map with multipliers and classes; the origin
/// is left as [`Origin::Other`].
pub fn fixed_point_records(r: &RationalMap) -> Result<Vec<FixedPointRecord>, MapError> {
    fixed_points(r)?
        .into_iter()
        .map(|z| {
            let lambda = multiplier_at(r, z)?;
            Ok(FixedPointRecord {
                location: z,
                multiplier: lambda,
                class: FixedPointClass::of(lambda),
                origin: if z.is_infinite() { Origin::Infinity } else { Origin::Other },
                predicted: None,
            })
        })
        .collect()
}

fn near(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < MATCH_TOLERANCE * a.norm().max(b.norm()).max(1.0)
}

fn origin_of(z: Complex64, roots: &[RootCluster], crit: &[RootCluster]) -> Result<Origin, ClassifyError> {
    let mut hits = roots.iter().filter(|r| near(r.location, z)).map(|r| Origin::RootOfP(r.multiplicity)).chain(
        crit.iter()
            .filter(|c| near(c.location, z) && !roots.iter().any(|r| near(r.location, c.location)))
            .map(|c| Origin::SpecialCritical(c.multiplicity)),
    );
    match (hits.next(), hits.next()) {
        (None, _) => Ok(Origin::Other),
        (Some(o), None) => Ok(o),
        (Some(_), Some(_)) => Err(ClassifyError::AmbiguousMatch { point: SpherePoint::Finite(z) }),
    }
}

/// One record per fixed point of `r = halley_of(p)`, with the origin found
/// by matching against the roots of `p` and `p'` and the measured multiplier
/// checked against its closed form.
pub fn classify_fixed_points(p: &Polynomial, r: &RationalMap) -> Result<Vec<FixedPointRecord>, ClassifyError> {
    let roots = find_roots(p)?;
    let crit = if p.deg() >= 2 { find_roots(&p.derivative())? } else { Vec::new() };
    let d = p.deg();
    let mut out = Vec::new();
    for rec in fixed_point_records(r)? {
        let origin = match rec.location {
            SpherePoint::Infinity => Origin::Infinity,
            SpherePoint::Finite(z) => origin_of(z, &roots, &crit)?,
        };
        let rec = FixedPointRecord { origin, predicted: origin.predicted_multiplier(d), ..rec };
        match rec.mismatch() {
            Some(gap) if gap <= MULTIPLIER_TOLERANCE => out.push(rec),
            _ => return Err(ClassifyError::MultiplierMismatch(Box::new(rec))),
        }
    }
    Ok(out)
}

/// Fixed points that are not roots of `p`, infinity excluded.
pub fn extraneous_fixed_points(records: &[FixedPointRecord]) -> Vec<FixedPointRecord> {
    records.iter().filter(|r| matches!(r.origin, Origin::SpecialCritical(_))).copied().collect()
}
