//! Job files, command implementations and the verification experiments
//! behind the `halley` binary.

mod config;
mod corpus;
mod experiments;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

pub use config::{parse_resolution, parse_window, ConfigError, JobConfig, Method};
pub use corpus::{random_corpus, CorpusEntry, MAX_MULTIPLICITY, MIN_SEPARATION};
pub use experiments::{
    run_all, run_experiment, Check, ExperimentResult, LabConfig, CORPUS_SEED, CORPUS_SIZE, EXPERIMENTS,
    REAL_CYCLE_PARAMETER, REAL_CYCLE_XI,
};

use crate::classify::{classify_fixed_points, extraneous_fixed_points, fixed_point_records, FixedPointRecord};
use crate::dynamics::{
    basin_targets, boundedness_evidence, classify_grid, free_critical_fates, real_axis_profile, write_profile_csv,
    BoundednessVerdict, Label, OrbitOutcome, OrbitParams, Window,
};
use crate::paramsearch::{
    coefficient_errors, cycle_condition_polynomial, divide_by_b_plus_7, f_polynomial, printed_sextic, roots_of_f,
    verify_cycle,
};
use crate::polycore::{find_roots, PolyError, Polynomial, DEFAULT_ROOT_SEED};
use crate::ratmap::{MapError, RationalMap, SpherePoint};
use crate::render::{write_image, ColorMap, RenderError};
use crate::symmetry::{symmetry_report, SymmetryError};

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
}

impl LabError {
    /// 2 for configuration errors, 3 for numeric failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) | LabError::UnknownExperiment(_) => 2,
            LabError::Numeric(_) => 3,
            LabError::Write { .. } | LabError::Render(_) => 1,
        }
    }
}

fn numeric(e: impl std::fmt::Display) -> LabError {
    LabError::Numeric(e.to_string())
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), LabError> {
    fs::write(path, contents).map_err(|source| LabError::Write { path: path.clone(), source })
}

fn fate_string(fate: &OrbitOutcome, targets: &[Complex64]) -> String {
    match fate {
        OrbitOutcome::ConvergedToRoot { root, iterations } => {
            format!("root,{} ({} steps)", fmt_c(targets[*root]), iterations)
        }
        OrbitOutcome::ConvergedToCycle { period, .. } => format!("cycle,period {period}"),
        OrbitOutcome::Undecided { .. } => "undecided,".to_string(),
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.10}{:+.10}i", z.re, z.im)
}

fn point_fields(p: SpherePoint) -> String {
    match p {
        SpherePoint::Finite(z) => format!("{:.12e},{:.12e}", z.re, z.im),
        SpherePoint::Infinity => "inf,inf".to_string(),
    }
}

fn fixed_point_section(out: &mut String, records: &[FixedPointRecord]) {
    out.push_str("# fixed_points\nre,im,multiplier_re,multiplier_im,multiplier_abs,class,origin\n");
    for r in records {
        let m = r.multiplier;
        let _ = writeln!(
            out,
            "{},{:.12e},{:.12e},{:.12e},{},{}",
            point_fields(r.location),
            m.re,
            m.im,
            m.norm(),
            r.class,
            r.origin
        );
    }
}

fn records_for(cfg: &JobConfig, p: &Polynomial, r: &RationalMap) -> Result<Vec<FixedPointRecord>, LabError> {
    match cfg.method {
        Method::Halley => classify_fixed_points(p, r).map_err(numeric),
        _ => fixed_point_records(r).map_err(numeric),
    }
}

/// Builds the map, classifies the basin grid, writes the image (when `out`
/// is set) and returns a CSV-sectioned summary.
pub fn cmd_render(cfg: &JobConfig) -> Result<String, LabError> {
    let p = cfg.polynomial();
    let r = cfg.method.build(&p).map_err(numeric)?;
    let clusters = find_roots(&p).map_err(numeric)?;
    let targets = basin_targets(&p, &r).map_err(numeric)?;
    let params = OrbitParams { max_iter: cfg.max_iter, capture_radius: cfg.capture_radius };
    let grid = classify_grid(&r, &targets, cfg.window, cfg.width, cfg.height, params);
    let fates = free_critical_fates(&p, &r, params).map_err(numeric)?;
    let records = records_for(cfg, &p, &r)?;

    if let Some(path) = &cfg.out {
        let cmap = ColorMap::default_for(targets.len(), cfg.shading)?;
        write_image(&grid, &cmap, path)?;
    }

    let mut out = String::new();
    out.push_str("# summary\nkey,value\n");
    let _ = writeln!(out, "method,{}", cfg.method);
    let _ = writeln!(out, "degree,{}", r.degree());
    let _ = writeln!(out, "polynomial_degree,{}", p.deg());
    let _ = writeln!(out, "distinct_roots,{}", clusters.len());
    let _ = writeln!(out, "free_critical_points,{}", fates.len());
    let _ = writeln!(out, "root_seed,{DEFAULT_ROOT_SEED}");
    let _ = writeln!(out, "resolution,{}x{}", cfg.width, cfg.height);
    let _ = writeln!(out, "max_iter,{}", cfg.max_iter);
    let _ = writeln!(out, "capture_radius,{:e}", cfg.capture_radius);
    let _ = writeln!(out, "root_labeled_fraction,{:.6}", grid.root_fraction());
    let _ = writeln!(
        out,
        "cycle_labeled_fraction,{:.6}",
        grid.count(|l| matches!(l, Label::Cycle(_))) as f64 / grid.labels.len() as f64
    );

    // Immediate basins sampled on windows of half-width h, 2h, 4h around the
    // roots.
    let h = 2.0 * clusters.iter().map(|c| c.location.norm()).fold(1.0, f64::max);
    let windows = [Window::square(h), Window::square(2.0 * h), Window::square(4.0 * h)];
    out.push_str("# roots\nre,im,multiplicity,basin_fraction,immediate_basin\n");
    for (k, (cl, t)) in clusters.iter().zip(&targets).enumerate() {
        let frac = grid.count(|l| l == Label::Root(k)) as f64 / grid.labels.len() as f64;
        let verdict = match boundedness_evidence(&r, &targets, *t, &windows, 200, params) {
            Ok(rep) if rep.verdict == BoundednessVerdict::Bounded => "bounded-evidence",
            Ok(_) => "unbounded",
            Err(_) => "unknown",
        };
        let _ = writeln!(
            out,
            "{:.12e},{:.12e},{},{:.6},{}",
            cl.location.re, cl.location.im, cl.multiplicity, frac, verdict
        );
    }
    fixed_point_section(&mut out, &records);
    out.push_str("# free_critical\nre,im,fate,detail\n");
    for (c, fate) in &fates {
        let _ = writeln!(out, "{:.12e},{:.12e},{}", c.re, c.im, fate_string(fate, &targets));
    }
    if let Some(path) = &cfg.summary {
        write_file(path, &out)?;
    }
    Ok(out)
}

/// Fixed points with their classes and origins, the extraneous ones, and
/// the rotation symmetry of the polynomial against that of its Halley map.
pub fn cmd_analyze(cfg: &JobConfig) -> Result<String, LabError> {
    let p = cfg.polynomial();
    let r = cfg.method.build(&p).map_err(numeric)?;
    let records = records_for(cfg, &p, &r)?;
    let mut out = String::new();
    out.push_str("# summary\nkey,value\n");
    let _ = writeln!(out, "method,{}", cfg.method);
    let _ = writeln!(out, "degree,{}", r.degree());
    let _ = writeln!(out, "fixed_points,{}", records.len());
    fixed_point_section(&mut out, &records);
    out.push_str("# extraneous\nre,im,multiplier_re,multiplier_im\n");
    for e in extraneous_fixed_points(&records) {
        let _ = writeln!(out, "{},{:.12e},{:.12e}", point_fields(e.location), e.multiplier.re, e.multiplier.im);
    }
    out.push_str("# symmetry\nkey,value\n");
    let resolution = cfg.width.min(cfg.height).min(400);
    match symmetry_report(&p, 16, resolution) {
        Ok(rep) => {
            let _ = writeln!(out, "polynomial_order,{}", rep.sigma_p_order);
            let _ = writeln!(out, "map_order,{}", rep.map_order);
            let _ = writeln!(out, "grid_order,{}", rep.grid_order);
            let _ = writeln!(out, "equal,{}", rep.equality);
        }
        Err(SymmetryError::TooFewRoots(n)) => {
            let _ = writeln!(out, "status,n/a: {n} distinct roots");
        }
        Err(SymmetryError::Map(MapError::Poly(PolyError::NotNormalized))) => {
            let _ = writeln!(out, "status,n/a: polynomial is not normalized");
        }
        Err(e) => return Err(numeric(e)),
    }
    if let Some(path) = &cfg.summary {
        write_file(path, &out)?;
    }
    Ok(out)
}

/// The five parameters of `z^3 + 6z + b` with a superattracting 2-cycle
/// through the critical point 1, and the checks on the cycle condition.
pub fn cmd_cycles() -> Result<String, LabError> {
    let q = cycle_condition_polynomial().map_err(numeric)?;
    let mut out = String::from("# cycles\nb_re,b_im,xi_re,xi_im,residual,multiplier_abs\n");
    for b in roots_of_f().map_err(numeric)? {
        let cand = verify_cycle(b).map_err(numeric)?;
        let xi = cand.cycle.1;
        let _ = writeln!(
            out,
            "{:.10},{:.10},{:.9},{:.9},{:.3e},{:.3e}",
            b.re,
            b.im,
            xi.re,
            xi.im,
            cand.residual,
            cand.cycle_multiplier.norm()
        );
    }
    let (quot, rem) = divide_by_b_plus_7(&q);
    let factor_ok = rem.norm() <= 1e-8 * q.max_coeff_norm()
        && coefficient_errors(&quot, &f_polynomial()).iter().all(|e| *e <= 1e-8);
    let printed = printed_sextic();
    let mismatched: Vec<String> = coefficient_errors(&q, &printed)
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 1e-8)
        .map(|(k, _)| format!("b^{k} computed {:.1} printed {:.1}", q.coeff(k).re, printed.coeff(k).re))
        .collect();
    out.push_str("# checks\ncheck,result\n");
    let _ = writeln!(out, "b_plus_7_factor,{}", if factor_ok { "PASS" } else { "FAIL" });
    let _ = writeln!(
        out,
        "printed_sextic,{}",
        if mismatched.is_empty() { "PASS".to_string() } else { format!("FAIL ({})", mismatched.join("; ")) }
    );
    out.push_str("# sextic\npower,coefficient\n");
    for (k, a) in q.coeffs().iter().enumerate() {
        let _ = writeln!(out, "{k},{:.6}", a.re);
    }
    Ok(out)
}

/// `R(x)` along the real segment covered by the window, one row per pixel
/// column.
pub fn cmd_profile(cfg: &JobConfig) -> Result<String, LabError> {
    let p = cfg.polynomial();
    let r = cfg.method.build(&p).map_err(numeric)?;
    let w = cfg.window;
    let rows = real_axis_profile(&r, w.center.re - w.half_width, w.center.re + w.half_width, cfg.width.max(2))
        .map_err(numeric)?;
    let mut buf = Vec::new();
    write_profile_csv(&rows, &mut buf).map_err(numeric)?;
    let text = String::from_utf8(buf).map_err(numeric)?;
    if let Some(path) = &cfg.out {
        write_file(path, &text)?;
    }
    Ok(text)
}

/// Runs one experiment, or all of them.
pub fn cmd_paperlab(only: Option<&str>, lab: &LabConfig) -> Result<Vec<ExperimentResult>, LabError> {
    match only {
        None => Ok(run_all(lab)),
        Some(id) => {
            let id = id.to_ascii_uppercase();
            run_experiment(&id, lab).map(|r| vec![r]).ok_or(LabError::UnknownExperiment(id))
        }
    }
}
