use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use halley::dynamics::Window;
use halley::lab::{self, ConfigError, JobConfig, LabConfig, LabError};

#[derive(Parser)]
#[command(name = "halley", version, about = "Basins, fixed points and cycles of Halley's method")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Job file with `coeff = re,im` lines (constant term first) and options.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (image for render, CSV for profile).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Viewing window as cx,cy,hw,hh.
    #[arg(long, global = true, value_name = "CX,CY,HW,HH", value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<Window>,
    /// Grid resolution as WxH.
    #[arg(long, global = true, value_name = "WxH", value_parser = parse_res)]
    res: Option<(usize, usize)>,
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    max_iter: Option<u64>,
    /// Seed for the random polynomial corpus and sample points.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Distance at which an orbit counts as captured by a root.
    #[arg(long, global = true, value_name = "R")]
    capture_radius: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a basin grid, write a PPM image and print a summary.
    Render,
    /// Fixed points, extraneous fixed points and rotation symmetry.
    Analyze,
    /// Superattracting 2-cycles in the family z^3 + 6z + b.
    Cycles,
    /// CSV of the map along the real segment of the window.
    Profile,
    /// Run the verification experiments.
    Paperlab {
        /// Run a single experiment, e.g. E5.
        #[arg(long, value_name = "ID")]
        only: Option<String>,
    },
}

fn parse_window(s: &str) -> Result<Window, String> {
    lab::parse_window(s).map_err(|e| e.to_string())
}

fn parse_res(s: &str) -> Result<(usize, usize), String> {
    lab::parse_resolution(s).map_err(|e| e.to_string())
}

fn job(opts: &Opts) -> Result<JobConfig, LabError> {
    let path = opts.config.as_ref().ok_or(ConfigError::MissingConfig)?;
    let mut cfg = JobConfig::load(path)?;
    if let Some(w) = opts.window {
        cfg.window = w;
    }
    if let Some((w, h)) = opts.res {
        (cfg.width, cfg.height) = (w, h);
    }
    if let Some(n) = opts.max_iter {
        cfg.max_iter = n as usize;
    }
    if let Some(r) = opts.capture_radius {
        if !(r > 0.0 && r.is_finite()) {
            return Err(ConfigError::Invalid { key: "capture_radius".into(), msg: "must be positive".into() }.into());
        }
        cfg.capture_radius = r;
    }
    if opts.out.is_some() {
        cfg.out = opts.out.clone();
    }
    Ok(cfg)
}

fn lab_config(opts: &Opts) -> LabConfig {
    let mut lab = LabConfig::default();
    if let Some((w, _)) = opts.res {
        lab.resolution = w;
    }
    if let Some(n) = opts.max_iter {
        lab.max_iter = n as usize;
    }
    if let Some(s) = opts.seed {
        lab.seed = s;
    }
    if let Some(r) = opts.capture_radius {
        lab.capture_radius = r;
    }
    lab
}

fn run(cli: &Cli) -> Result<bool, LabError> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Render => {
            let mut cfg = job(opts)?;
            cfg.out.get_or_insert_with(|| PathBuf::from("halley.ppm"));
            print!("{}", lab::cmd_render(&cfg)?);
        }
        Command::Analyze => print!("{}", lab::cmd_analyze(&job(opts)?)?),
        Command::Cycles => print!("{}", lab::cmd_cycles()?),
        Command::Profile => {
            let cfg = job(opts)?;
            let csv = lab::cmd_profile(&cfg)?;
            if cfg.out.is_none() {
                print!("{csv}");
            }
        }
        Command::Paperlab { only } => {
            let results = lab::cmd_paperlab(only.as_deref(), &lab_config(opts))?;
            for r in &results {
                println!("{r}");
            }
            let failed: Vec<&str> = results.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
            if !failed.is_empty() {
                eprintln!("failed: {}", failed.join(", "));
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
