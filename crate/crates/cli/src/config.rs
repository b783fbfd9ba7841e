//! Run configuration: a JSON document whose fields mirror the command-line
//! flags. Flags override values read from `--config`.

use std::path::{Path, PathBuf};

use boolezeta_core::dynamics::{linear_checkpoints, log_checkpoints, StartDistribution, TransformParams};
use boolezeta_core::special::{parse_complex, TargetFunction};
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    Log,
    Linear,
}

/// A point `s`, written `"re,im"` (or any complex literal such as `"0.5+14i"`)
/// or as a two-element array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Pair([f64; 2]),
    Text(String),
}

impl Point {
    pub fn resolve(&self) -> Result<Complex64, Failure> {
        match self {
            Point::Pair([re, im]) => Ok(Complex64::new(*re, *im)),
            Point::Text(t) => parse_point(t),
        }
    }
}

pub fn parse_point(text: &str) -> Result<Complex64, Failure> {
    let bad = || Failure::Usage(format!("cannot read s = {text:?}; expected \"re,im\""));
    match text.split_once(',') {
        Some((re, im)) => {
            let re = re.trim().parse::<f64>().map_err(|_| bad())?;
            let im = im.trim().parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, im))
        }
        None => parse_complex(text).ok_or_else(bad),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeds(pub Vec<u64>);

fn parse_seeds(text: &str) -> Result<Seeds, String> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| format!("bad seed {t:?}")))
        .collect::<Result<_, _>>()
        .map(Seeds)
}

/// Fields of a `--config` file. All optional; anything unset falls back to
/// the flag, then to the command default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub target: Option<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub s: Option<Vec<Point>>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub seeds: Option<Vec<u64>>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub x0: Option<f64>,
    pub start: Option<StartDistribution>,
    pub l: Option<Vec<u32>>,
    pub n_max: Option<u32>,
    pub k_max: Option<u32>,
    pub radius: Option<f64>,
    pub checkpoints: Option<Schedule>,
    pub per_decade: Option<usize>,
    pub checkpoint_step: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    /// Every field set in `flags` replaces the one here.
    pub fn overlay(self, flags: RunConfig) -> RunConfig {
        RunConfig {
            target: flags.target.or(self.target),
            alpha: flags.alpha.or(self.alpha),
            beta: flags.beta.or(self.beta),
            s: flags.s.or(self.s),
            n: flags.n.or(self.n),
            seeds: flags.seeds.or(self.seeds),
            tol: flags.tol.or(self.tol),
            out: flags.out.or(self.out),
            format: flags.format.or(self.format),
            x0: flags.x0.or(self.x0),
            start: flags.start.or(self.start),
            l: flags.l.or(self.l),
            n_max: flags.n_max.or(self.n_max),
            k_max: flags.k_max.or(self.k_max),
            radius: flags.radius.or(self.radius),
            checkpoints: flags.checkpoints.or(self.checkpoints),
            per_decade: flags.per_decade.or(self.per_decade),
            checkpoint_step: flags.checkpoint_step.or(self.checkpoint_step),
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Target spec, e.g. "zeta:k=1", "hurwitz:a=1/3", "L:q=4,index=1", "dedekind:d=-4", "const:c=1".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub target: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Evaluation point "re,im"; repeat for a grid.
    #[arg(long = "s", global = true, allow_hyphen_values = true, value_name = "RE,IM")]
    pub s: Vec<String>,
    /// Orbit length.
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    /// Comma-separated seeds; an empty list skips the ergodic column of `compare` and `mean`.
    #[arg(long, global = true, value_parser = parse_seeds)]
    pub seeds: Option<Seeds>,
    /// Quadrature tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Fixed starting point instead of a seeded uniform draw on [-10, 10].
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Comma-separated moment indices.
    #[arg(long, global = true, value_delimiter = ',')]
    pub l: Option<Vec<u32>>,
    #[arg(long, global = true)]
    pub n_max: Option<u32>,
    #[arg(long, global = true)]
    pub k_max: Option<u32>,
    /// Laurent extraction radius.
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub checkpoints: Option<Schedule>,
    #[arg(long, global = true)]
    pub per_decade: Option<usize>,
    #[arg(long, global = true)]
    pub checkpoint_step: Option<usize>,
}

impl Flags {
    pub fn resolve(&self) -> Result<RunConfig, Failure> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            target: self.target.clone(),
            alpha: self.alpha,
            beta: self.beta,
            s: (!self.s.is_empty()).then(|| self.s.iter().cloned().map(Point::Text).collect()),
            n: self.n,
            seeds: self.seeds.clone().map(|s| s.0),
            tol: self.tol,
            out: self.out.clone(),
            format: self.format,
            x0: self.x0,
            start: None,
            l: self.l.clone(),
            n_max: self.n_max,
            k_max: self.k_max,
            radius: self.radius,
            checkpoints: self.checkpoints,
            per_decade: self.per_decade,
            checkpoint_step: self.checkpoint_step,
        };
        Ok(base.overlay(flags))
    }
}

pub const DEFAULT_N: usize = 100_000;
pub const DEFAULT_TOL: f64 = 1e-10;

/// Accessors applying defaults and validation.
impl RunConfig {
    pub fn target(&self) -> Result<TargetFunction, Failure> {
        let spec = self.target.as_deref().unwrap_or("zeta");
        spec.parse().map_err(Failure::from)
    }

    pub fn params(&self) -> Result<TransformParams, Failure> {
        TransformParams::new(self.alpha.unwrap_or(1.0), self.beta.unwrap_or(0.0)).map_err(Failure::from)
    }

    pub fn points(&self, default: &[Complex64]) -> Result<Vec<Complex64>, Failure> {
        match &self.s {
            Some(list) if !list.is_empty() => list.iter().map(Point::resolve).collect(),
            _ => Ok(default.to_vec()),
        }
    }

    pub fn n(&self) -> Result<usize, Failure> {
        match self.n.unwrap_or(DEFAULT_N) {
            0 => Err(Failure::Usage("N must be at least 1".into())),
            n => Ok(n),
        }
    }

    pub fn tol(&self) -> Result<f64, Failure> {
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        if tol > 0.0 && tol.is_finite() {
            Ok(tol)
        } else {
            Err(Failure::Usage(format!("tol must be positive, got {tol}")))
        }
    }

    /// Seeds; empty lists are rejected unless `allow_empty`.
    pub fn seeds(&self, allow_empty: bool) -> Result<Vec<u64>, Failure> {
        let seeds = self.seeds.clone().unwrap_or_else(|| vec![1]);
        if seeds.is_empty() && !allow_empty {
            return Err(Failure::Usage("at least one seed is required".into()));
        }
        Ok(seeds)
    }

    pub fn start(&self) -> StartDistribution {
        match (self.x0, self.start) {
            (Some(x0), _) => StartDistribution::FixedPoint { x0 },
            (None, Some(start)) => start,
            (None, None) => StartDistribution::default(),
        }
    }

    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// Checkpoint marks up to `n`, log-spaced from `first` by default.
    pub fn checkpoint_marks(&self, first: usize, n: usize) -> Vec<usize> {
        match self.checkpoints.unwrap_or(Schedule::Log) {
            Schedule::Log => log_checkpoints(first.min(n), n, self.per_decade.unwrap_or(4).max(1)),
            Schedule::Linear => linear_checkpoints(self.checkpoint_step.unwrap_or((n / 10).max(1)), n),
        }
    }
}
