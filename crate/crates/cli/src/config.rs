//! Run configuration: file contents overlaid with command-line flags, then
//! completed with per-command defaults.

use std::path::{Path, PathBuf};

use christoffel_core::config::Grid;
use christoffel_core::measures::{parse_measure_json, MeasureFile, MeasureSource};
use christoffel_core::table::fmt_f64;
use christoffel_core::{NamedMeasure, SupportKind};
use clap::Subcommand;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 20240917;
pub const DEFAULT_OUTPUT: &str = "christoffel-output";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Moment matrix, and the zero-counting versus kernel-measure moments.
    Moments,
    /// Jacobi or Verblunsky coefficients.
    Recurrence,
    /// Kernel values along a grid by the direct sum and the CD formulas.
    Kernel,
    /// Gauss-type rule with an exactness certificate.
    Quadrature,
    /// Markov–Stieltjes bounds on the distribution function.
    Bounds,
    /// Sine-kernel scaling limit at x0.
    Universality,
    /// Rescaled zero spacings around x0.
    Clock,
    /// Point-mass update of the orthogonal polynomials.
    Update,
    /// Interlacing, CD-route agreement and reproducing property.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Moments => "moments",
            Command::Recurrence => "recurrence",
            Command::Kernel => "kernel",
            Command::Quadrature => "quadrature",
            Command::Bounds => "bounds",
            Command::Universality => "universality",
            Command::Clock => "clock",
            Command::Update => "update",
            Command::Verify => "verify",
        }
    }
}

/// Every field is optional so that files, flags and defaults can be layered.
/// After [`RunConfig::resolve`] exactly the fields the command reads are set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Short measure name such as `uniform+0.2@0.3`, or a path to a JSON
    /// measure description.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// `start:stop:step`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Half-width of the zero window in `clock`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_oracle: Option<bool>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        RunConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    /// Fields set in `top` win.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(base, top; command, measure, resolution, n, x0, z0, lambda, grid,
                 tolerance, j, output, seed, skip_oracle)
    }

    /// Reads a TOML or JSON config. A run manifest is accepted too, in which
    /// case its `config` member is used.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        let bad = |e: &dyn std::fmt::Display| CliError::Config(format!("{}: {e}", path.display()));
        if path.extension().is_some_and(|e| e == "toml") {
            return toml::from_str(&text).map_err(|e| bad(&e));
        }
        let mut value: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(&e))?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        serde_json::from_value(value).map_err(|e| bad(&e))
    }

    /// Fills command defaults, drops fields the command ignores and loads
    /// the measure.
    pub fn resolve(self) -> Result<Resolved, CliError> {
        let command = self
            .command
            .ok_or_else(|| CliError::Config("no command given (on the command line or in --config)".into()))?;
        let measure_arg = self
            .measure
            .clone()
            .ok_or_else(|| CliError::Config("--measure is required".into()))?;
        let source = load_measure(&measure_arg)?;
        let support = source.support();
        let circle = support == SupportKind::UnitCircle;

        let heavy = matches!(command, Command::Universality | Command::Clock);
        let n = self.n.unwrap_or(if heavy { 200 } else { 20 });
        if n == 0 {
            return Err(CliError::Config("--n must be positive".into()));
        }

        let (source, resolution) = match source {
            MeasureSource::Named { measure, resolution: from_file } => {
                let explicit = self.resolution.or(file_resolution(&measure_arg, from_file));
                let resolution = explicit.unwrap_or_else(|| auto_resolution(support, n));
                (MeasureSource::Named { measure, resolution }, Some(resolution))
            }
            atomic => (atomic, None),
        };

        let mut out = RunConfig {
            command: Some(command),
            measure: Some(measure_arg),
            resolution,
            n: Some(n),
            output: Some(self.output.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT))),
            seed: Some(self.seed.unwrap_or(DEFAULT_SEED)),
            ..RunConfig::default()
        };
        let x0 = self.x0.unwrap_or(0.0);
        match command {
            Command::Moments | Command::Recurrence => {}
            Command::Kernel => {
                if circle {
                    out.z0 = Some(self.z0.unwrap_or([0.5, 0.0]));
                    out.grid = Some(self.grid.clone().unwrap_or_else(|| "0:6.25:0.25".into()));
                } else {
                    out.x0 = Some(x0);
                    out.grid = Some(self.grid.clone().unwrap_or_else(|| "-1:1:0.125".into()));
                }
                out.tolerance = Some(self.tolerance.unwrap_or(1e-10));
            }
            Command::Quadrature => {
                out.x0 = self.x0;
                out.tolerance = Some(self.tolerance.unwrap_or(1e-10));
            }
            Command::Bounds => {
                out.grid = Some(match &self.grid {
                    Some(g) => g.clone(),
                    None => hull_grid(&source)?,
                });
                out.tolerance = Some(self.tolerance.unwrap_or(1e-12));
            }
            Command::Universality => {
                out.x0 = Some(x0);
                out.grid = Some(self.grid.clone().unwrap_or_else(|| "-2:2:0.25".into()));
                out.tolerance = Some(self.tolerance.unwrap_or(0.02));
            }
            Command::Clock => {
                out.x0 = Some(x0);
                out.j = Some(self.j.unwrap_or(5));
                out.tolerance = Some(self.tolerance.unwrap_or(0.02));
            }
            Command::Update => {
                if circle {
                    out.z0 = Some(self.z0.unwrap_or([1.0, 0.0]));
                } else {
                    out.x0 = Some(x0);
                }
                out.lambda = Some(self.lambda.unwrap_or(1.0));
                out.tolerance = Some(self.tolerance.unwrap_or(christoffel_core::updates::ORACLE_TOL));
                out.skip_oracle = Some(self.skip_oracle.unwrap_or(false));
            }
            Command::Verify => {
                out.tolerance = Some(self.tolerance.unwrap_or(1e-10));
            }
        }
        let grid = out.grid.as_deref().map(Grid::parse).transpose()?;
        Ok(Resolved {
            command,
            config: out,
            source,
            grid,
        })
    }
}

/// A configuration with its measure loaded and grid parsed.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub command: Command,
    /// The echo written to the manifest.
    pub config: RunConfig,
    pub source: MeasureSource,
    pub grid: Option<Grid>,
}

impl Resolved {
    fn get<T: Copy>(&self, v: Option<T>, name: &str) -> T {
        v.unwrap_or_else(|| panic!("`{name}` is resolved for {}", self.command.name()))
    }

    pub fn n(&self) -> usize {
        self.get(self.config.n, "n")
    }

    pub fn x0(&self) -> f64 {
        self.get(self.config.x0, "x0")
    }

    pub fn z0(&self) -> christoffel_core::Complex64 {
        let [re, im] = self.get(self.config.z0, "z0");
        christoffel_core::Complex64::new(re, im)
    }

    pub fn lambda(&self) -> f64 {
        self.get(self.config.lambda, "lambda")
    }

    pub fn tolerance(&self) -> f64 {
        self.get(self.config.tolerance, "tolerance")
    }

    pub fn j(&self) -> usize {
        self.get(self.config.j, "j")
    }

    pub fn seed(&self) -> u64 {
        self.get(self.config.seed, "seed")
    }

    pub fn skip_oracle(&self) -> bool {
        self.config.skip_oracle.unwrap_or(false)
    }

    pub fn grid_points(&self) -> Vec<f64> {
        self.get(self.grid, "grid").points()
    }

    pub fn output(&self) -> PathBuf {
        self.config.output.clone().expect("output is always resolved")
    }

    pub fn named(&self) -> Option<&NamedMeasure> {
        self.source.named()
    }
}

fn is_path(arg: &str) -> bool {
    arg.ends_with(".json") || Path::new(arg).is_file()
}

/// The resolution written in a measure file, if it had one.
fn file_resolution(arg: &str, parsed: usize) -> Option<usize> {
    if !is_path(arg) {
        return None;
    }
    let text = std::fs::read_to_string(arg).ok()?;
    let file: MeasureFile = serde_json::from_str(&text).ok()?;
    file.resolution.map(|_| parsed)
}

pub fn load_measure(arg: &str) -> Result<MeasureSource, CliError> {
    if is_path(arg) {
        let text = std::fs::read_to_string(arg).map_err(CliError::io(arg))?;
        return parse_measure_json(&text)
            .map_err(|e| CliError::Config(format!("measure file {arg}: {e}")));
    }
    let measure: NamedMeasure = arg.parse()?;
    Ok(MeasureSource::Named {
        measure,
        resolution: 0,
    })
}

/// Smallest power of two (at least 1024) whose discretization carries
/// degree `n + 2`.
pub fn auto_resolution(support: SupportKind, n: usize) -> usize {
    let per_degree = match support {
        SupportKind::RealLine => 4,
        SupportKind::UnitCircle => 8,
    };
    (per_degree * (n + 2)).next_power_of_two().max(1024)
}

/// Seventeen points strictly inside the hull of the support.
fn hull_grid(source: &MeasureSource) -> Result<String, CliError> {
    let (lo, hi) = match source.named().and_then(|m| m.interval()) {
        Some(iv) => iv,
        None => source.to_atomic()?.hull(),
    };
    let step = (hi - lo) / 18.0;
    Ok(format!(
        "{}:{}:{}",
        fmt_f64(lo + step),
        fmt_f64(hi - step),
        fmt_f64(step)
    ))
}

pub fn parse_z0(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    match parts[..] {
        [re] => Ok([num(re)?, 0.0]),
        [re, im] => Ok([num(re)?, num(im)?]),
        _ => Err(format!("`{s}`: expected `re` or `re,im`")),
    }
}
