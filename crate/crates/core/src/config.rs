//! Frozen experiment configuration, compiled into the library so every
//! build runs the same grids and tolerances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EXPERIMENTS_TOML: &str = include_str!("../config/experiments.toml");

/// Uniform grid `start, start + step, …` up to `stop` inclusive. Points are
/// `start + i·step` so they do not accumulate rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }

    /// Parses `start:stop:step`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("grid `{s}`: {e}")))?;
        match nums[..] {
            [start, stop, step] if step > 0.0 && stop >= start => Ok(Self { start, stop, step }),
            _ => Err(Error::Parse(format!(
                "grid `{s}` must be start:stop:step with step > 0 and stop >= start"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureCfg {
    pub measures: Vec<String>,
    pub resolution: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbcCfg {
    pub measures: Vec<String>,
    pub resolution: usize,
    pub n_max: usize,
    pub tolerance: f64,
    pub circle_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdRoutesCfg {
    pub real_measure: String,
    /// Szegő coefficients as `[re, im]` pairs.
    pub circle_coeffs: Vec<[f64; 2]>,
    pub resolution: usize,
    pub pairs: usize,
    pub n_max: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterlacingCfg {
    pub measures: Vec<String>,
    pub resolution: usize,
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovStieltjesCfg {
    pub measures: Vec<String>,
    pub resolution: usize,
    pub points: usize,
    pub ns: Vec<usize>,
    pub gap_tolerance: f64,
    pub uniform_max_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomMassCfg {
    pub measure: String,
    pub resolution: usize,
    pub x0: f64,
    pub mass: f64,
    pub n: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChristoffelCfg {
    pub measure: String,
    pub resolution: usize,
    pub n: usize,
    pub grid: Grid,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniversalityPoint {
    pub x0: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniversalityCfg {
    pub measure: String,
    pub resolution: usize,
    pub n: usize,
    pub grid: Grid,
    pub points: Vec<UniversalityPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LubinskyCase {
    pub measure: String,
    /// `[point, mass]` pairs added to form `μ*`.
    pub atoms: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LubinskyCfg {
    pub resolution: usize,
    pub n: usize,
    pub pairs: usize,
    pub tolerance: f64,
    pub cases: Vec<LubinskyCase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClockCfg {
    pub measure: String,
    pub resolution: usize,
    pub n: usize,
    pub x0: f64,
    pub j: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsCfg {
    pub measures: Vec<String>,
    pub resolution: usize,
    pub ns: Vec<usize>,
    pub l_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpdatesCfg {
    pub real_measure: String,
    pub real_atom: f64,
    pub real_lambda: f64,
    pub real_n_max: usize,
    pub circle_coeffs: Vec<[f64; 2]>,
    pub circle_z0_angle: f64,
    pub circle_lambda: f64,
    pub circle_n_max: usize,
    pub resolution: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivativeCfg {
    pub measures: Vec<String>,
    pub resolution: usize,
    pub ns: Vec<usize>,
    pub points: Vec<f64>,
    pub step: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroCountingCfg {
    pub measure: String,
    pub resolution: usize,
    pub n: usize,
    pub bins: usize,
    pub tolerance: f64,
    pub regularity_measure: String,
    pub regularity_resolution: usize,
    pub regularity_n: usize,
    pub regularity_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiments {
    pub version: u32,
    pub seed: u64,
    pub quadrature: QuadratureCfg,
    pub abc: AbcCfg,
    pub cd_routes: CdRoutesCfg,
    pub interlacing: InterlacingCfg,
    pub markov_stieltjes: MarkovStieltjesCfg,
    pub atom_mass: AtomMassCfg,
    pub christoffel: ChristoffelCfg,
    pub universality: UniversalityCfg,
    pub lubinsky: LubinskyCfg,
    pub clock: ClockCfg,
    pub moments: MomentsCfg,
    pub updates: UpdatesCfg,
    pub derivative: DerivativeCfg,
    pub zero_counting: ZeroCountingCfg,
}

impl Experiments {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("experiment config: {e}")))
    }

    /// The configuration compiled into this build.
    pub fn frozen() -> Self {
        Self::parse(EXPERIMENTS_TOML).expect("bundled experiment config is valid")
    }
}
