//! JSON measure-description files.
//!
//! ```json
//! {"kind": "jacobi", "params": {"a": 0.5, "b": -0.5},
//!  "atoms": [[3.0, 0.25]], "resolution": 1024}
//! ```
//!
//! Points are either a number (real line) or `[re, im]` (circle).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::atomic::{AtomicMeasure, SupportKind};
use super::named::{MeasureKind, NamedMeasure, MIN_RESOLUTION};
use crate::error::{Error, Result};

pub const DEFAULT_RESOLUTION: usize = 4096;

/// Raw file contents before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub kind: String,
    #[serde(default)]
    pub params: serde_json::Map<String, Value>,
    #[serde(default)]
    pub atoms: Vec<(Value, f64)>,
    #[serde(default)]
    pub resolution: Option<usize>,
}

/// A measure as described by a file: analytic with a resolution, or atomic.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSource {
    Named {
        measure: NamedMeasure,
        resolution: usize,
    },
    Atomic(AtomicMeasure),
}

impl MeasureSource {
    pub fn to_atomic(&self) -> Result<AtomicMeasure> {
        match self {
            MeasureSource::Named {
                measure,
                resolution,
            } => measure.discretize(*resolution),
            MeasureSource::Atomic(mu) => Ok(mu.clone()),
        }
    }

    pub fn named(&self) -> Option<&NamedMeasure> {
        match self {
            MeasureSource::Named { measure, .. } => Some(measure),
            MeasureSource::Atomic(_) => None,
        }
    }

    pub fn support(&self) -> SupportKind {
        match self {
            MeasureSource::Named { measure, .. } => measure.support(),
            MeasureSource::Atomic(mu) => mu.support(),
        }
    }
}

fn field_err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("field `{path}`: {msg}"))
}

fn param_f64(params: &serde_json::Map<String, Value>, key: &str) -> Result<f64> {
    params
        .get(key)
        .ok_or_else(|| field_err(&format!("params.{key}"), "missing"))?
        .as_f64()
        .ok_or_else(|| field_err(&format!("params.{key}"), "expected a number"))
}

fn parse_point(v: &Value, path: &str) -> Result<Complex64> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(field_err(path, "expected [re, im] with numeric entries")),
        },
        _ => Err(field_err(path, "expected a number or [re, im]")),
    }
}

/// Parse a measure description. Syntax errors report line and column;
/// semantic errors report the offending field path.
pub fn parse_measure_json(text: &str) -> Result<MeasureSource> {
    let file: MeasureFile = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    let atoms = file
        .atoms
        .iter()
        .enumerate()
        .map(|(i, (p, w))| Ok((parse_point(p, &format!("atoms[{i}][0]"))?, *w)))
        .collect::<Result<Vec<_>>>()?;
    let p = &file.params;
    let kind = match file.kind.as_str() {
        "uniform" => MeasureKind::UniformInterval {
            lo: p.get("lo").map_or(Ok(-1.0), |_| param_f64(p, "lo"))?,
            hi: p.get("hi").map_or(Ok(1.0), |_| param_f64(p, "hi"))?,
        },
        "chebyshev2" => MeasureKind::Chebyshev2Scaled,
        "jacobi" => MeasureKind::JacobiWeight {
            a: param_f64(p, "a")?,
            b: param_f64(p, "b")?,
        },
        "lebesgue_circle" => MeasureKind::LebesgueCircle,
        "szego" => {
            let coeffs = p
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| field_err("params.coeffs", "expected an array"))?;
            MeasureKind::SzegoWeight {
                coeffs: coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| parse_point(c, &format!("params.coeffs[{i}]")))
                    .collect::<Result<_>>()?,
            }
        }
        "atomic" => {
            let support = match p.get("support").and_then(Value::as_str).unwrap_or("real") {
                "real" => SupportKind::RealLine,
                "circle" => SupportKind::UnitCircle,
                other => return Err(field_err("params.support", format!("unknown support `{other}`"))),
            };
            if file.resolution.is_some() {
                return Err(field_err("resolution", "not allowed for atomic measures"));
            }
            let label = p
                .get("label")
                .and_then(Value::as_str)
                .unwrap_or("atomic")
                .to_string();
            return AtomicMeasure::new(support, atoms, label)
                .map(MeasureSource::Atomic)
                .map_err(|e| field_err("atoms", e));
        }
        other => return Err(field_err("kind", format!("unknown measure kind `{other}`"))),
    };
    let resolution = file.resolution.unwrap_or(DEFAULT_RESOLUTION);
    if resolution < MIN_RESOLUTION {
        return Err(field_err(
            "resolution",
            format!("{resolution} is below the minimum {MIN_RESOLUTION}"),
        ));
    }
    let measure = NamedMeasure {
        kind,
        extra_atoms: atoms,
    };
    measure.validate().map_err(|e| field_err("params", e))?;
    Ok(MeasureSource::Named {
        measure,
        resolution,
    })
}
