//! Finite-n experiments for the limit theorems.
//!
//! Every "limit" reported here is a finite-n proxy and is labelled as
//! such. Grid evaluations run in parallel but results are collected in grid
//! order, so outputs do not depend on the thread count.

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{direct_sum_real, kernel_diag_sum};
use crate::measures::{AtomicMeasure, NamedMeasure, SupportKind};
use crate::oprl::JacobiParams;
use crate::quadrature::{zeros_pn, TruncatedJacobi};
use crate::sum::{sum, CompensatedSum};
use crate::table::{fmt_f64, Table};

/// `1/(π √((x-α)(β-x)))` on `(α, β)`, zero outside.
pub fn equilibrium_density(lo: f64, hi: f64, x: f64) -> f64 {
    if x <= lo || x >= hi {
        0.0
    } else {
        1.0 / (PI * ((x - lo) * (hi - x)).sqrt())
    }
}

/// Equilibrium mass of `(-∞, x]` for `[α, β]`.
pub fn equilibrium_cdf(lo: f64, hi: f64, x: f64) -> f64 {
    let t = ((2.0 * x - lo - hi) / (hi - lo)).clamp(-1.0, 1.0);
    0.5 + t.asin() / PI
}

/// Logarithmic capacity `(β-α)/4` of an interval.
pub fn capacity(lo: f64, hi: f64) -> f64 {
    0.25 * (hi - lo)
}

/// `ν_n`: mass `1/n` at each zero of `p_n`.
pub fn zero_counting_measure(jp: &JacobiParams, n: usize) -> Result<AtomicMeasure> {
    let zeros = zeros_pn(jp, n)?;
    let w = 1.0 / n as f64;
    let atoms: Vec<(f64, f64)> = zeros.into_iter().map(|x| (x, w)).collect();
    AtomicMeasure::real(&atoms, format!("zero-counting(n={n})"))
}

/// `dμ_n = K_n(x, x) dμ / (n+1)` on the atoms of `mu`.
pub fn kernel_measure(jp: &JacobiParams, mu: &AtomicMeasure, n: usize) -> Result<AtomicMeasure> {
    if mu.support() != SupportKind::RealLine {
        return Err(Error::WrongSupport("kernel measure needs a real-line measure".into()));
    }
    let scale = 1.0 / (n + 1) as f64;
    let xs = mu.real_points();
    let atoms = xs
        .par_iter()
        .zip(mu.weights())
        .map(|(&x, &w)| kernel_diag_sum(jp, n, x).map(|k| (x, w * k * scale)))
        .collect::<Result<Vec<_>>>()?;
    AtomicMeasure::real(&atoms, format!("kernel-measure(n={n})"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub l: usize,
    /// `∫ x^l dν_{n+1}`.
    #[serde(rename = "zeroCounting")]
    pub zero_counting: f64,
    /// `∫ x^l dμ_n`.
    pub kernel: f64,
    pub difference: f64,
    /// `l R^l / (n+1)`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentComparison {
    pub n: usize,
    /// Operator-norm proxy `max |support endpoint|`.
    pub radius: f64,
    pub rows: Vec<MomentRow>,
}

impl MomentComparison {
    pub fn within_bound(&self) -> bool {
        self.rows.iter().all(|r| r.difference <= r.bound)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["l", "zero_counting", "kernel", "difference", "bound"]);
        for r in &self.rows {
            t.push(vec![
                r.l.to_string(),
                fmt_f64(r.zero_counting),
                fmt_f64(r.kernel),
                fmt_f64(r.difference),
                fmt_f64(r.bound),
            ]);
        }
        t
    }
}

pub const MAX_MOMENT_ORDER: usize = 12;

/// Moments of the zero-counting measure `ν_{n+1}` against those of the
/// kernel measure `μ_n`, with the rank envelope `l R^l / (n+1)`.
pub fn moment_compare(
    jp: &JacobiParams,
    mu: &AtomicMeasure,
    n: usize,
    l_max: usize,
) -> Result<MomentComparison> {
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2, got {n}")));
    }
    if l_max > MAX_MOMENT_ORDER {
        return Err(Error::Precondition(format!(
            "moment order {l_max} exceeds {MAX_MOMENT_ORDER}"
        )));
    }
    let nu = zero_counting_measure(jp, n + 1)?;
    let km = kernel_measure(jp, mu, n)?;
    let (lo, hi) = mu.hull();
    let radius = lo.abs().max(hi.abs());
    let rows = (0..=l_max)
        .map(|l| {
            let a = nu.integrate_real(|x| x.powi(l as i32));
            let b = km.integrate_real(|x| x.powi(l as i32));
            MomentRow {
                l,
                zero_counting: a,
                kernel: b,
                difference: if l == 0 { 0.0 } else { (a - b).abs() },
                bound: l as f64 * radius.powi(l as i32) / (n + 1) as f64,
            }
        })
        .collect();
    Ok(MomentComparison { n, radius, rows })
}

/// Where `w(x0)` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightOrigin {
    /// Pointwise density of a named measure.
    Exact,
    /// `μ([x0-h, x0+h]) / 2h` with `h = 10/n`.
    LocalAverageProxy,
}

/// `w(x0)` from the named density when there is one, otherwise the
/// local-average proxy on the atoms.
pub fn weight_at(
    named: Option<&NamedMeasure>,
    mu: &AtomicMeasure,
    x0: f64,
    n: usize,
) -> Result<(f64, WeightOrigin)> {
    if let Some(w) = named.and_then(|m| m.density(x0)) {
        return Ok((w, WeightOrigin::Exact));
    }
    let h = 10.0 / n.max(1) as f64;
    let mass = mu.cdf(x0 + h, true)? - mu.cdf(x0 - h, false)?;
    Ok((mass / (2.0 * h), WeightOrigin::LocalAverageProxy))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChristoffelRow {
    pub n: usize,
    pub x: f64,
    /// `(1/n) K_n(x, x) w(x)`.
    pub scaled: f64,
    #[serde(rename = "rhoE")]
    pub rho_e: f64,
    /// `(scaled - ρ_e)/ρ_e`, signed.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChristoffelScan {
    pub interval: (f64, f64),
    pub rows: Vec<ChristoffelRow>,
}

impl ChristoffelScan {
    pub fn max_abs_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.deviation.abs()).fold(0.0, f64::max)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["n", "x", "scaled", "rho_e", "deviation"]);
        for r in &self.rows {
            t.push(vec![
                r.n.to_string(),
                fmt_f64(r.x),
                fmt_f64(r.scaled),
                fmt_f64(r.rho_e),
                fmt_f64(r.deviation),
            ]);
        }
        t
    }
}

fn single_interval(named: &NamedMeasure) -> Result<(f64, f64)> {
    named.interval().ok_or_else(|| {
        Error::Unsupported(format!(
            "{} has no single-interval support with a closed-form equilibrium measure",
            named.name()
        ))
    })
}

/// `(1/n) K_n(x, x) w(x)` against the equilibrium density on a grid.
pub fn christoffel_limit_scan(
    jp: &JacobiParams,
    named: &NamedMeasure,
    xs: &[f64],
    ns: &[usize],
) -> Result<ChristoffelScan> {
    let (lo, hi) = single_interval(named)?;
    let cells: Vec<(usize, f64)> = ns.iter().flat_map(|&n| xs.iter().map(move |&x| (n, x))).collect();
    let rows = cells
        .par_iter()
        .map(|&(n, x)| {
            let w = named.density(x).unwrap_or(0.0);
            let scaled = kernel_diag_sum(jp, n, x)? * w / n as f64;
            let rho_e = equilibrium_density(lo, hi, x);
            Ok(ChristoffelRow {
                n,
                x,
                scaled,
                rho_e,
                deviation: (scaled - rho_e) / rho_e,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChristoffelScan {
        interval: (lo, hi),
        rows,
    })
}

/// `sin(πt)/(πt)`.
pub fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (PI * t).sin() / (PI * t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub x0: f64,
    pub n: usize,
    #[serde(rename = "weight")]
    pub w_x0: f64,
    #[serde(rename = "weightOrigin")]
    pub weight_origin: WeightOrigin,
    /// `ρ_n = w(x0) K_n(x0, x0) / n`.
    #[serde(rename = "rhoN")]
    pub rho_n: f64,
    /// `n ρ_n`.
    pub rescale: f64,
    #[serde(rename = "gridA")]
    pub grid_a: Vec<f64>,
    #[serde(rename = "gridB")]
    pub grid_b: Vec<f64>,
    /// `K_n(x0 + a/nρ_n, x0 + b/nρ_n) / K_n(x0, x0)`, row-major in `(a, b)`.
    pub measured: Vec<f64>,
    /// `sinc(b - a)`.
    pub reference: Vec<f64>,
    #[serde(rename = "maxAbsError")]
    pub max_abs_error: f64,
    /// Equilibrium density at `x0`, when closed-form.
    #[serde(rename = "rhoE")]
    pub rho_e: Option<f64>,
    /// Same scan rescaled by `n ρ_e(x0)` instead of `n ρ_n`.
    #[serde(rename = "maxAbsErrorEquilibrium")]
    pub max_abs_error_equilibrium: Option<f64>,
    /// Wall-clock time; kept out of serialized artifacts.
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl ScalingReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["a", "b", "measured", "sinc", "error"]);
        let nb = self.grid_b.len();
        for (i, a) in self.grid_a.iter().enumerate() {
            for (j, b) in self.grid_b.iter().enumerate() {
                let m = self.measured[i * nb + j];
                let r = self.reference[i * nb + j];
                t.push_f64(&[*a, *b, m, r, m - r]);
            }
        }
        t
    }
}

/// Kernel ratios on the `(a, b)` grid at rescale `s`.
fn scaled_kernel_grid(
    jp: &JacobiParams,
    x0: f64,
    n: usize,
    s: f64,
    grid_a: &[f64],
    grid_b: &[f64],
) -> Result<Vec<f64>> {
    let k0 = kernel_diag_sum(jp, n, x0)?;
    let values = |grid: &[f64]| -> Result<Vec<Vec<f64>>> {
        grid.par_iter()
            .map(|t| jp.orthonormal_values(n, x0 + t / s))
            .collect()
    };
    let pa = values(grid_a)?;
    let pb = values(grid_b)?;
    Ok(pa
        .iter()
        .flat_map(|u| pb.iter().map(move |v| direct_sum_real(u, v) / k0))
        .collect())
}

/// Sine-kernel scan at `x0`.
pub fn universality_scan(
    jp: &JacobiParams,
    named: Option<&NamedMeasure>,
    mu: &AtomicMeasure,
    x0: f64,
    n: usize,
    grid_a: &[f64],
    grid_b: &[f64],
) -> Result<ScalingReport> {
    let start = Instant::now();
    if n == 0 {
        return Err(Error::Precondition("degree must be positive".into()));
    }
    let (w, origin) = weight_at(named, mu, x0, n)?;
    if !(w > 0.0) {
        return Err(Error::Precondition(format!("w(x0) = {w} is not positive at x0 = {x0}")));
    }
    let nf = n as f64;
    let rho_n = w * kernel_diag_sum(jp, n, x0)? / nf;
    let measured = scaled_kernel_grid(jp, x0, n, nf * rho_n, grid_a, grid_b)?;
    let reference: Vec<f64> = grid_a
        .iter()
        .flat_map(|a| grid_b.iter().map(move |b| sinc(b - a)))
        .collect();
    let max_err = |m: &[f64]| {
        m.iter()
            .zip(&reference)
            .map(|(m, r)| (m - r).abs())
            .fold(0.0, f64::max)
    };
    let max_abs_error = max_err(&measured);
    let rho_e = named
        .and_then(|m| m.interval())
        .map(|(lo, hi)| equilibrium_density(lo, hi, x0))
        .filter(|r| *r > 0.0);
    let max_abs_error_equilibrium = match rho_e {
        Some(r) => Some(max_err(&scaled_kernel_grid(jp, x0, n, nf * r, grid_a, grid_b)?)),
        None => None,
    };
    Ok(ScalingReport {
        x0,
        n,
        w_x0: w,
        weight_origin: origin,
        rho_n,
        rescale: nf * rho_n,
        grid_a: grid_a.to_vec(),
        grid_b: grid_b.to_vec(),
        measured,
        reference,
        max_abs_error,
        rho_e,
        max_abs_error_equilibrium,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LubinskyReport {
    pub n: usize,
    pub pairs: usize,
    /// Largest `(|K_n - K*_n|² - K_n(z,z)[K_n(ζ,ζ) - K*_n(ζ,ζ)]) / (K_n(z,z) K_n(ζ,ζ))`.
    #[serde(rename = "maxViolation")]
    pub max_violation: f64,
}

/// Lubinsky's inequality for `μ* = μ + Σ m_i δ_{x_i}`, which makes `μ <= μ*`
/// by construction.
pub fn lubinsky_inequality_check(
    mu: &AtomicMeasure,
    added: &[(f64, f64)],
    n: usize,
    pairs: &[(f64, f64)],
) -> Result<LubinskyReport> {
    if mu.support() != SupportKind::RealLine {
        return Err(Error::WrongSupport("Lubinsky check is implemented on the real line".into()));
    }
    let mut star = mu.clone();
    for &(x, m) in added {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::Precondition(format!(
                "μ* - μ must be positive; atom at {x} has mass {m}"
            )));
        }
        if m > 0.0 {
            star = star.with_atom(x.into(), m)?;
        }
    }
    let jp = crate::oprl::stieltjes_recurrence(mu, n)?;
    let jq = crate::oprl::stieltjes_recurrence(&star, n)?;
    let max_violation = pairs
        .par_iter()
        .map(|&(z, w)| {
            let pz = jp.orthonormal_values(n, z)?;
            let pw = jp.orthonormal_values(n, w)?;
            let qz = jq.orthonormal_values(n, z)?;
            let qw = jq.orthonormal_values(n, w)?;
            let k = direct_sum_real(&pz, &pw);
            let ks = direct_sum_real(&qz, &qw);
            let kzz = direct_sum_real(&pz, &pz);
            let kww = direct_sum_real(&pw, &pw);
            let ksww = direct_sum_real(&qw, &qw);
            let lhs = (k - ks) * (k - ks);
            let rhs = kzz * (kww - ksww);
            Ok((lhs - rhs) / (kzz * kww))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(LubinskyReport {
        n,
        pairs: pairs.len(),
        max_violation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NevaiMetric {
    pub x0: f64,
    pub n: usize,
    /// `a_{n+1}² [p_n(x0)² + p_{n+1}(x0)²] / K_n(x0, x0)`.
    #[serde(rename = "secondMoment")]
    pub second_moment: f64,
    /// `p_n(x0)² / K_n(x0, x0)`.
    #[serde(rename = "lemmaRatio")]
    pub lemma_ratio: f64,
    /// `|1 - K_{n-1}/K_n - p_n²/K_n|`.
    #[serde(rename = "identityResidual")]
    pub identity_residual: f64,
}

/// Second moment of `dη_n = |K_n(x0, x)|² dμ / K_n(x0, x0)` about `x0`,
/// from the CD formula.
pub fn nevai_delta_metric(jp: &JacobiParams, x0: f64, n: usize) -> Result<NevaiMetric> {
    jp.check_degree(n + 1)?;
    let p = jp.orthonormal_values(n + 1, x0)?;
    let k = direct_sum_real(&p[..=n], &p[..=n]);
    let k_prev = if n == 0 { 0.0 } else { direct_sum_real(&p[..n], &p[..n]) };
    let a = jp.a(n + 1);
    let pn2 = p[n] * p[n];
    Ok(NevaiMetric {
        x0,
        n,
        second_moment: a * a * (pn2 + p[n + 1] * p[n + 1]) / k,
        lemma_ratio: pn2 / k,
        identity_residual: (1.0 - k_prev / k - pn2 / k).abs(),
    })
}

/// `∫ |x - x0|² |K_n(x0, x)|² dμ(x) / K_n(x0, x0)` by summing over atoms.
pub fn nevai_second_moment_direct(
    jp: &JacobiParams,
    mu: &AtomicMeasure,
    x0: f64,
    n: usize,
) -> Result<f64> {
    let p0 = jp.orthonormal_values(n, x0)?;
    let k0 = direct_sum_real(&p0, &p0);
    let terms = mu
        .real_points()
        .par_iter()
        .zip(mu.weights())
        .map(|(&x, &w)| {
            let k = direct_sum_real(&p0, &jp.orthonormal_values(n, x)?);
            Ok(w * (x - x0) * (x - x0) * k * k)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(sum(terms) / k0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClockRow {
    pub j: i64,
    /// `x_j`.
    pub zero: f64,
    /// `n c_n (x_{j+1} - x_j)`.
    #[serde(rename = "scaledSpacing")]
    pub scaled_spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClockReport {
    pub x0: f64,
    pub n: usize,
    /// `c_n = ρ_n = w(x0) K_n(x0, x0) / n`.
    #[serde(rename = "cN")]
    pub c_n: f64,
    #[serde(rename = "weightOrigin")]
    pub weight_origin: WeightOrigin,
    pub rows: Vec<ClockRow>,
    /// `n c_n (x_0 - x0)`, where `x_0` is the first zero `>= x0`.
    #[serde(rename = "firstZeroScaled")]
    pub first_zero_scaled: f64,
}

impl ClockReport {
    pub fn max_spacing_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.scaled_spacing - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["j", "zero", "scaled_spacing"]);
        for r in &self.rows {
            t.push(vec![r.j.to_string(), fmt_f64(r.zero), fmt_f64(r.scaled_spacing)]);
        }
        t
    }
}

/// Zeros of `p_n` labelled `… < x_{-1} < x0 <= x_0 < x_1 < …` and their
/// spacings `n c_n (x_{j+1} - x_j)` for `-J <= j <= J`.
pub fn clock_spacing(
    jp: &JacobiParams,
    named: Option<&NamedMeasure>,
    mu: &AtomicMeasure,
    x0: f64,
    n: usize,
    big_j: usize,
) -> Result<ClockReport> {
    let (w, origin) = weight_at(named, mu, x0, n)?;
    let c_n = w * kernel_diag_sum(jp, n, x0)? / n as f64;
    let tj = TruncatedJacobi::new(jp, n, 0.0)?;
    // Index of the first zero >= x0.
    let first = tj.count_below(x0);
    let jj = big_j as i64;
    let lo = first as i64 - jj;
    let hi = first as i64 + jj + 1;
    if lo < 0 || hi >= n as i64 {
        return Err(Error::Precondition(format!(
            "fewer than {} zeros of p_{n} around x0 = {x0} (labels -{big_j}..={} needed)",
            2 * big_j + 2,
            big_j + 1
        )));
    }
    let zeros = tj.eigenvalues_in(lo as usize..hi as usize + 1)?;
    let scale = n as f64 * c_n;
    let rows = (0..zeros.len() - 1)
        .map(|i| ClockRow {
            j: i as i64 - jj,
            zero: zeros[i],
            scaled_spacing: scale * (zeros[i + 1] - zeros[i]),
        })
        .collect();
    Ok(ClockReport {
        x0,
        n,
        c_n,
        weight_origin: origin,
        rows,
        first_zero_scaled: scale * (zeros[big_j] - x0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityRow {
    pub n: usize,
    /// `(a_1 ⋯ a_n)^{1/n}`.
    #[serde(rename = "geometricMean")]
    pub geometric_mean: f64,
    pub capacity: f64,
    #[serde(rename = "relativeGap")]
    pub relative_gap: f64,
}

/// `(a_1 ⋯ a_n)^{1/n}` in the log domain, compared with the capacity of
/// `[α, β]`.
pub fn regularity_index(jp: &JacobiParams, interval: (f64, f64), ns: &[usize]) -> Result<Vec<RegularityRow>> {
    let cap = capacity(interval.0, interval.1);
    ns.iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::Precondition("n must be positive".into()));
            }
            jp.check_degree(n)?;
            let mut s = CompensatedSum::new();
            for a in &jp.a_slice()[..n] {
                s.add(a.ln());
            }
            let g = (s.value() / n as f64).exp();
            Ok(RegularityRow {
                n,
                geometric_mean: g,
                capacity: cap,
                relative_gap: (g - cap) / cap,
            })
        })
        .collect()
}

pub fn regularity_table(rows: &[RegularityRow]) -> Table {
    let mut t = Table::new(&["n", "geometric_mean", "capacity", "relative_gap"]);
    for r in rows {
        t.push(vec![
            r.n.to_string(),
            fmt_f64(r.geometric_mean),
            fmt_f64(r.capacity),
            fmt_f64(r.relative_gap),
        ]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AcClass {
    /// `(1/n) K_n(x, x)` stayed below the threshold over the n-list.
    BoundedProxy,
    /// It exceeded the threshold (or overflowed) somewhere on the list.
    UnboundedProxy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcRow {
    pub x: f64,
    /// `(1/n) K_n(x, x)` for each `n` of the list; `inf` on overflow.
    pub values: Vec<f64>,
    /// Minimum over the list, a liminf proxy.
    #[serde(rename = "liminfProxy")]
    pub liminf_proxy: f64,
    pub class: AcClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcDiagnostic {
    pub ns: Vec<usize>,
    pub threshold: f64,
    pub rows: Vec<AcRow>,
}

impl AcDiagnostic {
    pub fn to_table(&self) -> Table {
        let mut headers = vec!["x".to_string()];
        headers.extend(self.ns.iter().map(|n| format!("n{n}")));
        headers.push("liminf_proxy".into());
        headers.push("class".into());
        let refs: Vec<&str> = headers.iter().map(String::as_str).collect();
        let mut t = Table::new(&refs);
        for r in &self.rows {
            let mut row = vec![fmt_f64(r.x)];
            row.extend(r.values.iter().map(|v| fmt_f64(*v)));
            row.push(fmt_f64(r.liminf_proxy));
            row.push(
                match r.class {
                    AcClass::BoundedProxy => "bounded_proxy",
                    AcClass::UnboundedProxy => "unbounded_proxy",
                }
                .into(),
            );
            t.push(row);
        }
        t
    }
}

/// `(1/n) K_n(x, x)` across an increasing n-list at each grid point.
pub fn ac_set_diagnostic(
    jp: &JacobiParams,
    xs: &[f64],
    ns: &[usize],
    threshold: f64,
) -> Result<AcDiagnostic> {
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) || ns[0] == 0 {
        return Err(Error::Precondition("n-list must be positive and increasing".into()));
    }
    let rows = xs
        .par_iter()
        .map(|&x| {
            let values = ns
                .iter()
                .map(|&n| match kernel_diag_sum(jp, n, x) {
                    Ok(k) => Ok(k / n as f64),
                    Err(Error::Overflow { .. }) => Ok(f64::INFINITY),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<f64>>>()?;
            let liminf_proxy = values.iter().copied().fold(f64::INFINITY, f64::min);
            let class = if values.iter().all(|v| *v <= threshold) {
                AcClass::BoundedProxy
            } else {
                AcClass::UnboundedProxy
            };
            Ok(AcRow {
                x,
                values,
                liminf_proxy,
                class,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AcDiagnostic {
        ns: ns.to_vec(),
        threshold,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    /// `ν_n` mass of the bin over its width.
    pub observed: f64,
    /// Equilibrium mass of the bin over its width.
    pub expected: f64,
}

/// Bin-averaged densities of `ν_n` and of the equilibrium measure of
/// `[α, β]` over `bins` equal bins.
pub fn zero_counting_histogram(
    jp: &JacobiParams,
    n: usize,
    interval: (f64, f64),
    bins: usize,
) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::Precondition("need at least one bin".into()));
    }
    let (lo, hi) = interval;
    let zeros = zeros_pn(jp, n)?;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for x in &zeros {
        let i = (((x - lo) / width).floor().max(0.0) as usize).min(bins - 1);
        counts[i] += 1;
    }
    Ok((0..bins)
        .map(|i| {
            let a = lo + i as f64 * width;
            let b = if i + 1 == bins { hi } else { a + width };
            HistogramBin {
                lo: a,
                hi: b,
                observed: counts[i] as f64 / n as f64 / (b - a),
                expected: (equilibrium_cdf(lo, hi, b) - equilibrium_cdf(lo, hi, a)) / (b - a),
            }
        })
        .collect())
}

pub fn histogram_table(bins: &[HistogramBin]) -> Table {
    let mut t = Table::new(&["lo", "hi", "observed", "expected"]);
    for b in bins {
        t.push_f64(&[b.lo, b.hi, b.observed, b.expected]);
    }
    t
}

/// JSON summary emitted next to every experiment table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub experiment: String,
    pub params: serde_json::Value,
    #[serde(rename = "maxError")]
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ExperimentSummary {
    pub fn new(experiment: &str, params: serde_json::Value, max_error: f64, tolerance: f64) -> Self {
        Self {
            experiment: experiment.to_string(),
            params,
            max_error,
            tolerance,
            pass: max_error <= tolerance,
        }
    }
}
