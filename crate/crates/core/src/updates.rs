//! Adding a point mass: closed-form updates and their recomputation oracles.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{AtomicMeasure, SupportKind};
use crate::oprl::{monic_coefficients_from, monic_recurrence, stieltjes_recurrence};
use crate::opuc::szego_recurrence;
use crate::poly;
use crate::table::{fmt_f64, Table};

/// Relative oracle contract for the closed-form updates.
pub const ORACLE_TOL: f64 = 1e-8;

/// Rejects `λ < -μ({z0})`.
pub fn check_lambda(mu: &AtomicMeasure, z0: Complex64, lambda: f64) -> Result<()> {
    let minimum = -mu.mass_at(z0);
    if !lambda.is_finite() || lambda < minimum {
        return Err(Error::InadmissibleLambda { lambda, minimum });
    }
    Ok(())
}

fn updated_measure(mu: &AtomicMeasure, z0: Complex64, lambda: f64) -> Result<AtomicMeasure> {
    if lambda == 0.0 {
        Ok(mu.clone())
    } else {
        mu.with_atom(z0, lambda)
    }
}

/// Monic `X_n` before and after `μ → μ + λδ_{z0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeronimusUpdate {
    pub z0: Complex64,
    pub lambda: f64,
    pub n: usize,
    /// Ascending monomial coefficients of `X_n(·; μ)`.
    pub before: Vec<Complex64>,
    /// Ascending monomial coefficients of `X_n(·; ν)` from the formula.
    pub after: Vec<Complex64>,
    /// `max |formula - recomputed| / max(1, max |coefficient|)`.
    #[serde(rename = "oracleResidual")]
    pub oracle_residual: Option<f64>,
}

impl GeronimusUpdate {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["power", "before_re", "before_im", "after_re", "after_im"]);
        for (k, (b, a)) in self.before.iter().zip(&self.after).enumerate() {
            t.push(vec![
                k.to_string(),
                fmt_f64(b.re),
                fmt_f64(b.im),
                fmt_f64(a.re),
                fmt_f64(a.im),
            ]);
        }
        t
    }
}

fn coefficient_residual(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = poly::max_abs(a).max(poly::max_abs(b)).max(1.0);
    poly::max_diff(a, b) / scale
}

/// `X_n(z; ν) = X_n(z; μ) - λ X_n(z0; μ) K_{n-1}(z0, z; μ) / (1 + λ K_{n-1}(z0, z0; μ))`
/// for `ν = μ + λδ_{z0}`, on the real line or the unit circle.
///
/// With `oracle` set, `X_n(·; ν)` is also recomputed from the atoms of `ν`.
pub fn geronimus_update(
    mu: &AtomicMeasure,
    z0: Complex64,
    lambda: f64,
    n: usize,
    oracle: bool,
) -> Result<GeronimusUpdate> {
    if n == 0 {
        return Err(Error::Precondition("degree must be positive".into()));
    }
    check_lambda(mu, z0, lambda)?;
    // before: X_n(μ); kernel_coeffs[k] = coefficient of z^k in K_{n-1}(z0, z).
    let (before, kernel_coeffs) = match mu.support() {
        SupportKind::RealLine => {
            if z0.im != 0.0 {
                return Err(Error::WrongSupport(format!("z0 = {z0} is not real")));
            }
            let (a, b) = monic_recurrence(mu, n)?;
            let before = poly::to_complex(&monic_coefficients_from(&a, &b, n)[n]);
            let mut kernel = vec![0.0; n];
            if n == 1 {
                kernel[0] = 1.0 / mu.total_mass();
            } else {
                let jp = stieltjes_recurrence(mu, n - 1)?;
                let p0 = jp.orthonormal_values(n - 1, z0.re)?;
                for (j, row) in jp.orthonormal_coefficients(n - 1)?.iter().enumerate() {
                    for (k, c) in row.iter().enumerate() {
                        kernel[k] += p0[j] * c;
                    }
                }
            }
            (before, poly::to_complex(&kernel))
        }
        SupportKind::UnitCircle => {
            if (z0.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::WrongSupport(format!("z0 = {z0} is not on the unit circle")));
            }
            let vp = szego_recurrence(mu, n)?;
            let before = vp.monic_coefficients(n)?.pop().unwrap();
            let (phi0, _) = vp.orthonormal_values(n - 1, z0)?;
            let mut kernel = vec![Complex64::default(); n];
            for (j, row) in vp.orthonormal_coefficients(n - 1)?.iter().enumerate() {
                for (k, c) in row.iter().enumerate() {
                    kernel[k] += phi0[j].conj() * c;
                }
            }
            (before, kernel)
        }
    };
    let after = if lambda == 0.0 {
        before.clone()
    } else {
        let x_at = poly::eval(&before, z0);
        let k_diag = poly::eval(&kernel_coeffs, z0).re;
        let c = x_at * lambda / (1.0 + lambda * k_diag);
        let mut after = before.clone();
        for (k, kc) in kernel_coeffs.iter().enumerate() {
            after[k] -= c * kc;
        }
        after
    };
    let oracle_residual = if oracle {
        let nu = updated_measure(mu, z0, lambda)?;
        let recomputed = match nu.support() {
            SupportKind::RealLine => poly::to_complex(&crate::oprl::monic_polynomial(&nu, n)?),
            SupportKind::UnitCircle => szego_recurrence(&nu, n)?.monic_coefficients(n)?.pop().unwrap(),
        };
        Some(coefficient_residual(&after, &recomputed))
    } else {
        None
    };
    Ok(GeronimusUpdate {
        z0,
        lambda,
        n,
        before,
        after,
        oracle_residual,
    })
}

/// `max_k |⟨z^k, X⟩_ν| / (‖z^k‖ ‖X‖)` over `k < deg X`.
pub fn orthogonality_residual(nu: &AtomicMeasure, coeffs: &[Complex64]) -> f64 {
    let norm_x = nu.inner_product(coeffs, coeffs).re.sqrt();
    (0..coeffs.len().saturating_sub(1))
        .map(|k| {
            let mut mono = vec![Complex64::default(); k + 1];
            mono[k] = 1.0.into();
            let norm_m = nu.inner_product(&mono, &mono).re.sqrt();
            nu.inner_product(&mono, coeffs).norm() / (norm_m * norm_x)
        })
        .fold(0.0, f64::max)
}

/// Verblunsky coefficients before and after `μ → (μ + λδ_{z0})/(1 + λ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WongUpdate {
    pub z0: Complex64,
    pub lambda: f64,
    pub before: Vec<Complex64>,
    pub after: Vec<Complex64>,
    /// `max_n |α_n(formula) - α_n(recomputed)|`.
    #[serde(rename = "oracleResidual")]
    pub oracle_residual: Option<f64>,
}

impl WongUpdate {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["n", "before_re", "before_im", "after_re", "after_im"]);
        for (k, (b, a)) in self.before.iter().zip(&self.after).enumerate() {
            t.push(vec![
                k.to_string(),
                fmt_f64(b.re),
                fmt_f64(b.im),
                fmt_f64(a.re),
                fmt_f64(a.im),
            ]);
        }
        t
    }
}

/// `α_n(ν̃) = α_n(μ) + ρ_n conj(φ_{n+1}(z0)) φ_n^*(z0) λ / (1 + λ K_n(z0, z0))`
/// for `n < count`, `μ` a probability measure on the circle.
///
/// `λ/(1 + λK)` is the same as `1/(λ⁻¹ + K)` but stays finite at `λ = 0`.
pub fn wong_update(
    mu: &AtomicMeasure,
    z0: Complex64,
    lambda: f64,
    count: usize,
    oracle: bool,
) -> Result<WongUpdate> {
    if mu.support() != SupportKind::UnitCircle {
        return Err(Error::WrongSupport("Wong's update needs a measure on the unit circle".into()));
    }
    if (z0.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::WrongSupport(format!("z0 = {z0} is not on the unit circle")));
    }
    let mass = mu.total_mass();
    if (mass - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "Wong's update needs a probability measure, mass is {mass}"
        )));
    }
    check_lambda(mu, z0, lambda)?;
    let vp = szego_recurrence(mu, count + 1)?;
    let before = vp.alpha()[..count].to_vec();
    let after = if lambda == 0.0 {
        before.clone()
    } else {
        let (phi, star) = vp.orthonormal_values(count + 1, z0)?;
        let mut k = 0.0;
        (0..count)
            .map(|n| {
                k += phi[n].norm_sqr();
                let factor = lambda / (1.0 + lambda * k);
                before[n] + phi[n + 1].conj() * star[n] * (vp.rho()[n] * factor)
            })
            .collect()
    };
    let oracle_residual = if oracle {
        let nu = updated_measure(mu, z0, lambda)?.scaled(1.0 / (1.0 + lambda))?;
        let recomputed = szego_recurrence(&nu, count)?;
        Some(poly::max_diff(&after, recomputed.alpha()))
    } else {
        None
    };
    Ok(WongUpdate {
        z0,
        lambda,
        before,
        after,
        oracle_residual,
    })
}

/// Least-squares line through `(n, ln value)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    #[serde(rename = "rSquared")]
    pub r_squared: f64,
    /// Number of points above the noise floor that entered the fit.
    pub points: usize,
    /// `slope < 0` and `R² >= 0.9`; advisory only.
    pub passes: bool,
}

/// Fits `ln v ≈ intercept + slope·n` over the points with `v > floor`.
/// Returns `None` with fewer than three such points.
pub fn log_linear_fit(ns: &[usize], values: &[f64], floor: f64) -> Option<DecayFit> {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(values)
        .filter(|(_, v)| **v > floor && v.is_finite())
        .map(|(n, v)| (*n as f64, v.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(DecayFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
        points: pts.len(),
        passes: slope < 0.0 && r_squared >= 0.9,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiDiffRow {
    pub n: usize,
    /// `κ_n(ν̃)/κ_n(μ)`.
    #[serde(rename = "kappaRatio")]
    pub kappa_ratio: f64,
    #[serde(rename = "aDiff")]
    pub a_diff: f64,
    #[serde(rename = "bDiff")]
    pub b_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiDiffs {
    pub x0: f64,
    pub lambda: f64,
    /// `(1 + λ/μ(ℝ))^{1/2}`, the limit of the κ ratio.
    #[serde(rename = "kappaTarget")]
    pub kappa_target: f64,
    pub rows: Vec<JacobiDiffRow>,
    /// Whether `x0` lies outside the hull of the rest of `μ`.
    pub isolated: bool,
    #[serde(rename = "fitA")]
    pub fit_a: Option<DecayFit>,
    #[serde(rename = "fitB")]
    pub fit_b: Option<DecayFit>,
}

impl JacobiDiffs {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["n", "kappa_ratio", "kappa_target", "a_diff", "b_diff"]);
        for r in &self.rows {
            t.push(vec![
                r.n.to_string(),
                fmt_f64(r.kappa_ratio),
                fmt_f64(self.kappa_target),
                fmt_f64(r.a_diff),
                fmt_f64(r.b_diff),
            ]);
        }
        t
    }
}

/// Differences below this are treated as rounding noise in the decay fit.
pub const DECAY_NOISE_FLOOR: f64 = 1e-13;

/// Recomputes the recurrence of `ν̃ = (μ + λδ_{x0}) / (1 + λ/μ(ℝ))`, which
/// has the mass of `μ`, and compares it with that of `μ` up to `n_max`.
pub fn jacobi_pointmass_diffs(
    mu: &AtomicMeasure,
    x0: f64,
    lambda: f64,
    n_max: usize,
) -> Result<JacobiDiffs> {
    if mu.support() != SupportKind::RealLine {
        return Err(Error::WrongSupport("Jacobi differences need a real-line measure".into()));
    }
    check_lambda(mu, x0.into(), lambda)?;
    let mass = mu.total_mass();
    let nu = if lambda == 0.0 {
        mu.clone()
    } else {
        mu.with_atom(x0.into(), lambda)?.scaled(mass / (mass + lambda))?
    };
    let jm = stieltjes_recurrence(mu, n_max)?;
    let jn = stieltjes_recurrence(&nu, n_max)?;
    let rows: Vec<JacobiDiffRow> = (1..=n_max)
        .map(|n| JacobiDiffRow {
            n,
            kappa_ratio: (jn.log_kappa(n) - jm.log_kappa(n)).exp(),
            a_diff: (jn.a(n) - jm.a(n)).abs(),
            b_diff: (jn.b(n) - jm.b(n)).abs(),
        })
        .collect();
    let rest: Vec<f64> = mu
        .atoms()
        .filter(|(z, _)| z.re != x0)
        .map(|(z, _)| z.re)
        .collect();
    let isolated = rest.iter().all(|x| *x < x0) || rest.iter().all(|x| *x > x0);
    let (fit_a, fit_b) = if isolated && lambda != 0.0 {
        let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
        let a: Vec<f64> = rows.iter().map(|r| r.a_diff).collect();
        let b: Vec<f64> = rows.iter().map(|r| r.b_diff).collect();
        (
            log_linear_fit(&ns, &a, DECAY_NOISE_FLOOR),
            log_linear_fit(&ns, &b, DECAY_NOISE_FLOOR),
        )
    } else {
        (None, None)
    };
    Ok(JacobiDiffs {
        x0,
        lambda,
        kappa_target: (1.0 + lambda / mass).sqrt(),
        rows,
        isolated,
        fit_a,
        fit_b,
    })
}
