//! One function per subcommand. Each returns its tables, the checks that
//! decide the exit code, and a JSON report for the summary file.

use std::f64::consts::PI;

use christoffel_core::asymptotics::{clock_spacing, moment_compare, universality_scan, ExperimentSummary};
use christoffel_core::kernel::{
    kernel_cd_circle, kernel_cd_circle_alt, kernel_cd_real, kernel_diag_real, kernel_diag_sum,
    kernel_direct_circle, kernel_direct_real,
};
use christoffel_core::opuc::szego_recurrence;
use christoffel_core::oprl::stieltjes_recurrence;
use christoffel_core::quadrature::{exactness_check, gauss_rule, interlacing_check, markov_stieltjes};
use christoffel_core::table::{fmt_f64, Table};
use christoffel_core::updates::{geronimus_update, jacobi_pointmass_diffs, wong_update};
use christoffel_core::{
    Anchor, AtomicMeasure, Complex64, Error, JacobiParams, SupportKind, VerblunskyParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Command, Resolved};
use crate::error::CliError;

pub struct Outcome {
    /// `(file stem, table)`, written as `<stem>.csv`.
    pub tables: Vec<(String, Table)>,
    pub checks: Vec<ExperimentSummary>,
    pub report: Value,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Moment degree of the weak-limit comparison.
const WEAK_MOMENT_ORDER: usize = 8;
/// Random pairs drawn by `verify` for the CD-route check.
const VERIFY_PAIRS: usize = 200;
/// Random pairs drawn by `verify` for the reproducing property.
const REPRODUCING_PAIRS: usize = 10;

pub fn run(r: &Resolved) -> Result<Outcome, CliError> {
    let mu = r.source.to_atomic()?;
    match r.command {
        Command::Moments => moments(r, &mu),
        Command::Recurrence => recurrence(r, &mu),
        Command::Kernel => match mu.support() {
            SupportKind::RealLine => kernel_line(r, &mu),
            SupportKind::UnitCircle => kernel_circle(r, &mu),
        },
        Command::Quadrature => quadrature(r, &real_only(&mu, "quadrature")?),
        Command::Bounds => bounds(r, &real_only(&mu, "bounds")?),
        Command::Universality => universality(r, &real_only(&mu, "universality")?),
        Command::Clock => clock(r, &real_only(&mu, "clock")?),
        Command::Update => update(r, &mu),
        Command::Verify => match mu.support() {
            SupportKind::RealLine => verify_line(r, &mu),
            SupportKind::UnitCircle => verify_circle(r, &mu),
        },
    }
}

fn real_only(mu: &AtomicMeasure, what: &str) -> Result<AtomicMeasure, CliError> {
    if mu.support() != SupportKind::RealLine {
        return Err(Error::WrongSupport(format!("`{what}` needs a measure on the real line")).into());
    }
    Ok(mu.clone())
}

/// Coefficients through degree `n + 1`, as the CD formula needs.
fn jacobi(mu: &AtomicMeasure, n: usize) -> Result<JacobiParams, CliError> {
    Ok(stieltjes_recurrence(mu, n + 1)?)
}

fn verblunsky(mu: &AtomicMeasure, n: usize) -> Result<VerblunskyParams, CliError> {
    Ok(szego_recurrence(mu, n + 1)?)
}

fn check(name: &str, params: Value, max_error: f64, tolerance: f64) -> ExperimentSummary {
    ExperimentSummary::new(name, params, max_error, tolerance)
}

/// Zero when `ok`, one otherwise, against tolerance zero.
fn flag(name: &str, params: Value, ok: bool) -> ExperimentSummary {
    check(name, params, if ok { 0.0 } else { 1.0 }, 0.0)
}

fn moments(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let n = r.n();
    let m = mu.moments(n);
    let mut t = Table::new(&["j", "k", "re", "im"]);
    for j in 0..m.dim() {
        for k in 0..m.dim() {
            let v = m.get(j, k);
            t.push(vec![j.to_string(), k.to_string(), fmt_f64(v.re), fmt_f64(v.im)]);
        }
    }
    let mut checks = vec![flag(
        "moment-structure",
        json!({ "n": n, "structure": m.structure }),
        m.has_exact_structure() && m.is_hermitian(),
    )];
    let mut tables = vec![("moments".to_string(), t)];
    let mut report = json!({ "n": n, "structure": m.structure, "maxAbs": m.max_abs() });
    if mu.support() == SupportKind::RealLine && n >= 2 {
        let jp = jacobi(mu, n)?;
        let cmp = moment_compare(&jp, mu, n, WEAK_MOMENT_ORDER)?;
        let worst = cmp
            .rows
            .iter()
            .filter(|row| row.l > 0)
            .map(|row| row.difference / row.bound)
            .fold(0.0, f64::max);
        checks.push(check("weak-limit-moments", json!({ "n": n, "lMax": WEAK_MOMENT_ORDER }), worst, 1.0));
        tables.push(("weak_moments".to_string(), cmp.to_table()));
        report["weakMoments"] = serde_json::to_value(&cmp).expect("serializable");
    }
    Ok(Outcome { tables, checks, report })
}

fn recurrence(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let n = r.n();
    let (table, report) = match mu.support() {
        SupportKind::RealLine => {
            let jp = stieltjes_recurrence(mu, n)?;
            let report = json!({ "mass0": jp.mass0(), "logKappa": jp.log_kappa(n), "a": jp.a_slice(), "b": jp.b_slice() });
            (jp.to_table(), report)
        }
        SupportKind::UnitCircle => {
            let vp = szego_recurrence(mu, n)?;
            let report = json!({ "mass0": vp.mass0(), "logKappa": vp.log_kappa(n), "alpha": vp.alpha() });
            (vp.to_table(), report)
        }
    };
    Ok(Outcome {
        tables: vec![("recurrence".to_string(), table)],
        checks: Vec::new(),
        report,
    })
}

fn kernel_line(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let (n, x0) = (r.n(), r.x0());
    let jp = jacobi(mu, n)?;
    let k00 = kernel_diag_sum(&jp, n, x0)?;
    let z = Complex64::new(x0, 0.0);
    let rows = r
        .grid_points()
        .par_iter()
        .map(|&y| -> Result<_, Error> {
            let w = Complex64::new(y, 0.0);
            let direct = kernel_direct_real(&jp, n, z, w)?.value.re;
            let (formula, route) = match kernel_cd_real(&jp, n, z, w) {
                Ok(v) => (v.value.re, v.route),
                Err(Error::Confluent { .. }) => {
                    let v = kernel_diag_real(&jp, n, x0)?;
                    (v.value.re, v.route)
                }
                Err(e) => return Err(e),
            };
            let scale = (k00 * kernel_diag_sum(&jp, n, y)?).sqrt();
            Ok((y, direct, formula, route, (formula - direct).abs() / scale))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["x", "y", "direct", "formula", "route", "relative_difference"]);
    let mut worst: f64 = 0.0;
    for (y, direct, formula, route, rel) in rows {
        worst = worst.max(rel);
        t.push(vec![
            fmt_f64(x0),
            fmt_f64(y),
            fmt_f64(direct),
            fmt_f64(formula),
            route.name().to_string(),
            fmt_f64(rel),
        ]);
    }
    Ok(Outcome {
        tables: vec![("kernel".to_string(), t)],
        checks: vec![check("kernel-routes", json!({ "n": n, "x0": x0 }), worst, r.tolerance())],
        report: json!({ "n": n, "x0": x0, "diagonal": k00 }),
    })
}

fn kernel_circle(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let (n, z) = (r.n(), r.z0());
    let vp = verblunsky(mu, n)?;
    let kzz = kernel_direct_circle(&vp, n, z, z)?.value.re;
    let rows = r
        .grid_points()
        .par_iter()
        .map(|&theta| -> Result<_, Error> {
            let w = Complex64::from_polar(1.0, theta);
            let direct = kernel_direct_circle(&vp, n, z, w)?.value;
            let routes = match (kernel_cd_circle(&vp, n, z, w), kernel_cd_circle_alt(&vp, n, z, w)) {
                (Ok(a), Ok(b)) => Some((a.value, b.value)),
                (Err(Error::Confluent { .. }), _) | (_, Err(Error::Confluent { .. })) => None,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            };
            let scale = (kzz * kernel_direct_circle(&vp, n, w, w)?.value.re).sqrt();
            let rel = routes.map_or(0.0, |(a, b)| ((a - direct).norm() / scale).max((b - direct).norm() / scale));
            Ok((theta, direct, routes, rel))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&[
        "theta", "direct_re", "direct_im", "cd_re", "cd_im", "cd_alt_re", "cd_alt_im", "relative_difference",
    ]);
    let mut worst: f64 = 0.0;
    for (theta, direct, routes, rel) in rows {
        worst = worst.max(rel);
        let (a, b) = routes.map_or((String::new(), String::new()), |(a, _)| (fmt_f64(a.re), fmt_f64(a.im)));
        let (c, d) = routes.map_or((String::new(), String::new()), |(_, b)| (fmt_f64(b.re), fmt_f64(b.im)));
        t.push(vec![fmt_f64(theta), fmt_f64(direct.re), fmt_f64(direct.im), a, b, c, d, fmt_f64(rel)]);
    }
    Ok(Outcome {
        tables: vec![("kernel".to_string(), t)],
        checks: vec![check("kernel-routes", json!({ "n": n, "z0": [z.re, z.im] }), worst, r.tolerance())],
        report: json!({ "n": n, "z0": [z.re, z.im], "diagonal": kzz }),
    })
}

fn quadrature(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let n = r.n();
    let jp = stieltjes_recurrence(mu, n)?;
    let anchor = r.config.x0.map_or(Anchor::CornerShift(0.0), Anchor::Point);
    let rule = gauss_rule(&jp, n, anchor)?;
    let moment = |k: usize| mu.integrate_real(|x| x.powi(k as i32));
    let report = exactness_check(&rule, moment, rule.exact_degree + 1, r.tolerance());
    if let Some(w) = &rule.warning {
        eprintln!("warning: {w}");
    }
    let worst = report.errors[..=rule.exact_degree].iter().copied().fold(0.0, f64::max);
    Ok(Outcome {
        tables: vec![("quadrature".to_string(), rule.to_table())],
        checks: vec![check("exactness", json!({ "n": n, "exactDegree": rule.exact_degree }), worst, r.tolerance())],
        report: json!({ "rule": rule, "exactness": report }),
    })
}

fn bounds(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let n = r.n();
    if n < 2 {
        return Err(CliError::Config("bounds need --n >= 2".into()));
    }
    let jp = stieltjes_recurrence(mu, n)?;
    let tol = r.tolerance() * mu.total_mass();
    let rows = r
        .grid_points()
        .par_iter()
        .map(|&x| -> Result<_, Error> {
            let b = markov_stieltjes(&jp, n, x)?;
            let open = mu.cdf(x, false)?;
            let closed = mu.cdf(x, true)?;
            let expected_gap = 1.0 / kernel_diag_sum(&jp, n - 1, x)?;
            Ok((b, open, closed, expected_gap))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["x0", "lower", "upper", "cdf_open", "cdf_closed", "gap"]);
    let mut sandwich: f64 = 0.0;
    let mut gap_error: f64 = 0.0;
    for (b, open, closed, expected_gap) in rows {
        sandwich = sandwich.max(b.lower - open).max(closed - b.upper);
        gap_error = gap_error.max((b.gap() - expected_gap).abs() / expected_gap);
        t.push_f64(&[b.x0, b.lower, b.upper, open, closed, b.gap()]);
    }
    Ok(Outcome {
        tables: vec![("bounds".to_string(), t)],
        checks: vec![
            check("sandwich", json!({ "n": n }), sandwich.max(0.0), tol),
            check("gap-is-christoffel", json!({ "n": n }), gap_error, r.tolerance()),
        ],
        report: json!({ "n": n }),
    })
}

fn universality(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let (n, x0) = (r.n(), r.x0());
    let jp = jacobi(mu, n)?;
    let grid = r.grid_points();
    let report = universality_scan(&jp, r.named(), mu, x0, n, &grid, &grid)?;
    Ok(Outcome {
        tables: vec![("universality".to_string(), report.to_table())],
        checks: vec![check("sine-kernel", json!({ "n": n, "x0": x0 }), report.max_abs_error, r.tolerance())],
        report: serde_json::to_value(&report).expect("serializable"),
    })
}

fn clock(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let (n, x0) = (r.n(), r.x0());
    let jp = jacobi(mu, n)?;
    let report = clock_spacing(&jp, r.named(), mu, x0, n, r.j())?;
    Ok(Outcome {
        tables: vec![("clock".to_string(), report.to_table())],
        checks: vec![check(
            "clock-spacing",
            json!({ "n": n, "x0": x0, "j": r.j() }),
            report.max_spacing_error(),
            r.tolerance(),
        )],
        report: serde_json::to_value(&report).expect("serializable"),
    })
}

fn update(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let (n, lambda) = (r.n(), r.lambda());
    let oracle = !r.skip_oracle();
    let z0 = match mu.support() {
        SupportKind::RealLine => Complex64::new(r.x0(), 0.0),
        SupportKind::UnitCircle => r.z0(),
    };
    let g = geronimus_update(mu, z0, lambda, n, oracle)?;
    let mut tables = vec![("update".to_string(), g.to_table())];
    let mut checks = Vec::new();
    let mut report = json!({ "geronimus": g });
    if let Some(res) = g.oracle_residual {
        checks.push(check("update-oracle", json!({ "n": n, "lambda": lambda }), res, r.tolerance()));
    }
    match mu.support() {
        SupportKind::RealLine => {
            let d = jacobi_pointmass_diffs(mu, z0.re, lambda, n)?;
            tables.push(("jacobi_diffs".to_string(), d.to_table()));
            report["jacobiDiffs"] = serde_json::to_value(&d).expect("serializable");
        }
        SupportKind::UnitCircle if (mu.total_mass() - 1.0).abs() <= 1e-12 => {
            let w = wong_update(mu, z0, lambda, n, oracle)?;
            if let Some(res) = w.oracle_residual {
                checks.push(check("verblunsky-oracle", json!({ "n": n, "lambda": lambda }), res, r.tolerance()));
            }
            tables.push(("verblunsky_update".to_string(), w.to_table()));
            report["verblunsky"] = serde_json::to_value(&w).expect("serializable");
        }
        SupportKind::UnitCircle => {
            eprintln!("note: Verblunsky update skipped, the measure is not a probability measure");
        }
    }
    Ok(Outcome { tables, checks, report })
}

/// `max |Σ_atoms K(z, x) K(x, w) w_x - K(z, w)| / sqrt(K(z, z) K(w, w))`.
fn reproducing_error<F>(mu: &AtomicMeasure, pairs: &[(Complex64, Complex64)], kernel: F) -> Result<f64, Error>
where
    F: Fn(Complex64, Complex64) -> Result<Complex64, Error> + Sync,
{
    let errors = pairs
        .par_iter()
        .map(|&(z, w)| {
            let mut lhs = Complex64::new(0.0, 0.0);
            for (x, wt) in mu.atoms() {
                lhs += kernel(z, x)? * kernel(x, w)? * wt;
            }
            let rhs = kernel(z, w)?;
            let scale = (kernel(z, z)?.re * kernel(w, w)?.re).sqrt();
            Ok((lhs - rhs).norm() / scale)
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    Ok(errors.into_iter().fold(0.0, f64::max))
}

/// `max |CD - direct| / sqrt(K(z, z) K(w, w))` over degree-tagged pairs;
/// confluent pairs are skipped.
fn route_error<F>(pairs: &[(usize, Complex64, Complex64)], compare: F) -> Result<(f64, usize), Error>
where
    F: Fn(usize, Complex64, Complex64) -> Result<Option<f64>, Error> + Sync,
{
    let errors = pairs
        .par_iter()
        .map(|&(n, z, w)| compare(n, z, w))
        .collect::<Result<Vec<_>, Error>>()?;
    let used = errors.iter().flatten().count();
    Ok((errors.into_iter().flatten().fold(0.0, f64::max), used))
}

fn verify_line(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let n = r.n();
    let tol = r.tolerance();
    let jp = jacobi(mu, n)?;
    let mut checks = Vec::new();
    let mut t = Table::new(&["check", "max_error", "tolerance", "pass"]);

    let interlacing = match interlacing_check(&jp, n) {
        Ok(rep) => {
            eprintln!("interlacing: {} conditions checked", rep.checks);
            true
        }
        Err(Error::Violation(v)) => {
            eprintln!("interlacing: {v}");
            false
        }
        Err(e) => return Err(e.into()),
    };
    checks.push(flag("interlacing", json!({ "nMax": n }), interlacing));

    let (lo, hi) = mu.hull();
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed());
    let pick = |rng: &mut ChaCha8Rng| {
        let x = rng.gen_range(lo..hi);
        let y = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(-0.5..0.5) };
        Complex64::new(x, y)
    };
    let pairs: Vec<_> = (0..VERIFY_PAIRS)
        .map(|_| (rng.gen_range(1..=n), pick(&mut rng), pick(&mut rng)))
        .collect();
    let (routes, used) = route_error(&pairs, |k, z, w| {
        let cd = match kernel_cd_real(&jp, k, z, w) {
            Ok(v) => v.value,
            Err(Error::Confluent { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let direct = kernel_direct_real(&jp, k, z, w)?.value;
        let kz = kernel_direct_real(&jp, k, z, z)?.value.re;
        let kw = kernel_direct_real(&jp, k, w, w)?.value.re;
        Ok(Some((cd - direct).norm() / (kz * kw).sqrt()))
    })?;
    checks.push(check("cd-routes", json!({ "pairs": used, "nMax": n }), routes, tol));

    let pairs: Vec<_> = (0..REPRODUCING_PAIRS)
        .map(|_| (pick(&mut rng), pick(&mut rng)))
        .collect();
    let reproducing = reproducing_error(mu, &pairs, |z, w| {
        Ok(kernel_direct_real(&jp, n, z, w)?.value)
    })?;
    checks.push(check("reproducing", json!({ "pairs": REPRODUCING_PAIRS, "n": n }), reproducing, tol));

    for c in &checks {
        t.push(vec![c.experiment.clone(), fmt_f64(c.max_error), fmt_f64(c.tolerance), c.pass.to_string()]);
    }
    Ok(Outcome {
        tables: vec![("verify".to_string(), t)],
        checks,
        report: json!({ "n": n, "seed": r.seed() }),
    })
}

fn verify_circle(r: &Resolved, mu: &AtomicMeasure) -> Result<Outcome, CliError> {
    let n = r.n();
    let tol = r.tolerance();
    let vp = verblunsky(mu, n)?;
    let mut checks = Vec::new();
    let mut t = Table::new(&["check", "max_error", "tolerance", "pass"]);

    let mut rng = ChaCha8Rng::seed_from_u64(r.seed());
    let pick = |rng: &mut ChaCha8Rng| Complex64::from_polar(rng.gen_range(0.5..=1.0), rng.gen_range(0.0..2.0 * PI));
    let pairs: Vec<_> = (0..VERIFY_PAIRS)
        .map(|_| (rng.gen_range(1..=n), pick(&mut rng), pick(&mut rng)))
        .collect();
    let (routes, used) = route_error(&pairs, |k, z, w| {
        let (cd, alt) = match (kernel_cd_circle(&vp, k, z, w), kernel_cd_circle_alt(&vp, k, z, w)) {
            (Ok(a), Ok(b)) => (a.value, b.value),
            (Err(Error::Confluent { .. }), _) | (_, Err(Error::Confluent { .. })) => return Ok(None),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let direct = kernel_direct_circle(&vp, k, z, w)?.value;
        let kz = kernel_direct_circle(&vp, k, z, z)?.value.re;
        let kw = kernel_direct_circle(&vp, k, w, w)?.value.re;
        let scale = (kz * kw).sqrt();
        Ok(Some(((cd - direct).norm() / scale).max((alt - direct).norm() / scale)))
    })?;
    checks.push(check("cd-routes", json!({ "pairs": used, "nMax": n }), routes, tol));

    let pairs: Vec<_> = (0..REPRODUCING_PAIRS)
        .map(|_| (pick(&mut rng), pick(&mut rng)))
        .collect();
    let reproducing = reproducing_error(mu, &pairs, |z, w| Ok(kernel_direct_circle(&vp, n, z, w)?.value))?;
    checks.push(check("reproducing", json!({ "pairs": REPRODUCING_PAIRS, "n": n }), reproducing, tol));

    for c in &checks {
        t.push(vec![c.experiment.clone(), fmt_f64(c.max_error), fmt_f64(c.tolerance), c.pass.to_string()]);
    }
    Ok(Outcome {
        tables: vec![("verify".to_string(), t)],
        checks,
        report: json!({ "n": n, "seed": r.seed() }),
    })
}
