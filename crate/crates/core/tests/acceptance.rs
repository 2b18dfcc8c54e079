//! Acceptance experiments. Each criterion prints one PASS/FAIL line with its
//! observed figures and runtime; the process exits nonzero if any fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use christoffel_core::asymptotics::{
    christoffel_limit_scan, clock_spacing, histogram_table, moment_compare, regularity_index,
    universality_scan, zero_counting_histogram, lubinsky_inequality_check,
};
use christoffel_core::config::Experiments;
use christoffel_core::kernel::{
    abc, kernel_cd_circle, kernel_cd_circle_alt, kernel_cd_real, kernel_diag_derivative,
    kernel_diag_sum, kernel_direct_circle, kernel_direct_real, scaled_diagonal,
};
use christoffel_core::oprl::stieltjes_recurrence;
use christoffel_core::opuc::szego_recurrence;
use christoffel_core::quadrature::{
    atom_mass_bound, exactness_check, gauss_rule, interlacing_check, markov_stieltjes,
};
use christoffel_core::updates::{geronimus_update, jacobi_pointmass_diffs, wong_update};
use christoffel_core::{
    Anchor, AtomicMeasure, Complex64, Error, JacobiParams, MeasureKind, NamedMeasure, SupportKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), Error>;

fn named(s: &str) -> NamedMeasure {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn real_setup(name: &str, resolution: usize, degree: usize) -> Result<(NamedMeasure, AtomicMeasure, JacobiParams), Error> {
    let m = named(name);
    let mu = m.discretize(resolution)?;
    let jp = stieltjes_recurrence(&mu, degree)?;
    Ok((m, mu, jp))
}

fn circle_measure(coeffs: &[[f64; 2]], resolution: usize) -> Result<AtomicMeasure, Error> {
    NamedMeasure::szego(coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect())
        .discretize(resolution)
}

fn run(name: &str, limit: f64, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    let (pass, detail) = match result {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => (false, format!("error: {e}")),
        Err(_) => (false, "panicked".to_string()),
    };
    let timely = secs < limit;
    let ok = pass && timely;
    let late = if timely { "" } else { " [over time limit]" };
    println!(
        "{} {name} ({secs:.2}s of {limit}s){late}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn gauss_exactness(cfg: &Experiments) -> Outcome {
    let c = &cfg.quadrature;
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut exact_2n = 0;
    let mut undetectable = 0;
    let mut wrong = Vec::new();
    for name in &c.measures {
        let (m, _, jp) = real_setup(name, c.resolution, c.n_max + 1)?;
        for n in c.n_min..=c.n_max {
            let rule = gauss_rule(&jp, n, Anchor::CornerShift(0.0))?;
            let rep = exactness_check(&rule, |k| m.exact_moment(k).re, 2 * n + 1, c.tolerance);
            worst = rep.errors[..2 * n].iter().fold(worst, |w, e| w.max(*e));
            pass &= rep.certified;
            // The degree-2n miss of a Gauss rule is ‖P_n‖² = m_2n - Σλx^2n.
            let miss = (-2.0 * jp.log_kappa(n)).exp() / m.exact_moment(2 * n).re;
            match rep.first_failure {
                Some(f) if f == 2 * n => exact_2n += 1,
                None if miss <= 10.0 * c.tolerance => undetectable += 1,
                other => {
                    pass = false;
                    wrong.push(format!("{name} n={n}: first failure {other:?}"));
                }
            }
        }
    }
    Ok((
        pass,
        format!(
            "max rel error through 2n-1 = {worst:.2e}; first failure at exactly 2n in {exact_2n} rules, \
             below tolerance (theoretical miss < 10x tol) in {undetectable}; mismatches {wrong:?}"
        ),
    ))
}

fn abc_theorem(cfg: &Experiments) -> Outcome {
    let c = &cfg.abc;
    let mut pass = true;
    let mut parts = Vec::new();
    for name in &c.measures {
        let m = named(name);
        let mu = m.discretize(c.resolution)?;
        let tol = if m.support() == SupportKind::UnitCircle { c.circle_tolerance } else { c.tolerance };
        let mut worst: f64 = 0.0;
        for n in 0..=c.n_max {
            worst = worst.max(abc(&mu, n)?.residual);
        }
        pass &= worst <= tol;
        parts.push(format!("{name}: {worst:.2e} (tol {tol:e})"));
    }
    Ok((pass, parts.join(", ")))
}

fn cd_routes(cfg: &Experiments) -> Outcome {
    let c = &cfg.cd_routes;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (m, _, jp) = real_setup(&c.real_measure, c.resolution, c.n_max + 1)?;
    let (lo, hi) = m.interval().unwrap();
    let mut worst_real: f64 = 0.0;
    let mut done = 0;
    while done < c.pairs {
        let n = rng.gen_range(1..=c.n_max);
        let pick = |rng: &mut ChaCha8Rng| {
            let x = rng.gen_range(lo..hi);
            let y = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(-0.5..0.5) };
            Complex64::new(x, y)
        };
        let (z, w) = (pick(&mut rng), pick(&mut rng));
        let cd = match kernel_cd_real(&jp, n, z, w) {
            Ok(v) => v.value,
            Err(Error::Confluent { .. }) => continue,
            Err(e) => return Err(e),
        };
        let direct = kernel_direct_real(&jp, n, z, w)?.value;
        let kz = kernel_direct_real(&jp, n, z, z)?.value.re;
        let kw = kernel_direct_real(&jp, n, w, w)?.value.re;
        worst_real = worst_real.max((cd - direct).norm() / (kz * kw).sqrt());
        done += 1;
    }
    let mu = circle_measure(&c.circle_coeffs, c.resolution)?;
    let vp = szego_recurrence(&mu, c.n_max + 1)?;
    let mut worst_circle: f64 = 0.0;
    let mut done = 0;
    while done < c.pairs {
        let n = rng.gen_range(1..=c.n_max);
        let pick = |rng: &mut ChaCha8Rng| {
            Complex64::from_polar(rng.gen_range(0.5..=1.0), rng.gen_range(0.0..2.0 * PI))
        };
        let (z, w) = (pick(&mut rng), pick(&mut rng));
        let (cd, alt) = match (kernel_cd_circle(&vp, n, z, w), kernel_cd_circle_alt(&vp, n, z, w)) {
            (Ok(a), Ok(b)) => (a.value, b.value),
            (Err(Error::Confluent { .. }), _) | (_, Err(Error::Confluent { .. })) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let direct = kernel_direct_circle(&vp, n, z, w)?.value;
        let kz = kernel_direct_circle(&vp, n, z, z)?.value.re;
        let kw = kernel_direct_circle(&vp, n, w, w)?.value.re;
        let scale = (kz * kw).sqrt();
        worst_circle = worst_circle
            .max((cd - direct).norm() / scale)
            .max((alt - direct).norm() / scale);
        done += 1;
    }
    let pass = worst_real <= c.tolerance && worst_circle <= c.tolerance;
    Ok((
        pass,
        format!(
            "{} pairs each; max |CD - direct| / sqrt(K(z,z)K(w,w)): real {worst_real:.2e}, circle {worst_circle:.2e}",
            c.pairs
        ),
    ))
}

fn interlacing(cfg: &Experiments) -> Outcome {
    let c = &cfg.interlacing;
    let mut checks = 0;
    for name in &c.measures {
        let (_, _, jp) = real_setup(name, c.resolution, c.n_max + 1)?;
        match interlacing_check(&jp, c.n_max) {
            Ok(r) => checks += r.checks,
            Err(Error::Violation(v)) => return Ok((false, format!("{name}: {v}"))),
            Err(e) => return Err(e),
        }
    }
    Ok((true, format!("{checks} conditions checked on {} measures, no violations", c.measures.len())))
}

/// `μ((-∞, x])` (closed) or `μ((-∞, x))` in closed form.
fn true_cdf(m: &NamedMeasure, x: f64, closed: bool) -> f64 {
    let base = match m.kind {
        MeasureKind::UniformInterval { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
        MeasureKind::Chebyshev2Scaled => {
            let t = x.clamp(-2.0, 2.0);
            0.5 + t * (4.0 - t * t).sqrt() / (4.0 * PI) + (t / 2.0).asin() / PI
        }
        _ => panic!("no closed-form cdf for {}", m.name()),
    };
    base + m
        .extra_atoms
        .iter()
        .filter(|(z, _)| if closed { z.re <= x } else { z.re < x })
        .map(|(_, w)| w)
        .sum::<f64>()
}

fn markov_stieltjes_bounds(cfg: &Experiments) -> Outcome {
    let c = &cfg.markov_stieltjes;
    let n_top = *c.ns.iter().max().unwrap();
    let mut pass = true;
    let mut worst_gap_err: f64 = 0.0;
    let mut worst_slack = f64::INFINITY;
    let mut uniform_gap: f64 = 0.0;
    for name in &c.measures {
        let (m, _, jp) = real_setup(name, c.resolution, n_top)?;
        let (lo, hi) = m.interval().unwrap();
        let mut xs: Vec<f64> = (0..c.points)
            .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / c.points as f64)
            .collect();
        // Put every extra atom exactly on the grid.
        for (z, _) in &m.extra_atoms {
            let j = (0..xs.len())
                .min_by(|&a, &b| (xs[a] - z.re).abs().total_cmp(&(xs[b] - z.re).abs()))
                .unwrap();
            xs[j] = z.re;
        }
        for &n in &c.ns {
            for &x0 in &xs {
                let b = markov_stieltjes(&jp, n, x0)?;
                let upper_slack = b.upper - true_cdf(&m, x0, true);
                let lower_slack = true_cdf(&m, x0, false) - b.lower;
                worst_slack = worst_slack.min(upper_slack).min(lower_slack);
                worst_gap_err = worst_gap_err.max((b.gap() - b.christoffel).abs());
                if *name == "uniform" && n == 20 {
                    uniform_gap = uniform_gap.max(b.gap());
                }
            }
        }
    }
    // The sandwich must hold up to rounding in the closed-form cdf.
    pass &= worst_slack >= -1e-12;
    pass &= worst_gap_err <= c.gap_tolerance;
    pass &= uniform_gap <= c.uniform_max_gap;
    Ok((
        pass,
        format!(
            "min sandwich slack {worst_slack:.2e}; max |gap - 1/K| {worst_gap_err:.2e}; \
             uniform n=20 max gap {uniform_gap:.4} (limit {})",
            c.uniform_max_gap
        ),
    ))
}

fn atom_mass(cfg: &Experiments) -> Outcome {
    let c = &cfg.atom_mass;
    let third = 1.0 / 3.0;
    let three = AtomicMeasure::real(&[(-1.0, third), (0.0, third), (1.0, third)], "three-point")?;
    let jp3 = stieltjes_recurrence(&three, 2)?;
    let v3 = atom_mass_bound(&jp3, 3, 0.0)?;
    let (_, _, jp) = real_setup(&c.measure, c.resolution, c.n)?;
    let seq: Vec<f64> = (1..=c.n)
        .map(|n| atom_mass_bound(&jp, n, c.x0))
        .collect::<Result<_, _>>()?;
    let monotone = seq.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-14));
    let last = seq[c.n - 1];
    let pass = (v3 - third).abs() <= 1e-12 && monotone && (last - c.mass).abs() <= c.tolerance;
    Ok((
        pass,
        format!(
            "three-point 1/K_2(0,0) - 1/3 = {:.1e}; 1/K_(n-1)(x0,x0) nonincreasing: {monotone}; \
             at n={} it is {last:.6} vs atom mass {} (|diff| {:.2e}, tolerance {:e})",
            v3 - third,
            c.n,
            c.mass,
            (last - c.mass).abs(),
            c.tolerance
        ),
    ))
}

fn christoffel_limit(cfg: &Experiments) -> Outcome {
    let c = &cfg.christoffel;
    let (m, _, jp) = real_setup(&c.measure, c.resolution, c.n)?;
    let scan = christoffel_limit_scan(&jp, &m, &c.grid.points(), &[c.n])?;
    let dev = scan.max_abs_deviation();
    let nf = c.n as f64;
    let at0 = kernel_diag_sum(&jp, c.n, 0.0)? / nf;
    let exact = (nf + 2.0) / (2.0 * nf);
    let bracket = (at0 - exact).abs() <= 1e-10 && (exact - 0.5).abs() <= 1.0 / nf;
    Ok((
        dev <= c.tolerance && bracket,
        format!(
            "max relative deviation {dev:.2e} over {} points (tol {}); (1/n)K_n(0,0) = {at0:.12} vs (n+2)/2n = {exact:.12}",
            scan.rows.len(),
            c.tolerance
        ),
    ))
}

fn universality(cfg: &Experiments) -> Outcome {
    let c = &cfg.universality;
    let (m, mu, jp) = real_setup(&c.measure, c.resolution, c.n)?;
    let g = c.grid.points();
    let mut pass = true;
    let mut parts = Vec::new();
    for p in &c.points {
        let r = universality_scan(&jp, Some(&m), &mu, p.x0, c.n, &g, &g)?;
        pass &= r.max_abs_error <= p.tolerance;
        parts.push(format!("x0={}: {:.2e} (tol {})", p.x0, r.max_abs_error, p.tolerance));
    }
    Ok((pass, format!("max |scaled kernel - sinc| {}", parts.join(", "))))
}

fn lubinsky(cfg: &Experiments) -> Outcome {
    let c = &cfg.lubinsky;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37);
    let mut worst = f64::NEG_INFINITY;
    for case in &c.cases {
        let m = named(&case.measure);
        let mu = m.discretize(c.resolution)?;
        let (lo, hi) = m.interval().unwrap();
        let pairs: Vec<(f64, f64)> = (0..c.pairs)
            .map(|_| (rng.gen_range(lo..hi), rng.gen_range(lo..hi)))
            .collect();
        let added: Vec<(f64, f64)> = case.atoms.iter().map(|a| (a[0], a[1])).collect();
        let r = lubinsky_inequality_check(&mu, &added, c.n, &pairs)?;
        worst = worst.max(r.max_violation);
    }
    Ok((
        worst <= c.tolerance,
        format!(
            "{} cases x {} pairs; max normalized violation {worst:.2e} (tol {:e})",
            c.cases.len(),
            c.pairs,
            c.tolerance
        ),
    ))
}

fn clock(cfg: &Experiments) -> Outcome {
    let c = &cfg.clock;
    let (m, mu, jp) = real_setup(&c.measure, c.resolution, c.n)?;
    let r = clock_spacing(&jp, Some(&m), &mu, c.x0, c.n, c.j)?;
    let err = r.max_spacing_error();
    let first = r.first_zero_scaled;
    Ok((
        err <= c.tolerance && first <= 1.0 + c.tolerance,
        format!(
            "max |n c_n dx_j - 1| = {err:.2e} for |j| <= {}; n c_n (x_0 - x0) = {first:.4}",
            c.j
        ),
    ))
}

fn weak_limit_moments(cfg: &Experiments) -> Outcome {
    let c = &cfg.moments;
    let n_top = *c.ns.iter().max().unwrap() + 1;
    let mut pass = true;
    let mut worst_ratio: f64 = 0.0;
    for name in &c.measures {
        let (_, mu, jp) = real_setup(name, c.resolution, n_top)?;
        for &n in &c.ns {
            let cmp = moment_compare(&jp, &mu, n, c.l_max)?;
            pass &= cmp.within_bound();
            for r in cmp.rows.iter().skip(1) {
                worst_ratio = worst_ratio.max(r.difference / r.bound);
            }
        }
    }
    Ok((pass, format!("max difference / (l R^l/(n+1)) = {worst_ratio:.3}")))
}

fn point_mass_updates(cfg: &Experiments) -> Outcome {
    let c = &cfg.updates;
    let tol = c.tolerance;
    let mu = named(&c.real_measure).discretize(c.resolution)?;
    let x0 = Complex64::new(c.real_atom, 0.0);
    let mut real_worst: f64 = 0.0;
    for n in 1..=c.real_n_max {
        let u = geronimus_update(&mu, x0, c.real_lambda, n, true)?;
        real_worst = real_worst.max(u.oracle_residual.unwrap());
    }
    let circle = circle_measure(&c.circle_coeffs, c.resolution)?;
    let z0 = Complex64::from_polar(1.0, c.circle_z0_angle);
    let mut circle_worst: f64 = 0.0;
    for n in 1..=c.circle_n_max {
        let u = geronimus_update(&circle, z0, c.circle_lambda, n, true)?;
        circle_worst = circle_worst.max(u.oracle_residual.unwrap());
    }
    let w = wong_update(&circle, z0, c.circle_lambda, c.circle_n_max, true)?;
    let wong_worst = w.oracle_residual.unwrap();

    let leb = NamedMeasure::lebesgue_circle().discretize(c.resolution)?;
    let w1 = wong_update(&leb, Complex64::new(1.0, 0.0), 1.0, c.circle_n_max, true)?;
    let closed_form = w1
        .after
        .iter()
        .enumerate()
        .map(|(n, a)| (a - 1.0 / (n as f64 + 2.0)).norm())
        .fold(0.0, f64::max);

    let zero = geronimus_update(&mu, x0, 0.0, c.real_n_max, false)?.after
        == geronimus_update(&mu, x0, 0.0, c.real_n_max, false)?.before
        && geronimus_update(&circle, z0, 0.0, c.circle_n_max, false).map(|u| u.after == u.before)?
        && wong_update(&circle, z0, 0.0, c.circle_n_max, false).map(|u| u.after == u.before)?
        && jacobi_pointmass_diffs(&mu, c.real_atom, 0.0, c.real_n_max)?
            .rows
            .iter()
            .all(|r| r.a_diff == 0.0 && r.b_diff == 0.0 && r.kappa_ratio == 1.0);
    let pass = real_worst <= tol
        && circle_worst <= tol
        && wong_worst <= tol
        && w1.oracle_residual.unwrap() <= tol
        && closed_form <= 1e-8
        && zero;
    Ok((
        pass,
        format!(
            "oracle residuals: Geronimus real {real_worst:.2e} (n<={}), circle {circle_worst:.2e} (n<={}), \
             Wong {wong_worst:.2e}; Lebesgue+delta_1 |alpha_n - 1/(n+2)| {closed_form:.2e}; lambda=0 exact: {zero}",
            c.real_n_max, c.circle_n_max
        ),
    ))
}

fn derivative_formula(cfg: &Experiments) -> Outcome {
    let c = &cfg.derivative;
    let n_top = *c.ns.iter().max().unwrap();
    let h = c.step;
    let mut worst: f64 = 0.0;
    for name in &c.measures {
        let (_, _, jp) = real_setup(name, c.resolution, n_top)?;
        for &n in &c.ns {
            for &x0 in &c.points {
                let d = kernel_diag_derivative(&jp, n, x0)?;
                let fd = (scaled_diagonal(&jp, n, x0, h)? - scaled_diagonal(&jp, n, x0, -h)?) / (2.0 * h);
                worst = worst.max((d - fd).abs() / d.abs().max(fd.abs()));
            }
        }
    }
    Ok((
        worst <= c.tolerance,
        format!("max relative difference to central differences (h = {h:e}) {worst:.2e}"),
    ))
}

fn zero_counting(cfg: &Experiments) -> Outcome {
    let c = &cfg.zero_counting;
    let (m, _, jp) = real_setup(&c.measure, c.resolution, c.n)?;
    let bins = zero_counting_histogram(&jp, c.n, m.interval().unwrap(), c.bins)?;
    let worst = bins
        .iter()
        .map(|b| (b.observed - b.expected).abs())
        .fold(0.0, f64::max);
    let (rm, _, rjp) = real_setup(&c.regularity_measure, c.regularity_resolution, c.regularity_n)?;
    let row = regularity_index(&rjp, rm.interval().unwrap(), &[c.regularity_n])?.remove(0);
    let gap = (row.geometric_mean - row.capacity).abs();
    Ok((
        worst <= c.tolerance && gap <= c.regularity_tolerance,
        format!(
            "max bin density deviation {worst:.2e} over {} bins; (a_1..a_n)^(1/n) at n={} is {:.6} vs capacity {}",
            c.bins, c.regularity_n, row.geometric_mean, row.capacity
        ),
    ))
}

/// Artifact bytes from a representative subset of the experiments.
fn artifacts(cfg: &Experiments) -> Result<Vec<String>, Error> {
    let mut out = Vec::new();
    let u = &cfg.universality;
    let (m, mu, jp) = real_setup(&u.measure, u.resolution, u.n)?;
    let g = u.grid.points();
    let r = universality_scan(&jp, Some(&m), &mu, u.points[0].x0, u.n, &g, &g)?;
    out.push(serde_json::to_string_pretty(&r).unwrap());
    out.push(r.to_table().to_csv());
    let z = &cfg.zero_counting;
    let bins = zero_counting_histogram(&jp, z.n, m.interval().unwrap(), z.bins)?;
    out.push(histogram_table(&bins).to_csv());
    let q = &cfg.quadrature;
    let (_, _, qjp) = real_setup(&q.measures[0], q.resolution, q.n_max + 1)?;
    let rule = gauss_rule(&qjp, q.n_max, Anchor::Point(0.3))?;
    out.push(serde_json::to_string_pretty(&rule).unwrap());
    out.push(rule.to_table().to_csv());
    let l = &cfg.lubinsky;
    let lmu = named(&l.cases[0].measure).discretize(l.resolution)?;
    let added: Vec<(f64, f64)> = l.cases[0].atoms.iter().map(|a| (a[0], a[1])).collect();
    let pairs: Vec<(f64, f64)> = (0..l.pairs).map(|i| (-1.9 + 0.037 * i as f64, 1.3 - 0.021 * i as f64)).collect();
    out.push(serde_json::to_string(&lubinsky_inequality_check(&lmu, &added, l.n, &pairs)?).unwrap());
    Ok(out)
}

fn determinism(cfg: &Experiments) -> Outcome {
    let in_pool = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| artifacts(cfg))
    };
    let one = in_pool(1)?;
    let four = in_pool(4)?;
    let again = in_pool(4)?;
    let same = one == four && four == again;
    let bytes: usize = one.iter().map(String::len).sum();
    Ok((
        same,
        format!("{} artifacts ({bytes} bytes) identical across 1, 4 and 4 threads: {same}", one.len()),
    ))
}

fn main() {
    let cfg = Experiments::frozen();
    let results = [
        run("gauss quadrature exactness", 5.0, || gauss_exactness(&cfg)),
        run("abc theorem", 1.0, || abc_theorem(&cfg)),
        run("cd route agreement", 5.0, || cd_routes(&cfg)),
        run("interlacing and sign condition", 5.0, || interlacing(&cfg)),
        run("markov-stieltjes bounds", 10.0, || markov_stieltjes_bounds(&cfg)),
        run("atom mass bound", 5.0, || atom_mass(&cfg)),
        run("diagonal christoffel limit", 60.0, || christoffel_limit(&cfg)),
        run("bulk universality", 120.0, || universality(&cfg)),
        run("lubinsky inequality", 5.0, || lubinsky(&cfg)),
        run("clock spacing", 60.0, || clock(&cfg)),
        run("weak-limit moments", 10.0, || weak_limit_moments(&cfg)),
        run("point-mass updates", 10.0, || point_mass_updates(&cfg)),
        run("kernel diagonal derivative", 30.0, || derivative_formula(&cfg)),
        run("zero counting and regularity", 30.0, || zero_counting(&cfg)),
        run("determinism across thread counts", 600.0, || determinism(&cfg)),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
