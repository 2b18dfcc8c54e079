//! Worked values with known answers, exercised through the public API.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use christoffel_core::asymptotics::{
    ac_set_diagnostic, christoffel_limit_scan, clock_spacing, kernel_measure,
    lubinsky_inequality_check, nevai_delta_metric, nevai_second_moment_direct, universality_scan,
    AcClass,
};
use christoffel_core::kernel::{kernel_diag_sum, kernel_direct_circle};
use christoffel_core::oprl::stieltjes_recurrence;
use christoffel_core::opuc::szego_recurrence;
use christoffel_core::quadrature::{
    atom_mass_bound, exactness_check, gauss_rule, interlacing_check, interval_bounds,
    markov_stieltjes, spacing_lower_bound_check, zeros_pn,
};
use christoffel_core::updates::{
    geronimus_update, jacobi_pointmass_diffs, orthogonality_residual, wong_update,
};
use christoffel_core::{Anchor, AtomicMeasure, Complex64, Error, JacobiParams, NamedMeasure};

fn setup(name: &str, resolution: usize, degree: usize) -> (NamedMeasure, AtomicMeasure, JacobiParams) {
    let m: NamedMeasure = name.parse().unwrap();
    let mu = m.discretize(resolution).unwrap();
    let jp = stieltjes_recurrence(&mu, degree).unwrap();
    (m, mu, jp)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn chebyshev_second_kind_at_origin() {
    let (_, _, jp) = setup("chebyshev2", 512, 10);
    let p = jp.orthonormal_values(4, 0.0).unwrap();
    assert_relative_eq!(p[2], -1.0, epsilon = 1e-12);
    assert!(p[1].abs() < 1e-12 && p[3].abs() < 1e-12);
    assert_relative_eq!(p[4], 1.0, epsilon = 1e-12);
}

#[test]
fn lebesgue_circle_kernel_reduces_to_geometric_sum() {
    let mu = NamedMeasure::lebesgue_circle().discretize(256).unwrap();
    let vp = szego_recurrence(&mu, 16).unwrap();
    for a in vp.alpha() {
        assert!(a.norm() <= 1e-12);
    }
    let (r, theta, phi, n) = (0.6, 0.4, -1.3, 12);
    let z = Complex64::from_polar(r, theta);
    let zeta = Complex64::from_polar(1.0, phi);
    let e = Complex64::from_polar(1.0, phi - theta);
    let geometric: Complex64 = (0..=n).map(|j| (e * r).powu(j as u32)).sum();
    let closed = (c(1.0, 0.0) - (e * r).powu(n as u32 + 1)) / (c(1.0, 0.0) - e * r);
    let k = kernel_direct_circle(&vp, n, z, zeta).unwrap().value;
    assert!((k - closed).norm() <= 1e-12 * closed.norm());
    assert!((k - geometric).norm() <= 1e-12 * closed.norm());
}

#[test]
fn two_point_gauss_rule_misses_degree_four() {
    let (m, _, jp) = setup("uniform", 256, 10);
    let rule = gauss_rule(&jp, 2, Anchor::CornerShift(0.0)).unwrap();
    assert_eq!(rule.exact_degree, 3);
    assert_relative_eq!(rule.apply(|x| x.powi(4)), 1.0 / 9.0, epsilon = 1e-14);
    assert_relative_eq!(rule.apply(|x| x.powi(3)), 0.0, epsilon = 1e-15);
    let rep = exactness_check(&rule, |k| m.exact_moment(k).re, 5, 1e-12);
    assert!(rep.certified);
    assert_eq!(rep.first_failure, Some(4));
}

#[test]
fn chebyshev_ten_point_rule_is_exact_to_nineteen() {
    let (m, _, jp) = setup("chebyshev2", 1024, 20);
    let rule = gauss_rule(&jp, 10, Anchor::CornerShift(0.0)).unwrap();
    let rep = exactness_check(&rule, |k| m.exact_moment(k).re, 19, 1e-10);
    assert!(rep.certified, "{:?}", rep.errors);
    assert!(rep.errors.iter().all(|e| *e <= 1e-10));
}

#[test]
fn anchored_rule_at_origin_degenerates() {
    let (_, _, jp) = setup("uniform", 256, 10);
    let rule = gauss_rule(&jp, 2, Anchor::Point(0.0)).unwrap();
    assert!(rule.degenerate);
    assert_eq!(rule.nodes.len(), 1);
    assert!(rule.nodes[0].abs() < 1e-15);
    assert_relative_eq!(rule.weights[0], 1.0, epsilon = 1e-14);
}

#[test]
fn interval_bounds_sandwich_true_mass() {
    let (_, _, jp) = setup("uniform", 512, 20);
    let rule = gauss_rule(&jp, 12, Anchor::CornerShift(0.0)).unwrap();
    for (l, k) in [(0, 11), (2, 5), (3, 9), (5, 6)] {
        let (inner, outer) = interval_bounds(&rule, l, k).unwrap();
        let exact = 0.5 * (rule.nodes[k] - rule.nodes[l]);
        assert!(inner <= exact && exact <= outer, "({l},{k}): {inner} {exact} {outer}");
    }
    assert!(interval_bounds(&rule, 4, 4).is_err());
}

#[test]
fn markov_stieltjes_examples() {
    let (_, _, jp) = setup("uniform", 256, 10);
    let x0 = 1.0 / 3f64.sqrt();
    let b = markov_stieltjes(&jp, 2, x0).unwrap();
    assert_relative_eq!(b.upper, 1.0, epsilon = 1e-12);
    assert_relative_eq!(b.lower, 0.5, epsilon = 1e-12);
    let cdf = 0.5 * (1.0 + x0);
    assert!(b.lower <= cdf && cdf <= b.upper);

    let w = 1.0 / 3.0;
    let atoms = AtomicMeasure::real(&[(-1.0, w), (0.0, w), (1.0, w)], "three").unwrap();
    let jp = stieltjes_recurrence(&atoms, 2).unwrap();
    assert_relative_eq!(atom_mass_bound(&jp, 3, 0.0).unwrap(), 1.0 / 3.0, epsilon = 1e-14);
}

#[test]
fn atom_mass_bound_tends_to_zero_without_atoms() {
    let (_, _, jp) = setup("chebyshev2", 1024, 100);
    for n in [11, 41, 81] {
        let bound = atom_mass_bound(&jp, n, 0.0).unwrap();
        assert_relative_eq!(bound, 2.0 / (n as f64 + 1.0), max_relative = 1e-10);
    }
}

#[test]
fn interlacing_holds_for_standard_weights() {
    for name in ["chebyshev2", "uniform"] {
        let (_, _, jp) = setup(name, 1024, 60);
        let rep = interlacing_check(&jp, 50).unwrap();
        assert_eq!(rep.n_max, 50);
        assert!(rep.checks > 0);
    }
}

#[test]
fn spacing_lower_bound_examples() {
    let (_, _, cheb) = setup("chebyshev2", 1024, 30);
    let z = zeros_pn(&cheb, 20).unwrap();
    for j in 0..19 {
        let gap = z[j + 1] - z[j];
        let s = spacing_lower_bound_check(&cheb, 20, z[j], z[j + 1], gap).unwrap();
        assert!(s.holds, "pair {j}: {s:?}");
    }
    let (_, _, jp) = setup("uniform", 512, 20);
    let z = zeros_pn(&jp, 10).unwrap();
    assert!(spacing_lower_bound_check(&jp, 10, z[0], z[1], 0.5).unwrap().holds);
    assert!(spacing_lower_bound_check(&jp, 10, z[8], z[9], 0.5).unwrap().holds);
    let gap = z[1] - z[0];
    assert!(matches!(
        spacing_lower_bound_check(&jp, 10, z[0], z[1], 0.5 * gap),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn kernel_measure_is_a_probability_measure() {
    let (_, mu, jp) = setup("jacobi(-0.5,1.5)", 1024, 60);
    for n in [1, 10, 50] {
        let nu = kernel_measure(&jp, &mu, n).unwrap();
        assert_relative_eq!(nu.total_mass(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn nevai_second_moment_two_ways() {
    let (_, mu, jp) = setup("uniform", 1024, 60);
    for (x0, n) in [(0.0, 10), (0.3, 40), (-0.8, 25)] {
        let formula = nevai_delta_metric(&jp, x0, n).unwrap().second_moment;
        let direct = nevai_second_moment_direct(&jp, &mu, x0, n).unwrap();
        assert!((formula - direct).abs() <= 1e-9 * direct.abs().max(1e-12), "{formula} vs {direct}");
    }
}

#[test]
fn uniform_christoffel_limit_at_origin() {
    let (m, _, jp) = setup("uniform", 8192, 2000);
    let scaled = kernel_diag_sum(&jp, 2000, 0.0).unwrap() / 2000.0;
    assert!((scaled - 2.0 / PI).abs() <= 0.01, "{scaled}");
    let scan = christoffel_limit_scan(&jp, &m, &[-0.5, 0.0, 0.5], &[2000]).unwrap();
    assert!(scan.max_abs_deviation() <= 0.01);
}

#[test]
fn uniform_clock_spacing_and_universality_improve_with_n() {
    let (m, mu, jp) = setup("uniform", 4096, 1000);
    let clock = clock_spacing(&jp, Some(&m), &mu, 0.3, 800, 3).unwrap();
    assert_eq!(clock.rows.len(), 7);
    assert!(clock.max_spacing_error() <= 0.05, "{}", clock.max_spacing_error());

    let grid: Vec<f64> = (0..=16).map(|i| -2.0 + 0.25 * i as f64).collect();
    let coarse = universality_scan(&jp, Some(&m), &mu, 0.0, 100, &grid, &grid).unwrap();
    let fine = universality_scan(&jp, Some(&m), &mu, 0.0, 800, &grid, &grid).unwrap();
    assert!(fine.max_abs_error < coarse.max_abs_error, "{} vs {}", fine.max_abs_error, coarse.max_abs_error);
}

#[test]
fn lubinsky_inequality_with_added_atoms() {
    let (_, mu, _) = setup("uniform", 1024, 10);
    let pairs: Vec<(f64, f64)> = (0..40).map(|i| (-0.95 + 0.05 * i as f64, 0.9 - 0.045 * i as f64)).collect();
    let rep = lubinsky_inequality_check(&mu, &[(-0.2, 0.3), (0.9, 0.05)], 30, &pairs).unwrap();
    assert_eq!(rep.pairs, 40);
    assert!(rep.max_violation <= 1e-10, "{}", rep.max_violation);
    assert!(lubinsky_inequality_check(&mu, &[(0.0, -0.1)], 10, &pairs).is_err());
}

#[test]
fn ac_diagnostic_classifies_interior_exterior_and_atom() {
    let (_, _, jp) = setup("uniform+0.2@0.3", 1024, 200);
    let diag = ac_set_diagnostic(&jp, &[0.5, 2.5, 0.3], &[50, 100, 200], 2.0).unwrap();
    assert_eq!(diag.rows[0].class, AcClass::BoundedProxy);
    assert_eq!(diag.rows[1].class, AcClass::UnboundedProxy);
    assert_eq!(diag.rows[2].class, AcClass::BoundedProxy);
    // K_n(x0, x0) <= 1/μ({x0}) at an atom, so (1/n) K_n decays like 5/n.
    assert!(diag.rows[2].liminf_proxy <= 5.0 / 200.0 + 1e-12);
    assert!(ac_set_diagnostic(&jp, &[0.0], &[100, 50], 2.0).is_err());
}

#[test]
fn geronimus_update_is_orthogonal_for_new_measure() {
    let (_, mu, _) = setup("uniform", 1024, 10);
    let up = geronimus_update(&mu, c(0.3, 0.0), 0.5, 12, true).unwrap();
    assert!(up.oracle_residual.unwrap() <= 1e-9);
    let nu = mu.with_atom(c(0.3, 0.0), 0.5).unwrap();
    assert!(orthogonality_residual(&nu, &up.after) <= 1e-9);
    assert_eq!(up.after.last().unwrap(), &c(1.0, 0.0));
}

#[test]
fn successive_updates_compose() {
    let (_, mu, _) = setup("chebyshev2", 1024, 10);
    let z0 = c(0.5, 0.0);
    let once = geronimus_update(&mu, z0, 0.7, 8, false).unwrap();
    let first = geronimus_update(&mu, z0, 0.3, 8, false).unwrap();
    let mid = mu.with_atom(z0, 0.3).unwrap();
    let second = geronimus_update(&mid, z0, 0.4, 8, false).unwrap();
    assert_eq!(first.after.len(), second.before.len());
    for (a, b) in once.after.iter().zip(&second.after) {
        assert!((a - b).norm() <= 1e-10, "{a} vs {b}");
    }
    for (a, b) in first.after.iter().zip(&second.before) {
        assert!((a - b).norm() <= 1e-10);
    }
}

#[test]
fn removing_an_existing_atom() {
    let (_, mu, _) = setup("uniform+0.2@0.3", 1024, 10);
    let (_, bare, _) = setup("uniform", 1024, 10);
    let z0 = c(0.3, 0.0);
    let removed = geronimus_update(&mu, z0, -0.2, 6, false).unwrap();
    let plain = geronimus_update(&bare, z0, 0.0, 6, false).unwrap();
    for (a, b) in removed.after.iter().zip(&plain.after) {
        assert!((a - b).norm() <= 1e-9, "{a} vs {b}");
    }
    assert!(geronimus_update(&mu, z0, -0.3, 6, false).is_err());
}

#[test]
fn wong_update_examples() {
    let mu = NamedMeasure::lebesgue_circle().discretize(512).unwrap();
    for z0 in [c(1.0, 0.0), c(-1.0, 0.0)] {
        let up = wong_update(&mu, z0, 1.0, 20, true).unwrap();
        assert!(up.oracle_residual.unwrap() <= 1e-10);
        for (n, a) in up.after.iter().enumerate() {
            // α_n = conj(z0)^{n+1} / (n + 2) for the Lebesgue measure.
            let expected = z0.conj().powu(n as u32 + 1) / (n as f64 + 2.0);
            assert!((a - expected).norm() <= 1e-10, "z0 = {z0}, n = {n}: {a}");
        }
    }
    let m = NamedMeasure::szego(vec![c(1.0, 0.0), c(0.3, 0.2)]).discretize(512).unwrap();
    let up = wong_update(&m, Complex64::from_polar(1.0, 2.1), 3.0, 25, true).unwrap();
    assert!(up.after.iter().all(|a| a.norm() < 1.0));
    assert!(up.oracle_residual.unwrap() <= 1e-8);
}

#[test]
fn jacobi_parameters_after_an_outside_atom() {
    // The atom of mass 0.5 at 3 is doubled.
    let (_, mu, _) = setup("chebyshev2+0.5@3", 1024, 10);
    let d = jacobi_pointmass_diffs(&mu, 3.0, 0.5, 40).unwrap();
    assert!(d.isolated);
    assert!(d.fit_a.as_ref().unwrap().passes);
    assert!(d.fit_b.as_ref().unwrap().passes);
    let last = d.rows.last().unwrap();
    assert_eq!(last.n, 40);
    assert!((last.kappa_ratio - d.kappa_target).abs() <= 1e-6);
}
