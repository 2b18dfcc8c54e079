//! Christoffel–Darboux kernels `K_n(z, ζ) = Σ_{j<=n} conj(x_j(z)) x_j(ζ)`.
//!
//! Every kernel can be computed by the direct sum and by at least one
//! closed formula; the two are kept independent so they can check each
//! other.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{AtomicMeasure, MomentMatrix, SupportKind};
use crate::oprl::{stieltjes_recurrence, JacobiParams};
use crate::opuc::{szego_recurrence, VerblunskyParams};
use crate::sum::{sum, ComplexCompensatedSum, CompensatedSum};

/// Relative separation below which the CD quotients are refused.
pub const CONFLUENCE_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum KernelRoute {
    DirectSum,
    CDFormulaRealLine,
    CDFormulaCircle,
    CDFormulaCircleAlt,
    ConfluentDiagonal,
}

impl KernelRoute {
    pub fn name(self) -> &'static str {
        match self {
            KernelRoute::DirectSum => "direct",
            KernelRoute::CDFormulaRealLine => "cd-real",
            KernelRoute::CDFormulaCircle => "cd-circle",
            KernelRoute::CDFormulaCircleAlt => "cd-circle-alt",
            KernelRoute::ConfluentDiagonal => "confluent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: Complex64,
    pub route: KernelRoute,
    pub n: usize,
    pub z: Complex64,
    pub zeta: Complex64,
}

/// `Σ conj(u_j) v_j` in fixed order with compensation.
pub fn direct_sum(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let mut s = ComplexCompensatedSum::new();
    for (a, b) in u.iter().zip(v) {
        s.add(a.conj() * b);
    }
    s.value()
}

/// `Σ u_j v_j` for real sequences.
pub fn direct_sum_real(u: &[f64], v: &[f64]) -> f64 {
    sum(u.iter().zip(v).map(|(a, b)| a * b))
}

fn real_guard(z: Complex64, zeta: Complex64) -> Result<Complex64> {
    let d = z.conj() - zeta;
    let scale = 1f64.max(z.norm()).max(zeta.norm());
    if d.norm() <= CONFLUENCE_GUARD * scale {
        return Err(Error::Confluent { gap: d.norm() });
    }
    Ok(d)
}

fn circle_guard(z: Complex64, zeta: Complex64) -> Result<Complex64> {
    let d = Complex64::new(1.0, 0.0) - z.conj() * zeta;
    if d.norm() <= CONFLUENCE_GUARD {
        return Err(Error::Confluent { gap: d.norm() });
    }
    Ok(d)
}

/// Direct sum with OPRL.
pub fn kernel_direct_real(
    jp: &JacobiParams,
    n: usize,
    z: Complex64,
    zeta: Complex64,
) -> Result<KernelValue> {
    let u = jp.orthonormal_values(n, z)?;
    let v = jp.orthonormal_values(n, zeta)?;
    Ok(KernelValue {
        value: direct_sum(&u, &v),
        route: KernelRoute::DirectSum,
        n,
        z,
        zeta,
    })
}

/// `K_n(x, x) = Σ p_j(x)²` at a real point.
pub fn kernel_diag_sum(jp: &JacobiParams, n: usize, x: f64) -> Result<f64> {
    let p = jp.orthonormal_values(n, x)?;
    Ok(direct_sum_real(&p, &p))
}

/// `K_n(x, y)` at real points by the direct sum.
pub fn kernel_real_points(jp: &JacobiParams, n: usize, x: f64, y: f64) -> Result<f64> {
    let u = jp.orthonormal_values(n, x)?;
    let v = jp.orthonormal_values(n, y)?;
    Ok(direct_sum_real(&u, &v))
}

/// `a_{n+1}[conj(p_{n+1}(z)) p_n(ζ) - conj(p_n(z)) p_{n+1}(ζ)] / (z̄ - ζ)`.
pub fn kernel_cd_real(
    jp: &JacobiParams,
    n: usize,
    z: Complex64,
    zeta: Complex64,
) -> Result<KernelValue> {
    jp.check_degree(n + 1)?;
    let d = real_guard(z, zeta)?;
    let u = jp.orthonormal_values(n + 1, z)?;
    let v = jp.orthonormal_values(n + 1, zeta)?;
    let num = u[n + 1].conj() * v[n] - u[n].conj() * v[n + 1];
    Ok(KernelValue {
        value: num * jp.a(n + 1) / d,
        route: KernelRoute::CDFormulaRealLine,
        n,
        z,
        zeta,
    })
}

/// `a_{n+1}[p'_{n+1}(x) p_n(x) - p'_n(x) p_{n+1}(x)]` at real `x`.
pub fn kernel_diag_real(jp: &JacobiParams, n: usize, x: f64) -> Result<KernelValue> {
    jp.check_degree(n + 1)?;
    let (p, d) = jp.values_and_derivatives(n + 1, x)?;
    let value = jp.a(n + 1) * (d[n + 1] * p[n] - d[n] * p[n + 1]);
    let z = Complex64::new(x, 0.0);
    Ok(KernelValue {
        value: value.into(),
        route: KernelRoute::ConfluentDiagonal,
        n,
        z,
        zeta: z,
    })
}

/// CD formula when admissible; the confluent formula on the real
/// diagonal; the direct sum otherwise.
pub fn kernel_real(
    jp: &JacobiParams,
    n: usize,
    z: Complex64,
    zeta: Complex64,
) -> Result<KernelValue> {
    match kernel_cd_real(jp, n, z, zeta) {
        Err(Error::Confluent { .. }) => {
            if z == zeta && z.im == 0.0 {
                kernel_diag_real(jp, n, z.re)
            } else {
                kernel_direct_real(jp, n, z, zeta)
            }
        }
        other => other,
    }
}

/// Direct sum with OPUC.
pub fn kernel_direct_circle(
    vp: &VerblunskyParams,
    n: usize,
    z: Complex64,
    zeta: Complex64,
) -> Result<KernelValue> {
    let (u, _) = vp.orthonormal_values(n, z)?;
    let (v, _) = vp.orthonormal_values(n, zeta)?;
    Ok(KernelValue {
        value: direct_sum(&u, &v),
        route: KernelRoute::DirectSum,
        n,
        z,
        zeta,
    })
}

/// `[conj(φ*_{n+1}(z)) φ*_{n+1}(ζ) - conj(φ_{n+1}(z)) φ_{n+1}(ζ)] / (1 - z̄ζ)`.
pub fn kernel_cd_circle(
    vp: &VerblunskyParams,
    n: usize,
    z: Complex64,
    zeta: Complex64,
) -> Result<KernelValue> {
    vp.check_degree(n + 1)?;
    let d = circle_guard(z, zeta)?;
    let (pz, sz) = vp.orthonormal_values(n + 1, z)?;
    let (pw, sw) = vp.orthonormal_values(n + 1, zeta)?;
    let num = sz[n + 1].conj() * sw[n + 1] - pz[n + 1].conj() * pw[n + 1];
    Ok(KernelValue {
        value: num / d,
        route: KernelRoute::CDFormulaCircle,
        n,
        z,
        zeta,
    })
}

/// `[conj(φ_n*(z)) φ_n*(ζ) - z̄ζ conj(φ_n(z)) φ_n(ζ)] / (1 - z̄ζ)`.
pub fn kernel_cd_circle_alt(
    vp: &VerblunskyParams,
    n: usize,
    z: Complex64,
    zeta: Complex64,
) -> Result<KernelValue> {
    vp.check_degree(n)?;
    let d = circle_guard(z, zeta)?;
    let (pz, sz) = vp.orthonormal_values(n, z)?;
    let (pw, sw) = vp.orthonormal_values(n, zeta)?;
    let num = sz[n].conj() * sw[n] - z.conj() * zeta * pz[n].conj() * pw[n];
    Ok(KernelValue {
        value: num / d,
        route: KernelRoute::CDFormulaCircleAlt,
        n,
        z,
        zeta,
    })
}

/// `λ_n(z_0) = 1 / K_n(z_0, z_0)`.
pub fn christoffel(kdiag: &KernelValue) -> Result<f64> {
    if kdiag.z != kdiag.zeta {
        return Err(Error::Precondition(
            "Christoffel function needs an on-diagonal kernel value".into(),
        ));
    }
    Ok(1.0 / kdiag.value.re)
}

/// Coefficients of `Q_n(z) = K_n(z_0, z) / K_n(z_0, z_0)` in the orthonormal
/// basis: `c_j = conj(x_j(z_0)) / K_n(z_0, z_0)`, from `x_j(z_0)`.
pub fn minimizer_coefficients(values_at_z0: &[Complex64]) -> Vec<Complex64> {
    let k = direct_sum(values_at_z0, values_at_z0).re;
    values_at_z0.iter().map(|x| x.conj() / k).collect()
}

pub fn minimizer_poly_real(jp: &JacobiParams, n: usize, z0: Complex64) -> Result<Vec<Complex64>> {
    Ok(minimizer_coefficients(&jp.orthonormal_values(n, z0)?))
}

pub fn minimizer_poly_circle(
    vp: &VerblunskyParams,
    n: usize,
    z0: Complex64,
) -> Result<Vec<Complex64>> {
    Ok(minimizer_coefficients(&vp.orthonormal_values(n, z0)?.0))
}

/// `(K^{(q)}_n(x, y), K^{(pq)}_n(x, y))`: `Σ conj(q_j(x)) q_j(y)` and
/// `Σ conj(q_j(x)) p_j(y)`.
pub fn mixed_kernels(
    jp: &JacobiParams,
    n: usize,
    x: Complex64,
    y: Complex64,
) -> Result<(Complex64, Complex64)> {
    let qx = jp.second_kind_values(n, x)?;
    let qy = jp.second_kind_values(n, y)?;
    let py = jp.orthonormal_values(n, y)?;
    Ok((direct_sum(&qx, &qy), direct_sum(&qx, &py)))
}

/// `|K^{(q)}_n(x, y; μ) - a_1^{-2} K_{n-1}(x, y; μ̃)|` with `μ̃` the
/// once-stripped measure (zero for `n = 0`).
pub fn mixed_kernel_shift_residual(
    jp: &JacobiParams,
    n: usize,
    x: Complex64,
    y: Complex64,
) -> Result<f64> {
    let (kq, _) = mixed_kernels(jp, n, x, y)?;
    if n == 0 {
        return Ok(kq.norm());
    }
    let stripped = jp.stripped()?;
    let k = kernel_direct_real(&stripped, n - 1, x, y)?.value;
    Ok((kq - k / (jp.a(1) * jp.a(1))).norm())
}

/// `(1/n) K_n(x_0 + a/n, x_0 + a/n)`.
pub fn scaled_diagonal(jp: &JacobiParams, n: usize, x0: f64, a: f64) -> Result<f64> {
    let nf = n as f64;
    Ok(kernel_diag_sum(jp, n, x0 + a / nf)? / nf)
}

/// `d/da (1/n) K_n(x_0 + a/n, x_0 + a/n)` at `a = 0`, assembled from the
/// variation-of-parameters double sum
/// `(2/n²) Σ_j [p_j² Σ_{k<=j} p_k q_k - q_j p_j Σ_{k<=j} p_k²]`.
///
/// That sum presumes the Wronskian `a_{n+1}(p_n q_{n+1} - p_{n+1} q_n)` to
/// be `-1`; with `q_1 = +mass0^{-1/2}/a_1` it is `+1/mass0`, hence the
/// factor `-mass0`.
pub fn kernel_diag_derivative(jp: &JacobiParams, n: usize, x0: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Precondition("degree must be positive".into()));
    }
    let p = jp.orthonormal_values(n, x0)?;
    let q = jp.second_kind_values(n, x0)?;
    let mut pq = CompensatedSum::new();
    let mut pp = CompensatedSum::new();
    let mut total = CompensatedSum::new();
    for j in 0..=n {
        pq.add(p[j] * q[j]);
        pp.add(p[j] * p[j]);
        total.add(p[j] * p[j] * pq.value() - q[j] * p[j] * pp.value());
    }
    let nf = n as f64;
    Ok(-jp.mass0() * 2.0 / (nf * nf) * total.value())
}

/// Same derivative from `(2/n²) Σ p_j p'_j` with `p'` from the
/// differentiated recurrence.
pub fn kernel_diag_derivative_recurrence(jp: &JacobiParams, n: usize, x0: f64) -> Result<f64> {
    let (p, d) = jp.values_and_derivatives(n, x0)?;
    let nf = n as f64;
    Ok(2.0 / (nf * nf) * direct_sum_real(&p, &d))
}

/// Matrices of the ABC theorem at degree `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbcMatrices {
    pub n: usize,
    /// `k = m^{-1}`, row-major, assembled as `aᵀ·conj(a)`.
    pub k: Vec<Complex64>,
    pub m: MomentMatrix,
    /// Row `j` holds the monomial coefficients of `x_j`; lower triangular
    /// with diagonal `κ_j`.
    pub a_triangular: Vec<Complex64>,
    /// `‖k·m - I‖_max`.
    pub residual: f64,
    /// Acceptance bound, `1e-6 · max(1, cond / 1e10)` with
    /// `cond = (n+1) ‖k‖_max ‖m‖_max`.
    pub contract: f64,
    pub warning: Option<String>,
}

impl AbcMatrices {
    pub fn k_at(&self, j: usize, l: usize) -> Complex64 {
        self.k[j * (self.n + 1) + l]
    }

    pub fn a_at(&self, j: usize, l: usize) -> Complex64 {
        self.a_triangular[j * (self.n + 1) + l]
    }
}

/// ABC matrices for `mu` at degree `n`; errors with `IllConditioned` when
/// the residual exceeds its contract.
pub fn abc(mu: &AtomicMeasure, n: usize) -> Result<AbcMatrices> {
    let dim = n + 1;
    let rows: Vec<Vec<Complex64>> = if n == 0 {
        vec![vec![Complex64::new(mu.total_mass().powf(-0.5), 0.0)]]
    } else {
        match mu.support() {
            SupportKind::RealLine => stieltjes_recurrence(mu, n)?
                .orthonormal_coefficients(n)?
                .into_iter()
                .map(|r| r.into_iter().map(Complex64::from).collect())
                .collect(),
            SupportKind::UnitCircle => szego_recurrence(mu, n)?.orthonormal_coefficients(n)?,
        }
    };
    let mut a = vec![Complex64::default(); dim * dim];
    for (j, row) in rows.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            a[j * dim + l] = *c;
        }
    }
    let mut k = vec![Complex64::default(); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            let mut s = ComplexCompensatedSum::new();
            for i in 0..dim {
                s.add(a[i * dim + r] * a[i * dim + c].conj());
            }
            k[r * dim + c] = s.value();
        }
    }
    let m = mu.moments(n);
    let mut residual: f64 = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            let mut s = ComplexCompensatedSum::new();
            for i in 0..dim {
                s.add(k[r * dim + i] * m.get(i, c));
            }
            let target = if r == c { 1.0 } else { 0.0 };
            residual = residual.max((s.value() - target).norm());
        }
    }
    let k_max = k.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let cond = dim as f64 * k_max * m.max_abs();
    let contract = 1e-6 * (cond / 1e10).max(1.0);
    let warning = (n > 8).then(|| {
        format!("degree {n} exceeds 8; moment matrices are badly conditioned in binary64")
    });
    if residual > contract {
        return Err(Error::IllConditioned { residual, contract });
    }
    Ok(AbcMatrices {
        n,
        k,
        m,
        a_triangular: a,
        residual,
        contract,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::NamedMeasure;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn uniform(n: usize) -> JacobiParams {
        let mu = NamedMeasure::uniform(-1.0, 1.0).discretize(256).unwrap();
        stieltjes_recurrence(&mu, n).unwrap()
    }

    #[test]
    fn uniform_degree_one_kernel() {
        let jp = uniform(4);
        let k = kernel_direct_real(&jp, 1, c(0.2), c(0.5)).unwrap();
        assert!((k.value - c(1.3)).norm() < 1e-13);
        let k = kernel_cd_real(&jp, 1, c(0.2), c(0.5)).unwrap();
        assert!((k.value - c(1.3)).norm() < 1e-13);
        let k = kernel_diag_real(&jp, 1, 0.0).unwrap();
        assert!((k.value - c(1.0)).norm() < 1e-13);
        assert!((christoffel(&k).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn confluent_guard() {
        let jp = uniform(4);
        let z = Complex64::new(0.3, 0.2);
        assert!(matches!(
            kernel_cd_real(&jp, 2, z, z.conj()),
            Err(Error::Confluent { .. })
        ));
        let auto = kernel_real(&jp, 2, c(0.3), c(0.3)).unwrap();
        assert_eq!(auto.route, KernelRoute::ConfluentDiagonal);
        let auto = kernel_real(&jp, 2, z, z.conj()).unwrap();
        assert_eq!(auto.route, KernelRoute::DirectSum);
    }

    #[test]
    fn three_point_diagonal() {
        let mu = AtomicMeasure::real(&[(-1.0, 1.0 / 3.0), (0.0, 1.0 / 3.0), (1.0, 1.0 / 3.0)], "3")
            .unwrap();
        let jp = stieltjes_recurrence(&mu, 2).unwrap();
        let k = kernel_diag_sum(&jp, 2, 0.0).unwrap();
        assert!((k - 3.0).abs() < 1e-14);
    }

    #[test]
    fn lebesgue_circle_kernel() {
        let vp = VerblunskyParams::new(vec![Complex64::default(); 8], 1.0).unwrap();
        let z = Complex64::from_polar(0.6, 0.3);
        let w = Complex64::from_polar(1.0, 1.1);
        let n = 6;
        let x = z.conj() * w;
        let exact = (c(1.0) - x.powu(n as u32 + 1)) / (c(1.0) - x);
        for kv in [
            kernel_direct_circle(&vp, n, z, w).unwrap(),
            kernel_cd_circle(&vp, n, z, w).unwrap(),
            kernel_cd_circle_alt(&vp, n, z, w).unwrap(),
        ] {
            assert!((kv.value - exact).norm() < 1e-13, "{:?}", kv.route);
        }
        let on = Complex64::from_polar(1.0, 0.5);
        assert!(matches!(
            kernel_cd_circle(&vp, n, on, on),
            Err(Error::Confluent { .. })
        ));
        let diag = kernel_direct_circle(&vp, n, on, on).unwrap();
        assert!((christoffel(&diag).unwrap() - 1.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn minimizer_for_uniform_at_origin() {
        let jp = uniform(4);
        let q = minimizer_poly_real(&jp, 1, c(0.0)).unwrap();
        assert!((q[0] - c(1.0)).norm() < 1e-13 && q[1].norm() < 1e-13);
        let q = minimizer_poly_real(&jp, 0, c(0.4)).unwrap();
        assert!((q[0] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn mixed_kernel_basics() {
        let jp = JacobiParams::free(10);
        let (kq, kpq) = mixed_kernels(&jp, 0, c(0.1), c(0.2)).unwrap();
        assert_eq!(kq, c(0.0));
        assert_eq!(kpq, c(0.0));
        let (_, kpq) = mixed_kernels(&jp, 1, c(0.4), c(0.4)).unwrap();
        let q = jp.second_kind_values(1, 0.4).unwrap();
        let p = jp.orthonormal_values(1, 0.4).unwrap();
        assert!((kpq - c(q[1] * p[1])).norm() < 1e-15);
        assert!(mixed_kernel_shift_residual(&jp, 6, c(0.4), c(0.4)).unwrap() < 1e-10);
    }

    #[test]
    fn abc_small_cases() {
        let mu = NamedMeasure::uniform(-1.0, 1.0).discretize(256).unwrap();
        let r = abc(&mu, 1).unwrap();
        assert!((r.k_at(0, 0) - c(1.0)).norm() < 1e-12);
        assert!((r.k_at(1, 1) - c(3.0)).norm() < 1e-12);
        assert!(r.k_at(0, 1).norm() < 1e-12);
        assert!(r.residual < 1e-14);
        let circle = NamedMeasure::lebesgue_circle().discretize(64).unwrap();
        let r = abc(&circle, 5).unwrap();
        assert!(r.residual < 1e-12);
        let r = abc(&mu, 0).unwrap();
        assert!((r.k[0] - c(1.0)).norm() < 1e-14 && r.residual < 1e-14);
    }

    #[test]
    fn derivative_vanishes_by_symmetry() {
        let jp = JacobiParams::free(60);
        assert!(kernel_diag_derivative(&jp, 50, 0.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn derivative_routes_agree() {
        let mu = NamedMeasure::uniform(-1.0, 1.0).discretize(512).unwrap();
        let jp = stieltjes_recurrence(&mu, 100).unwrap();
        for x0 in [0.2, -0.55, 0.9] {
            let a = kernel_diag_derivative(&jp, 100, x0).unwrap();
            let b = kernel_diag_derivative_recurrence(&jp, 100, x0).unwrap();
            let h = 1e-5;
            let fd = (scaled_diagonal(&jp, 100, x0, h).unwrap()
                - scaled_diagonal(&jp, 100, x0, -h).unwrap())
                / (2.0 * h);
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-3), "{a} vs {b}");
            assert!((a - fd).abs() <= 1e-4 * fd.abs(), "{a} vs fd {fd}");
        }
    }
}
