//! Orthogonal polynomials on the unit circle.
//!
//! Verblunsky coefficients are indexed from zero; `φ_{n+1}` is built from
//! `φ_n`, `φ_n^*` and `α_n` by
//! `ρ_n φ_{n+1} = z φ_n - ᾱ_n φ_n^*`, `ρ_n φ_{n+1}^* = φ_n^* - α_n z φ_n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{AtomicMeasure, SupportKind};
use crate::oprl::OVERFLOW_LIMIT;
use crate::sum::ComplexCompensatedSum;
use crate::table::{fmt_f64, Table};

/// Largest `|α_n|` accepted from a measure before declaring it exhausted.
pub const ALPHA_LIMIT: f64 = 1.0 - 1e-12;

/// Deserialize with [`VerblunskyParams::from_json`], which rebuilds `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerblunskyParams {
    /// `α_0..α_{N-1}`, each serialized as `[re, im]`.
    alpha: Vec<Complex64>,
    #[serde(skip)]
    rho: Vec<f64>,
    mass0: f64,
    #[serde(rename = "maxDegree")]
    max_degree: usize,
}

impl VerblunskyParams {
    /// `alpha = [α_0..α_{N-1}]`; `φ_0..φ_N` become evaluable.
    pub fn new(alpha: Vec<Complex64>, mass0: f64) -> Result<Self> {
        if let Some((i, a)) = alpha
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.re.is_finite() && a.im.is_finite() && a.norm() < 1.0))
        {
            return Err(Error::Precondition(format!("|α_{i}| = {} is not below 1", a.norm())));
        }
        if !(mass0.is_finite() && mass0 > 0.0) {
            return Err(Error::Precondition(format!("mass0 = {mass0} is not positive")));
        }
        let rho = alpha.iter().map(|a| rho_of(*a)).collect();
        let max_degree = alpha.len();
        Ok(Self {
            alpha,
            rho,
            mass0,
            max_degree,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            alpha: Vec<Complex64>,
            mass0: f64,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.alpha, raw.mass0)
    }

    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn mass0(&self) -> f64 {
        self.mass0
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `log κ_n`, `κ_n = mass0^{-1/2} / (ρ_0⋯ρ_{n-1})`.
    pub fn log_kappa(&self, n: usize) -> f64 {
        -0.5 * self.mass0.ln() - self.rho[..n].iter().map(|r| r.ln()).sum::<f64>()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.alpha.clone(), self.mass0 * c)
    }

    pub(crate) fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            Err(Error::DegreeOutOfRange {
                requested: n,
                available: self.max_degree,
            })
        } else {
            Ok(())
        }
    }

    /// `(φ_0..φ_n, φ_0^*..φ_n^*)` at `z`.
    pub fn orthonormal_values(
        &self,
        n: usize,
        z: Complex64,
    ) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        self.check_degree(n)?;
        let start = Complex64::new(self.mass0.powf(-0.5), 0.0);
        let mut phi = vec![start];
        let mut star = vec![start];
        for k in 0..n {
            let (p, s) = (phi[k], star[k]);
            let a = self.alpha[k];
            phi.push((z * p - a.conj() * s) / self.rho[k]);
            star.push((s - a * z * p) / self.rho[k]);
        }
        for (deg, v) in phi.iter().chain(&star).enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) || v.norm() > OVERFLOW_LIMIT {
                return Err(Error::Overflow {
                    degree: deg % (n + 1),
                    point: format!("{z}"),
                });
            }
        }
        Ok((phi, star))
    }

    /// Orthonormal and monic values at `z`.
    pub fn eval(&self, n: usize, z: Complex64) -> Result<CirclePolyEval> {
        let (phi, phi_star) = self.orthonormal_values(n, z)?;
        let inv_kappa: Vec<f64> = (0..=n).map(|k| (-self.log_kappa(k)).exp()).collect();
        let monic = phi.iter().zip(&inv_kappa).map(|(v, k)| v * k).collect();
        let monic_star = phi_star.iter().zip(&inv_kappa).map(|(v, k)| v * k).collect();
        Ok(CirclePolyEval {
            z,
            phi,
            phi_star,
            monic,
            monic_star,
        })
    }

    /// Monomial coefficients (ascending) of `Φ_0..Φ_n`.
    pub fn monic_coefficients(&self, n: usize) -> Result<Vec<Vec<Complex64>>> {
        self.check_degree(n)?;
        let mut rows = vec![vec![Complex64::new(1.0, 0.0)]];
        for k in 0..n {
            let cur = &rows[k];
            let mut next = vec![Complex64::default(); k + 2];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += c;
            }
            // Φ_k^* has coefficients conj(c_{k-i}).
            for i in 0..=k {
                next[i] -= self.alpha[k].conj() * cur[k - i].conj();
            }
            rows.push(next);
        }
        Ok(rows)
    }

    /// Monomial coefficients of `φ_0..φ_n`.
    pub fn orthonormal_coefficients(&self, n: usize) -> Result<Vec<Vec<Complex64>>> {
        Ok(self
            .monic_coefficients(n)?
            .into_iter()
            .enumerate()
            .map(|(j, row)| {
                let k = self.log_kappa(j).exp();
                row.into_iter().map(|c| c * k).collect()
            })
            .collect())
    }

    /// One row per `n`: `n, re α_n, im α_n, ρ_n`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["n", "alpha_re", "alpha_im", "rho"]);
        for (n, (a, r)) in self.alpha.iter().zip(&self.rho).enumerate() {
            t.push(vec![n.to_string(), fmt_f64(a.re), fmt_f64(a.im), fmt_f64(*r)]);
        }
        t
    }
}

pub(crate) fn rho_of(a: Complex64) -> f64 {
    // (1 - |α|)(1 + |α|) keeps digits when |α| is close to 1.
    let m = a.norm();
    ((1.0 - m) * (1.0 + m)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CirclePolyEval {
    pub z: Complex64,
    pub phi: Vec<Complex64>,
    pub phi_star: Vec<Complex64>,
    pub monic: Vec<Complex64>,
    pub monic_star: Vec<Complex64>,
}

/// Verblunsky coefficients `α_0..α_{N-1}` of a measure on the circle.
///
/// Each step takes `ᾱ_n = ⟨φ_n^*, z φ_n⟩ / ‖φ_n^*‖²` against the atoms and
/// advances the pair `(φ_n, φ_n^*)` sampled at every atom. Discretized
/// weights must carry at least `8N` atoms.
pub fn szego_recurrence(mu: &AtomicMeasure, n: usize) -> Result<VerblunskyParams> {
    if mu.support() != SupportKind::UnitCircle {
        return Err(Error::WrongSupport(format!(
            "`{}` lives on the real line; OPUC need a measure on the unit circle",
            mu.label()
        )));
    }
    if n == 0 {
        return Err(Error::Precondition("max degree must be at least 1".into()));
    }
    if mu.len() <= n || (mu.is_discretized() && mu.len() < 8 * n) {
        return Err(Error::InsufficientAtoms {
            atoms: mu.len(),
            degree: n,
        });
    }
    let zs = mu.points();
    let ws = mu.weights();
    let start = Complex64::new(mu.total_mass().powf(-0.5), 0.0);
    let mut phi = vec![start; zs.len()];
    let mut star = phi.clone();
    let mut alpha = Vec::with_capacity(n);
    for k in 0..n {
        let mut num = ComplexCompensatedSum::new();
        let mut den = ComplexCompensatedSum::new();
        for i in 0..zs.len() {
            num.add(star[i].conj() * zs[i] * phi[i] * ws[i]);
            den.add(Complex64::new(star[i].norm_sqr() * ws[i], 0.0));
        }
        let a = (num.value() / den.value().re).conj();
        if !(a.norm() < ALPHA_LIMIT) {
            return Err(Error::MeasureTooCoarse { degree: k });
        }
        let r = rho_of(a);
        for i in 0..zs.len() {
            let zp = zs[i] * phi[i];
            let s = star[i];
            phi[i] = (zp - a.conj() * s) / r;
            star[i] = (s - a * zp) / r;
        }
        alpha.push(a);
    }
    VerblunskyParams::new(alpha, mu.total_mass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::NamedMeasure;
    use crate::poly;

    #[test]
    fn lebesgue_has_vanishing_coefficients() {
        let mu = NamedMeasure::lebesgue_circle().discretize(256).unwrap();
        let vp = szego_recurrence(&mu, 32).unwrap();
        assert!(vp.alpha().iter().all(|a| a.norm() < 1e-12));
        assert!(matches!(
            szego_recurrence(&mu, 33),
            Err(Error::InsufficientAtoms { .. })
        ));
    }

    #[test]
    fn zero_coefficients_give_monomials() {
        let vp = VerblunskyParams::new(vec![Complex64::default(); 5], 4.0).unwrap();
        let z = Complex64::from_polar(1.0, 0.4);
        let e = vp.eval(5, z).unwrap();
        for n in 0..=5 {
            assert!((e.phi[n] - 0.5 * z.powu(n as u32)).norm() < 1e-15);
            assert!((e.phi_star[n] - 0.5).norm() < 1e-15);
        }
    }

    #[test]
    fn point_mass_at_one_gives_harmonic_coefficients() {
        let mu = NamedMeasure::lebesgue_circle()
            .with_atom(Complex64::new(1.0, 0.0), 1.0)
            .discretize(512)
            .unwrap()
            .scaled(0.5)
            .unwrap();
        let vp = szego_recurrence(&mu, 30).unwrap();
        for (n, a) in vp.alpha().iter().enumerate() {
            assert!((a - 1.0 / (n as f64 + 2.0)).norm() < 1e-8, "n={n}: {a}");
        }
    }

    #[test]
    fn monic_coefficients_agree_with_values() {
        let alpha = vec![
            Complex64::new(0.3, -0.2),
            Complex64::new(-0.1, 0.5),
            Complex64::new(0.05, 0.0),
        ];
        let vp = VerblunskyParams::new(alpha, 1.5).unwrap();
        let z = Complex64::new(0.3, 0.8);
        let e = vp.eval(3, z).unwrap();
        let c = vp.monic_coefficients(3).unwrap();
        let oc = vp.orthonormal_coefficients(3).unwrap();
        for n in 0..=3 {
            assert!((poly::eval(&c[n], z) - e.monic[n]).norm() < 1e-14);
            assert!((poly::eval(&oc[n], z) - e.phi[n]).norm() < 1e-14);
        }
    }

    #[test]
    fn json_shape() {
        let vp = VerblunskyParams::new(vec![Complex64::new(0.5, -0.25)], 1.0).unwrap();
        let s = serde_json::to_string(&vp).unwrap();
        assert_eq!(s, r#"{"alpha":[[0.5,-0.25]],"mass0":1.0,"maxDegree":1}"#);
        assert_eq!(VerblunskyParams::from_json(&s).unwrap(), vp);
        assert!(VerblunskyParams::from_json(r#"{"alpha":[[1.0,0.0]],"mass0":1.0}"#).is_err());
    }

    #[test]
    fn real_line_measure_rejected() {
        let mu = NamedMeasure::chebyshev2().discretize(64).unwrap();
        assert!(matches!(szego_recurrence(&mu, 2), Err(Error::WrongSupport(_))));
    }
}
