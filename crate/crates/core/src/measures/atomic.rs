use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::{sum, sum_complex, CompensatedSum, ComplexCompensatedSum};

/// Tolerance on |z| - 1 for atoms of a circle measure.
const CIRCLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportKind {
    RealLine,
    UnitCircle,
}

/// A finite positive measure `Σ w_i δ_{z_i}`.
///
/// Atoms are kept in a canonical order (ascending for the real line,
/// ascending argument in `[0, 2π)` for the circle); every sum over the
/// measure walks them in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    support: SupportKind,
    points: Vec<Complex64>,
    weights: Vec<f64>,
    label: String,
    discretized: bool,
}

fn circle_angle(z: Complex64) -> f64 {
    let t = z.im.atan2(z.re);
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

fn order_key(support: SupportKind, z: Complex64) -> f64 {
    match support {
        SupportKind::RealLine => z.re,
        SupportKind::UnitCircle => circle_angle(z),
    }
}

impl AtomicMeasure {
    pub fn new(
        support: SupportKind,
        atoms: impl IntoIterator<Item = (Complex64, f64)>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut atoms: Vec<(Complex64, f64)> = atoms.into_iter().collect();
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        for (i, &(z, w)) in atoms.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidMeasure(format!("atom {i}: non-finite point")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "atom {i}: weight {w} is not a positive finite number"
                )));
            }
            match support {
                SupportKind::RealLine if z.im != 0.0 => {
                    return Err(Error::InvalidMeasure(format!(
                        "atom {i}: point {z} is not real"
                    )))
                }
                SupportKind::UnitCircle if (z.norm() - 1.0).abs() > CIRCLE_TOL => {
                    return Err(Error::InvalidMeasure(format!(
                        "atom {i}: point {z} is not on the unit circle"
                    )))
                }
                _ => {}
            }
        }
        atoms.sort_by(|a, b| {
            order_key(support, a.0)
                .partial_cmp(&order_key(support, b.0))
                .unwrap_or(Ordering::Equal)
        });
        for pair in atoms.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidMeasure(format!(
                    "duplicate atom at {}",
                    pair[0].0
                )));
            }
        }
        let (points, weights) = atoms.into_iter().unzip();
        Ok(Self {
            support,
            points,
            weights,
            label: label.into(),
            discretized: false,
        })
    }

    pub fn real(atoms: &[(f64, f64)], label: impl Into<String>) -> Result<Self> {
        Self::new(
            SupportKind::RealLine,
            atoms.iter().map(|&(x, w)| (Complex64::new(x, 0.0), w)),
            label,
        )
    }

    pub fn circle(atoms: &[(Complex64, f64)], label: impl Into<String>) -> Result<Self> {
        Self::new(SupportKind::UnitCircle, atoms.iter().copied(), label)
    }

    /// Same atoms, flagged as a quadrature discretization of a continuous
    /// weight. Recurrence builders apply their stricter degree policing to
    /// such measures.
    pub(crate) fn mark_discretized(mut self) -> Self {
        self.discretized = true;
        self
    }

    pub fn support(&self) -> SupportKind {
        self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_discretized(&self) -> bool {
        self.discretized
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }

    /// Real parts of the atoms; the atoms themselves on the real line.
    pub fn real_points(&self) -> Vec<f64> {
        self.points.iter().map(|z| z.re).collect()
    }

    pub fn total_mass(&self) -> f64 {
        sum(self.weights.iter().copied())
    }

    /// Diameter of the atom set.
    pub fn spread(&self) -> f64 {
        match self.support {
            SupportKind::RealLine => {
                let (lo, hi) = self.hull();
                hi - lo
            }
            SupportKind::UnitCircle => 2.0,
        }
    }

    /// Smallest and largest real atom.
    pub fn hull(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| {
                (lo.min(z.re), hi.max(z.re))
            })
    }

    /// Largest |z| over the atoms.
    pub fn radius(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mass_at(&self, point: Complex64) -> f64 {
        self.atoms()
            .filter(|(z, _)| *z == point)
            .map(|(_, w)| w)
            .sum()
    }

    /// `c · μ`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidMeasure(format!("scale factor {c} must be positive")));
        }
        let mut out = self.clone();
        out.weights.iter_mut().for_each(|w| *w *= c);
        out.label = format!("{}*{}", c, self.label);
        Ok(out)
    }

    /// `μ + mass·δ_point`. A negative mass removes weight from an existing
    /// atom; the atom disappears when its weight reaches zero.
    pub fn with_atom(&self, point: Complex64, mass: f64) -> Result<Self> {
        let mut atoms: Vec<(Complex64, f64)> = self.atoms().collect();
        match atoms.iter().position(|(z, _)| *z == point) {
            Some(i) => {
                let w = atoms[i].1 + mass;
                let tol = 1e-15 * atoms[i].1.max(mass.abs());
                if w > tol {
                    atoms[i].1 = w;
                } else if w >= -tol {
                    atoms.remove(i);
                } else {
                    return Err(Error::InadmissibleLambda {
                        lambda: mass,
                        minimum: -atoms[i].1,
                    });
                }
            }
            None if mass > 0.0 => atoms.push((point, mass)),
            None if mass == 0.0 => {}
            None => {
                return Err(Error::InadmissibleLambda {
                    lambda: mass,
                    minimum: 0.0,
                })
            }
        }
        let label = format!("{}+{}δ({})", self.label, mass, point);
        let out = Self::new(self.support, atoms, label)?;
        Ok(Self {
            discretized: self.discretized,
            ..out
        })
    }

    /// `∫ f dμ` with compensated summation in atom order.
    pub fn integrate(&self, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        sum_complex(self.atoms().map(|(z, w)| f(z) * w))
    }

    pub fn integrate_real(&self, f: impl Fn(f64) -> f64) -> f64 {
        sum(self.atoms().map(|(z, w)| f(z.re) * w))
    }

    /// `⟨f, g⟩ = ∫ conj(f) g dμ` for polynomials given by ascending
    /// monomial coefficients.
    pub fn inner_product(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        self.integrate(|z| crate::poly::eval(f, z).conj() * crate::poly::eval(g, z))
    }

    /// `μ((-∞, x0])` when `closed`, `μ((-∞, x0))` otherwise.
    pub fn cdf(&self, x0: f64, closed: bool) -> Result<f64> {
        if self.support != SupportKind::RealLine {
            return Err(Error::WrongSupport("cdf needs a real-line measure".into()));
        }
        Ok(sum(self
            .atoms()
            .filter(|(z, _)| if closed { z.re <= x0 } else { z.re < x0 })
            .map(|(_, w)| w)))
    }

    /// Moment matrix `m_jk = ∫ conj(z)^j z^k dμ`, `0 <= j, k <= n`.
    ///
    /// Hankel entries come from one accumulated power sum per `j + k`, and
    /// Toeplitz entries from one per `k - j`, so the structure holds
    /// bit-for-bit.
    pub fn moments(&self, n: usize) -> MomentMatrix {
        let dim = n + 1;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        match self.support {
            SupportKind::RealLine => {
                let mut acc = vec![CompensatedSum::new(); 2 * n + 1];
                for (z, w) in self.atoms() {
                    let mut p = w;
                    for a in acc.iter_mut() {
                        a.add(p);
                        p *= z.re;
                    }
                }
                let s: Vec<f64> = acc.iter().map(|a| a.value()).collect();
                for j in 0..dim {
                    for k in 0..dim {
                        entries[j * dim + k] = Complex64::new(s[j + k], 0.0);
                    }
                }
                MomentMatrix {
                    n,
                    entries,
                    structure: MomentStructure::Hankel,
                }
            }
            SupportKind::UnitCircle => {
                let mut acc = vec![ComplexCompensatedSum::new(); dim];
                for (z, w) in self.atoms() {
                    let mut p = Complex64::new(w, 0.0);
                    for a in acc.iter_mut() {
                        a.add(p);
                        p *= z;
                    }
                }
                // c[m] = ∫ z^m dμ; m_jk = c[k - j], with c[-m] = conj(c[m]).
                let c: Vec<Complex64> = acc.iter().map(|a| a.value()).collect();
                for j in 0..dim {
                    for k in 0..dim {
                        entries[j * dim + k] = if k >= j { c[k - j] } else { c[j - k].conj() };
                    }
                }
                MomentMatrix {
                    n,
                    entries,
                    structure: MomentStructure::Toeplitz,
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MomentStructure {
    Hankel,
    Toeplitz,
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    pub n: usize,
    /// Row-major `(n+1) x (n+1)`.
    pub entries: Vec<Complex64>,
    pub structure: MomentStructure,
}

impl MomentMatrix {
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[j * self.dim() + k]
    }

    pub fn is_hermitian(&self) -> bool {
        let d = self.dim();
        (0..d).all(|j| (0..d).all(|k| self.get(j, k) == self.get(k, j).conj()))
    }

    /// Whether the Hankel/Toeplitz constraint holds exactly.
    pub fn has_exact_structure(&self) -> bool {
        let d = self.dim();
        match self.structure {
            MomentStructure::Hankel => (0..d).all(|j| {
                (0..d).all(|k| {
                    let s = j + k;
                    let (j0, k0) = if s < d { (0, s) } else { (s - d + 1, d - 1) };
                    self.get(j, k) == self.get(j0, k0)
                })
            }),
            MomentStructure::Toeplitz => (0..d).all(|j| {
                (0..d).all(|k| {
                    let (j0, k0) = if k >= j { (0, k - j) } else { (j - k, 0) };
                    self.get(j, k) == self.get(j0, k0)
                })
            }),
            MomentStructure::General => true,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
