use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;

use super::atomic::{AtomicMeasure, SupportKind};
use super::gauss_legendre::gauss_legendre;
use crate::error::{Error, Result};

/// Gauss–Legendre order used on every panel.
pub const PANEL_ORDER: usize = 32;
pub const MIN_RESOLUTION: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureKind {
    /// Normalized Lebesgue measure on `[lo, hi]`.
    UniformInterval { lo: f64, hi: f64 },
    /// `(2π)^-1 √(4 - x²) dx` on `[-2, 2]`.
    Chebyshev2Scaled,
    /// `C (1-x)^a (1+x)^b dx` on `[-1, 1]`, `C` making it a probability measure.
    JacobiWeight { a: f64, b: f64 },
    /// `dθ / 2π`.
    LebesgueCircle,
    /// `w(θ) dθ / 2π` with `w(θ) = c_0 + Σ_{k>=1} 2 Re(c_k e^{ikθ})`.
    SzegoWeight { coeffs: Vec<Complex64> },
}

/// An analytic weight plus optional point masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMeasure {
    pub kind: MeasureKind,
    #[serde(default)]
    pub extra_atoms: Vec<(Complex64, f64)>,
}

/// Affine image of a probability Jacobi weight: `lo + (hi-lo)(t+1)/2`,
/// `t ~ C (1-t)^a (1+t)^b dt`.
#[derive(Debug, Clone, Copy)]
struct AffineJacobi {
    lo: f64,
    hi: f64,
    a: f64,
    b: f64,
}

impl AffineJacobi {
    fn log_norm(&self) -> f64 {
        -((self.a + self.b + 1.0) * 2f64.ln() + ln_beta(self.a + 1.0, self.b + 1.0))
    }

    fn density(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        let half = 0.5 * (self.hi - self.lo);
        let t = (x - self.lo) / half - 1.0;
        (self.log_norm() + self.a * (1.0 - t).ln() + self.b * (1.0 + t).ln()).exp() / half
    }

    /// Closed-form `∫ x^k`. Moments of `t` come from the recurrence
    /// `(a+b+k+2) m_{k+1} = (b-a) m_k + k m_{k-1}` (integration by parts
    /// against `(1-t)^{a+1} (1+t)^{b+1}`), then `x = mid + half t`.
    fn moment(&self, k: usize) -> f64 {
        let (a, b) = (self.a, self.b);
        let mut m = vec![1.0, (b - a) / (a + b + 2.0)];
        for j in 1..k {
            let jf = j as f64;
            let next = ((b - a) * m[j] + jf * m[j - 1]) / (a + b + jf + 2.0);
            m.push(next);
        }
        let half = 0.5 * (self.hi - self.lo);
        let mid = 0.5 * (self.hi + self.lo);
        let mut binom = 1.0;
        let mut total = 0.0;
        for i in 0..=k {
            if i > 0 {
                binom *= (k - i + 1) as f64 / i as f64;
            }
            total += binom * half.powi(i as i32) * mid.powi((k - i) as i32) * m[i];
        }
        total
    }

    /// Quadrature in the angle `θ`, `t = ±cos θ`, one half-interval per
    /// endpoint. The weight becomes
    /// `C 2^{a+b} sin(θ/2)^{2e} cos(θ/2)^{2f} sin θ dθ` with `e` the exponent
    /// at the endpoint being approached, so polynomials oscillate uniformly
    /// in `θ`. The panel touching the endpoint is split geometrically and
    /// its innermost piece gets the power substitution `θ = c u^q`.
    fn discretize(&self, resolution: usize) -> Vec<(f64, f64)> {
        let panels = (resolution / (2 * PANEL_ORDER)).max(1);
        let (gx, gw) = gauss_legendre(PANEL_ORDER);
        let log_c = self.log_norm() + (self.a + self.b) * 2f64.ln();
        let half = 0.5 * (self.hi - self.lo);
        let h = 0.5 * PI / panels as f64;
        let mut atoms = Vec::with_capacity(2 * (panels + GRADING_LEVELS) * PANEL_ORDER);
        for (e, f, right) in [(self.a, self.b, true), (self.b, self.a, false)] {
            let node = |theta: f64| {
                let gap = 2.0 * half * (0.5 * theta).sin().powi(2);
                if right {
                    self.hi - gap
                } else {
                    self.lo + gap
                }
            };
            let weight = |theta: f64| {
                let (s, c) = (0.5 * theta).sin_cos();
                (log_c + 2.0 * e * s.ln() + 2.0 * f * c.ln()).exp() * theta.sin()
            };
            let mut panel_lo = Vec::new();
            for p in (1..panels).rev() {
                panel_lo.push((p as f64 * h, (p + 1) as f64 * h));
            }
            let mut edge = h;
            for _ in 0..GRADING_LEVELS {
                panel_lo.push((0.5 * edge, edge));
                edge *= 0.5;
            }
            for (lo, hi) in panel_lo {
                for (xi, wi) in gx.iter().zip(&gw) {
                    let theta = lo + 0.5 * (hi - lo) * (xi + 1.0);
                    let w = weight(theta) * 0.5 * (hi - lo) * wi;
                    if w > 0.0 {
                        atoms.push((node(theta), w));
                    }
                }
            }
            // Innermost piece [0, edge]: θ = edge·u^q turns θ^{2e+1} dθ into
            // edge^{2e+2} q u^{q(2e+2)-1} du.
            let q = substitution_power(2.0 * e + 1.0);
            for (xi, wi) in gx.iter().zip(&gw) {
                let u = 0.5 * (xi + 1.0);
                let theta = edge * u.powf(q);
                let c = (0.5 * theta).cos();
                // sin(θ/2)^{2e} sin θ / θ^{2e+1}, free of the singular power.
                let smooth = if theta == 0.0 {
                    2f64.powf(-2.0 * e)
                } else {
                    ((0.5 * theta).sin() / theta).powf(2.0 * e) * theta.sin() / theta
                };
                let w = (log_c + 2.0 * f * c.ln()).exp()
                    * smooth
                    * edge.powf(2.0 * e + 2.0)
                    * q
                    * u.powf(q * (2.0 * e + 2.0) - 1.0)
                    * 0.5
                    * wi;
                if w > 0.0 {
                    atoms.push((node(theta), w));
                }
            }
        }
        atoms
    }
}

/// Number of geometric subdivisions of each endpoint panel.
const GRADING_LEVELS: usize = 24;

/// Smallest integer `q <= 16` making `q (e + 1)` an integer, so the
/// substituted factor `u^{q(e+1) - 1}` is a polynomial. Otherwise a power
/// large enough that the factor is fifteen times differentiable.
fn substitution_power(e: f64) -> f64 {
    for q in 1..=16 {
        let v = q as f64 * (e + 1.0);
        if (v - v.round()).abs() < 1e-9 && v.round() >= 1.0 {
            return q as f64;
        }
    }
    (16.0 / (e + 1.0)).ceil()
}

fn catalan(m: usize) -> f64 {
    (0..m).fold(1.0, |c, k| c * 2.0 * (2 * k + 1) as f64 / (k + 2) as f64)
}

impl NamedMeasure {
    pub fn new(kind: MeasureKind) -> Self {
        Self {
            kind,
            extra_atoms: Vec::new(),
        }
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        Self::new(MeasureKind::UniformInterval { lo, hi })
    }

    pub fn chebyshev2() -> Self {
        Self::new(MeasureKind::Chebyshev2Scaled)
    }

    pub fn jacobi(a: f64, b: f64) -> Self {
        Self::new(MeasureKind::JacobiWeight { a, b })
    }

    pub fn lebesgue_circle() -> Self {
        Self::new(MeasureKind::LebesgueCircle)
    }

    pub fn szego(coeffs: Vec<Complex64>) -> Self {
        Self::new(MeasureKind::SzegoWeight { coeffs })
    }

    pub fn with_atom(mut self, point: Complex64, mass: f64) -> Self {
        self.extra_atoms.push((point, mass));
        self
    }

    pub fn with_real_atom(self, x: f64, mass: f64) -> Self {
        self.with_atom(Complex64::new(x, 0.0), mass)
    }

    pub fn name(&self) -> String {
        let base = match &self.kind {
            MeasureKind::UniformInterval { lo, hi } => format!("uniform[{lo},{hi}]"),
            MeasureKind::Chebyshev2Scaled => "chebyshev2".to_string(),
            MeasureKind::JacobiWeight { a, b } => format!("jacobi({a},{b})"),
            MeasureKind::LebesgueCircle => "lebesgue-circle".to_string(),
            MeasureKind::SzegoWeight { coeffs } => format!("szego(deg {})", coeffs.len() - 1),
        };
        self.extra_atoms
            .iter()
            .fold(base, |acc, (z, m)| format!("{acc}+{m}δ({z})"))
    }

    pub fn support(&self) -> SupportKind {
        match self.kind {
            MeasureKind::LebesgueCircle | MeasureKind::SzegoWeight { .. } => SupportKind::UnitCircle,
            _ => SupportKind::RealLine,
        }
    }

    fn affine_jacobi(&self) -> Option<AffineJacobi> {
        match self.kind {
            MeasureKind::UniformInterval { lo, hi } => Some(AffineJacobi { lo, hi, a: 0.0, b: 0.0 }),
            MeasureKind::Chebyshev2Scaled => Some(AffineJacobi {
                lo: -2.0,
                hi: 2.0,
                a: 0.5,
                b: 0.5,
            }),
            MeasureKind::JacobiWeight { a, b } => Some(AffineJacobi { lo: -1.0, hi: 1.0, a, b }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            MeasureKind::UniformInterval { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Error::InvalidMeasure(format!(
                        "uniform interval needs finite lo < hi, got [{lo}, {hi}]"
                    )));
                }
            }
            MeasureKind::JacobiWeight { a, b } => {
                if !(*a > -1.0 && *b > -1.0 && a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidMeasure(format!(
                        "Jacobi weight needs a, b > -1, got a = {a}, b = {b}"
                    )));
                }
            }
            MeasureKind::SzegoWeight { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::InvalidMeasure("Szegő weight needs c_0".into()));
                }
                if coeffs[0].im != 0.0 || coeffs[0].re <= 0.0 {
                    return Err(Error::InvalidMeasure(
                        "Szegő weight needs a real positive c_0".into(),
                    ));
                }
            }
            MeasureKind::Chebyshev2Scaled | MeasureKind::LebesgueCircle => {}
        }
        for (i, (z, m)) in self.extra_atoms.iter().enumerate() {
            if !(m.is_finite() && *m > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "extra atom {i}: mass {m} must be positive"
                )));
            }
            match self.support() {
                SupportKind::RealLine if z.im != 0.0 => {
                    return Err(Error::InvalidMeasure(format!(
                        "extra atom {i}: {z} is not real"
                    )))
                }
                SupportKind::UnitCircle if (z.norm() - 1.0).abs() > 1e-12 => {
                    return Err(Error::InvalidMeasure(format!(
                        "extra atom {i}: {z} is not on the unit circle"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Support interval of the absolutely continuous part.
    pub fn interval(&self) -> Option<(f64, f64)> {
        self.affine_jacobi().map(|j| (j.lo, j.hi))
    }

    /// Density `w(x)` of the a.c. part with respect to `dx`.
    pub fn density(&self, x: f64) -> Option<f64> {
        self.affine_jacobi().map(|j| j.density(x))
    }

    /// Circle weight `w(θ)` with respect to `dθ/2π`.
    pub fn circle_weight(&self, theta: f64) -> Option<f64> {
        match &self.kind {
            MeasureKind::LebesgueCircle => Some(1.0),
            MeasureKind::SzegoWeight { coeffs } => Some(szego_weight(coeffs, theta)),
            _ => None,
        }
    }

    /// Mass of the analytic part plus all extra atoms.
    pub fn total_mass(&self) -> f64 {
        let base = match &self.kind {
            MeasureKind::SzegoWeight { coeffs } => coeffs[0].re,
            _ => 1.0,
        };
        base + self.extra_atoms.iter().map(|(_, m)| m).sum::<f64>()
    }

    /// Extra atoms outside the closed support of the analytic part.
    pub fn isolated_atoms(&self) -> Vec<(Complex64, f64)> {
        match self.interval() {
            Some((lo, hi)) => self
                .extra_atoms
                .iter()
                .copied()
                .filter(|(z, _)| z.re < lo || z.re > hi)
                .collect(),
            None => Vec::new(),
        }
    }

    /// Closed-form `∫ x^k dμ` (real line) or `∫ z^k dμ` (circle).
    pub fn exact_moment(&self, k: usize) -> Complex64 {
        let base = match &self.kind {
            MeasureKind::Chebyshev2Scaled => {
                if k % 2 == 1 {
                    0.0.into()
                } else {
                    catalan(k / 2).into()
                }
            }
            MeasureKind::UniformInterval { lo, hi } => {
                let k1 = (k + 1) as f64;
                ((hi.powi(k as i32 + 1) - lo.powi(k as i32 + 1)) / (k1 * (hi - lo))).into()
            }
            MeasureKind::JacobiWeight { .. } => self.affine_jacobi().unwrap().moment(k).into(),
            MeasureKind::LebesgueCircle => {
                if k == 0 {
                    1.0.into()
                } else {
                    0.0.into()
                }
            }
            MeasureKind::SzegoWeight { coeffs } => {
                coeffs.get(k).map(|c| c.conj()).unwrap_or_default()
            }
        };
        self.extra_atoms
            .iter()
            .fold(base, |acc, (z, m)| acc + z.powu(k as u32) * m)
    }

    /// Largest polynomial degree whose orthogonal polynomials a
    /// discretization at `resolution` carries reliably: a quarter of the
    /// atom count on the line, an eighth on the circle.
    pub fn max_degree(&self, resolution: usize) -> usize {
        match self.support() {
            SupportKind::RealLine => resolution / 4,
            SupportKind::UnitCircle => resolution / 8,
        }
    }

    /// Atomic form of the measure.
    ///
    /// Real-line weights use composite Gauss–Legendre panels of order
    /// [`PANEL_ORDER`] in the angle variable, `resolution / 64` panels on
    /// each half of the interval, the endpoint panels refined
    /// geometrically with a power substitution on the innermost piece.
    /// The atom count is therefore slightly above `resolution`. Circle weights are sampled at `resolution` equispaced
    /// angles starting at `θ = 0`. Extra atoms are merged in afterwards.
    pub fn discretize(&self, resolution: usize) -> Result<AtomicMeasure> {
        self.validate()?;
        if resolution < MIN_RESOLUTION {
            return Err(Error::Precondition(format!(
                "resolution {resolution} is below the minimum {MIN_RESOLUTION}"
            )));
        }
        let label = self.name();
        let base = match &self.kind {
            MeasureKind::LebesgueCircle | MeasureKind::SzegoWeight { .. } => {
                let m = resolution as f64;
                let mut atoms = Vec::with_capacity(resolution);
                let max_w = (0..resolution)
                    .map(|j| self.circle_weight(2.0 * PI * j as f64 / m).unwrap())
                    .fold(0.0, f64::max);
                for j in 0..resolution {
                    let theta = 2.0 * PI * j as f64 / m;
                    let w = self.circle_weight(theta).unwrap();
                    if w < -1e-14 * max_w {
                        return Err(Error::InvalidMeasure(format!(
                            "Szegő weight is negative ({w}) at θ = {theta}"
                        )));
                    }
                    if w > 1e-14 * max_w {
                        atoms.push((unit_point(j, resolution), w / m));
                    }
                }
                AtomicMeasure::new(SupportKind::UnitCircle, atoms, label.clone())?
            }
            _ => {
                let jac = self.affine_jacobi().unwrap();
                let mut atoms = jac.discretize(resolution);
                atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
                // The substitution can round distinct nodes onto an endpoint.
                atoms.dedup_by(|next, prev| {
                    if next.0 == prev.0 {
                        prev.1 += next.1;
                        true
                    } else {
                        false
                    }
                });
                AtomicMeasure::real(&atoms, label.clone())?
            }
        };
        let mut mu = base;
        for &(z, m) in &self.extra_atoms {
            mu = mu.with_atom(z, m)?;
        }
        let mu = AtomicMeasure::new(mu.support(), mu.atoms(), label)?;
        Ok(mu.mark_discretized())
    }
}

/// `e^{2πij/m}` with exact values at the quarter turns.
fn unit_point(j: usize, m: usize) -> Complex64 {
    if (4 * j) % m == 0 {
        match 4 * j / m {
            0 => return Complex64::new(1.0, 0.0),
            1 => return Complex64::new(0.0, 1.0),
            2 => return Complex64::new(-1.0, 0.0),
            3 => return Complex64::new(0.0, -1.0),
            _ => {}
        }
    }
    Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)
}

fn szego_weight(coeffs: &[Complex64], theta: f64) -> f64 {
    let mut w = coeffs[0].re;
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        w += 2.0 * (c * Complex64::from_polar(1.0, k as f64 * theta)).re;
    }
    w
}

/// Short names: `uniform`, `uniform[lo,hi]`, `chebyshev2`, `jacobi(a,b)`,
/// `lebesgue_circle`, each optionally followed by `+mass@point` terms.
/// Circle points are given as angles in radians.
impl std::str::FromStr for NamedMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut parts = s.split('+');
        let base = parts.next().unwrap_or_default().trim();
        let bad = |why: &str| Error::Parse(format!("measure `{s}`: {why}"));
        let nums = |inner: &str| -> Result<Vec<f64>> {
            inner
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| bad(&e.to_string())))
                .collect()
        };
        let args = |open: char, close: char| -> Result<Vec<f64>> {
            let start = base.find(open).ok_or_else(|| bad("missing arguments"))?;
            let inner = base[start + 1..]
                .strip_suffix(close)
                .ok_or_else(|| bad("unbalanced brackets"))?;
            nums(inner)
        };
        let mut m = match base {
            "uniform" => Self::uniform(-1.0, 1.0),
            "chebyshev2" => Self::chebyshev2(),
            "lebesgue_circle" | "lebesgue-circle" => Self::lebesgue_circle(),
            b if b.starts_with("uniform[") => match args('[', ']')?[..] {
                [lo, hi] => Self::uniform(lo, hi),
                _ => return Err(bad("uniform[lo,hi] takes two numbers")),
            },
            b if b.starts_with("jacobi(") => match args('(', ')')?[..] {
                [a, b] => Self::jacobi(a, b),
                _ => return Err(bad("jacobi(a,b) takes two numbers")),
            },
            _ => return Err(bad("unknown measure name")),
        };
        for term in parts {
            let (mass, point) = term
                .split_once('@')
                .ok_or_else(|| bad("extra atoms are written +mass@point"))?;
            let mass: f64 = mass.trim().parse().map_err(|_| bad("bad atom mass"))?;
            let point: f64 = point.trim().parse().map_err(|_| bad("bad atom point"))?;
            m = match m.support() {
                SupportKind::RealLine => m.with_real_atom(point, mass),
                SupportKind::UnitCircle => m.with_atom(Complex64::from_polar(1.0, point), mass),
            };
        }
        m.validate()?;
        Ok(m)
    }
}
