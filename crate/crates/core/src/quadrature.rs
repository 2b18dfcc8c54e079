//! Zeros of OPRL, Gaussian quadrature and Markov–Stieltjes bounds.
//!
//! Zeros are eigenvalues of truncated Jacobi matrices, located by Sturm
//! bisection on the ratio form of the leading-minor recurrence and then
//! polished by a few Newton steps.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::kernel_diag_sum;
use crate::oprl::JacobiParams;
use crate::sum::{sum, CompensatedSum};
use crate::table::{fmt_f64, Table};

/// Nodes closer than this times the spectral spread are rejected.
pub const DUPLICATE_NODE_TOL: f64 = 1e-12;
/// Threshold (relative to `√K_n(x0, x0)`) below which `p_n(x0)` counts as zero.
pub const ANCHOR_CASE_TOL: f64 = 1e-10;

/// `n x n` truncation with `b_n` replaced by `b_n + corner_shift`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedJacobi {
    pub n: usize,
    /// Off-diagonal `a_1..a_{n-1}`.
    pub a: Vec<f64>,
    /// Diagonal `b_1..b_n` before the shift.
    pub b: Vec<f64>,
    pub corner_shift: f64,
}

impl TruncatedJacobi {
    pub fn new(jp: &JacobiParams, n: usize, corner_shift: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("truncation size must be positive".into()));
        }
        jp.check_degree(n)?;
        if !corner_shift.is_finite() {
            return Err(Error::Precondition(format!(
                "corner shift {corner_shift} is not finite"
            )));
        }
        Ok(Self {
            n,
            a: jp.a_slice()[..n - 1].to_vec(),
            b: jp.b_slice()[..n].to_vec(),
            corner_shift,
        })
    }

    fn diag(&self, k: usize) -> f64 {
        if k + 1 == self.n {
            self.b[k] + self.corner_shift
        } else {
            self.b[k]
        }
    }

    /// Row-major dense copy.
    pub fn dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for k in 0..n {
            m[k * n + k] = self.diag(k);
            if k + 1 < n {
                m[k * n + k + 1] = self.a[k];
                m[(k + 1) * n + k] = self.a[k];
            }
        }
        m
    }

    /// `det(z - J)` by the leading-minor recurrence.
    pub fn char_poly(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let mut prev = num_complex::Complex64::new(1.0, 0.0);
        let mut cur = z - self.diag(0);
        for k in 1..self.n {
            let next = (z - self.diag(k)) * cur - prev * (self.a[k - 1] * self.a[k - 1]);
            prev = cur;
            cur = next;
        }
        cur
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..self.n {
            let left = if k > 0 { self.a[k - 1].abs() } else { 0.0 };
            let right = if k + 1 < self.n { self.a[k].abs() } else { 0.0 };
            lo = lo.min(self.diag(k) - left - right);
            hi = hi.max(self.diag(k) + left + right);
        }
        let pad = 1e-12 * (hi - lo).max(hi.abs()).max(lo.abs()).max(1.0);
        (lo - pad, hi + pad)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut above = 0;
        let mut r = 1.0;
        for k in 0..self.n {
            let coupling = if k > 0 { self.a[k - 1] * self.a[k - 1] / r } else { 0.0 };
            r = x - self.diag(k) - coupling;
            if r == 0.0 {
                r = -f64::MIN_POSITIVE;
            }
            if r < 0.0 {
                above += 1;
            }
        }
        self.n - above
    }

    /// Newton step `f/f'` for `f = det(x - J)` via the logarithmic
    /// derivative of the ratio recurrence; `None` on an exact minor zero.
    fn newton_step(&self, x: f64) -> Option<f64> {
        let mut r = 1.0;
        let mut dr = 0.0;
        let mut log_deriv = 0.0;
        for k in 0..self.n {
            let (nr, ndr) = if k == 0 {
                (x - self.diag(0), 1.0)
            } else {
                let a2 = self.a[k - 1] * self.a[k - 1];
                (x - self.diag(k) - a2 / r, 1.0 + a2 * dr / (r * r))
            };
            if nr == 0.0 {
                return None;
            }
            r = nr;
            dr = ndr;
            log_deriv += dr / r;
        }
        (log_deriv != 0.0 && log_deriv.is_finite()).then(|| 1.0 / log_deriv)
    }

    fn eigenvalue(&self, j: usize, lo0: f64, hi0: f64) -> f64 {
        let (mut lo, mut hi) = (lo0, hi0);
        let scale = lo0.abs().max(hi0.abs()).max(1e-300);
        // Coarse bisection to an isolating bracket.
        while hi - lo > 1e-8 * scale {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..5 {
            match self.newton_step(x) {
                Some(step) => {
                    let next = x - step;
                    if !(next > lo && next < hi) {
                        break;
                    }
                    let done = (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(scale * 1e-3);
                    x = next;
                    if done {
                        return x;
                    }
                }
                None => return x,
            }
        }
        // Newton left the bracket or stalled: finish by bisection.
        while hi - lo > 2.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvalues with (0-based, increasing) indices in `range`.
    pub fn eigenvalues_in(&self, range: std::ops::Range<usize>) -> Result<Vec<f64>> {
        if range.end > self.n || range.start > range.end {
            return Err(Error::Precondition(format!(
                "eigenvalue indices {range:?} outside 0..{}",
                self.n
            )));
        }
        let (lo, hi) = self.gershgorin();
        Ok(range
            .into_par_iter()
            .map(|j| self.eigenvalue(j, lo, hi))
            .collect())
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let (lo, hi) = self.gershgorin();
        let vals: Vec<f64> = (0..self.n)
            .into_par_iter()
            .map(|j| self.eigenvalue(j, lo, hi))
            .collect();
        let spread = (vals[self.n - 1] - vals[0]).max(hi - lo);
        for j in 1..vals.len() {
            if vals[j] - vals[j - 1] <= DUPLICATE_NODE_TOL * spread {
                return Err(Error::Breakdown(format!(
                    "eigenvalues {} and {} at {} and {} coincide within {:e} of the spread",
                    j - 1,
                    j,
                    vals[j - 1],
                    vals[j],
                    DUPLICATE_NODE_TOL
                )));
            }
        }
        Ok(vals)
    }
}

/// Zeros of `p_n`, increasing.
pub fn zeros_pn(jp: &JacobiParams, n: usize) -> Result<Vec<f64>> {
    TruncatedJacobi::new(jp, n, 0.0)?.eigenvalues()
}

/// Zeros of `P_n - b P_{n-1}`, increasing.
pub fn zeros_shifted(jp: &JacobiParams, n: usize, b: f64) -> Result<Vec<f64>> {
    TruncatedJacobi::new(jp, n, b)?.eigenvalues()
}

/// How a Gauss-type rule is pinned down.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Anchor {
    /// Roots of `P_n - b P_{n-1}`.
    CornerShift(f64),
    /// The rule having `x0` as a node.
    Point(f64),
    /// `b = ∞`: roots of `P_{n-1}`.
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Provenance {
    pub n: usize,
    pub anchor: Anchor,
    /// The corner shift actually used; `None` for `b = ∞`.
    #[serde(rename = "cornerShift")]
    pub corner_shift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    #[serde(rename = "exactDegree")]
    pub exact_degree: usize,
    pub provenance: Provenance,
    /// Set when the anchor fell on a zero of `P_{n-1}` and the rule lost a node.
    pub degenerate: bool,
    pub warning: Option<String>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        sum(self.weights.iter().copied())
    }

    /// `Σ λ_j f(x_j)` in node order.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        sum(self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)))
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["node", "weight"]);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            t.push(vec![fmt_f64(*x), fmt_f64(*w)]);
        }
        t
    }
}

/// Rule of `m` nodes with weights `1/K_{m-1}`; nodes are roots of
/// `P_m - b P_{m-1}`.
fn rule_from_shift(jp: &JacobiParams, m: usize, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let nodes = zeros_shifted(jp, m, b)?;
    let weights = nodes
        .iter()
        .map(|&x| kernel_diag_sum(jp, m - 1, x).map(|k| 1.0 / k))
        .collect::<Result<Vec<_>>>()?;
    Ok((nodes, weights))
}

/// Replace the node nearest `x0` by `x0` itself and recompute its weight.
fn snap(jp: &JacobiParams, m: usize, nodes: &mut [f64], weights: &mut [f64], x0: f64) -> Result<()> {
    let (j, gap) = nodes
        .iter()
        .enumerate()
        .map(|(j, x)| (j, (x - x0).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty rule");
    let spread = (nodes[nodes.len() - 1] - nodes[0]).max(1.0);
    if gap > 1e-6 * spread {
        return Err(Error::Breakdown(format!(
            "anchor {x0} is not reproduced as a node (nearest at distance {gap:e})"
        )));
    }
    nodes[j] = x0;
    weights[j] = 1.0 / kernel_diag_sum(jp, m - 1, x0)?;
    Ok(())
}

/// Gauss-type rule of degree `n`.
///
/// * `CornerShift(0)`: the Gauss rule, exact to degree `2n-1`.
/// * `CornerShift(b)`, `b != 0`: exact to degree `2n-2`.
/// * `Point(x0)`: uses `b = P_n(x0)/P_{n-1}(x0)`; exact to `2n-1` when
///   `P_n(x0) = 0`, `2n-2` in general, and `2n-3` with only `n-1` nodes when
///   `P_{n-1}(x0) = 0`.
/// * `Infinity`: the `(n-1)`-node Gauss rule, exact to `2n-3`.
///
/// Weights are Christoffel numbers `1/K_{m-1}(x_j, x_j)` with `m` the
/// number of nodes.
pub fn gauss_rule(jp: &JacobiParams, n: usize, anchor: Anchor) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Precondition("rule size must be positive".into()));
    }
    jp.check_degree(n)?;
    let prov = |b: Option<f64>| Provenance {
        n,
        anchor,
        corner_shift: b,
    };
    let infinity_rule = |warning: Option<String>, snap_to: Option<f64>| -> Result<QuadratureRule> {
        if n == 1 {
            return Err(Error::Precondition(
                "b = ∞ needs n >= 2 (the rule would have no nodes)".into(),
            ));
        }
        let (mut nodes, mut weights) = rule_from_shift(jp, n - 1, 0.0)?;
        if let Some(x0) = snap_to {
            snap(jp, n - 1, &mut nodes, &mut weights, x0)?;
        }
        Ok(QuadratureRule {
            nodes,
            weights,
            exact_degree: 2 * n - 3,
            provenance: prov(None),
            degenerate: true,
            warning,
        })
    };
    match anchor {
        Anchor::CornerShift(b) => {
            let (nodes, weights) = rule_from_shift(jp, n, b)?;
            Ok(QuadratureRule {
                nodes,
                weights,
                exact_degree: if b == 0.0 { 2 * n - 1 } else { 2 * n - 2 },
                provenance: prov(Some(b)),
                degenerate: false,
                warning: None,
            })
        }
        Anchor::Infinity => infinity_rule(None, None),
        Anchor::Point(x0) => {
            let p = jp.orthonormal_values(n, x0)?;
            let scale = sum(p.iter().map(|v| v * v)).sqrt();
            let tiny = ANCHOR_CASE_TOL * scale;
            let (pn, pm) = (p[n], p[n - 1]);
            let ambiguous = |what: &str, v: f64| {
                (v != 0.0).then(|| {
                    format!("{what}(x0) = {v:e} is below {ANCHOR_CASE_TOL:e}·scale; treated as zero")
                })
            };
            if pm.abs() <= tiny {
                return infinity_rule(ambiguous("p_{n-1}", pm), Some(x0));
            }
            let (b, warning) = if pn.abs() <= tiny {
                (0.0, ambiguous("p_n", pn))
            } else {
                // P_n/P_{n-1} = a_n p_n/p_{n-1}, free of κ overflow.
                (jp.a(n) * pn / pm, None)
            };
            let (mut nodes, mut weights) = rule_from_shift(jp, n, b)?;
            snap(jp, n, &mut nodes, &mut weights, x0)?;
            Ok(QuadratureRule {
                nodes,
                weights,
                exact_degree: if b == 0.0 { 2 * n - 1 } else { 2 * n - 2 },
                provenance: prov(Some(b)),
                degenerate: false,
                warning,
            })
        }
    }
}

/// Monomial exactness of a rule against reference moments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactnessReport {
    /// Relative error per degree `0..=max_degree`.
    pub errors: Vec<f64>,
    pub tolerance: f64,
    #[serde(rename = "exactDegree")]
    pub exact_degree: usize,
    /// Whether every degree up to `exact_degree` is within tolerance.
    pub certified: bool,
    /// First degree beyond `exact_degree` exceeding the tolerance.
    #[serde(rename = "firstFailure")]
    pub first_failure: Option<usize>,
}

/// Compare `Σ λ_j x_j^k` with `moment(k)` for `k <= max_degree`.
///
/// The error at degree `k` is `|Σ λ_j x_j^k - m_k| / max(|m_k|, Σ λ_j |x_j|^k)`,
/// so vanishing odd moments are measured against the natural size of the
/// sum rather than zero.
pub fn exactness_check(
    rule: &QuadratureRule,
    moment: impl Fn(usize) -> f64,
    max_degree: usize,
    tolerance: f64,
) -> ExactnessReport {
    let mut errors = Vec::with_capacity(max_degree + 1);
    for k in 0..=max_degree {
        let mut s = CompensatedSum::new();
        let mut abs = CompensatedSum::new();
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = w * x.powi(k as i32);
            s.add(v);
            abs.add(v.abs());
        }
        let m = moment(k);
        let denom = m.abs().max(abs.value()).max(f64::MIN_POSITIVE);
        errors.push((s.value() - m).abs() / denom);
    }
    let certified = errors
        .iter()
        .take(rule.exact_degree + 1)
        .all(|e| *e <= tolerance);
    let first_failure = (rule.exact_degree + 1..=max_degree).find(|&k| errors[k] > tolerance);
    ExactnessReport {
        errors,
        tolerance,
        exact_degree: rule.exact_degree,
        certified,
        first_failure,
    }
}

/// Markov–Stieltjes bounds at `x0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfBounds {
    pub x0: f64,
    pub n: usize,
    /// `Σ_{x_j <= x0} λ_j`, bounds `μ((-∞, x0])` from above.
    pub upper: f64,
    /// `Σ_{x_j < x0} λ_j`, bounds `μ((-∞, x0))` from below.
    pub lower: f64,
    /// `1/K_{n-1}(x0, x0)`.
    pub christoffel: f64,
}

impl CdfBounds {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Markov–Stieltjes bounds from the rule with a node at `x0`.
pub fn markov_stieltjes(jp: &JacobiParams, n: usize, x0: f64) -> Result<CdfBounds> {
    let rule = gauss_rule(jp, n, Anchor::Point(x0))?;
    let lower = sum(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .filter(|(x, _)| **x < x0)
        .map(|(_, w)| *w));
    let at = rule
        .nodes
        .iter()
        .position(|x| *x == x0)
        .expect("anchored rule contains x0");
    Ok(CdfBounds {
        x0,
        n,
        upper: lower + rule.weights[at],
        lower,
        christoffel: atom_mass_bound(jp, n, x0)?,
    })
}

/// Bounds on `μ([x_l, x_k])` for nodes `l < k` of a rule:
/// `(Σ_{l<j<k} λ_j, Σ_{l<=j<=k} λ_j)`.
pub fn interval_bounds(rule: &QuadratureRule, l: usize, k: usize) -> Result<(f64, f64)> {
    if !(l < k && k < rule.len()) {
        return Err(Error::Precondition(format!(
            "need node indices l < k < {}, got l = {l}, k = {k}",
            rule.len()
        )));
    }
    let inner = sum(rule.weights[l + 1..k].iter().copied());
    let outer = sum(rule.weights[l..=k].iter().copied());
    Ok((inner, outer))
}

/// `1/K_{n-1}(x0, x0)`, an upper bound on `μ({x0})`.
pub fn atom_mass_bound(jp: &JacobiParams, n: usize, x0: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Precondition("degree must be positive".into()));
    }
    Ok(1.0 / kernel_diag_sum(jp, n - 1, x0)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingReport {
    #[serde(rename = "nMax")]
    pub n_max: usize,
    /// Number of zero pairs and sign conditions examined.
    pub checks: usize,
}

/// For every `n < n_max`: zeros of `p_n` are real, simple and strictly
/// interlaced by those of `p_{n+1}`, and `p_{n+1}(x) p'_n(x) < 0` at each
/// zero `x` of `p_n`. The first violation is returned as an error.
pub fn interlacing_check(jp: &JacobiParams, n_max: usize) -> Result<InterlacingReport> {
    if n_max + 1 > jp.max_degree() {
        return Err(Error::DegreeOutOfRange {
            requested: n_max + 1,
            available: jp.max_degree(),
        });
    }
    let zeros: Vec<Vec<f64>> = (1..=n_max)
        .into_par_iter()
        .map(|n| zeros_pn(jp, n))
        .collect::<Result<_>>()?;
    let mut checks = 0;
    for n in 1..n_max {
        let xs = &zeros[n - 1];
        let ys = &zeros[n];
        for j in 0..n {
            if !(ys[j] < xs[j] && xs[j] < ys[j + 1]) {
                return Err(Error::Violation(format!(
                    "interlacing fails at n = {n}, j = {j}: {} < {} < {} does not hold",
                    ys[j],
                    xs[j],
                    ys[j + 1]
                )));
            }
            let (p, d) = jp.values_and_derivatives(n + 1, xs[j])?;
            if !(p[n + 1] * d[n] < 0.0) {
                return Err(Error::Violation(format!(
                    "sign condition fails at n = {n}, j = {j}: p_(n+1) p'_n = {}",
                    p[n + 1] * d[n]
                )));
            }
            checks += 2;
        }
    }
    Ok(InterlacingReport { n_max, checks })
}

/// Result of the successive-zero spacing bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingCheck {
    pub gap: f64,
    pub bound: f64,
    pub holds: bool,
    /// Grid size used for the supremum (a proxy for the true sup).
    #[serde(rename = "gridPoints")]
    pub grid_points: usize,
}

pub const SPACING_GRID: usize = 1000;

/// Checks `|E - E'| >= (δ² - (|E-E'|/2)²)/(3n) · [K_n(E,E) / sup K_n(y,y)]^{1/2}`,
/// the supremum over `|y - (E+E')/2| <= δ` taken on a uniform grid.
pub fn spacing_lower_bound_check(
    jp: &JacobiParams,
    n: usize,
    e1: f64,
    e2: f64,
    delta: f64,
) -> Result<SpacingCheck> {
    let gap = (e1 - e2).abs();
    if gap == 0.0 {
        return Err(Error::Precondition("E and E' must be distinct".into()));
    }
    if !(delta > 0.5 * gap) {
        return Err(Error::Precondition(format!(
            "δ = {delta} must exceed |E-E'|/2 = {}",
            0.5 * gap
        )));
    }
    let zeros = zeros_pn(jp, n)?;
    let scale = zeros[n - 1] - zeros[0];
    for e in [e1, e2] {
        let hit = zeros.iter().any(|z| (z - e).abs() <= 1e-9 * scale.max(1.0));
        if !hit {
            return Err(Error::Precondition(format!("{e} is not a zero of P_{n}")));
        }
    }
    let mid = 0.5 * (e1 + e2);
    let mut sup: f64 = 0.0;
    for i in 0..SPACING_GRID {
        let y = mid - delta + 2.0 * delta * i as f64 / (SPACING_GRID - 1) as f64;
        sup = sup.max(kernel_diag_sum(jp, n, y)?);
    }
    let ke = kernel_diag_sum(jp, n, e1)?;
    let bound = (delta * delta - 0.25 * gap * gap) / (3.0 * n as f64) * (ke / sup).sqrt();
    Ok(SpacingCheck {
        gap,
        bound,
        holds: gap >= bound,
        grid_points: SPACING_GRID,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{AtomicMeasure, NamedMeasure};
    use crate::oprl::stieltjes_recurrence;

    fn uniform(n: usize) -> JacobiParams {
        let mu = NamedMeasure::uniform(-1.0, 1.0).discretize(512).unwrap();
        stieltjes_recurrence(&mu, n).unwrap()
    }

    #[test]
    fn uniform_two_point_rule() {
        let jp = uniform(10);
        let z = zeros_pn(&jp, 2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((z[0] + r).abs() < 1e-14 && (z[1] - r).abs() < 1e-14);
        let rule = gauss_rule(&jp, 2, Anchor::CornerShift(0.0)).unwrap();
        assert_eq!(rule.exact_degree, 3);
        assert!(rule.weights.iter().all(|w| (w - 0.5).abs() < 1e-14));
        assert!(rule.apply(|x| x.powi(3)).abs() < 1e-15);
        assert!((rule.apply(|x| x.powi(4)) - 1.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_zeros_are_cosines() {
        let jp = JacobiParams::free(10);
        let z = zeros_pn(&jp, 5).unwrap();
        for (k, x) in z.iter().enumerate() {
            let exact = 2.0 * ((5 - k) as f64 * std::f64::consts::PI / 6.0).cos();
            assert!((x - exact).abs() < 1e-14, "{x} vs {exact}");
        }
    }

    #[test]
    fn shifted_zeros_quadratic() {
        let jp = uniform(10);
        let z = zeros_shifted(&jp, 2, 0.1).unwrap();
        let d = (0.0025f64 + 1.0 / 3.0).sqrt();
        assert!((z[0] - (0.05 - d)).abs() < 1e-14);
        assert!((z[1] - (0.05 + d)).abs() < 1e-14);
    }

    #[test]
    fn degenerate_anchor_at_origin() {
        let jp = uniform(10);
        let rule = gauss_rule(&jp, 2, Anchor::Point(0.0)).unwrap();
        assert!(rule.degenerate);
        assert_eq!(rule.nodes, vec![0.0]);
        assert!((rule.weights[0] - 1.0).abs() < 1e-14);
        assert_eq!(rule.exact_degree, 1);
    }

    #[test]
    fn three_point_bounds() {
        let t = 1.0 / 3.0;
        let mu = AtomicMeasure::real(&[(-1.0, t), (0.0, t), (1.0, t)], "3").unwrap();
        let jp = stieltjes_recurrence(&mu, 2).unwrap();
        let z = zeros_pn(&jp, 2).unwrap();
        assert!((z[1] - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!((atom_mass_bound(&jp, 3, 0.0).unwrap() - t).abs() < 1e-14);
    }

    #[test]
    fn markov_stieltjes_uniform() {
        let jp = uniform(10);
        let x0 = 1.0 / 3f64.sqrt();
        let b = markov_stieltjes(&jp, 2, x0).unwrap();
        assert!((b.upper - 1.0).abs() < 1e-14 && (b.lower - 0.5).abs() < 1e-14);
        assert!((b.gap() - b.christoffel).abs() < 1e-14);
    }

    #[test]
    fn spacing_precondition() {
        let jp = JacobiParams::free(30);
        let z = zeros_pn(&jp, 20).unwrap();
        let gap = z[10] - z[9];
        assert!(spacing_lower_bound_check(&jp, 20, z[9], z[10], 0.4 * gap).is_err());
        let c = spacing_lower_bound_check(&jp, 20, z[9], z[10], gap).unwrap();
        assert!(c.holds);
    }
}
