//! Orthogonal polynomials on the real line.
//!
//! Indices follow the usual convention: `a_n`, `b_n` start at `n = 1`, so
//! `a[0]` holds `a_1`. The recurrence is
//! `x p_n = a_{n+1} p_{n+1} + b_{n+1} p_n + a_n p_{n-1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{AtomicMeasure, SupportKind};
use crate::scalar::Scalar;
use crate::sum::CompensatedSum;
use crate::table::{fmt_f64, Table};

/// Values above this magnitude are reported as overflow.
pub const OVERFLOW_LIMIT: f64 = 1e300;

/// Recurrence coefficients of an OPRL family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    a: Vec<f64>,
    b: Vec<f64>,
    mass0: f64,
    #[serde(rename = "maxDegree")]
    max_degree: usize,
    /// Index of the first stored coefficient, always 1.
    #[serde(rename = "firstIndex", default = "one")]
    first_index: usize,
}

fn one() -> usize {
    1
}

impl JacobiParams {
    /// `a = [a_1..a_N]`, `b = [b_1..b_N]`; `p_0..p_N` become evaluable.
    pub fn new(a: Vec<f64>, b: Vec<f64>, mass0: f64) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Precondition(format!(
                "need as many a_n as b_n, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if let Some((i, v)) = a.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Precondition(format!("a_{} = {v} is not positive", i + 1)));
        }
        if let Some((i, v)) = b.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Precondition(format!("b_{} = {v} is not finite", i + 1)));
        }
        if !(mass0.is_finite() && mass0 > 0.0) {
            return Err(Error::Precondition(format!("mass0 = {mass0} is not positive")));
        }
        let max_degree = a.len();
        Ok(Self {
            a,
            b,
            mass0,
            max_degree,
            first_index: 1,
        })
    }

    /// Free Jacobi parameters `a_n = 1`, `b_n = 0`: the scaled Chebyshev
    /// polynomials of the second kind on `[-2, 2]`.
    pub fn free(n: usize) -> Self {
        Self::new(vec![1.0; n], vec![0.0; n], 1.0).expect("valid")
    }

    /// `a_n` for `n >= 1`.
    pub fn a(&self, n: usize) -> f64 {
        self.a[n - 1]
    }

    /// `b_n` for `n >= 1`.
    pub fn b(&self, n: usize) -> f64 {
        self.b[n - 1]
    }

    pub fn a_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn b_slice(&self) -> &[f64] {
        &self.b
    }

    pub fn mass0(&self) -> f64 {
        self.mass0
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `log κ_n` where `p_n = κ_n P_n`; `κ_n = (a_1⋯a_n)^{-1} mass0^{-1/2}`.
    pub fn log_kappa(&self, n: usize) -> f64 {
        -0.5 * self.mass0.ln() - self.a[..n].iter().map(|a| a.ln()).sum::<f64>()
    }

    /// Parameters of the same recurrence for the measure `c·μ`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), self.mass0 * c)
    }

    /// Once-stripped parameters `ã_n = a_{n+1}`, `b̃_n = b_{n+1}` with the
    /// same total mass, so that `q_n(x; μ) = a_1^{-1} p_{n-1}(x; μ̃)`.
    pub fn stripped(&self) -> Result<Self> {
        if self.max_degree == 0 {
            return Err(Error::DegreeOutOfRange {
                requested: 1,
                available: 0,
            });
        }
        Self::new(self.a[1..].to_vec(), self.b[1..].to_vec(), self.mass0)
    }

    /// Truncated copy carrying degrees up to `n`.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        self.check_degree(n)?;
        Self::new(self.a[..n].to_vec(), self.b[..n].to_vec(), self.mass0)
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

    /// Evaluate `p_0..p_n`, `P_0..P_n` and `q_0..q_n` at `x`.
    pub fn eval<T: Scalar>(&self, n: usize, x: T) -> Result<PolyEval<T>> {
        self.check_degree(n)?;
        let p = self.orthonormal_values(n, x)?;
        let q = self.second_kind_values(n, x)?;
        let log_kappa: Vec<f64> = (0..=n).map(|k| self.log_kappa(k)).collect();
        let monic: Vec<T> = p
            .iter()
            .zip(&log_kappa)
            .map(|(&v, lk)| v * (-lk).exp())
            .collect();
        check_finite(&monic, x)?;
        Ok(PolyEval {
            x,
            values: p,
            monic,
            second_kind: q,
            log_kappa,
        })
    }

    /// `p_0(x)..p_n(x)` by the forward recurrence.
    pub fn orthonormal_values<T: Scalar>(&self, n: usize, x: T) -> Result<Vec<T>> {
        self.check_degree(n)?;
        let mut p = Vec::with_capacity(n + 1);
        p.push(T::from_real(self.mass0.powf(-0.5)));
        self.run_recurrence(&mut p, n, x);
        check_finite(&p, x)?;
        Ok(p)
    }

    /// `q_0(x)..q_n(x)`: `q_0 = 0`, `q_1 = mass0^{-1/2} / a_1`, same recurrence.
    pub fn second_kind_values<T: Scalar>(&self, n: usize, x: T) -> Result<Vec<T>> {
        self.check_degree(n)?;
        let mut q = vec![T::from_real(0.0)];
        if n >= 1 {
            q.push(T::from_real(self.mass0.powf(-0.5) / self.a[0]));
            self.run_recurrence(&mut q, n, x);
        }
        check_finite(&q, x)?;
        Ok(q)
    }

    /// Continue `a_{k+1} y_{k+1} = (x - b_{k+1}) y_k - a_k y_{k-1}` until
    /// `y_n` is present. Starts from whatever prefix `y` holds.
    fn run_recurrence<T: Scalar>(&self, y: &mut Vec<T>, n: usize, x: T) {
        while y.len() <= n {
            let k = y.len() - 1;
            let prev = if k == 0 {
                T::from_real(0.0)
            } else {
                y[k - 1] * self.a[k - 1]
            };
            let next = ((x - T::from_real(self.b[k])) * y[k] - prev) / self.a[k];
            y.push(next);
        }
    }

    /// `(p_0..p_n, p'_0..p'_n)` from the recurrence and its derivative.
    pub fn values_and_derivatives<T: Scalar>(&self, n: usize, x: T) -> Result<(Vec<T>, Vec<T>)> {
        let p = self.orthonormal_values(n, x)?;
        let zero = T::from_real(0.0);
        let mut d = vec![zero];
        for k in 0..n {
            let prev = if k == 0 { zero } else { d[k - 1] * self.a[k - 1] };
            let next = (p[k] + (x - T::from_real(self.b[k])) * d[k] - prev) / self.a[k];
            d.push(next);
        }
        check_finite(&d, x)?;
        Ok((p, d))
    }

    /// Monomial coefficients (ascending powers) of `P_0..P_n`.
    pub fn monic_coefficients(&self, n: usize) -> Result<Vec<Vec<f64>>> {
        self.check_degree(n)?;
        Ok(monic_coefficients_from(&self.a, &self.b, n))
    }

    /// Monomial coefficients of `p_0..p_n`, row `j` holding `p_j`.
    pub fn orthonormal_coefficients(&self, n: usize) -> Result<Vec<Vec<f64>>> {
        let monic = self.monic_coefficients(n)?;
        Ok(monic
            .into_iter()
            .enumerate()
            .map(|(j, row)| {
                let k = self.log_kappa(j).exp();
                row.into_iter().map(|c| c * k).collect()
            })
            .collect())
    }

    /// `|q_n(x; μ) - a_1^{-1} p_{n-1}(x; μ̃)|` with `μ̃` the once-stripped
    /// measure. Contract: at most `1e-10 max(1, |q_n|)`.
    pub fn second_kind_shift_check(&self, n: usize, x: f64) -> Result<f64> {
        if n == 0 || n + 1 > self.max_degree {
            return Err(Error::DegreeOutOfRange {
                requested: n,
                available: self.max_degree.saturating_sub(1),
            });
        }
        let q = self.second_kind_values(n, x)?;
        let p_tilde = self.stripped()?.orthonormal_values(n - 1, x)?;
        Ok((q[n] - p_tilde[n - 1] / self.a[0]).abs())
    }

    /// One row per `n`: `n, a_n, b_n`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["n", "a_n", "b_n"]);
        for n in 1..=self.max_degree {
            t.push(vec![n.to_string(), fmt_f64(self.a(n)), fmt_f64(self.b(n))]);
        }
        t
    }
}

fn check_finite<T: Scalar>(values: &[T], x: T) -> Result<()> {
    match values
        .iter()
        .position(|v| !v.is_finite() || v.modulus() > OVERFLOW_LIMIT)
    {
        Some(degree) => Err(Error::Overflow {
            degree,
            point: format!("{:?}", x.to_complex()),
        }),
        None => Ok(()),
    }
}

/// `P_{k+1} = (x - b_{k+1}) P_k - a_k^2 P_{k-1}` in the monomial basis.
/// Needs `b_1..b_n` and `a_1..a_{n-1}`.
pub(crate) fn monic_coefficients_from(a: &[f64], b: &[f64], n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0]];
    for k in 0..n {
        let cur = &rows[k];
        let mut next = vec![0.0; k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= b[k] * c;
        }
        if k > 0 {
            let a2 = a[k - 1] * a[k - 1];
            for (i, c) in rows[k - 1].iter().enumerate() {
                next[i] -= a2 * c;
            }
        }
        rows.push(next);
    }
    rows
}

/// Orthonormal, monic and second-kind values at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyEval<T> {
    pub x: T,
    /// `p_0(x)..p_n(x)`.
    pub values: Vec<T>,
    /// `P_0(x)..P_n(x)`; may underflow to zero at large `n`.
    pub monic: Vec<T>,
    /// `q_0(x)..q_n(x)`.
    pub second_kind: Vec<T>,
    /// `log κ_0..log κ_n`.
    pub log_kappa: Vec<f64>,
}

impl<T: Scalar> PolyEval<T> {
    pub fn degree(&self) -> usize {
        self.values.len() - 1
    }
}

/// Discretized Stieltjes procedure in orthonormal form.
///
/// Each step computes `b_{k+1} = ⟨x p_k, p_k⟩` and
/// `a_{k+1} = ‖(x - b_{k+1}) p_k - a_k p_{k-1}‖` against the atoms. When
/// `allow_exhausted` is set, a final `a_{steps}` that vanishes is allowed
/// and returned as `0`.
fn stieltjes_core(
    mu: &AtomicMeasure,
    steps: usize,
    allow_exhausted: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let xs = mu.real_points();
    let ws = mu.weights();
    let m = xs.len();
    let spread = mu.spread().max(f64::MIN_POSITIVE);
    let mut prev = vec![0.0; m];
    let mut cur = vec![mu.total_mass().powf(-0.5); m];
    let mut a = Vec::with_capacity(steps);
    let mut b = Vec::with_capacity(steps);
    let mut a_prev = 0.0;
    for k in 0..steps {
        let mut s = CompensatedSum::new();
        for i in 0..m {
            s.add(ws[i] * xs[i] * cur[i] * cur[i]);
        }
        let bk = s.value();
        let mut next = vec![0.0; m];
        let mut norm = CompensatedSum::new();
        for i in 0..m {
            let r = (xs[i] - bk) * cur[i] - a_prev * prev[i];
            next[i] = r;
            norm.add(ws[i] * r * r);
        }
        let a2 = norm.value();
        b.push(bk);
        if a2 < 1e3 * f64::EPSILON * spread * spread {
            if allow_exhausted && k + 1 == steps {
                a.push(0.0);
                break;
            }
            return Err(Error::MeasureTooCoarse { degree: k + 1 });
        }
        let ak = a2.sqrt();
        next.iter_mut().for_each(|v| *v /= ak);
        a.push(ak);
        prev = std::mem::replace(&mut cur, next);
        a_prev = ak;
    }
    Ok((a, b))
}

fn require_real(mu: &AtomicMeasure) -> Result<()> {
    if mu.support() != SupportKind::RealLine {
        return Err(Error::WrongSupport(format!(
            "`{}` lives on the unit circle; OPRL need a real-line measure",
            mu.label()
        )));
    }
    Ok(())
}

/// An extreme atom is treated as isolated when its gap to the next atom
/// exceeds this multiple of the largest gap between the interior atoms.
const ISOLATION_FACTOR: f64 = 8.0;

/// At most this many peeling rounds are made at the ends of the support.
const MAX_ISOLATED: usize = 8;

/// Index range of the atoms left after peeling isolated atoms off both
/// ends of the sorted support.
fn bulk_range(xs: &[f64]) -> (usize, usize) {
    let (mut lo, mut hi) = (0, xs.len());
    for _ in 0..MAX_ISOLATED {
        if hi - lo < 4 {
            break;
        }
        let inner = xs[lo + 1..hi - 1].windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        let right = xs[hi - 1] - xs[hi - 2] > ISOLATION_FACTOR * inner;
        let left = xs[lo + 1] - xs[lo] > ISOLATION_FACTOR * inner;
        if !(left || right) {
            break;
        }
        hi -= usize::from(right);
        lo += usize::from(left);
    }
    (lo, hi)
}

/// Jacobi matrix of `ν + w δ_x`, where `ν` has total mass `mass` and is
/// the spectral measure of the full Jacobi matrix `(a, b)` (`a` one shorter
/// than `b`). The bordered matrix `diag(x) ⊕ J` is rotated so the start
/// vector becomes `e_1` and the bulge is chased down, as in the
/// Gragg–Harrod update. Only orthogonal rotations are used.
fn insert_atom(a: &[f64], b: &[f64], mass: f64, x: f64, w: f64) -> (Vec<f64>, Vec<f64>) {
    let mut d: Vec<f64> = std::iter::once(x).chain(b.iter().copied()).collect();
    let mut e: Vec<f64> = std::iter::once(0.0).chain(a.iter().copied()).collect();
    let size = d.len();
    let rotate = |d: &mut [f64], e: &mut [f64], p: usize, c: f64, s: f64| -> f64 {
        let (dp, dq, ep) = (d[p], d[p + 1], e[p]);
        d[p] = c * c * dp + 2.0 * c * s * ep + s * s * dq;
        d[p + 1] = s * s * dp - 2.0 * c * s * ep + c * c * dq;
        e[p] = c * s * (dq - dp) + (c * c - s * s) * ep;
        if p + 2 < d.len() {
            let below = e[p + 1];
            e[p + 1] = c * below;
            s * below
        } else {
            0.0
        }
    };
    let r = (w + mass).sqrt();
    let mut bulge = rotate(&mut d, &mut e, 0, w.sqrt() / r, mass.sqrt() / r);
    let mut p = 1;
    while bulge != 0.0 && p + 1 < size {
        let r = e[p - 1].hypot(bulge);
        let (c, s) = (e[p - 1] / r, bulge / r);
        e[p - 1] = r;
        bulge = rotate(&mut d, &mut e, p, c, s);
        p += 1;
    }
    (e.into_iter().map(f64::abs).collect(), d)
}

/// Jacobi parameters `a_1..a_N`, `b_1..b_N` of `mu`.
///
/// Native atomic measures need more than `N` atoms. Discretized analytic
/// weights must carry at least `4N` atoms so the orthogonality residuals
/// stay small.
///
/// The Stieltjes iteration loses orthogonality once it resolves an atom
/// sitting far outside the rest of the support, so such atoms are split
/// off: the remaining bulk goes through Stieltjes to degree `N + 2` and
/// each isolated atom is then inserted by orthogonal rotations. The first
/// `N` coefficients of the result are exact for `mu`, because the Gauss
/// rule of the bulk matches its moments to degree `2N + 3`.
pub fn stieltjes_recurrence(mu: &AtomicMeasure, n: usize) -> Result<JacobiParams> {
    require_real(mu)?;
    if n == 0 {
        return Err(Error::Precondition("max degree must be at least 1".into()));
    }
    if mu.len() <= n || (mu.is_discretized() && mu.len() < 4 * n) {
        return Err(Error::InsufficientAtoms {
            atoms: mu.len(),
            degree: n,
        });
    }
    let xs = mu.real_points();
    let (lo, hi) = bulk_range(&xs);
    let depth = n + 2;
    if (lo > 0 || hi < xs.len()) && hi - lo > depth {
        let ws = mu.weights();
        let atoms: Vec<(f64, f64)> = (lo..hi).map(|i| (xs[i], ws[i])).collect();
        let mut bulk = AtomicMeasure::real(&atoms, mu.label())?;
        if mu.is_discretized() {
            bulk = bulk.mark_discretized();
        }
        let (mut a, mut b) = stieltjes_core(&bulk, depth, false)?;
        a.pop();
        let mut mass = bulk.total_mass();
        for i in (0..lo).chain(hi..xs.len()) {
            (a, b) = insert_atom(&a, &b, mass, xs[i], ws[i]);
            mass += ws[i];
        }
        a.truncate(n);
        b.truncate(n);
        return JacobiParams::new(a, b, mu.total_mass());
    }
    let (a, b) = stieltjes_core(mu, n, false)?;
    JacobiParams::new(a, b, mu.total_mass())
}

/// Monic recurrence data `(a_1..a_{n-1}, b_1..b_n)` of `mu`, enough for
/// `P_0..P_n`. Works with exactly `n` atoms, where `P_n` has zero norm.
pub(crate) fn monic_recurrence(mu: &AtomicMeasure, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    require_real(mu)?;
    if mu.len() < n {
        return Err(Error::InsufficientAtoms {
            atoms: mu.len(),
            degree: n,
        });
    }
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let (mut a, b) = stieltjes_core(mu, n, true)?;
    a.truncate(n - 1);
    Ok((a, b))
}

/// Monomial coefficients of the monic `P_n` of `mu`.
pub fn monic_polynomial(mu: &AtomicMeasure, n: usize) -> Result<Vec<f64>> {
    let (a, b) = monic_recurrence(mu, n)?;
    Ok(monic_coefficients_from(&a, &b, n).pop().unwrap())
}
