//! Dense polynomials in the monomial basis, coefficients in ascending order.

use num_complex::Complex64;

pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn eval_real(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn to_complex(coeffs: &[f64]) -> Vec<Complex64> {
    coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect()
}

/// Multiply by `z`: shift every coefficient up one degree.
pub fn shift_up<T: Copy + Default>(coeffs: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(coeffs.len() + 1);
    out.push(T::default());
    out.extend_from_slice(coeffs);
    out
}

/// Largest coefficient modulus; used as the scale for coefficient residuals.
pub fn max_abs(coeffs: &[Complex64]) -> f64 {
    coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Max coefficientwise distance, padding the shorter polynomial with zeros.
pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let len = a.len().max(b.len());
    (0..len)
        .map(|k| {
            let x = a.get(k).copied().unwrap_or_default();
            let y = b.get(k).copied().unwrap_or_default();
            (x - y).norm()
        })
        .fold(0.0, f64::max)
}
