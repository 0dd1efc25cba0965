//! Truncated power series: evaluation, composition and reversion.

use crate::error::{Error, Result};

/// `sum_i c[i] * x^(i+1)`, i.e. a series without constant term.
pub fn eval_no_constant(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| (acc + ci) * x)
}

/// Product of two series with coefficients indexed from `x^1`, truncated at `x^n`.
fn mul_truncated(p: &[f64], q: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, &pi) in p.iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        for (j, &qj) in q.iter().enumerate() {
            let k = i + j + 1;
            if k >= n {
                break;
            }
            out[k] += pi * qj;
        }
    }
    out
}

/// Composition `A(B(y))`, truncated at `y^n`; both series start at the linear term.
pub fn compose(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    let mut power: Vec<f64> = b.iter().copied().take(n).chain(std::iter::repeat(0.0)).take(n).collect();
    for (i, &ai) in a.iter().enumerate().take(n) {
        if i > 0 {
            power = mul_truncated(&power, b, n);
        }
        for (o, p) in out.iter_mut().zip(&power) {
            *o += ai * p;
        }
    }
    out
}

/// Reversion of `z = a1 y + a2 y² + ... + an yⁿ`.
///
/// Returns `b1..bn` with `y = b1 z + ... + bn zⁿ + O(z^{n+1})`. Each `b_k`
/// follows from the `z^k` coefficient of `A(B(z)) = z` once `b1..b_{k-1}` are
/// known, since `b_k` enters that coefficient only through `a1 b_k`.
pub fn invert_power_series(a: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    let a1 = *a.first().ok_or(Error::DegenerateSeries)?;
    if a1 == 0.0 || !a1.is_finite() {
        return Err(Error::DegenerateSeries);
    }
    let mut b = vec![0.0; n];
    b[0] = 1.0 / a1;
    for k in 1..n {
        let partial = compose(a, &b[..k], k + 1);
        b[k] = -partial[k] / a1;
    }
    Ok(b)
}
