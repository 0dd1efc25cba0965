//! Bracketed scalar root finding (Brent's method).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    /// Absolute tolerance on the root location.
    pub abs_tol: f64,
    /// Early exit once `|f(x)|` falls to this level; zero disables it.
    pub f_tol: f64,
    pub max_iter: usize,
    /// Growth factor used by [`expand_bracket`].
    pub expand_factor: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            f_tol: 0.0,
            max_iter: 200,
            expand_factor: 2.0,
        }
    }
}

impl RootConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || self.max_iter == 0 || !(self.expand_factor > 1.0) || self.f_tol < 0.0 {
            return Err(Error::InvalidConfig(format!("{self:?}")));
        }
        Ok(())
    }
}

/// Root of `f` in `[a, b]`.
///
/// Inverse quadratic interpolation and secant steps, guarded by bisection so the
/// bracket always shrinks. Either endpoint may be the root.
pub fn find_root<F>(mut f: F, a: f64, b: f64, cfg: &RootConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let fa = f(a);
    let fb = f(b);
    brent(&mut f, a, b, fa, fb, cfg)
}

/// As [`find_root`] with both endpoint values already known.
pub fn find_root_with<F>(mut f: F, a: f64, b: f64, fa: f64, fb: f64, cfg: &RootConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    brent(&mut f, a, b, fa, fb, cfg)
}

fn brent<F>(f: &mut F, a: f64, b: f64, fa: f64, fb: f64, cfg: &RootConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    cfg.validate()?;
    if fa.is_nan() || fb.is_nan() || fa * fb > 0.0 {
        return Err(Error::NoSignChange { a, b, fa, fb });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }

    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..cfg.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * cfg.abs_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 || fb.abs() <= cfg.f_tol {
            return Ok(b);
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::OutOfDomain {
                what: "objective evaluation",
                value: b,
            });
        }
    }
    Err(Error::MaxIterExceeded {
        iterations: cfg.max_iter,
        last: b,
    })
}

/// Move the upper end of `[lo, hi]` outward geometrically until `f` changes sign.
///
/// `hi` is multiplied by `cfg.expand_factor` at most `max_expansions` times.
/// Returns the final bracket and the function values at its ends.
pub fn expand_bracket<F>(mut f: F, lo: f64, hi: f64, max_expansions: usize, cfg: &RootConfig) -> Result<(f64, f64, f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let flo = f(lo);
    let mut hi = hi;
    let mut fhi = f(hi);
    for _ in 0..max_expansions {
        if flo * fhi <= 0.0 {
            return Ok((lo, hi, flo, fhi));
        }
        hi *= cfg.expand_factor;
        fhi = f(hi);
    }
    if flo * fhi <= 0.0 {
        Ok((lo, hi, flo, fhi))
    } else {
        Err(Error::NoSignChange {
            a: lo,
            b: hi,
            fa: flo,
            fb: fhi,
        })
    }
}
