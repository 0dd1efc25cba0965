//! Black–Scholes rate function `J(m)` for the fixed-strike Asian option,
//! its expansions around the money and in the wings, and the optimal path.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numerics::{find_root, RootConfig};

/// Below this `|log m|` the Taylor series replaces the root solve.
pub const SERIES_SWITCH: f64 = 1e-4;
/// Below this moneyness the small-strike tail replaces the `ξ` solve.
pub const TAIL_SWITCH: f64 = 1e-8;

/// Coefficients of `J` in powers of `x = log m`, from `x²` upward.
pub const X_COEFFS: [f64; 6] = [
    3.0 / 2.0,
    -3.0 / 10.0,
    109.0 / 1400.0,
    -117.0 / 7000.0,
    47749.0 / 16170000.0,
    -147089.0 / 350350000.0,
];

/// Coefficients of `J` in powers of `k = m - 1`, from `k²` upward.
pub const K_COEFFS: [f64; 6] = [
    3.0 / 2.0,
    -9.0 / 5.0,
    333.0 / 175.0,
    -1704.0 / 875.0,
    1326951.0 / 673750.0,
    -43386939.0 / 21896875.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BsBranch {
    /// `m = 1` exactly.
    Atm,
    /// `sinh(β)/β = m`, `m > 1`.
    Beta(f64),
    /// `sin(2ξ)/(2ξ) = m`, `m < 1`.
    Xi(f64),
    /// Taylor series in `log m` close to the money.
    Series,
    /// Small-strike tail; the value carries no solver guarantee.
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsRateResult {
    pub j: f64,
    pub branch: BsBranch,
    /// Residual of the defining equation on the moneyness scale.
    pub residual: f64,
}

/// `sinh(b)/b - 1` without cancellation at small `b`.
fn sinhc_m1(b: f64) -> f64 {
    let b2 = b * b;
    if b.abs() < 1e-2 {
        b2 / 6.0 * (1.0 + b2 / 20.0 * (1.0 + b2 / 42.0 * (1.0 + b2 / 72.0)))
    } else {
        b.sinh() / b - 1.0
    }
}

/// `log(sinh(b)/b)` for `b ≥ 0`, finite for every finite `b`.
fn ln_sinhc(b: f64) -> f64 {
    if b > 20.0 {
        b - (2.0 * b).ln() + (-(-2.0 * b).exp()).ln_1p()
    } else {
        sinhc_m1(b).ln_1p()
    }
}

/// `sin(z)/z - 1` without cancellation at small `z`.
fn sinc_m1(z: f64) -> f64 {
    let z2 = z * z;
    if z.abs() < 1e-2 {
        -z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0 * (1.0 - z2 / 72.0)))
    } else {
        z.sin() / z - 1.0
    }
}

/// Unique `β ≥ 0` with `sinh(β)/β = m`.
pub fn solve_beta(m: f64, cfg: &RootConfig) -> Result<f64> {
    if !(m >= 1.0) || !m.is_finite() {
        return Err(Error::domain("moneyness for the beta branch", m));
    }
    if m == 1.0 {
        return Ok(0.0);
    }
    let x = m.ln();
    let g = |b: f64| ln_sinhc(b) - x;
    let lo = 1e-12;
    // sinh(b)/b ≥ e^b/(2b) gives b = x + log(2b) ≤ 2x + 2 as an upper bound for large x.
    let mut hi = (6.0 * x).sqrt().max(2.0 * x + 2.0);
    while g(hi) < 0.0 {
        hi *= cfg.expand_factor;
    }
    find_root(g, lo, hi, cfg)
}

/// Unique `ξ ∈ [0, π/2)` with `sin(2ξ)/(2ξ) = m`.
pub fn solve_xi(m: f64, cfg: &RootConfig) -> Result<f64> {
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::domain("moneyness for the xi branch", m));
    }
    if m == 1.0 {
        return Ok(0.0);
    }
    let k = m - 1.0;
    find_root(|xi| sinc_m1(2.0 * xi) - k, 1e-12, FRAC_PI_2 - 1e-12, cfg)
}

fn j_beta(b: f64) -> f64 {
    0.5 * b * b - b * (0.5 * b).tanh()
}

fn j_xi(xi: f64) -> f64 {
    2.0 * xi * (xi.tan() - xi)
}

/// Black–Scholes rate function at moneyness `m = K/S0` (unit volatility).
pub fn j_bs(m: f64, cfg: &RootConfig) -> Result<BsRateResult> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::domain("moneyness", m));
    }
    if m == 1.0 {
        return Ok(BsRateResult {
            j: 0.0,
            branch: BsBranch::Atm,
            residual: 0.0,
        });
    }
    let x = m.ln();
    if x.abs() < SERIES_SWITCH {
        return Ok(BsRateResult {
            j: j_bs_series(x, 6)?,
            branch: BsBranch::Series,
            residual: 0.0,
        });
    }
    if m < TAIL_SWITCH {
        return Ok(BsRateResult {
            j: j_bs_tail_with(m, TailSide::Small, TailForm::Rederived)?.j,
            branch: BsBranch::Tail,
            residual: f64::NAN,
        });
    }
    if m > 1.0 {
        let b = solve_beta(m, cfg)?;
        Ok(BsRateResult {
            j: j_beta(b),
            branch: BsBranch::Beta(b),
            residual: (ln_sinhc(b) - x).abs() * m,
        })
    } else {
        let xi = solve_xi(m, cfg)?;
        Ok(BsRateResult {
            j: j_xi(xi),
            branch: BsBranch::Xi(xi),
            residual: (sinc_m1(2.0 * xi) - (m - 1.0)).abs(),
        })
    }
}

/// Shorthand for `j_bs(m, default).j`.
pub fn j_bs_value(m: f64) -> Result<f64> {
    Ok(j_bs(m, &RootConfig::default())?.j)
}

fn check_terms(terms: usize) -> Result<()> {
    if terms == 0 || terms > X_COEFFS.len() {
        return Err(Error::domain("series terms", terms as f64));
    }
    Ok(())
}

/// Truncated expansion of `J` in the log-strike `x`.
///
/// `terms` counts non-zero terms starting at `x²`, so `terms = 4` is the
/// polynomial through `x⁵`. Up to six terms are available.
pub fn j_bs_series(x: f64, terms: usize) -> Result<f64> {
    check_terms(terms)?;
    Ok(x * x * X_COEFFS[..terms].iter().rev().fold(0.0, |acc, c| acc * x + c))
}

/// Truncated expansion of `J` in `k = m - 1`, same term counting as [`j_bs_series`].
pub fn j_bs_series_k(k: f64, terms: usize) -> Result<f64> {
    check_terms(terms)?;
    Ok(k * k * K_COEFFS[..terms].iter().rev().fold(0.0, |acc, c| acc * k + c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    /// `m → ∞`.
    Large,
    /// `m → 0`.
    Small,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailForm {
    /// Large: `x²/2 + x L - x + 3L² - 2L`; small: `2e^{-x} - 2 - π²/2`, with `L = log(2x)`.
    Published,
    /// Large: `x²/2 + x L - x + L²/2 + L²/(2x)`; small: `2e^{-x} - π²/2`.
    ///
    /// Obtained by expanding `β = x + log(2β) + ...` and `ξ = π/2 - πm/2 + ...`
    /// directly; these track the exact solver far more closely than the
    /// published forms.
    Rederived,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailValue {
    pub j: f64,
    /// False when `|x| < 1`, where the expansion is not meaningful.
    pub reliable: bool,
}

/// Published wing asymptotics of `J`.
pub fn j_bs_tail(m: f64, side: TailSide) -> Result<TailValue> {
    j_bs_tail_with(m, side, TailForm::Published)
}

pub fn j_bs_tail_with(m: f64, side: TailSide, form: TailForm) -> Result<TailValue> {
    let x = m.ln();
    let j = match side {
        TailSide::Large => {
            if !(m > 1.0) || !m.is_finite() {
                return Err(Error::domain("moneyness for the large-strike tail", m));
            }
            let l = (2.0 * x).ln();
            let base = 0.5 * x * x + x * l - x;
            match form {
                TailForm::Published => base + 3.0 * l * l - 2.0 * l,
                TailForm::Rederived => base + 0.5 * l * l + l * l / (2.0 * x),
            }
        }
        TailSide::Small => {
            if !(m > 0.0 && m < 1.0) {
                return Err(Error::domain("moneyness for the small-strike tail", m));
            }
            let base = 2.0 / m - 0.5 * PI * PI;
            match form {
                TailForm::Published => base - 2.0,
                TailForm::Rederived => base,
            }
        }
    };
    Ok(TailValue {
        j,
        reliable: x.abs() >= 1.0,
    })
}

/// Optimal log-price path `f(t)` on `[0, 1]` for moneyness `m`.
///
/// `m > 1`: `f = βt - 2 log((e^{βt} + e^β)/(1 + e^β))`;
/// `m < 1`: `f = log(cos²ξ / cos²(ξ(t - 1)))`.
pub fn optimal_path_bs(m: f64, grid: &[f64]) -> Result<Vec<f64>> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::domain("moneyness", m));
    }
    if let Some(&t) = grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::domain("path time", t));
    }
    let cfg = RootConfig::default();
    if m == 1.0 {
        return Ok(vec![0.0; grid.len()]);
    }
    if m > 1.0 {
        let b = solve_beta(m, &cfg)?;
        let tail = 2.0 * (-b).exp().ln_1p();
        Ok(grid
            .iter()
            .map(|&t| b * t - 2.0 * (b * (t - 1.0)).exp().ln_1p() + tail)
            .collect())
    } else {
        let xi = solve_xi(m, &cfg)?;
        let c1 = xi.cos().ln();
        Ok(grid.iter().map(|&t| 2.0 * (c1 - (xi * (t - 1.0)).cos().ln())).collect())
    }
}

/// Derivative of [`optimal_path_bs`] in `t`.
pub fn optimal_path_bs_slope(m: f64, grid: &[f64]) -> Result<Vec<f64>> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::domain("moneyness", m));
    }
    let cfg = RootConfig::default();
    if m == 1.0 {
        return Ok(vec![0.0; grid.len()]);
    }
    if m > 1.0 {
        let b = solve_beta(m, &cfg)?;
        Ok(grid.iter().map(|&t| b * (0.5 * b * (1.0 - t)).tanh()).collect())
    } else {
        let xi = solve_xi(m, &cfg)?;
        Ok(grid.iter().map(|&t| 2.0 * xi * (xi * (t - 1.0)).tan()).collect())
    }
}
