//! Short-maturity limits of the equivalent log-normal and normal volatilities
//! and of the Asian implied volatility, with their expansions around the money.

use crate::error::{Error, Result};
use crate::core_model::{LocalVolFn, ATM_BAND};
use crate::rate_bs::{j_bs_value, SERIES_SWITCH};
use crate::rate_lv::{rate_exact, rate_series, LvConfig, RateMethod};

const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolLimits {
    /// Equivalent Black–Scholes volatility on the forward average.
    pub sigma_ln: f64,
    /// Equivalent Bachelier volatility, in price units per `sqrt(year)`.
    pub sigma_n: f64,
    /// Constant volatility whose Black–Scholes Asian rate matches `i`.
    pub sigma_implied: f64,
    /// Rate function value behind the limits (zero at the money).
    pub i: f64,
    /// `None` at the money, otherwise how `i` was obtained.
    pub method: Option<RateMethod>,
}

/// `I(K, S0)`, from the closed form for constant volatility and the exact
/// solver otherwise.
pub fn fixed_rate(model: &LocalVolFn, s0: f64, strike: f64, cfg: &LvConfig) -> Result<(f64, RateMethod)> {
    match model.constant_level() {
        Some(sigma) => Ok((j_bs_value(strike / s0)? / (sigma * sigma), RateMethod::Exact)),
        None => Ok((rate_exact(model, s0, strike, cfg)?.i, RateMethod::Exact)),
    }
}

/// Short-maturity volatility limits at strike `K`.
///
/// Away from the money: `Σ_LN² = x²/(2I)`, `Σ_N² = S0² k²/(2I)` and
/// `σ_imp² = J(K/S0)/I`. Inside the ATM band the limits are `σ(S0)/√3`,
/// `S0 σ(S0)/√3` and `σ(S0)`. For `|x| < 1e-4` the rate comes from its
/// series (when `σ` is differentiable at `S0`) so the ratios stay accurate.
pub fn vol_limits(model: &LocalVolFn, s0: f64, strike: f64, cfg: &LvConfig) -> Result<VolLimits> {
    if !(s0 > 0.0) || !s0.is_finite() {
        return Err(Error::domain("s0", s0));
    }
    if !(strike > 0.0) || !strike.is_finite() {
        return Err(Error::domain("strike", strike));
    }
    let m = strike / s0;
    let x = m.ln();
    if x.abs() <= ATM_BAND {
        let sig = model.sigma(s0);
        return Ok(VolLimits {
            sigma_ln: sig * INV_SQRT3,
            sigma_n: s0 * sig * INV_SQRT3,
            sigma_implied: sig,
            i: 0.0,
            method: None,
        });
    }
    let series = if x.abs() < SERIES_SWITCH {
        rate_series(model, s0, x, 4).ok()
    } else {
        None
    };
    let (i, method) = match series {
        Some(i) => (i, RateMethod::Series),
        None => fixed_rate(model, s0, strike, cfg)?,
    };
    if !(i > 0.0) {
        return Err(Error::domain("rate function", i));
    }
    let k = strike / s0 - 1.0;
    Ok(VolLimits {
        sigma_ln: x.abs() / (2.0 * i).sqrt(),
        sigma_n: s0 * k.abs() / (2.0 * i).sqrt(),
        sigma_implied: (j_bs_value(m)? / i).sqrt(),
        i,
        method: Some(method),
    })
}

fn truncated(coeffs: &[f64], z: f64, order: usize) -> f64 {
    coeffs[..=order].iter().rev().fold(0.0, |acc, c| acc * z + c)
}

const LN_BS: [f64; 4] = [1.0, 1.0 / 10.0, -23.0 / 2100.0, 1.0 / 3500.0];
const N_BS: [f64; 4] = [1.0, 3.0 / 5.0, -33.0 / 350.0, 83.0 / 1750.0];

fn check_order(order: usize, max: usize) -> Result<()> {
    if order > max {
        return Err(Error::domain("expansion order", order as f64));
    }
    Ok(())
}

/// `σ/√3 (1 + x/10 - 23x²/2100 + x³/3500)` truncated after `x^order`.
pub fn vol_ln_series_bs(sigma: f64, x: f64, order: usize) -> Result<f64> {
    check_order(order, 3)?;
    Ok(sigma * INV_SQRT3 * truncated(&LN_BS, x, order))
}

/// `σ S0/√3 (1 + 3k/5 - 33k²/350 + 83k³/1750)` truncated after `k^order`.
pub fn vol_n_series_bs(sigma: f64, s0: f64, k: f64, order: usize) -> Result<f64> {
    check_order(order, 3)?;
    Ok(sigma * s0 * INV_SQRT3 * truncated(&N_BS, k, order))
}

/// Level, skew and curvature of an expansion `level (1 + a1 z + a2 z²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmileExpansion {
    pub level: f64,
    /// Relative slope `a1`.
    pub a1: f64,
    /// Relative curvature `a2`.
    pub a2: f64,
}

impl SmileExpansion {
    pub fn eval(&self, z: f64, order: usize) -> Result<f64> {
        check_order(order, 2)?;
        Ok(self.level * truncated(&[1.0, self.a1, self.a2], z, order))
    }

    /// Absolute slope `level · a1`.
    pub fn skew(&self) -> f64 {
        self.level * self.a1
    }
}

/// Expansion of `Σ_LN` in `x = log(K/S0)` for a local volatility.
///
/// With `s = S0 σ'/σ` and `c = S0² σ''/σ` at `S0`:
/// `a1 = 1/10 + 3s/5`, `a2 = -23/2100 + 57s/175 - 33s²/350 + 9c/35`.
pub fn ln_expansion_lv(model: &LocalVolFn, s0: f64) -> Result<SmileExpansion> {
    let (sig, d1, d2) = model.derivatives(s0)?;
    let s = s0 * d1 / sig;
    let c = s0 * s0 * d2 / sig;
    Ok(SmileExpansion {
        level: sig * INV_SQRT3,
        a1: 0.1 + 0.6 * s,
        a2: -23.0 / 2100.0 + 57.0 / 175.0 * s - 33.0 / 350.0 * s * s + 9.0 / 35.0 * c,
    })
}

/// Expansion of `Σ_N` in `k = K/S0 - 1` for a local volatility.
///
/// `a1 = 3/5 + 3s/5`, `a2 = -33/350 + 57s/175 - 33s²/350 + 9c/35`.
pub fn n_expansion_lv(model: &LocalVolFn, s0: f64) -> Result<SmileExpansion> {
    let (sig, d1, d2) = model.derivatives(s0)?;
    let s = s0 * d1 / sig;
    let c = s0 * s0 * d2 / sig;
    Ok(SmileExpansion {
        level: s0 * sig * INV_SQRT3,
        a1: 0.6 + 0.6 * s,
        a2: -33.0 / 350.0 + 57.0 / 175.0 * s - 33.0 / 350.0 * s * s + 9.0 / 35.0 * c,
    })
}

pub fn vol_ln_series_lv(model: &LocalVolFn, s0: f64, x: f64, order: usize) -> Result<f64> {
    ln_expansion_lv(model, s0)?.eval(x, order)
}

pub fn vol_n_series_lv(model: &LocalVolFn, s0: f64, k: f64, order: usize) -> Result<f64> {
    n_expansion_lv(model, s0)?.eval(k, order)
}

/// Short-maturity European implied volatility at the money: level `σ(S0)`
/// and slope `S0 σ'(S0)/2` in the log-strike.
pub fn european_atm(model: &LocalVolFn, s0: f64) -> Result<(f64, f64)> {
    let (sig, d1, _) = model.derivatives(s0)?;
    Ok((sig, 0.5 * s0 * d1))
}

/// Asian ATM level and slope implied by the European ones:
/// `level/√3` and `(level/10 + 6 skew/5)/√3`.
pub fn asian_atm_from_european(level: f64, skew: f64) -> (f64, f64) {
    (level * INV_SQRT3, (0.1 * level + 1.2 * skew) * INV_SQRT3)
}
