//! Asymptotic Asian option prices.
//!
//! The main recipe feeds the short-maturity equivalent log-normal volatility
//! into the Black–Scholes formula written on the forward average `A(T)`.

use std::f64::consts::{PI, SQRT_2};

use crate::equiv_vol::vol_limits;
use crate::error::{Error, Result};
use crate::floating::{atm_floating_price, rate_floating, FloatingConfig, FloatingMethod};
use crate::core_model::{classify_moneyness, forward_average, LocalVolFn, MarketParams, MoneynessTag, OptionSpec, Side, Strike};
use crate::par::{par_map, Execution};
use crate::rate_lv::LvConfig;

/// Standard normal distribution function, `erfc(-x/√2)/2`.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriceMethod {
    EquivLn,
    AtmSqrtT,
    ItmExpansion,
    LdpExponent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceResult {
    pub price: f64,
    pub method: PriceMethod,
    pub sigma_ln: Option<f64>,
    /// Forward (average) fed to the Black–Scholes formula.
    pub forward: f64,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    /// Rate function behind the price, where one is used.
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PricerConfig {
    pub lv: LvConfig,
    pub floating: FloatingConfig,
}

/// Black–Scholes price on forward `f` with volatility `sigma`, discount
/// factor `disc` and strike `k`. Returns `(price, d1, d2)`.
pub fn black(forward: f64, strike: f64, sigma: f64, t: f64, disc: f64, side: Side) -> (f64, f64, f64) {
    let v = sigma * t.sqrt();
    let d1 = ((forward / strike).ln() + 0.5 * v * v) / v;
    let d2 = d1 - v;
    let price = match side {
        Side::Call => disc * (forward * norm_cdf(d1) - strike * norm_cdf(d2)),
        Side::Put => disc * (strike * norm_cdf(-d2) - forward * norm_cdf(-d1)),
    };
    (price, d1, d2)
}

fn fixed_strike(option: &OptionSpec) -> Result<f64> {
    option
        .fixed_strike()
        .ok_or(Error::InvalidConfig("a fixed-strike option is required".into()))
}

/// Price with `Σ_LN` taken at moneyness `K/S0`; `r` and `q` enter only through
/// `A(T)` and the discount factor.
///
/// Inside the ATM band `Σ_LN = σ(S0)/√3` is still used in the Black–Scholes
/// formula; the bare square-root-of-maturity value is [`price_atm`].
pub fn price_asymptotic(model: &LocalVolFn, market: &MarketParams, option: &OptionSpec, cfg: &PricerConfig) -> Result<PriceResult> {
    let k = fixed_strike(option)?;
    let t = option.maturity;
    let limits = vol_limits(model, market.s0, k, &cfg.lv)?;
    let forward = forward_average(market, t);
    let (price, d1, d2) = black(forward, k, limits.sigma_ln, t, (-market.r * t).exp(), option.side);
    Ok(PriceResult {
        price,
        method: PriceMethod::EquivLn,
        sigma_ln: Some(limits.sigma_ln),
        forward,
        d1: Some(d1),
        d2: Some(d2),
        rate: Some(limits.i),
    })
}

/// [`price_asymptotic`] over many contracts, in input order.
pub fn price_grid(
    model: &LocalVolFn,
    market: &MarketParams,
    options: &[OptionSpec],
    cfg: &PricerConfig,
    exec: Execution,
) -> Vec<Result<PriceResult>> {
    par_map(options, exec, |o| price_asymptotic(model, market, o, cfg))
}

/// Leading-order at-the-money price `σ(S0) S0 sqrt(T/(6π))`, call and put alike.
pub fn price_atm(model: &LocalVolFn, market: &MarketParams, maturity: f64, _side: Side) -> Result<PriceResult> {
    if !(maturity > 0.0) || !maturity.is_finite() {
        return Err(Error::domain("maturity", maturity));
    }
    Ok(PriceResult {
        price: model.sigma(market.s0) * market.s0 * (maturity / (6.0 * PI)).sqrt(),
        method: PriceMethod::AtmSqrtT,
        sigma_ln: None,
        forward: forward_average(market, maturity),
        d1: None,
        d2: None,
        rate: None,
    })
}

/// In-the-money expansion to first order in `T`:
/// call `S0 - K - (r+q) S0 T/2 + K r T`, put `K - S0 + (r+q) S0 T/2 - K r T`.
pub fn price_itm_expansion(market: &MarketParams, option: &OptionSpec) -> Result<PriceResult> {
    let k = fixed_strike(option)?;
    if classify_moneyness(market, option).tag != MoneynessTag::Itm {
        return Err(Error::domain("strike (in-the-money expansion)", k));
    }
    let (s0, r, q, t) = (market.s0, market.r, market.q, option.maturity);
    let call = s0 - k - 0.5 * (r + q) * s0 * t + k * r * t;
    let price = match option.side {
        Side::Call => call,
        Side::Put => -call,
    };
    Ok(PriceResult {
        price,
        method: PriceMethod::ItmExpansion,
        sigma_ln: None,
        forward: forward_average(market, t),
        d1: None,
        d2: None,
        rate: None,
    })
}

/// Decay exponent `I/T` of an out-of-the-money price, `C ≈ e^{-I/T}` on log scale.
///
/// No prefactor is implied; only `T log C → -I` is asserted by the asymptotics.
/// Returns `(I/T, I)`.
pub fn price_ldp_exponent(model: &LocalVolFn, market: &MarketParams, option: &OptionSpec, cfg: &PricerConfig) -> Result<(f64, f64)> {
    let k = fixed_strike(option)?;
    if classify_moneyness(market, option).tag != MoneynessTag::Otm {
        return Err(Error::domain("strike (exponent needs out-of-the-money)", k));
    }
    let i = vol_limits(model, market.s0, k, &cfg.lv)?.i;
    Ok((i / option.maturity, i))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatingPriceResult {
    pub price: f64,
    pub method: PriceMethod,
    /// `I_f/T` for out-of-the-money contracts.
    pub exponent: Option<f64>,
    pub rate: Option<f64>,
    pub sigma: Option<f64>,
    pub rate_method: Option<FloatingMethod>,
}

/// Floating-strike asymptotics.
///
/// At the money the square-root formula; in the money the first-order parity
/// expansion; out of the money the exponent `I_f/T` and an equivalent-volatility
/// price. The latter uses `Σ = |log κ|/sqrt(2 I_f)` in a Black–Scholes formula
/// written in the share measure: forward `S0 (e^{(q-r)T} - 1)/((q-r)T)`,
/// strike `κ S0`, discount `e^{-qT}`, with call and put exchanged.
pub fn price_floating_asymptotic(
    model: &LocalVolFn,
    market: &MarketParams,
    kappa: f64,
    maturity: f64,
    side: Side,
    cfg: &PricerConfig,
) -> Result<FloatingPriceResult> {
    let option = OptionSpec::floating(kappa, maturity, side)?;
    let (s0, r, q, t) = (market.s0, market.r, market.q, maturity);
    match classify_moneyness(market, &option).tag {
        MoneynessTag::Atm => Ok(FloatingPriceResult {
            price: atm_floating_price(model, market, t)?,
            method: PriceMethod::AtmSqrtT,
            exponent: None,
            rate: None,
            sigma: None,
            rate_method: None,
        }),
        MoneynessTag::Itm => {
            let price = match side {
                Side::Put => (1.0 - kappa) * s0 - 0.5 * s0 * (r + q) * t + kappa * s0 * q * t,
                Side::Call => (kappa - 1.0) * s0 + 0.5 * s0 * (r + q) * t - kappa * s0 * q * t,
            };
            Ok(FloatingPriceResult {
                price,
                method: PriceMethod::ItmExpansion,
                exponent: None,
                rate: None,
                sigma: None,
                rate_method: None,
            })
        }
        MoneynessTag::Otm => {
            let rate = rate_floating(model, s0, kappa, &cfg.floating)?;
            let sigma = kappa.ln().abs() / (2.0 * rate.i_f).sqrt();
            let share_market = MarketParams { s0, r: q, q: r };
            let forward = forward_average(&share_market, t);
            let flipped = match side {
                Side::Call => Side::Put,
                Side::Put => Side::Call,
            };
            let (price, _, _) = black(forward, kappa * s0, sigma, t, (-q * t).exp(), flipped);
            Ok(FloatingPriceResult {
                price,
                method: PriceMethod::EquivLn,
                exponent: Some(rate.i_f / t),
                rate: Some(rate.i_f),
                sigma: Some(sigma),
                rate_method: Some(rate.method),
            })
        }
    }
}

/// Dispatch on the strike style: fixed strikes use [`price_asymptotic`],
/// floating strikes [`price_floating_asymptotic`].
pub fn price(model: &LocalVolFn, market: &MarketParams, option: &OptionSpec, cfg: &PricerConfig) -> Result<f64> {
    match option.strike {
        Strike::Fixed(_) => Ok(price_asymptotic(model, market, option, cfg)?.price),
        Strike::Floating(kappa) => Ok(price_floating_asymptotic(model, market, kappa, option.maturity, option.side, cfg)?.price),
    }
}

/// Volatility reproducing `price` in [`black`] on the forward average.
pub fn implied_sigma_ln(target: f64, market: &MarketParams, option: &OptionSpec) -> Result<f64> {
    let k = fixed_strike(option)?;
    let t = option.maturity;
    let forward = forward_average(market, t);
    let disc = (-market.r * t).exp();
    let intrinsic = match option.side {
        Side::Call => disc * (forward - k).max(0.0),
        Side::Put => disc * (k - forward).max(0.0),
    };
    let cap = match option.side {
        Side::Call => disc * forward,
        Side::Put => disc * k,
    };
    if !(target > intrinsic && target < cap) {
        return Err(Error::domain("price outside the no-arbitrage range", target));
    }
    let f = |s: f64| black(forward, k, s, t, disc, option.side).0 - target;
    let cfg = crate::numerics::RootConfig::default();
    let (lo, hi, flo, fhi) = crate::numerics::expand_bracket(f, 1e-8, 1.0, 30, &cfg)?;
    crate::numerics::find_root_with(f, lo, hi, flo, fhi, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_model::put_call_parity_gap;

    fn bs(sigma: f64) -> LocalVolFn {
        LocalVolFn::constant(sigma).unwrap()
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(norm_cdf(0.0), 0.5);
        assert!((norm_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((norm_cdf(-3.0) - 0.001_349_898_031_630_094_6).abs() < 1e-17);
        assert!((norm_cdf(-10.0) - 7.619_853_024_160_527e-24).abs() < 1e-36);
    }

    #[test]
    fn table_examples() {
        let cfg = PricerConfig::default();
        let m = MarketParams::spot(100.0).unwrap();
        let p = price_asymptotic(&bs(0.3), &m, &OptionSpec::fixed(70.0, 2.0, Side::Put).unwrap(), &cfg).unwrap();
        assert!((p.price - 0.5596).abs() < 1e-4);
        let m2 = MarketParams::new(2.0, 0.02, 0.0).unwrap();
        let p = price_asymptotic(&bs(0.1), &m2, &OptionSpec::fixed(2.0, 1.0, Side::Call).unwrap(), &cfg).unwrap();
        assert!((p.price - 0.055923).abs() < 1e-6);
    }

    #[test]
    fn atm_formula() {
        let m = MarketParams::spot(100.0).unwrap();
        let p = price_atm(&bs(0.3), &m, 0.5, Side::Call).unwrap();
        assert!((p.price - 4.8860).abs() < 5e-5);
        assert_eq!(p.price, price_atm(&bs(0.3), &m, 0.5, Side::Put).unwrap().price);
        let small = price_atm(&bs(0.3), &m, 1e-6, Side::Call).unwrap().price / 1e-3;
        assert!((small - 30.0 / (6.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn itm_expansion_examples() {
        let m = MarketParams::spot(100.0).unwrap();
        let o = OptionSpec::fixed(90.0, 0.5, Side::Call).unwrap();
        assert!((price_itm_expansion(&m, &o).unwrap().price - 10.0).abs() < 1e-12);
        let m = MarketParams::new(100.0, 0.05, 0.02).unwrap();
        assert!((price_itm_expansion(&m, &o).unwrap().price - 10.5).abs() < 1e-12);
        assert!(price_itm_expansion(&m, &OptionSpec::fixed(110.0, 0.5, Side::Call).unwrap()).is_err());
        // The call and put expansions are negatives of each other, so parity
        // holds at first order; the remainder is O(T²).
        let remainder = |t: f64| {
            let put = OptionSpec::fixed(110.0, t, Side::Put).unwrap();
            let gap = put_call_parity_gap(&m, &OptionSpec::fixed(110.0, t, Side::Call).unwrap());
            (-price_itm_expansion(&m, &put).unwrap().price - gap).abs()
        };
        let ratio = remainder(0.1) / remainder(0.05);
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn ldp_exponent_requires_otm() {
        let cfg = PricerConfig::default();
        let m = MarketParams::spot(100.0).unwrap();
        let (e, i) = price_ldp_exponent(&bs(0.3), &m, &OptionSpec::fixed(120.0, 0.5, Side::Call).unwrap(), &cfg).unwrap();
        assert!((e * 0.5 - i).abs() < 1e-15);
        assert!((i - crate::rate_bs::j_bs_value(1.2).unwrap() / 0.09).abs() < 1e-12);
        assert!(price_ldp_exponent(&bs(0.3), &m, &OptionSpec::fixed(100.0, 0.5, Side::Call).unwrap(), &cfg).is_err());
    }

    #[test]
    fn parity_and_bounds() {
        let cfg = PricerConfig::default();
        let m = MarketParams::new(100.0, 0.03, 0.01).unwrap();
        for k in [50.0, 80.0, 100.0, 130.0, 200.0] {
            for t in [0.25, 1.0, 2.0] {
                let c = price_asymptotic(&bs(0.3), &m, &OptionSpec::fixed(k, t, Side::Call).unwrap(), &cfg).unwrap();
                let p = price_asymptotic(&bs(0.3), &m, &OptionSpec::fixed(k, t, Side::Put).unwrap(), &cfg).unwrap();
                let gap = put_call_parity_gap(&m, &OptionSpec::fixed(k, t, Side::Call).unwrap());
                assert!((c.price - p.price - gap).abs() < 1e-12, "K={k} T={t}");
                let undiscounted = c.price * (m.r * t).exp();
                assert!(undiscounted >= (c.forward - k).max(0.0) - 1e-12 && undiscounted <= c.forward);
            }
        }
    }

    #[test]
    fn zero_strike_limit() {
        let cfg = PricerConfig::default();
        let m = MarketParams::new(100.0, 0.03, 0.01).unwrap();
        let c = price_asymptotic(&bs(0.3), &m, &OptionSpec::fixed(1e-6, 1.0, Side::Call).unwrap(), &cfg).unwrap();
        assert!((c.price - (-0.03f64).exp() * forward_average(&m, 1.0)).abs() < 1e-6);
    }

    #[test]
    fn floating_branches() {
        let cfg = PricerConfig::default();
        let m = MarketParams::spot(100.0).unwrap();
        let atm = price_floating_asymptotic(&bs(0.3), &m, 1.0, 0.5, Side::Call, &cfg).unwrap();
        assert!((atm.price - 4.8860).abs() < 5e-5);
        let itm = price_floating_asymptotic(&bs(0.3), &m, 0.9, 0.5, Side::Put, &cfg).unwrap();
        assert!((itm.price - 10.0).abs() < 1e-12);
        // Constant vol: the floating exponent at κ equals the fixed one at K/S0 = κ.
        let otm = price_floating_asymptotic(&bs(0.3), &m, 0.9, 0.5, Side::Call, &cfg).unwrap();
        let (fixed_exp, _) = price_ldp_exponent(&bs(0.3), &m, &OptionSpec::fixed(90.0, 0.5, Side::Put).unwrap(), &cfg).unwrap();
        assert!((otm.exponent.unwrap() - fixed_exp).abs() < 1e-12);
        assert!(otm.price > 0.0 && otm.price < 10.0);
    }

    #[test]
    fn implied_vol_round_trip() {
        let m = MarketParams::new(100.0, 0.02, 0.0).unwrap();
        let o = OptionSpec::fixed(105.0, 1.0, Side::Call).unwrap();
        let t = black(forward_average(&m, 1.0), 105.0, 0.21, 1.0, (-0.02f64).exp(), Side::Call).0;
        assert!((implied_sigma_ln(t, &m, &o).unwrap() - 0.21).abs() < 1e-10);
        assert!(implied_sigma_ln(-1.0, &m, &o).is_err());
    }
}
