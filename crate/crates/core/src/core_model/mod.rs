//! Model, market and contract types shared by every pricing routine.

mod config;
mod interp;

pub use config::{MarketConfig, ModelConfig, ModelFile};
pub use interp::MonotoneCubic;

use crate::error::{Error, Result};

/// Default lower clip for every local volatility function.
pub const DEFAULT_SIGMA_LO: f64 = 1e-4;
/// Default upper clip for every local volatility function.
pub const DEFAULT_SIGMA_HI: f64 = 10.0;
/// Half-width of the at-the-money band in log-strike.
pub const ATM_BAND: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum VolKind {
    Constant { sigma: f64 },
    /// `sigma0 * (S / s_ref)^exponent`.
    Cev {
        sigma0: f64,
        exponent: f64,
        s_ref: f64,
    },
    Tabulated(MonotoneCubic),
}

/// Bounded local volatility function `sigma(S)`.
///
/// Every kind is hard-clipped into `[sigma_lo, sigma_hi]`, so the bounds hold
/// by construction for all `S > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalVolFn {
    kind: VolKind,
    sigma_lo: f64,
    sigma_hi: f64,
}

impl LocalVolFn {
    pub fn constant(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidModel(format!("constant volatility {sigma} must be finite and >= 0")));
        }
        Ok(Self {
            kind: VolKind::Constant { sigma },
            sigma_lo: DEFAULT_SIGMA_LO,
            sigma_hi: DEFAULT_SIGMA_HI,
        })
    }

    pub fn cev(sigma0: f64, exponent: f64, s_ref: f64) -> Result<Self> {
        if !(sigma0.is_finite() && sigma0 > 0.0) {
            return Err(Error::InvalidModel(format!("CEV level {sigma0} must be positive")));
        }
        if !exponent.is_finite() {
            return Err(Error::InvalidModel("CEV exponent must be finite".into()));
        }
        if !(s_ref.is_finite() && s_ref > 0.0) {
            return Err(Error::InvalidModel(format!("CEV reference spot {s_ref} must be positive")));
        }
        Ok(Self {
            kind: VolKind::Cev {
                sigma0,
                exponent,
                s_ref,
            },
            sigma_lo: DEFAULT_SIGMA_LO,
            sigma_hi: DEFAULT_SIGMA_HI,
        })
    }

    /// Monotone-cubic interpolation through `(spots[i], vols[i])`, flat outside.
    pub fn tabulated(spots: Vec<f64>, vols: Vec<f64>) -> Result<Self> {
        if spots.iter().any(|&s| s <= 0.0) {
            return Err(Error::InvalidModel("tabulated spots must be positive".into()));
        }
        if vols.iter().any(|&v| v <= 0.0) {
            return Err(Error::InvalidModel("tabulated volatilities must be positive".into()));
        }
        Ok(Self {
            kind: VolKind::Tabulated(MonotoneCubic::new(spots, vols)?),
            sigma_lo: DEFAULT_SIGMA_LO,
            sigma_hi: DEFAULT_SIGMA_HI,
        })
    }

    pub fn with_bounds(mut self, sigma_lo: f64, sigma_hi: f64) -> Result<Self> {
        if !(sigma_lo > 0.0 && sigma_lo <= sigma_hi && sigma_hi.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "volatility bounds must satisfy 0 < lo <= hi < inf, got [{sigma_lo}, {sigma_hi}]"
            )));
        }
        self.sigma_lo = sigma_lo;
        self.sigma_hi = sigma_hi;
        Ok(self)
    }

    pub fn kind(&self) -> &VolKind {
        &self.kind
    }

    pub fn sigma_lo(&self) -> f64 {
        self.sigma_lo
    }

    pub fn sigma_hi(&self) -> f64 {
        self.sigma_hi
    }

    /// The clipped level if the model is a constant volatility.
    pub fn constant_level(&self) -> Option<f64> {
        match self.kind {
            VolKind::Constant { sigma } => Some(self.clip(sigma)),
            _ => None,
        }
    }

    #[inline]
    fn clip(&self, v: f64) -> f64 {
        v.clamp(self.sigma_lo, self.sigma_hi)
    }

    fn raw(&self, s: f64) -> (f64, f64, f64) {
        match &self.kind {
            VolKind::Constant { sigma } => (*sigma, 0.0, 0.0),
            VolKind::Cev {
                sigma0,
                exponent,
                s_ref,
            } => {
                let v = sigma0 * (s / s_ref).powf(*exponent);
                (v, exponent * v / s, exponent * (exponent - 1.0) * v / (s * s))
            }
            VolKind::Tabulated(c) => c.eval(s),
        }
    }

    #[inline]
    pub fn sigma(&self, s: f64) -> f64 {
        self.clip(self.raw(s).0)
    }

    /// `(sigma, sigma', sigma'')` at `s`.
    ///
    /// Derivatives vanish where the clip is active. Evaluating exactly on a
    /// clip boundary with a non-zero slope is a kink and is reported as
    /// [`Error::NonDifferentiable`]. Tabulated models return the derivatives
    /// of the interpolant (one-sided at knots).
    pub fn derivatives(&self, s: f64) -> Result<(f64, f64, f64)> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::domain("spot", s));
        }
        let (v, d1, d2) = self.raw(s);
        if v < self.sigma_lo || v > self.sigma_hi {
            return Ok((self.clip(v), 0.0, 0.0));
        }
        if (v == self.sigma_lo || v == self.sigma_hi) && d1 != 0.0 {
            return Err(Error::NonDifferentiable { spot: s });
        }
        Ok((v, d1, d2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub s0: f64,
    pub r: f64,
    pub q: f64,
}

impl MarketParams {
    pub fn new(s0: f64, r: f64, q: f64) -> Result<Self> {
        if !(s0.is_finite() && s0 > 0.0) {
            return Err(Error::domain("s0", s0));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::domain("r", r));
        }
        if !(q.is_finite() && q >= 0.0) {
            return Err(Error::domain("q", q));
        }
        Ok(Self { s0, r, q })
    }

    /// Zero rates.
    pub fn spot(s0: f64) -> Result<Self> {
        Self::new(s0, 0.0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strike {
    /// Payoff on `(A - K)`.
    Fixed(f64),
    /// Payoff on `(kappa * S_T - A)`.
    Floating(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionSpec {
    pub strike: Strike,
    pub maturity: f64,
    pub side: Side,
}

impl OptionSpec {
    pub fn new(strike: Strike, maturity: f64, side: Side) -> Result<Self> {
        let level = match strike {
            Strike::Fixed(k) | Strike::Floating(k) => k,
        };
        if !(level.is_finite() && level > 0.0) {
            return Err(Error::domain("strike", level));
        }
        if !(maturity.is_finite() && maturity > 0.0) {
            return Err(Error::domain("maturity", maturity));
        }
        Ok(Self {
            strike,
            maturity,
            side,
        })
    }

    pub fn fixed(strike: f64, maturity: f64, side: Side) -> Result<Self> {
        Self::new(Strike::Fixed(strike), maturity, side)
    }

    pub fn floating(kappa: f64, maturity: f64, side: Side) -> Result<Self> {
        Self::new(Strike::Floating(kappa), maturity, side)
    }

    pub fn fixed_strike(&self) -> Option<f64> {
        match self.strike {
            Strike::Fixed(k) => Some(k),
            Strike::Floating(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoneynessTag {
    Otm,
    Atm,
    Itm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moneyness {
    pub tag: MoneynessTag,
    /// `log(K/S0)`, or `log(kappa)` for floating strikes.
    pub log_strike: f64,
    /// `K/S0 - 1`, or `kappa - 1`.
    pub k: f64,
}

/// Risk-neutral expectation of the running average, `A(T)`.
pub fn forward_average(market: &MarketParams, maturity: f64) -> f64 {
    let z = (market.r - market.q) * maturity;
    if z.abs() < 1e-8 {
        market.s0 * (1.0 + z / 2.0 + z * z / 6.0)
    } else {
        market.s0 * z.exp_m1() / z
    }
}

/// OTM/ATM/ITM classification in the short-maturity sense (against `S0`, not `A(T)`).
///
/// Floating strikes classify on `kappa` against 1; note that a floating call is
/// out of the money for `kappa < 1`.
pub fn classify_moneyness(market: &MarketParams, option: &OptionSpec) -> Moneyness {
    let (ratio, otm_above) = match option.strike {
        Strike::Fixed(k) => (k / market.s0, option.side == Side::Call),
        Strike::Floating(kappa) => (kappa, option.side == Side::Put),
    };
    let log_strike = ratio.ln();
    let tag = if log_strike.abs() <= ATM_BAND {
        MoneynessTag::Atm
    } else if (log_strike > 0.0) == otm_above {
        MoneynessTag::Otm
    } else {
        MoneynessTag::Itm
    };
    Moneyness {
        tag,
        log_strike,
        k: ratio - 1.0,
    }
}

/// `C - P` from put-call parity.
///
/// Fixed strike: `e^{-rT}(A(T) - K)`. Floating strike:
/// `e^{-rT}(kappa S0 e^{(r-q)T} - A(T))`.
pub fn put_call_parity_gap(market: &MarketParams, option: &OptionSpec) -> f64 {
    let t = option.maturity;
    let a = forward_average(market, t);
    let disc = (-market.r * t).exp();
    match option.strike {
        Strike::Fixed(k) => disc * (a - k),
        Strike::Floating(kappa) => {
            disc * (kappa * market.s0 * ((market.r - market.q) * t).exp() - a)
        }
    }
}
