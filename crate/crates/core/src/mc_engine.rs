//! Monte Carlo pricing of Asian options under the local volatility SDE.
//!
//! `log S` is stepped with the log-Euler scheme and the average is the
//! trapezoidal rule on the time grid. Paths are generated in fixed-size
//! chunks, each with its own ChaCha8 stream, and chunk statistics are merged
//! in chunk order. Estimates therefore do not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::core_model::{classify_moneyness, LocalVolFn, MarketParams, MoneynessTag, OptionSpec, Side, Strike};
use crate::equiv_vol::vol_limits;
use crate::error::{Error, Result};
use crate::par::{par_map_range, Execution};
use crate::rate_lv::LvConfig;

/// Samples per chunk (pairs when antithetic).
pub const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    LogEuler,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub paths: usize,
    pub steps: usize,
    pub seed: u64,
    pub scheme: Scheme,
    /// Pair each draw with its negation; `paths` counts both members.
    pub antithetic: bool,
    pub execution: Execution,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            paths: 100_000,
            steps: 200,
            seed: 42,
            scheme: Scheme::LogEuler,
            antithetic: false,
            execution: Execution::Parallel,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.paths < 100 {
            return Err(Error::InvalidConfig(format!("at least 100 paths are required, got {}", self.paths)));
        }
        if self.steps < 2 {
            return Err(Error::InvalidConfig(format!("at least 2 time steps are required, got {}", self.steps)));
        }
        if self.antithetic && self.paths % 2 != 0 {
            return Err(Error::InvalidConfig("antithetic sampling needs an even path count".into()));
        }
        Ok(())
    }

    fn samples(&self) -> usize {
        if self.antithetic {
            self.paths / 2
        } else {
            self.paths
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub price: f64,
    pub stderr: f64,
    pub paths: usize,
    pub steps: usize,
    pub seed: u64,
    /// No simulated path finished in the money.
    pub all_payoffs_zero: bool,
}

/// Running mean and centred sum of squares (Welford), mergeable in order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
    nonzero: bool,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
        self.nonzero |= x != 0.0;
    }

    fn merge(self, o: Moments) -> Moments {
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
            nonzero: self.nonzero || o.nonzero,
        }
    }
}

/// What a simulated path pays, before discounting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Payoff {
    Asian { strike: Strike, side: Side },
    /// `S_T e^{-(r-q)T}`, so that its discounted mean is `S0` exactly.
    Terminal,
}

impl Payoff {
    #[inline]
    fn value(&self, average: f64, terminal: f64) -> f64 {
        match *self {
            Payoff::Asian { strike, side } => {
                let (long, short) = match strike {
                    Strike::Fixed(k) => (average, k),
                    Strike::Floating(kappa) => (kappa * terminal, average),
                };
                match side {
                    Side::Call => (long - short).max(0.0),
                    Side::Put => (short - long).max(0.0),
                }
            }
            Payoff::Terminal => terminal,
        }
    }
}

/// `(trapezoidal average, terminal)` of one path driven by `z` (or `-z`).
#[inline]
fn path(model: &LocalVolFn, market: &MarketParams, dt: f64, z: &[f64], sign: f64) -> (f64, f64) {
    let drift = market.r - market.q;
    let sq = dt.sqrt();
    let mut x = market.s0.ln();
    let mut s = market.s0;
    let mut sum = 0.5 * s;
    for &zi in z {
        let sig = model.sigma(s);
        x += (drift - 0.5 * sig * sig) * dt + sig * sq * sign * zi;
        s = x.exp();
        sum += s;
    }
    let n = z.len() as f64;
    ((sum - 0.5 * s) / n, s)
}

/// Discounted Monte Carlo estimates for several payoffs on one set of paths.
pub fn simulate_payoffs(
    model: &LocalVolFn,
    market: &MarketParams,
    maturity: f64,
    payoffs: &[Payoff],
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    cfg.validate()?;
    if !(maturity > 0.0) || !maturity.is_finite() {
        return Err(Error::domain("maturity", maturity));
    }
    let samples = cfg.samples();
    let chunks = samples.div_ceil(CHUNK);
    let dt = maturity / cfg.steps as f64;
    let np = payoffs.len();

    let per_chunk = par_map_range(chunks, cfg.execution, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(c as u64);
        let count = CHUNK.min(samples - c * CHUNK);
        let mut z = vec![0.0; cfg.steps];
        let mut acc = vec![Moments::default(); np];
        for _ in 0..count {
            for zi in z.iter_mut() {
                *zi = rng.sample(StandardNormal);
            }
            let (a, t) = path(model, market, dt, &z, 1.0);
            if cfg.antithetic {
                let (a2, t2) = path(model, market, dt, &z, -1.0);
                for (m, p) in acc.iter_mut().zip(payoffs) {
                    m.push(0.5 * (p.value(a, t) + p.value(a2, t2)));
                }
            } else {
                for (m, p) in acc.iter_mut().zip(payoffs) {
                    m.push(p.value(a, t));
                }
            }
        }
        acc
    });

    let total = per_chunk
        .into_iter()
        .fold(vec![Moments::default(); np], |acc, c| acc.into_iter().zip(c).map(|(a, b)| a.merge(b)).collect());

    let disc = (-market.r * maturity).exp();
    Ok(total
        .into_iter()
        .zip(payoffs)
        .map(|(m, p)| {
            let scale = match p {
                Payoff::Terminal => (-(market.r - market.q) * maturity).exp(),
                Payoff::Asian { .. } => disc,
            };
            McEstimate {
                price: scale * m.mean,
                stderr: scale * (m.m2 / (m.n - 1.0)).sqrt() / m.n.sqrt(),
                paths: cfg.paths,
                steps: cfg.steps,
                seed: cfg.seed,
                all_payoffs_zero: !m.nonzero,
            }
        })
        .collect())
}

/// Discounted price of one Asian option, fixed or floating.
pub fn simulate_asian(model: &LocalVolFn, market: &MarketParams, option: &OptionSpec, cfg: &McConfig) -> Result<McEstimate> {
    let payoff = Payoff::Asian {
        strike: option.strike,
        side: option.side,
    };
    Ok(simulate_payoffs(model, market, option.maturity, &[payoff], cfg)?[0])
}

/// Several options of one maturity priced on shared paths, in input order.
pub fn simulate_asian_batch(model: &LocalVolFn, market: &MarketParams, options: &[OptionSpec], cfg: &McConfig) -> Result<Vec<McEstimate>> {
    let Some(first) = options.first() else {
        return Ok(Vec::new());
    };
    if options.iter().any(|o| o.maturity != first.maturity) {
        return Err(Error::InvalidConfig("batched options must share one maturity".into()));
    }
    let payoffs: Vec<Payoff> = options
        .iter()
        .map(|o| Payoff::Asian {
            strike: o.strike,
            side: o.side,
        })
        .collect();
    simulate_payoffs(model, market, first.maturity, &payoffs, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub maturity: f64,
    pub price: f64,
    pub stderr: f64,
    /// `T log C_MC`; `-inf` when every payoff was zero.
    pub t_log_price: f64,
    /// `-I(K, S0)`, the limit of `T log C` as `T → 0`.
    pub minus_rate: f64,
    pub all_payoffs_zero: bool,
}

/// `T log C_MC` beside `-I` over a list of maturities (fixed strike, out of the money).
pub fn convergence_sweep(
    model: &LocalVolFn,
    market: &MarketParams,
    strike: f64,
    side: Side,
    maturities: &[f64],
    cfg: &McConfig,
    lv: &LvConfig,
) -> Result<Vec<SweepRow>> {
    let probe = OptionSpec::fixed(strike, 1.0, side)?;
    if classify_moneyness(market, &probe).tag != MoneynessTag::Otm {
        return Err(Error::domain("strike (sweep needs out-of-the-money)", strike));
    }
    let i = vol_limits(model, market.s0, strike, lv)?.i;
    maturities
        .iter()
        .map(|&t| {
            let est = simulate_asian(model, market, &OptionSpec::fixed(strike, t, side)?, cfg)?;
            Ok(SweepRow {
                maturity: t,
                price: est.price,
                stderr: est.stderr,
                t_log_price: t * est.price.ln(),
                minus_rate: -i,
                all_payoffs_zero: est.all_payoffs_zero,
            })
        })
        .collect()
}
