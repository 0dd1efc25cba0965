//! Reference scenarios with stored comparison values.
//!
//! The numbers live in `data/*.csv` beside their citations and are compiled in,
//! so benchmark output never depends on the working directory.

use crate::core_model::{MarketParams, Side};
use crate::error::{Error, Result};

const TABLE1: &str = include_str!("../data/table1_reference.csv");
const TABLE2: &str = include_str!("../data/table2_reference.csv");

/// Maturities of the Black–Scholes strike ladder.
pub const LADDER_MATURITIES: [f64; 3] = [0.5, 1.0, 2.0];
pub const LADDER_S0: f64 = 100.0;
pub const LADDER_SIGMA: f64 = 0.3;

/// One quoted value: a Monte Carlo estimate with its standard deviation and
/// the published asymptotic price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderQuote {
    pub maturity: f64,
    pub mc: f64,
    pub mc_stdev: f64,
    pub asymptotic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderRow {
    pub side: Side,
    pub strike: f64,
    pub quotes: [LadderQuote; 3],
    /// Equivalent log-normal volatility as a fraction.
    pub sigma_ln: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FmwRow {
    pub r: f64,
    pub maturity: f64,
    pub s0: f64,
    pub strike: f64,
    pub sigma: f64,
    pub asymptotic: f64,
    pub fpp3: f64,
    pub levy: f64,
    pub linetsky: f64,
}

impl FmwRow {
    pub fn market(&self) -> Result<MarketParams> {
        MarketParams::new(self.s0, self.r, 0.0)
    }
}

fn records(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::trim).collect())
}

fn num(field: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad number {field:?} in reference data")))
}

/// Strike ladder for `S0 = 100`, `σ = 0.3`, `r = q = 0`: calls then puts.
pub fn strike_ladder() -> Result<Vec<LadderRow>> {
    records(TABLE1)
        .map(|f| {
            if f.len() != 12 {
                return Err(Error::InvalidConfig(format!("ladder row has {} fields", f.len())));
            }
            let side = match f[0] {
                "call" => Side::Call,
                "put" => Side::Put,
                other => return Err(Error::InvalidConfig(format!("unknown side {other:?}"))),
            };
            let mut quotes = [LadderQuote {
                maturity: 0.0,
                mc: 0.0,
                mc_stdev: 0.0,
                asymptotic: 0.0,
            }; 3];
            for (j, q) in quotes.iter_mut().enumerate() {
                *q = LadderQuote {
                    maturity: LADDER_MATURITIES[j],
                    mc: num(f[2 + 3 * j])?,
                    mc_stdev: num(f[3 + 3 * j])?,
                    asymptotic: num(f[4 + 3 * j])?,
                };
            }
            Ok(LadderRow {
                side,
                strike: num(f[1])?,
                quotes,
                sigma_ln: num(f[11])? / 100.0,
            })
        })
        .collect()
}

/// The seven benchmark calls with their stored comparison prices.
pub fn fmw_scenarios() -> Result<Vec<FmwRow>> {
    records(TABLE2)
        .map(|f| {
            if f.len() != 9 {
                return Err(Error::InvalidConfig(format!("benchmark row has {} fields", f.len())));
            }
            let v: Vec<f64> = f.iter().map(|s| num(s)).collect::<Result<_>>()?;
            Ok(FmwRow {
                r: v[0],
                maturity: v[1],
                s0: v[2],
                strike: v[3],
                sigma: v[4],
                asymptotic: v[5],
                fpp3: v[6],
                levy: v[7],
                linetsky: v[8],
            })
        })
        .collect()
}
