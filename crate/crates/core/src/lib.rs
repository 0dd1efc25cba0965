//! Short-maturity asymptotics for fixed- and floating-strike Asian options under
//! local volatility, with a Monte Carlo engine for cross-checks.

pub mod benchmarks;
pub mod core_model;
pub mod equiv_vol;
pub mod error;
pub mod floating;
pub mod mc_engine;
pub mod numerics;
pub mod par;
pub mod pricer;
pub mod rate_bs;
pub mod rate_lv;

pub use core_model::{LocalVolFn, MarketParams, OptionSpec, Side, Strike};
pub use error::{Error, Result};
pub use par::Execution;
