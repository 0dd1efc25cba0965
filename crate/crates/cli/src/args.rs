use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "asian-lv", version, about = "Asian option rate functions, asymptotic prices and Monte Carlo under local volatility")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Asymptotic price of fixed- or floating-strike Asian options
    Price(PriceArgs),
    /// Rate function at given strikes, moneyness ratios or floating strikes
    Rate(RateArgs),
    /// Short-maturity equivalent log-normal, normal and implied volatilities
    Vol(VolArgs),
    /// Optimal log-price path f(t) of the variational problem
    Path(PathArgs),
    /// Monte Carlo prices, or the T log C convergence diagnostic with --sweep
    Mc(McArgs),
    /// Strike ladder for S0=100, sigma=30%, r=q=0 at T = 0.5, 1, 2
    #[command(name = "bench-table1")]
    BenchTable1(BenchArgs),
    /// Seven benchmark calls against stored reference prices
    #[command(name = "bench-table2")]
    BenchTable2(BenchArgs),
    /// Rate functions over a moneyness grid, for plotting
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Call,
    Put,
}

impl From<SideArg> for asian_lv::Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Call => asian_lv::Side::Call,
            SideArg::Put => asian_lv::Side::Put,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateMethodArg {
    Exact,
    Scan,
    Series,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct MarketArgs {
    /// JSON model file, or constant:<sigma> | cev:<sigma0>,<exponent> | table:<csv file>
    #[arg(long)]
    pub model: String,
    /// Spot price (default: the model file's market, else 100)
    #[arg(long, allow_negative_numbers = true)]
    pub s0: Option<f64>,
    /// Interest rate
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Dividend yield
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct StrikeChoice {
    /// Fixed strikes, comma or space separated
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub strike: Option<Vec<f64>>,
    /// Floating-strike multipliers, comma or space separated
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub kappa: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct PriceArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    #[command(flatten)]
    pub strikes: StrikeChoice,
    /// Maturity in years
    #[arg(long = "T", value_name = "T", allow_negative_numbers = true)]
    pub maturity: f64,
    #[arg(long, value_enum, default_value_t = SideArg::Call)]
    pub side: SideArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct RateChoice {
    /// Fixed strikes, comma or space separated
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub strike: Option<Vec<f64>>,
    /// Moneyness ratios K/S0, comma or space separated
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub moneyness: Option<Vec<f64>>,
    /// Floating-strike multipliers, comma or space separated
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub kappa: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    #[command(flatten)]
    pub choice: RateChoice,
    /// Fixed-strike solver
    #[arg(long, value_enum, default_value_t = RateMethodArg::Exact)]
    pub method: RateMethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct FixedChoice {
    /// Fixed strikes, comma or space separated
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub strike: Option<Vec<f64>>,
    /// Moneyness ratios K/S0, comma or space separated
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub moneyness: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct VolArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    #[command(flatten)]
    pub choice: FixedChoice,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SingleStrike {
    #[arg(long, allow_negative_numbers = true)]
    pub strike: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    #[command(flatten)]
    pub strike: SingleStrike,
    /// Number of time points on [0, 1]
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(2..))]
    pub points: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    #[command(flatten)]
    pub strikes: StrikeChoice,
    /// Maturities in years, comma or space separated
    #[arg(long = "T", value_name = "T", value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
    pub maturity: Vec<f64>,
    #[arg(long, value_enum, default_value_t = SideArg::Call)]
    pub side: SideArg,
    #[arg(long, default_value_t = 100_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Antithetic pairs (paths must be even)
    #[arg(long)]
    pub antithetic: bool,
    /// Run on the calling thread only
    #[arg(long)]
    pub sequential: bool,
    /// Emit (T, T log C, -I) for one out-of-the-money fixed strike
    #[arg(long)]
    pub sweep: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Add the stored reference columns
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    /// Smallest K/S0
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub from: f64,
    /// Largest K/S0
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 61, value_parser = clap::value_parser!(u32).range(2..))]
    pub points: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}
