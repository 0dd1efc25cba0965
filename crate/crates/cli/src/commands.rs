use anyhow::{bail, Context, Result};
use asian_lv::benchmarks::{fmw_scenarios, strike_ladder, LADDER_MATURITIES, LADDER_S0, LADDER_SIGMA};
use asian_lv::equiv_vol::vol_limits;
use asian_lv::floating::{rate_floating, rate_floating_bs_full, FloatingConfig, FloatingMethod};
use asian_lv::mc_engine::{convergence_sweep, simulate_asian_batch, McConfig};
use asian_lv::pricer::{price_asymptotic, price_floating_asymptotic, price_grid, PriceMethod, PricerConfig};
use asian_lv::rate_bs::{j_bs_value, optimal_path_bs};
use asian_lv::rate_lv::{optimal_path_lv, rate_exact, rate_exact_grid, rate_scan, rate_series, LvConfig, RateMethod};
use asian_lv::{Execution, LocalVolFn, MarketParams, OptionSpec, Side};

use crate::args::{
    BenchArgs, Command, FixedChoice, McArgs, PathArgs, PriceArgs, RateArgs, RateMethodArg, ScanArgs, VolArgs,
};
use crate::model_spec::resolve;
use crate::table::{Cell, Table};
use crate::UsageError;

/// Input validation failures from the library are the caller's fault.
fn input<T>(r: asian_lv::Result<T>) -> Result<T> {
    r.map_err(|e| UsageError(e.to_string()).into())
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Call => "call",
        Side::Put => "put",
    }
}

fn price_method_name(m: PriceMethod) -> &'static str {
    match m {
        PriceMethod::EquivLn => "equivalent-lognormal",
        PriceMethod::AtmSqrtT => "atm-sqrt-t",
        PriceMethod::ItmExpansion => "itm-expansion",
        PriceMethod::LdpExponent => "exponent",
    }
}

fn rate_method_name(m: RateMethod) -> &'static str {
    match m {
        RateMethod::Exact => "exact",
        RateMethod::Scan => "scan",
        RateMethod::Series => "series",
    }
}

fn floating_method_name(m: FloatingMethod) -> &'static str {
    match m {
        FloatingMethod::BsClosedForm => "closed-form",
        FloatingMethod::Bvp => "shooting",
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Price(a) => price(a),
        Command::Rate(a) => rate(a),
        Command::Vol(a) => vol(a),
        Command::Path(a) => path(a),
        Command::Mc(a) => mc(a),
        Command::BenchTable1(a) => bench_table1(a),
        Command::BenchTable2(a) => bench_table2(a),
        Command::Scan(a) => scan(a),
    }
}

fn price(a: PriceArgs) -> Result<()> {
    let (model, market) = resolve(&a.market)?;
    let cfg = PricerConfig::default();
    let side = Side::from(a.side);
    let mut table = Table::new(["style", "strike", "kappa", "T", "side", "price", "method", "sigma_ln", "rate"]);
    if let Some(strikes) = &a.strikes.strike {
        let opts = strikes
            .iter()
            .map(|&k| input(OptionSpec::fixed(k, a.maturity, side)))
            .collect::<Result<Vec<_>>>()?;
        for (k, r) in strikes.iter().zip(price_grid(&model, &market, &opts, &cfg, Execution::Parallel)) {
            let r = r.with_context(|| format!("pricing strike {k}"))?;
            table.push(vec![
                Cell::text("fixed"),
                Cell::num(*k),
                Cell::text(""),
                Cell::num(a.maturity),
                Cell::text(side_name(side)),
                Cell::num(r.price),
                Cell::text(price_method_name(r.method)),
                Cell::opt(r.sigma_ln),
                Cell::opt(r.rate),
            ]);
        }
    }
    if let Some(kappas) = &a.strikes.kappa {
        for &kappa in kappas {
            input(OptionSpec::floating(kappa, a.maturity, side))?;
            let r = price_floating_asymptotic(&model, &market, kappa, a.maturity, side, &cfg)
                .with_context(|| format!("pricing floating strike {kappa}"))?;
            table.push(vec![
                Cell::text("floating"),
                Cell::text(""),
                Cell::num(kappa),
                Cell::num(a.maturity),
                Cell::text(side_name(side)),
                Cell::num(r.price),
                Cell::text(price_method_name(r.method)),
                Cell::opt(r.sigma),
                Cell::opt(r.rate),
            ]);
        }
    }
    table.emit(&a.output)
}

fn check_positive(values: &[f64], what: &str) -> Result<()> {
    match values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        Some(v) => Err(UsageError(format!("{what} must be positive, got {v}")).into()),
        None => Ok(()),
    }
}

fn fixed_strikes(choice: &FixedChoice, market: &MarketParams) -> Result<Vec<f64>> {
    let strikes = match (&choice.strike, &choice.moneyness) {
        (Some(k), _) => k.clone(),
        (None, Some(m)) => {
            check_positive(m, "moneyness")?;
            m.iter().map(|m| m * market.s0).collect()
        }
        (None, None) => bail!(UsageError("a strike or moneyness is required".into())),
    };
    check_positive(&strikes, "strike")?;
    Ok(strikes)
}

fn rate(a: RateArgs) -> Result<()> {
    let (model, market) = resolve(&a.market)?;
    let s0 = market.s0;
    let mut table = Table::new(["style", "moneyness", "strike", "rate", "method", "lambda", "terminal", "note"]);
    if let Some(kappas) = &a.choice.kappa {
        check_positive(kappas, "kappa")?;
        let cfg = FloatingConfig::default();
        for &kappa in kappas {
            if kappa == 1.0 {
                table.push(vec![
                    Cell::text("floating"),
                    Cell::num(kappa),
                    Cell::num(kappa * s0),
                    Cell::num(0.0),
                    Cell::text("atm"),
                    Cell::num(0.0),
                    Cell::num(0.0),
                    Cell::text(""),
                ]);
                continue;
            }
            let r = rate_floating(&model, s0, kappa, &cfg).with_context(|| format!("floating rate at kappa {kappa}"))?;
            let note = if r.roots_found > 1 { format!("{} admissible multipliers", r.roots_found) } else { String::new() };
            table.push(vec![
                Cell::text("floating"),
                Cell::num(kappa),
                Cell::num(kappa * s0),
                Cell::num(r.i_f),
                Cell::text(floating_method_name(r.method)),
                Cell::num(r.lambda),
                Cell::num(r.f1),
                Cell::text(note),
            ]);
        }
        return table.emit(&a.output);
    }
    let choice = FixedChoice {
        strike: a.choice.strike.clone(),
        moneyness: a.choice.moneyness.clone(),
    };
    let cfg = LvConfig::default();
    for k in fixed_strikes(&choice, &market)? {
        let m = k / s0;
        let row = match a.method {
            RateMethodArg::Series => {
                let i = rate_series(&model, s0, m.ln(), 4).with_context(|| format!("series rate at strike {k}"))?;
                vec![Cell::num(i), Cell::text("series"), Cell::text(""), Cell::text(""), Cell::text("")]
            }
            method => {
                let r = match method {
                    RateMethodArg::Scan => rate_scan(&model, s0, k, &cfg),
                    _ => rate_exact(&model, s0, k, &cfg),
                }
                .with_context(|| format!("rate at strike {k}"))?;
                let note = if r.minimizer_at_boundary { "minimizer at scan boundary" } else { "" };
                vec![
                    Cell::num(r.i),
                    Cell::text(rate_method_name(r.method)),
                    Cell::num(r.lambda),
                    Cell::num(r.terminal),
                    Cell::text(note),
                ]
            }
        };
        let mut cells = vec![Cell::text("fixed"), Cell::num(m), Cell::num(k)];
        cells.extend(row);
        table.push(cells);
    }
    table.emit(&a.output)
}

fn vol(a: VolArgs) -> Result<()> {
    let (model, market) = resolve(&a.market)?;
    let cfg = LvConfig::default();
    let mut table = Table::new(["strike", "moneyness", "sigma_ln", "sigma_n", "sigma_implied", "rate"]);
    for k in fixed_strikes(&a.choice, &market)? {
        let v = vol_limits(&model, market.s0, k, &cfg).with_context(|| format!("volatility limits at strike {k}"))?;
        table.push(vec![
            Cell::num(k),
            Cell::num(k / market.s0),
            Cell::num(v.sigma_ln),
            Cell::num(v.sigma_n),
            Cell::num(v.sigma_implied),
            Cell::num(v.i),
        ]);
    }
    table.emit(&a.output)
}

/// Linear interpolation of `(xs, ys)` at `x`, `xs` increasing.
fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&v| v < x).clamp(1, xs.len() - 1);
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
    ys[i - 1] + w * (ys[i] - ys[i - 1])
}

fn path(a: PathArgs) -> Result<()> {
    let (model, market) = resolve(&a.market)?;
    let s0 = market.s0;
    let n = a.points as usize;
    let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let f = match (a.strike.strike, a.strike.kappa) {
        (Some(k), _) => {
            check_positive(&[k], "strike")?;
            match model.constant_level() {
                Some(_) => optimal_path_bs(k / s0, &grid),
                None => optimal_path_lv(&model, s0, k, &grid, &LvConfig::default()),
            }
            .with_context(|| format!("optimal path at strike {k}"))?
        }
        (None, Some(kappa)) => {
            check_positive(&[kappa], "kappa")?;
            if kappa == 1.0 {
                vec![0.0; n]
            } else if let Some(sigma) = model.constant_level() {
                rate_floating_bs_full(kappa, sigma, &grid)?.path
            } else {
                let r = rate_floating(&model, s0, kappa, &FloatingConfig::default())
                    .with_context(|| format!("optimal path at kappa {kappa}"))?;
                grid.iter().map(|&t| interp(&r.times, &r.path, t)).collect()
            }
        }
        (None, None) => bail!(UsageError("a strike or kappa is required".into())),
    };
    let mut table = Table::new(["t", "f", "spot"]);
    for (t, f) in grid.iter().zip(&f) {
        table.push(vec![Cell::num(*t), Cell::num(*f), Cell::num(s0 * f.exp())]);
    }
    table.emit(&a.output)
}

fn mc(a: McArgs) -> Result<()> {
    let (model, market) = resolve(&a.market)?;
    let side = Side::from(a.side);
    let cfg = McConfig {
        paths: a.paths,
        steps: a.steps,
        seed: a.seed,
        antithetic: a.antithetic,
        execution: if a.sequential { Execution::Sequential } else { Execution::Parallel },
        ..McConfig::default()
    };
    input(cfg.validate())?;
    check_positive(&a.maturity, "maturity")?;

    if a.sweep {
        let k = match a.strikes.strike.as_deref() {
            Some([k]) => *k,
            _ => bail!(UsageError("--sweep needs exactly one fixed --strike".into())),
        };
        let rows = convergence_sweep(&model, &market, k, side, &a.maturity, &cfg, &LvConfig::default())
            .map_err(|e| match e {
                asian_lv::Error::OutOfDomain { .. } => anyhow::Error::new(UsageError(e.to_string())),
                other => anyhow::Error::new(other),
            })?;
        let mut table = Table::new(["strike", "T", "price", "stderr", "t_log_price", "minus_rate", "all_payoffs_zero"]);
        for r in rows {
            table.push(vec![
                Cell::num(k),
                Cell::num(r.maturity),
                Cell::num(r.price),
                Cell::num(r.stderr),
                Cell::num(r.t_log_price),
                Cell::num(r.minus_rate),
                Cell::Bool(r.all_payoffs_zero),
            ]);
        }
        return table.emit(&a.output);
    }

    let (style, values, fixed) = match (&a.strikes.strike, &a.strikes.kappa) {
        (Some(k), _) => ("fixed", k.clone(), true),
        (None, Some(k)) => ("floating", k.clone(), false),
        (None, None) => bail!(UsageError("a strike or kappa is required".into())),
    };
    let mut table = Table::new(["style", "strike", "kappa", "T", "side", "price", "stderr", "N", "n", "seed", "all_payoffs_zero"]);
    for &t in &a.maturity {
        let opts = values
            .iter()
            .map(|&v| input(if fixed { OptionSpec::fixed(v, t, side) } else { OptionSpec::floating(v, t, side) }))
            .collect::<Result<Vec<_>>>()?;
        let est = simulate_asian_batch(&model, &market, &opts, &cfg).context("Monte Carlo run")?;
        for (v, e) in values.iter().zip(est) {
            table.push(vec![
                Cell::text(style),
                if fixed { Cell::num(*v) } else { Cell::text("") },
                if fixed { Cell::text("") } else { Cell::num(*v) },
                Cell::num(t),
                Cell::text(side_name(side)),
                Cell::num(e.price),
                Cell::num(e.stderr),
                Cell::Int(e.paths as u64),
                Cell::Int(e.steps as u64),
                Cell::Int(e.seed),
                Cell::Bool(e.all_payoffs_zero),
            ]);
        }
    }
    table.emit(&a.output)
}

fn bench_table1(a: BenchArgs) -> Result<()> {
    let model = LocalVolFn::constant(LADDER_SIGMA)?;
    let market = MarketParams::spot(LADDER_S0)?;
    let cfg = PricerConfig::default();
    let mut headers = vec!["side".to_string(), "strike".to_string()];
    for t in LADDER_MATURITIES {
        headers.push(format!("asymptotic_T{t}"));
        if a.compare {
            headers.extend([format!("published_T{t}"), format!("mc_T{t}"), format!("mc_stdev_T{t}")]);
        }
    }
    headers.push("sigma_ln_pct".into());
    if a.compare {
        headers.push("published_sigma_ln_pct".into());
    }
    let mut table = Table::new(headers);
    for row in strike_ladder()? {
        let mut cells = vec![Cell::text(side_name(row.side)), Cell::dec(row.strike, 0)];
        let mut sigma = 0.0;
        for q in &row.quotes {
            let r = price_asymptotic(&model, &market, &OptionSpec::fixed(row.strike, q.maturity, row.side)?, &cfg)?;
            sigma = r.sigma_ln.unwrap_or(f64::NAN);
            cells.push(Cell::dec(r.price, 4));
            if a.compare {
                cells.extend([Cell::dec(q.asymptotic, 4), Cell::dec(q.mc, 4), Cell::dec(q.mc_stdev, 4)]);
            }
        }
        cells.push(Cell::dec(100.0 * sigma, 4));
        if a.compare {
            cells.push(Cell::dec(100.0 * row.sigma_ln, 2));
        }
        table.push(cells);
    }
    table.emit(&a.output)
}

fn bench_table2(a: BenchArgs) -> Result<()> {
    let cfg = PricerConfig::default();
    let mut headers = vec!["r", "T", "S0", "K", "sigma", "asymptotic", "fpp3", "levy", "linetsky", "reldiff_linetsky_pct", "reldiff_levy_pct"];
    if a.compare {
        headers.push("published_asymptotic");
    }
    let mut table = Table::new(headers);
    for row in fmw_scenarios()? {
        let model = LocalVolFn::constant(row.sigma)?;
        let opt = OptionSpec::fixed(row.strike, row.maturity, Side::Call)?;
        let p = price_asymptotic(&model, &row.market()?, &opt, &cfg)?.price;
        let mut cells = vec![
            Cell::num(row.r),
            Cell::num(row.maturity),
            Cell::num(row.s0),
            Cell::num(row.strike),
            Cell::num(row.sigma),
            Cell::dec(p, 6),
            Cell::dec(row.fpp3, 6),
            Cell::dec(row.levy, 6),
            Cell::dec(row.linetsky, 6),
            Cell::dec(100.0 * (p - row.linetsky) / row.linetsky, 6),
            Cell::dec(100.0 * (row.levy - row.linetsky) / row.linetsky, 6),
        ];
        if a.compare {
            cells.push(Cell::dec(row.asymptotic, 6));
        }
        table.push(cells);
    }
    table.emit(&a.output)
}

fn scan(a: ScanArgs) -> Result<()> {
    let (model, market) = resolve(&a.market)?;
    check_positive(&[a.from, a.to], "moneyness bound")?;
    if a.from >= a.to {
        bail!(UsageError(format!("--from {} must be below --to {}", a.from, a.to)));
    }
    let n = a.points as usize;
    let ms: Vec<f64> = (0..n).map(|i| a.from + (a.to - a.from) * i as f64 / (n - 1) as f64).collect();
    let strikes: Vec<f64> = ms.iter().map(|m| m * market.s0).collect();
    let rates = rate_exact_grid(&model, market.s0, &strikes, &LvConfig::default(), Execution::Parallel);
    let mut table = Table::new(["moneyness", "j_bs", "i_lv"]);
    for (m, r) in ms.iter().zip(rates) {
        let i = r.with_context(|| format!("rate at moneyness {m}"))?.i;
        table.push(vec![Cell::num(*m), Cell::num(j_bs_value(*m)?), Cell::num(i)]);
    }
    table.emit(&a.output)
}
