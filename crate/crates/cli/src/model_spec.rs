//! `--model` grammar: a JSON model file or an inline specification.

use std::path::Path;

use anyhow::{Context, Result};
use asian_lv::core_model::ModelFile;
use asian_lv::{LocalVolFn, MarketParams};
use serde::Deserialize;

use crate::args::MarketArgs;
use crate::UsageError;

const DEFAULT_S0: f64 = 100.0;

fn number(text: &str, what: &str) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| UsageError(format!("{what}: expected a number, got {text:?}")).into())
}

#[derive(Debug, Deserialize)]
struct Knot {
    spot: f64,
    vol: f64,
}

/// Two-column `spot,vol` CSV with a header row; `#` lines are ignored.
fn read_table(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    if !path.is_file() {
        return Err(UsageError(format!("volatility table {} not found", path.display())).into());
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let (mut spots, mut vols) = (Vec::new(), Vec::new());
    for row in reader.deserialize() {
        let k: Knot = row.map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        spots.push(k.spot);
        vols.push(k.vol);
    }
    Ok((spots, vols))
}

/// Resolve the model and market; command-line market flags win over the file.
pub fn resolve(args: &MarketArgs) -> Result<(LocalVolFn, MarketParams)> {
    let spec = args.model.trim();
    let (kind, rest) = spec.split_once(':').unwrap_or(("", spec));
    let (model, file_market) = match kind {
        "constant" => (None, None),
        "cev" | "table" => (None, None),
        _ => {
            let path = Path::new(spec);
            if !path.is_file() {
                return Err(UsageError(format!(
                    "--model {spec:?} is neither an existing file nor constant:<sigma>, cev:<sigma0>,<exponent>, table:<file>"
                ))
                .into());
            }
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file = ModelFile::from_json(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            (Some(file.model.clone()), Some(file.market))
        }
    };
    let s0 = args.s0.or(file_market.as_ref().map(|m| m.s0)).unwrap_or(DEFAULT_S0);
    let r = args.r.or(file_market.as_ref().map(|m| m.r)).unwrap_or(0.0);
    let q = args.q.or(file_market.as_ref().map(|m| m.q)).unwrap_or(0.0);
    let market = MarketParams::new(s0, r, q).map_err(|e| UsageError(e.to_string()))?;

    let vol = match (kind, model) {
        (_, Some(config)) => config.build(s0),
        ("constant", None) => LocalVolFn::constant(number(rest, "constant volatility")?),
        ("cev", None) => {
            let parts: Vec<&str> = rest.split(',').collect();
            let [level, exponent] = parts[..] else {
                return Err(UsageError(format!("cev model needs <sigma0>,<exponent>, got {rest:?}")).into());
            };
            LocalVolFn::cev(number(level, "cev level")?, number(exponent, "cev exponent")?, s0)
        }
        ("table", None) => {
            let (spots, vols) = read_table(Path::new(rest))?;
            LocalVolFn::tabulated(spots, vols)
        }
        _ => unreachable!("model kinds are matched above"),
    }
    .map_err(|e| UsageError(e.to_string()))?;
    Ok((vol, market))
}
