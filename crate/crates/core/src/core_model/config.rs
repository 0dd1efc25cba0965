//! JSON model documents.
//!
//! ```json
//! {
//!   "model":  { "kind": "cev", "sigma0": 0.3, "exponent": -0.3, "s_ref": 100.0,
//!               "sigma_lo": 1e-4, "sigma_hi": 10.0 },
//!   "market": { "s0": 100.0, "r": 0.0, "q": 0.0 }
//! }
//! ```
//!
//! `kind` is one of `constant` (`sigma`), `cev` (`sigma0`, `exponent`, optional
//! `s_ref` defaulting to the market spot) or `tabulated` (`spots`, `vols`, with
//! spots strictly increasing). The bounds are optional on every kind. `r` and
//! `q` default to zero.

use serde::{Deserialize, Serialize};

use super::{LocalVolFn, MarketParams, DEFAULT_SIGMA_HI, DEFAULT_SIGMA_LO};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Constant {
        sigma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma_lo: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma_hi: Option<f64>,
    },
    Cev {
        sigma0: f64,
        exponent: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s_ref: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma_lo: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma_hi: Option<f64>,
    },
    Tabulated {
        spots: Vec<f64>,
        vols: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma_lo: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma_hi: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketConfig {
    pub s0: f64,
    #[serde(default)]
    pub r: f64,
    #[serde(default)]
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub model: ModelConfig,
    pub market: MarketConfig,
}

impl ModelConfig {
    /// Build the volatility function; `s0` is the fallback CEV reference spot.
    pub fn build(&self, s0: f64) -> Result<LocalVolFn> {
        let (vol, lo, hi) = match self {
            ModelConfig::Constant {
                sigma,
                sigma_lo,
                sigma_hi,
            } => (LocalVolFn::constant(*sigma)?, sigma_lo, sigma_hi),
            ModelConfig::Cev {
                sigma0,
                exponent,
                s_ref,
                sigma_lo,
                sigma_hi,
            } => (
                LocalVolFn::cev(*sigma0, *exponent, s_ref.unwrap_or(s0))?,
                sigma_lo,
                sigma_hi,
            ),
            ModelConfig::Tabulated {
                spots,
                vols,
                sigma_lo,
                sigma_hi,
            } => (
                LocalVolFn::tabulated(spots.clone(), vols.clone())?,
                sigma_lo,
                sigma_hi,
            ),
        };
        vol.with_bounds(lo.unwrap_or(DEFAULT_SIGMA_LO), hi.unwrap_or(DEFAULT_SIGMA_HI))
    }
}

impl MarketConfig {
    pub fn build(&self) -> Result<MarketParams> {
        MarketParams::new(self.s0, self.r, self.q)
    }
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn build(&self) -> Result<(LocalVolFn, MarketParams)> {
        let market = self.market.build()?;
        Ok((self.model.build(market.s0)?, market))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_model::VolKind;

    #[test]
    fn parses_each_kind() {
        let doc = r#"{"model":{"kind":"constant","sigma":0.3},"market":{"s0":100}}"#;
        let (vol, mkt) = ModelFile::from_json(doc).unwrap().build().unwrap();
        assert_eq!(vol.constant_level(), Some(0.3));
        assert_eq!((mkt.r, mkt.q), (0.0, 0.0));

        let doc = r#"{"model":{"kind":"cev","sigma0":0.3,"exponent":-0.3},
                      "market":{"s0":50,"r":0.02,"q":0.01}}"#;
        let (vol, _) = ModelFile::from_json(doc).unwrap().build().unwrap();
        match vol.kind() {
            VolKind::Cev { s_ref, .. } => assert_eq!(*s_ref, 50.0),
            other => panic!("unexpected kind {other:?}"),
        }

        let doc = r#"{"model":{"kind":"tabulated","spots":[80,100,120],"vols":[0.35,0.3,0.27],
                      "sigma_lo":0.05,"sigma_hi":1.0},"market":{"s0":100}}"#;
        let (vol, _) = ModelFile::from_json(doc).unwrap().build().unwrap();
        assert!((vol.sigma(100.0) - 0.3).abs() < 1e-15);
        assert_eq!(vol.sigma_lo(), 0.05);
    }

    #[test]
    fn rejects_malformed_documents() {
        let bad = [
            r#"{"model":{"kind":"heston"},"market":{"s0":100}}"#,
            r#"{"model":{"kind":"constant","sigma":0.3}}"#,
            r#"{"model":{"kind":"constant","sigma":0.3,"extra":1},"market":{"s0":100}}"#,
        ];
        for doc in bad {
            assert!(matches!(ModelFile::from_json(doc), Err(Error::InvalidConfig(_))), "{doc}");
        }
        let unsorted = r#"{"model":{"kind":"tabulated","spots":[100,80],"vols":[0.3,0.3]},"market":{"s0":100}}"#;
        assert!(ModelFile::from_json(unsorted).unwrap().build().is_err());
        let neg = r#"{"model":{"kind":"constant","sigma":0.3},"market":{"s0":-1}}"#;
        assert!(ModelFile::from_json(neg).unwrap().build().is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let file = ModelFile {
            model: ModelConfig::Cev {
                sigma0: 0.25,
                exponent: 0.5,
                s_ref: Some(90.0),
                sigma_lo: None,
                sigma_hi: Some(2.0),
            },
            market: MarketConfig {
                s0: 90.0,
                r: 0.01,
                q: 0.0,
            },
        };
        let text = serde_json::to_string(&file).unwrap();
        assert_eq!(ModelFile::from_json(&text).unwrap(), file);
    }
}
