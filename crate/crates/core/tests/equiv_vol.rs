mod common;

use asian_lv::equiv_vol::{vol_limits, vol_ln_series_bs, vol_ln_series_lv, vol_n_series_lv};
use asian_lv::rate_lv::LvConfig;
use asian_lv::LocalVolFn;
use common::{j_bs_bisect, logspace};

const S0: f64 = 100.0;

#[test]
fn continuous_through_the_money() {
    let cfg = LvConfig::default();
    for model in [LocalVolFn::constant(0.3).unwrap(), LocalVolFn::cev(0.3, -0.8, S0).unwrap()] {
        let atm = model.sigma(S0) / 3f64.sqrt();
        for k in [S0 * (1.0 - 1e-5), S0 * (1.0 + 1e-5)] {
            let v = vol_limits(&model, S0, k, &cfg).unwrap();
            assert!((v.sigma_ln / atm - 1.0).abs() < 1e-4, "K={k}: {}", v.sigma_ln);
        }
    }
}

#[test]
fn black_scholes_series_tracks_exact() {
    let cfg = LvConfig::default();
    let sigma = 0.3;
    let model = LocalVolFn::constant(sigma).unwrap();
    for i in 0..=24 {
        let x = -0.3 + 0.025 * i as f64;
        if x.abs() < 1e-9 {
            continue;
        }
        let exact = vol_limits(&model, S0, S0 * f64::exp(x), &cfg).unwrap().sigma_ln;
        let series = vol_ln_series_bs(sigma, x, 3).unwrap();
        assert!((series - exact).abs() / exact < 5e-3, "x={x}");
    }
}

#[test]
fn limits_match_bisection_rate() {
    let cfg = LvConfig::default();
    let sigma = 0.4;
    let model = LocalVolFn::constant(sigma).unwrap();
    for m in [0.3, 0.8, 1.3, 4.0] {
        let v = vol_limits(&model, S0, m * S0, &cfg).unwrap();
        let i = j_bs_bisect(m) / (sigma * sigma);
        let want = f64::ln(m).abs() / (2.0 * i).sqrt();
        assert!((v.sigma_ln - want).abs() < 1e-9, "m={m}");
        assert!((v.sigma_implied - sigma).abs() < 1e-9, "m={m}");
        assert!((v.sigma_n - S0 * (m - 1.0).abs() / (2.0 * i).sqrt()).abs() < 1e-7, "m={m}");
    }
}

#[test]
fn positive_across_wide_strikes() {
    let cfg = LvConfig::default();
    let models = [
        LocalVolFn::constant(0.2).unwrap(),
        LocalVolFn::cev(0.25, -1.0, S0).unwrap(),
        LocalVolFn::tabulated(vec![50.0, 100.0, 150.0], vec![0.35, 0.25, 0.2]).unwrap(),
    ];
    for model in &models {
        for k in logspace(0.05 * S0, 20.0 * S0, 60) {
            let v = vol_limits(model, S0, k, &cfg).unwrap();
            assert!(v.sigma_ln > 0.0 && v.sigma_n > 0.0 && v.sigma_implied > 0.0, "K={k}");
        }
    }
}

#[test]
fn local_vol_expansions_near_the_money() {
    let cfg = LvConfig::default();
    let model = LocalVolFn::cev(0.3, -0.6, S0).unwrap();
    for x in [-0.05f64, 0.05] {
        let k = S0 * x.exp();
        let v = vol_limits(&model, S0, k, &cfg).unwrap();
        let ln = vol_ln_series_lv(&model, S0, x, 2).unwrap();
        let n = vol_n_series_lv(&model, S0, k / S0 - 1.0, 2).unwrap();
        assert!((ln - v.sigma_ln).abs() / v.sigma_ln < 1e-4, "x={x}: {ln} vs {}", v.sigma_ln);
        assert!((n - v.sigma_n).abs() / v.sigma_n < 1e-4, "x={x}: {n} vs {}", v.sigma_n);
    }
}
