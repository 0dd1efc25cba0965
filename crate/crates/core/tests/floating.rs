mod common;

use asian_lv::floating::{lambda_bs, rate_floating, rate_floating_lv, terminal_bs, FloatingConfig, FloatingMethod};
use asian_lv::rate_bs::j_bs_value;
use asian_lv::LocalVolFn;
use common::{discrete_path_min, PowerVol, Target};

#[test]
fn bvp_reduces_to_black_scholes() {
    let cfg = FloatingConfig::default();
    let sigma = 0.3;
    let model = LocalVolFn::constant(sigma).unwrap();
    for kappa in [0.7, 0.9, 1.1, 1.5] {
        let r = rate_floating_lv(&model, 100.0, kappa, &cfg).unwrap();
        assert_eq!(r.method, FloatingMethod::Bvp);
        let j = j_bs_value(kappa).unwrap() / (sigma * sigma);
        assert!((r.i_f - j).abs() < 1e-6, "kappa={kappa}: {} vs {j}", r.i_f);
        let lam = lambda_bs(kappa, sigma, terminal_bs(kappa).unwrap());
        assert!((r.lambda - lam).abs() < 1e-6, "kappa={kappa}: lambda {} vs {lam}", r.lambda);
    }
}

#[test]
fn conserved_quantity_along_path() {
    let cfg = FloatingConfig::default();
    for model in [LocalVolFn::constant(0.3).unwrap(), LocalVolFn::cev(0.3, -0.7, 100.0).unwrap()] {
        for kappa in [0.8, 1.3] {
            let r = rate_floating_lv(&model, 100.0, kappa, &cfg).unwrap();
            assert!(r.conserved_drift <= 1e-6 * r.conserved_scale, "drift {} scale {}", r.conserved_drift, r.conserved_scale);
            assert!(r.constraint_residual.abs() <= cfg.constraint_tol);
            assert!((r.energy - r.i_f).abs() <= 1e-6 * r.i_f.max(1e-3));
        }
    }
}

#[test]
fn vanishes_at_the_money() {
    // near κ = 1 the rate behaves like (3/2) ln²κ / σ(S0)², so the bound
    // 5e-6 at |κ - 1| = 1e-3 needs σ(S0) above roughly 0.55
    let cfg = FloatingConfig::default();
    let model = LocalVolFn::cev(0.6, -0.5, 100.0).unwrap();
    for kappa in [1.0 - 1e-3, 1.0 + 1e-3] {
        let r = rate_floating(&model, 100.0, kappa, &cfg).unwrap();
        assert!(r.i_f <= 5e-6, "kappa={kappa}: {}", r.i_f);
    }
    let model = LocalVolFn::cev(0.3, -0.5, 100.0).unwrap();
    for kappa in [1.0 - 1e-3, 1.0 + 1e-3] {
        let r = rate_floating(&model, 100.0, kappa, &cfg).unwrap();
        let lead = 1.5 * f64::ln(kappa).powi(2) / 0.09;
        assert!((r.i_f / lead - 1.0).abs() < 1e-2, "kappa={kappa}: {} vs {lead}", r.i_f);
    }
}

#[test]
fn bvp_tracks_closed_form_over_wide_range() {
    let cfg = FloatingConfig::default();
    let model = LocalVolFn::constant(0.25).unwrap();
    for i in 0..16 {
        let kappa = 0.5 + 0.1 * i as f64;
        if (kappa - 1.0f64).abs() < 1e-9 {
            continue;
        }
        let r = rate_floating_lv(&model, 100.0, kappa, &cfg).unwrap();
        let j = j_bs_value(kappa).unwrap() / 0.0625;
        assert!((r.i_f - j).abs() < 1e-6 * j.max(1.0), "kappa={kappa}: {} vs {j}", r.i_f);
    }
}

#[test]
fn cev_matches_discrete_path_oracle() {
    let cfg = FloatingConfig::default();
    let model = LocalVolFn::cev(0.3, -0.5, 100.0).unwrap();
    let vol = PowerVol { a: 0.3, beta: -0.5 };
    for kappa in [0.8, 1.25] {
        let r = rate_floating_lv(&model, 100.0, kappa, &cfg).unwrap();
        let brute = discrete_path_min(vol, Target::Floating(kappa), 50);
        assert!((r.i_f - brute).abs() < 1e-3, "kappa={kappa}: {} vs oracle {brute}", r.i_f);
    }
}

#[test]
fn floating_bs_matches_discrete_path_oracle() {
    let vol = PowerVol { a: 1.0, beta: 0.0 };
    for kappa in [0.7, 1.5] {
        let brute = discrete_path_min(vol, Target::Floating(kappa), 50);
        let j = j_bs_value(kappa).unwrap();
        assert!((brute - j).abs() < 1e-3, "kappa={kappa}: {brute} vs {j}");
    }
}
