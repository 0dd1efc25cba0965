use asian_lv::core_model::{forward_average, put_call_parity_gap};
use asian_lv::pricer::{black, implied_sigma_ln, price, price_asymptotic, price_grid, PricerConfig};
use asian_lv::{Execution, LocalVolFn, MarketParams, OptionSpec, Side};
use proptest::prelude::*;

fn strikes(s0: f64) -> Vec<f64> {
    (0..=30).map(|i| s0 * (0.5 + 1.5 * i as f64 / 30.0)).collect()
}

#[test]
fn parity_and_bounds_over_grid() {
    let cfg = PricerConfig::default();
    let model = LocalVolFn::cev(0.3, -0.5, 100.0).unwrap();
    for market in [MarketParams::spot(100.0).unwrap(), MarketParams::new(100.0, 0.05, 0.02).unwrap()] {
        for t in [0.25, 0.5, 1.0, 2.0] {
            let a = forward_average(&market, t);
            let grow = (market.r * t).exp();
            for k in strikes(100.0) {
                let c = price_asymptotic(&model, &market, &OptionSpec::fixed(k, t, Side::Call).unwrap(), &cfg).unwrap().price;
                let p = price_asymptotic(&model, &market, &OptionSpec::fixed(k, t, Side::Put).unwrap(), &cfg).unwrap().price;
                let gap = put_call_parity_gap(&market, &OptionSpec::fixed(k, t, Side::Call).unwrap());
                assert!((c - p - gap).abs() <= 1e-12, "K={k} T={t}: {}", c - p - gap);
                assert!((a - k).max(0.0) <= grow * c + 1e-12 && grow * c <= a + 1e-12, "K={k} T={t}");
            }
        }
    }
}

#[test]
fn zero_strike_call_is_discounted_forward() {
    let cfg = PricerConfig::default();
    let model = LocalVolFn::constant(0.3).unwrap();
    let market = MarketParams::new(100.0, 0.04, 0.01).unwrap();
    let t = 1.0;
    let want = (-0.04f64).exp() * forward_average(&market, t);
    let got = price_asymptotic(&model, &market, &OptionSpec::fixed(1e-6, t, Side::Call).unwrap(), &cfg).unwrap().price;
    assert!((got - want).abs() < 1e-6, "{got} vs {want}");
}

#[test]
fn grid_is_order_preserving_in_both_modes() {
    let cfg = PricerConfig::default();
    let model = LocalVolFn::cev(0.3, -0.5, 100.0).unwrap();
    let market = MarketParams::spot(100.0).unwrap();
    let opts: Vec<_> = strikes(100.0).into_iter().map(|k| OptionSpec::fixed(k, 0.5, Side::Call).unwrap()).collect();
    let seq: Vec<f64> = price_grid(&model, &market, &opts, &cfg, Execution::Sequential).into_iter().map(|r| r.unwrap().price).collect();
    let par: Vec<f64> = price_grid(&model, &market, &opts, &cfg, Execution::Parallel).into_iter().map(|r| r.unwrap().price).collect();
    assert_eq!(seq, par);
    for (o, p) in opts.iter().zip(&seq) {
        assert_eq!(price_asymptotic(&model, &market, o, &cfg).unwrap().price, *p);
    }
}

#[test]
fn floating_prices_are_sane() {
    let cfg = PricerConfig::default();
    let model = LocalVolFn::cev(0.3, -0.5, 100.0).unwrap();
    let market = MarketParams::spot(100.0).unwrap();
    // (κ S_T - Ā)⁺ grows with κ
    let mut last = 0.0;
    for kappa in [0.8, 0.9, 0.95, 1.0, 1.05] {
        let p = price(&model, &market, &OptionSpec::floating(kappa, 0.5, Side::Call).unwrap(), &cfg).unwrap();
        assert!(p > last && p < 100.0, "kappa={kappa}: {p}");
        last = p;
    }
}

proptest! {
    #[test]
    fn black_parity(f in 1.0f64..200.0, k in 1.0f64..200.0, s in 0.01f64..1.5, t in 0.01f64..5.0, d in 0.5f64..1.0) {
        let (c, _, _) = black(f, k, s, t, d, Side::Call);
        let (p, _, _) = black(f, k, s, t, d, Side::Put);
        prop_assert!((c - p - d * (f - k)).abs() <= 1e-12 * f.max(k));
    }

    #[test]
    fn implied_vol_round_trip(k in 70.0f64..140.0, t in 0.1f64..2.0) {
        let cfg = PricerConfig::default();
        let model = LocalVolFn::cev(0.3, -0.5, 100.0).unwrap();
        let market = MarketParams::new(100.0, 0.03, 0.0).unwrap();
        let side = if k > 100.0 { Side::Call } else { Side::Put };
        let opt = OptionSpec::fixed(k, t, side).unwrap();
        let r = price_asymptotic(&model, &market, &opt, &cfg).unwrap();
        prop_assume!(r.price > 1e-8);
        let s = implied_sigma_ln(r.price, &market, &opt).unwrap();
        prop_assert!((s - r.sigma_ln.unwrap()).abs() < 1e-7);
    }
}
