//! Fixed-strike rate function `I(K, S0)` for a general local volatility.
//!
//! Three independent routes are provided: the terminal-value equation with
//! its pair of singular integrals (`rate_exact`), the one-dimensional infimum
//! over the terminal level (`rate_scan`), and the small log-strike series
//! (`rate_series`).

use crate::error::{Error, Result};
use crate::core_model::{LocalVolFn, MonotoneCubic};
use crate::numerics::{find_root_with, integrate_sqrt_singular, invert_power_series, QuadConfig, RootConfig, SingularEnd};
use crate::par::{par_map, Execution};
use crate::rate_bs::X_COEFFS;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LvConfig {
    pub root: RootConfig,
    pub quad: QuadConfig,
    /// Initial width of the terminal-value bracket beyond `|x|`.
    pub bracket_width: f64,
    pub max_expansions: usize,
}

impl Default for LvConfig {
    fn default() -> Self {
        Self {
            root: RootConfig::default(),
            quad: QuadConfig {
                max_subdivisions: 256,
                ..QuadConfig::default()
            },
            bracket_width: 10.0,
            max_expansions: 40,
        }
    }
}

/// Which side of the money the variational problem lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `K ≤ S0`: terminal value `h1 = -f(1) ≥ 0`.
    Plus,
    /// `K ≥ S0`: terminal value `f1 = f(1) ≥ 0`.
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    Exact,
    Scan,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LvRateResult {
    pub i: f64,
    /// `f1` on the minus branch, `h1` on the plus branch.
    pub terminal: f64,
    pub branch: Branch,
    pub f: f64,
    pub g: f64,
    pub lambda: f64,
    pub method: RateMethod,
    /// Residual of the terminal-value equation (exact) or zero.
    pub residual: f64,
    /// The scan minimum sits on the edge of the admissible range.
    pub minimizer_at_boundary: bool,
}

impl LvRateResult {
    fn atm(method: RateMethod) -> Self {
        Self {
            i: 0.0,
            terminal: 0.0,
            branch: Branch::Minus,
            f: 0.0,
            g: 0.0,
            lambda: 0.0,
            method,
            residual: 0.0,
            minimizer_at_boundary: false,
        }
    }
}

fn check_spot(s0: f64) -> Result<()> {
    if !(s0 > 0.0) || !s0.is_finite() {
        return Err(Error::domain("s0", s0));
    }
    Ok(())
}

/// The integral pair `(F, G)` at a given terminal value.
///
/// Minus branch, `φ = e^{f1}`:
/// `G = ∫_0^{f1} sqrt(φ - e^y) / σ(S0 e^y) dy`,
/// `F = ∫_0^{f1} dy / (σ(S0 e^y) sqrt(φ - e^y))`.
/// Plus branch, `χ = e^{-h1}`:
/// `G = ∫_0^{h1} sqrt(e^{-y} - χ) / σ(S0 e^{-y}) dy`,
/// `F = ∫_0^{h1} dy / (σ(S0 e^{-y}) sqrt(e^{-y} - χ))`.
pub fn fg_pair(model: &LocalVolFn, s0: f64, terminal: f64, branch: Branch, quad: &QuadConfig) -> Result<(f64, f64)> {
    check_spot(s0)?;
    if !(terminal >= 0.0) || !terminal.is_finite() {
        return Err(Error::domain("terminal value", terminal));
    }
    if terminal == 0.0 {
        return Ok((0.0, 0.0));
    }
    let t1 = terminal;
    let (f, g) = match branch {
        Branch::Minus => {
            let e1 = t1.exp();
            let gap = move |_: f64, d: f64| -e1 * (-d).exp_m1();
            let sig = |y: f64| model.sigma(s0 * y.exp());
            let f = integrate_sqrt_singular(|y| 1.0 / sig(y), gap, 0.0, t1, SingularEnd::Upper, quad)?;
            let g = integrate_sqrt_singular(|y| y.exp() * (t1 - y).exp_m1() / sig(y), gap, 0.0, t1, SingularEnd::Upper, quad)?;
            (f.value, g.value)
        }
        Branch::Plus => {
            let e1 = (-t1).exp();
            let gap = move |_: f64, d: f64| e1 * d.exp_m1();
            let sig = |y: f64| model.sigma(s0 * (-y).exp());
            let f = integrate_sqrt_singular(|y| 1.0 / sig(y), gap, 0.0, t1, SingularEnd::Upper, quad)?;
            let g = integrate_sqrt_singular(|y| e1 * (t1 - y).exp_m1() / sig(y), gap, 0.0, t1, SingularEnd::Upper, quad)?;
            (f.value, g.value)
        }
    };
    Ok((f, g))
}

/// `I(K, S0)` by solving `e^{f1} - K/S0 = G/F` (`K > S0`) or
/// `K/S0 - e^{-h1} = G/F` (`K < S0`) and returning `FG/2`.
pub fn rate_exact(model: &LocalVolFn, s0: f64, strike: f64, cfg: &LvConfig) -> Result<LvRateResult> {
    check_spot(s0)?;
    if !(strike > 0.0) || !strike.is_finite() {
        return Err(Error::domain("strike", strike));
    }
    let m = strike / s0;
    let x = m.ln();
    if x == 0.0 {
        return Ok(LvRateResult::atm(RateMethod::Exact));
    }
    let branch = if x > 0.0 { Branch::Minus } else { Branch::Plus };
    let residual = |t: f64| -> f64 {
        match fg_pair(model, s0, t, branch, &cfg.quad) {
            Ok((f, g)) => match branch {
                Branch::Minus => (t.exp() - m) - g / f,
                Branch::Plus => (m - (-t).exp()) - g / f,
            },
            Err(_) => f64::NAN,
        }
    };
    let lo = x.abs();
    let f_lo = residual(lo);
    let mut width = cfg.bracket_width.max(lo);
    let mut hi = lo + width;
    let mut f_hi = residual(hi);
    let mut expansions = 0;
    while f_lo * f_hi > 0.0 && expansions < cfg.max_expansions {
        width *= cfg.root.expand_factor;
        hi = lo + width;
        f_hi = residual(hi);
        expansions += 1;
    }
    let t1 = find_root_with(residual, lo, hi, f_lo, f_hi, &cfg.root)?;
    let (f, g) = fg_pair(model, s0, t1, branch, &cfg.quad)?;
    let res = match branch {
        Branch::Minus => t1.exp() - m - g / f,
        Branch::Plus => m - (-t1).exp() - g / f,
    };
    let lambda = match branch {
        Branch::Plus => 0.5 * f * f,
        Branch::Minus => -0.5 * f * f,
    };
    Ok(LvRateResult {
        i: 0.5 * f * g,
        terminal: t1,
        branch,
        f,
        g,
        lambda,
        method: RateMethod::Exact,
        residual: res,
        minimizer_at_boundary: false,
    })
}

/// `rate_exact` over a strike grid, in input order.
pub fn rate_exact_grid(model: &LocalVolFn, s0: f64, strikes: &[f64], cfg: &LvConfig, exec: Execution) -> Vec<Result<LvRateResult>> {
    par_map(strikes, exec, |&k| rate_exact(model, s0, k, cfg))
}

/// Levels used to tabulate the optimal path before interpolation in `t`.
const PATH_LEVELS: usize = 256;

/// Optimal log-price path `f(t)` of the fixed-strike problem at the times in `grid`.
///
/// Along the optimum the time needed to reach level `y` is the partial `F`
/// integral up to `y` divided by the full one. Levels are packed
/// quadratically towards the terminal value, where the path flattens, and the
/// inverse `y(t)` is taken by monotone cubic interpolation.
pub fn optimal_path_lv(model: &LocalVolFn, s0: f64, strike: f64, grid: &[f64], cfg: &LvConfig) -> Result<Vec<f64>> {
    if let Some(&t) = grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::domain("path time", t));
    }
    let r = rate_exact(model, s0, strike, cfg)?;
    if r.terminal == 0.0 {
        return Ok(vec![0.0; grid.len()]);
    }
    let t1 = r.terminal;
    let levels: Vec<f64> = (0..=PATH_LEVELS)
        .map(|j| {
            let u = 1.0 - j as f64 / PATH_LEVELS as f64;
            t1 * (1.0 - u * u)
        })
        .collect();
    let mut times = Vec::with_capacity(levels.len());
    times.push(0.0);
    let mut acc = 0.0;
    for w in levels.windows(2) {
        let (a, b) = (w[0], w[1]);
        let seg = match r.branch {
            Branch::Minus => {
                let e1 = t1.exp();
                integrate_sqrt_singular(
                    |y| 1.0 / model.sigma(s0 * y.exp()),
                    move |_, d| -e1 * (b - t1 - d).exp_m1(),
                    a,
                    b,
                    SingularEnd::Upper,
                    &cfg.quad,
                )?
            }
            Branch::Plus => {
                let e1 = (-t1).exp();
                integrate_sqrt_singular(
                    |y| 1.0 / model.sigma(s0 * (-y).exp()),
                    move |_, d| e1 * (t1 - b + d).exp_m1(),
                    a,
                    b,
                    SingularEnd::Upper,
                    &cfg.quad,
                )?
            }
        };
        acc += seg.value;
        times.push(acc);
    }
    for t in times.iter_mut() {
        *t /= acc;
    }
    let sign = match r.branch {
        Branch::Minus => 1.0,
        Branch::Plus => -1.0,
    };
    let inverse = MonotoneCubic::new(times, levels)?;
    Ok(grid.iter().map(|&t| sign * inverse.eval(t).0).collect())
}

/// `∫_1^φ sqrt(φ - z) / (z σ(S0 z)) dz` for `φ > 1`.
fn scan_g_minus(model: &LocalVolFn, s0: f64, phi: f64, quad: &QuadConfig) -> Result<f64> {
    Ok(integrate_sqrt_singular(
        |z| (phi - z) / (z * model.sigma(s0 * z)),
        |_, d| d,
        1.0,
        phi,
        SingularEnd::Upper,
        quad,
    )?
    .value)
}

/// `∫_χ^1 sqrt(z - χ) / (z σ(S0 z)) dz` for `0 ≤ χ < 1`.
fn scan_g_plus(model: &LocalVolFn, s0: f64, chi: f64, quad: &QuadConfig) -> Result<f64> {
    Ok(integrate_sqrt_singular(
        |z| (z - chi) / (z * model.sigma(s0 * z)),
        |_, d| d,
        chi,
        1.0,
        SingularEnd::Lower,
        quad,
    )?
    .value)
}

const GOLDEN: f64 = 0.381_966_011_250_105_1;

fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = a + GOLDEN * (b - a);
    let mut x2 = b - GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while (b - a).abs() > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Unimodal up to a single local minimum (ties allowed).
fn is_unimodal(values: &[f64]) -> bool {
    let mut descending = true;
    for w in values.windows(2) {
        if descending && w[1] > w[0] {
            descending = false;
        } else if !descending && w[1] < w[0] {
            return false;
        }
    }
    true
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty scan")
}

/// Minimize `obj` over the grid `u`, then refine by golden section between the
/// neighbours of the best node. Falls back to a 1000-point grid when the
/// coarse samples are not unimodal.
fn scan_minimize<F: Fn(f64) -> f64>(obj: &F, grid: Vec<f64>) -> (f64, f64, usize, usize) {
    let vals: Vec<f64> = grid.iter().map(|&u| obj(u)).collect();
    let (grid, vals) = if is_unimodal(&vals) {
        (grid, vals)
    } else {
        let (lo, hi) = (grid[0], grid[grid.len() - 1]);
        let dense: Vec<f64> = (0..1000).map(|i| lo + (hi - lo) * i as f64 / 999.0).collect();
        let dv: Vec<f64> = dense.iter().map(|&u| obj(u)).collect();
        (dense, dv)
    };
    let i = argmin(&vals);
    let n = grid.len();
    let a = grid[i.saturating_sub(1)];
    let b = grid[(i + 1).min(n - 1)];
    let (u, v) = golden_section(obj, a, b, 1e-11 * (1.0 + a.abs().max(b.abs())));
    if v <= vals[i] {
        (u, v, i, n)
    } else {
        (grid[i], vals[i], i, n)
    }
}

/// `I(K, S0)` as the infimum over the terminal level:
/// `inf_{φ > m} G⁻(φ)² / (2(φ - m))` for `m > 1` and
/// `inf_{0 ≤ χ < m} G⁺(χ)² / (2(m - χ))` for `m < 1`.
pub fn rate_scan(model: &LocalVolFn, s0: f64, strike: f64, cfg: &LvConfig) -> Result<LvRateResult> {
    check_spot(s0)?;
    if !(strike > 0.0) || !strike.is_finite() {
        return Err(Error::domain("strike", strike));
    }
    let m = strike / s0;
    if m == 1.0 {
        return Err(Error::domain("strike (the scan needs K != S0)", strike));
    }
    let q = &cfg.quad;
    if m > 1.0 {
        // φ = m (1 + e^u); the objective blows up at both ends of u.
        let obj = |u: f64| {
            let phi = m * (1.0 + u.exp());
            scan_g_minus(model, s0, phi, q).map_or(f64::INFINITY, |g| 0.5 * g * g / (m * u.exp()))
        };
        let mut hi = 8.0;
        let (u, v, idx, n) = loop {
            let grid: Vec<f64> = (0..=80).map(|i| -25.0 + (hi + 25.0) * i as f64 / 80.0).collect();
            let found = scan_minimize(&obj, grid);
            if found.2 + 1 < found.3 || hi > 64.0 {
                break found;
            }
            hi *= 2.0;
        };
        let phi = m * (1.0 + u.exp());
        let g = scan_g_minus(model, s0, phi, q)?;
        let f = g / (phi - m);
        Ok(LvRateResult {
            i: v,
            terminal: phi.ln(),
            branch: Branch::Minus,
            f,
            g,
            lambda: -0.5 * f * f,
            method: RateMethod::Scan,
            residual: 0.0,
            minimizer_at_boundary: idx == 0 || idx + 1 == n,
        })
    } else {
        // χ = m (1 - ρ) with ρ = e^{-e^w}: w → -∞ is χ → 0 (finite objective),
        // w → +∞ is χ → m (objective blows up).
        let chi_of = |w: f64| -m * (-w.exp()).exp_m1();
        let obj = |w: f64| {
            let gap = m * (-w.exp()).exp();
            scan_g_plus(model, s0, chi_of(w), q).map_or(f64::INFINITY, |g| 0.5 * g * g / gap)
        };
        let grid: Vec<f64> = (0..=100).map(|i| -20.0 + 25.0 * i as f64 / 100.0).collect();
        let (w, v, idx, n) = scan_minimize(&obj, grid);
        let chi = chi_of(w);
        let g = scan_g_plus(model, s0, chi, q)?;
        let f = g / (m - chi);
        Ok(LvRateResult {
            i: v,
            terminal: -chi.ln(),
            branch: Branch::Plus,
            f,
            g,
            lambda: 0.5 * f * f,
            method: RateMethod::Scan,
            residual: 0.0,
            minimizer_at_boundary: idx == 0 || idx + 1 == n,
        })
    }
}

/// Coefficients `(c2, c3, c4)` with `I ≈ c2 x² + c3 x³ + c4 x⁴`.
///
/// Built from `σ, σ', σ''` at `S0` through the reverted series
/// `Z(y) = a1 y + a2 y² + a3 y³`.
pub fn series_coefficients(model: &LocalVolFn, s0: f64) -> Result<[f64; 3]> {
    check_spot(s0)?;
    let (sig, d1, d2) = model.derivatives(s0)?;
    let a1 = 1.0 / sig;
    let a2 = -0.5 * s0 * d1 / (sig * sig);
    let a3 = -s0 * d1 / (6.0 * sig * sig) + s0 * s0 * d1 * d1 / (3.0 * sig.powi(3)) - s0 * s0 * d2 / (6.0 * sig * sig);
    let b = invert_power_series(&[a1, a2, a3])?;
    let (b1, r2, r3) = (b[0], b[1] / (b[0] * b[0]), b[2] / b[0].powi(3));
    let scale = 1.0 / (b1 * b1);
    Ok([
        scale * X_COEFFS[0],
        scale * (X_COEFFS[1] - 18.0 / 5.0 * r2),
        scale * (X_COEFFS[2] + 117.0 / 175.0 * r2 + 1872.0 / 175.0 * r2 * r2 - 162.0 / 35.0 * r3),
    ])
}

/// Truncated series of `I` in the log-strike through `x^order`, `order ∈ {2, 3, 4}`.
pub fn rate_series(model: &LocalVolFn, s0: f64, x: f64, order: usize) -> Result<f64> {
    if !(2..=4).contains(&order) {
        return Err(Error::domain("series order", order as f64));
    }
    if !x.is_finite() {
        return Err(Error::domain("log-strike", x));
    }
    let c = series_coefficients(model, s0)?;
    Ok(c[..order - 1].iter().rev().fold(0.0, |acc, ci| acc * x + ci) * x * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate_bs::{j_bs_series, j_bs_value};

    fn cev() -> LocalVolFn {
        LocalVolFn::cev(0.3, -0.3, 100.0).unwrap()
    }

    #[test]
    fn empty_interval_gives_zero_pair() {
        let v = LocalVolFn::constant(0.3).unwrap();
        assert_eq!(fg_pair(&v, 100.0, 0.0, Branch::Minus, &QuadConfig::default()).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn constant_vol_pair_matches_closed_forms() {
        let v = LocalVolFn::constant(1.0).unwrap();
        let q = QuadConfig::default();
        for f1 in [0.05, 0.5, 2.0] {
            let phi: f64 = f64::exp(f1);
            let (_, g) = fg_pair(&v, 1.0, f1, Branch::Minus, &q).unwrap();
            let closed = 2.0 * (phi.sqrt() * ((phi - 1.0) / phi).sqrt().atanh() - (phi - 1.0).sqrt());
            assert!((g - closed).abs() < 1e-10 * closed, "f1={f1}");
        }
        for h1 in [0.05, 0.5, 3.0] {
            let chi: f64 = f64::exp(-h1);
            let (f, g) = fg_pair(&v, 1.0, h1, Branch::Plus, &q).unwrap();
            let at = (1.0 / chi - 1.0).sqrt().atan();
            assert!((f - 2.0 / chi.sqrt() * at).abs() < 1e-10 * f, "h1={h1}");
            let gc = 2.0 * ((1.0 - chi).sqrt() - chi.sqrt() * at);
            assert!((g - gc).abs() < 1e-10 * gc, "h1={h1}");
        }
    }

    #[test]
    fn constant_vol_reduces_to_bs() {
        let cfg = LvConfig::default();
        for sigma in [0.2, 1.0] {
            let v = LocalVolFn::constant(sigma).unwrap();
            for m in [0.5, 0.8, 1.25, 2.0] {
                let r = rate_exact(&v, 100.0, 100.0 * m, &cfg).unwrap();
                let bs = j_bs_value(m).unwrap() / (sigma * sigma);
                assert!((r.i - bs).abs() < 1e-8 * bs.max(1.0), "σ={sigma} m={m}: {} vs {bs}", r.i);
                assert!(r.residual.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn atm_is_zero() {
        let r = rate_exact(&cev(), 100.0, 100.0, &LvConfig::default()).unwrap();
        assert_eq!(r.i, 0.0);
        assert!(rate_scan(&cev(), 100.0, 100.0, &LvConfig::default()).is_err());
    }

    #[test]
    fn scan_matches_bs() {
        let v = LocalVolFn::constant(1.0).unwrap();
        let cfg = LvConfig::default();
        for m in [1.3, 0.7] {
            let r = rate_scan(&v, 1.0, m, &cfg).unwrap();
            assert!((r.i - j_bs_value(m).unwrap()).abs() < 1e-6, "m={m}");
            assert!(!r.minimizer_at_boundary);
        }
    }

    #[test]
    fn cev_exact_and_scan_agree() {
        let cfg = LvConfig::default();
        for k in [70.0, 90.0, 120.0, 160.0] {
            let e = rate_exact(&cev(), 100.0, k, &cfg).unwrap();
            let s = rate_scan(&cev(), 100.0, k, &cfg).unwrap();
            assert!((e.i - s.i).abs() < 1e-6 * e.i.max(1.0), "K={k}: {} vs {}", e.i, s.i);
            assert!((e.terminal - s.terminal).abs() < 1e-4);
        }
    }

    #[test]
    fn lagrange_multiplier_sign() {
        let cfg = LvConfig::default();
        assert!(rate_exact(&cev(), 100.0, 120.0, &cfg).unwrap().lambda < 0.0);
        assert!(rate_exact(&cev(), 100.0, 80.0, &cfg).unwrap().lambda > 0.0);
    }

    #[test]
    fn series_reduces_to_bs_for_constant_vol() {
        let v = LocalVolFn::constant(0.3).unwrap();
        for x in [-0.2, 0.0, 0.1] {
            let s = rate_series(&v, 100.0, x, 4).unwrap();
            assert!((s - j_bs_series(x, 3).unwrap() / 0.09).abs() < 1e-14);
        }
    }

    #[test]
    fn series_matches_explicit_form() {
        let v = LocalVolFn::tabulated(vec![60.0, 90.0, 110.0, 150.0], vec![0.45, 0.33, 0.28, 0.25]).unwrap();
        for model in [cev(), v] {
            let s0 = 100.0;
            let (sig, d1, d2) = model.derivatives(s0).unwrap();
            let s = s0 * d1 / sig;
            let c = series_coefficients(&model, s0).unwrap();
            let expected = [
                1.5 / (sig * sig),
                (-0.3 - 1.8 * s) / (sig * sig),
                (109.0 / 1400.0 - 153.0 / 350.0 * s + 333.0 / 175.0 * s * s - 27.0 / 35.0 * s0 * s0 * d2 / sig) / (sig * sig),
            ];
            for (a, b) in c.iter().zip(expected) {
                assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn cev_series_small_x() {
        let x: f64 = 0.1;
        let exact = rate_exact(&cev(), 100.0, 100.0 * x.exp(), &LvConfig::default()).unwrap().i;
        let s = rate_series(&cev(), 100.0, x, 4).unwrap();
        assert!((s - exact).abs() < 0.01 * exact);
        assert_eq!(rate_series(&cev(), 100.0, 0.0, 4).unwrap(), 0.0);
        assert!(rate_series(&cev(), 100.0, 0.1, 5).is_err());
    }

    #[test]
    fn branch_agreement_near_atm() {
        let cfg = LvConfig::default();
        let v = cev();
        let up = rate_exact(&v, 100.0, 100.0 * (1.0 + 1e-4), &cfg).unwrap().i;
        let dn = rate_exact(&v, 100.0, 100.0 * (1.0 - 1e-4), &cfg).unwrap().i;
        let s_up = rate_series(&v, 100.0, (1.0f64 + 1e-4).ln(), 4).unwrap();
        let s_dn = rate_series(&v, 100.0, (1.0f64 - 1e-4).ln(), 4).unwrap();
        assert!((up - s_up).abs() < 1e-10 && (dn - s_dn).abs() < 1e-10);
        assert!((up - dn).abs() < 1e-8);
    }

    #[test]
    fn path_matches_constant_vol_closed_form() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let model = LocalVolFn::constant(0.3).unwrap();
        for m in [0.75, 1.3] {
            let lv = optimal_path_lv(&model, 100.0, 100.0 * m, &grid, &LvConfig::default()).unwrap();
            let bs = crate::rate_bs::optimal_path_bs(m, &grid).unwrap();
            for (a, b) in lv.iter().zip(&bs) {
                assert!((a - b).abs() < 1e-6, "m={m}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn path_respects_the_average() {
        let n = 2000;
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let model = LocalVolFn::cev(0.3, -0.5, 100.0).unwrap();
        for m in [0.8, 1.25] {
            let f = optimal_path_lv(&model, 100.0, 100.0 * m, &grid, &LvConfig::default()).unwrap();
            let avg: f64 = f.windows(2).map(|w| 0.5 * (w[0].exp() + w[1].exp())).sum::<f64>() / n as f64;
            assert!((avg - m).abs() < 1e-5, "m={m}: {avg}");
            assert_eq!(f[0], 0.0);
        }
    }
}
