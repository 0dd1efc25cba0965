//! Floating-strike rate function `I_f(κ, S0)`.
//!
//! The constrained problem is `min ½∫(f'/σ(S0 e^f))² dt` over paths with
//! `f(0) = 0` and `∫_0^1 e^f dt = κ e^{f(1)}`. In the variable `u = f'/σ` the
//! Euler–Lagrange system is first order:
//!
//! ```text
//! f' = σ u,   u' = λ e^f σ,   f'(1) = λ κ e^{f(1)} σ(S0 e^{f(1)})².
//! ```
//!
//! For fixed `λ` the free-end condition is met by shooting on `f'(0)`; `λ`
//! itself is then fixed by the averaging constraint.

use std::cell::Cell;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::core_model::{LocalVolFn, MarketParams};
use crate::numerics::{find_root_with, shoot_bvp, terminal_rk4, BvpConfig, RootConfig, Trajectory};
use crate::rate_bs::{j_bs_value, solve_beta, solve_xi};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatingConfig {
    pub bvp: BvpConfig,
    /// Grid density of the multiplier scan.
    pub points_per_octave: usize,
    /// Half-width of the first scan window around the seed, in octaves.
    pub initial_octaves: usize,
    pub max_octaves: usize,
    /// Accepted `|∫e^f / (κ e^{f1}) - 1|` at a refined multiplier.
    pub constraint_tol: f64,
}

impl Default for FloatingConfig {
    fn default() -> Self {
        Self {
            bvp: BvpConfig {
                richardson_tol: 1e-11,
                ..BvpConfig::default()
            },
            points_per_octave: 4,
            initial_octaves: 2,
            max_octaves: 40,
            constraint_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloatingMethod {
    BsClosedForm,
    Bvp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatingRateResult {
    pub i_f: f64,
    pub lambda: f64,
    pub f1: f64,
    pub times: Vec<f64>,
    pub path: Vec<f64>,
    pub method: FloatingMethod,
    /// `½∫u² dt` along the returned path; equals `i_f` at an optimum.
    pub energy: f64,
    /// `∫ e^f σ(S0 e^f) dt`.
    pub i_s: f64,
    /// Largest deviation of `½u² - λe^f` from its initial value.
    pub conserved_drift: f64,
    /// Scale of the conserved quantity, `max(|½u²|, |λe^f|)` over the path.
    pub conserved_scale: f64,
    /// `∫e^f / (κ e^{f1}) - 1` at the solution.
    pub constraint_residual: f64,
    /// Number of admissible multipliers found; more than one means the
    /// minimum over them was taken.
    pub roots_found: usize,
}

/// `J(κ) / σ²`.
pub fn rate_floating_bs(kappa: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain("volatility", sigma));
    }
    Ok(j_bs_value(kappa)? / (sigma * sigma))
}

/// `λ = 2 (e^{f1} - 1) / (σ² κ² e^{2 f1})`.
pub fn lambda_bs(kappa: f64, sigma: f64, f1: f64) -> f64 {
    2.0 * f1.exp_m1() / (sigma * sigma * kappa * kappa * (2.0 * f1).exp())
}

/// Terminal value of the constant-volatility optimizer; independent of `σ`.
pub fn terminal_bs(kappa: f64) -> Result<f64> {
    let cfg = RootConfig::default();
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::domain("kappa", kappa));
    }
    if kappa == 1.0 {
        Ok(0.0)
    } else if kappa > 1.0 {
        let b = solve_beta(kappa, &cfg)?;
        Ok(-2.0 * (0.5 * b).cosh().ln())
    } else {
        let xi = solve_xi(kappa, &cfg)?;
        Ok(-2.0 * xi.cos().ln())
    }
}

/// Constant-volatility solution in closed form, path included.
pub fn rate_floating_bs_full(kappa: f64, sigma: f64, grid: &[f64]) -> Result<FloatingRateResult> {
    let i_f = rate_floating_bs(kappa, sigma)?;
    let cfg = RootConfig::default();
    // f = -2 log cosh(c t) with c = β/2 (κ > 1) or f = -2 log cos(ξ t) (κ < 1).
    let path: Vec<f64> = if kappa == 1.0 {
        vec![0.0; grid.len()]
    } else if kappa > 1.0 {
        let c = 0.5 * solve_beta(kappa, &cfg)?;
        grid.iter().map(|&t| -2.0 * (c * t).cosh().ln()).collect()
    } else {
        let xi = solve_xi(kappa, &cfg)?;
        grid.iter().map(|&t| -2.0 * (xi * t).cos().ln()).collect()
    };
    let f1 = terminal_bs(kappa)?;
    Ok(FloatingRateResult {
        i_f,
        lambda: lambda_bs(kappa, sigma, f1),
        f1,
        times: grid.to_vec(),
        path,
        method: FloatingMethod::BsClosedForm,
        energy: i_f,
        i_s: f64::NAN,
        conserved_drift: 0.0,
        conserved_scale: 0.0,
        constraint_residual: 0.0,
        roots_found: 1,
    })
}

type State = [f64; 5];

struct Problem<'a> {
    model: &'a LocalVolFn,
    s0: f64,
    kappa: f64,
    cfg: &'a FloatingConfig,
}

/// Inner solve at a fixed multiplier.
struct Inner {
    p: f64,
    terminal: State,
    trajectory: Trajectory<5>,
}

impl Problem<'_> {
    fn sigma(&self, f: f64) -> f64 {
        self.model.sigma(self.s0 * f.exp())
    }

    /// State `[f, u, ∫e^f, ∫e^f σ, ½∫u²]`.
    fn rhs(&self, lambda: f64) -> impl Fn(f64, &State) -> State + '_ {
        move |_, y| {
            let e = y[0].exp();
            let s = self.sigma(y[0]);
            [s * y[1], lambda * e * s, e, e * s, 0.5 * y[1] * y[1]]
        }
    }

    fn init(&self) -> impl Fn(f64) -> State + '_ {
        let s = self.sigma(0.0);
        move |p| [0.0, p / s, 0.0, 0.0, 0.0]
    }

    /// Free-end residual `u(1) - λ κ e^{f1} σ1`, i.e. the transversality
    /// condition divided by `σ1`.
    fn transversality(&self, lambda: f64) -> impl Fn(&State) -> f64 + '_ {
        move |y| y[1] - lambda * self.kappa * y[0].exp() * self.sigma(y[0])
    }

    fn constraint(&self, y: &State) -> f64 {
        y[2] / (self.kappa * y[0].exp()) - 1.0
    }

    /// Transversality root in `f'(0)` nearest to `p_start`.
    fn solve_inner(&self, lambda: f64, p_start: f64) -> Option<Inner> {
        let rhs = self.rhs(lambda);
        let init = self.init();
        let res = self.transversality(lambda);
        let steps = self.cfg.bvp.steps;
        let eval = |p: f64| terminal_rk4(&rhs, init(p), steps).map_or(f64::NAN, |y| res(&y));

        let r0 = eval(p_start);
        if r0 == 0.0 {
            return self.finish(lambda, (p_start, p_start));
        }
        let scale = 1e-3 * (1.0 + p_start.abs());
        let (mut up_prev, mut dn_prev) = ((p_start, r0), (p_start, r0));
        let (mut up_alive, mut dn_alive) = (true, true);
        for k in 0..60 {
            let step = scale * 2f64.powi(k);
            for (alive, prev, dir) in [(&mut up_alive, &mut up_prev, 1.0), (&mut dn_alive, &mut dn_prev, -1.0)] {
                if !*alive {
                    continue;
                }
                let p = p_start + dir * step;
                let r = eval(p);
                if r.is_nan() {
                    *alive = false;
                    continue;
                }
                if prev.1.is_finite() && prev.1 * r <= 0.0 {
                    let (a, b) = if dir > 0.0 { (prev.0, p) } else { (p, prev.0) };
                    return self.finish(lambda, (a, b));
                }
                *prev = (p, r);
            }
            if !up_alive && !dn_alive {
                break;
            }
        }
        None
    }

    fn finish(&self, lambda: f64, bracket: (f64, f64)) -> Option<Inner> {
        let shot = if bracket.0 == bracket.1 {
            let pad = 1e-9 * (1.0 + bracket.0.abs());
            shoot_bvp(self.rhs(lambda), self.init(), self.transversality(lambda), (bracket.0 - pad, bracket.1 + pad), &self.cfg.bvp)
        } else {
            shoot_bvp(self.rhs(lambda), self.init(), self.transversality(lambda), bracket, &self.cfg.bvp)
        }
        .ok()?;
        Some(Inner {
            p: shot.parameter,
            terminal: *shot.trajectory.terminal(),
            trajectory: shot.trajectory,
        })
    }
}

/// General local-volatility solution by nested shooting.
///
/// Multipliers are scanned on a geometric grid around the constant-volatility
/// seed `λ_BS(κ)` evaluated at `σ(S0)`, continuing the inner solution from
/// node to node. Every sign change of the averaging constraint is refined and
/// the admissible root with the smallest rate is returned.
pub fn rate_floating_lv(model: &LocalVolFn, s0: f64, kappa: f64, cfg: &FloatingConfig) -> Result<FloatingRateResult> {
    if !(s0 > 0.0) || !s0.is_finite() {
        return Err(Error::domain("s0", s0));
    }
    if !(kappa > 0.0) || !kappa.is_finite() || kappa == 1.0 {
        return Err(Error::domain("kappa (floating rate needs kappa != 1)", kappa));
    }
    let prob = Problem { model, s0, kappa, cfg };
    let sigma0 = model.sigma(s0);
    let seed = lambda_bs(kappa, sigma0, terminal_bs(kappa)?);
    let per = cfg.points_per_octave.max(1) as f64;
    let lam_at = |pos: f64| seed * pos.exp2();

    // Nodes sit at `log2(λ / seed)`; each holds the inner slope and constraint.
    type Node = (f64, Option<(f64, f64)>);
    let eval_node = |pos: f64, p_start: f64| -> Option<(f64, f64)> {
        prob.solve_inner(lam_at(pos), p_start).map(|inner| (inner.p, prob.constraint(&inner.terminal)))
    };
    let extend = |nodes: &mut Vec<Node>, from: i64, to: i64, mut p: f64| {
        let dir = if to >= from { 1 } else { -1 };
        let mut j = from;
        while j != to {
            j += dir;
            let r = eval_node(j as f64 / per, p);
            if let Some((pj, _)) = r {
                p = pj;
            }
            nodes.push((j as f64 / per, r));
        }
        p
    };
    // The inner problem can stop having solutions part way between two grid
    // points, so gaps between solvable and unsolvable nodes are bisected.
    let min_gap = 1.0 / (per * 1024.0);
    let refine = |nodes: &mut Vec<Node>| loop {
        nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let gaps: Vec<(f64, f64)> = nodes
            .windows(2)
            .filter(|w| w[1].0 - w[0].0 > min_gap)
            .filter_map(|w| match (w[0].1, w[1].1) {
                (Some((p, _)), None) | (None, Some((p, _))) => Some((0.5 * (w[0].0 + w[1].0), p)),
                _ => None,
            })
            .collect();
        if gaps.is_empty() {
            return;
        }
        for (pos, p) in gaps {
            nodes.push((pos, eval_node(pos, p)));
        }
    };

    let first = eval_node(0.0, 0.0);
    let mut nodes: Vec<Node> = vec![(0.0, first)];
    let p0 = first.map_or(0.0, |r| r.0);
    let mut octaves = cfg.initial_octaves.max(1) as i64;
    let per_i = per as i64;
    let mut p_hi = extend(&mut nodes, 0, octaves * per_i, p0);
    let mut p_lo = extend(&mut nodes, 0, -octaves * per_i, p0);

    let mut tried: Vec<u64> = Vec::new();
    let mut best: Option<FloatingRateResult> = None;
    let mut admissible = 0;
    loop {
        refine(&mut nodes);
        let brackets: Vec<(f64, f64, f64, f64, f64)> = nodes
            .windows(2)
            .filter_map(|w| match (w[0], w[1]) {
                ((a, Some((pa, ca))), (b, Some((_, cb)))) if ca * cb <= 0.0 => Some((a, b, pa, ca, cb)),
                _ => None,
            })
            .filter(|b| !tried.contains(&b.0.to_bits()))
            .collect();
        for (a, b, pa, ca, cb) in brackets {
            tried.push(a.to_bits());
            let warm = Cell::new(pa);
            let outer = |lam: f64| match prob.solve_inner(lam, warm.get()) {
                Some(inner) => {
                    warm.set(inner.p);
                    prob.constraint(&inner.terminal)
                }
                None => f64::NAN,
            };
            let Ok(lambda) = find_root_with(outer, lam_at(a), lam_at(b), ca, cb, &cfg.bvp.root) else {
                continue;
            };
            let Some(inner) = prob.solve_inner(lambda, warm.get()) else {
                continue;
            };
            let c = prob.constraint(&inner.terminal);
            if !(c.abs() <= cfg.constraint_tol) {
                continue;
            }
            admissible += 1;
            let result = assemble(&prob, lambda, inner, c);
            if best.as_ref().map_or(true, |b| result.i_f < b.i_f) {
                best = Some(result);
            }
        }
        if let Some(mut r) = best {
            r.roots_found = admissible;
            return Ok(r);
        }
        if octaves as usize >= cfg.max_octaves {
            return Err(Error::NoSignChange {
                a: lam_at(-octaves as f64),
                b: lam_at(octaves as f64),
                fa: f64::NAN,
                fb: f64::NAN,
            });
        }
        let next = (octaves + 1) * per_i;
        p_hi = extend(&mut nodes, octaves * per_i, next, p_hi);
        p_lo = extend(&mut nodes, -octaves * per_i, -next, p_lo);
        octaves += 1;
    }
}

fn assemble(prob: &Problem<'_>, lambda: f64, inner: Inner, constraint_residual: f64) -> FloatingRateResult {
    let y = inner.terminal;
    let (f1, e1) = (y[0], y[0].exp());
    let s1 = prob.sigma(f1);
    let k = prob.kappa;
    let i_f = lambda * (k - 1.0) * e1 + 0.5 * lambda * lambda * k * k * e1 * e1 * s1 * s1;
    let conserved: Vec<f64> = inner
        .trajectory
        .states
        .iter()
        .map(|s| 0.5 * s[1] * s[1] - lambda * s[0].exp())
        .collect();
    let conserved_drift = conserved.iter().map(|c| (c - conserved[0]).abs()).fold(0.0, f64::max);
    let conserved_scale = inner
        .trajectory
        .states
        .iter()
        .map(|s| (0.5 * s[1] * s[1]).max((lambda * s[0].exp()).abs()))
        .fold(0.0, f64::max);
    FloatingRateResult {
        i_f,
        lambda,
        f1,
        path: inner.trajectory.component(0),
        times: inner.trajectory.times,
        method: FloatingMethod::Bvp,
        energy: y[4],
        i_s: y[3],
        conserved_drift,
        conserved_scale,
        constraint_residual,
        roots_found: 1,
    }
}

/// Closed form for constant volatility, nested shooting otherwise.
pub fn rate_floating(model: &LocalVolFn, s0: f64, kappa: f64, cfg: &FloatingConfig) -> Result<FloatingRateResult> {
    match model.constant_level() {
        Some(sigma) => {
            let grid: Vec<f64> = (0..=cfg.bvp.steps).map(|i| i as f64 / cfg.bvp.steps as f64).collect();
            rate_floating_bs_full(kappa, sigma, &grid)
        }
        None => rate_floating_lv(model, s0, kappa, cfg),
    }
}

/// At-the-money floating price `σ(S0) S0 sqrt(T / (6π))`, call and put alike.
pub fn atm_floating_price(model: &LocalVolFn, market: &MarketParams, maturity: f64) -> Result<f64> {
    if !(maturity > 0.0) || !maturity.is_finite() {
        return Err(Error::domain("maturity", maturity));
    }
    Ok(model.sigma(market.s0) * market.s0 * (maturity / (6.0 * PI)).sqrt())
}
