//! Fixed-step RK4 integration and shooting for two-point boundary value problems.

use super::root::{find_root, find_root_with, RootConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvpConfig {
    /// Initial number of RK4 steps on `[0, 1]`.
    pub steps: usize,
    /// Step doubling continues until the terminal-state change is below this.
    pub richardson_tol: f64,
    pub max_steps: usize,
    pub root: RootConfig,
}

impl Default for BvpConfig {
    fn default() -> Self {
        Self {
            steps: 400,
            richardson_tol: 1e-10,
            max_steps: 6400,
            root: RootConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn terminal(&self) -> &[f64; N] {
        self.states.last().expect("trajectory has at least one state")
    }

    /// Component `i` along the grid.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shot<const N: usize> {
    /// Converged shooting parameter.
    pub parameter: f64,
    pub trajectory: Trajectory<N>,
    pub residual: f64,
    /// Max-norm change of the terminal state under step halving, divided by 15.
    pub richardson_error: f64,
    pub steps: usize,
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * k[i])
}

#[inline]
fn rk4_step<const N: usize, F>(rhs: &F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = rhs(t + h, &axpy(y, h, &k3));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Terminal state at `t = 1`, or `None` if the solution leaves the finite range.
pub fn terminal_rk4<const N: usize, F>(rhs: &F, y0: [f64; N], steps: usize) -> Option<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let h = 1.0 / steps as f64;
    let mut y = y0;
    for i in 0..steps {
        y = rk4_step(rhs, i as f64 * h, &y, h);
        if y.iter().any(|v| !v.is_finite()) {
            return None;
        }
    }
    Some(y)
}

/// Dense RK4 solution on the uniform grid `t_i = i / steps`.
pub fn integrate_rk4<const N: usize, F>(rhs: &F, y0: [f64; N], steps: usize) -> Option<Trajectory<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let h = 1.0 / steps as f64;
    let mut states = Vec::with_capacity(steps + 1);
    states.push(y0);
    let mut y = y0;
    for i in 0..steps {
        y = rk4_step(rhs, i as f64 * h, &y, h);
        if y.iter().any(|v| !v.is_finite()) {
            return None;
        }
        states.push(y);
    }
    let times = (0..=steps).map(|i| i as f64 * h).collect();
    Some(Trajectory { times, states })
}

fn max_diff<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Shooting on a scalar parameter `p` entering the initial state.
///
/// `residual` of the terminal state must change sign across `bracket`. The
/// step count starts at `cfg.steps` and doubles while the Richardson estimate
/// exceeds `cfg.richardson_tol`, up to `cfg.max_steps`.
pub fn shoot_bvp<const N: usize, F, I, R>(rhs: F, init: I, residual: R, bracket: (f64, f64), cfg: &BvpConfig) -> Result<Shot<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    I: Fn(f64) -> [f64; N],
    R: Fn(&[f64; N]) -> f64,
{
    if cfg.steps < 1 || cfg.max_steps < cfg.steps {
        return Err(Error::InvalidConfig(format!("{cfg:?}")));
    }
    let mut steps = cfg.steps;
    let mut previous: Option<f64> = None;
    loop {
        let res = |p: f64| terminal_rk4(&rhs, init(p), steps).map_or(f64::NAN, |y| residual(&y));
        let p = match (find_root(res, bracket.0, bracket.1, &cfg.root), previous) {
            (Ok(p), _) => p,
            // a root on the bracket edge can step outside it as the grid is refined
            (Err(Error::NoSignChange { .. }), Some(q)) => {
                let mut w = 1e-8 * (1.0 + q.abs());
                let mut found = None;
                for _ in 0..20 {
                    let (flo, fhi) = (res(q - w), res(q + w));
                    if flo * fhi <= 0.0 {
                        found = Some(find_root_with(res, q - w, q + w, flo, fhi, &cfg.root)?);
                        break;
                    }
                    w *= 4.0;
                }
                found.ok_or(Error::domain("shooting parameter (root lost on refinement)", q))?
            }
            (Err(e), _) => return Err(e),
        };
        previous = Some(p);
        let coarse = terminal_rk4(&rhs, init(p), steps).ok_or(Error::domain("shooting parameter", p))?;
        let fine = terminal_rk4(&rhs, init(p), 2 * steps).ok_or(Error::domain("shooting parameter", p))?;
        let richardson_error = max_diff(&coarse, &fine) / 15.0;
        if richardson_error <= cfg.richardson_tol || 2 * steps > cfg.max_steps {
            let trajectory = integrate_rk4(&rhs, init(p), steps).ok_or(Error::domain("shooting parameter", p))?;
            return Ok(Shot {
                parameter: p,
                residual: residual(trajectory.terminal()),
                trajectory,
                richardson_error,
                steps,
            });
        }
        steps *= 2;
    }
}

/// `f'' = acc(t, f, f')` with `f(0) = f0`, shooting on `f'(0)` against
/// `residual(f(1), f'(1))`.
pub fn shoot_second_order<A, R>(acc: A, f0: f64, residual: R, bracket: (f64, f64), cfg: &BvpConfig) -> Result<Shot<2>>
where
    A: Fn(f64, f64, f64) -> f64,
    R: Fn(f64, f64) -> f64,
{
    shoot_bvp(
        |t, y: &[f64; 2]| [y[1], acc(t, y[0], y[1])],
        |p| [f0, p],
        |y| residual(y[0], y[1]),
        bracket,
        cfg,
    )
}
