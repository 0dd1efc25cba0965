//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's solvers: roots come from plain
//! bisection and the variational oracle is a direct finite-dimensional
//! constrained minimisation.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "bisection needs a sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Black–Scholes Asian rate at moneyness `m` from the two transcendental
/// branches, solved by bisection.
pub fn j_bs_bisect(m: f64) -> f64 {
    if m == 1.0 {
        return 0.0;
    }
    if m > 1.0 {
        let b = bisect(|b| b.sinh() / b - m, 1e-9, 2.0 * (2.0 * m).ln() + 5.0);
        0.5 * b * b - b * (0.5 * b).tanh()
    } else {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let xi = bisect(|x| (2.0 * x).sin() / (2.0 * x) - m, 1e-9, half_pi - 1e-15);
        2.0 * xi * (xi.tan() - xi)
    }
}

/// Power-law volatility along the path, `σ(S0 e^f) = a e^{βf}`.
#[derive(Debug, Clone, Copy)]
pub struct PowerVol {
    pub a: f64,
    pub beta: f64,
}

impl PowerVol {
    /// `G(f) = ∫_0^f dz/σ(S0 e^z)`, the coordinate in which the action is flat.
    fn g_of_f(&self, f: f64) -> f64 {
        if self.beta == 0.0 {
            f / self.a
        } else {
            -(-self.beta * f).exp_m1() / (self.a * self.beta)
        }
    }

    fn f_of_g(&self, g: f64) -> f64 {
        if self.beta == 0.0 {
            self.a * g
        } else {
            -(-self.a * self.beta * g).ln_1p() / self.beta
        }
    }
}

/// Side condition on the discretised path.
#[derive(Debug, Clone, Copy)]
pub enum Target {
    /// `∫ e^f = m`.
    Fixed(f64),
    /// `∫ e^f = κ e^{f(1)}`.
    Floating(f64),
}

/// Minimum of `½ Σ (ΔG_i)²/Δt` over paths `f_0 = 0, f_1..f_n` on a uniform
/// grid of `[0, 1]`, with `∫ e^f` taken by the trapezoidal rule.
///
/// Solves the KKT system for the path and one multiplier by damped Newton.
pub fn discrete_path_rate(vol: PowerVol, m: f64, n: usize) -> f64 {
    discrete_path_min(vol, Target::Fixed(m), n)
}

pub fn discrete_path_min(vol: PowerVol, target: Target, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let w = |i: usize| if i == n { 0.5 } else { 1.0 };
    let (fixed, kappa) = match target {
        Target::Fixed(m) => (m, 0.0),
        Target::Floating(k) => (0.0, k),
    };

    // start from a linear log-path meeting the continuous constraint
    let s = match target {
        Target::Fixed(m) if (m - 1.0).abs() > 1e-14 => {
            bisect(|s| if s == 0.0 { 1.0 - m } else { s.exp_m1() / s - m }, -60.0, 60.0)
        }
        Target::Floating(k) if (k - 1.0).abs() > 1e-14 => {
            bisect(|s| if s == 0.0 { 1.0 - k } else { -(-s).exp_m1() / s - k }, -60.0, 60.0)
        }
        _ => 0.0,
    };
    let mut g = DVector::from_fn(n, |i, _| vol.g_of_f(s * (i + 1) as f64 * h));

    let constraint = |g: &DVector<f64>| {
        let fn_ = vol.f_of_g(g[n - 1]);
        h * (0.5 + (0..n).map(|i| w(i + 1) * vol.f_of_g(g[i]).exp()).sum::<f64>()) - fixed - kappa * fn_.exp()
    };
    let energy = |g: &DVector<f64>| {
        let mut e = 0.0;
        let mut prev = 0.0;
        for i in 0..n {
            e += (g[i] - prev).powi(2);
            prev = g[i];
        }
        0.5 * e / h
    };
    let grad_e = |g: &DVector<f64>| {
        DVector::from_fn(n, |i, _| {
            let prev = if i == 0 { 0.0 } else { g[i - 1] };
            let next = if i + 1 < n { g[i + 1] } else { g[i] };
            (2.0 * g[i] - prev - next) / h
        })
    };
    // dC/dg and d²C/dg² via e^f f'(g) = a e^{(1+β)f}
    let c_derivs = |g: &DVector<f64>| {
        let mut c1 = DVector::zeros(n);
        let mut c2 = DVector::zeros(n);
        for i in 0..n {
            let f = vol.f_of_g(g[i]);
            let mut weight = h * w(i + 1);
            if i + 1 == n {
                weight -= kappa;
            }
            c1[i] = weight * vol.a * ((1.0 + vol.beta) * f).exp();
            c2[i] = weight * vol.a * vol.a * (1.0 + vol.beta) * ((1.0 + 2.0 * vol.beta) * f).exp();
        }
        (c1, c2)
    };
    let kkt = |g: &DVector<f64>, mu: f64| {
        let (c1, _) = c_derivs(g);
        let mut r = DVector::zeros(n + 1);
        r.rows_mut(0, n).copy_from(&(grad_e(g) - c1 * mu));
        r[n] = constraint(g);
        r
    };

    let (c1, _) = c_derivs(&g);
    let mut mu = grad_e(&g).dot(&c1) / c1.dot(&c1);
    let mut res = kkt(&g, mu);
    for _ in 0..200 {
        let (c1, c2) = c_derivs(&g);
        let mut jac = DMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            jac[(i, i)] = if i + 1 < n { 2.0 / h } else { 1.0 / h } - mu * c2[i];
            if i > 0 {
                jac[(i, i - 1)] = -1.0 / h;
                jac[(i - 1, i)] = -1.0 / h;
            }
            jac[(i, n)] = -c1[i];
            jac[(n, i)] = c1[i];
        }
        let step = jac.lu().solve(&(-&res)).expect("singular KKT matrix");
        let norm0 = res.norm();
        let mut t = 1.0;
        loop {
            let g_try = &g + step.rows(0, n) * t;
            let mu_try = mu + step[n] * t;
            if g_try.iter().all(|&x| vol.f_of_g(x).is_finite()) {
                let r_try = kkt(&g_try, mu_try);
                if r_try.norm() < norm0 || t < 1e-6 {
                    g = g_try;
                    mu = mu_try;
                    res = r_try;
                    break;
                }
            }
            t *= 0.5;
        }
        if step.norm() * t < 1e-13 || res.norm() < 1e-14 {
            break;
        }
    }
    assert!(res.norm() < 1e-9, "KKT residual {} did not converge", res.norm());
    energy(&g)
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}
