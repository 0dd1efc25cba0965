//! Numerical kernels shared by the rate-function solvers.

pub mod bvp;
pub mod quad;
pub mod root;
pub mod series;

pub use bvp::{integrate_rk4, shoot_bvp, shoot_second_order, terminal_rk4, BvpConfig, Shot, Trajectory};
pub use quad::{integrate, integrate_sqrt_singular, QuadConfig, Quadrature, SingularEnd};
pub use root::{expand_bracket, find_root, find_root_with, RootConfig};
pub use series::{compose, eval_no_constant, invert_power_series};
