//! Radial cyclic affine Toda system attached to a fixed point.
//!
//! With the S¹-symmetric harmonic metric `h = diag(e^{u_i})·|z|^{2α_i}`-type
//! ansatz, the Hitchin equation at the fixed point labelled by `b` reduces to
//!
//! ```text
//! (d²/dρ² + (1/ρ) d/dρ) u_i = e^{u_i - u_{i+1}} - e^{u_{i-1} - u_i},
//! ```
//!
//! with `u_i ~ 2α_i log|z|` at the origin and `u_i → 0` at infinity. The
//! solver works in `s = log ρ`, where the equation reads
//! `u_i'' = e^{2s} (e^{u_i - u_{i+1}} - e^{u_{i-1} - u_i})`.

mod analysis;
mod export;
mod solver;
mod tail;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{parabolic_weights, CyclicPartition};
use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational, RationalVector};

pub use analysis::{
    decay_certificate, mu_numeric, mu_quadrature, norm_sq_monotonicity, sum_identity_check, DecayReport, DecayStatus,
    Monotonicity, MuQuadrature, SumIdentityReport,
};
pub use export::{artifact_stem, sidecar_json, to_csv, CSV_HEADER_PREFIX};
pub use solver::{solve_toda, toda_residual};

/// Discretization and Newton parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TodaConfig {
    pub s_min: f64,
    pub s_max: f64,
    pub grid_points: usize,
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub damping: f64,
}

impl Default for TodaConfig {
    fn default() -> Self {
        Self {
            s_min: -6.0,
            s_max: 2.5,
            grid_points: 2048,
            newton_tol: 1e-10,
            max_newton_iters: 100,
            damping: 1.0,
        }
    }
}

impl TodaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.s_min.is_finite() && self.s_max.is_finite()) || self.s_min >= self.s_max {
            return bad(format!("need s_min < s_max, got {} and {}", self.s_min, self.s_max));
        }
        if self.grid_points < 16 {
            return bad(format!("grid_points must be at least 16, got {}", self.grid_points));
        }
        if !(self.newton_tol > 0.0 && self.newton_tol.is_finite()) {
            return bad(format!("newton_tol must be positive, got {}", self.newton_tol));
        }
        if self.max_newton_iters == 0 {
            return bad("max_newton_iters must be positive".into());
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return bad(format!("damping must lie in (0, 1], got {}", self.damping));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.s_max - self.s_min) / (self.grid_points - 1) as f64
    }

    /// Uniform nodes `s_0 = s_min, ..., s_{M-1} = s_max`.
    pub fn grid(&self) -> Vec<f64> {
        let h = self.step();
        let last = self.grid_points - 1;
        (0..self.grid_points)
            .map(|j| {
                if j == last {
                    self.s_max
                } else {
                    self.s_min + h * j as f64
                }
            })
            .collect()
    }

    pub fn with_grid_points(&self, grid_points: usize) -> Self {
        Self {
            grid_points,
            ..self.clone()
        }
    }
}

/// A (possibly unconverged) discrete solution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TodaSolution {
    #[serde(flatten)]
    pub partition: CyclicPartition,
    pub config: TodaConfig,
    /// Nodes in `s = log ρ`.
    pub grid: Vec<f64>,
    /// `u[i][j] = u_{i+1}(s_j)`.
    pub u: Vec<Vec<f64>>,
    /// Max-norm of the discrete residual at the final iterate.
    pub residual_norm: f64,
    pub residual_history: Vec<f64>,
    pub iterations: usize,
    /// One-sided second-order `du_i/ds` at `s_min`.
    pub left_slopes: Vec<f64>,
    /// Additive constants `c_i` of the asymptotics `u_i ≈ σ_i s + c_i` as `s → -∞`.
    pub left_constants: Vec<f64>,
    /// Magnitude of the highest-order terms kept in the tail expansion at `s_min`.
    pub tail_truncation: f64,
    pub mu_numeric: Option<f64>,
    pub converged: bool,
}

impl TodaSolution {
    pub fn k(&self) -> usize {
        self.u.len()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn node(&self, j: usize) -> Vec<f64> {
        self.u.iter().map(|row| row[j]).collect()
    }

    /// `‖u(s_j)‖²` at every node.
    pub fn norm_sq_profile(&self) -> Vec<f64> {
        (0..self.len())
            .map(|j| self.u.iter().map(|row| row[j] * row[j]).sum())
            .collect()
    }

    /// `Σ_i u_i(s_j)` at every node.
    pub fn component_sums(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.u.iter().map(|row| row[j]).sum()).collect()
    }

    /// Left slopes converted to `du_i / d log|z|`.
    pub fn left_slopes_log_z(&self) -> Vec<f64> {
        let (k, n) = (f64::from(self.partition.k()), f64::from(self.partition.n()));
        self.left_slopes.iter().map(|s| s * (k + n) / k).collect()
    }

    pub fn require_converged(&self) -> Result<()> {
        if self.converged {
            Ok(())
        } else {
            Err(Error::NotConverged)
        }
    }
}

/// Radial variable in which the Toda equation has unit coefficients:
/// `ρ = (2K/(K+N)) |z|^{(K+N)/K}`.
pub fn change_of_variables(z_abs: f64, k: u32, n: u32) -> f64 {
    let (k, n) = (f64::from(k), f64::from(n));
    2.0 * k / (k + n) * z_abs.powf((k + n) / k)
}

/// Inverse of [`change_of_variables`].
pub fn z_abs_from_rho(rho: f64, k: u32, n: u32) -> f64 {
    let (k, n) = (f64::from(k), f64::from(n));
    (rho * (k + n) / (2.0 * k)).powf(k / (k + n))
}

/// Exact asymptotic slopes `du_i/ds → 2α_i K/(K+N)` as `s → -∞`.
pub fn boundary_slopes(p: &CyclicPartition) -> RationalVector {
    let factor = rat(2 * i64::from(p.k()), i64::from(p.k() + p.n()));
    parabolic_weights(p).scale(&factor)
}

/// Exponential rates of the forcing terms `e^{2s} e^{u_i - u_{i+1}}` as `s → -∞`:
/// `2 + σ_i - σ_{i+1} = 2K(1 + b_i)/(K+N)`, all positive.
pub fn tail_rates(p: &CyclicPartition) -> Vec<Rational> {
    let denom = i64::from(p.k() + p.n());
    p.parts()
        .iter()
        .map(|&b| int(2 * i64::from(p.k()) * (1 + i64::from(b))) / int(denom))
        .collect()
}
