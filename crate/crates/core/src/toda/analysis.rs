//! Post-processing of converged Toda solutions: the regulated norm by
//! quadrature, the decay certificate and the `‖u‖²` Laplacian identity.

use serde::Serialize;

use super::solver::tail_for;
use super::{boundary_slopes, TodaSolution};
use crate::error::Result;

/// `μ` split into the grid quadrature and the analytic tail below `s_min`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MuQuadrature {
    pub value: f64,
    pub interior: f64,
    pub left_tail: f64,
}

/// `μ = (K+N)/(2K) ∫_0^∞ Σ_i (e^{u_i - u_{i+1}} - 1) 2ρ dρ`.
///
/// In `s` the integrand is `2 e^{2s} Σ_i (e^{Δ_i} - 1)`, integrated by the
/// trapezoidal rule on the grid and beyond `s_max` taken as zero. Below
/// `s_min` the integrand follows the asymptotic tail solution matched at
/// `s_min`, which integrates term by term.
pub fn mu_quadrature(sol: &TodaSolution) -> Result<MuQuadrature> {
    sol.require_converged()?;
    let k = sol.k();
    let h = sol.step();
    let density = |j: usize| -> f64 {
        let node = sol.node(j);
        let sum: f64 = (0..k).map(|i| (node[i] - node[(i + 1) % k]).exp_m1()).sum();
        2.0 * (2.0 * sol.grid[j]).exp() * sum
    };
    let m = sol.len();
    let mut interior = 0.5 * (density(0) + density(m - 1));
    for j in 1..m - 1 {
        interior += density(j);
    }
    interior *= h;

    let sigma = boundary_slopes(&sol.partition).to_f64();
    let left_tail = tail_for(&sol.partition).mu_integral(&sol.left_constants, sol.grid[0], &sigma);

    let (kf, nf) = (f64::from(sol.partition.k()), f64::from(sol.partition.n()));
    let factor = (kf + nf) / (2.0 * kf);
    Ok(MuQuadrature {
        value: factor * (interior + left_tail),
        interior: factor * interior,
        left_tail: factor * left_tail,
    })
}

/// Numerical regulated norm; refuses unconverged solutions.
pub fn mu_numeric(sol: &TodaSolution) -> Result<f64> {
    Ok(mu_quadrature(sol)?.value)
}

/// Largest allowed step up in `‖u‖²` between neighbouring nodes before the
/// profile counts as increasing (round-off near the Dirichlet end).
const MONOTONE_SLACK: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Monotonicity {
    pub non_increasing: bool,
    pub max_increase: f64,
}

/// Checks that `‖u(s_j)‖²` is non-increasing in j.
pub fn norm_sq_monotonicity(sol: &TodaSolution) -> Monotonicity {
    let f = sol.norm_sq_profile();
    let max_increase = f
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    Monotonicity {
        non_increasing: max_increase <= MONOTONE_SLACK,
        max_increase,
    }
}

/// Values of `‖u‖²` below this are treated as round-off and excluded from the fit.
pub const DECAY_FLOOR: f64 = 1e-18;
/// Minimum number of nodes for a meaningful fit.
const MIN_FIT_POINTS: usize = 16;
/// Required fraction of the predicted rate.
pub const DECAY_FRACTION: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayStatus {
    Confirmed,
    Violated,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub status: DecayStatus,
    /// Fitted `r` in `‖u‖² ≈ A e^{-rρ}/√ρ` on the window.
    pub fitted_rate: f64,
    /// Fitted rate of a pure exponential `A e^{-rρ}` on the same window.
    pub fitted_rate_plain: f64,
    /// `C_K = 2(1 - cos(2π/K))`.
    pub c_k: f64,
    /// `C_ε = (1 - e^{-2ε})/(2ε)`.
    pub c_eps: f64,
    pub epsilon: f64,
    /// `2c` with `c = (2 C_ε C_K)^{-1/2}`.
    pub predicted_rate_literal: f64,
    /// `√(2 C_ε C_K)`, the rate in the Bessel bound `K_0(√(2 C_ε C_K) ρ)`.
    pub predicted_rate_bessel: f64,
    /// RMS deviation of `log ‖u‖² + ½ log ρ` from its linear fit.
    pub bessel_fit_rms: f64,
    /// RMS deviation of `log ‖u‖²` from its linear fit.
    pub plain_fit_rms: f64,
    pub window_rho: (f64, f64),
    pub window_points: usize,
}

impl DecayReport {
    pub fn confirmed(&self) -> bool {
        self.status == DecayStatus::Confirmed
    }
}

pub fn c_k(k: usize) -> f64 {
    2.0 * (1.0 - (2.0 * std::f64::consts::PI / k as f64).cos())
}

pub fn c_eps(eps: f64) -> f64 {
    if eps < 1e-8 {
        1.0 - eps
    } else {
        -(-2.0 * eps).exp_m1() / (2.0 * eps)
    }
}

struct LineFit {
    slope: f64,
    rms: f64,
}

fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rms = (x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - icpt - slope * a).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    LineFit { slope, rms }
}

/// Fits the outer-half decay of `‖u(ρ)‖²` and compares it with the Bessel-type bound.
pub fn decay_certificate(sol: &TodaSolution) -> Result<DecayReport> {
    sol.require_converged()?;
    let f = sol.norm_sq_profile();
    let m = sol.len();
    let start = m / 2;
    let mut rho = Vec::new();
    let mut log_f = Vec::new();
    for (fj, sj) in f[start..m - 1].iter().zip(&sol.grid[start..m - 1]) {
        // also stops on NaN
        if fj.partial_cmp(&DECAY_FLOOR) != Some(std::cmp::Ordering::Greater) {
            break;
        }
        rho.push(sj.exp());
        log_f.push(fj.ln());
    }
    let ck = c_k(sol.k());
    let epsilon = f[start].sqrt();
    let ce = c_eps(epsilon);
    let literal = 2.0 / (2.0 * ce * ck).sqrt();
    let bessel = (2.0 * ce * ck).sqrt();
    let window_points = rho.len();
    let mut report = DecayReport {
        status: DecayStatus::Indeterminate,
        fitted_rate: f64::NAN,
        fitted_rate_plain: f64::NAN,
        c_k: ck,
        c_eps: ce,
        epsilon,
        predicted_rate_literal: literal,
        predicted_rate_bessel: bessel,
        bessel_fit_rms: f64::NAN,
        plain_fit_rms: f64::NAN,
        window_rho: (sol.grid[start].exp(), rho.last().copied().unwrap_or(f64::NAN)),
        window_points,
    };
    if window_points < MIN_FIT_POINTS || rho[window_points - 1] - rho[0] < 1.0 {
        return Ok(report);
    }
    let corrected: Vec<f64> = log_f.iter().zip(&rho).map(|(y, r)| y + 0.5 * r.ln()).collect();
    let bessel_fit = fit_line(&rho, &corrected);
    let plain_fit = fit_line(&rho, &log_f);
    report.fitted_rate = -bessel_fit.slope;
    report.fitted_rate_plain = -plain_fit.slope;
    report.bessel_fit_rms = bessel_fit.rms;
    report.plain_fit_rms = plain_fit.rms;
    let required = DECAY_FRACTION * literal.max(bessel);
    report.status = if report.fitted_rate >= required {
        DecayStatus::Confirmed
    } else {
        DecayStatus::Violated
    };
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumIdentityReport {
    /// Max over interior nodes of `|½ f_ss - e^{2s} Σ Δ_i(e^{Δ_i} - 1) - ‖u_s‖²|`.
    pub max_mismatch: f64,
    /// Whether `Σ Δ_i (e^{Δ_i} - 1) ≥ 0` at every node.
    pub rhs_nonnegative: bool,
    pub nodes: usize,
}

/// Evaluates `½ Δ_ρ ‖u‖² = Σ (u_i - u_{i+1})(e^{u_i - u_{i+1}} - 1) + ‖du/dρ‖²`
/// on interior nodes. In `s` this reads `½ f_ss = e^{2s} Σ Δ_i(e^{Δ_i} - 1) + ‖u_s‖²`.
pub fn sum_identity_check(sol: &TodaSolution) -> SumIdentityReport {
    let k = sol.k();
    let m = sol.len();
    let h = sol.step();
    let f = sol.norm_sq_profile();
    let mut max_mismatch = 0.0f64;
    let mut rhs_nonnegative = true;
    for j in 0..m {
        let node = sol.node(j);
        let potential: f64 = (0..k)
            .map(|i| {
                let d = node[i] - node[(i + 1) % k];
                d * d.exp_m1()
            })
            .sum();
        if potential < 0.0 {
            rhs_nonnegative = false;
        }
        if j == 0 || j == m - 1 {
            continue;
        }
        let lhs = 0.5 * (f[j - 1] - 2.0 * f[j] + f[j + 1]) / (h * h);
        let grad_sq: f64 = sol
            .u
            .iter()
            .map(|row| {
                let d = (row[j + 1] - row[j - 1]) / (2.0 * h);
                d * d
            })
            .sum();
        let rhs = (2.0 * sol.grid[j]).exp() * potential + grad_sq;
        max_mismatch = max_mismatch.max((lhs - rhs).abs());
    }
    SumIdentityReport {
        max_mismatch,
        rhs_nonnegative,
        nodes: m.saturating_sub(2),
    }
}
