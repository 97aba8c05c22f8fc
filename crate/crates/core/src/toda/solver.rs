//! Damped Newton iteration on the finite-difference Toda system.
//!
//! Unknowns are the tail constants `c_i` (see [`super::tail`]) followed by
//! `u_i(s_j)` for `j = 0..M-2`; the last node carries the Dirichlet value 0.
//! Rows, in block order (interior rows multiplied through by `h²`, the slope
//! row by `h`):
//!
//! - tail matching: `T(c) - u_0 = 0`, the asymptotic solution below `s_min`
//!   must reach the grid value at `s_min`;
//! - slope matching: the one-sided second-order stencil with `u_2` eliminated
//!   through the `j = 1` equation, `(u_1 - u_0) - (h²/2) e^{2s_1} F(u_1) = h T'(c)`;
//! - `1 ≤ j ≤ M-2`: `u_{j-1} - 2u_j + u_{j+1} - h² e^{2s_j} F(u_j) = 0`.
//!
//! The Jacobian is block tridiagonal with K×K blocks and is solved by block
//! Gaussian elimination.

use nalgebra::{DMatrix, DVector};

use super::tail::TailSeries;
use super::{boundary_slopes, tail_rates, TodaConfig, TodaSolution};
use crate::combinatorics::CyclicPartition;
use crate::error::Result;
use crate::rational::ratio_to_f64;

/// Smallest damping factor tried before a Newton step is declared stalled.
const MIN_DAMPING: f64 = 1e-8;
/// Once below tolerance, keep stepping while each step still cuts the
/// residual by at least this factor, so the iterate is polished to round-off.
const POLISH_FACTOR: f64 = 0.1;

pub(crate) fn tail_for(p: &CyclicPartition) -> TailSeries {
    let rates: Vec<f64> = tail_rates(p).iter().map(ratio_to_f64).collect();
    TailSeries::new(&rates)
}

struct Discretization {
    k: usize,
    m: usize,
    h: f64,
    grid: Vec<f64>,
    sigma: Vec<f64>,
    tail: TailSeries,
}

impl Discretization {
    fn new(p: &CyclicPartition, cfg: &TodaConfig) -> Self {
        Self {
            k: p.k() as usize,
            m: cfg.grid_points,
            h: cfg.step(),
            grid: cfg.grid(),
            sigma: boundary_slopes(p).to_f64(),
            tail: tail_for(p),
        }
    }

    /// Tail constants plus nodes `0..M-2`.
    fn unknowns(&self) -> usize {
        self.m * self.k
    }

    /// Length of the state vector: unknowns plus the Dirichlet node.
    fn state_len(&self) -> usize {
        (self.m + 1) * self.k
    }

    /// `e^{u_i - u_{i+1}}` for each i at one node.
    fn exps(&self, node: &[f64]) -> Vec<f64> {
        (0..self.k).map(|i| (node[i] - node[(i + 1) % self.k]).exp()).collect()
    }

    fn forcing(&self, node: &[f64]) -> Vec<f64> {
        let e = self.exps(node);
        (0..self.k).map(|i| e[i] - e[(i + self.k - 1) % self.k]).collect()
    }

    fn forcing_jacobian(&self, node: &[f64], scale: f64, out: &mut DMatrix<f64>) {
        let e = self.exps(node);
        let k = self.k;
        for i in 0..k {
            let next = (i + 1) % k;
            let prev = (i + k - 1) % k;
            out[(i, i)] += scale * (e[i] + e[prev]);
            out[(i, next)] -= scale * e[i];
            out[(i, prev)] -= scale * e[prev];
        }
    }

    fn constants<'a>(&self, state: &'a [f64]) -> &'a [f64] {
        &state[0..self.k]
    }

    fn node<'a>(&self, state: &'a [f64], j: usize) -> &'a [f64] {
        &state[(j + 1) * self.k..(j + 2) * self.k]
    }

    /// Scaled discrete residual, one block per unknown block.
    fn residual(&self, state: &[f64]) -> Vec<f64> {
        let (k, h) = (self.k, self.h);
        let h2 = h * h;
        let mut out = vec![0.0; self.unknowns()];
        let u0 = self.node(state, 0);
        let u1 = self.node(state, 1);
        let tail = self.tail.evaluate(self.constants(state), self.grid[0], &self.sigma);
        let f1 = self.forcing(u1);
        let w1 = (2.0 * self.grid[1]).exp();
        for i in 0..k {
            out[i] = tail.value[i] - u0[i];
            out[k + i] = (u1[i] - u0[i]) - 0.5 * h2 * w1 * f1[i] - h * tail.slope[i];
        }
        for j in 1..self.m - 1 {
            let (prev, cur, next) = (self.node(state, j - 1), self.node(state, j), self.node(state, j + 1));
            let f = self.forcing(cur);
            let w = (2.0 * self.grid[j]).exp();
            for i in 0..k {
                out[(j + 1) * k + i] = prev[i] - 2.0 * cur[i] + next[i] - h2 * w * f[i];
            }
        }
        out
    }

    /// Solves `J δ = rhs` for the Jacobian at `state`.
    fn newton_direction(&self, state: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
        let (k, h) = (self.k, self.h);
        let h2 = h * h;
        let blocks = self.m;
        let identity = DMatrix::<f64>::identity(k, k);
        let tail = self.tail.evaluate(self.constants(state), self.grid[0], &self.sigma);
        let from_rows = |rows: &[Vec<f64>], scale: f64| DMatrix::from_fn(k, k, |i, j| scale * rows[i][j]);

        // (sub, diag, super) for block row b; `None` for sub/super means identity
        let row = |b: usize| -> (Option<DMatrix<f64>>, DMatrix<f64>, Option<DMatrix<f64>>) {
            match b {
                0 => (None, from_rows(&tail.d_value, 1.0), Some(-&identity)),
                1 => {
                    let mut sup = identity.clone();
                    self.forcing_jacobian(self.node(state, 1), -0.5 * h2 * (2.0 * self.grid[1]).exp(), &mut sup);
                    (Some(from_rows(&tail.d_slope, -h)), -&identity, Some(sup))
                }
                _ => {
                    let j = b - 1;
                    let mut diag = -2.0 * &identity;
                    self.forcing_jacobian(self.node(state, j), -h2 * (2.0 * self.grid[j]).exp(), &mut diag);
                    (None, diag, None)
                }
            }
        };

        let mut c_prime: Vec<DMatrix<f64>> = Vec::with_capacity(blocks);
        let mut d_prime: Vec<DVector<f64>> = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let (sub, diag, sup) = row(b);
            let r = DVector::from_column_slice(&rhs[b * k..(b + 1) * k]);
            let (schur, r) = if b == 0 {
                (diag, r)
            } else {
                match &sub {
                    Some(a) => (diag - a * &c_prime[b - 1], r - a * &d_prime[b - 1]),
                    None => (diag - &c_prime[b - 1], r - &d_prime[b - 1]),
                }
            };
            let lu = schur.lu();
            d_prime.push(lu.solve(&r)?);
            if b + 1 < blocks {
                let upper = sup.unwrap_or_else(|| identity.clone());
                c_prime.push(lu.solve(&upper)?);
            } else {
                c_prime.push(DMatrix::zeros(k, k));
            }
        }

        let mut x = vec![0.0; blocks * k];
        let mut next = DVector::<f64>::zeros(k);
        for b in (0..blocks).rev() {
            let xb = if b + 1 == blocks {
                d_prime[b].clone()
            } else {
                &d_prime[b] - &c_prime[b] * &next
            };
            x[b * k..(b + 1) * k].copy_from_slice(xb.as_slice());
            next = xb;
        }
        Some(x)
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(
        0.0f64,
        |acc, x| if x.is_finite() { acc.max(x.abs()) } else { f64::INFINITY },
    )
}

/// Unscaled continuum-form residual `u_i'' - e^{2s} F_i(u)` of a K×M profile on a uniform grid.
///
/// Interior nodes use central differences. Column 0 holds the slope defect
/// `(-3u_0 + 4u_1 - u_2)/(2h) - σ_i` against the exact asymptotic slopes, and
/// column M-1 holds `u_i(s_max)` (the Dirichlet defect).
pub fn toda_residual(u: &[Vec<f64>], grid: &[f64], p: &CyclicPartition) -> Vec<Vec<f64>> {
    let k = p.k() as usize;
    let m = grid.len();
    assert_eq!(u.len(), k, "profile must have K rows");
    assert!(
        m >= 3 && u.iter().all(|row| row.len() == m),
        "profile rows must match the grid"
    );
    let h = grid[1] - grid[0];
    let sigma = boundary_slopes(p).to_f64();
    let node = |j: usize| -> Vec<f64> { u.iter().map(|row| row[j]).collect() };
    let mut out = vec![vec![0.0; m]; k];
    for j in 1..m - 1 {
        let cur = node(j);
        let w = (2.0 * grid[j]).exp();
        for i in 0..k {
            let next = (i + 1) % k;
            let prev = (i + k - 1) % k;
            let f = (cur[i] - cur[next]).exp() - (cur[prev] - cur[i]).exp();
            let second = (u[i][j - 1] - 2.0 * u[i][j] + u[i][j + 1]) / (h * h);
            out[i][j] = second - w * f;
        }
    }
    for i in 0..k {
        out[i][0] = (-3.0 * u[i][0] + 4.0 * u[i][1] - u[i][2]) / (2.0 * h) - sigma[i];
        out[i][m - 1] = u[i][m - 1];
    }
    out
}

/// Solves the boundary-value problem for one fixed point.
///
/// Returns `Err` only for an invalid configuration. A run that does not reach
/// `newton_tol` comes back with `converged = false`, the last iterate and the
/// residual history.
pub fn solve_toda(p: &CyclicPartition, cfg: &TodaConfig) -> Result<TodaSolution> {
    cfg.validate()?;
    let disc = Discretization::new(p, cfg);
    let (k, m) = (disc.k, disc.m);

    // tail constants start at 0; the profile at the ramp σ·min(s, 0)
    let mut state = vec![0.0; disc.state_len()];
    for j in 0..m - 1 {
        let s = disc.grid[j].min(0.0);
        for i in 0..k {
            state[(j + 1) * k + i] = disc.sigma[i] * s;
        }
    }

    let mut residual = disc.residual(&state);
    let mut norm = max_norm(&residual);
    let mut history = vec![norm];
    let mut iterations = 0;
    let mut contracting = true;
    while iterations < cfg.max_newton_iters && (norm > cfg.newton_tol || contracting) {
        let rhs: Vec<f64> = residual.iter().map(|r| -r).collect();
        let Some(delta) = disc.newton_direction(&state, &rhs) else {
            break;
        };
        iterations += 1;
        let mut lambda = cfg.damping;
        let mut accepted = false;
        while lambda >= MIN_DAMPING {
            let mut trial = state.clone();
            for (t, d) in trial.iter_mut().zip(&delta) {
                *t += lambda * d;
            }
            let trial_residual = disc.residual(&trial);
            let trial_norm = max_norm(&trial_residual);
            if trial_norm < norm {
                contracting = trial_norm < POLISH_FACTOR * norm;
                state = trial;
                residual = trial_residual;
                norm = trial_norm;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        history.push(norm);
        if !accepted {
            break;
        }
    }
    let converged = norm <= cfg.newton_tol;

    let left_constants = disc.constants(&state).to_vec();
    let u: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..m).map(|j| state[(j + 1) * k + i]).collect())
        .collect();
    let h = disc.h;
    let left_slopes = u
        .iter()
        .map(|row| (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * h))
        .collect();
    let tail_truncation = disc
        .tail
        .last_order_magnitude(&left_constants, disc.grid[0], &disc.sigma);
    let mut sol = TodaSolution {
        partition: p.clone(),
        config: cfg.clone(),
        grid: disc.grid,
        u,
        residual_norm: norm,
        residual_history: history,
        iterations,
        left_slopes,
        left_constants,
        tail_truncation,
        mu_numeric: None,
        converged,
    };
    if converged {
        sol.mu_numeric = Some(super::analysis::mu_quadrature(&sol)?.value);
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(b: &[u32]) -> CyclicPartition {
        CyclicPartition::new(b).unwrap()
    }

    fn small_cfg(m: usize) -> TodaConfig {
        TodaConfig {
            grid_points: m,
            ..Default::default()
        }
    }

    #[test]
    fn zero_profile_has_zero_interior_residual() {
        let p = part(&[1, 2]);
        let grid = small_cfg(64).grid();
        let u = vec![vec![0.0; 64]; 2];
        let r = toda_residual(&u, &grid, &p);
        for row in &r {
            assert!(row[1..63].iter().all(|x| *x == 0.0));
        }
    }

    #[test]
    fn k2_residual_is_sinh_gordon() {
        let p = part(&[0, 3]);
        let grid = small_cfg(200).grid();
        let v: Vec<f64> = grid.iter().map(|s| 0.3 * (-s).exp().min(5.0) * s.cos()).collect();
        let u = vec![v.clone(), v.iter().map(|x| -x).collect()];
        let r = toda_residual(&u, &grid, &p);
        let h = grid[1] - grid[0];
        for j in 1..199 {
            let second = (v[j - 1] - 2.0 * v[j] + v[j + 1]) / (h * h);
            let expected = second - (2.0 * grid[j]).exp() * ((2.0 * v[j]).exp() - (-2.0 * v[j]).exp());
            assert!((r[0][j] - expected).abs() <= 1e-9 * expected.abs().max(1.0));
            assert!((r[1][j] + expected).abs() <= 1e-9 * expected.abs().max(1.0));
        }
    }

    /// Linearized problem around u = 0 with a manufactured solution: the
    /// right-hand side is the Jacobian applied to a known profile, and the
    /// block solve must return that profile.
    #[test]
    fn manufactured_linear_solution() {
        let p = part(&[0, 1, 3]);
        let cfg = small_cfg(128);
        let disc = Discretization::new(&p, &cfg);
        let (k, m) = (disc.k, disc.m);
        let target: Vec<f64> = (0..m * k)
            .map(|idx| {
                let (b, i) = (idx / k, idx % k);
                (i as f64 - 1.0) * (b as f64 * 0.05).sin() * (1.0 - b as f64 / m as f64)
            })
            .collect();
        let zero = vec![0.0; disc.state_len()];
        // J at 0 applied to target, computed by finite differences of the residual
        let base = disc.residual(&zero);
        let eps = 1e-7;
        let mut perturbed = zero.clone();
        for (x, t) in perturbed.iter_mut().zip(&target) {
            *x += eps * t;
        }
        let jt: Vec<f64> = disc
            .residual(&perturbed)
            .iter()
            .zip(&base)
            .map(|(a, b)| (a - b) / eps)
            .collect();
        let solved = disc.newton_direction(&zero, &jt).unwrap();
        let err = solved
            .iter()
            .zip(&target)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "block solve error {err}");
    }

    #[test]
    fn newton_direction_matches_dense_solve() {
        let p = part(&[0, 1, 3]);
        let cfg = small_cfg(20);
        let disc = Discretization::new(&p, &cfg);
        let (k, m) = (disc.k, disc.m);
        let state: Vec<f64> = (0..disc.state_len())
            .map(|idx| {
                if idx / k == m {
                    0.0
                } else {
                    0.2 * ((idx * 7 % 11) as f64 - 5.0) / 5.0
                }
            })
            .collect();
        let n = disc.unknowns();
        let base = disc.residual(&state);
        let mut dense = DMatrix::<f64>::zeros(n, n);
        let eps = 1e-7;
        for c in 0..n {
            let mut pert = state.clone();
            pert[c] += eps;
            let r = disc.residual(&pert);
            for row in 0..n {
                dense[(row, c)] = (r[row] - base[row]) / eps;
            }
        }
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let expected = dense.lu().solve(&DVector::from_vec(rhs.clone())).unwrap();
        let got = disc.newton_direction(&state, &rhs).unwrap();
        for (a, b) in got.iter().zip(expected.iter()) {
            assert!((a - b).abs() < 1e-4 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn solves_k2_n3_small_class() {
        let sol = solve_toda(&part(&[1, 2]), &TodaConfig::default()).unwrap();
        assert!(sol.converged, "{:?}", sol.residual_history);
        assert!(sol.residual_norm <= 1e-10);
        assert!(sol.u.iter().all(|row| row[row.len() - 1] == 0.0));
        let sup: Vec<f64> = (0..sol.len())
            .map(|j| sol.node(j).iter().fold(0.0f64, |a, x| a.max(x.abs())))
            .collect();
        assert!(sup.windows(2).all(|w| w[1] <= w[0] + 1e-14));
        let sigma = boundary_slopes(&sol.partition).to_f64();
        for (got, want) in sol.left_slopes.iter().zip(&sigma) {
            assert!((got - want).abs() < 1e-3, "{got} vs {want}");
        }
    }

    #[test]
    fn unconverged_run_keeps_history() {
        let cfg = TodaConfig {
            grid_points: 64,
            max_newton_iters: 1,
            ..Default::default()
        };
        let sol = solve_toda(&part(&[0, 3]), &cfg).unwrap();
        assert!(!sol.converged);
        assert!(sol.mu_numeric.is_none());
        assert_eq!(sol.residual_history.len(), 2);
        assert!(sol.require_converged().is_err());
    }
}
