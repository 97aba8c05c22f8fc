//! Asymptotic solution below `s_min`.
//!
//! As `s → -∞`, `u_i = σ_i s + c_i + w_i(s)` where `w` is a convergent sum of
//! exponentials. Writing `β_i = e^{2s + (σ_i - σ_{i+1}) s + c_i - c_{i+1}} = B_i e^{r_i s}`,
//! the correction solves `w_i'' = β_i e^{w_i - w_{i+1}} - β_{i-1} e^{w_{i-1} - w_i}`,
//! and expands as `w_i = Σ_m W_{i,m} Π_j β_j^{m_j}` over multi-indices `m ≠ 0`.
//! The coefficients `W_{i,m}` do not depend on `c`, so they are computed once
//! per partition by Picard iteration on truncated series; evaluating the tail
//! and its derivatives for given `c` is then a finite sum.

use std::collections::HashMap;

/// Upper bound on the number of monomials kept; the order is lowered for large K.
const MAX_MONOMIALS: usize = 600;
const MAX_ORDER: usize = 10;

pub(crate) struct TailSeries {
    k: usize,
    /// Multi-indices of total order `1..=order`, sorted by order.
    monomials: Vec<Vec<u32>>,
    /// Total order of each monomial.
    degree: Vec<usize>,
    /// Exponent `m·r` of each monomial.
    lambda: Vec<f64>,
    /// `W_{i,m}`.
    w: Vec<Vec<f64>>,
    /// Coefficients of `β_i e^{w_i - w_{i+1}}`.
    forcing: Vec<Vec<f64>>,
}

/// Values of the tail at `s_min` for given constants `c`, with derivatives in `c`.
pub(crate) struct TailEval {
    /// `u_i(s_min)`.
    pub value: Vec<f64>,
    /// `du_i/ds(s_min)`.
    pub slope: Vec<f64>,
    /// `∂ u_i(s_min) / ∂ c_j`.
    pub d_value: Vec<Vec<f64>>,
    /// `∂ du_i/ds(s_min) / ∂ c_j`.
    pub d_slope: Vec<Vec<f64>>,
}

fn binomial(n: usize, r: usize) -> usize {
    (0..r).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn pick_order(k: usize) -> usize {
    (1..=MAX_ORDER)
        .take_while(|&p| binomial(k + p, p) - 1 <= MAX_MONOMIALS)
        .last()
        .unwrap_or(1)
}

impl TailSeries {
    pub(crate) fn new(rates: &[f64]) -> Self {
        let k = rates.len();
        let order = pick_order(k);
        let mut monomials = Vec::new();
        for total in 1..=order {
            let mut current = vec![0u32; k];
            push_with_total(&mut monomials, &mut current, 0, total as u32);
        }
        let degree: Vec<usize> = monomials.iter().map(|m| m.iter().sum::<u32>() as usize).collect();
        let lambda: Vec<f64> = monomials
            .iter()
            .map(|m| m.iter().zip(rates).map(|(&n, r)| f64::from(n) * r).sum())
            .collect();
        let index: HashMap<Vec<u32>, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let algebra = Algebra {
            monomials: &monomials,
            degree: &degree,
            index: &index,
            order,
        };

        let mut w = vec![vec![0.0; monomials.len()]; k];
        let mut forcing = vec![vec![0.0; monomials.len()]; k];
        // each sweep fixes one more order
        for _ in 0..order {
            forcing = (0..k)
                .map(|i| {
                    let omega: Vec<f64> = w[i].iter().zip(&w[(i + 1) % k]).map(|(a, b)| a - b).collect();
                    let exp = algebra.exp(&omega, order - 1);
                    algebra.shift_by_unit(&exp, i)
                })
                .collect();
            w = (0..k)
                .map(|i| {
                    let prev = (i + k - 1) % k;
                    (0..monomials.len())
                        .map(|m| (forcing[i][m] - forcing[prev][m]) / (lambda[m] * lambda[m]))
                        .collect()
                })
                .collect();
        }
        Self {
            k,
            monomials,
            degree,
            lambda,
            w,
            forcing,
        }
    }

    pub(crate) fn order(&self) -> usize {
        self.degree.last().copied().unwrap_or(0)
    }

    /// `log β_i(s_min)` for constants `c`.
    fn log_weights(&self, c: &[f64], s0: f64, sigma: &[f64]) -> Vec<f64> {
        let k = self.k;
        (0..k)
            .map(|i| 2.0 * s0 + (sigma[i] - sigma[(i + 1) % k]) * s0 + c[i] - c[(i + 1) % k])
            .collect()
    }

    fn monomial_values(&self, logs: &[f64]) -> Vec<f64> {
        self.monomials
            .iter()
            .map(|m| m.iter().zip(logs).map(|(&n, z)| f64::from(n) * z).sum::<f64>().exp())
            .collect()
    }

    pub(crate) fn evaluate(&self, c: &[f64], s0: f64, sigma: &[f64]) -> TailEval {
        let k = self.k;
        let x = self.monomial_values(&self.log_weights(c, s0, sigma));
        let mut value: Vec<f64> = (0..k).map(|i| sigma[i] * s0 + c[i]).collect();
        let mut slope = sigma.to_vec();
        let mut d_value = vec![vec![0.0; k]; k];
        let mut d_slope = vec![vec![0.0; k]; k];
        for (i, row) in d_value.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for (mi, m) in self.monomials.iter().enumerate() {
            // ∂ x_m / ∂ c_j = x_m (m_j - m_{j-1})
            let dlog: Vec<f64> = (0..k)
                .map(|j| f64::from(m[j]) - f64::from(m[(j + k - 1) % k]))
                .collect();
            for i in 0..k {
                let term = self.w[i][mi] * x[mi];
                value[i] += term;
                slope[i] += term * self.lambda[mi];
                for j in 0..k {
                    d_value[i][j] += term * dlog[j];
                    d_slope[i][j] += term * self.lambda[mi] * dlog[j];
                }
            }
        }
        TailEval {
            value,
            slope,
            d_value,
            d_slope,
        }
    }

    /// `∫_{-∞}^{s_min} 2 e^{2s} Σ_i (e^{u_i - u_{i+1}} - 1) ds` along the tail.
    pub(crate) fn mu_integral(&self, c: &[f64], s0: f64, sigma: &[f64]) -> f64 {
        let x = self.monomial_values(&self.log_weights(c, s0, sigma));
        let sum: f64 = (0..self.k)
            .map(|i| {
                self.forcing[i]
                    .iter()
                    .zip(&x)
                    .zip(&self.lambda)
                    .map(|((f, x), l)| f * x / l)
                    .sum::<f64>()
            })
            .sum();
        2.0 * sum - self.k as f64 * (2.0 * s0).exp()
    }

    /// Size of the highest-order terms kept, as a truncation indicator.
    pub(crate) fn last_order_magnitude(&self, c: &[f64], s0: f64, sigma: &[f64]) -> f64 {
        let x = self.monomial_values(&self.log_weights(c, s0, sigma));
        let top = self.order();
        (0..self.monomials.len())
            .filter(|&m| self.degree[m] == top)
            .map(|m| (0..self.k).map(|i| (self.w[i][m] * x[m]).abs()).sum::<f64>())
            .sum()
    }
}

fn push_with_total(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, slot: usize, remaining: u32) {
    if slot + 1 == current.len() {
        current[slot] = remaining;
        out.push(current.clone());
        current[slot] = 0;
        return;
    }
    for n in (0..=remaining).rev() {
        current[slot] = n;
        push_with_total(out, current, slot + 1, remaining - n);
    }
    current[slot] = 0;
}

/// Truncated power series in K commuting variables without constant term,
/// stored densely over the monomial list.
struct Algebra<'a> {
    monomials: &'a [Vec<u32>],
    degree: &'a [usize],
    index: &'a HashMap<Vec<u32>, usize>,
    order: usize,
}

impl Algebra<'_> {
    fn product_index(&self, a: usize, b: usize) -> Option<usize> {
        if self.degree[a] + self.degree[b] > self.order {
            return None;
        }
        let sum: Vec<u32> = self.monomials[a]
            .iter()
            .zip(&self.monomials[b])
            .map(|(x, y)| x + y)
            .collect();
        self.index.get(&sum).copied()
    }

    /// Product of two series without constant terms, truncated at `max_order`.
    fn mul(&self, a: &[f64], b: &[f64], max_order: usize) -> Vec<f64> {
        let mut out = vec![0.0; a.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0.0 || self.degree[i] >= max_order {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if self.degree[i] + self.degree[j] > max_order {
                    break;
                }
                if y == 0.0 {
                    continue;
                }
                if let Some(t) = self.product_index(i, j) {
                    out[t] += x * y;
                }
            }
        }
        out
    }

    /// `exp(ω) - 1` truncated at `max_order`, plus the implicit constant 1.
    fn exp(&self, omega: &[f64], max_order: usize) -> (f64, Vec<f64>) {
        let mut total: Vec<f64> = omega
            .iter()
            .zip(self.degree)
            .map(|(x, &d)| if d <= max_order { *x } else { 0.0 })
            .collect();
        let mut power = total.clone();
        for n in 2..=max_order {
            power = self.mul(&power, omega, max_order);
            let inv = 1.0 / (2..=n).map(|v| v as f64).product::<f64>();
            for (t, p) in total.iter_mut().zip(&power) {
                *t += p * inv;
            }
        }
        (1.0, total)
    }

    /// Multiplies `1 + series` by the unit monomial `β_i`.
    fn shift_by_unit(&self, series: &(f64, Vec<f64>), i: usize) -> Vec<f64> {
        let (constant, rest) = series;
        let mut out = vec![0.0; rest.len()];
        let mut unit = vec![0u32; self.monomials[0].len()];
        unit[i] = 1;
        out[self.index[&unit]] += constant;
        for (m, &v) in rest.iter().enumerate() {
            if v == 0.0 || self.degree[m] + 1 > self.order {
                continue;
            }
            let mut shifted = self.monomials[m].clone();
            shifted[i] += 1;
            out[self.index[&shifted]] += v;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        let s = TailSeries::new(&[0.8, 3.2]);
        assert_eq!(s.order(), MAX_ORDER);
        assert_eq!(s.monomials.len(), binomial(2 + MAX_ORDER, MAX_ORDER) - 1);
        let s = TailSeries::new(&[1.0; 6]);
        assert!(s.monomials.len() <= MAX_MONOMIALS);
    }

    #[test]
    fn first_order_coefficients() {
        let rates = [0.8, 3.2];
        let s = TailSeries::new(&rates);
        let e1 = s.index_of(&[1, 0]);
        let e2 = s.index_of(&[0, 1]);
        // w_1'' = β_1 - β_2 at first order
        assert!((s.w[0][e1] - 1.0 / 0.64).abs() < 1e-14);
        assert!((s.w[0][e2] + 1.0 / (3.2 * 3.2)).abs() < 1e-14);
        assert!((s.w[1][e1] + 1.0 / 0.64).abs() < 1e-14);
    }

    /// The truncated series must satisfy the ODE up to the truncation order:
    /// check by finite differences at a point where the weights are small.
    #[test]
    fn series_solves_the_ode() {
        let sigma = [-0.6, 0.6];
        let rates = [2.0 + sigma[0] - sigma[1], 2.0 + sigma[1] - sigma[0]];
        let s = TailSeries::new(&rates);
        let c = [0.3, -0.3];
        let u = |t: f64| s.evaluate(&c, t, &sigma).value;
        let t = -4.0;
        let h = 1e-3;
        let (a, b, d) = (u(t - h), u(t), u(t + h));
        for i in 0..2 {
            let second = (a[i] - 2.0 * b[i] + d[i]) / (h * h);
            let j = (i + 1) % 2;
            let f = (2.0 * t).exp() * ((b[i] - b[j]).exp() - (b[j] - b[i]).exp());
            assert!((second - f).abs() < 1e-6, "{second} vs {f}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let sigma = [-0.5, 0.1, 0.4];
        let rates: Vec<f64> = (0..3).map(|i| 2.0 + sigma[i] - sigma[(i + 1) % 3]).collect();
        let s = TailSeries::new(&rates);
        let c = [0.2, -0.1, 0.05];
        let base = s.evaluate(&c, -3.0, &sigma);
        for j in 0..3 {
            let mut cp = c;
            cp[j] += 1e-6;
            let pert = s.evaluate(&cp, -3.0, &sigma);
            for i in 0..3 {
                let dv = (pert.value[i] - base.value[i]) / 1e-6;
                let ds = (pert.slope[i] - base.slope[i]) / 1e-6;
                assert!((dv - base.d_value[i][j]).abs() < 1e-5);
                assert!((ds - base.d_slope[i][j]).abs() < 1e-5);
            }
        }
    }

    impl TailSeries {
        fn index_of(&self, m: &[u32]) -> usize {
            self.monomials.iter().position(|x| x == m).unwrap()
        }
    }
}
