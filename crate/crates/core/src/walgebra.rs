//! Minimal-model side of the correspondence.
//!
//! Each cyclic partition `b` gives a highest weight `Λ_b = P_{1⊥} ψ(b)` of the
//! `(K, K+N)` minimal model of `W_K`, where `ψ(b)_i = N - (b_1 + ... + b_i)`.
//! The effective central charge has the closed form
//! `c_eff = K - 1 - 12K/(K+N) ‖Λ - (N/K) ρ‖²`, and the dictionary with the
//! Higgs side is `μ = (K - 1 - c_eff)/12`, checked here in exact arithmetic.
//!
//! `c` and `h` are never computed separately.

use num_traits::Zero;
use serde::Serialize;

use crate::combinatorics::{b_matrix, enumerate_cyclic_partitions, mu_exact, parabolic_weights_of, CyclicPartition};
use crate::error::Result;
use crate::rational::{format_ratio, int, rat, ratio_string, Rational, RationalMatrix, RationalVector};

/// `ψ(b) = (n_1..n_K)`, `n_i = N - Σ_{j≤i} b_j`. The last entry is always 0.
pub fn psi_of(parts: &[u32]) -> RationalVector {
    let n: i64 = parts.iter().map(|&b| i64::from(b)).sum();
    let mut running = 0i64;
    RationalVector::from_integers(parts.iter().map(|&b| {
        running += i64::from(b);
        n - running
    }))
}

pub fn psi(p: &CyclicPartition) -> RationalVector {
    psi_of(p.parts())
}

/// `ρ = ½ (K-1, K-3, ..., 1-K)`.
pub fn weyl_vector(k: u32) -> RationalVector {
    let k = i64::from(k);
    (1..=k).map(|i| rat(k + 1 - 2 * i, 2)).collect()
}

pub fn highest_weight_of(parts: &[u32]) -> RationalVector {
    psi_of(parts).project_sum_zero()
}

/// `Λ_b = P_{1⊥} ψ(b)`.
pub fn highest_weight(p: &CyclicPartition) -> RationalVector {
    highest_weight_of(p.parts())
}

/// `2K (Λ - (N/K) ρ)`, an integer vector: `2Kψ_i - 2Σψ - N(K + 1 - 2i)` (1-based i).
fn scaled_shifted_weight(parts: &[u32]) -> Vec<i64> {
    let k = parts.len() as i64;
    let n: i64 = parts.iter().map(|&b| i64::from(b)).sum();
    let mut running = 0i64;
    let psi: Vec<i64> = parts
        .iter()
        .map(|&b| {
            running += i64::from(b);
            n - running
        })
        .collect();
    let total: i64 = psi.iter().sum();
    psi.iter()
        .enumerate()
        .map(|(idx, &p)| 2 * k * p - 2 * total - n * (k + 1 - 2 * (idx as i64 + 1)))
        .collect()
}

/// `Λ - (N/K) ρ` for a given ordered tuple.
fn shifted_weight(parts: &[u32]) -> RationalVector {
    let k = parts.len() as u32;
    let n: u32 = parts.iter().sum();
    let rho = weyl_vector(k).scale(&rat(i64::from(n), i64::from(k)));
    &highest_weight_of(parts) - &rho
}

pub fn c_eff_of(parts: &[u32]) -> Rational {
    let k = parts.len() as i64;
    let n: i64 = parts.iter().map(|&b| i64::from(b)).sum();
    // 12K/(K+N) · ‖w‖²/4K² with w = 2K(Λ - (N/K)ρ)
    let sq: i64 = scaled_shifted_weight(parts).iter().map(|w| w * w).sum();
    int(k - 1) - rat(3 * sq, k * (k + n))
}

/// Effective central charge of `Λ_b`.
pub fn c_eff(p: &CyclicPartition) -> Rational {
    c_eff_of(p.parts())
}

/// `(K - 1 - c_eff)/12`, the value μ should take under the dictionary.
pub fn mu_from_c_eff(k: u32, c_eff: &Rational) -> Rational {
    (int(i64::from(k) - 1) - c_eff) / int(12)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalModelRep {
    #[serde(flatten)]
    pub partition: CyclicPartition,
    pub psi: RationalVector,
    pub lambda: RationalVector,
    #[serde(with = "ratio_string")]
    pub c_eff: Rational,
}

pub fn minimal_model_rep(p: &CyclicPartition) -> MinimalModelRep {
    MinimalModelRep {
        partition: p.clone(),
        psi: psi(p),
        lambda: highest_weight(p),
        c_eff: c_eff(p),
    }
}

/// Both sides of `P_{1⊥} ψ(b) - (N/K) ρ = -M B b`, computed independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightAlphaRelation {
    pub lhs: RationalVector,
    pub rhs: RationalVector,
    pub equal: bool,
    /// `(α_{i+1})_i` with `α = -B b`.
    pub shifted_alpha: RationalVector,
    /// `Λ - (N/K)ρ = +α_{i+1}` componentwise (what the vector identity forces).
    pub matches_plus_shifted_alpha: bool,
    /// `Λ - (N/K)ρ = -α_{i+1}` componentwise (the sign as printed in the remark).
    pub matches_minus_shifted_alpha: bool,
}

/// Works on the ordered tuple, so any rotation can be checked, not just the canonical one.
pub fn weight_alpha_relation_of(parts: &[u32]) -> WeightAlphaRelation {
    let k = parts.len() as u32;
    let lhs = shifted_weight(parts);
    let b = RationalVector::from_integers(parts.iter().map(|&x| i64::from(x)));
    let rhs = -&RationalMatrix::cyclic_shift(k as usize).mul_vec(&b_matrix(k).mul_vec(&b));
    let shifted_alpha = parabolic_weights_of(parts).shift_left();
    WeightAlphaRelation {
        equal: lhs == rhs,
        matches_plus_shifted_alpha: lhs == shifted_alpha,
        matches_minus_shifted_alpha: lhs == -&shifted_alpha,
        lhs,
        rhs,
        shifted_alpha,
    }
}

pub fn weight_alpha_relation(p: &CyclicPartition) -> WeightAlphaRelation {
    weight_alpha_relation_of(p.parts())
}

/// One row of the dictionary table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DictionaryRow {
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub b: Vec<u32>,
    pub alpha: RationalVector,
    #[serde(with = "ratio_string")]
    pub mu: Rational,
    pub lambda: RationalVector,
    #[serde(with = "ratio_string")]
    pub c_eff: Rational,
    pub check: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DictionaryReport {
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub rows: Vec<DictionaryRow>,
    pub pass: bool,
}

impl DictionaryReport {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.check).count()
    }

    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let header = ["K", "N", "b", "alpha", "mu", "lambda", "c_eff", "check"];
        let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for r in &self.rows {
            cells.push(vec![
                r.k.to_string(),
                r.n.to_string(),
                format!("({})", r.b.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
                format!("({})", r.alpha.to_strings().join(",")),
                format_ratio(&r.mu),
                format!("({})", r.lambda.to_strings().join(",")),
                format_ratio(&r.c_eff),
                if r.check { "pass" } else { "FAIL" }.to_string(),
            ]);
        }
        render_table(&cells)
    }
}

pub fn render_table(cells: &[Vec<String>]) -> String {
    let ncols = cells.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..ncols)
        .map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Checks `μ = (K - 1 - c_eff)/12` exactly for every class of `(K, N)`.
pub fn verify_dictionary(k: u32, n: u32) -> Result<DictionaryReport> {
    let rows: Vec<DictionaryRow> = enumerate_cyclic_partitions(k, n)?
        .iter()
        .map(|p| {
            let mu = mu_exact(p);
            let c = c_eff(p);
            DictionaryRow {
                k,
                n,
                b: p.parts().to_vec(),
                alpha: parabolic_weights_of(p.parts()),
                check: mu == mu_from_c_eff(k, &c),
                mu,
                lambda: highest_weight(p),
                c_eff: c,
            }
        })
        .collect();
    let pass = !rows.is_empty() && rows.iter().all(|r| r.check);
    Ok(DictionaryReport { k, n, rows, pass })
}

/// `‖Λ - (N/K)ρ‖² - ‖B b‖²`; zero for every ordered tuple.
pub fn norm_identity_defect(parts: &[u32]) -> Rational {
    let b = RationalVector::from_integers(parts.iter().map(|&x| i64::from(x)));
    let bb = b_matrix(parts.len() as u32).mul_vec(&b);
    let d = shifted_weight(parts).norm_sq() - bb.norm_sq();
    debug_assert!(d.is_zero());
    d
}
