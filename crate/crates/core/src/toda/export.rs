//! CSV profiles and JSON sidecars for Toda solutions.

use std::fmt::Write as _;

use serde_json::{json, Value};

use super::{boundary_slopes, TodaSolution};
use crate::combinatorics::mu_exact;
use crate::rational::{format_ratio, ratio_to_f64};
use crate::SCHEMA;

/// Fixed leading columns; they are followed by `u_1, ..., u_K`.
pub const CSV_HEADER_PREFIX: &str = "s,rho";

/// File stem for a class, e.g. `toda_K2_N3_b1-2`.
pub fn artifact_stem(sol: &TodaSolution) -> String {
    let p = &sol.partition;
    let parts: Vec<String> = p.parts().iter().map(u32::to_string).collect();
    format!("toda_K{}_N{}_b{}", p.k(), p.n(), parts.join("-"))
}

/// `s, rho, u_1..u_K`, one row per grid node, floats in shortest round-trip form.
pub fn to_csv(sol: &TodaSolution) -> String {
    let k = sol.k();
    let mut out = String::from(CSV_HEADER_PREFIX);
    for i in 1..=k {
        let _ = write!(out, ",u_{i}");
    }
    out.push('\n');
    for (j, s) in sol.grid.iter().enumerate() {
        let _ = write!(out, "{s:e},{:e}", s.exp());
        for row in &sol.u {
            let _ = write!(out, ",{:e}", row[j]);
        }
        out.push('\n');
    }
    out
}

/// Run summary written next to the CSV profile.
pub fn sidecar_json(sol: &TodaSolution) -> Value {
    let exact = mu_exact(&sol.partition);
    let exact_f = ratio_to_f64(&exact);
    let relative_error = sol.mu_numeric.map(|mu| ((mu - exact_f) / exact_f).abs());
    json!({
        "schema": SCHEMA,
        "K": sol.partition.k(),
        "N": sol.partition.n(),
        "b": sol.partition.parts(),
        "converged": sol.converged,
        "residual_norm": sol.residual_norm,
        "iterations": sol.iterations,
        "residual_history": sol.residual_history,
        "mu_numeric": sol.mu_numeric,
        "mu_exact": format_ratio(&exact),
        "mu_exact_value": exact_f,
        "relative_error": relative_error,
        "left_slopes": sol.left_slopes,
        "left_constants": sol.left_constants,
        "tail_truncation": sol.tail_truncation,
        "expected_left_slopes": boundary_slopes(&sol.partition).to_strings(),
        "config": sol.config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::CyclicPartition;
    use crate::toda::{solve_toda, TodaConfig};

    #[test]
    fn csv_and_sidecar_shape() {
        let p = CyclicPartition::new(&[1, 2]).unwrap();
        let cfg = TodaConfig {
            grid_points: 256,
            ..Default::default()
        };
        let sol = solve_toda(&p, &cfg).unwrap();
        let csv = to_csv(&sol);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("s,rho,u_1,u_2"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 256);
        let first: Vec<f64> = rows[0].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(first[0], -6.0);
        assert_eq!(first[2], sol.u[0][0]);
        let side = sidecar_json(&sol);
        assert_eq!(side["schema"], SCHEMA);
        assert_eq!(side["mu_exact"], "1/20");
        assert_eq!(side["converged"], true);
        assert!(side["relative_error"].as_f64().unwrap() < 1e-2);
        assert_eq!(side["config"]["grid_points"], 256);
        assert_eq!(artifact_stem(&sol), "toda_K2_N3_b1-2");
    }
}
