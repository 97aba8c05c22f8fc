//! One function per subcommand. Each returns `Ok(true)` when every check it
//! ran passed, `Ok(false)` when a check failed, and `Err` on invalid input.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};
use toda_fixed_points::combinatorics::{
    check_rank_pole, enumerate_cyclic_partitions, expected_class_count, fixed_point, module_generators, mu_exact,
};
use toda_fixed_points::hitchin::{
    base_dimension, degree_bound, degree_bounds_check, hitchin_section as build_section, q_from_p, verify_model_form,
    MODEL_FORM_TOLERANCE,
};
use toda_fixed_points::poly::{char_poly, Poly};
use toda_fixed_points::rational::{format_ratio, parse_ratio, ratio_to_f64};
use toda_fixed_points::toda::{
    artifact_stem, decay_certificate, sidecar_json, solve_toda as solve, to_csv, TodaConfig,
};
use toda_fixed_points::walgebra::{render_table, verify_dictionary as dictionary, DictionaryReport};
use toda_fixed_points::{CyclicPartition, Rational, SCHEMA};

use crate::output::{emit, pretty_json, write_atomic};
use crate::{Common, Format, HitchinArgs};

/// Relative error in μ accepted by `report --with-toda`.
const TODA_MU_TOLERANCE: f64 = 1e-3;

/// Classes selected by `--K/--N` and the optional `--b`, in canonical order.
fn classes(c: &Common) -> Result<Vec<CyclicPartition>> {
    check_rank_pole(c.k, c.n)?;
    match &c.b {
        Some(parts) => Ok(vec![CyclicPartition::with_shape(c.k, c.n, parts)?]),
        None => Ok(enumerate_cyclic_partitions(c.k, c.n)?),
    }
}

fn tuple(parts: &[u32]) -> String {
    format!("({})", parts.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
}

fn enumeration_json(c: &Common, list: &[CyclicPartition]) -> Result<Value> {
    let rows = list
        .iter()
        .map(|p| {
            let gens = module_generators(p)?;
            let mut row = serde_json::to_value(fixed_point(p))?;
            row["module_generators"] = json!(gens.exponents);
            row["generators_nonnegative"] = json!(gens.nonnegative);
            Ok(row)
        })
        .collect::<Result<Vec<Value>>>()?;
    Ok(json!({
        "schema": SCHEMA,
        "K": c.k,
        "N": c.n,
        "count": list.len(),
        "classes": rows,
    }))
}

pub fn enumerate(c: &Common) -> Result<bool> {
    let list = classes(c)?;
    let doc = match c.format.unwrap_or(Format::Text) {
        Format::Json => pretty_json(&enumeration_json(c, &list)?),
        format => {
            let mut cells = vec![vec!["b".to_string(), "alpha".into(), "mu".into(), "a".into()]];
            for p in &list {
                let fp = fixed_point(p);
                let gens = module_generators(p)?;
                let a: Vec<String> = gens.exponents.iter().map(i64::to_string).collect();
                cells.push(vec![
                    tuple(p.parts()),
                    format!("({})", fp.alpha.to_strings().join(",")),
                    format_ratio(&fp.mu),
                    format!("({})", a.join(",")),
                ]);
            }
            if format == Format::Csv {
                csv_lines(&cells)
            } else {
                render_table(&cells)
            }
        }
    };
    emit(c.out.as_deref(), &doc)?;
    Ok(true)
}

/// Comma-separated rows; cells containing commas are quoted.
fn csv_lines(cells: &[Vec<String>]) -> String {
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row
            .iter()
            .map(|cell| {
                if cell.contains(',') {
                    format!("\"{cell}\"")
                } else {
                    cell.clone()
                }
            })
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn dictionary_for(c: &Common) -> Result<DictionaryReport> {
    let list = classes(c)?;
    let mut report = dictionary(c.k, c.n)?;
    if c.b.is_some() {
        report.rows.retain(|r| list.iter().any(|p| p.parts() == r.b.as_slice()));
        report.pass = !report.rows.is_empty() && report.rows.iter().all(|r| r.check);
    }
    Ok(report)
}

pub fn verify_dictionary(c: &Common) -> Result<bool> {
    let report = dictionary_for(c)?;
    let doc = match c.format.unwrap_or(Format::Text) {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            v["schema"] = json!(SCHEMA);
            pretty_json(&v)
        }
        Format::Csv => {
            let mut cells = vec![["K", "N", "b", "alpha", "mu", "lambda", "c_eff", "check"]
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()];
            for r in &report.rows {
                cells.push(vec![
                    r.k.to_string(),
                    r.n.to_string(),
                    tuple(&r.b),
                    format!("({})", r.alpha.to_strings().join(",")),
                    format_ratio(&r.mu),
                    format!("({})", r.lambda.to_strings().join(",")),
                    format_ratio(&r.c_eff),
                    r.check.to_string(),
                ]);
            }
            csv_lines(&cells)
        }
        Format::Text => format!(
            "{}{}/{} classes satisfy mu = (K - 1 - c_eff)/12\n",
            report.to_text(),
            report.passed(),
            report.rows.len()
        ),
    };
    emit(c.out.as_deref(), &doc)?;
    Ok(report.pass)
}

struct TodaOutcome {
    partition: CyclicPartition,
    sidecar: Value,
    csv: String,
    stem: String,
    converged: bool,
    relative_error: Option<f64>,
}

/// Solves every class in parallel; results come back in the input order.
fn solve_all(list: &[CyclicPartition], cfg: &TodaConfig) -> Result<Vec<TodaOutcome>> {
    cfg.validate()?;
    list.par_iter()
        .map(|p| {
            let sol = solve(p, cfg)?;
            let mut sidecar = sidecar_json(&sol);
            if let Ok(decay) = decay_certificate(&sol) {
                sidecar["decay"] = serde_json::to_value(decay)?;
            }
            Ok(TodaOutcome {
                partition: p.clone(),
                relative_error: sidecar["relative_error"].as_f64(),
                csv: to_csv(&sol),
                stem: artifact_stem(&sol),
                converged: sol.converged,
                sidecar,
            })
        })
        .collect()
}

pub fn solve_toda(c: &Common) -> Result<bool> {
    let list = classes(c)?;
    let cfg = c.toda_config();
    let outcomes = solve_all(&list, &cfg)?;
    let dir = c.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut all_converged = true;
    for o in &outcomes {
        write_atomic(&dir.join(format!("{}.csv", o.stem)), &o.csv)?;
        write_atomic(&dir.join(format!("{}.json", o.stem)), &pretty_json(&o.sidecar))?;
        let mu = o.sidecar["mu_numeric"].as_f64();
        println!(
            "{}  converged={}  mu_numeric={}  mu_exact={}  rel_err={}",
            o.partition,
            o.converged,
            mu.map_or("-".to_string(), |v| format!("{v:.12e}")),
            format_ratio(&mu_exact(&o.partition)),
            o.relative_error.map_or("-".to_string(), |v| format!("{v:.3e}")),
        );
        all_converged &= o.converged;
    }
    if !all_converged {
        eprintln!("some classes did not converge; their artifacts were written for diagnosis");
    }
    Ok(all_converged)
}

fn parse_coefficient(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_ratio(s).with_context(|| format!("bad rational {s:?}")),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .with_context(|| format!("non-integer number {n}; use a \"p/q\" string"))?;
            Ok(Rational::from_integer(i.into()))
        }
        other => bail!("coefficient must be a string or integer, got {other}"),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

pub fn hitchin_section(h: &HitchinArgs) -> Result<bool> {
    check_rank_pole(h.k, h.n)?;
    let input: Value = serde_json::from_str(&read_input(&h.input)?).context("input is not valid JSON")?;
    for (key, flag) in [("K", h.k), ("N", h.n)] {
        if let Some(v) = input.get(key) {
            ensure!(
                v.as_u64() == Some(u64::from(flag)),
                "input {key} = {v} disagrees with --{key} {flag}"
            );
        }
    }
    let q_json = input
        .get("Q")
        .and_then(Value::as_array)
        .context("input needs an array \"Q\"")?;
    let q = q_json
        .iter()
        .map(|coeffs| {
            let coeffs = coeffs.as_array().context("each Q_i must be a coefficient list")?;
            Ok(Poly::new(
                coeffs.iter().map(parse_coefficient).collect::<Result<Vec<_>>>()?,
            ))
        })
        .collect::<Result<Vec<Poly<Rational>>>>()?;
    ensure!(
        q.len() + 1 == h.k as usize,
        "expected Q_2..Q_K ({} polynomials), got {}",
        h.k - 1,
        q.len()
    );

    let matrix = build_section(h.k, h.n, &q)?;
    let cp = char_poly(&matrix);
    let bounds_ok = degree_bounds_check(&cp, h.k, h.n);
    let recovered = q_from_p(h.k, h.n, &cp)?;
    let round_trip = recovered == q;
    let bounds: Vec<i64> = (2..=h.k as usize).map(|i| degree_bound(h.k, h.n, i)).collect();
    let pass = bounds_ok && round_trip;
    let doc = json!({
        "schema": SCHEMA,
        "K": h.k,
        "N": h.n,
        "Q": q,
        "matrix": matrix,
        "char_poly": cp,
        "P": cp.hitchin_coordinates(h.n),
        "degree_bounds": bounds,
        "degree_bounds_check": bounds_ok,
        "round_trip": round_trip,
        "normalization": "commutant basis elements scaled so their first nonzero entry is 1",
        "pass": pass,
    });
    let text = match h.format.unwrap_or(Format::Json) {
        Format::Json => pretty_json(&doc),
        _ => bail!("hitchin-section supports only --format json"),
    };
    emit(h.out.as_deref(), &text)?;
    Ok(pass)
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

pub fn report(c: &Common) -> Result<bool> {
    if let Some(f) = c.format {
        ensure!(f == Format::Json, "report is always a JSON document");
    }
    let list = classes(c)?;

    let mut enumeration = enumeration_json(c, &list)?;
    let expected = expected_class_count(c.k, c.n);
    let enumeration_pass = c.b.is_some() || list.len() as u128 == expected;
    enumeration["expected_count"] = json!(expected.to_string());
    enumeration["status"] = json!(status(enumeration_pass));
    if let Some(obj) = enumeration.as_object_mut() {
        obj.remove("schema");
    }

    let dict = dictionary_for(c)?;
    let mut dictionary_section = serde_json::to_value(&dict)?;
    dictionary_section["status"] = json!(status(dict.pass));

    let forms: Vec<_> = list.iter().map(verify_model_form).collect();
    let forms_pass = forms.iter().all(|r| r.pass);
    let model_form = json!({
        "tolerance": MODEL_FORM_TOLERANCE,
        "classes": forms,
        "status": status(forms_pass),
    });

    let base = json!({ "dimension": base_dimension(c.k, c.n)? });

    let mut pass = enumeration_pass && dict.pass && forms_pass;
    let mut doc = json!({
        "schema": SCHEMA,
        "K": c.k,
        "N": c.n,
        "b": c.b,
        "enumeration": enumeration,
        "dictionary": dictionary_section,
        "model_form": model_form,
        "hitchin_base": base,
    });

    if c.with_toda {
        let cfg = c.toda_config();
        let outcomes = solve_all(&list, &cfg)?;
        let rows: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                let ok = o.converged && o.relative_error.is_some_and(|e| e <= TODA_MU_TOLERANCE);
                json!({
                    "b": o.partition.parts(),
                    "converged": o.converged,
                    "mu_exact": format_ratio(&mu_exact(&o.partition)),
                    "mu_exact_value": ratio_to_f64(&mu_exact(&o.partition)),
                    "mu_numeric": o.sidecar["mu_numeric"],
                    "relative_error": o.relative_error,
                    "residual_norm": o.sidecar["residual_norm"],
                    "decay": o.sidecar.get("decay").cloned().unwrap_or(Value::Null),
                    "status": status(ok),
                })
            })
            .collect();
        let toda_pass = rows.iter().all(|r| r["status"] == "pass");
        pass &= toda_pass;
        doc["toda"] = json!({
            "config": cfg,
            "tolerance": TODA_MU_TOLERANCE,
            "classes": rows,
            "status": status(toda_pass),
        });
    }
    doc["pass"] = json!(pass);
    emit(c.out.as_deref(), &pretty_json(&doc))?;
    Ok(pass)
}
