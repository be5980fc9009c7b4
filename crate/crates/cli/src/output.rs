//! Rendering of reports as JSON, CSV or aligned text tables.

use std::fmt::Write as _;

use serde::Serialize;
use tmc::curvature::{CurvatureReport, Table1Row};
use tmc::verify::CheckRow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub fn json<S: Serialize + ?Sized>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Six significant digits, for human-facing tables.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (5 - mag) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let cells: Vec<String> = cells.zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    };
    line(&mut out, &mut header.iter().copied());
    for r in rows {
        line(&mut out, &mut r.iter().map(String::as_str));
    }
    out
}

pub fn report(r: &CurvatureReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => r.to_csv(),
        Format::Table => {
            let rows: Vec<Vec<String>> = r
                .values
                .iter()
                .map(|v| {
                    vec![
                        v.method.name().to_string(),
                        sig6(v.value),
                        v.stderr.map(sig6).unwrap_or_default(),
                        v.settings.clone(),
                    ]
                })
                .collect();
            let mut out = format!(
                "{}  center = ({}, {}, {})\n",
                r.body, r.center[0], r.center[1], r.center[2]
            );
            out += &table(&["method", "M", "stderr", "settings"], &rows);
            if !r.discrepancies.is_empty() {
                out.push('\n');
                let rows: Vec<Vec<String>> = r
                    .discrepancies
                    .iter()
                    .map(|d| {
                        vec![
                            format!("{} vs {}", d.a.name(), d.b.name()),
                            sig6(d.absolute),
                            sig6(d.relative),
                        ]
                    })
                    .collect();
                out += &table(&["pair", "absolute", "relative"], &rows);
            }
            out
        }
    }
}

pub fn checks(rows: &[CheckRow], format: Format) -> String {
    match format {
        Format::Json => json(rows),
        Format::Csv => {
            let mut out = String::from("check,body,quantity,expected,observed,error,tolerance,pass\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.check.name(),
                    quote(&r.body),
                    quote(&r.quantity),
                    r.expected,
                    r.observed,
                    r.error,
                    r.tolerance,
                    r.pass
                );
            }
            out
        }
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.check.name().to_string(),
                        r.body.clone(),
                        r.quantity.clone(),
                        sig6(r.expected),
                        sig6(r.observed),
                        sig6(r.error),
                        sig6(r.tolerance),
                        if r.pass { "PASS" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect();
            let failed = rows.iter().filter(|r| !r.pass).count();
            let mut out = table(
                &[
                    "check", "body", "quantity", "expected", "observed", "error", "tol", "result",
                ],
                &cells,
            );
            let _ = writeln!(out, "\n{} checks, {} failed", rows.len(), failed);
            out
        }
    }
}

pub fn table1(rows: &[Table1Row<f64>], format: Format) -> String {
    match format {
        Format::Json => json(rows),
        Format::Csv => {
            let mut out = String::from("n,M,M_minus_6pi\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{}", r.n, r.m, r.m_minus_6pi);
            }
            out
        }
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.n.to_string(), sig6(r.m), sig6(r.m_minus_6pi)])
                .collect();
            table(&["n", "M", "M - 6pi"], &cells)
        }
    }
}
