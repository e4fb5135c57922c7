//! Rendering for the three output formats.
//!
//! JSON output is deterministic: struct fields serialize in declaration
//! order and every collection is an ordered `Vec`.

use std::fmt::Write as _;

use clap::ValueEnum;
use loopcalc_core::exactlin::format_scalar;
use loopcalc_core::stringtop::{LoopAlgebra, LoopClass};
use loopcalc_core::sullivan::HodgeTable;
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Writes to stdout, quietly tolerating a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

pub fn class_string(la: &LoopAlgebra, z: &LoopClass) -> String {
    use loopcalc_core::exactlin::Zero;
    let mut parts = Vec::new();
    for (i, c) in z.coords.iter().enumerate() {
        if !c.is_zero() {
            parts.push(format!("{}·{}", format_scalar(c), la.basis_label(z.p, i)));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Serialize)]
struct ValidationOut<'a> {
    model: &'a str,
    violations: Vec<ViolationOut<'a>>,
}

#[derive(Serialize)]
struct ViolationOut<'a> {
    part: &'a str,
    axiom: &'a str,
    witness: &'a str,
}

pub fn print_validation(name: &str, violations: &[(String, String, String)], format: Format) {
    let mut s = String::new();
    match format {
        Format::Json => {
            let out = ValidationOut {
                model: name,
                violations: violations
                    .iter()
                    .map(|(p, a, w)| ViolationOut {
                        part: p,
                        axiom: a,
                        witness: w,
                    })
                    .collect(),
            };
            let _ = writeln!(s, "{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Csv => {
            let _ = writeln!(s, "part,axiom,witness");
            for (p, a, w) in violations {
                let _ = writeln!(s, "{},{},{}", csv_field(p), csv_field(a), csv_field(w));
            }
        }
        Format::Table => {
            if violations.is_empty() {
                let _ = writeln!(s, "{name}: all axioms hold");
            } else {
                let _ = writeln!(s, "{name}: {} violation(s)", violations.len());
                for (p, a, w) in violations {
                    let _ = writeln!(s, "  [{p}] {a} (witness: {w})");
                }
            }
        }
    }
    emit(&s);
}

#[derive(Serialize)]
struct BettiOut<'a> {
    model: &'a str,
    max_degree: i64,
    rows: Vec<BettiRow>,
}

#[derive(Serialize)]
struct BettiRow {
    degree: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    hochschild: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sullivan: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

pub fn print_betti(
    name: &str,
    n_max: i64,
    hochschild: &Option<Vec<usize>>,
    sullivan: &Option<Vec<usize>>,
    format: Format,
) {
    let rows: Vec<BettiRow> = (0..=n_max)
        .map(|n| {
            let h = hochschild.as_ref().map(|v| v[n as usize]);
            let su = sullivan.as_ref().map(|v| v[n as usize]);
            BettiRow {
                degree: n,
                hochschild: h,
                sullivan: su,
                agree: h.zip(su).map(|(a, b)| a == b),
            }
        })
        .collect();
    let mut s = String::new();
    match format {
        Format::Json => {
            let out = BettiOut {
                model: name,
                max_degree: n_max,
                rows,
            };
            let _ = writeln!(s, "{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Csv => {
            let _ = writeln!(s, "degree,hochschild,sullivan,agree");
            for r in rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    r.degree,
                    r.hochschild.map_or(String::new(), |v| v.to_string()),
                    r.sullivan.map_or(String::new(), |v| v.to_string()),
                    r.agree.map_or(String::new(), |v| v.to_string()),
                );
            }
        }
        Format::Table => {
            let _ = writeln!(s, "dim H^n(L{name}) for n ≤ {n_max}");
            let header = match (hochschild, sullivan) {
                (Some(_), Some(_)) => "  n   hochschild   sullivan   match",
                (Some(_), None) => "  n   hochschild",
                _ => "  n   sullivan",
            };
            let _ = writeln!(s, "{header}");
            for r in rows {
                let mut line = format!("{:3}", r.degree);
                if let Some(h) = r.hochschild {
                    line.push_str(&format!("   {h:10}"));
                }
                if let Some(su) = r.sullivan {
                    line.push_str(&format!("   {su:8}"));
                }
                if let Some(a) = r.agree {
                    line.push_str(if a { "   yes" } else { "   NO" });
                }
                let _ = writeln!(s, "{line}");
            }
        }
    }
    emit(&s);
}

#[derive(Serialize)]
pub struct LoopRows {
    pub unit: String,
    pub basis: Vec<(i64, Vec<String>)>,
    pub products: Vec<(String, String, String)>,
    pub delta: Vec<(String, String)>,
    pub brackets: Vec<(String, String, String)>,
}

#[derive(Serialize)]
struct LoopOut<'a> {
    model: &'a str,
    m: i64,
    max_degree: i64,
    unit: &'a str,
    basis: &'a [(i64, Vec<String>)],
    products: &'a [(String, String, String)],
    delta: &'a [(String, String)],
    brackets: &'a [(String, String, String)],
}

pub fn print_loop_algebra(name: &str, la: &LoopAlgebra, format: Format) {
    let rows = crate::loop_rows(la);
    let mut s = String::new();
    match format {
        Format::Json => {
            let out = LoopOut {
                model: name,
                m: la.m,
                max_degree: la.n_max,
                unit: &rows.unit,
                basis: &rows.basis,
                products: &rows.products,
                delta: &rows.delta,
                brackets: &rows.brackets,
            };
            let _ = writeln!(s, "{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Csv => {
            let _ = writeln!(s, "kind,left,right,value");
            for (p, labels) in &rows.basis {
                let _ = writeln!(s, "basis,{p},,{}", csv_field(&labels.join(" ")));
            }
            let _ = writeln!(s, "unit,,,{}", csv_field(&rows.unit));
            for (x, y, z) in &rows.products {
                let _ = writeln!(s, "product,{x},{y},{}", csv_field(z));
            }
            for (x, z) in &rows.delta {
                let _ = writeln!(s, "delta,{x},,{}", csv_field(z));
            }
            for (x, y, z) in &rows.brackets {
                let _ = writeln!(s, "bracket,{x},{y},{}", csv_field(z));
            }
        }
        Format::Table => {
            let _ = writeln!(s, "loop algebra of {name} (m = {}, N = {})", la.m, la.n_max);
            let _ = writeln!(s, "basis of ℍ_p (dual to degree p+m chain homology):");
            for (p, labels) in &rows.basis {
                let _ = writeln!(s, "  ℍ_{p}: {}", labels.join(", "));
            }
            let _ = writeln!(s, "unit: {}", rows.unit);
            let _ = writeln!(s, "products x • y (nonzero):");
            for (x, y, z) in &rows.products {
                if z != "0" {
                    let _ = writeln!(s, "  {x} • {y} = {z}");
                }
            }
            let _ = writeln!(s, "BV operator Δ (nonzero):");
            for (x, z) in &rows.delta {
                if z != "0" {
                    let _ = writeln!(s, "  Δ({x}) = {z}");
                }
            }
            let _ = writeln!(s, "brackets {{x, y}} (nonzero):");
            for (x, y, z) in &rows.brackets {
                if z != "0" {
                    let _ = writeln!(s, "  {{{x}, {y}}} = {z}");
                }
            }
        }
    }
    emit(&s);
}

#[derive(Serialize)]
struct HodgeOut<'a> {
    model: &'a str,
    max_degree: i64,
    rows: Vec<HodgeRow>,
}

#[derive(Serialize)]
struct HodgeRow {
    degree: i64,
    dims: Vec<usize>,
    row_sum: usize,
}

pub fn print_hodge(name: &str, table: &HodgeTable, format: Format) {
    let p_max = table.max_weight();
    let rows: Vec<HodgeRow> = (0..=table.n_max)
        .map(|n| HodgeRow {
            degree: n,
            dims: (0..=p_max).map(|p| table.dim(n, p)).collect(),
            row_sum: table.row_sum(n),
        })
        .collect();
    let mut s = String::new();
    match format {
        Format::Json => {
            let out = HodgeOut {
                model: name,
                max_degree: table.n_max,
                rows,
            };
            let _ = writeln!(s, "{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Csv => {
            let header: Vec<String> = (0..=p_max).map(|p| format!("p{p}")).collect();
            let _ = writeln!(s, "degree,{},row_sum", header.join(","));
            for r in rows {
                let cells: Vec<String> = r.dims.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "{},{},{}", r.degree, cells.join(","), r.row_sum);
            }
        }
        Format::Table => {
            let _ = writeln!(s, "Hodge table of L{name}: rows n, columns weight p");
            let mut header = String::from("  n |");
            for p in 0..=p_max {
                header.push_str(&format!(" p={p:2}"));
            }
            header.push_str(" | sum");
            let _ = writeln!(s, "{header}");
            for r in rows {
                let mut line = format!("{:3} |", r.degree);
                for d in &r.dims {
                    line.push_str(&format!(" {d:4}"));
                }
                line.push_str(&format!(" | {:3}", r.row_sum));
                let _ = writeln!(s, "{line}");
            }
        }
    }
    emit(&s);
}

#[derive(Serialize)]
pub struct CheckOut<'a> {
    pub model: &'a str,
    pub max_degree: i64,
    pub results: Vec<CheckRow>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct CheckRow {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

pub fn print_check(out: &CheckOut, format: Format) {
    let mut s = String::new();
    match format {
        Format::Json => {
            let _ = writeln!(s, "{}", serde_json::to_string_pretty(out).expect("serialize"));
        }
        Format::Csv => {
            let _ = writeln!(s, "check,ok,witness");
            for r in &out.results {
                let _ = writeln!(
                    s,
                    "{},{},{}",
                    csv_field(&r.name),
                    r.ok,
                    csv_field(r.witness.as_deref().unwrap_or(""))
                );
            }
        }
        Format::Table => {
            for r in &out.results {
                if r.ok {
                    let _ = writeln!(s, "ok   {}", r.name);
                } else {
                    let _ = writeln!(
                        s,
                        "FAIL {}: {}",
                        r.name,
                        r.witness.as_deref().unwrap_or("(no witness)")
                    );
                }
            }
            let _ = writeln!(
                s,
                "{}: {} of {} checks passed",
                out.model,
                out.results.iter().filter(|r| r.ok).count(),
                out.results.len()
            );
        }
    }
    emit(&s);
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
