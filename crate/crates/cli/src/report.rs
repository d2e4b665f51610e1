//! Report structure and its exact/decimal text rendering.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use specfact_core::{Certificate, FieldElement, Poly, RatMatrix, RationalFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RenderMode {
    Exact,
    Decimal,
    Both,
}

pub const DEFAULT_PRECISION: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Matrix(RatMatrix),
    Row(Vec<RationalFn>),
    Named(Vec<(String, FieldElement)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub name: String,
    pub value: Value,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub task: String,
    pub field: String,
    pub items: Vec<Item>,
    pub certificate: Certificate,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.certificate.passed()
    }

    pub fn item(&self, name: &str) -> Option<&Value> {
        self.items.iter().find(|i| i.name == name).map(|i| &i.value)
    }

    pub fn matrix(&self, name: &str) -> Option<&RatMatrix> {
        match self.item(name) {
            Some(Value::Matrix(m)) => Some(m),
            _ => None,
        }
    }
}

/// Lines of the form `label = value` for every entry of `value`, where each
/// value is rendered exactly or in decimals.
fn entries(value: &Value, decimal: Option<usize>) -> Vec<(String, String)> {
    let f = |x: &RationalFn| match decimal {
        Some(d) => decimal_ratfn(x, d),
        None => x.to_string(),
    };
    match value {
        Value::Matrix(m) => m
            .rows()
            .iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(move |(j, x)| (format!("[{},{}]", i + 1, j + 1), x))
            })
            .map(|(l, x)| (l, f(x)))
            .collect(),
        Value::Row(r) => r
            .iter()
            .enumerate()
            .map(|(i, x)| (format!("[{}]", i + 1), f(x)))
            .collect(),
        Value::Named(xs) => xs
            .iter()
            .map(|(n, x)| {
                let s = match decimal {
                    Some(d) => x.to_decimal(d),
                    None => x.to_string(),
                };
                (n.clone(), s)
            })
            .collect(),
    }
}

fn decimal_coeff(c: &FieldElement, digits: usize) -> String {
    let s = c.to_decimal(digits);
    if c.is_real() {
        s
    } else {
        format!("({s})")
    }
}

pub fn decimal_poly(p: &Poly, digits: usize) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut coef = decimal_coeff(c, digits);
        if !out.is_empty() {
            match coef.strip_prefix('-') {
                Some(rest) if c.is_real() => {
                    out.push_str(" - ");
                    coef = rest.to_string();
                }
                _ => out.push_str(" + "),
            }
        }
        out.push_str(&coef);
        match k {
            0 => {}
            1 => out.push_str(" z"),
            _ => {
                let _ = write!(out, " z^{k}");
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn decimal_ratfn(f: &RationalFn, digits: usize) -> String {
    let num = decimal_poly(f.num(), digits);
    if f.den().is_constant() {
        num
    } else {
        format!("({num}) / ({})", decimal_poly(f.den(), digits))
    }
}

pub fn render(report: &Report, mode: RenderMode, precision: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "task: {}", report.task);
    let _ = writeln!(out, "field: {}", report.field);
    if mode != RenderMode::Decimal {
        for item in &report.items {
            let _ = writeln!(out, "{} =", item.name);
            for (label, s) in entries(&item.value, None) {
                let _ = writeln!(out, "  {label} = {s}");
            }
        }
    }
    if mode != RenderMode::Exact {
        let _ = writeln!(
            out,
            "# non-authoritative: decimal rendering to {precision} digits"
        );
        for item in &report.items {
            let _ = writeln!(out, "# {} ~", item.name);
            for (label, s) in entries(&item.value, Some(precision)) {
                let _ = writeln!(out, "#   {label} ~ {s}");
            }
        }
    }
    for n in &report.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = writeln!(out, "certificate:");
    for c in &report.certificate.checks {
        let mark = if c.passed { "pass" } else { "FAIL" };
        if c.detail.is_empty() || c.name.ends_with(&c.detail) {
            let _ = writeln!(out, "  [{mark}] {}", c.name);
        } else {
            let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
        }
    }
    let failed = report.certificate.failures().count();
    let total = report.certificate.checks.len();
    if failed == 0 {
        let _ = writeln!(out, "result: PASS ({total} checks)");
    } else {
        let _ = writeln!(out, "result: FAIL ({failed} of {total} checks failed)");
    }
    let _ = writeln!(out, "time: {:.3} ms", report.elapsed.as_secs_f64() * 1e3);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use specfact_core::{parse_descriptor, parse_element, parse_ratfn, Scope};

    #[test]
    fn decimal_polynomials() {
        let q = parse_descriptor("Q").unwrap();
        let scope = Scope::new(&q);
        let f = parse_ratfn("(1-z/3)/(2+z)", &scope).unwrap();
        assert_eq!(
            decimal_ratfn(&f, 3),
            "(1.000 - 0.333 z) / (2.000 + 1.000 z)"
        );
        let g = parse_descriptor("Q(i)").unwrap();
        let scope = Scope::new(&g);
        let x = parse_element("1/2-i/4", &scope).unwrap();
        assert_eq!(decimal_coeff(&x, 2), "(0.50 - 0.25i)");
    }
}
