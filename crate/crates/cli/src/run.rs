//! Dispatch from a problem to the core algorithms, plus exit-code policy.

use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use specfact_core::{
    complete, construct_paraunitary, factorize, verify_against_s, Certificate, Error, FieldElement,
    PhiRow, RatMatrix, RationalFn, TriangularFactor, UnitRow,
};

use crate::problem::{parse_problem, InputError, Payload, ProblemFile, Task};
use crate::report::{Item, Report, Value};

/// Diffs listed per failed comparison before truncating.
const MAX_DIFFS: usize = 6;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub expect_polynomial: bool,
    pub max_degree: Option<usize>,
}

impl RunOptions {
    pub fn from_problem(p: &ProblemFile) -> RunOptions {
        RunOptions {
            expect_polynomial: p.options.expect_polynomial,
            max_degree: p.options.max_degree,
        }
    }
}

pub fn load(path: &Path) -> Result<ProblemFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_problem(&text).with_context(|| format!("invalid problem file {}", path.display()))
}

/// 0 success, 1 failed check, 2 bad input, 3 internal failure.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InputError>().is_some() || err.downcast_ref::<std::io::Error>().is_some()
    {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Internal(_)) | None => 3,
        Some(Error::NotPolynomial { .. }) => 1,
        Some(_) => 2,
    }
}

/// Runs `command` on the problem. `Task::Verify` runs whatever the payload
/// asks for and insists on reference values to compare against.
pub fn run(problem: &ProblemFile, command: Task, opts: &RunOptions) -> Result<Report> {
    let task = problem.payload.task();
    if command == Task::Verify {
        if !problem.has_reference() {
            return Err(InputError::Semantic {
                path: "expect".into(),
                at: None,
                message: "nothing to verify: no expected values given".into(),
            }
            .into());
        }
    } else if command != task {
        return Err(InputError::Semantic {
            path: "task".into(),
            at: None,
            message: format!(
                "the file holds a {} problem, not {}",
                task.name(),
                command.name()
            ),
        }
        .into());
    }
    let start = Instant::now();
    let mut report = match &problem.payload {
        Payload::FactorF(p) => {
            let locations: Vec<FieldElement> = p.poles.iter().map(|x| x.location.clone()).collect();
            let row = PhiRow::from_functions(&problem.field, &p.phis, &locations)?;
            let res = construct_paraunitary(&row).context("paraunitary construction")?;
            let names = res.layout.names();
            let mut solutions = Vec::new();
            for (j, col) in res.solutions.iter().enumerate() {
                for (k, x) in col.iter().enumerate() {
                    let name = names
                        .get(k)
                        .cloned()
                        .unwrap_or_else(|| format!("x{}", k + 1));
                    solutions.push((format!("{name}[{}]", j + 1), x.clone()));
                }
            }
            let mut cert = res.certificate.clone();
            let e = &problem.expect;
            if let Some(u) = &e.u {
                compare_matrix(&mut cert, "U", &res.u, u);
            }
            if let Some(s) = &e.solutions {
                compare_solutions(&mut cert, &res.solutions, s);
            }
            new_report(
                problem,
                vec![
                    item("U", Value::Matrix(res.u)),
                    item("solutions", Value::Named(solutions)),
                ],
                cert,
            )
        }
        Payload::Spectral(p) => {
            let tf = TriangularFactor::new(p.m.clone(), p.poles.clone())?;
            let res = factorize(&tf, opts.expect_polynomial).context("spectral factorization")?;
            let r = p.m.nrows();
            let mut u = RatMatrix::identity(&problem.field, r);
            for st in &res.stages {
                u = u.mul(&st.u.embed(r))?;
            }
            let mut cert = res.certificate.clone();
            if let Some(s) = &p.s {
                cert.extend("", &verify_against_s(&res, s)?);
            }
            let e = &problem.expect;
            if let Some(x) = &e.s_plus {
                compare_matrix(&mut cert, "S+", &res.s_plus, x);
            }
            if let Some(x) = &e.u {
                compare_matrix(&mut cert, "U", &u, x);
            }
            let mut items = vec![
                item("S+", Value::Matrix(res.s_plus)),
                item("U", Value::Matrix(u)),
            ];
            if res.stages.len() > 1 {
                for (k, st) in res.stages.into_iter().enumerate() {
                    items.push(item(&format!("U stage {}", k + 2), Value::Matrix(st.u)));
                }
            }
            new_report(problem, items, cert)
        }
        Payload::Complete(p) => {
            let row = UnitRow::new(
                &problem.field,
                p.row.clone(),
                p.reflected_poles.clone(),
                p.vm_disk_zeros.clone(),
            )?;
            let res = complete(&row, opts.max_degree).context("paraunitary completion")?;
            let phis: Vec<RationalFn> = res.phi_row.phis().iter().map(|f| f.to_ratfn()).collect();
            let mut cert = res.certificate.clone();
            let e = &problem.expect;
            if let Some(x) = &e.phis {
                compare_row(&mut cert, "phi", &phis, x);
            }
            let pairs = [
                ("W", &res.w, &e.w),
                ("U", &res.paraunitary.u, &e.u),
                ("V", &res.v, &e.v),
                ("V^T", &res.v_t, &e.v_t),
            ];
            for (name, got, want) in pairs {
                if let Some(want) = want {
                    compare_matrix(&mut cert, name, got, want);
                }
            }
            let mut r = new_report(
                problem,
                vec![
                    item("phi", Value::Row(phis)),
                    item("W", Value::Matrix(res.w)),
                    item("U", Value::Matrix(res.paraunitary.u)),
                    item("V", Value::Matrix(res.v)),
                    item("V^T", Value::Matrix(res.v_t)),
                ],
                cert,
            );
            if let Some(c) = &res.corona {
                r.notes.push(format!(
                    "Bezout multipliers of degree {} for the disk zeros of the last entry",
                    c.degree
                ));
            }
            r
        }
    };
    report.task = command.name().to_string();
    report.elapsed = start.elapsed();
    Ok(report)
}

fn item(name: &str, value: Value) -> Item {
    Item {
        name: name.to_string(),
        value,
    }
}

fn new_report(problem: &ProblemFile, items: Vec<Item>, certificate: Certificate) -> Report {
    Report {
        task: String::new(),
        field: problem.field.to_string(),
        items,
        certificate,
        notes: Vec::new(),
        elapsed: Default::default(),
    }
}

fn summarize(diffs: Vec<String>) -> String {
    let extra = diffs.len().saturating_sub(MAX_DIFFS);
    let mut out: Vec<String> = diffs.into_iter().take(MAX_DIFFS).collect();
    if extra > 0 {
        out.push(format!("{extra} more"));
    }
    out.join("; ")
}

fn compare_matrix(cert: &mut Certificate, name: &str, got: &RatMatrix, want: &RatMatrix) {
    let check = format!("{name} matches the expected value");
    match got.diff(want) {
        Ok(d) if d.is_empty() => cert.push(check, true, ""),
        Ok(d) => {
            let lines = d
                .into_iter()
                .map(|(i, j, a, b)| {
                    format!("entry [{},{}]: computed {a}, expected {b}", i + 1, j + 1)
                })
                .collect();
            cert.push(check, false, summarize(lines));
        }
        Err(e) => cert.push(check, false, e.to_string()),
    }
}

fn compare_row(cert: &mut Certificate, name: &str, got: &[RationalFn], want: &[RationalFn]) {
    let check = format!("{name} matches the expected value");
    if got.len() != want.len() {
        cert.push(
            check,
            false,
            format!("length {} vs {}", got.len(), want.len()),
        );
        return;
    }
    let lines: Vec<String> = got
        .iter()
        .zip(want)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, (a, b))| format!("entry [{}]: computed {a}, expected {b}", i + 1))
        .collect();
    let ok = lines.is_empty();
    cert.push(check, ok, summarize(lines));
}

fn compare_solutions(
    cert: &mut Certificate,
    got: &[Vec<FieldElement>],
    want: &[Vec<FieldElement>],
) {
    let check = "solutions match the expected values";
    let mut lines = Vec::new();
    if want.len() > got.len() {
        lines.push(format!(
            "{} columns expected, {} computed",
            want.len(),
            got.len()
        ));
    }
    for (j, (g, w)) in got.iter().zip(want).enumerate() {
        if g.len() != w.len() {
            lines.push(format!(
                "column {}: {} unknowns vs {}",
                j + 1,
                g.len(),
                w.len()
            ));
            continue;
        }
        for (k, (a, b)) in g.iter().zip(w).enumerate() {
            if a != b {
                lines.push(format!(
                    "column {}, unknown {}: computed {a}, expected {b}",
                    j + 1,
                    k + 1
                ));
            }
        }
    }
    let ok = lines.is_empty();
    cert.push(check, ok, summarize(lines));
}
