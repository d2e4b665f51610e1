//! The JSON problem-file format.
//!
//! Every element or function literal is a string in the expression grammar
//! of the declared field. Parsing validates everything up front, so a
//! `ProblemFile` always holds materialized values.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use specfact_core::{
    parse_descriptor, parse_element, parse_ratfn, Error, FieldElement, FieldRef, PoleSpec,
    RatMatrix, RationalFn, Scope, TriangularFactor, UnitRow,
};

use crate::report::RenderMode;

/// Input problems, with the position of the offending literal when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    Semantic {
        path: String,
        at: Option<(usize, usize)>,
        message: String,
    },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Syntax {
                line,
                column,
                message,
            } => write!(f, "syntax error at line {line}, column {column}: {message}"),
            InputError::Semantic {
                path,
                at: Some((line, column)),
                message,
            } => write!(f, "{path} (line {line}, column {column}): {message}"),
            InputError::Semantic {
                path,
                at: None,
                message,
            } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "factor-f")]
    FactorF,
    #[serde(rename = "spectral")]
    Spectral,
    #[serde(rename = "complete")]
    Complete,
    #[serde(rename = "verify")]
    Verify,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::FactorF => "factor-f",
            Task::Spectral => "spectral",
            Task::Complete => "complete",
            Task::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorF {
    pub phis: Vec<RationalFn>,
    pub poles: Vec<PoleSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectral {
    pub m: RatMatrix,
    pub poles: Vec<Vec<PoleSpec>>,
    pub s: Option<RatMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complete {
    pub row: Vec<RationalFn>,
    pub reflected_poles: Vec<Vec<PoleSpec>>,
    pub vm_disk_zeros: Vec<PoleSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    FactorF(FactorF),
    Spectral(Spectral),
    Complete(Complete),
}

impl Payload {
    pub fn task(&self) -> Task {
        match self {
            Payload::FactorF(_) => Task::FactorF,
            Payload::Spectral(_) => Task::Spectral,
            Payload::Complete(_) => Task::Complete,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expect_polynomial: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub render: Option<RenderMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
}

/// Expected results, compared exactly after the computation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expect {
    pub u: Option<RatMatrix>,
    pub solutions: Option<Vec<Vec<FieldElement>>>,
    pub s_plus: Option<RatMatrix>,
    pub phis: Option<Vec<RationalFn>>,
    pub w: Option<RatMatrix>,
    pub v: Option<RatMatrix>,
    pub v_t: Option<RatMatrix>,
}

impl Expect {
    pub fn is_empty(&self) -> bool {
        *self == Expect::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub field: FieldRef,
    pub constants: Vec<(String, FieldElement)>,
    pub task: Task,
    pub payload: Payload,
    pub options: Options,
    pub expect: Expect,
}

impl ProblemFile {
    /// Whether there is anything to check beyond the certificate.
    pub fn has_reference(&self) -> bool {
        !self.expect.is_empty() || matches!(&self.payload, Payload::Spectral(s) if s.s.is_some())
    }

    pub fn scope(&self) -> Scope {
        let mut scope = Scope::new(&self.field);
        for (name, value) in &self.constants {
            scope
                .define(name, value.clone())
                .expect("constants were validated at parse time");
        }
        scope
    }
}

// Raw serde layer.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    field: String,
    #[serde(default)]
    constants: Map<String, Value>,
    task: Task,
    factor_f: Option<RawFactorF>,
    spectral: Option<RawSpectral>,
    complete: Option<RawComplete>,
    #[serde(default)]
    options: Options,
    #[serde(default)]
    expect: RawExpect,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPole {
    at: String,
    order: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFactorF {
    phis: Vec<String>,
    poles: Vec<RawPole>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectral {
    m: Vec<Vec<String>>,
    #[serde(default)]
    poles: Vec<Vec<RawPole>>,
    s: Option<Vec<Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplete {
    row: Vec<String>,
    #[serde(default)]
    reflected_poles: Vec<Vec<RawPole>>,
    #[serde(default)]
    vm_disk_zeros: Vec<RawPole>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawExpect {
    u: Option<Vec<Vec<String>>>,
    solutions: Option<Vec<Vec<String>>>,
    s_plus: Option<Vec<Vec<String>>>,
    phis: Option<Vec<String>>,
    w: Option<Vec<Vec<String>>>,
    v: Option<Vec<Vec<String>>>,
    v_t: Option<Vec<Vec<String>>>,
}

/// Materializes literals against the scope, tagging errors with their path
/// and source position.
struct Ctx<'a> {
    text: &'a str,
    scope: Scope,
}

impl Ctx<'_> {
    fn fail(&self, path: &str, literal: Option<&str>, message: impl Into<String>) -> InputError {
        InputError::Semantic {
            path: path.to_string(),
            at: literal.and_then(|l| locate(self.text, l)),
            message: message.into(),
        }
    }

    fn wrap(&self, path: &str, literal: &str, err: Error) -> InputError {
        let message = match &err {
            Error::Syntax { column, message } => {
                format!("in \"{literal}\" at column {column}: {message}")
            }
            other => format!("in \"{literal}\": {other}"),
        };
        self.fail(path, Some(literal), message)
    }

    fn element(&self, path: &str, s: &str) -> Result<FieldElement, InputError> {
        parse_element(s, &self.scope).map_err(|e| self.wrap(path, s, e))
    }

    fn function(&self, path: &str, s: &str) -> Result<RationalFn, InputError> {
        parse_ratfn(s, &self.scope).map_err(|e| self.wrap(path, s, e))
    }

    fn row(&self, path: &str, xs: &[String]) -> Result<Vec<RationalFn>, InputError> {
        xs.iter()
            .enumerate()
            .map(|(i, s)| self.function(&format!("{path}[{i}]"), s))
            .collect()
    }

    fn matrix(&self, path: &str, rows: &[Vec<String>]) -> Result<RatMatrix, InputError> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, r)| self.row(&format!("{path}[{i}]"), r))
            .collect::<Result<Vec<_>, _>>()?;
        RatMatrix::new(&self.scope.field, parsed).map_err(|e| self.fail(path, None, e.to_string()))
    }

    fn pole(&self, path: &str, p: &RawPole) -> Result<PoleSpec, InputError> {
        let at = self.element(&format!("{path}.at"), &p.at)?;
        PoleSpec::new(at, p.order).map_err(|e| self.wrap(path, &p.at, e))
    }

    fn poles(&self, path: &str, ps: &[RawPole]) -> Result<Vec<PoleSpec>, InputError> {
        ps.iter()
            .enumerate()
            .map(|(i, p)| self.pole(&format!("{path}[{i}]"), p))
            .collect()
    }
}

/// 1-based line and column of the first occurrence of `"literal"`.
fn locate(text: &str, literal: &str) -> Option<(usize, usize)> {
    let quoted = serde_json::to_string(literal).ok()?;
    let offset = text.find(&quoted)?;
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Some((line, column))
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, InputError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field = parse_descriptor(&raw.field).map_err(|e| InputError::Semantic {
        path: "field".into(),
        at: locate(text, &raw.field),
        message: e.to_string(),
    })?;
    let mut ctx = Ctx {
        text,
        scope: Scope::new(&field),
    };
    let mut constants = Vec::new();
    for (name, value) in &raw.constants {
        let path = format!("constants.{name}");
        let Value::String(s) = value else {
            return Err(ctx.fail(&path, None, "constant values must be strings"));
        };
        let x = ctx.element(&path, s)?;
        ctx.scope
            .define(name, x.clone())
            .map_err(|e| ctx.fail(&path, None, e.to_string()))?;
        constants.push((name.clone(), x));
    }

    let given: Vec<&str> = [
        raw.factor_f.as_ref().map(|_| "factor_f"),
        raw.spectral.as_ref().map(|_| "spectral"),
        raw.complete.as_ref().map(|_| "complete"),
    ]
    .into_iter()
    .flatten()
    .collect();
    if given.len() != 1 {
        return Err(ctx.fail(
            "task",
            None,
            format!(
                "exactly one of factor_f, spectral, complete is required, found {}",
                if given.is_empty() {
                    "none".to_string()
                } else {
                    given.join(", ")
                }
            ),
        ));
    }
    let payload = if let Some(p) = &raw.factor_f {
        Payload::FactorF(factor_f(&ctx, p)?)
    } else if let Some(p) = &raw.spectral {
        Payload::Spectral(spectral(&ctx, p)?)
    } else {
        Payload::Complete(complete(
            &ctx,
            raw.complete.as_ref().expect("checked above"),
        )?)
    };
    if raw.task != Task::Verify && raw.task != payload.task() {
        return Err(ctx.fail(
            "task",
            None,
            format!(
                "task {} does not match the {} payload",
                raw.task.name(),
                given[0]
            ),
        ));
    }
    let expect = expect(&ctx, &raw.expect, payload.task())?;
    let problem = ProblemFile {
        field,
        constants,
        task: raw.task,
        payload,
        options: raw.options,
        expect,
    };
    if problem.task == Task::Verify && !problem.has_reference() {
        return Err(ctx.fail("expect", None, "a verify problem needs expected values"));
    }
    Ok(problem)
}

fn factor_f(ctx: &Ctx, raw: &RawFactorF) -> Result<FactorF, InputError> {
    let phis = ctx.row("factor_f.phis", &raw.phis)?;
    let poles = ctx.poles("factor_f.poles", &raw.poles)?;
    let locations: Vec<FieldElement> = poles.iter().map(|p| p.location.clone()).collect();
    for (k, p) in poles.iter().enumerate() {
        let order = phis
            .iter()
            .map(|f| f.pole_order(&p.location))
            .max()
            .unwrap_or(0);
        if order != p.order {
            return Err(ctx.fail(
                &format!("factor_f.poles[{k}]"),
                Some(&raw.poles[k].at),
                format!(
                    "declared order {} but the functions have order {order}",
                    p.order
                ),
            ));
        }
    }
    for (i, f) in phis.iter().enumerate() {
        let path = format!("factor_f.phis[{i}]");
        let minus = f
            .minus_part(&locations)
            .map_err(|e| ctx.wrap(&path, &raw.phis[i], e))?;
        if &minus.to_ratfn() != f {
            return Err(ctx.fail(
                &path,
                Some(&raw.phis[i]),
                "not strictly proper with all poles among the declared ones",
            ));
        }
    }
    Ok(FactorF { phis, poles })
}

fn spectral(ctx: &Ctx, raw: &RawSpectral) -> Result<Spectral, InputError> {
    let m = ctx.matrix("spectral.m", &raw.m)?;
    let mut poles = raw
        .poles
        .iter()
        .enumerate()
        .map(|(i, ps)| ctx.poles(&format!("spectral.poles[{i}]"), ps))
        .collect::<Result<Vec<_>, _>>()?;
    if poles.is_empty() {
        poles = vec![Vec::new(); m.nrows()];
    }
    let s = raw
        .s
        .as_ref()
        .map(|s| ctx.matrix("spectral.s", s))
        .transpose()?;
    TriangularFactor::new(m.clone(), poles.clone())
        .map_err(|e| ctx.fail("spectral", None, e.to_string()))?;
    Ok(Spectral { m, poles, s })
}

fn complete(ctx: &Ctx, raw: &RawComplete) -> Result<Complete, InputError> {
    let row = ctx.row("complete.row", &raw.row)?;
    let mut reflected_poles = raw
        .reflected_poles
        .iter()
        .enumerate()
        .map(|(i, ps)| ctx.poles(&format!("complete.reflected_poles[{i}]"), ps))
        .collect::<Result<Vec<_>, _>>()?;
    if reflected_poles.is_empty() {
        reflected_poles = vec![Vec::new(); row.len()];
    }
    let vm_disk_zeros = ctx.poles("complete.vm_disk_zeros", &raw.vm_disk_zeros)?;
    UnitRow::new(
        &ctx.scope.field,
        row.clone(),
        reflected_poles.clone(),
        vm_disk_zeros.clone(),
    )
    .map_err(|e| ctx.fail("complete", None, e.to_string()))?;
    Ok(Complete {
        row,
        reflected_poles,
        vm_disk_zeros,
    })
}

fn expect(ctx: &Ctx, raw: &RawExpect, task: Task) -> Result<Expect, InputError> {
    let allowed: &[&str] = match task {
        Task::FactorF => &["u", "solutions"],
        Task::Spectral => &["u", "s_plus"],
        _ => &["u", "phis", "w", "v", "v_t"],
    };
    let present = [
        ("u", raw.u.is_some()),
        ("solutions", raw.solutions.is_some()),
        ("s_plus", raw.s_plus.is_some()),
        ("phis", raw.phis.is_some()),
        ("w", raw.w.is_some()),
        ("v", raw.v.is_some()),
        ("v_t", raw.v_t.is_some()),
    ];
    for (key, here) in present {
        if here && !allowed.contains(&key) {
            return Err(ctx.fail(
                &format!("expect.{key}"),
                None,
                format!("not produced by a {} problem", task.name()),
            ));
        }
    }
    let mat = |key: &str, m: &Option<Vec<Vec<String>>>| {
        m.as_ref()
            .map(|m| ctx.matrix(&format!("expect.{key}"), m))
            .transpose()
    };
    let solutions = raw
        .solutions
        .as_ref()
        .map(|cols| {
            cols.iter()
                .enumerate()
                .map(|(j, col)| {
                    col.iter()
                        .enumerate()
                        .map(|(k, s)| ctx.element(&format!("expect.solutions[{j}][{k}]"), s))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    Ok(Expect {
        u: mat("u", &raw.u)?,
        solutions,
        s_plus: mat("s_plus", &raw.s_plus)?,
        phis: raw
            .phis
            .as_ref()
            .map(|p| ctx.row("expect.phis", p))
            .transpose()?,
        w: mat("w", &raw.w)?,
        v: mat("v", &raw.v)?,
        v_t: mat("v_t", &raw.v_t)?,
    })
}

// Rendering back to JSON.

fn strings<T: ToString>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

fn matrix_json(m: &RatMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| strings(r)).collect())
}

fn poles_json(ps: &[PoleSpec]) -> Value {
    Value::Array(
        ps.iter()
            .map(|p| json!({"at": p.location.to_string(), "order": p.order}))
            .collect(),
    )
}

impl ProblemFile {
    /// Canonical JSON with every value rendered exactly; parses back to an
    /// identical problem.
    pub fn to_json(&self) -> String {
        let mut out = Map::new();
        out.insert("field".into(), Value::String(self.field.to_string()));
        if !self.constants.is_empty() {
            let cs = self
                .constants
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.to_string())))
                .collect();
            out.insert("constants".into(), Value::Object(cs));
        }
        out.insert("task".into(), Value::String(self.task.name().into()));
        let (key, body) = match &self.payload {
            Payload::FactorF(p) => (
                "factor_f",
                json!({"phis": strings(&p.phis), "poles": poles_json(&p.poles)}),
            ),
            Payload::Spectral(p) => {
                let mut b = json!({
                    "m": matrix_json(&p.m),
                    "poles": Value::Array(p.poles.iter().map(|ps| poles_json(ps)).collect()),
                });
                if let Some(s) = &p.s {
                    b["s"] = matrix_json(s);
                }
                ("spectral", b)
            }
            Payload::Complete(p) => (
                "complete",
                json!({
                    "row": strings(&p.row),
                    "reflected_poles": Value::Array(p.reflected_poles.iter().map(|ps| poles_json(ps)).collect()),
                    "vm_disk_zeros": poles_json(&p.vm_disk_zeros),
                }),
            ),
        };
        out.insert(key.into(), body);
        if self.options != Options::default() {
            out.insert(
                "options".into(),
                serde_json::to_value(&self.options).expect("options serialize"),
            );
        }
        if !self.expect.is_empty() {
            let e = &self.expect;
            let mut m = Map::new();
            let mats = [
                ("u", &e.u),
                ("s_plus", &e.s_plus),
                ("w", &e.w),
                ("v", &e.v),
                ("v_t", &e.v_t),
            ];
            for (k, v) in mats {
                if let Some(v) = v {
                    m.insert(k.into(), matrix_json(v));
                }
            }
            if let Some(s) = &e.solutions {
                m.insert(
                    "solutions".into(),
                    Value::Array(s.iter().map(|c| strings(c)).collect()),
                );
            }
            if let Some(p) = &e.phis {
                m.insert("phis".into(), strings(p));
            }
            out.insert("expect".into(), Value::Object(m));
        }
        serde_json::to_string_pretty(&Value::Object(out)).expect("json value serializes")
    }
}
