//! The element grammar: integers, `+ - * /`, `^` with integer exponents,
//! parentheses, implicit multiplication, the adjoined roots `s1..sK`, the
//! imaginary unit `i`, the variable `z`, and named constants.
//!
//! Field descriptors are written `Q(sqrt 5)(sqrt (3-s1))(i)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, FieldRef};
use crate::ratfn::RationalFn;

const MAX_EXPONENT: u32 = 4096;

/// Names visible to the parser.
#[derive(Debug, Clone)]
pub struct Scope {
    pub field: FieldRef,
    constants: BTreeMap<String, FieldElement>,
}

impl Scope {
    pub fn new(field: &FieldRef) -> Scope {
        Scope {
            field: field.clone(),
            constants: BTreeMap::new(),
        }
    }

    /// Binds `name` to `value`. Reserved names (`z`, `i`, `s<k>`) and
    /// non-identifiers are rejected.
    pub fn define(&mut self, name: &str, value: FieldElement) -> Result<()> {
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || is_reserved(name) {
            return Err(Error::Syntax {
                column: 1,
                message: format!("'{name}' cannot be used as a constant name"),
            });
        }
        if !value.field().same_as(&self.field) {
            return Err(Error::FieldMismatch);
        }
        self.constants.insert(name.to_string(), value);
        Ok(())
    }

    pub fn constant(&self, name: &str) -> Option<&FieldElement> {
        self.constants.get(name)
    }

    pub fn constants(&self) -> &BTreeMap<String, FieldElement> {
        &self.constants
    }
}

fn is_reserved(name: &str) -> bool {
    name == "z"
        || name == "i"
        || name == "Q"
        || name == "sqrt"
        || (name.len() > 1
            && name.starts_with('s')
            && name[1..].chars().all(|c| c.is_ascii_digit()))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        let col = pos + 1;
        if c.is_whitespace() {
            pos += 1;
        } else if c.is_ascii_digit() {
            let start = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            let digits: String = chars[start..pos].iter().collect();
            let n: BigInt = digits.parse().map_err(|_| Error::Syntax {
                column: col,
                message: format!("bad integer '{digits}'"),
            })?;
            out.push((Tok::Num(n), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = pos;
            while pos < chars.len() && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_') {
                pos += 1;
            }
            out.push((Tok::Ident(chars[start..pos].iter().collect()), col));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::Open,
                ')' => Tok::Close,
                _ => {
                    return Err(Error::Syntax {
                        column: col,
                        message: format!("unexpected character '{c}'"),
                    })
                }
            };
            out.push((tok, col));
            pos += 1;
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    scope: &'a Scope,
    allow_z: bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            column: self.col(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<RationalFn> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek() {
            let op = *op;
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' {
                acc.add(&rhs)
            } else {
                acc.sub(&rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFn> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let col = self.col();
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|_| Error::Syntax {
                        column: col,
                        message: "division by zero".into(),
                    })?;
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::Open) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFn> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFn> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        let col = self.col();
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.err("expected an integer exponent");
        };
        self.pos += 1;
        let exp: u32 = u32::try_from(&n)
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or(Error::Syntax {
                column: col,
                message: format!("exponent {n} is too large"),
            })?;
        let signed = if negative { -(exp as i32) } else { exp as i32 };
        base.pow(signed).map_err(|_| Error::Syntax {
            column: col,
            message: "negative power of zero".into(),
        })
    }

    fn primary(&mut self) -> Result<RationalFn> {
        let field = &self.scope.field;
        let col = self.col();
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(RationalFn::constant(
                field.from_rational(BigRational::from_integer(n)),
            )),
            Tok::Open => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(&name, col),
            Tok::Close => Err(Error::Syntax {
                column: col,
                message: "unexpected ')'".into(),
            }),
            Tok::Op(c) => Err(Error::Syntax {
                column: col,
                message: format!("unexpected '{c}'"),
            }),
        }
    }

    fn identifier(&self, name: &str, col: usize) -> Result<RationalFn> {
        let field = &self.scope.field;
        let fail = |message: String| Error::Syntax {
            column: col,
            message,
        };
        if name == "z" {
            if !self.allow_z {
                return Err(fail(
                    "the variable z is not allowed in a field element".into(),
                ));
            }
            return Ok(RationalFn::z(field));
        }
        if name == "i" {
            return field
                .imag_unit()
                .map(RationalFn::constant)
                .ok_or_else(|| fail("the field has no imaginary unit".into()));
        }
        if let Some(k) = name.strip_prefix('s').and_then(|d| d.parse::<usize>().ok()) {
            if k == 0 || k > field.levels() {
                return Err(fail(format!("the field has no root {name}")));
            }
            return Ok(RationalFn::constant(field.root(k)));
        }
        self.scope
            .constant(name)
            .cloned()
            .map(RationalFn::constant)
            .ok_or_else(|| fail(format!("unknown name '{name}'")))
    }
}

fn parse_with(text: &str, scope: &Scope, allow_z: bool) -> Result<RationalFn> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
        scope,
        allow_z,
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let value = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(value)
}

/// Parses a rational function of `z`.
pub fn parse_ratfn(text: &str, scope: &Scope) -> Result<RationalFn> {
    parse_with(text, scope, true)
}

/// Parses a field element (no `z`).
pub fn parse_element(text: &str, scope: &Scope) -> Result<FieldElement> {
    let f = parse_with(text, scope, false)?;
    f.as_constant()
        .ok_or_else(|| Error::Internal("constant expression evaluated to a function".into()))
}

/// Parses `Q(sqrt r1)(sqrt r2)…(i)`; each radicand may use the roots
/// adjoined before it.
pub fn parse_descriptor(text: &str) -> Result<FieldRef> {
    let chars: Vec<char> = text.chars().collect();
    let syntax = |column: usize, message: &str| Error::Syntax {
        column,
        message: message.to_string(),
    };
    let skip_ws = |mut pos: usize| {
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        pos
    };
    let mut pos = skip_ws(0);
    if chars.get(pos) != Some(&'Q') {
        return Err(syntax(pos + 1, "a field descriptor starts with 'Q'"));
    }
    pos += 1;
    let mut field = FieldDescriptor::rational();
    loop {
        pos = skip_ws(pos);
        if pos == chars.len() {
            return Ok(field);
        }
        if chars[pos] != '(' {
            return Err(syntax(pos + 1, "expected '('"));
        }
        let open = pos;
        let mut depth = 0usize;
        let mut close = None;
        for (k, &c) in chars.iter().enumerate().skip(open) {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(k);
                        break;
                    }
                }
                _ => {}
            }
        }
        let close = close.ok_or_else(|| syntax(open + 1, "unbalanced parentheses"))?;
        let inner: String = chars[open + 1..close].iter().collect();
        let body = inner.trim();
        if body == "i" {
            field = field.extend_gaussian()?;
        } else if let Some(rad) = body.strip_prefix("sqrt") {
            if field.is_gaussian() {
                return Err(syntax(
                    open + 1,
                    "the imaginary unit must be the last layer",
                ));
            }
            let offset = open + 1 + inner.find("sqrt").unwrap_or(0) + 4;
            let value = parse_element(rad, &Scope::new(&field)).map_err(|e| match e {
                Error::Syntax { column, message } => Error::Syntax {
                    column: column + offset,
                    message,
                },
                other => other,
            })?;
            field = field.extend_sqrt(&value)?;
        } else {
            return Err(syntax(open + 2, "expected 'sqrt <radicand>' or 'i'"));
        }
        pos = close + 1;
    }
}
