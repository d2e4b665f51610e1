//! Spectral factor of `M·M~` from a lower triangular `M`, by successive
//! paraunitary corrections of the leading `m x m` blocks.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldRef};
use crate::jl::{construct_paraunitary, ParaunitaryResult, PhiRow};
use crate::matrix::{Certificate, RatMatrix};
use crate::ratfn::{PoleSpec, RationalFn};

/// Lower triangular `M` together with the in-disk poles of each row's
/// strictly lower entries (`pole_data[0]` is always empty).
#[derive(Debug, Clone)]
pub struct TriangularFactor {
    m: RatMatrix,
    pole_data: Vec<Vec<PoleSpec>>,
}

impl TriangularFactor {
    pub fn new(m: RatMatrix, pole_data: Vec<Vec<PoleSpec>>) -> Result<TriangularFactor> {
        let r = m.nrows();
        if !m.is_square() || r == 0 {
            return Err(Error::DimensionMismatch(
                "triangular factor must be square and nonempty".into(),
            ));
        }
        if pole_data.len() != r {
            return Err(Error::DimensionMismatch(format!(
                "pole data lists {} rows, matrix has {r}",
                pole_data.len()
            )));
        }
        for i in 0..r {
            for j in i + 1..r {
                if !m.get(i, j).is_zero() {
                    return Err(Error::DimensionMismatch(format!(
                        "entry ({}, {}) above the diagonal is nonzero",
                        i + 1,
                        j + 1
                    )));
                }
            }
            if m.get(i, i).is_zero() {
                return Err(Error::DimensionMismatch(format!(
                    "diagonal entry {} is zero",
                    i + 1
                )));
            }
            for p in &pole_data[i] {
                let order = (0..i)
                    .map(|j| m.get(i, j).pole_order(&p.location))
                    .max()
                    .unwrap_or(0);
                if order != p.order {
                    return Err(Error::InconsistentPoles(format!(
                        "row {} declares a pole of order {} at {}, the entries have order {order}",
                        i + 1,
                        p.order,
                        p.location
                    )));
                }
            }
        }
        Ok(TriangularFactor { m, pole_data })
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn pole_data(&self) -> &[Vec<PoleSpec>] {
        &self.pole_data
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }
}

#[derive(Debug, Clone)]
pub struct FactorizationResult {
    pub s_plus: RatMatrix,
    /// One entry per stage `m = 2..r`, the `m x m` paraunitary block and its
    /// data.
    pub stages: Vec<ParaunitaryResult>,
    pub certificate: Certificate,
}

/// `ζ_i / f_m = φ+_i + φ-_i` for the bottom row of the leading `m x m` block;
/// returns the row of `φ-` and the `φ+` remainders. `candidates` are the
/// possible in-disk poles; actual multiplicities are found by exact division.
pub fn split_bottom_row(
    mprev: &RatMatrix,
    m: usize,
    candidates: &[FieldElement],
) -> Result<(PhiRow, Vec<RationalFn>)> {
    if m < 2 || m > mprev.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "stage {m} outside 2..={}",
            mprev.nrows()
        )));
    }
    if let Some(a) = candidates.iter().find(|a| !a.in_open_disk()) {
        return Err(Error::PoleOutsideDisk(a.to_string()));
    }
    let f = mprev.get(m - 1, m - 1);
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut minus = Vec::with_capacity(m - 1);
    let mut plus = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        let q = mprev.get(m - 1, i).div(f)?;
        let part = q.minus_part(candidates)?;
        plus.push(q.sub(&part.to_ratfn()));
        minus.push(part);
    }
    Ok((PhiRow::new(mprev.field(), m, minus)?, plus))
}

fn gram(a: &RatMatrix) -> Result<RatMatrix> {
    a.mul(&a.tilde())
}

pub fn factorize(tf: &TriangularFactor, expect_polynomial: bool) -> Result<FactorizationResult> {
    let field: FieldRef = tf.m.field().clone();
    let r = tf.size();
    let mut current = tf.m.clone();
    let mut stages = Vec::new();
    let mut seen: Vec<FieldElement> = Vec::new();
    let mut certificate = Certificate::default();
    for m in 2..=r {
        let mut candidates = seen.clone();
        candidates.extend(tf.pole_data[m - 1].iter().map(|p| p.location.clone()));
        let (row, _) = split_bottom_row(&current, m, &candidates)?;
        let stage = construct_paraunitary(&row)?;
        current = current.mul(&stage.u.embed(r))?;
        for p in &stage.layout.merged_poles {
            if !seen.contains(&p.location) {
                seen.push(p.location.clone());
            }
        }
        certificate.extend(&format!("stage {m}: "), &stage.certificate);
        stages.push(stage);
    }
    let target = gram(&tf.m)?;
    let got = gram(&current)?;
    let diff = got.diff(&target)?;
    certificate.push(
        "S+·S+~ = M·M~",
        diff.is_empty(),
        diff.iter()
            .map(|(i, j, x, y)| format!("[{},{}]: {x} vs {y}", i + 1, j + 1))
            .collect::<Vec<_>>()
            .join("; "),
    );
    let (ds, dm) = (current.det()?, tf.m.det()?);
    cert_eq(&mut certificate, "det S+ = det M", &ds, &dm);
    if let (Ok(s1), Ok(m1)) = (current.eval(&field.one()), tf.m.eval(&field.one())) {
        certificate.push("S+(1) = M(1)", s1 == m1, "");
    }
    if expect_polynomial {
        for (i, row) in current.rows().iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.is_polynomial() {
                    return Err(Error::NotPolynomial {
                        row: i + 1,
                        col: j + 1,
                        value: e.to_string(),
                    });
                }
            }
        }
        certificate.push("entries of S+ are polynomials", true, "");
    }
    Ok(FactorizationResult {
        s_plus: current,
        stages,
        certificate,
    })
}

fn cert_eq(cert: &mut Certificate, name: &str, x: &RationalFn, y: &RationalFn) {
    let detail = if x == y {
        String::new()
    } else {
        format!("{x} vs {y}")
    };
    cert.push(name, x == y, detail);
}

/// Compares `S` with `S+·S+~` entry by entry; a mismatch is reported in the
/// returned certificate, not as an error.
pub fn verify_against_s(result: &FactorizationResult, s: &RatMatrix) -> Result<Certificate> {
    let got = gram(&result.s_plus)?;
    let diff = got.diff(s)?;
    let mut cert = Certificate::default();
    cert.push(
        "S = S+·S+~",
        diff.is_empty(),
        diff.iter()
            .map(|(i, j, x, y)| format!("entry [{},{}]: S+·S+~ gives {x}, S has {y}", i + 1, j + 1))
            .collect::<Vec<_>>()
            .join("; "),
    );
    Ok(cert)
}
