//! Powers of power series and the transfer matrices that map the
//! (conjugated) pole coefficients of a reflected partial fraction to Taylor
//! coefficients at another point of the disk.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldRef};
use crate::poly::series_div;

/// First `count` coefficients of the `l`-th power of a series, by the
/// recursion `f_{l+1,k} = Σ_j f_{l,k-j} f_{1,j}` with `f_{0,k} = δ_{0k}`.
pub fn series_power(
    base: &[FieldElement],
    l: usize,
    count: usize,
    field: &FieldRef,
) -> Vec<FieldElement> {
    let mut current: Vec<FieldElement> = (0..count)
        .map(|k| if k == 0 { field.one() } else { field.zero() })
        .collect();
    for _ in 0..l {
        current = (0..count)
            .map(|k| {
                let mut acc = field.zero();
                for j in 0..=k {
                    if let Some(b) = base.get(j) {
                        if !b.is_zero() && !current[k - j].is_zero() {
                            acc = &acc + &(&current[k - j] * b);
                        }
                    }
                }
                acc
            })
            .collect();
    }
    current
}

/// `A^{ab}_{LN}`: entry `(k, l-1)` is the `k`-th Taylor coefficient at `a` of
/// `(z / (1 - conj(b) z))^l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    pub a: FieldElement,
    pub b: FieldElement,
    entries: Vec<Vec<FieldElement>>,
}

impl TransferMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn entry(&self, k: usize, l: usize) -> &FieldElement {
        &self.entries[k][l]
    }

    pub fn entries(&self) -> &[Vec<FieldElement>] {
        &self.entries
    }
}

/// Taylor coefficients at `a` of `z / (1 - conj(b) z)`, by exact series
/// division in the local variable `w = z - a`.
pub fn reflected_kernel(
    a: &FieldElement,
    b: &FieldElement,
    count: usize,
) -> Result<Vec<FieldElement>> {
    let field = a.field();
    let bc = b.conj();
    let d0 = &field.one() - &(&bc * a);
    if d0.is_zero() {
        return Err(Error::PoleAtPoint(a.to_string()));
    }
    series_div(&[a.clone(), field.one()], &[d0, -bc], count, field)
}

pub fn transfer_matrix(
    a: &FieldElement,
    b: &FieldElement,
    rows: usize,
    cols: usize,
) -> Result<TransferMatrix> {
    let field = a.field();
    let base = reflected_kernel(a, b, rows)?;
    let powers: Vec<Vec<FieldElement>> = (1..=cols)
        .map(|l| series_power(&base, l, rows, field))
        .collect();
    let entries = (0..rows)
        .map(|k| (0..cols).map(|l| powers[l][k].clone()).collect())
        .collect();
    Ok(TransferMatrix {
        a: a.clone(),
        b: b.clone(),
        entries,
    })
}

/// First `L` Taylor coefficients at `a` of `Σ_l x_l z^l / (1 - conj(b) z)^l`,
/// where `reflected` holds the already-conjugated pole coefficients `x_l`.
pub fn apply_transfer(t: &TransferMatrix, reflected: &[FieldElement]) -> Result<Vec<FieldElement>> {
    if reflected.len() != t.cols() {
        return Err(Error::DimensionMismatch(format!(
            "transfer matrix has {} columns, got {} coefficients",
            t.cols(),
            reflected.len()
        )));
    }
    let field = t.a.field();
    Ok(t.entries
        .iter()
        .map(|row| {
            row.iter()
                .zip(reflected)
                .fold(field.zero(), |acc, (e, x)| &acc + &(e * x))
        })
        .collect())
}
