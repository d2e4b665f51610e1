//! Exact Gaussian elimination over any field type. Pivoting always takes the
//! first nonzero entry of the column, which keeps results reproducible.

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::ratfn::RationalFn;

pub trait Scalar: Clone {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Result<Self>;
}

impl Scalar for FieldElement {
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Result<Self> {
        FieldElement::inv(self)
    }
}

impl Scalar for RationalFn {
    fn is_zero(&self) -> bool {
        RationalFn::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        RationalFn::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RationalFn::one(self.field())
    }
    fn add(&self, other: &Self) -> Self {
        RationalFn::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RationalFn::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFn::mul(self, other)
    }
    fn inv(&self) -> Result<Self> {
        RationalFn::inv(self)
    }
}

fn check_square<T>(a: &[Vec<T>]) -> Result<usize> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    Ok(n)
}

/// Solves `A X = B` for square nonsingular `A` and several right-hand sides
/// (columns of `B`).
pub fn solve_multi<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = check_square(a)?;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, expected {n}",
            b.len()
        )));
    }
    let k = b.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| row.iter().chain(rhs.iter()).cloned().collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| Error::Singular(format!("no pivot in column {col}")))?;
        aug.swap(col, pivot);
        let inv = aug[col][col].inv()?;
        for entry in aug[col].iter_mut().skip(col) {
            *entry = entry.mul(&inv);
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, p) in pivot_row.iter().enumerate().skip(col) {
                if !p.is_zero() {
                    row[c] = row[c].sub(&factor.mul(p));
                }
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[n..n + k].to_vec()).collect())
}

pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Result<Vec<T>> {
    let rhs: Vec<Vec<T>> = b.iter().map(|x| vec![x.clone()]).collect();
    Ok(solve_multi(a, &rhs)?
        .into_iter()
        .map(|mut r| r.remove(0))
        .collect())
}

pub fn inverse<T: Scalar>(a: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = check_square(a)?;
    let Some(sample) = a.first().and_then(|r| r.first()) else {
        return Ok(Vec::new());
    };
    let (zero, one) = (sample.zero_like(), sample.one_like());
    let id: Vec<Vec<T>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    solve_multi(a, &id)
}

/// Determinant by elimination; `one` is returned for the empty matrix.
pub fn det<T: Scalar>(a: &[Vec<T>], one: &T) -> Result<T> {
    let n = check_square(a)?;
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut acc = one.clone();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(one.zero_like());
        };
        if pivot != col {
            m.swap(col, pivot);
            acc = acc.zero_like().sub(&acc);
        }
        acc = acc.mul(&m[col][col]);
        let inv = m[col][col].inv()?;
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].mul(&inv);
            for (c, p) in pivot_row.iter().enumerate().skip(col) {
                if !p.is_zero() {
                    row[c] = row[c].sub(&factor.mul(p));
                }
            }
        }
    }
    Ok(acc)
}

/// Some solution of a possibly rectangular system, free variables set to
/// zero; `None` when inconsistent.
pub fn solve_any<T: Scalar>(a: &[Vec<T>], b: &[T], zero: &T) -> Option<Vec<T>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().ok()?;
        for entry in m[r].iter_mut().skip(c) {
            *entry = entry.mul(&inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (j, p) in pivot_row.iter().enumerate().skip(c) {
                if !p.is_zero() {
                    row[j] = row[j].sub(&factor.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![zero.clone(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    #[test]
    fn solve_small_system() {
        let q = FieldDescriptor::rational();
        let a = vec![
            vec![q.from_int(0), q.from_int(2)],
            vec![q.from_int(3), q.from_int(1)],
        ];
        let x = solve(&a, &[q.from_int(4), q.from_int(5)]).unwrap();
        assert_eq!(x, vec![q.from_int(1), q.from_int(2)]);
        assert_eq!(det(&a, &q.one()).unwrap(), q.from_int(-6));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][1], q.from_ratio(1, 3));
    }

    #[test]
    fn singular_is_reported() {
        let q = FieldDescriptor::rational();
        let a = vec![
            vec![q.from_int(1), q.from_int(2)],
            vec![q.from_int(2), q.from_int(4)],
        ];
        assert!(matches!(
            solve(&a, &[q.one(), q.one()]),
            Err(Error::Singular(_))
        ));
        assert!(det(&a, &q.one()).unwrap().is_zero());
    }

    #[test]
    fn underdetermined_and_inconsistent() {
        let q = FieldDescriptor::rational();
        let a = vec![vec![q.from_int(1), q.from_int(1), q.from_int(0)]];
        let x = solve_any(&a, &[q.from_int(3)], &q.zero()).unwrap();
        assert_eq!(x, vec![q.from_int(3), q.zero(), q.zero()]);
        let b = vec![vec![q.from_int(1)], vec![q.from_int(2)]];
        assert!(solve_any(&b, &[q.one(), q.one()], &q.zero()).is_none());
    }
}
