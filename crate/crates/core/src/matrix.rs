use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldRef};
use crate::linalg;
use crate::poly::{interpolate, Poly};
use crate::ratfn::RationalFn;

/// Dense matrix of rational functions, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    field: FieldRef,
    rows: Vec<Vec<RationalFn>>,
}

impl RatMatrix {
    pub fn new(field: &FieldRef, rows: Vec<Vec<RationalFn>>) -> Result<RatMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|e| !e.field().same_as(field)) {
            return Err(Error::FieldMismatch);
        }
        Ok(RatMatrix {
            field: field.clone(),
            rows,
        })
    }

    pub fn zeros(field: &FieldRef, rows: usize, cols: usize) -> RatMatrix {
        RatMatrix {
            field: field.clone(),
            rows: vec![vec![RationalFn::zero(field); cols]; rows],
        }
    }

    pub fn identity(field: &FieldRef, n: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(field, n, n);
        for i in 0..n {
            m.rows[i][i] = RationalFn::one(field);
        }
        m
    }

    pub fn from_constants(field: &FieldRef, rows: &[Vec<FieldElement>]) -> Result<RatMatrix> {
        RatMatrix::new(
            field,
            rows.iter()
                .map(|r| r.iter().cloned().map(RationalFn::constant).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFn {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RationalFn) {
        self.rows[i][j] = value;
    }

    pub fn rows(&self) -> &[Vec<RationalFn>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<RationalFn> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.ncols() != other.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        let rows = (0..self.nrows())
            .map(|i| {
                (0..other.ncols())
                    .map(|j| {
                        let mut acc = RationalFn::zero(&self.field);
                        for k in 0..self.ncols() {
                            let (x, y) = (&self.rows[i][k], &other.rows[k][j]);
                            if !x.is_zero() && !y.is_zero() {
                                acc = acc.add(&x.mul(y));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(RatMatrix {
            field: self.field.clone(),
            rows,
        })
    }

    pub fn transpose(&self) -> RatMatrix {
        let rows = (0..self.ncols()).map(|j| self.column(j)).collect();
        RatMatrix {
            field: self.field.clone(),
            rows,
        }
    }

    /// `[tilde(a_ji)]`.
    pub fn tilde(&self) -> RatMatrix {
        let rows = (0..self.ncols())
            .map(|j| self.rows.iter().map(|r| r[j].tilde()).collect())
            .collect();
        RatMatrix {
            field: self.field.clone(),
            rows,
        }
    }

    pub fn scale(&self, c: &FieldElement) -> RatMatrix {
        RatMatrix {
            field: self.field.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|e| e.scale(c)).collect())
                .collect(),
        }
    }

    pub fn eval(&self, x: &FieldElement) -> Result<Vec<Vec<FieldElement>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.eval(x)).collect())
            .collect()
    }

    /// Determinant. Each row is cleared by the lcm of its denominators;
    /// the polynomial determinant is recovered by evaluation at integer
    /// points and interpolation, which avoids rational-function elimination.
    pub fn det(&self) -> Result<RationalFn> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.nrows();
        if n == 0 {
            return Ok(RationalFn::one(&self.field));
        }
        if n == 1 {
            return Ok(self.rows[0][0].clone());
        }
        let mut cleared: Vec<Vec<Poly>> = Vec::with_capacity(n);
        let mut scale = Poly::one(&self.field);
        let mut bound = 0usize;
        for row in &self.rows {
            let mut lcm = Poly::one(&self.field);
            for e in row {
                let d = e.den();
                if d.is_one() || *d == lcm {
                    continue;
                }
                let g = lcm.gcd(d);
                lcm = lcm.mul(&d.divrem(&g)?.0);
            }
            let mut out = Vec::with_capacity(n);
            let mut row_bound = 0usize;
            for e in row {
                let p = e.num().mul(&lcm.divrem(e.den())?.0);
                row_bound = row_bound.max(p.degree().unwrap_or(0));
                out.push(p);
            }
            scale = scale.mul(&lcm);
            bound += row_bound;
            cleared.push(out);
        }
        let points: Vec<FieldElement> =
            (0..=bound).map(|k| self.field.from_int(k as i64)).collect();
        let values = points
            .iter()
            .map(|x| {
                let m: Vec<Vec<FieldElement>> = cleared
                    .iter()
                    .map(|r| r.iter().map(|p| p.eval(x)).collect())
                    .collect();
                linalg::det(&m, &self.field.one())
            })
            .collect::<Result<Vec<_>>>()?;
        let num = interpolate(&points, &values, &self.field)?;
        RationalFn::new(num, scale)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.rows.iter().enumerate().all(|(i, r)| {
                r.iter()
                    .enumerate()
                    .all(|(j, e)| if i == j { e.is_one() } else { e.is_zero() })
            })
    }

    /// Leading `n x n` block.
    pub fn principal(&self, n: usize) -> RatMatrix {
        RatMatrix {
            field: self.field.clone(),
            rows: self.rows[..n].iter().map(|r| r[..n].to_vec()).collect(),
        }
    }

    /// `blockdiag(self, I)` of total size `n`.
    pub fn embed(&self, n: usize) -> RatMatrix {
        let mut out = RatMatrix::identity(&self.field, n);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, e) in r.iter().enumerate() {
                out.rows[i][j] = e.clone();
            }
        }
        out
    }

    /// Entries where the two matrices differ, as `(row, col, left, right)`.
    pub fn diff(&self, other: &RatMatrix) -> Result<Vec<(usize, usize, RationalFn, RationalFn)>> {
        if self.nrows() != other.nrows() || self.ncols() != other.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        let mut out = Vec::new();
        for (i, (a, b)) in self.rows.iter().zip(&other.rows).enumerate() {
            for (j, (x, y)) in a.iter().zip(b).enumerate() {
                if x != y {
                    out.push((i, j, x.clone(), y.clone()));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
            if i + 1 < self.rows.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix(\n{self}\n)")
    }
}

/// One named exact check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificate {
    pub checks: Vec<Check>,
}

impl Certificate {
    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, prefix: &str, other: &Certificate) {
        for c in &other.checks {
            self.checks.push(Check {
                name: format!("{prefix}{}", c.name),
                passed: c.passed,
                detail: c.detail.clone(),
            });
        }
    }

    /// `Err(Internal)` naming the first failed check.
    pub fn into_result(self) -> Result<Certificate> {
        if let Some(c) = self.failures().next() {
            return Err(Error::Internal(format!(
                "certificate check '{}' failed: {}",
                c.name, c.detail
            )));
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    fn rf(field: &FieldRef, num: &[i64], den: &[i64]) -> RationalFn {
        let p = |c: &[i64]| Poly::new(field, c.iter().map(|&x| field.from_int(x)).collect());
        RationalFn::new(p(num), p(den)).unwrap()
    }

    #[test]
    fn identity_and_product() {
        let q = FieldDescriptor::rational();
        let a = RatMatrix::new(
            &q,
            vec![
                vec![rf(&q, &[1, 1], &[1]), rf(&q, &[0], &[1])],
                vec![rf(&q, &[2], &[1, 2]), rf(&q, &[1], &[1])],
            ],
        )
        .unwrap();
        let id = RatMatrix::identity(&q, 2);
        assert_eq!(a.mul(&id).unwrap(), a);
        assert!(id.is_identity());
        assert_eq!(a.det().unwrap(), rf(&q, &[1, 1], &[1]));
        let b = RatMatrix::new(
            &q,
            vec![
                vec![
                    rf(&q, &[1], &[1, 1]),
                    rf(&q, &[0, 1], &[2, 1]),
                    rf(&q, &[3], &[1]),
                ],
                vec![
                    rf(&q, &[1, 1], &[3, 1]),
                    rf(&q, &[1], &[1, 1]),
                    rf(&q, &[0], &[1]),
                ],
                vec![
                    rf(&q, &[2], &[1]),
                    rf(&q, &[1, 0, 1], &[5, 1]),
                    rf(&q, &[1], &[2, 1]),
                ],
            ],
        )
        .unwrap();
        let by_elimination = linalg::det(b.rows(), &RationalFn::one(&q)).unwrap();
        assert_eq!(b.det().unwrap(), by_elimination);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.tilde().tilde(), a);
    }

    #[test]
    fn embed_and_diff() {
        let q = FieldDescriptor::rational();
        let a = RatMatrix::from_constants(&q, &[vec![q.from_int(2)]]).unwrap();
        let e = a.embed(3);
        assert_eq!(e.principal(1), a);
        let d = e.diff(&RatMatrix::identity(&q, 3)).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].0, d[0].1), (0, 0));
    }
}
