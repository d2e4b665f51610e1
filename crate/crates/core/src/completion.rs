//! Completion of a unit-norm row of rational functions to a paraunitary
//! matrix: Bezout multipliers, the φ-row, the paraunitary `U` for it and a
//! constant unitary `W` with `V = U·W`.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldRef};
use crate::jl::{analytic_at, construct_paraunitary, ParaunitaryResult, PhiRow};
use crate::linalg;
use crate::matrix::{Certificate, RatMatrix};
use crate::poly::Poly;
use crate::ratfn::{PoleSpec, RationalFn};

/// Escalation of the Bezout degree past this value is flagged in reports.
pub const CORONA_DEGREE_NOTE: usize = 5;

/// The row to complete as displayed, `(v_1, …, v_{m-1}, ṽ_m)` with every
/// `v_i` analytic in the disk.
///
/// `reflected_poles[i]` lists the in-disk poles of `ṽ_i`: the tilde of the
/// displayed entry for `i < m`, the displayed entry itself for the last one.
/// `vm_disk_zeros` lists the in-disk zeros of `v_m`.
#[derive(Debug, Clone)]
pub struct UnitRow {
    field: FieldRef,
    entries: Vec<RationalFn>,
    reflected_poles: Vec<Vec<PoleSpec>>,
    vm_disk_zeros: Vec<PoleSpec>,
}

impl UnitRow {
    pub fn new(
        field: &FieldRef,
        entries: Vec<RationalFn>,
        reflected_poles: Vec<Vec<PoleSpec>>,
        vm_disk_zeros: Vec<PoleSpec>,
    ) -> Result<UnitRow> {
        let m = entries.len();
        if m < 2 {
            return Err(Error::DimensionMismatch(
                "a completion row needs at least two entries".into(),
            ));
        }
        if reflected_poles.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "pole data lists {} entries, row has {m}",
                reflected_poles.len()
            )));
        }
        if entries.iter().any(|e| !e.field().same_as(field)) {
            return Err(Error::FieldMismatch);
        }
        let row = UnitRow {
            field: field.clone(),
            entries,
            reflected_poles,
            vm_disk_zeros,
        };
        for i in 0..m {
            let t = row.tilde_v(i);
            for p in &row.reflected_poles[i] {
                p.check_exact(t.den())?;
            }
        }
        let vm = row.v(m - 1);
        for p in &row.vm_disk_zeros {
            p.check_exact(vm.num())?;
        }
        Ok(row)
    }

    /// A row with no in-disk poles or zeros declared.
    pub fn plain(field: &FieldRef, entries: Vec<RationalFn>) -> Result<UnitRow> {
        let m = entries.len();
        UnitRow::new(field, entries, vec![Vec::new(); m], Vec::new())
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[RationalFn] {
        &self.entries
    }

    pub fn reflected_poles(&self) -> &[Vec<PoleSpec>] {
        &self.reflected_poles
    }

    pub fn vm_disk_zeros(&self) -> &[PoleSpec] {
        &self.vm_disk_zeros
    }

    /// `v_i`, the analytic function behind entry `i`.
    pub fn v(&self, i: usize) -> RationalFn {
        if i + 1 == self.m() {
            self.entries[i].tilde()
        } else {
            self.entries[i].clone()
        }
    }

    pub fn tilde_v(&self, i: usize) -> RationalFn {
        if i + 1 == self.m() {
            self.entries[i].clone()
        } else {
            self.entries[i].tilde()
        }
    }
}

/// `Σ v_i·ṽ_i = 1` as an identity of canonical forms.
pub fn verify_unit_row(row: &UnitRow) -> bool {
    let mut acc = RationalFn::zero(&row.field);
    for e in &row.entries {
        acc = acc.add(&e.mul(&e.tilde()));
    }
    acc.is_one()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoronaSolution {
    pub h: Vec<Poly>,
    /// Degree bound at which the linear system first became solvable.
    pub degree: usize,
}

/// Polynomials `h_i` of degree at most `d`, for the least `d <= max_degree`
/// that works, with `Σ h_i·p_i = target`.
pub fn solve_bezout(polys: &[Poly], target: &Poly, max_degree: usize) -> Result<CoronaSolution> {
    let field = target.field().clone();
    if polys.is_empty() {
        return Err(Error::DimensionMismatch("no polynomials given".into()));
    }
    let top = polys.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let m = polys.len();
    for d in 0..=max_degree {
        let rows = (d + top + 1).max(target.degree().map_or(0, |t| t + 1));
        let cols = m * (d + 1);
        let mut a = vec![vec![field.zero(); cols]; rows];
        for (i, p) in polys.iter().enumerate() {
            for k in 0..=d {
                for (e, c) in p.coeffs().iter().enumerate() {
                    a[e + k][i * (d + 1) + k] = c.clone();
                }
            }
        }
        let b: Vec<FieldElement> = (0..rows).map(|e| target.coeff(e)).collect();
        if let Some(x) = linalg::solve_any(&a, &b, &field.zero()) {
            let h = (0..m)
                .map(|i| Poly::new(&field, x[i * (d + 1)..(i + 1) * (d + 1)].to_vec()))
                .collect();
            return Ok(CoronaSolution { h, degree: d });
        }
    }
    Err(Error::CoronaNotCertifiable { max_degree })
}

/// Numerators `p_i·Q_i` and the common denominator `Q` of the `v_i`.
fn cleared(row: &UnitRow) -> Result<(Vec<Poly>, Poly)> {
    let vs: Vec<RationalFn> = (0..row.m()).map(|i| row.v(i)).collect();
    let mut q = Poly::one(&row.field);
    for v in &vs {
        let g = q.gcd(v.den());
        q = q.mul(&v.den().divrem(&g)?.0);
    }
    let ps = vs
        .iter()
        .map(|v| Ok(v.num().mul(&q.divrem(v.den())?.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok((ps, q))
}

/// Default cap on the Bezout degree: `deg Q + max deg(p_i·Q_i)`.
pub fn default_max_degree(row: &UnitRow) -> Result<usize> {
    let (ps, q) = cleared(row)?;
    Ok(q.degree().unwrap_or(0) + ps.iter().filter_map(Poly::degree).max().unwrap_or(0))
}

/// Polynomial `h_i` with `Σ h_i·v_i = 1`.
pub fn solve_corona(row: &UnitRow, max_degree: usize) -> Result<CoronaSolution> {
    let (ps, q) = cleared(row)?;
    let sol = solve_bezout(&ps, &q, max_degree)?;
    let mut acc = RationalFn::zero(&row.field);
    for (i, h) in sol.h.iter().enumerate() {
        acc = acc.add(&RationalFn::from_poly(h.clone()).mul(&row.v(i)));
    }
    if !acc.is_one() {
        return Err(Error::Internal(format!(
            "Bezout multipliers give {acc} instead of 1"
        )));
    }
    Ok(sol)
}

/// `φ_i = [(ṽ_i - h_i)/v_m]-`, with `h = 0` when no multipliers are given.
pub fn build_phi_row(row: &UnitRow, h: Option<&CoronaSolution>) -> Result<PhiRow> {
    let m = row.m();
    let vm = row.v(m - 1);
    if vm.is_zero() {
        // then every ṽ_i must itself lie in R+, which forces constants
        if row.entries.iter().all(|e| e.as_constant().is_some()) {
            let zero = crate::ratfn::PartialFraction::zero(&row.field);
            return PhiRow::new(&row.field, m, vec![zero; m - 1]);
        }
        return Err(Error::Singular(
            "last entry vanishes identically; put a nonzero entry last".into(),
        ));
    }
    let mut fs = Vec::with_capacity(m - 1);
    let mut points: Vec<FieldElement> = row
        .vm_disk_zeros
        .iter()
        .map(|p| p.location.clone())
        .collect();
    for i in 0..m - 1 {
        let mut t = row.tilde_v(i);
        if let Some(h) = h {
            t = t.sub(&RationalFn::from_poly(h.h[i].clone()));
        }
        fs.push(t.div(&vm)?);
        points.extend(row.reflected_poles[i].iter().map(|p| p.location.clone()));
    }
    PhiRow::from_functions(&row.field, &fs, &points)
}

/// Whether the φ-row solves the `R+` conditions for the row at every listed
/// in-disk point.
pub fn phi_row_conditions(row: &UnitRow, phi: &PhiRow) -> Result<Vec<String>> {
    let m = row.m();
    let phis: Vec<RationalFn> = phi.phis().iter().map(|p| p.to_ratfn()).collect();
    let vs: Vec<RationalFn> = (0..m).map(|i| row.v(i)).collect();
    let neg: Vec<RationalFn> = (0..m).map(|i| row.tilde_v(i).neg()).collect();
    let mut points: Vec<FieldElement> = row
        .reflected_poles
        .iter()
        .flatten()
        .chain(&row.vm_disk_zeros)
        .map(|p| p.location.clone())
        .collect();
    points.sort();
    points.dedup();
    let mut bad = Vec::new();
    for a in &points {
        for i in 0..m - 1 {
            if !analytic_at(a, &[(&phis[i], &vs[m - 1])], &[&neg[i]])? {
                bad.push(format!("condition {} at {a}", i + 1));
            }
        }
        let pairs: Vec<(&RationalFn, &RationalFn)> =
            (0..m - 1).map(|i| (&phis[i], &vs[i])).collect();
        let last = row.tilde_v(m - 1);
        if !analytic_at(a, &pairs, &[&last])? {
            bad.push(format!("condition {m} at {a}"));
        }
    }
    Ok(bad)
}

fn norm_sq(c: &[FieldElement]) -> FieldElement {
    c.iter()
        .fold(c[0].field().zero(), |acc, x| &acc + &(x * &x.conj()))
}

fn conj_transpose(w: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let n = w.len();
    (0..n)
        .map(|i| (0..n).map(|j| w[j][i].conj()).collect())
        .collect()
}

fn const_mul(a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(a[0][0].field().zero(), |acc, k| {
                        &acc + &(&a[i][k] * &b[k][j])
                    })
                })
                .collect()
        })
        .collect()
}

fn is_unit_matrix(w: &[Vec<FieldElement>]) -> bool {
    w.iter().enumerate().all(|(i, r)| {
        r.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

fn check_constant_completion(c: &[FieldElement], w: &[Vec<FieldElement>]) -> Result<()> {
    if !is_unit_matrix(&const_mul(w, &conj_transpose(w))) {
        return Err(Error::Internal("constant completion is not unitary".into()));
    }
    if w.iter().zip(c).any(|(r, x)| r[0] != *x) {
        return Err(Error::Internal(
            "constant completion has the wrong first column".into(),
        ));
    }
    Ok(())
}

fn unit_vector(c: &[FieldElement]) -> Result<FieldRef> {
    let Some(first) = c.first() else {
        return Err(Error::DimensionMismatch("empty vector".into()));
    };
    let field = first.field().clone();
    if !norm_sq(c).is_one() {
        return Err(Error::NotUnitNorm(format!("|C|^2 = {}", norm_sq(c))));
    }
    Ok(field)
}

/// Constant unitary `W` with first column `C`, `|C| = 1`:
/// `W = [[c_1, -c'*], [c', γ·c'c'* - I]]` with `γ = (1 + conj c_1)/(1 - |c_1|^2)`,
/// a reflection followed by a sign change on the last `m-1` columns. When
/// `|c_1| = 1` the rest of `C` vanishes and `W = diag(c_1, 1, …, 1)`.
pub fn unitary_completion_constant(c: &[FieldElement]) -> Result<Vec<Vec<FieldElement>>> {
    let field = unit_vector(c)?;
    let n = c.len();
    let c1 = &c[0];
    let rest = &field.one() - &(c1 * &c1.conj());
    let mut w = vec![vec![field.zero(); n]; n];
    if rest.is_zero() {
        w[0][0] = c1.clone();
        for (k, row) in w.iter_mut().enumerate().skip(1) {
            row[k] = field.one();
        }
    } else {
        let gamma = (&field.one() + &c1.conj()).checked_div(&rest)?;
        w[0][0] = c1.clone();
        for k in 1..n {
            w[k][0] = c[k].clone();
            w[0][k] = -&c[k].conj();
            for l in 1..n {
                let mut x = &gamma * &(&c[k] * &c[l].conj());
                if k == l {
                    x = &x - &field.one();
                }
                w[k][l] = x;
            }
        }
    }
    check_constant_completion(c, &w)?;
    Ok(w)
}

/// Cayley variant `W = (I - A)(I + A)^-1` with `A` skew-Hermitian and
/// supported on its first row and column; `det W = 1` here, unlike the
/// default. Needs `1 + c_1 != 0`.
pub fn cayley_completion(c: &[FieldElement]) -> Result<Vec<Vec<FieldElement>>> {
    let field = unit_vector(c)?;
    let n = c.len();
    let c1 = &c[0];
    let p = &field.one() + c1;
    if p.is_zero() {
        return Err(Error::Singular(
            "Cayley completion needs 1 + c_1 != 0".into(),
        ));
    }
    let pc = p.conj();
    let mut a = vec![vec![field.zero(); n]; n];
    a[0][0] = (-&(c1 - &c1.conj())).checked_div(&(&p * &pc))?;
    for k in 1..n {
        a[0][k] = c[k].conj().checked_div(&pc)?;
        a[k][0] = (-&c[k]).checked_div(&p)?;
    }
    let id = |i: usize, j: usize| if i == j { field.one() } else { field.zero() };
    let minus: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| (0..n).map(|j| &id(i, j) - &a[i][j]).collect())
        .collect();
    let plus: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| (0..n).map(|j| &id(i, j) + &a[i][j]).collect())
        .collect();
    let w = const_mul(&minus, &linalg::inverse(&plus)?);
    check_constant_completion(c, &w)?;
    Ok(w)
}

#[derive(Debug, Clone)]
pub struct CompletionResult {
    /// Paraunitary with the given row as its first column.
    pub v: RatMatrix,
    /// `Vᵀ`, with the given row as its first row.
    pub v_t: RatMatrix,
    pub phi_row: PhiRow,
    pub corona: Option<CoronaSolution>,
    pub paraunitary: ParaunitaryResult,
    pub w: RatMatrix,
    pub certificate: Certificate,
}

/// Completes the row. Multipliers are only solved for when `v_m` has
/// declared zeros in the disk; otherwise `h = 0` already works.
pub fn complete(row: &UnitRow, max_degree: Option<usize>) -> Result<CompletionResult> {
    if !verify_unit_row(row) {
        return Err(Error::NotUnitNorm("Σ v_i·ṽ_i is not identically 1".into()));
    }
    let field = row.field.clone();
    let m = row.m();
    let corona = if row.vm_disk_zeros.is_empty() {
        None
    } else {
        let cap = match max_degree {
            Some(d) => d,
            None => default_max_degree(row)?,
        };
        Some(solve_corona(row, cap)?)
    };
    let phi_row = build_phi_row(row, corona.as_ref())?;
    let bad = phi_row_conditions(row, &phi_row)?;
    let mut certificate = Certificate::default();
    certificate.push(
        "φ-row solves the R+ conditions",
        bad.is_empty(),
        bad.join("; "),
    );
    if let Some(sol) = &corona {
        certificate.push(
            "Bezout multipliers found",
            true,
            if sol.degree > CORONA_DEGREE_NOTE {
                format!("degree {} exceeds {CORONA_DEGREE_NOTE}", sol.degree)
            } else {
                format!("degree {}", sol.degree)
            },
        );
    }
    let paraunitary = construct_paraunitary(&phi_row)?;
    certificate.extend("U: ", &paraunitary.certificate);
    let column: Vec<RationalFn> = row.entries.clone();
    let c = column
        .iter()
        .map(|e| e.eval(&field.one()))
        .collect::<Result<Vec<_>>>()?;
    let w_const = unitary_completion_constant(&c)?;
    certificate.push("W·W* = I and W·e1 = V1(1)", true, "");
    let w = RatMatrix::from_constants(&field, &w_const)?;
    let v = paraunitary.u.mul(&w)?;
    let first = v.column(0);
    let mismatch: Vec<String> = first
        .iter()
        .zip(&column)
        .enumerate()
        .filter(|(_, (x, y))| x != y)
        .map(|(i, (x, y))| format!("entry {}: {x} vs {y}", i + 1))
        .collect();
    certificate.push(
        "first column of V is the given row",
        mismatch.is_empty(),
        mismatch.join("; "),
    );
    let vv = v.mul(&v.tilde())?;
    certificate.push(
        "V·Ṽ = I",
        vv.is_identity(),
        if vv.is_identity() {
            String::new()
        } else {
            vv.to_string()
        },
    );
    let det = v.det()?;
    let det_ok = det.as_constant().is_some_and(|d| (&d * &d.conj()).is_one());
    certificate.push(
        "det V is a unimodular constant",
        det_ok,
        format!("det V = {det}"),
    );
    let certificate = certificate.into_result()?;
    debug_assert_eq!(v.nrows(), m);
    Ok(CompletionResult {
        v_t: v.transpose(),
        v,
        phi_row,
        corona,
        paraunitary,
        w,
        certificate,
    })
}
