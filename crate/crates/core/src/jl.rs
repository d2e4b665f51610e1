//! Construction of the unique paraunitary `U` with `det U = 1`, `U(1) = I`
//! and `F U` free of poles in the disk, where `F` is the identity with the
//! row `(φ_1, …, φ_{m-1}, 1)` at the bottom.
//!
//! Column `j` of `U` is `(u_1, …, u_{m-1}, ũ_m)` with
//! `ũ_i = C_i + Σ_k Σ_l C_ikl / (z - a_ik)^l`; the poles of `ũ_i` are those of
//! `φ_i` for `i < m` and the merged poles for `i = m`. One linear system in
//! the `C`'s is built and solved for all columns at once.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldRef};
use crate::linalg;
use crate::matrix::{Certificate, RatMatrix};
use crate::poly::Poly;
use crate::ratfn::{PartialFraction, PoleSpec, PoleTerm, RationalFn};
use crate::taylor::transfer_matrix;

/// The functions `φ_1, …, φ_{m-1}` in partial-fraction form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiRow {
    field: FieldRef,
    m: usize,
    phis: Vec<PartialFraction>,
}

impl PhiRow {
    pub fn new(field: &FieldRef, m: usize, phis: Vec<PartialFraction>) -> Result<PhiRow> {
        if m == 0 || phis.len() + 1 != m {
            return Err(Error::DimensionMismatch(format!(
                "a row for m = {m} needs {} functions, got {}",
                m.saturating_sub(1),
                phis.len()
            )));
        }
        let mut cleaned = Vec::with_capacity(phis.len());
        for phi in phis {
            if !phi.field().same_as(field) {
                return Err(Error::FieldMismatch);
            }
            if !phi.entire.is_zero() {
                return Err(Error::InconsistentPoles(format!(
                    "φ has a nonzero entire part {}",
                    phi.entire
                )));
            }
            for t in &phi.terms {
                if !t.pole.in_open_disk() {
                    return Err(Error::PoleOutsideDisk(t.pole.to_string()));
                }
            }
            cleaned.push(PartialFraction::from_terms(phi.entire, phi.terms)?);
        }
        Ok(PhiRow {
            field: field.clone(),
            m,
            phis: cleaned,
        })
    }

    /// Splits each function into its parts and keeps the disk part; every
    /// pole of each function must be among `poles`.
    pub fn from_functions(
        field: &FieldRef,
        fs: &[RationalFn],
        poles: &[FieldElement],
    ) -> Result<PhiRow> {
        let phis = fs
            .iter()
            .map(|f| f.minus_part(poles))
            .collect::<Result<Vec<_>>>()?;
        PhiRow::new(field, fs.len() + 1, phis)
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn phis(&self) -> &[PartialFraction] {
        &self.phis
    }

    /// `F`: identity with `(φ_1, …, φ_{m-1}, 1)` as last row.
    pub fn f_matrix(&self) -> RatMatrix {
        let mut f = RatMatrix::identity(&self.field, self.m);
        for (i, phi) in self.phis.iter().enumerate() {
            f.set(self.m - 1, i, phi.to_ratfn());
        }
        f
    }
}

/// Poles of each `ũ_i` and the flat numbering of the unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownLayout {
    pub m: usize,
    /// The merged poles `a_mν` with orders `N_mν`.
    pub merged_poles: Vec<PoleSpec>,
    /// `pole_tables[i]` lists the poles of `ũ_i`; the last entry equals
    /// `merged_poles`.
    pub pole_tables: Vec<Vec<PoleSpec>>,
    offsets: Vec<usize>,
    pub m0: usize,
}

impl UnknownLayout {
    /// Index of `C_i` (0-based `i`).
    pub fn constant_index(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// Index of `C_ikl` (0-based `i`, `k`; 1-based `l`).
    pub fn pole_index(&self, i: usize, k: usize, l: usize) -> usize {
        let before: usize = self.pole_tables[i][..k].iter().map(|p| p.order).sum();
        self.offsets[i] + 1 + before + l - 1
    }

    /// Human-readable name of every unknown, in layout order.
    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.m0);
        for (i, table) in self.pole_tables.iter().enumerate() {
            out.push(format!("C{}", i + 1));
            for (k, p) in table.iter().enumerate() {
                for l in 1..=p.order {
                    out.push(format!("C{}{}{}", i + 1, k + 1, l));
                }
            }
        }
        out
    }
}

pub fn merge_poles(row: &PhiRow) -> Result<UnknownLayout> {
    let mut tables: Vec<Vec<PoleSpec>> = Vec::with_capacity(row.m);
    let mut merged: Vec<PoleSpec> = Vec::new();
    for phi in &row.phis {
        let mut table = Vec::with_capacity(phi.terms.len());
        for t in &phi.terms {
            let spec = PoleSpec::new(t.pole.clone(), t.order())?;
            match merged.iter_mut().find(|p| p.location == spec.location) {
                Some(p) => p.order = p.order.max(spec.order),
                None => merged.push(spec.clone()),
            }
            table.push(spec);
        }
        tables.push(table);
    }
    merged.sort_by(|a, b| a.location.cmp(&b.location));
    tables.push(merged.clone());
    let mut offsets = Vec::with_capacity(row.m);
    let mut next = 0;
    for t in &tables {
        offsets.push(next);
        next += 1 + t.iter().map(|p| p.order).sum::<usize>();
    }
    Ok(UnknownLayout {
        m: row.m,
        merged_poles: merged,
        pole_tables: tables,
        offsets,
        m0: next,
    })
}

/// One equation `Σ direct_c x_c + Σ conj_c conj(x_c) = rhs`.
#[derive(Debug, Clone)]
struct Equation {
    direct: Vec<FieldElement>,
    conj: Vec<FieldElement>,
}

/// The linear system of one construction, possibly doubled into real and
/// imaginary parts. `rhs` has one column per requested column of `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JLSystem {
    pub matrix: Vec<Vec<FieldElement>>,
    pub rhs: Vec<Vec<FieldElement>>,
    pub columns: Vec<usize>,
    pub doubled: bool,
    pub unknowns: usize,
}

fn equations(layout: &UnknownLayout, row: &PhiRow) -> Result<Vec<Equation>> {
    let field = &row.field;
    let m = layout.m;
    let n = layout.m0;
    let blank = || Equation {
        direct: vec![field.zero(); n],
        conj: vec![field.zero(); n],
    };
    let mut eqs = Vec::with_capacity(n);

    // ũ_i(1) = δ_ij
    for (i, table) in layout.pole_tables.iter().enumerate() {
        let mut eq = blank();
        eq.direct[layout.constant_index(i)] = field.one();
        for (k, p) in table.iter().enumerate() {
            let gap_inv = (&field.one() - &p.location).inv()?;
            let mut w = field.one();
            for l in 1..=p.order {
                w = &w * &gap_inv;
                eq.direct[layout.pole_index(i, k, l)] = w.clone();
            }
        }
        eqs.push(eq);
    }

    // Adds Σ_p γ_p c_{p-l}{u_t, a} to `eq` (conjugated unknowns of ũ_t);
    // `transfers[τ]` is the transfer matrix from the τ-th pole of ũ_t to a.
    let add_hankel = |eq: &mut Equation,
                      gammas: &[FieldElement],
                      l: usize,
                      t: usize,
                      transfers: &[Vec<Vec<FieldElement>>]| {
        for (p, g) in gammas.iter().enumerate().map(|(idx, g)| (idx + 1, g)) {
            if p < l || g.is_zero() {
                continue;
            }
            let k = p - l;
            if k == 0 {
                let c = layout.constant_index(t);
                eq.conj[c] = &eq.conj[c] + g;
            }
            for (tau, spec) in layout.pole_tables[t].iter().enumerate() {
                for lp in 1..=spec.order {
                    let entry = &transfers[tau][k][lp - 1];
                    if entry.is_zero() {
                        continue;
                    }
                    let c = layout.pole_index(t, tau, lp);
                    eq.conj[c] = &eq.conj[c] + &(g * entry);
                }
            }
        }
    };

    let transfers_at =
        |a: &FieldElement, rows: usize, t: usize| -> Result<Vec<Vec<Vec<FieldElement>>>> {
            layout.pole_tables[t]
                .iter()
                .map(|spec| {
                    Ok(transfer_matrix(a, &spec.location, rows, spec.order)?
                        .entries()
                        .to_vec())
                })
                .collect()
        };

    // Principal parts of φ_i u_m - ũ_i at each pole of φ_i.
    for (i, phi) in row.phis.iter().enumerate() {
        for (k, term) in phi.terms.iter().enumerate() {
            let big_n = term.order();
            let transfers = transfers_at(&term.pole, big_n, m - 1)?;
            for l in 1..=big_n {
                let mut eq = blank();
                add_hankel(&mut eq, &term.coeffs, l, m - 1, &transfers);
                let c = layout.pole_index(i, k, l);
                eq.direct[c] = &eq.direct[c] - &field.one();
                eqs.push(eq);
            }
        }
    }

    // Principal parts of Σ φ_i u_i + ũ_m at each merged pole.
    for (k, spec) in layout.merged_poles.iter().enumerate() {
        let big_n = spec.order;
        let mut block: Vec<Equation> = (0..big_n).map(|_| blank()).collect();
        for (i, phi) in row.phis.iter().enumerate() {
            let Some(term) = phi.terms.iter().find(|t| t.pole == spec.location) else {
                continue;
            };
            let transfers = transfers_at(&spec.location, big_n, i)?;
            for (l, eq) in block.iter_mut().enumerate() {
                add_hankel(eq, &term.coeffs, l + 1, i, &transfers);
            }
        }
        for (l, mut eq) in block.into_iter().enumerate() {
            let c = layout.pole_index(m - 1, k, l + 1);
            eq.direct[c] = &eq.direct[c] + &field.one();
            eqs.push(eq);
        }
    }
    debug_assert_eq!(eqs.len(), n);
    Ok(eqs)
}

fn assemble(layout: &UnknownLayout, row: &PhiRow, columns: &[usize]) -> Result<JLSystem> {
    let field = &row.field;
    let m = layout.m;
    for &j in columns {
        if j == 0 || j > m {
            return Err(Error::DimensionMismatch(format!(
                "column {j} outside 1..={m}"
            )));
        }
    }
    let eqs = equations(layout, row)?;
    let n = layout.m0;
    let rhs_value = |r: usize, j: usize| {
        if r < m && r + 1 == j {
            field.one()
        } else {
            field.zero()
        }
    };
    if !field.is_gaussian() {
        let matrix = eqs
            .iter()
            .map(|eq| eq.direct.iter().zip(&eq.conj).map(|(a, b)| a + b).collect())
            .collect();
        let rhs = (0..n)
            .map(|r| columns.iter().map(|&j| rhs_value(r, j)).collect())
            .collect();
        return Ok(JLSystem {
            matrix,
            rhs,
            columns: columns.to_vec(),
            doubled: false,
            unknowns: n,
        });
    }
    // x = X + iY: real parts first, then imaginary parts.
    let mut matrix = Vec::with_capacity(2 * n);
    let mut rhs = Vec::with_capacity(2 * n);
    for (r, eq) in eqs.iter().enumerate() {
        let mut re_row = Vec::with_capacity(2 * n);
        let mut im_row = Vec::with_capacity(2 * n);
        for (a, b) in eq.direct.iter().zip(&eq.conj) {
            re_row.push(&a.re() + &b.re());
            im_row.push(&a.im() + &b.im());
        }
        for (a, b) in eq.direct.iter().zip(&eq.conj) {
            re_row.push(&b.im() - &a.im());
            im_row.push(&a.re() - &b.re());
        }
        matrix.push(re_row);
        matrix.push(im_row);
        rhs.push(columns.iter().map(|&j| rhs_value(r, j).re()).collect());
        rhs.push(columns.iter().map(|&j| rhs_value(r, j).im()).collect());
    }
    Ok(JLSystem {
        matrix,
        rhs,
        columns: columns.to_vec(),
        doubled: true,
        unknowns: n,
    })
}

/// The system for column `j` (1-based).
pub fn build_column_system(layout: &UnknownLayout, row: &PhiRow, j: usize) -> Result<JLSystem> {
    assemble(layout, row, &[j])
}

/// Solves for every right-hand side; one solution vector per column.
pub fn solve_system(sys: &JLSystem) -> Result<Vec<Vec<FieldElement>>> {
    let x = linalg::solve_multi(&sys.matrix, &sys.rhs)?;
    let n = sys.unknowns;
    let cols = sys.columns.len();
    if !sys.doubled {
        return Ok((0..cols)
            .map(|c| x.iter().map(|r| r[c].clone()).collect())
            .collect());
    }
    let field = x[0][0].field().clone();
    let i = field
        .imag_unit()
        .ok_or_else(|| Error::Internal("doubled system over a real field".into()))?;
    Ok((0..cols)
        .map(|c| (0..n).map(|u| &x[u][c] + &(&i * &x[n + u][c])).collect())
        .collect())
}

/// Result of the construction with its exact certificate.
#[derive(Debug, Clone)]
pub struct ParaunitaryResult {
    pub u: RatMatrix,
    pub layout: UnknownLayout,
    /// `solutions[j]` holds the unknowns of column `j + 1` in layout order.
    pub solutions: Vec<Vec<FieldElement>>,
    pub certificate: Certificate,
}

/// `C_i + Σ C_ikl/(z - a_ik)^l` from a solution vector.
fn tilde_side(
    layout: &UnknownLayout,
    i: usize,
    x: &[FieldElement],
    field: &FieldRef,
) -> PartialFraction {
    let terms = layout.pole_tables[i]
        .iter()
        .enumerate()
        .map(|(k, p)| PoleTerm {
            pole: p.location.clone(),
            coeffs: (1..=p.order)
                .map(|l| x[layout.pole_index(i, k, l)].clone())
                .collect(),
        })
        .collect();
    PartialFraction {
        entire: Poly::new(field, vec![x[layout.constant_index(i)].clone()]),
        terms,
    }
}

pub fn construct_paraunitary(row: &PhiRow) -> Result<ParaunitaryResult> {
    let field = row.field.clone();
    let m = row.m;
    let layout = merge_poles(row)?;
    let columns: Vec<usize> = (1..=m).collect();
    let sys = assemble(&layout, row, &columns)?;
    let solutions = solve_system(&sys)?;
    let mut u = RatMatrix::zeros(&field, m, m);
    for (j, x) in solutions.iter().enumerate() {
        for i in 0..m {
            let side = tilde_side(&layout, i, x, &field).to_ratfn();
            u.set(i, j, if i + 1 == m { side } else { side.tilde() });
        }
    }
    let certificate = certify(row, &layout, &u)?.into_result()?;
    Ok(ParaunitaryResult {
        u,
        layout,
        solutions,
        certificate,
    })
}

/// Exact checks of every defining property of `U` for the row.
pub fn certify(row: &PhiRow, layout: &UnknownLayout, u: &RatMatrix) -> Result<Certificate> {
    let field = &row.field;
    let m = row.m;
    let mut cert = Certificate::default();
    let ut = u.tilde();
    let uu = u.mul(&ut)?;
    cert.push("U·Ũ = I", uu.is_identity(), detail_identity(&uu));
    let gram = ut.mul(u)?;
    cert.push(
        "column Gram functions constant (Ũ·U = I)",
        gram.is_identity(),
        detail_identity(&gram),
    );
    let det = u.det()?;
    cert.push("det U = 1", det.is_one(), format!("det U = {det}"));
    let at_one = u.eval(&field.one());
    let unit_ok = match &at_one {
        Ok(v) => v.iter().enumerate().all(|(i, r)| {
            r.iter()
                .enumerate()
                .all(|(j, e)| if i == j { e.is_one() } else { e.is_zero() })
        }),
        Err(_) => false,
    };
    cert.push(
        "U(1) = I",
        unit_ok,
        match at_one {
            Ok(_) => String::new(),
            Err(e) => e.to_string(),
        },
    );
    let phis: Vec<RationalFn> = row.phis.iter().map(PartialFraction::to_ratfn).collect();
    let tildes: Vec<Vec<RationalFn>> = u
        .rows()
        .iter()
        .map(|r| r.iter().map(RationalFn::tilde).collect())
        .collect();
    let mut bad_fu = Vec::new();
    let mut bad = Vec::new();
    for p in &layout.merged_poles {
        let a = &p.location;
        for j in 0..m {
            // FU: the first m-1 rows are rows of U, the last is Σ φ_i u_ij + u_mj
            let last: Vec<(&RationalFn, &RationalFn)> =
                (0..m - 1).map(|i| (&phis[i], u.get(i, j))).collect();
            for i in 0..m - 1 {
                if !analytic_at(a, &[], &[u.get(i, j)])? {
                    bad_fu.push(format!("FU[{},{}] at {a}", i + 1, j + 1));
                }
            }
            if !analytic_at(a, &last, &[u.get(m - 1, j)])? {
                bad_fu.push(format!("FU[{m},{}] at {a}", j + 1));
                bad.push(format!("column {} condition {m} at {a}", j + 1));
            }
            for i in 0..m - 1 {
                let neg = tildes[i][j].neg();
                if !analytic_at(a, &[(&phis[i], &tildes[m - 1][j])], &[&neg])? {
                    bad.push(format!("column {} condition {} at {a}", j + 1, i + 1));
                }
            }
        }
    }
    cert.push(
        "FU has no poles at the merged poles",
        bad_fu.is_empty(),
        bad_fu.join("; "),
    );
    cert.push(
        "columns solve the R+ conditions",
        bad.is_empty(),
        bad.join("; "),
    );
    Ok(cert)
}

/// Whether `Σ f·g + Σ h` is analytic at `a`, from truncated Laurent
/// expansions of the factors rather than the expanded sum.
pub(crate) fn analytic_at(
    a: &FieldElement,
    products: &[(&RationalFn, &RationalFn)],
    singles: &[&RationalFn],
) -> Result<bool> {
    let all = products
        .iter()
        .flat_map(|(f, g)| [*f, *g])
        .chain(singles.iter().copied());
    let orders: Vec<usize> = all.clone().map(|f| f.pole_order(a)).collect();
    let reach = orders.iter().copied().max().unwrap_or(0);
    if reach == 0 {
        return Ok(true);
    }
    let depth = 2 * reach;
    let field = a.field();
    // acc[d - 1] holds the coefficient of (z - a)^-d
    let mut acc = vec![field.zero(); depth];
    let window = |f: &RationalFn, v: usize| f.laurent_window(a, v, v + reach);
    let mut k = 0;
    for (f, g) in products {
        let (vf, vg) = (orders[k], orders[k + 1]);
        k += 2;
        if vf + vg == 0 {
            continue;
        }
        let (lf, lg) = (window(f, vf)?, window(g, vg)?);
        for (x, cf) in lf.iter().enumerate() {
            if cf.is_zero() {
                continue;
            }
            for (y, cg) in lg.iter().enumerate() {
                let e = x as i64 - vf as i64 + y as i64 - vg as i64;
                if e < 0 && !cg.is_zero() {
                    let d = (-e) as usize - 1;
                    acc[d] = &acc[d] + &(cf * cg);
                }
            }
        }
    }
    for h in singles {
        let v = orders[k];
        k += 1;
        for (d, c) in h.principal_part(a, v)?.into_iter().enumerate() {
            acc[d] = &acc[d] + &c;
        }
    }
    Ok(acc.iter().all(FieldElement::is_zero))
}

fn detail_identity(m: &RatMatrix) -> String {
    if m.is_identity() {
        return String::new();
    }
    match m.diff(&RatMatrix::identity(m.field(), m.nrows())) {
        Ok(d) => d
            .iter()
            .map(|(i, j, x, _)| format!("[{},{}] = {x}", i + 1, j + 1))
            .collect::<Vec<_>>()
            .join("; "),
        Err(e) => e.to_string(),
    }
}
