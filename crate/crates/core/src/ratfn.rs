//! Rational functions in canonical form, the tilde involution, Taylor and
//! Laurent coefficient extraction, and the `R+ ⊕ R-` splitting.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldRef};
use crate::poly::{series_div, Poly};

/// `num / den` with `gcd(num, den) = 1` and `den` monic. Equality of rational
/// functions is equality of these canonical pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFn::zero(num.field()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.divrem(&g)?.0, den.divrem(&g)?.0)
        };
        Ok(RationalFn::normalized(num, den))
    }

    /// Assumes `num` and `den` are coprime; only rescales to a monic
    /// denominator.
    fn normalized(num: Poly, den: Poly) -> RationalFn {
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            return RationalFn { num, den };
        }
        let inv = lead.inv().expect("nonzero leading coefficient");
        RationalFn {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Poly) -> RationalFn {
        let one = Poly::one(p.field());
        RationalFn { num: p, den: one }
    }

    pub fn constant(c: FieldElement) -> RationalFn {
        RationalFn::from_poly(Poly::constant(c))
    }

    pub fn zero(field: &FieldRef) -> RationalFn {
        RationalFn::from_poly(Poly::zero(field))
    }

    pub fn one(field: &FieldRef) -> RationalFn {
        RationalFn::from_poly(Poly::one(field))
    }

    pub fn z(field: &FieldRef) -> RationalFn {
        RationalFn::from_poly(Poly::z(field))
    }

    pub fn field(&self) -> &FieldRef {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant function (degree-0 numerator over the unit denominator).
    pub fn as_constant(&self) -> Option<FieldElement> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RationalFn::new(self.num.add(&other.num), self.den.clone())
                .expect("nonzero denominator");
        }
        let g = self.den.gcd(&other.den);
        let (b, d) = if g.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (
                self.den.divrem(&g).expect("gcd divides").0,
                other.den.divrem(&g).expect("gcd divides").0,
            )
        };
        let num = self.num.mul(&d).add(&other.num.mul(&b));
        let den = self.den.mul(&d);
        RationalFn::new(num, den).expect("nonzero denominator")
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        if self.is_zero() || other.is_zero() {
            return RationalFn::zero(self.field());
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let cancel = |p: &Poly, g: &Poly| {
            if g.is_one() {
                p.clone()
            } else {
                p.divrem(g).expect("gcd divides").0
            }
        };
        let num = cancel(&self.num, &g1).mul(&cancel(&other.num, &g2));
        let den = cancel(&self.den, &g2).mul(&cancel(&other.den, &g1));
        RationalFn::normalized(num, den)
    }

    pub fn scale(&self, c: &FieldElement) -> RationalFn {
        if c.is_zero() {
            return RationalFn::zero(self.field());
        }
        RationalFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RationalFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFn::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RationalFn) -> Result<RationalFn> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, exp: i32) -> Result<RationalFn> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        Ok(RationalFn {
            num: base.num.pow(exp.unsigned_abs() as usize),
            den: base.den.pow(exp.unsigned_abs() as usize),
        })
    }

    /// `f~(z) = conj(f(1 / conj z))`.
    pub fn tilde(&self) -> RationalFn {
        if self.is_zero() {
            return self.clone();
        }
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let n = dn.max(dd);
        // reflection keeps the pair coprime: at least one side has degree n,
        // so z never divides both reflected polynomials
        RationalFn::normalized(self.num.reflect(n), self.den.reflect(n))
    }

    /// Coefficient-wise conjugate: `conj(f(conj z))`.
    pub fn conj(&self) -> RationalFn {
        RationalFn {
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }

    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::PoleAtPoint(x.to_string()));
        }
        self.num.eval(x).checked_div(&d)
    }

    /// Order of the pole at `a` (zero when `f` is analytic there).
    pub fn pole_order(&self, a: &FieldElement) -> usize {
        self.den.root_multiplicity(a)
    }

    /// First `count` Taylor coefficients at `a`.
    pub fn taylor_coeffs(&self, a: &FieldElement, count: usize) -> Result<Vec<FieldElement>> {
        if self.den.eval(a).is_zero() {
            return Err(Error::PoleAtPoint(a.to_string()));
        }
        series_div(
            &self.num.taylor_shift(a),
            &self.den.taylor_shift(a),
            count,
            self.field(),
        )
    }

    /// Laurent coefficients `[c_-1, …, c_-bound]` at `a`, zero padded.
    pub fn principal_part(&self, a: &FieldElement, bound: usize) -> Result<Vec<FieldElement>> {
        let field = self.field();
        let den_shift = self.den.taylor_shift(a);
        let mult = den_shift.iter().take_while(|c| c.is_zero()).count();
        if mult > bound {
            return Err(Error::InconsistentPoles(format!(
                "pole at {a} has order {mult}, more than the declared {bound}"
            )));
        }
        let mut out = vec![field.zero(); bound];
        if mult == 0 {
            return Ok(out);
        }
        let t = series_div(&self.num.taylor_shift(a), &den_shift[mult..], mult, field)?;
        for l in 1..=mult {
            out[l - 1] = t[mult - l].clone();
        }
        Ok(out)
    }

    /// Laurent coefficients at `a` for exponents `-neg .. -neg + count`.
    /// Fails when the pole at `a` is deeper than `neg`.
    pub fn laurent_window(
        &self,
        a: &FieldElement,
        neg: usize,
        count: usize,
    ) -> Result<Vec<FieldElement>> {
        let field = self.field();
        let mut out = vec![field.zero(); count];
        if self.is_zero() {
            return Ok(out);
        }
        let den_shift = self.den.taylor_shift(a);
        let v = den_shift.iter().take_while(|c| c.is_zero()).count();
        if v > neg {
            return Err(Error::PoleAtPoint(a.to_string()));
        }
        let skip = neg - v;
        if count <= skip {
            return Ok(out);
        }
        let s = series_div(
            &self.num.taylor_shift(a),
            &den_shift[v..],
            count - skip,
            field,
        )?;
        for (idx, c) in s.into_iter().enumerate() {
            out[idx + skip] = c;
        }
        Ok(out)
    }

    /// The `R-` part over the candidate points (each with its true
    /// multiplicity); candidates that are not poles are skipped.
    pub fn minus_part(&self, candidates: &[FieldElement]) -> Result<PartialFraction> {
        let mut points: Vec<FieldElement> = candidates.to_vec();
        points.sort();
        points.dedup();
        let mut terms = Vec::new();
        for a in points {
            let mult = self.pole_order(&a);
            if mult == 0 {
                continue;
            }
            let coeffs = self.principal_part(&a, mult)?;
            terms.push(PoleTerm { pole: a, coeffs });
        }
        Ok(PartialFraction {
            entire: Poly::zero(self.field()),
            terms,
        })
    }
}

/// A pole location in the open disk with its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleSpec {
    pub location: FieldElement,
    pub order: usize,
}

impl PoleSpec {
    pub fn new(location: FieldElement, order: usize) -> Result<PoleSpec> {
        if !location.in_open_disk() {
            return Err(Error::PoleOutsideDisk(location.to_string()));
        }
        if order == 0 {
            return Err(Error::InconsistentPoles(format!(
                "pole at {location} declared with order 0"
            )));
        }
        Ok(PoleSpec { location, order })
    }

    /// Checks that `den` vanishes at the location to exactly the stated order.
    pub fn check_exact(&self, den: &Poly) -> Result<()> {
        let mult = den.root_multiplicity(&self.location);
        if mult != self.order {
            return Err(Error::InconsistentPoles(format!(
                "declared pole {} of order {} but the denominator vanishes there to order {}",
                self.location, self.order, mult
            )));
        }
        Ok(())
    }
}

/// `Σ_l coeffs[l-1] / (z - pole)^l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleTerm {
    pub pole: FieldElement,
    pub coeffs: Vec<FieldElement>,
}

impl PoleTerm {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
}

/// `entire + Σ terms`, poles pairwise distinct in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFraction {
    pub entire: Poly,
    pub terms: Vec<PoleTerm>,
}

impl PartialFraction {
    pub fn zero(field: &FieldRef) -> PartialFraction {
        PartialFraction {
            entire: Poly::zero(field),
            terms: Vec::new(),
        }
    }

    /// Builds from raw terms, dropping vanishing top coefficients and empty
    /// terms, and sorting poles canonically.
    pub fn from_terms(entire: Poly, terms: Vec<PoleTerm>) -> Result<PartialFraction> {
        let mut cleaned: Vec<PoleTerm> = Vec::new();
        for mut t in terms {
            while t.coeffs.last().is_some_and(FieldElement::is_zero) {
                t.coeffs.pop();
            }
            if t.coeffs.is_empty() {
                continue;
            }
            if cleaned.iter().any(|c| c.pole == t.pole) {
                return Err(Error::InconsistentPoles(format!(
                    "pole {} listed twice",
                    t.pole
                )));
            }
            cleaned.push(t);
        }
        cleaned.sort_by(|a, b| a.pole.cmp(&b.pole));
        Ok(PartialFraction {
            entire,
            terms: cleaned,
        })
    }

    pub fn field(&self) -> &FieldRef {
        self.entire.field()
    }

    pub fn is_zero(&self) -> bool {
        self.entire.is_zero() && self.terms.is_empty()
    }

    /// True when every pole lies in the open disk and there is no entire part.
    pub fn is_minus(&self) -> bool {
        self.entire.is_zero() && self.terms.iter().all(|t| t.pole.in_open_disk())
    }

    pub fn to_ratfn(&self) -> RationalFn {
        let field = self.field();
        let clean = self
            .terms
            .iter()
            .all(|t| t.coeffs.last().is_some_and(|c| !c.is_zero()))
            && self
                .terms
                .iter()
                .enumerate()
                .all(|(k, t)| self.terms[..k].iter().all(|u| u.pole != t.pole));
        if clean {
            // one common denominator; with nonzero top coefficients and
            // distinct poles the numerator cannot vanish at any pole
            let powers: Vec<Poly> = self
                .terms
                .iter()
                .map(|t| Poly::linear_root(&t.pole).pow(t.coeffs.len()))
                .collect();
            let mut den = Poly::one(field);
            for p in &powers {
                den = den.mul(p);
            }
            let mut num = self.entire.mul(&den);
            for (k, t) in self.terms.iter().enumerate() {
                let mut others = Poly::one(field);
                for (j, p) in powers.iter().enumerate() {
                    if j != k {
                        others = others.mul(p);
                    }
                }
                let lin = Poly::linear_root(&t.pole);
                // Σ_l c_l (z-a)^(n-l), Horner in (z-a)
                let mut local = Poly::zero(field);
                for c in &t.coeffs {
                    local = local.mul(&lin).add(&Poly::constant(c.clone()));
                }
                num = num.add(&local.mul(&others));
            }
            if num.is_zero() {
                return RationalFn::zero(field);
            }
            return RationalFn::normalized(num, den);
        }
        let mut acc = RationalFn::from_poly(self.entire.clone());
        for t in &self.terms {
            // Σ_l c_l (z-a)^(N-l) / (z-a)^N
            let lin = Poly::linear_root(&t.pole);
            let n = t.coeffs.len();
            let mut num = Poly::zero(field);
            for (idx, c) in t.coeffs.iter().enumerate() {
                let l = idx + 1;
                num = num.add(&lin.pow(n - l).scale(c));
            }
            acc = acc.add(&RationalFn::new(num, lin.pow(n)).expect("nonzero denominator"));
        }
        acc
    }
}

pub fn pf_to_ratfn(p: &PartialFraction) -> RationalFn {
    p.to_ratfn()
}

/// Partial-fraction form of `f` over the listed poles; every pole of `f`
/// must be listed.
pub fn ratfn_to_pf(f: &RationalFn, poles: &[FieldElement]) -> Result<PartialFraction> {
    let pf = f.minus_part(poles)?;
    let rest = f.sub(&pf.to_ratfn());
    if !rest.is_polynomial() {
        return Err(Error::InconsistentPoles(format!(
            "{f} has poles outside the listed set"
        )));
    }
    Ok(PartialFraction {
        entire: rest.num().clone(),
        terms: pf.terms,
    })
}

/// `f = f+ + f-` with `f-` supported on the listed in-disk poles.
pub fn split_plus_minus(
    f: &RationalFn,
    poles_in_disk: &[PoleSpec],
) -> Result<(RationalFn, PartialFraction)> {
    for p in poles_in_disk {
        if !p.location.in_open_disk() {
            return Err(Error::PoleOutsideDisk(p.location.to_string()));
        }
        let mult = f.pole_order(&p.location);
        if mult == 0 || mult > p.order {
            return Err(Error::InconsistentPoles(format!(
                "declared pole {} of order {} but {} has a pole of order {} there",
                p.location, p.order, f, mult
            )));
        }
    }
    let locations: Vec<FieldElement> = poles_in_disk.iter().map(|p| p.location.clone()).collect();
    let minus = f.minus_part(&locations)?;
    let plus = f.sub(&minus.to_ratfn());
    Ok((plus, minus))
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({self})")
    }
}

impl fmt::Display for PartialFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.entire.is_zero() {
            parts.push(format!("{}", self.entire));
        }
        for t in &self.terms {
            for (idx, c) in t.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    parts.push(format!("({c})/(z-({}))^{}", t.pole, idx + 1));
                }
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
