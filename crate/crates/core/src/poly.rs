//! Dense univariate polynomials over a field tower.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldRef};

/// 2^61 - 1, used for the modular coprimality shortcut.
const PRIME: u64 = (1 << 61) - 1;

/// Polynomial with ascending coefficients; trailing zeros are stripped, so the
/// zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldRef,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &FieldRef, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &FieldRef) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &FieldRef) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Poly {
        let field = c.field().clone();
        Poly::new(&field, vec![c])
    }

    /// The polynomial `z`.
    pub fn z(field: &FieldRef) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    pub fn monomial(c: FieldElement, k: usize) -> Poly {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Poly::new(&field, coeffs)
    }

    /// `z - a`.
    pub fn linear_root(a: &FieldElement) -> Poly {
        let field = a.field().clone();
        Poly::new(&field, vec![-a, field.one()])
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Poly::new(&self.field, coeffs)
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, exp: usize) -> Poly {
        (0..exp).fold(Poly::one(&self.field), |acc, _| acc.mul(self))
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(&self.field, coeffs)
    }

    /// Euclidean division.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let lead_inv = lead.inv()?;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(&self.field, quot), Poly::new(&self.field, rem)))
    }

    /// Exact quotient, `None` if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Option<Poly>> {
        let (q, r) = self.divrem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lead) => self.scale(&lead.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_constant() && !self.is_zero() || other.is_constant() && !other.is_zero() {
            return Poly::one(&self.field);
        }
        if coprime_mod_p(self, other) {
            return Poly::one(&self.field);
        }
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Coefficients of `p(a + w)` in powers of `w`.
    pub fn taylor_shift(&self, a: &FieldElement) -> Vec<FieldElement> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        // repeated synthetic division by (z - a)
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * a;
                c[j] = &c[j] + &t;
            }
        }
        c
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: &FieldElement) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let shifted = self.taylor_shift(a);
        shifted.iter().take_while(|c| c.is_zero()).count()
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(FieldElement::conj).collect(),
        )
    }

    /// `z^n · conj(p(1/conj z))` for `n >= deg p`.
    pub fn reflect(&self, n: usize) -> Poly {
        let mut coeffs = vec![self.field.zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[n - k] = c.conj();
        }
        Poly::new(&self.field, coeffs)
    }
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, PRIME - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn reduce_rational(q: &BigRational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let n = q.numer().mod_floor(&p).to_u64()?;
    let d = q.denom().mod_floor(&p).to_u64()?;
    (d != 0).then(|| mul_mod(n, inv_mod(d)))
}

/// Reduction of a polynomial with rational coefficients, `None` when some
/// coefficient is irrational, has a denominator divisible by the prime, or
/// the leading coefficient vanishes.
fn reduce_poly(p: &Poly) -> Option<Vec<u64>> {
    let out = p
        .coeffs
        .iter()
        .map(|c| c.as_rational().and_then(reduce_rational))
        .collect::<Option<Vec<u64>>>()?;
    (out.last().copied()? != 0).then_some(out)
}

fn trim_mod(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// True only if the polynomials are certainly coprime: the reductions keep
/// their degrees and are coprime mod p, so any common factor over Q would
/// survive reduction.
fn coprime_mod_p(a: &Poly, b: &Poly) -> bool {
    let (Some(mut x), Some(mut y)) = (reduce_poly(a), reduce_poly(b)) else {
        return false;
    };
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let lead_inv = inv_mod(*y.last().expect("nonempty"));
        let dy = y.len() - 1;
        while x.len() > dy {
            let c = mul_mod(*x.last().expect("nonempty"), lead_inv);
            let shift = x.len() - 1 - dy;
            for (j, &d) in y.iter().enumerate() {
                let t = mul_mod(c, d);
                x[shift + j] = (x[shift + j] + PRIME - t) % PRIME;
            }
            trim_mod(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len() == 1
}

/// First `count` coefficients of the power series `num / den`; requires
/// `den[0] != 0`.
pub fn series_div(
    num: &[FieldElement],
    den: &[FieldElement],
    count: usize,
    field: &FieldRef,
) -> Result<Vec<FieldElement>> {
    let d0 = den.first().ok_or(Error::DivisionByZero)?;
    let d0_inv = d0.inv()?;
    let mut out: Vec<FieldElement> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = num.get(k).cloned().unwrap_or_else(|| field.zero());
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            acc = &acc - &(&den[j] * &out[k - j]);
        }
        out.push(&acc * &d0_inv);
    }
    Ok(out)
}

/// The polynomial of degree `< points.len()` through `(points[k], values[k])`,
/// by Newton divided differences; points must be distinct.
pub fn interpolate(
    points: &[FieldElement],
    values: &[FieldElement],
    field: &FieldRef,
) -> Result<Poly> {
    if points.len() != values.len() {
        return Err(Error::DimensionMismatch(
            "interpolation points and values differ in number".into(),
        ));
    }
    let n = points.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let gap = &points[k] - &points[k - level];
            dd[k] = (&dd[k] - &dd[k - 1]).checked_div(&gap)?;
        }
    }
    // Horner on the Newton form
    let mut acc = Poly::zero(field);
    for k in (0..n).rev() {
        acc = acc
            .mul(&Poly::linear_root(&points[k]))
            .add(&Poly::constant(dd[k].clone()));
    }
    Ok(acc)
}

fn is_single_term(c: &FieldElement) -> bool {
    c.coords()
        .iter()
        .filter(|q| !num_traits::Zero::is_zero(*q))
        .count()
        <= 1
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, &FieldElement)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        let lone = terms.len() == 1;
        for (pos, (k, c)) in terms.iter().enumerate() {
            let power = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let (negative, coef) = if is_single_term(c) {
                let s = c.to_string();
                match s.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, s),
                }
            } else if lone && *k == 0 {
                (false, c.to_string())
            } else {
                (false, format!("({c})"))
            };
            let body = if power.is_empty() {
                coef
            } else if coef == "1" {
                power
            } else {
                format!("{coef}*{power}")
            };
            match (pos, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    #[test]
    fn interpolation_recovers_polynomial() {
        let q = FieldDescriptor::rational();
        let p = Poly::new(
            &q,
            vec![q.from_int(3), q.from_ratio(-1, 2), q.zero(), q.from_int(7)],
        );
        let xs: Vec<_> = (0..6).map(|k| q.from_int(k)).collect();
        let ys: Vec<_> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys, &q).unwrap(), p);
        assert!(interpolate(&xs[..2], &ys, &q).is_err());
    }

    #[test]
    fn modular_coprimality_shortcut() {
        let q = FieldDescriptor::rational();
        let p = |c: &[i64]| Poly::new(&q, c.iter().map(|&x| q.from_int(x)).collect());
        // (z - 1)(z + 2) and (z - 1)(3z + 5) share z - 1
        let a = p(&[-2, 1, 1]);
        let b = p(&[-5, 2, 3]);
        assert!(!coprime_mod_p(&a, &b));
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert!(coprime_mod_p(&p(&[1, 1]), &p(&[2, 1])));
        // a common factor is never hidden by huge coefficients
        let big = Poly::new(
            &q,
            vec![
                q.from_rational(BigRational::new(BigInt::from(PRIME) * 3 + 1, 7.into())),
                q.one(),
            ],
        );
        let f = big.mul(&p(&[1, 2]));
        let g = big.mul(&p(&[3, 0, 1]));
        assert!(!coprime_mod_p(&f, &g));
        assert_eq!(f.gcd(&g), big);
    }

    fn p(field: &FieldRef, cs: &[i64]) -> Poly {
        Poly::new(field, cs.iter().map(|&c| field.from_int(c)).collect())
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        let q = FieldDescriptor::rational();
        assert_eq!(p(&q, &[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&q, &[0, 0]).is_zero());
        assert_eq!(p(&q, &[0]).degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        let q = FieldDescriptor::rational();
        // (z^2 - 1) = (z - 1)(z + 1)
        let a = p(&q, &[-1, 0, 1]);
        let b = p(&q, &[-1, 1]);
        let (quot, rem) = a.divrem(&b).unwrap();
        assert_eq!(quot, p(&q, &[1, 1]));
        assert!(rem.is_zero());
        let g = p(&q, &[2, 3, 1]).gcd(&p(&q, &[3, 4, 1]));
        assert_eq!(g, p(&q, &[1, 1]));
        assert!(a.divrem(&Poly::zero(&q)).is_err());
    }

    #[test]
    fn taylor_shift_matches_expansion() {
        let q = FieldDescriptor::rational();
        // 1 + z + z^2 at a = 2: 7 + 5w + w^2
        let shifted = p(&q, &[1, 1, 1]).taylor_shift(&q.from_int(2));
        assert_eq!(shifted, vec![q.from_int(7), q.from_int(5), q.from_int(1)]);
        let r = p(&q, &[-1, 0, 1]).pow(2);
        assert_eq!(r.root_multiplicity(&q.from_int(1)), 2);
        assert_eq!(r.root_multiplicity(&q.from_int(3)), 0);
    }

    #[test]
    fn geometric_series() {
        let q = FieldDescriptor::rational();
        let s = series_div(&[q.one()], &[q.one(), q.from_int(-1)], 4, &q).unwrap();
        assert!(s.iter().all(FieldElement::is_one));
    }

    #[test]
    fn display() {
        let q = FieldDescriptor::rational();
        assert_eq!(p(&q, &[7, 3]).to_string(), "7 + 3*z");
        assert_eq!(p(&q, &[-1, 1]).to_string(), "-1 + z");
        assert_eq!(p(&q, &[0, 0, -2]).to_string(), "-2*z^2");
        assert_eq!(Poly::zero(&q).to_string(), "0");
    }
}
