//! Exact arithmetic in towers `Q ⊂ Q(s1) ⊂ Q(s1, s2) ⊂ …` of real quadratic
//! extensions, optionally topped by the imaginary unit.
//!
//! Elements are dense coordinate vectors over the power-product basis of the
//! adjoined roots. Coordinate index bit `k` selects `s_{k+1}`; when the tower
//! is gaussian the highest bit selects `i`. Every adjoined root is the
//! positive square root of its radicand under the designated real embedding,
//! so signs of real elements are decidable by interval refinement.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type FieldRef = Arc<FieldDescriptor>;

/// The ambient field: an ordered list of radicands plus an optional
/// imaginary layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDescriptor {
    /// Radicand of level `k + 1`, as coordinates over the first `k` levels.
    radicands: Vec<Vec<BigRational>>,
    gaussian: bool,
}

impl FieldDescriptor {
    /// The field of rationals.
    pub fn rational() -> FieldRef {
        Arc::new(FieldDescriptor {
            radicands: Vec::new(),
            gaussian: false,
        })
    }

    /// Adjoins the positive square root of `radicand`, which must be a
    /// positive non-square of this field.
    pub fn extend_sqrt(self: &Arc<Self>, radicand: &FieldElement) -> Result<FieldRef> {
        if !self.same_as(&radicand.field) {
            return Err(Error::FieldMismatch);
        }
        if self.gaussian {
            return Err(Error::InvalidDescriptor(
                "the imaginary unit must be the last layer of the tower".into(),
            ));
        }
        if radicand.sign_real()? <= 0 {
            return Err(Error::InvalidDescriptor(format!(
                "radicand {radicand} is not positive"
            )));
        }
        if let Some(root) = self.try_sqrt(self.levels(), &radicand.coords) {
            let root = FieldElement::from_coords(self, root);
            return Err(Error::InvalidDescriptor(format!(
                "radicand {radicand} is the square of {root}"
            )));
        }
        let mut radicands = self.radicands.clone();
        radicands.push(radicand.coords.clone());
        Ok(Arc::new(FieldDescriptor {
            radicands,
            gaussian: false,
        }))
    }

    /// Adjoins the imaginary unit.
    pub fn extend_gaussian(self: &Arc<Self>) -> Result<FieldRef> {
        if self.gaussian {
            return Err(Error::InvalidDescriptor(
                "the imaginary unit is already adjoined".into(),
            ));
        }
        Ok(Arc::new(FieldDescriptor {
            radicands: self.radicands.clone(),
            gaussian: true,
        }))
    }

    /// Number of adjoined real roots.
    pub fn levels(&self) -> usize {
        self.radicands.len()
    }

    pub fn is_gaussian(&self) -> bool {
        self.gaussian
    }

    /// Dimension of the field as a vector space over Q.
    pub fn degree(&self) -> usize {
        1 << self.total_levels()
    }

    fn total_levels(&self) -> usize {
        self.levels() + usize::from(self.gaussian)
    }

    fn real_degree(&self) -> usize {
        1 << self.levels()
    }

    pub fn same_as(&self, other: &FieldDescriptor) -> bool {
        std::ptr::eq(self, other) || self == other
    }

    /// The radicand of the adjoined root `s_k` (1-based), as an element of
    /// this field.
    pub fn radicand(self: &Arc<Self>, k: usize) -> FieldElement {
        assert!(k >= 1 && k <= self.levels(), "no root s{k} in this field");
        let mut coords = self.radicands[k - 1].clone();
        coords.resize(self.degree(), BigRational::zero());
        FieldElement::from_coords(self, coords)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_coords(self, vec![BigRational::zero(); self.degree()])
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(self: &Arc<Self>, num: i64, den: i64) -> FieldElement {
        self.from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[0] = q;
        FieldElement::from_coords(self, coords)
    }

    /// The adjoined root `s_k` (1-based).
    pub fn root(self: &Arc<Self>, k: usize) -> FieldElement {
        assert!(k >= 1 && k <= self.levels(), "no root s{k} in this field");
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[1 << (k - 1)] = BigRational::one();
        FieldElement::from_coords(self, coords)
    }

    /// The imaginary unit, if adjoined.
    pub fn imag_unit(self: &Arc<Self>) -> Option<FieldElement> {
        self.gaussian.then(|| {
            let mut coords = vec![BigRational::zero(); self.degree()];
            coords[self.real_degree()] = BigRational::one();
            FieldElement::from_coords(self, coords)
        })
    }

    /// Re-expresses an element of a subfield (a prefix of this tower) in
    /// this field.
    pub fn lift(self: &Arc<Self>, x: &FieldElement) -> Result<FieldElement> {
        let sub = &x.field;
        let prefix = sub.levels() <= self.levels()
            && sub.radicands[..] == self.radicands[..sub.levels()]
            && (!sub.gaussian || (self.gaussian && sub.levels() == self.levels()));
        if !prefix {
            return Err(Error::FieldMismatch);
        }
        let mut coords = vec![BigRational::zero(); self.degree()];
        let sub_real = sub.real_degree();
        for (idx, c) in x.coords.iter().enumerate() {
            let target = if idx >= sub_real {
                idx - sub_real + self.real_degree()
            } else {
                idx
            };
            coords[target] = c.clone();
        }
        Ok(FieldElement::from_coords(self, coords))
    }

    fn radicand_coords(&self, level: usize) -> Vec<BigRational> {
        if level <= self.levels() {
            self.radicands[level - 1].clone()
        } else {
            let mut minus_one = vec![BigRational::zero(); self.real_degree()];
            minus_one[0] = -BigRational::one();
            minus_one
        }
    }

    fn mul_rec(&self, level: usize, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if level == 0 {
            return vec![&a[0] * &b[0]];
        }
        let half = a.len() / 2;
        let (a0, a1) = a.split_at(half);
        let (b0, b1) = b.split_at(half);
        let a1_zero = a1.iter().all(Zero::is_zero);
        let b1_zero = b1.iter().all(Zero::is_zero);
        let mut low = self.mul_rec(level - 1, a0, b0);
        let mut high = vec![BigRational::zero(); half];
        if !a1_zero && !b1_zero {
            let prod = self.mul_rec(level - 1, a1, b1);
            let r = self.radicand_coords(level);
            add_into(&mut low, &self.mul_rec(level - 1, &prod, &r));
        }
        if !b1_zero {
            add_into(&mut high, &self.mul_rec(level - 1, a0, b1));
        }
        if !a1_zero {
            add_into(&mut high, &self.mul_rec(level - 1, a1, b0));
        }
        low.extend(high);
        low
    }

    fn inv_rec(&self, level: usize, a: &[BigRational]) -> Option<Vec<BigRational>> {
        if level == 0 {
            return (!a[0].is_zero()).then(|| vec![a[0].recip()]);
        }
        let half = a.len() / 2;
        let (a0, a1) = a.split_at(half);
        if a1.iter().all(Zero::is_zero) {
            let mut inv = self.inv_rec(level - 1, a0)?;
            inv.resize(a.len(), BigRational::zero());
            return Some(inv);
        }
        // (a0 + a1 s)^-1 = (a0 - a1 s) / (a0^2 - a1^2 r)
        let r = self.radicand_coords(level);
        let a1sq = self.mul_rec(level - 1, a1, a1);
        let mut norm = self.mul_rec(level - 1, a0, a0);
        sub_into(&mut norm, &self.mul_rec(level - 1, &a1sq, &r));
        let norm_inv = self.inv_rec(level - 1, &norm)?;
        let mut out = self.mul_rec(level - 1, a0, &norm_inv);
        let high = self.mul_rec(level - 1, a1, &norm_inv);
        out.extend(high.into_iter().map(|c| -c));
        Some(out)
    }

    /// Symbolic square root in the real tower truncated at `level`.
    fn try_sqrt(&self, level: usize, x: &[BigRational]) -> Option<Vec<BigRational>> {
        if level == 0 {
            return rational_sqrt(&x[0]).map(|q| vec![q]);
        }
        let half = x.len() / 2;
        let (p, q) = x.split_at(half);
        let zeros = || vec![BigRational::zero(); half];
        if q.iter().all(Zero::is_zero) {
            if let Some(mut t) = self.try_sqrt(level - 1, p) {
                t.extend(zeros());
                return Some(t);
            }
            // x = t^2 r  with t in the level below
            let r = self.radicand_coords(level);
            let r_inv = self.inv_rec(level - 1, &r)?;
            let t = self.try_sqrt(level - 1, &self.mul_rec(level - 1, p, &r_inv))?;
            let mut out = zeros();
            out.extend(t);
            return Some(out);
        }
        // (u + v s)^2 = p + q s  ⇒  u^2 = (p ± sqrt(p^2 - q^2 r)) / 2,  v = q / (2u)
        let r = self.radicand_coords(level);
        let mut norm = self.mul_rec(level - 1, p, p);
        let qq = self.mul_rec(level - 1, q, q);
        sub_into(&mut norm, &self.mul_rec(level - 1, &qq, &r));
        let n = self.try_sqrt(level - 1, &norm)?;
        let half_q = BigRational::new(1.into(), 2.into());
        for sign in [1, -1] {
            let mut u2: Vec<BigRational> = p.to_vec();
            for (u, nc) in u2.iter_mut().zip(&n) {
                if sign > 0 {
                    *u += nc;
                } else {
                    *u -= nc;
                }
                *u *= &half_q;
            }
            if let Some(u) = self.try_sqrt(level - 1, &u2) {
                if u.iter().all(Zero::is_zero) {
                    continue;
                }
                let two_u: Vec<BigRational> = u
                    .iter()
                    .map(|c| c * BigRational::from_integer(2.into()))
                    .collect();
                let inv = self.inv_rec(level - 1, &two_u)?;
                let v = self.mul_rec(level - 1, q, &inv);
                let mut out = u;
                out.extend(v);
                return Some(out);
            }
        }
        None
    }

    /// Enclosing interval of a real element at the given precision (bits).
    fn interval(&self, level: usize, x: &[BigRational], prec: u32) -> (BigRational, BigRational) {
        if level == 0 {
            return (x[0].clone(), x[0].clone());
        }
        let half = x.len() / 2;
        let (x0, x1) = x.split_at(half);
        let (lo0, hi0) = self.interval(level - 1, x0, prec);
        if x1.iter().all(Zero::is_zero) {
            return (lo0, hi0);
        }
        let (lo1, hi1) = self.interval(level - 1, x1, prec);
        let (rl, rh) = self.root_interval(level, prec);
        let products = [&lo1 * &rl, &lo1 * &rh, &hi1 * &rl, &hi1 * &rh];
        let min = products.iter().min().unwrap().clone();
        let max = products.iter().max().unwrap().clone();
        (lo0 + min, hi0 + max)
    }

    fn root_interval(&self, level: usize, prec: u32) -> (BigRational, BigRational) {
        let r = self.radicand_coords(level);
        let (rl, rh) = self.interval(level - 1, &r, prec);
        let scale = BigInt::one() << (2 * prec as usize);
        let unit = BigInt::one() << prec as usize;
        let lo = if rl.is_positive() {
            (rl * BigRational::from_integer(scale.clone()))
                .floor()
                .to_integer()
                .sqrt()
        } else {
            BigInt::zero()
        };
        let hi = (rh * BigRational::from_integer(scale))
            .ceil()
            .to_integer()
            .sqrt()
            + 1;
        (
            BigRational::new(lo, unit.clone()),
            BigRational::new(hi, unit),
        )
    }
}

fn add_into(acc: &mut [BigRational], other: &[BigRational]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

fn sub_into(acc: &mut [BigRational], other: &[BigRational]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a -= b;
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// An element of a field tower.
#[derive(Clone)]
pub struct FieldElement {
    field: FieldRef,
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn from_coords(field: &FieldRef, coords: Vec<BigRational>) -> FieldElement {
        assert_eq!(coords.len(), field.degree(), "coordinate count mismatch");
        FieldElement {
            field: field.clone(),
            coords,
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coords[0])
    }

    pub fn is_real(&self) -> bool {
        self.coords[self.field.real_degree()..]
            .iter()
            .all(Zero::is_zero)
    }

    fn check_field(&self, other: &FieldElement) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FieldElement::from_coords(&self.field, coords))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FieldElement::from_coords(&self.field, coords))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q));
        }
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q));
        }
        let coords = self
            .field
            .mul_rec(self.field.total_levels(), &self.coords, &other.coords);
        Ok(FieldElement::from_coords(&self.field, coords))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<FieldElement> {
        let coords = self
            .field
            .inv_rec(self.field.total_levels(), &self.coords)
            .ok_or(Error::DivisionByZero)?;
        Ok(FieldElement::from_coords(&self.field, coords))
    }

    pub fn scale(&self, q: &BigRational) -> FieldElement {
        FieldElement::from_coords(&self.field, self.coords.iter().map(|c| c * q).collect())
    }

    pub fn pow(&self, exp: u32) -> FieldElement {
        let mut acc = self.field.one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugation: negates the imaginary block, identity on the
    /// real tower.
    pub fn conj(&self) -> FieldElement {
        if !self.field.gaussian {
            return self.clone();
        }
        let split = self.field.real_degree();
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(idx, c)| if idx >= split { -c } else { c.clone() })
            .collect();
        FieldElement::from_coords(&self.field, coords)
    }

    /// Real part, as an element of the same field.
    pub fn re(&self) -> FieldElement {
        let split = self.field.real_degree();
        let mut coords = self.coords.clone();
        for c in &mut coords[split..] {
            *c = BigRational::zero();
        }
        FieldElement::from_coords(&self.field, coords)
    }

    /// Imaginary part, as an element of the same field (zero for real towers).
    pub fn im(&self) -> FieldElement {
        let split = self.field.real_degree();
        let mut coords = vec![BigRational::zero(); self.field.degree()];
        if self.field.gaussian {
            coords[..split].clone_from_slice(&self.coords[split..]);
        }
        FieldElement::from_coords(&self.field, coords)
    }

    /// Sign under the designated real embedding.
    pub fn sign_real(&self) -> Result<i8> {
        if !self.is_real() {
            return Err(Error::NotReal(self.to_string()));
        }
        if self.is_zero() {
            return Ok(0);
        }
        let split = self.field.real_degree();
        let levels = self.field.levels();
        let mut prec = 32;
        loop {
            let (lo, hi) = self.field.interval(levels, &self.coords[..split], prec);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            prec *= 2;
        }
    }

    /// True iff `|self| < 1`.
    pub fn in_open_disk(&self) -> bool {
        let gap = &self.field.one() - &(self * &self.conj());
        gap.sign_real() == Ok(1)
    }

    /// Rational approximation of a real element within `2^-bits`.
    pub fn approx_real(&self, bits: u32) -> Result<BigRational> {
        if !self.is_real() {
            return Err(Error::NotReal(self.to_string()));
        }
        if let Some(q) = self.as_rational() {
            return Ok(q.clone());
        }
        let split = self.field.real_degree();
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        let mut prec = bits + 8;
        loop {
            let (lo, hi) = self
                .field
                .interval(self.field.levels(), &self.coords[..split], prec);
            if &hi - &lo < target {
                return Ok((lo + hi) / BigRational::from_integer(2.into()));
            }
            prec *= 2;
        }
    }

    /// Decimal rendering with `digits` fractional digits. Non-authoritative.
    pub fn to_decimal(&self, digits: usize) -> String {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 4;
        let re = format_decimal(&self.re().approx_real(bits).expect("real part"), digits);
        if self.is_real() {
            return re;
        }
        let im = self.im().approx_real(bits).expect("imaginary part");
        if im.is_negative() {
            format!("{re} - {}i", format_decimal(&-im, digits))
        } else {
            format!("{re} + {}i", format_decimal(&im, digits))
        }
    }
}

fn format_decimal(q: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (q * BigRational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let negative = scaled.sign() == Sign::Minus;
    let (int_part, frac_part) = scaled.abs().div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = frac_part.to_string();
        out.push('.');
        out.push_str(&"0".repeat(digits - frac.len()));
        out.push_str(&frac);
    }
    out
}

/// Binary operation selector for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(x: &FieldElement, y: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coordinate-lexicographic order. Deterministic, not the real order.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs)
                    .expect("operands belong to different fields")
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::from_coords(&self.field, self.coords.iter().map(|c| -c).collect())
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

fn basis_name(idx: usize, levels: usize) -> String {
    let mut parts = Vec::new();
    for k in 0..levels {
        if idx & (1 << k) != 0 {
            parts.push(format!("s{}", k + 1));
        }
    }
    if idx >> levels != 0 {
        parts.push("i".to_string());
    }
    parts.join("*")
}

/// Renders coordinates in the element grammar, e.g. `(35-7*s1)/20`.
fn render_coords(coords: &[BigRational], levels: usize) -> String {
    let den = coords
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut terms = Vec::new();
    for (idx, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let n = (c * BigRational::from_integer(den.clone())).to_integer();
        let name = basis_name(idx, levels);
        let (negative, mag) = (n.is_negative(), n.abs());
        let body = if name.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            name
        } else {
            format!("{mag}*{name}")
        };
        terms.push((negative, body));
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut sum = String::new();
    for (pos, (negative, body)) in terms.iter().enumerate() {
        match (pos, negative) {
            (0, true) => sum.push('-'),
            (0, false) => {}
            (_, true) => sum.push('-'),
            (_, false) => sum.push('+'),
        }
        sum.push_str(body);
    }
    if den.is_one() {
        sum
    } else if terms.len() == 1 {
        format!("{sum}/{den}")
    } else {
        format!("({sum})/{den}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_coords(&self.coords, self.field.levels()))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Q")?;
        for (k, r) in self.radicands.iter().enumerate() {
            let text = render_coords(r, k);
            let simple = text.chars().all(|c| c.is_ascii_digit());
            if simple {
                write!(f, "(sqrt {text})")?;
            } else {
                write!(f, "(sqrt ({text}))")?;
            }
        }
        if self.gaussian {
            f.write_str("(i)")?;
        }
        Ok(())
    }
}

/// Small helper for building rationals in tests and fixtures.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Lossy conversion used only for diagnostics.
pub fn approx_f64(x: &FieldElement) -> Option<f64> {
    x.approx_real(60).ok().and_then(|q| q.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt5() -> FieldRef {
        let q = FieldDescriptor::rational();
        q.extend_sqrt(&q.from_int(5)).unwrap()
    }

    fn tower() -> FieldRef {
        let f = sqrt5();
        let r = &f.from_int(3) - &f.root(1);
        f.extend_sqrt(&r).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let f = sqrt5();
        let s1 = f.root(1);
        let prod = (&f.from_int(3) - &s1) * (&f.from_int(3) + &s1);
        assert_eq!(prod, f.from_int(4));
    }

    #[test]
    fn division_checked_by_multiplication() {
        let f = sqrt5();
        let s1 = f.root(1);
        let d = &s1 - &f.from_int(3);
        let q = field_arith(&f.from_int(2), &d, ArithOp::Div).unwrap();
        assert_eq!(&q * &d, f.from_int(2));
        assert_eq!(q, -(&s1 + &f.from_int(3)).scale(&ratio(1, 2)));
    }

    #[test]
    fn nested_root_product() {
        let f = tower();
        let s2 = f.root(2);
        let b = field_arith(&f.from_int(2), &s2, ArithOp::Div).unwrap();
        assert_eq!(&s2 * &b, f.from_int(2));
        // b is sqrt(3 + sqrt 5): its square is 3 + s1
        assert_eq!(&b * &b, &f.from_int(3) + &f.root(1));
        assert_eq!(b.sign_real(), Ok(1));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = sqrt5();
        assert_eq!(f.one().checked_div(&f.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = sqrt5().one();
        let b = FieldDescriptor::rational().one();
        assert_eq!(a.checked_add(&b), Err(Error::FieldMismatch));
    }

    #[test]
    fn conjugation() {
        let q = FieldDescriptor::rational().extend_gaussian().unwrap();
        let i = q.imag_unit().unwrap();
        let z = &q.one() + &i.scale(&ratio(2, 1));
        assert_eq!(z.conj(), &q.one() - &i.scale(&ratio(2, 1)));
        assert_eq!(q.from_ratio(3, 4).conj(), q.from_ratio(3, 4));
        assert_eq!(&i * &i, q.from_int(-1));
        let f = sqrt5();
        let c1 = (&f.from_int(35) - &f.root(1).scale(&ratio(7, 1))).scale(&ratio(1, 20));
        assert_eq!(c1.conj(), c1);
    }

    #[test]
    fn signs() {
        let f = sqrt5();
        let s1 = f.root(1);
        assert_eq!(f.zero().sign_real(), Ok(0));
        assert_eq!((&s1 - &f.from_int(3)).sign_real(), Ok(-1));
        let z0 = (&s1 - &f.from_int(3)).scale(&ratio(1, 2));
        assert_eq!((&f.one() - &(&z0 * &z0)).sign_real(), Ok(1));
        // (9/4)^2 = 81/16 > 5 by a hair
        assert_eq!((&f.from_ratio(9, 4) - &s1).sign_real(), Ok(1));
        assert_eq!((&f.from_ratio(2236, 1000) - &s1).sign_real(), Ok(-1));
    }

    #[test]
    fn sign_of_gaussian_element_is_an_error() {
        let q = FieldDescriptor::rational().extend_gaussian().unwrap();
        assert!(matches!(
            q.imag_unit().unwrap().sign_real(),
            Err(Error::NotReal(_))
        ));
    }

    #[test]
    fn disk_membership() {
        let q = FieldDescriptor::rational();
        assert!(q.from_ratio(-5, 6).in_open_disk());
        assert!(!q.from_int(1).in_open_disk());
        let f = sqrt5();
        let z0 = (&f.root(1) - &f.from_int(3)).scale(&ratio(1, 2));
        assert!(z0.in_open_disk());
        let g = q.extend_gaussian().unwrap();
        let i = g.imag_unit().unwrap();
        let on_circle = (&g.from_int(3) + &i.scale(&ratio(4, 1))).scale(&ratio(1, 5));
        assert!(!on_circle.in_open_disk());
        assert!(on_circle.scale(&ratio(9, 10)).in_open_disk());
    }

    #[test]
    fn square_radicands_are_rejected() {
        let q = FieldDescriptor::rational();
        assert!(q.extend_sqrt(&q.from_int(4)).is_err());
        assert!(q.extend_sqrt(&q.from_int(-5)).is_err());
        let f = sqrt5();
        // (1 + s1)^2 = 6 + 2 s1
        let sq = &f.from_int(6) + &f.root(1).scale(&ratio(2, 1));
        assert!(f.extend_sqrt(&sq).is_err());
        // 5 * (2/3)^2 = 20/9 = (2 s1 / 3)^2
        assert!(f.extend_sqrt(&f.from_ratio(20, 9)).is_err());
        let t = tower();
        // (3 + s1) = (2 / s2)^2 is a square in the second level
        let b2 = &t.from_int(3) + &t.root(1);
        assert!(t.extend_sqrt(&b2).is_err());
        // s2 = (√10 - √2)/2, so 2 is a square here but 3 is not
        assert!(t.extend_sqrt(&t.from_int(2)).is_err());
        assert!(t.extend_sqrt(&t.from_int(3)).is_ok());
    }

    #[test]
    fn roots_square_to_radicands() {
        let t = tower();
        for k in 1..=t.levels() {
            let s = t.root(k);
            assert_eq!(&s * &s, t.radicand(k));
        }
    }

    #[test]
    fn rendering() {
        let f = sqrt5();
        let c = (&f.from_int(35) - &f.root(1).scale(&ratio(7, 1))).scale(&ratio(1, 20));
        assert_eq!(c.to_string(), "(35-7*s1)/20");
        assert_eq!(f.root(1).scale(&ratio(-1, 2)).to_string(), "-s1/2");
        assert_eq!(f.zero().to_string(), "0");
        assert_eq!(tower().to_string(), "Q(sqrt 5)(sqrt (3-s1))");
        assert_eq!(f.from_ratio(-7, 3).to_decimal(3), "-2.333");
        assert_eq!(f.root(1).to_decimal(6), "2.236068");
    }

    #[test]
    fn lift_from_subfield() {
        let f = sqrt5();
        let t = tower();
        let x = &f.from_int(2) + &f.root(1);
        let lifted = t.lift(&x).unwrap();
        assert_eq!(lifted, &t.from_int(2) + &t.root(1));
        assert!(f.lift(&t.root(2)).is_err());
    }
}
