//! Exact arithmetic over ℚ and real biquadratic fields ℚ(√p, √q).
//!
//! A scalar is stored in the basis `{1, √p, √q, √(pq)}`. Equality is
//! coefficient equality, and signs are decided by integer interval
//! refinement of the square roots, so no floating point enters any
//! predicate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),
    #[error("sqrt({radicand}) does not lie in {field}")]
    NotInField { radicand: u64, field: Field },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Largest square dividing `n`, returned as `(s, m)` with `n = s² m`, `m` squarefree.
pub fn squarefree_decomposition(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut m = 1u64;
    let mut rest = n;
    let mut d = 2u64;
    while d * d <= rest {
        let mut e = 0;
        while rest.is_multiple_of(d) {
            rest /= d;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= d;
        }
        if e % 2 == 1 {
            m *= d;
        }
        d += 1;
    }
    (s, m * rest)
}

/// Field descriptor ℚ(√p, √q) with `p`, `q` squarefree.
///
/// Canonical forms: `(1,1)` is ℚ, `(p,1)` with `p > 1` is a quadratic field,
/// and `(p,q)` with `1 < p < q` is biquadratic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Field {
    p: u64,
    q: u64,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p, self.q) {
            (1, 1) => write!(f, "Q"),
            (p, 1) => write!(f, "Q(sqrt{p})"),
            (p, q) => write!(f, "Q(sqrt{p},sqrt{q})"),
        }
    }
}

impl Field {
    pub const RATIONAL: Field = Field { p: 1, q: 1 };

    /// Build a descriptor from two squarefree radicands.
    pub fn new(p: u64, q: u64) -> Result<Field, ExactError> {
        for r in [p, q] {
            if r == 0 || squarefree_decomposition(r).0 != 1 {
                return Err(ExactError::InvalidField(format!("{r} is not a squarefree positive integer")));
            }
        }
        Ok(Self::canonical(p, q))
    }

    /// The field generated by `√a` and `√b` for arbitrary positive integers.
    pub fn from_radicands(a: u64, b: u64) -> Result<Field, ExactError> {
        if a == 0 || b == 0 {
            return Err(ExactError::InvalidField("radicand 0".into()));
        }
        Ok(Self::canonical(squarefree_decomposition(a).1, squarefree_decomposition(b).1))
    }

    fn canonical(p: u64, q: u64) -> Field {
        let (p, q) = if p == q { (p, 1) } else { (p, q) };
        match (p, q) {
            (1, q) => Field { p: q, q: 1 },
            (p, 1) => Field { p, q: 1 },
            (p, q) if p < q => Field { p, q },
            (p, q) => Field { p: q, q: p },
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_rational(&self) -> bool {
        self.p == 1
    }

    /// Radicand of basis element `k` (0 → 1, 1 → p, 2 → q, 3 → pq).
    pub fn radicand(&self, k: usize) -> u64 {
        [1, self.p, self.q, self.p * self.q][k]
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n.trim()).map_err(|e| ExactError::Parse(format!("{s}: {e}")))?;
    let d = BigInt::from_str(d.trim()).map_err(|e| ExactError::Parse(format!("{s}: {e}")))?;
    if d.is_zero() {
        return Err(ExactError::Parse(format!("{s}: zero denominator")));
    }
    Ok(BigRational::new(n, d))
}

/// Render a rational as `"numerator/denominator"`.
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_from_string(s: &str) -> Result<BigRational, ExactError> {
    parse_rational(s)
}

/// An element of ℚ(√p, √q).
#[derive(Clone)]
pub struct ExactScalar {
    field: Field,
    c0: BigRational,
    /// Coefficients of √p, √q, √(pq); `None` when all three vanish.
    rest: Option<Box<[BigRational; 3]>>,
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rest {
            None => write!(f, "{}", self.c0),
            Some(r) => {
                write!(f, "({}", self.c0)?;
                let names = [
                    format!("√{}", self.field.p),
                    format!("√{}", self.field.q),
                    format!("√{}", self.field.p * self.field.q),
                ];
                for (c, name) in r.iter().zip(names) {
                    if !c.is_zero() {
                        write!(f, " + {c}·{name}")?;
                    }
                }
                write!(f, ")")
            }
        }
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.rest, &other.rest) {
            (None, None) => self.c0 == other.c0,
            (Some(a), Some(b)) => self.field == other.field && self.c0 == other.c0 && a == b,
            _ => false,
        }
    }
}

impl Eq for ExactScalar {}

impl Hash for ExactScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c0.hash(state);
        if let Some(r) = &self.rest {
            self.field.hash(state);
            r.hash(state);
        }
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<BigRational> for ExactScalar {
    fn from(v: BigRational) -> Self {
        Self::from_rational(v)
    }
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar { field: Field::RATIONAL, c0: BigRational::zero(), rest: None }
    }

    pub fn one() -> Self {
        Self::from(1)
    }

    pub fn from_rational(c0: BigRational) -> Self {
        ExactScalar { field: Field::RATIONAL, c0, rest: None }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Build `c₀ + c₁√p + c₂√q + c₃√(pq)` in `field`.
    pub fn new(field: Field, c: [BigRational; 4]) -> Self {
        let [c0, c1, c2, c3] = c;
        let rest = if field.is_rational() {
            debug_assert!(c1.is_zero() && c2.is_zero() && c3.is_zero());
            None
        } else {
            Some(Box::new([c1, c2, c3]))
        };
        let mut s = ExactScalar { field, c0, rest };
        s.normalize();
        s
    }

    /// Parse coefficient strings `"n/d"`.
    pub fn from_strs(field: Field, c: [&str; 4]) -> Result<Self, ExactError> {
        let parsed = [parse_rational(c[0])?, parse_rational(c[1])?, parse_rational(c[2])?, parse_rational(c[3])?];
        if field.is_rational() && parsed[1..].iter().any(|x| !x.is_zero()) {
            return Err(ExactError::Parse("irrational coefficients over Q".into()));
        }
        if field.q == 1 && !(parsed[2].is_zero() && parsed[3].is_zero()) {
            return Err(ExactError::Parse("coefficients beyond quadratic field".into()));
        }
        Ok(Self::new(field, parsed))
    }

    /// `√n` for a positive integer `n`, provided it lies in `field`.
    pub fn sqrt_int(field: Field, n: u64) -> Result<Self, ExactError> {
        if n == 0 {
            return Ok(Self::zero());
        }
        let (s, m) = squarefree_decomposition(n);
        let s = BigRational::from_integer(BigInt::from(s));
        if m == 1 {
            return Ok(Self::from_rational(s));
        }
        let z = BigRational::zero;
        if m == field.p {
            return Ok(Self::new(field, [z(), s, z(), z()]));
        }
        if field.q != 1 {
            if m == field.q {
                return Ok(Self::new(field, [z(), z(), s, z()]));
            }
            let pq = field.p * field.q;
            let (g, mpq) = squarefree_decomposition(pq);
            if m == mpq {
                // √(pq) = g·√m, so √m = √(pq)/g.
                let c = s / BigRational::from_integer(BigInt::from(g));
                return Ok(Self::new(field, [z(), z(), z(), c]));
            }
        }
        Err(ExactError::NotInField { radicand: n, field })
    }

    fn normalize(&mut self) {
        if let Some(r) = &self.rest {
            if r.iter().all(|x| x.is_zero()) {
                self.rest = None;
            }
        }
    }

    /// Field descriptor. Rational values report ℚ regardless of how they were built.
    pub fn field(&self) -> Field {
        if self.rest.is_none() {
            Field::RATIONAL
        } else {
            self.field
        }
    }

    /// Field tag carried by this value (may be larger than ℚ even for rational values).
    pub fn tagged_field(&self) -> Field {
        self.field
    }

    /// Coefficients `[c₀, c₁, c₂, c₃]`.
    pub fn coeffs(&self) -> [BigRational; 4] {
        match &self.rest {
            None => [self.c0.clone(), BigRational::zero(), BigRational::zero(), BigRational::zero()],
            Some(r) => [self.c0.clone(), r[0].clone(), r[1].clone(), r[2].clone()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rest.is_none() && self.c0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rest.is_none() && self.c0.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.rest.is_none()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.rest.is_none() {
            Some(&self.c0)
        } else {
            None
        }
    }

    /// True when the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.rest.is_none() && self.c0.is_integer()
    }

    fn join_field(&self, other: &Self) -> Result<Field, ExactError> {
        match (self.rest.is_some(), other.rest.is_some()) {
            (false, false) => {
                if self.field == other.field || other.field.is_rational() {
                    Ok(self.field)
                } else if self.field.is_rational() {
                    Ok(other.field)
                } else {
                    Ok(Field::RATIONAL)
                }
            }
            (true, false) => {
                if other.field == self.field || other.field.is_rational() {
                    Ok(self.field)
                } else {
                    Err(ExactError::FieldMismatch { left: self.field, right: other.field })
                }
            }
            (false, true) => {
                if other.field == self.field || self.field.is_rational() {
                    Ok(other.field)
                } else {
                    Err(ExactError::FieldMismatch { left: self.field, right: other.field })
                }
            }
            (true, true) => {
                if self.field == other.field {
                    Ok(self.field)
                } else {
                    Err(ExactError::FieldMismatch { left: self.field, right: other.field })
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        let field = self.join_field(other)?;
        let c0 = &self.c0 + &other.c0;
        let rest = match (&self.rest, &other.rest) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(Box::new([&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]])),
        };
        let mut s = ExactScalar { field, c0, rest };
        s.normalize();
        Ok(s)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let field = self.join_field(other)?;
        match (&self.rest, &other.rest) {
            (None, None) => Ok(ExactScalar { field, c0: &self.c0 * &other.c0, rest: None }),
            (Some(a), None) => Ok(Self::scaled(field, &self.c0, a, &other.c0)),
            (None, Some(b)) => Ok(Self::scaled(field, &other.c0, b, &self.c0)),
            (Some(a), Some(b)) => {
                let x = [&self.c0, &a[0], &a[1], &a[2]];
                let y = [&other.c0, &b[0], &b[1], &b[2]];
                let mut out: [BigRational; 4] = Default::default();
                for (i, xi) in x.iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if yj.is_zero() {
                            continue;
                        }
                        // e_i e_j = (common radicands) · e_{i xor j}
                        let common = i & j;
                        let mut factor = 1u64;
                        if common & 1 != 0 {
                            factor *= field.p;
                        }
                        if common & 2 != 0 {
                            factor *= field.q;
                        }
                        let term = *xi * *yj;
                        out[i ^ j] += if factor == 1 { term } else { term * BigInt::from(factor) };
                    }
                }
                Ok(Self::new(field, out))
            }
        }
    }

    fn scaled(field: Field, c0: &BigRational, rest: &[BigRational; 3], k: &BigRational) -> Self {
        let mut s = ExactScalar {
            field,
            c0: c0 * k,
            rest: Some(Box::new([&rest[0] * k, &rest[1] * k, &rest[2] * k])),
        };
        s.normalize();
        s
    }

    /// Galois conjugate sending `√p ↦ ±√p`, `√q ↦ ±√q`.
    pub fn conjugate(&self, flip_p: bool, flip_q: bool) -> Self {
        match &self.rest {
            None => self.clone(),
            Some(r) => {
                let s1 = if flip_p { -r[0].clone() } else { r[0].clone() };
                let s2 = if flip_q { -r[1].clone() } else { r[1].clone() };
                let s3 = if flip_p ^ flip_q { -r[2].clone() } else { r[2].clone() };
                ExactScalar { field: self.field, c0: self.c0.clone(), rest: Some(Box::new([s1, s2, s3])) }
            }
        }
    }

    /// Product of the distinct Galois conjugates other than the identity.
    fn conjugate_cofactor(&self) -> Self {
        if self.rest.is_none() {
            return Self::one();
        }
        if self.field.q == 1 {
            self.conjugate(true, false)
        } else {
            &(&self.conjugate(true, false) * &self.conjugate(false, true)) * &self.conjugate(true, true)
        }
    }

    /// Field norm down to ℚ: the product of all Galois conjugates.
    pub fn norm_to_rational(&self) -> BigRational {
        let n = self * &self.conjugate_cofactor();
        debug_assert!(n.is_rational());
        n.c0
    }

    pub fn try_recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        match &self.rest {
            None => Ok(ExactScalar { field: self.field, c0: self.c0.recip(), rest: None }),
            Some(_) => {
                let cof = self.conjugate_cofactor();
                let n = (self * &cof).c0;
                Ok(&cof * &Self::from_rational(n.recip()))
            }
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ExactError> {
        let inv = other.try_recip()?;
        self.try_mul(&inv)
    }

    pub fn recip(&self) -> Self {
        self.try_recip().expect("reciprocal of zero")
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact sign of the real number represented.
    pub fn sign(&self) -> i32 {
        match &self.rest {
            None => match self.c0.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
            Some(_) => {
                // Nonzero by canonical form; refine until the enclosure excludes zero.
                let mut bits = 32u32;
                loop {
                    let (lo, hi) = self.scaled_enclosure(bits);
                    if lo.is_positive() {
                        return 1;
                    }
                    if hi.is_negative() {
                        return -1;
                    }
                    bits *= 2;
                }
            }
        }
    }

    /// Integer enclosure `[lo, hi]` of `value · D · 2^bits` where `D > 0` is the
    /// common denominator of the coefficients.
    fn scaled_enclosure(&self, bits: u32) -> (BigInt, BigInt) {
        let c = self.coeffs();
        let d = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (k, ck) in c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let ik = (ck * BigRational::from_integer(d.clone())).to_integer();
            let (sl, sh) = sqrt_enclosure(self.field.radicand(k), bits);
            if ik.is_positive() {
                lo += &ik * &sl;
                hi += &ik * &sh;
            } else {
                lo += &ik * &sh;
                hi += &ik * &sl;
            }
        }
        (lo, hi)
    }

    /// Rational enclosure `[lo, hi]` of the value with width at most about `2^-bits` times the coefficient size.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        match &self.rest {
            None => (self.c0.clone(), self.c0.clone()),
            Some(_) => {
                let c = self.coeffs();
                let d = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let (lo, hi) = self.scaled_enclosure(bits);
                let scale = d * (BigInt::one() << bits);
                (BigRational::new(lo, scale.clone()), BigRational::new(hi, scale))
            }
        }
    }

    /// A rational number `≥` the value.
    pub fn rational_upper_bound(&self) -> BigRational {
        self.enclosure(32).1
    }

    /// A rational number `≤` the value.
    pub fn rational_lower_bound(&self) -> BigRational {
        self.enclosure(32).0
    }

    /// Diagnostic floating-point approximation. Never used for decisions.
    pub fn to_f64(&self) -> f64 {
        let c = self.coeffs();
        let mut v = 0.0;
        for (k, ck) in c.iter().enumerate() {
            if !ck.is_zero() {
                v += ck.to_f64().unwrap_or(f64::NAN) * (self.field.radicand(k) as f64).sqrt();
            }
        }
        v
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Coefficient strings `"n/d"` for serialization.
    pub fn coeff_strings(&self) -> [String; 4] {
        let c = self.coeffs();
        [rational_to_string(&c[0]), rational_to_string(&c[1]), rational_to_string(&c[2]), rational_to_string(&c[3])]
    }
}

/// `(⌊√n·2^bits⌋, ⌈√n·2^bits⌉)`.
fn sqrt_enclosure(n: u64, bits: u32) -> (BigInt, BigInt) {
    if n == 1 {
        let v = BigInt::one() << bits;
        return (v.clone(), v);
    }
    let scaled = BigInt::from(n) << (2 * bits);
    let lo = scaled.sqrt();
    if &lo * &lo == scaled {
        (lo.clone(), lo)
    } else {
        let hi = &lo + 1;
        (lo, hi)
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

/// Sign of an ExactScalar as `-1`, `0`, or `+1`.
pub fn sign_of(a: &ExactScalar) -> i32 {
    a.sign()
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            field: self.field,
            c0: -self.c0.clone(),
            rest: self.rest.as_ref().map(|r| Box::new([-r[0].clone(), -r[1].clone(), -r[2].clone()])),
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |a, b| a + b)
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarObject {
    p: u64,
    q: u64,
    c: [String; 4],
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Rational(String),
    Object(ScalarObject),
}

impl Serialize for ExactScalar {
    /// Rational values serialize as `"n/d"`; others as `{"p","q","c":[…]}`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_rational() {
            serializer.serialize_str(&rational_to_string(&self.c0))
        } else {
            ScalarObject { p: self.field.p, q: self.field.q, c: self.coeff_strings() }.serialize(serializer)
        }
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match ScalarRepr::deserialize(deserializer)? {
            ScalarRepr::Rational(s) => parse_rational(&s).map(ExactScalar::from_rational).map_err(serde::de::Error::custom),
            ScalarRepr::Object(o) => {
                let field = Field::new(o.p, o.q).map_err(serde::de::Error::custom)?;
                ExactScalar::from_strs(field, [&o.c[0], &o.c[1], &o.c[2], &o.c[3]]).map_err(serde::de::Error::custom)
            }
        }
    }
}

/// Finite sum `Σ cᵢ √mᵢ` with rational coefficients and positive integer radicands.
///
/// Signs are decided exactly: a fast interval check first, then repeated
/// squaring of the positive and negative parts, which preserves the sign of
/// their difference.
#[derive(Clone, Debug, Default)]
pub struct RadicalSum {
    terms: BTreeMap<BigInt, BigRational>,
}

fn squarefree_big(m: &BigInt) -> (BigInt, BigInt) {
    let mut rest = m.clone();
    let mut s = BigInt::one();
    let mut core = BigInt::one();
    let mut d = 2u64;
    while d < 100_000 {
        let bd = BigInt::from(d);
        if &bd * &bd > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &bd).is_zero() {
            rest /= &bd;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &bd;
        }
        if e % 2 == 1 {
            core *= &bd;
        }
        d += 1;
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
    } else {
        core *= rest;
    }
    (s, core)
}

impl RadicalSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add `coef · √radicand` for a rational `radicand ≥ 0`.
    pub fn add_term(&mut self, coef: BigRational, radicand: &BigRational) {
        assert!(!radicand.is_negative(), "negative radicand");
        if radicand.is_zero() || coef.is_zero() {
            return;
        }
        let m = radicand.numer() * radicand.denom();
        let (sq, core) = squarefree_big(&m);
        let c = coef * BigRational::new(sq, radicand.denom().clone());
        self.add_raw(c, core);
    }

    pub fn add_rational(&mut self, c: BigRational) {
        self.add_raw(c, BigInt::one());
    }

    fn add_raw(&mut self, c: BigRational, core: BigInt) {
        let e = self.terms.entry(core).or_insert_with(BigRational::zero);
        *e += c;
    }

    fn interval_sign(&self, bits: u32) -> Option<i32> {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        let scale = BigRational::from_integer(BigInt::one() << bits);
        for (m, c) in &self.terms {
            let r = (m << (2 * bits)).sqrt();
            let exact = &r * &r == (m << (2 * bits));
            let l = BigRational::from_integer(r.clone()) / &scale;
            let h = if exact { l.clone() } else { BigRational::from_integer(r + 1) / &scale };
            if c.is_positive() {
                lo += c * &l;
                hi += c * &h;
            } else {
                lo += c * &h;
                hi += c * &l;
            }
        }
        if lo.is_positive() {
            Some(1)
        } else if hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    fn square_group(group: &[(BigInt, BigRational)], out: &mut RadicalSum, negate: bool) {
        let two = BigRational::from_integer(BigInt::from(2));
        for (i, (mi, ci)) in group.iter().enumerate() {
            let t = ci * ci * BigRational::from_integer(mi.clone());
            out.add_raw(if negate { -t } else { t }, BigInt::one());
            for (mj, cj) in &group[i + 1..] {
                let g = mi.gcd(mj);
                let core = (mi / &g) * (mj / &g);
                let t = &two * ci * cj * BigRational::from_integer(g);
                out.add_raw(if negate { -t } else { t }, core);
            }
        }
    }

    pub fn sign(&self) -> i32 {
        let mut cur = self.clone();
        loop {
            cur.terms.retain(|_, c| !c.is_zero());
            let pos: Vec<_> = cur.terms.iter().filter(|(_, c)| c.is_positive()).map(|(m, c)| (m.clone(), c.clone())).collect();
            let neg: Vec<_> = cur.terms.iter().filter(|(_, c)| c.is_negative()).map(|(m, c)| (m.clone(), -c.clone())).collect();
            if pos.is_empty() && neg.is_empty() {
                return 0;
            }
            if neg.is_empty() {
                return 1;
            }
            if pos.is_empty() {
                return -1;
            }
            if let Some(s) = cur.interval_sign(64) {
                return s;
            }
            let mut next = RadicalSum::new();
            Self::square_group(&pos, &mut next, false);
            Self::square_group(&neg, &mut next, true);
            cur = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f23() -> Field {
        Field::new(2, 3).unwrap()
    }

    fn s(field: Field, c: [i64; 4]) -> ExactScalar {
        ExactScalar::new(field, c.map(|x| BigRational::from_integer(BigInt::from(x))))
    }

    #[test]
    fn conjugate_product() {
        let f = Field::new(2, 1).unwrap();
        let a = s(f, [1, 1, 0, 0]);
        let b = s(f, [1, -1, 0, 0]);
        assert_eq!(&a * &b, ExactScalar::from(-1));
    }

    #[test]
    fn identities() {
        let f = Field::new(3, 1).unwrap();
        let x = s(f, [2, 5, 0, 0]);
        assert_eq!(&ExactScalar::zero() + &x, x);
        let y = s(f, [1, 1, 0, 0]);
        assert_eq!(&y / &y, ExactScalar::one());
    }

    #[test]
    fn signs() {
        let f = f23();
        assert_eq!(s(f, [1, 1, -1, 0]).sign(), 1);
        assert_eq!(s(f, [2, -1, -1, 0]).sign(), -1);
        assert_eq!(ExactScalar::zero().sign(), 0);
        // √6 - √2·√3 collapses to zero.
        let r2 = ExactScalar::sqrt_int(f, 2).unwrap();
        let r3 = ExactScalar::sqrt_int(f, 3).unwrap();
        let r6 = ExactScalar::sqrt_int(f, 6).unwrap();
        assert!((&r6 - &(&r2 * &r3)).is_zero());
    }

    #[test]
    fn descriptor_canonicalization() {
        assert_eq!(Field::new(3, 2).unwrap(), f23());
        assert_eq!(Field::new(1, 5).unwrap(), Field::new(5, 1).unwrap());
        assert_eq!(Field::new(7, 7).unwrap(), Field::new(7, 1).unwrap());
        assert!(Field::new(4, 1).is_err());
        assert_eq!(Field::from_radicands(12, 1).unwrap(), Field::new(3, 1).unwrap());
    }

    #[test]
    fn sqrt_in_composite_field() {
        let f = Field::new(6, 10).unwrap();
        // √15 = √60 / 2 and √60 = √(pq).
        let r15 = ExactScalar::sqrt_int(f, 15).unwrap();
        assert_eq!(r15.square(), ExactScalar::from(15));
        assert!(ExactScalar::sqrt_int(f, 7).is_err());
    }

    #[test]
    fn mismatch_and_division_errors() {
        let a = s(Field::new(2, 1).unwrap(), [0, 1, 0, 0]);
        let b = s(Field::new(3, 1).unwrap(), [0, 1, 0, 0]);
        assert!(matches!(a.try_add(&b), Err(ExactError::FieldMismatch { .. })));
        assert_eq!(a.try_div(&ExactScalar::zero()), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn radical_sums() {
        let r = |n: i64| BigRational::from_integer(BigInt::from(n));
        // 1 + √2 − √3 > 0
        let mut a = RadicalSum::new();
        a.add_rational(r(1));
        a.add_term(r(1), &r(2));
        a.add_term(r(-1), &r(3));
        assert_eq!(a.sign(), 1);
        // √8 − 2√2 = 0
        let mut z = RadicalSum::new();
        z.add_term(r(1), &r(8));
        z.add_term(r(-2), &r(2));
        assert_eq!(z.sign(), 0);
        // √2 + √3 − √5 − √(1/7): positive
        let mut b = RadicalSum::new();
        b.add_term(r(1), &r(2));
        b.add_term(r(1), &r(3));
        b.add_term(r(-1), &r(5));
        b.add_term(r(-1), &BigRational::new(1.into(), 7.into()));
        assert_eq!(b.sign(), 1);
    }

    #[test]
    fn serde_roundtrip() {
        let x = s(f23(), [1, -2, 0, 3]);
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<ExactScalar>(&j).unwrap(), x);
        let h = ExactScalar::from_ratio(-3, 6);
        assert_eq!(serde_json::to_string(&h).unwrap(), "\"-1/2\"");
    }
}
