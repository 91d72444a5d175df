//! Clifford algebras `Cl_n` generated by `i₁ … i_{n−1}` with `i_h² = −1`.
//!
//! Elements are dense arrays of `2^{n−1}` coefficients indexed by blade
//! bitmask: bit `h−1` set means `i_h` occurs in the blade.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::ExactScalar;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("degree mismatch: Cl_{0} vs Cl_{1}")]
    DegreeMismatch(u8, u8),
    #[error("unsupported degree {0} (expected 3, 4 or 5)")]
    UnsupportedDegree(u8),
    #[error("element is not a vector")]
    NotAVector,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("bad blade key {0:?}")]
    BadBlade(String),
}

/// Sign (as `true` = negative) of the blade product `e_a e_b = ± e_{a xor b}`.
fn blade_product_negative(a: usize, b: usize) -> bool {
    let mut swaps = 0u32;
    let mut x = a >> 1;
    while x != 0 {
        swaps += (x & b).count_ones();
        x >>= 1;
    }
    // each shared generator squares to −1
    swaps += (a & b).count_ones();
    swaps % 2 == 1
}

pub fn grade(blade: usize) -> u32 {
    blade.count_ones()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    n: u8,
    c: Vec<ExactScalar>,
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if mask == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}·i{}", blade_key(mask))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Blade key as concatenated generator indices, e.g. `"12"` for `i₁i₂`.
pub fn blade_key(mask: usize) -> String {
    (0..8).filter(|b| mask & (1 << b) != 0).map(|b| char::from(b'1' + b as u8)).collect()
}

fn parse_blade_key(n: u8, key: &str) -> Result<usize, CliffordError> {
    let mut mask = 0usize;
    let mut last = 0u8;
    for ch in key.chars() {
        let d = ch.to_digit(10).ok_or_else(|| CliffordError::BadBlade(key.into()))? as u8;
        if d == 0 || d >= n || d <= last {
            return Err(CliffordError::BadBlade(key.into()));
        }
        last = d;
        mask |= 1 << (d - 1);
    }
    Ok(mask)
}

impl CliffordElement {
    fn check_degree(n: u8) -> Result<(), CliffordError> {
        if (3..=5).contains(&n) {
            Ok(())
        } else {
            Err(CliffordError::UnsupportedDegree(n))
        }
    }

    pub fn zero(n: u8) -> Self {
        Self::check_degree(n).expect("supported degree");
        CliffordElement { n, c: vec![ExactScalar::zero(); 1 << (n - 1)] }
    }

    pub fn scalar(n: u8, s: ExactScalar) -> Self {
        let mut e = Self::zero(n);
        e.c[0] = s;
        e
    }

    pub fn one(n: u8) -> Self {
        Self::scalar(n, ExactScalar::one())
    }

    /// The generator `i_h`, `1 ≤ h ≤ n−1`.
    pub fn generator(n: u8, h: u8) -> Self {
        assert!(h >= 1 && h < n, "generator index out of range");
        Self::blade(n, 1 << (h - 1), ExactScalar::one())
    }

    pub fn blade(n: u8, mask: usize, coeff: ExactScalar) -> Self {
        let mut e = Self::zero(n);
        e.c[mask] = coeff;
        e
    }

    /// The vector `v₀ + v₁i₁ + … + v_{n−1}i_{n−1}`.
    pub fn from_vector(n: u8, v: &[ExactScalar]) -> Self {
        assert_eq!(v.len(), n as usize, "vector length must equal the degree");
        let mut e = Self::zero(n);
        e.c[0] = v[0].clone();
        for h in 1..n as usize {
            e.c[1 << (h - 1)] = v[h].clone();
        }
        e
    }

    pub fn from_coeffs(n: u8, c: Vec<ExactScalar>) -> Result<Self, CliffordError> {
        Self::check_degree(n)?;
        if c.len() != 1 << (n - 1) {
            return Err(CliffordError::UnsupportedDegree(n));
        }
        Ok(CliffordElement { n, c })
    }

    pub fn degree(&self) -> u8 {
        self.n
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.c
    }

    pub fn coeff(&self, mask: usize) -> &ExactScalar {
        &self.c[mask]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_scalar(&self) -> bool {
        self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.is_scalar()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CliffordError> {
        if self.n != other.n {
            return Err(CliffordError::DegreeMismatch(self.n, other.n));
        }
        let len = self.c.len();
        let mut out = vec![ExactScalar::zero(); len];
        for i in 0..len {
            let a = &self.c[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..len {
                let b = &other.c[j];
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                if blade_product_negative(i, j) {
                    out[i ^ j] -= &t;
                } else {
                    out[i ^ j] += &t;
                }
            }
        }
        Ok(CliffordElement { n: self.n, c: out })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CliffordError> {
        if self.n != other.n {
            return Err(CliffordError::DegreeMismatch(self.n, other.n));
        }
        Ok(CliffordElement { n: self.n, c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect() })
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        CliffordElement { n: self.n, c: self.c.iter().map(|a| a * s).collect() }
    }

    fn with_grade_signs(&self, negative: impl Fn(u32) -> bool) -> Self {
        CliffordElement {
            n: self.n,
            c: self.c.iter().enumerate().map(|(m, a)| if negative(grade(m)) { -a } else { a.clone() }).collect(),
        }
    }

    /// Main involution: `i_h ↦ −i_h`.
    pub fn conj_prime(&self) -> Self {
        self.with_grade_signs(|g| g % 2 == 1)
    }

    /// Reversion of the order of factors.
    pub fn conj_star(&self) -> Self {
        self.with_grade_signs(|g| (g * g.saturating_sub(1) / 2) % 2 == 1)
    }

    /// Clifford conjugation, the composite of ′ and *.
    pub fn conj_bar(&self) -> Self {
        self.with_grade_signs(|g| (g * (g + 1) / 2) % 2 == 1)
    }

    /// `|a|²`, the sum of squared coefficients.
    pub fn norm_sq(&self) -> ExactScalar {
        self.c.iter().filter(|x| !x.is_zero()).map(|x| x.square()).sum()
    }

    /// Only grade 0 and grade 1 blades are nonzero.
    pub fn is_vector(&self) -> bool {
        self.c.iter().enumerate().all(|(m, a)| grade(m) <= 1 || a.is_zero())
    }

    /// Coordinates `(v₀, …, v_{n−1})` of a vector.
    pub fn vector_coords(&self) -> Result<Vec<ExactScalar>, CliffordError> {
        if !self.is_vector() {
            return Err(CliffordError::NotAVector);
        }
        let mut v = vec![self.c[0].clone()];
        for h in 1..self.n as usize {
            v.push(self.c[1 << (h - 1)].clone());
        }
        Ok(v)
    }

    /// `ᾱ / |α|²` for a nonzero vector.
    pub fn vector_inverse(&self) -> Result<Self, CliffordError> {
        if !self.is_vector() {
            return Err(CliffordError::NotAVector);
        }
        let n2 = self.norm_sq();
        if n2.is_zero() {
            return Err(CliffordError::ZeroInverse);
        }
        Ok(self.conj_bar().scale(&n2.recip()))
    }

    /// Inverse of a Clifford-group element: `ā / (a ā)` when `a ā` is a nonzero scalar.
    pub fn group_inverse(&self) -> Result<Self, CliffordError> {
        let bar = self.conj_bar();
        let p = self * &bar;
        if !p.is_scalar() {
            return Err(CliffordError::NotAVector);
        }
        if p.c[0].is_zero() {
            return Err(CliffordError::ZeroInverse);
        }
        Ok(bar.scale(&p.c[0].recip()))
    }

    /// Same element viewed in `Cl_m`, `m ≥ n`.
    pub fn embed(&self, m: u8) -> Self {
        assert!(m >= self.n);
        let mut e = Self::zero(m);
        for (mask, a) in self.c.iter().enumerate() {
            e.c[mask] = a.clone();
        }
        e
    }

    /// Restriction to `Cl_m`, `m ≤ n`, if no blade uses a dropped generator.
    pub fn restrict(&self, m: u8) -> Option<Self> {
        let len = 1usize << (m - 1);
        if self.c[len..].iter().any(|a| !a.is_zero()) {
            return None;
        }
        Some(CliffordElement { n: m, c: self.c[..len].to_vec() })
    }
}

impl Neg for &CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        CliffordElement { n: self.n, c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Neg for CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        -&self
    }
}

impl Add for &CliffordElement {
    type Output = CliffordElement;
    fn add(self, rhs: &CliffordElement) -> CliffordElement {
        self.try_add(rhs).expect("Clifford degree mismatch")
    }
}

impl Sub for &CliffordElement {
    type Output = CliffordElement;
    fn sub(self, rhs: &CliffordElement) -> CliffordElement {
        self.try_add(&-rhs).expect("Clifford degree mismatch")
    }
}

impl Mul for &CliffordElement {
    type Output = CliffordElement;
    fn mul(self, rhs: &CliffordElement) -> CliffordElement {
        self.try_mul(rhs).expect("Clifford degree mismatch")
    }
}

impl Add for CliffordElement {
    type Output = CliffordElement;
    fn add(self, rhs: CliffordElement) -> CliffordElement {
        &self + &rhs
    }
}

impl Sub for CliffordElement {
    type Output = CliffordElement;
    fn sub(self, rhs: CliffordElement) -> CliffordElement {
        &self - &rhs
    }
}

impl Mul for CliffordElement {
    type Output = CliffordElement;
    fn mul(self, rhs: CliffordElement) -> CliffordElement {
        &self * &rhs
    }
}

pub fn clifford_mul(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement, CliffordError> {
    a.try_mul(b)
}

#[derive(Serialize, Deserialize)]
struct CliffordJson {
    n: u8,
    coeffs: BTreeMap<String, ExactScalar>,
}

impl Serialize for CliffordElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeffs = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(m, a)| (blade_key(m), a.clone()))
            .collect();
        CliffordJson { n: self.n, coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CliffordElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = CliffordJson::deserialize(deserializer)?;
        CliffordElement::check_degree(j.n).map_err(serde::de::Error::custom)?;
        let mut e = CliffordElement::zero(j.n);
        for (k, v) in j.coeffs {
            let m = parse_blade_key(j.n, &k).map_err(serde::de::Error::custom)?;
            e.c[m] = v;
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(h: u8) -> CliffordElement {
        CliffordElement::generator(4, h)
    }

    fn sc(v: i64) -> CliffordElement {
        CliffordElement::scalar(4, ExactScalar::from(v))
    }

    #[test]
    fn defining_relations() {
        let i12 = &i(1) * &i(2);
        assert_eq!(i12, CliffordElement::blade(4, 0b11, ExactScalar::one()));
        assert_eq!(&i(2) * &i(1), -&i12);
        assert_eq!(&i(1) * &i(1), sc(-1));
        assert_eq!(&(&sc(1) + &i(1)) * &(&sc(1) - &i(1)), sc(2));
    }

    #[test]
    fn conjugations() {
        let i12 = &i(1) * &i(2);
        assert_eq!(i12.conj_star(), -&i12);
        let i123 = &i12 * &i(3);
        assert_eq!(i123.conj_prime(), -&i123);
        let v = CliffordElement::from_vector(4, &[1.into(), 2.into(), 3.into(), 4.into()]);
        assert_eq!(v.conj_star(), v);
        assert_eq!(v.conj_bar(), v.conj_prime());
    }

    #[test]
    fn norms_and_inverses() {
        assert_eq!((&sc(1) + &i(1)).norm_sq(), ExactScalar::from(2));
        assert!(CliffordElement::zero(4).norm_sq().is_zero());
        let w = &(&i(1) * &i(2)) * &i(3);
        let eps1 = (&sc(1) + &w).scale(&ExactScalar::from_ratio(1, 2));
        assert_eq!(eps1.norm_sq(), ExactScalar::from_ratio(1, 2));
        assert!((&(&sc(1) + &i(1)) + &i(2)).is_vector());
        assert!(!(&i(1) * &i(2)).is_vector());
        assert_eq!(i(1).vector_inverse().unwrap(), -&i(1));
        let v = &sc(1) + &i(1);
        assert_eq!(v.vector_inverse().unwrap(), (&sc(1) - &i(1)).scale(&ExactScalar::from_ratio(1, 2)));
        assert!(CliffordElement::zero(4).vector_inverse().is_err());
        assert!((&i(1) * &i(2)).vector_inverse().is_err());
    }

    #[test]
    fn degree_mismatch() {
        assert!(CliffordElement::one(4).try_mul(&CliffordElement::one(5)).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let x = (&sc(1) + &(&i(1) * &i(2)).scale(&ExactScalar::from_ratio(-3, 2))).clone();
        let j = serde_json::to_value(&x).unwrap();
        assert_eq!(j["coeffs"]["12"], "-3/2");
        assert_eq!(serde_json::from_value::<CliffordElement>(j).unwrap(), x);
    }
}
