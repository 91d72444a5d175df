//! Quaternions over ExactScalar, the definite algebras `(x,y/ℚ)` and their
//! embedding into Hamilton's quaternions, and 2×2 quaternion matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::{ExactError, ExactScalar, Field};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum QuatError {
    #[error("singular matrix (Δ² = 0)")]
    Singular,
    #[error("zero quaternion has no inverse")]
    ZeroInverse,
    #[error("quaternion is not in the image of (x,y/Q): {0}")]
    NotRational(String),
    #[error("algebra (x,y) = ({0},{1}) is not totally definite")]
    NotDefinite(i64, i64),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Hamilton quaternion `a₀ + a₁i + a₂j + a₃k` with `i² = j² = −1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct Quaternion(pub [ExactScalar; 4]);

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl Quaternion {
    pub fn new(a: [ExactScalar; 4]) -> Self {
        Quaternion(a)
    }

    pub fn from_ints(a: [i64; 4]) -> Self {
        Quaternion(a.map(ExactScalar::from))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(ExactScalar::one())
    }

    pub fn scalar(s: ExactScalar) -> Self {
        Quaternion([s, ExactScalar::zero(), ExactScalar::zero(), ExactScalar::zero()])
    }

    pub fn i() -> Self {
        Self::from_ints([0, 1, 0, 0])
    }

    pub fn j() -> Self {
        Self::from_ints([0, 0, 1, 0])
    }

    pub fn k() -> Self {
        Self::from_ints([0, 0, 0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn re(&self) -> &ExactScalar {
        &self.0[0]
    }

    /// `ā = a₀ − a₁i − a₂j − a₃k`.
    pub fn conj(&self) -> Self {
        let [a0, a1, a2, a3] = &self.0;
        Quaternion([a0.clone(), -a1, -a2, -a3])
    }

    /// `a′ = a₀ − a₁i − a₂j + a₃k`.
    pub fn conj_prime(&self) -> Self {
        let [a0, a1, a2, a3] = &self.0;
        Quaternion([a0.clone(), -a1, -a2, a3.clone()])
    }

    /// `a* = a₀ + a₁i + a₂j − a₃k`.
    pub fn conj_star(&self) -> Self {
        let [a0, a1, a2, a3] = &self.0;
        Quaternion([a0.clone(), a1.clone(), a2.clone(), -a3])
    }

    pub fn norm_sq(&self) -> ExactScalar {
        self.0.iter().filter(|x| !x.is_zero()).map(|x| x.square()).sum()
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Quaternion(self.0.clone().map(|a| &a * s))
    }

    pub fn inverse(&self) -> Result<Self, QuatError> {
        let n = self.norm_sq();
        if n.is_zero() {
            return Err(QuatError::ZeroInverse);
        }
        Ok(self.conj().scale(&n.recip()))
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, r: &Quaternion) -> Quaternion {
        Quaternion([&self.0[0] + &r.0[0], &self.0[1] + &r.0[1], &self.0[2] + &r.0[2], &self.0[3] + &r.0[3]])
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, r: &Quaternion) -> Quaternion {
        Quaternion([&self.0[0] - &r.0[0], &self.0[1] - &r.0[1], &self.0[2] - &r.0[2], &self.0[3] - &r.0[3]])
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion([-&self.0[0], -&self.0[1], -&self.0[2], -&self.0[3]])
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, q: &Quaternion) -> Quaternion {
        let [p0, p1, p2, p3] = &self.0;
        let [q0, q1, q2, q3] = &q.0;
        Quaternion([
            p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
            p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
            p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
            p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
        ])
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, r: $t) -> $t {
                &self + &r
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, r: $t) -> $t {
                &self - &r
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, r: $t) -> $t {
                &self * &r
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(Quaternion);

/// 2×2 matrix `[[a, b], [c, d]]` of quaternions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuatMatrix {
    pub a: Quaternion,
    pub b: Quaternion,
    pub c: Quaternion,
    pub d: Quaternion,
}

impl QuatMatrix {
    pub fn new(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        QuatMatrix { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(Quaternion::one(), Quaternion::zero(), Quaternion::zero(), Quaternion::one())
    }

    pub fn entries(&self) -> [&Quaternion; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    /// Sum of the entry norms.
    pub fn norm_sq(&self) -> ExactScalar {
        self.entries().iter().map(|q| q.norm_sq()).sum()
    }

    /// The pseudo-determinant σ.
    pub fn sigma(&self) -> Quaternion {
        let QuatMatrix { a, b, c, d } = self;
        if !c.is_zero() {
            let ci = c.inverse().expect("nonzero");
            &(&(&(c * a) * &ci) * d) - &(c * b)
        } else if !b.is_zero() {
            let bi = b.inverse().expect("nonzero");
            &(&(b * d) * &bi) * a
        } else if a != d {
            let t = d - a;
            let ti = t.inverse().expect("nonzero");
            &(&(&t * a) * &ti) * d
        } else {
            a * &a.conj()
        }
    }

    /// `Δ² = |σ|²`.
    pub fn dieudonne_det_sq(&self) -> ExactScalar {
        self.sigma().norm_sq()
    }

    /// `|a|²|d|² + |b|²|c|² − 2 Re(a c̄ d b̄)`, equal to `Δ²`.
    pub fn delta_sq_expanded(&self) -> ExactScalar {
        let QuatMatrix { a, b, c, d } = self;
        let cross = &(&(a * &c.conj()) * d) * &b.conj();
        a.norm_sq() * d.norm_sq() + b.norm_sq() * c.norm_sq() - ExactScalar::from(2) * cross.re()
    }

    /// The expansion with `|b|²|d|²` in place of `|b|²|c|²`; kept for comparison only.
    pub fn delta_sq_bd_variant(&self) -> ExactScalar {
        let QuatMatrix { a, b, c, d } = self;
        let cross = &(&(a * &c.conj()) * d) * &b.conj();
        a.norm_sq() * d.norm_sq() + b.norm_sq() * d.norm_sq() - ExactScalar::from(2) * cross.re()
    }

    pub fn inverse(&self) -> Result<Self, QuatError> {
        let sigma = self.sigma();
        if sigma.is_zero() {
            return Err(QuatError::Singular);
        }
        let si = sigma.inverse()?;
        let QuatMatrix { a, b, c, d } = self;
        if c.is_zero() {
            let ai = a.inverse()?;
            let di = d.inverse()?;
            return Ok(Self::new(ai, -&(&si * b), Quaternion::zero(), di));
        }
        let ci = c.inverse()?;
        let n22 = &(&(&si * c) * a) * &ci;
        let n11 = &(&(&ci * d) * &si) * c;
        let n21 = -&(&si * c);
        let n12 = if !a.is_zero() {
            -&(&(&a.inverse()? * b) * &n22)
        } else {
            &ci - &(&(&ci * d) * &n22)
        };
        Ok(Self::new(n11, n12, n21, n22))
    }
}

impl Mul for &QuatMatrix {
    type Output = QuatMatrix;
    fn mul(self, r: &QuatMatrix) -> QuatMatrix {
        QuatMatrix::new(
            &(&self.a * &r.a) + &(&self.b * &r.c),
            &(&self.a * &r.b) + &(&self.b * &r.d),
            &(&self.c * &r.a) + &(&self.d * &r.c),
            &(&self.c * &r.b) + &(&self.d * &r.d),
        )
    }
}

impl Mul for QuatMatrix {
    type Output = QuatMatrix;
    fn mul(self, r: QuatMatrix) -> QuatMatrix {
        &self * &r
    }
}

impl Serialize for QuatMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [[&self.a, &self.b], [&self.c, &self.d]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuatMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [[a, b], [c, d]] = <[[Quaternion; 2]; 2]>::deserialize(d)?;
        Ok(QuatMatrix::new(a, b, c, d))
    }
}

pub fn sigma(m: &QuatMatrix) -> Quaternion {
    m.sigma()
}

pub fn dieudonne_det(m: &QuatMatrix) -> ExactScalar {
    m.dieudonne_det_sq()
}

pub fn quat_matrix_inverse(m: &QuatMatrix) -> Result<QuatMatrix, QuatError> {
    m.inverse()
}

/// The definite quaternion algebra `(x,y/ℚ)` with `i² = x`, `j² = y`, `ij = −ji = k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct QuatAlgebra {
    pub x: i64,
    pub y: i64,
}

/// Element of `(x,y/ℚ)` as rational coordinates in `{1, i, j, k}`.
pub type OrderCoords = [BigRational; 4];

/// Element of the order `(x,y/ℤ)` as integer coordinates.
pub type IntQuat = [i64; 4];

impl QuatAlgebra {
    pub fn new(x: i64, y: i64) -> Result<Self, QuatError> {
        if x >= 0 || y >= 0 {
            return Err(QuatError::NotDefinite(x, y));
        }
        Ok(QuatAlgebra { x, y })
    }

    pub const HAMILTON: QuatAlgebra = QuatAlgebra { x: -1, y: -1 };

    pub fn field(&self) -> Field {
        Field::from_radicands(self.x.unsigned_abs(), self.y.unsigned_abs()).expect("nonzero radicands")
    }

    /// Coefficient weights `(1, |x|, |y|, |xy|)` of the reduced norm.
    pub fn weights(&self) -> [i64; 4] {
        [1, -self.x, -self.y, self.x * self.y]
    }

    pub fn mul_int(&self, p: &IntQuat, q: &IntQuat) -> IntQuat {
        let (a, b) = (self.x, self.y);
        [
            p[0] * q[0] + a * p[1] * q[1] + b * p[2] * q[2] - a * b * p[3] * q[3],
            p[0] * q[1] + p[1] * q[0] - b * p[2] * q[3] + b * p[3] * q[2],
            p[0] * q[2] + p[2] * q[0] + a * p[1] * q[3] - a * p[3] * q[1],
            p[0] * q[3] + p[3] * q[0] + p[1] * q[2] - p[2] * q[1],
        ]
    }

    pub fn nrd_int(&self, p: &IntQuat) -> i64 {
        let w = self.weights();
        (0..4).map(|k| w[k] * p[k] * p[k]).sum()
    }

    pub fn mul(&self, p: &OrderCoords, q: &OrderCoords) -> OrderCoords {
        let a = BigRational::from_integer(BigInt::from(self.x));
        let b = BigRational::from_integer(BigInt::from(self.y));
        let ab = &a * &b;
        [
            &p[0] * &q[0] + &a * &p[1] * &q[1] + &b * &p[2] * &q[2] - &ab * &p[3] * &q[3],
            &p[0] * &q[1] + &p[1] * &q[0] - &b * &p[2] * &q[3] + &b * &p[3] * &q[2],
            &p[0] * &q[2] + &p[2] * &q[0] + &a * &p[1] * &q[3] - &a * &p[3] * &q[1],
            &p[0] * &q[3] + &p[3] * &q[0] + &p[1] * &q[2] - &p[2] * &q[1],
        ]
    }

    /// `a₀ + a₁√|x| i + a₂√|y| j + a₃√|xy| k` in ℍ(ℝ).
    pub fn lambda_embed(&self, q: &OrderCoords) -> Quaternion {
        let f = self.field();
        let roots = self.roots(f);
        Quaternion([
            ExactScalar::from_rational(q[0].clone()),
            &roots[0] * &ExactScalar::from_rational(q[1].clone()),
            &roots[1] * &ExactScalar::from_rational(q[2].clone()),
            &roots[2] * &ExactScalar::from_rational(q[3].clone()),
        ])
    }

    pub fn lambda_embed_int(&self, q: &IntQuat) -> Quaternion {
        self.lambda_embed(&int_to_coords(q))
    }

    fn roots(&self, f: Field) -> [ExactScalar; 3] {
        let x = self.x.unsigned_abs();
        let y = self.y.unsigned_abs();
        [
            ExactScalar::sqrt_int(f, x).expect("radicand in field"),
            ExactScalar::sqrt_int(f, y).expect("radicand in field"),
            ExactScalar::sqrt_int(f, x * y).expect("radicand in field"),
        ]
    }

    /// Inverse of [`lambda_embed`](Self::lambda_embed); fails if the quaternion is outside `(x,y/ℚ)`.
    pub fn lambda_inv(&self, q: &Quaternion) -> Result<OrderCoords, QuatError> {
        let roots = self.roots(self.field());
        let mut out: OrderCoords = Default::default();
        out[0] = q.0[0].as_rational().cloned().ok_or_else(|| QuatError::NotRational(format!("{q:?}")))?;
        for k in 1..4 {
            let v = q.0[k].try_div(&roots[k - 1])?;
            out[k] = v.as_rational().cloned().ok_or_else(|| QuatError::NotRational(format!("{q:?}")))?;
        }
        Ok(out)
    }

    pub fn is_integral(&self, q: &Quaternion) -> bool {
        match self.lambda_inv(q) {
            Ok(c) => c.iter().all(|x| x.is_integer()),
            Err(_) => false,
        }
    }

    /// Integer coordinates of an element of `(x,y/ℤ)`.
    pub fn int_coords(&self, q: &Quaternion) -> Option<IntQuat> {
        let c = self.lambda_inv(q).ok()?;
        let mut out = [0i64; 4];
        for k in 0..4 {
            if !c[k].is_integer() {
                return None;
            }
            out[k] = num_traits::ToPrimitive::to_i64(&c[k].to_integer())?;
        }
        Some(out)
    }

    /// Entries lie in `(x,y/ℤ)` and `Δ² = 1`.
    pub fn is_unit_matrix(&self, m: &QuatMatrix) -> bool {
        m.entries().iter().all(|q| self.is_integral(q)) && m.dieudonne_det_sq().is_one()
    }

    /// Determinant of the 8×8 rational image of a matrix over `(x,y/ℚ)`.
    pub fn reduced_norm_via_embedding(&self, m: &QuatMatrix) -> Result<BigRational, QuatError> {
        let coords: Vec<OrderCoords> = m.entries().iter().map(|q| self.lambda_inv(q)).collect::<Result<_, _>>()?;
        let big = self.embedding_matrix(&coords);
        Ok(determinant(big))
    }

    /// The 8×8 block matrix with 2×2 blocks `A_k` (coordinate `k` of every entry).
    pub fn embedding_matrix(&self, entries: &[OrderCoords]) -> Vec<Vec<BigRational>> {
        let x = BigRational::from_integer(BigInt::from(self.x));
        let y = BigRational::from_integer(BigInt::from(self.y));
        let one = BigRational::one();
        let xy = &x * &y;
        // (coefficient index, factor) for each of the 4×4 blocks
        let pattern: [[(usize, BigRational); 4]; 4] = [
            [(0, one.clone()), (1, -x.clone()), (2, -y.clone()), (3, xy.clone())],
            [(1, -one.clone()), (0, one.clone()), (3, y.clone()), (2, -y.clone())],
            [(2, -one.clone()), (3, -x.clone()), (0, one.clone()), (1, x.clone())],
            [(3, -one.clone()), (2, -one.clone()), (1, one.clone()), (0, one.clone())],
        ];
        let mut out = vec![vec![BigRational::zero(); 8]; 8];
        for (br, row) in pattern.iter().enumerate() {
            for (bc, (k, f)) in row.iter().enumerate() {
                for r in 0..2 {
                    for c in 0..2 {
                        out[2 * br + r][2 * bc + c] = f * &entries[2 * r + c][*k];
                    }
                }
            }
        }
        out
    }
}

pub fn int_to_coords(q: &IntQuat) -> OrderCoords {
    q.map(|v| BigRational::from_integer(BigInt::from(v)))
}

/// Exact determinant by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

pub fn lambda_embed(alg: &QuatAlgebra, q: &OrderCoords) -> Quaternion {
    alg.lambda_embed(q)
}

pub fn lambda_inv(alg: &QuatAlgebra, q: &Quaternion) -> Result<OrderCoords, QuatError> {
    alg.lambda_inv(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: [i64; 4]) -> Quaternion {
        Quaternion::from_ints(a)
    }

    fn m(a: [i64; 4], b: [i64; 4], c: [i64; 4], d: [i64; 4]) -> QuatMatrix {
        QuatMatrix::new(q(a), q(b), q(c), q(d))
    }

    const O: [i64; 4] = [0, 0, 0, 0];
    const ONE: [i64; 4] = [1, 0, 0, 0];
    const I: [i64; 4] = [0, 1, 0, 0];
    const J: [i64; 4] = [0, 0, 1, 0];

    #[test]
    fn sigma_examples() {
        assert_eq!(QuatMatrix::identity().sigma(), Quaternion::one());
        let s = m(I, O, O, J).sigma();
        let t = &q(J) - &q(I);
        let expect = &(&(&t * &q(I)) * &t.inverse().unwrap()) * &q(J);
        assert_eq!(s, expect);
        assert!(s.norm_sq().is_one());
        assert_eq!(m(ONE, ONE, O, ONE).sigma(), Quaternion::one());
    }

    #[test]
    fn determinant_examples() {
        assert!(QuatMatrix::identity().dieudonne_det_sq().is_one());
        assert!(m(ONE, [3, -1, 2, 5], O, ONE).dieudonne_det_sq().is_one());
        assert_eq!(m([1, 1, 0, 0], O, O, ONE).dieudonne_det_sq(), ExactScalar::from(2));
        let h = QuatAlgebra::HAMILTON;
        assert!(h.is_unit_matrix(&m(ONE, ONE, O, ONE)));
        assert!(!h.is_unit_matrix(&m([2, 0, 0, 0], O, O, ONE)));
        assert!(h.is_unit_matrix(&m(O, [-1, 0, 0, 0], ONE, O)));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(QuatMatrix::identity().inverse().unwrap(), QuatMatrix::identity());
        assert_eq!(m(ONE, ONE, O, ONE).inverse().unwrap(), m(ONE, [-1, 0, 0, 0], O, ONE));
        assert_eq!(m(ONE, O, I, ONE).inverse().unwrap(), m(ONE, O, [0, -1, 0, 0], ONE));
        let w = m(O, [-1, 0, 0, 0], ONE, O);
        assert_eq!(&w * &w.inverse().unwrap(), QuatMatrix::identity());
        assert_eq!(m(O, O, O, O).inverse(), Err(QuatError::Singular));
    }

    #[test]
    fn reduced_norm_examples() {
        let h = QuatAlgebra::HAMILTON;
        assert!(h.reduced_norm_via_embedding(&QuatMatrix::identity()).unwrap().is_one());
        assert_eq!(
            h.reduced_norm_via_embedding(&m([1, 1, 0, 0], O, O, ONE)).unwrap(),
            BigRational::from_integer(4.into())
        );
        assert!(h.reduced_norm_via_embedding(&m(ONE, ONE, O, ONE)).unwrap().is_one());
    }

    #[test]
    fn lambda_examples() {
        let alg = QuatAlgebra::new(-2, -5).unwrap();
        let i = alg.lambda_embed(&int_to_coords(&I));
        assert_eq!(i.0[1], ExactScalar::sqrt_int(alg.field(), 2).unwrap());
        assert_eq!(alg.lambda_embed(&int_to_coords(&ONE)), Quaternion::one());
        assert_eq!(&i * &i, Quaternion::scalar(ExactScalar::from(-2)));
        assert_eq!(alg.lambda_inv(&i).unwrap(), int_to_coords(&I));
    }
}
