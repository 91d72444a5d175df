//! Closed half-spaces of the upper half-space bounded by vertical
//! hyperplanes or hemispheres centered on the boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::ExactScalar;

/// A point `y + r·e_n` of the upper half-space; `y` has `n` coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct UpperPoint {
    pub y: Vec<ExactScalar>,
    pub r: ExactScalar,
}

impl UpperPoint {
    pub fn new(y: Vec<ExactScalar>, r: ExactScalar) -> Self {
        UpperPoint { y, r }
    }

    /// The point `iₙ = (0, …, 0; 1)`.
    pub fn basepoint(n: usize) -> Self {
        UpperPoint { y: vec![ExactScalar::zero(); n], r: ExactScalar::one() }
    }

    pub fn dim(&self) -> usize {
        self.y.len()
    }

    /// Squared Euclidean norm of the full point.
    pub fn norm_sq(&self) -> ExactScalar {
        dot(&self.y, &self.y) + self.r.square()
    }

    /// Euclidean squared distance in ℝⁿ⁺¹.
    pub fn dist_sq(&self, other: &UpperPoint) -> ExactScalar {
        dist_sq(&self.y, &other.y) + (&self.r - &other.r).square()
    }
}

pub fn dot(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

pub fn dist_sq(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
    a.iter().zip(b).map(|(x, y)| (x - y).square()).sum()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keep {
    Outside,
    Inside,
}

/// A closed half-space of ℍⁿ⁺¹.
///
/// `Sphere` keeps `|ỹ − c|² + r² ≥ R²` (outside) or `≤ R²` (inside);
/// `Plane` keeps `⟨normal, ỹ⟩ + offset ≥ 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum HalfSpace {
    Sphere { center: Vec<ExactScalar>, radius_sq: ExactScalar, keep: Keep },
    Plane { normal: Vec<ExactScalar>, offset: ExactScalar },
}

impl HalfSpace {
    pub fn dim(&self) -> usize {
        match self {
            HalfSpace::Sphere { center, .. } => center.len(),
            HalfSpace::Plane { normal, .. } => normal.len(),
        }
    }

    /// Signed value whose sign is `≥ 0` exactly on the kept side.
    pub fn evaluate(&self, z: &UpperPoint) -> ExactScalar {
        match self {
            HalfSpace::Sphere { center, radius_sq, keep } => {
                let v = dist_sq(&z.y, center) + z.r.square() - radius_sq;
                match keep {
                    Keep::Outside => v,
                    Keep::Inside => -v,
                }
            }
            HalfSpace::Plane { normal, offset } => dot(normal, &z.y) + offset,
        }
    }

    pub fn contains(&self, z: &UpperPoint) -> bool {
        self.evaluate(z).sign() >= 0
    }

    pub fn on_boundary(&self, z: &UpperPoint) -> bool {
        self.evaluate(z).is_zero()
    }

    /// Same closed half-space (planes compared up to a positive factor).
    pub fn same_as(&self, other: &HalfSpace) -> bool {
        match (self, other) {
            (HalfSpace::Sphere { .. }, HalfSpace::Sphere { .. }) => self == other,
            (HalfSpace::Plane { normal: n1, offset: o1 }, HalfSpace::Plane { normal: n2, offset: o2 }) => {
                if n1.len() != n2.len() {
                    return false;
                }
                let Some(k) = n1.iter().position(|x| !x.is_zero()) else {
                    return false;
                };
                if n2[k].is_zero() {
                    return false;
                }
                let lambda = &n1[k] / &n2[k];
                if lambda.sign() <= 0 {
                    return false;
                }
                n1.iter().zip(n2).all(|(a, b)| *a == b * &lambda) && *o1 == o2 * &lambda
            }
            _ => false,
        }
    }

    /// Scale a plane so its first nonzero normal coordinate is ±1.
    pub fn normalized(&self) -> HalfSpace {
        match self {
            HalfSpace::Plane { normal, offset } => {
                let k = normal.iter().position(|x| !x.is_zero()).expect("nonzero normal");
                let s = normal[k].abs().recip();
                HalfSpace::Plane { normal: normal.iter().map(|x| x * &s).collect(), offset: offset * &s }
            }
            s => s.clone(),
        }
    }

    /// Exact points on the wall with positive height, when they can be
    /// constructed over ℚ. Planes always succeed; spheres need rational data.
    pub fn wall_points(&self, count: usize) -> Option<Vec<UpperPoint>> {
        match self {
            HalfSpace::Plane { normal, offset } => {
                let k = normal.iter().position(|x| !x.is_zero())?;
                let n = normal.len();
                let mut out = Vec::with_capacity(count);
                for t in 0..count {
                    let mut y: Vec<ExactScalar> =
                        (0..n).map(|i| ExactScalar::from_ratio(((t * 7 + i * 3) % 11) as i64 - 5, (i + 2) as i64)).collect();
                    y[k] = ExactScalar::zero();
                    let rest = dot(normal, &y) + offset;
                    y[k] = -(&rest / &normal[k]);
                    out.push(UpperPoint::new(y, ExactScalar::from_ratio(t as i64 + 1, 3)));
                }
                Some(out)
            }
            HalfSpace::Sphere { center, radius_sq, .. } => {
                let c: Vec<BigRational> = center.iter().map(|x| x.as_rational().cloned()).collect::<Option<_>>()?;
                let r2 = radius_sq.as_rational()?.clone();
                if !r2.is_positive() {
                    return None;
                }
                rational_sphere_points(&c, &r2, count)
            }
        }
    }
}

/// Write a positive integer as a sum of four squares.
pub fn four_squares(n: &BigInt) -> Option<[BigInt; 4]> {
    let isqrt = |m: &BigInt| m.sqrt();
    let mut a = isqrt(n);
    let mut tries_a = 0;
    while !a.is_negative() && tries_a < 2000 {
        let ra = n - &a * &a;
        let mut b = isqrt(&ra);
        let mut tries_b = 0;
        while !b.is_negative() && tries_b < 2000 {
            let rb = &ra - &b * &b;
            let mut c = isqrt(&rb);
            let mut tries_c = 0;
            while !c.is_negative() && tries_c < 200 {
                let rc = &rb - &c * &c;
                let d = isqrt(&rc);
                if &d * &d == rc {
                    return Some([a, b, c, d]);
                }
                c -= 1;
                tries_c += 1;
            }
            b -= 1;
            tries_b += 1;
        }
        a -= 1;
        tries_a += 1;
    }
    None
}

/// Points with positive last coordinate on the sphere `|z − (c,0)|² = r2` in ℚⁿ⁺¹.
fn rational_sphere_points(c: &[BigRational], r2: &BigRational, count: usize) -> Option<Vec<UpperPoint>> {
    let n = c.len();
    // A base point on the boundary: r2 = N/D² written as a sum of squares over D².
    let den = r2.denom().clone();
    let num = r2.numer() * &den;
    let sq = four_squares(&num)?;
    let mut base: Vec<BigRational> = c.to_vec();
    for (i, s) in sq.iter().enumerate().take(n.min(4)) {
        base[i] += BigRational::new(s.clone(), den.clone());
    }
    if n < 4 && sq[n..].iter().any(|s| !s.is_zero()) {
        return None;
    }
    base.push(BigRational::zero());
    let mut center: Vec<BigRational> = c.to_vec();
    center.push(BigRational::zero());
    // Second intersections of lines from the base point.
    let mut out = Vec::with_capacity(count);
    let one = BigRational::one();
    for t in 0..count {
        let mut u: Vec<BigRational> = center.iter().zip(&base).map(|(a, b)| a - b).collect();
        u[n] = &one + BigRational::from_integer(BigInt::from(t as i64));
        for (i, ui) in u.iter_mut().enumerate().take(n) {
            *ui += BigRational::new(BigInt::from(((t + i) % 5) as i64 - 2), BigInt::from(97 + t as i64));
        }
        let w: Vec<BigRational> = base.iter().zip(&center).map(|(a, b)| a - b).collect();
        let wu: BigRational = w.iter().zip(&u).map(|(a, b)| a * b).sum();
        let uu: BigRational = u.iter().map(|a| a * a).sum();
        let s = -BigRational::from_integer(BigInt::from(2)) * wu / uu;
        if !s.is_positive() {
            continue;
        }
        let z: Vec<BigRational> = base.iter().zip(&u).map(|(a, b)| a + &s * b).collect();
        if !z[n].is_positive() {
            continue;
        }
        out.push(UpperPoint::new(
            z[..n].iter().cloned().map(ExactScalar::from_rational).collect(),
            ExactScalar::from_rational(z[n].clone()),
        ));
    }
    if out.len() == count {
        Some(out)
    } else {
        None
    }
}

/// Equidistance residual `q_r|z−p|² − p_r|z−q|²`, zero exactly on the bisector of `p` and `q`.
pub fn equidistance_residual(z: &UpperPoint, p: &UpperPoint, q: &UpperPoint) -> ExactScalar {
    &q.r * &z.dist_sq(p) - &p.r * &z.dist_sq(q)
}

/// The wall of `h` equals the bisector of `p`, `q` as a quadric, and `p` is on the kept side.
///
/// Checked by comparing coefficients of `q_r|z−p|² − p_r|z−q|²` with the wall's
/// defining polynomial up to a nonzero factor; valid over any field.
pub fn wall_is_bisector(h: &HalfSpace, p: &UpperPoint, q: &UpperPoint) -> bool {
    let n = p.dim();
    // F(z) = A|z|² + ⟨L, ỹ⟩ + C (height linear terms cancel).
    let a = &q.r - &p.r;
    let l: Vec<ExactScalar> =
        (0..n).map(|i| ExactScalar::from(-2) * (&q.r * &p.y[i] - &p.r * &q.y[i])).collect();
    let c = &q.r * &p.norm_sq() - &p.r * &q.norm_sq();
    let (ha, hl, hc) = match h {
        HalfSpace::Sphere { center, radius_sq, .. } => (
            ExactScalar::one(),
            center.iter().map(|x| ExactScalar::from(-2) * x).collect::<Vec<_>>(),
            dot(center, center) - radius_sq,
        ),
        HalfSpace::Plane { normal, offset } => (ExactScalar::zero(), normal.clone(), offset.clone()),
    };
    let mut target = vec![a.clone()];
    target.extend(l);
    target.push(c);
    let mut mine = vec![ha];
    mine.extend(hl);
    mine.push(hc);
    let Some(k) = mine.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if target[k].is_zero() {
        return false;
    }
    let lambda = &target[k] / &mine[k];
    let proportional = mine.iter().zip(&target).all(|(m, t)| &(m * &lambda) == t);
    proportional && h.contains(p) && !h.on_boundary(p)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum HalfSpaceJson {
    Sphere { center: Vec<ExactScalar>, radius_sq: ExactScalar, keep: Keep },
    Plane { normal: Vec<ExactScalar>, offset: ExactScalar, keep: String },
}

impl Serialize for HalfSpace {
    /// Centers and normals are written with `n+1` coordinates, the last (height) being 0.
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pad = |v: &[ExactScalar]| {
            let mut v = v.to_vec();
            v.push(ExactScalar::zero());
            v
        };
        match self {
            HalfSpace::Sphere { center, radius_sq, keep } => {
                HalfSpaceJson::Sphere { center: pad(center), radius_sq: radius_sq.clone(), keep: *keep }.serialize(s)
            }
            HalfSpace::Plane { normal, offset } => {
                HalfSpaceJson::Plane { normal: pad(normal), offset: offset.clone(), keep: "nonneg".into() }.serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for HalfSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strip = |mut v: Vec<ExactScalar>| -> Result<Vec<ExactScalar>, D::Error> {
            match v.pop() {
                Some(h) if h.is_zero() => Ok(v),
                _ => Err(serde::de::Error::custom("height coordinate of a wall center/normal must be 0")),
            }
        };
        match HalfSpaceJson::deserialize(d)? {
            HalfSpaceJson::Sphere { center, radius_sq, keep } => {
                Ok(HalfSpace::Sphere { center: strip(center)?, radius_sq, keep })
            }
            HalfSpaceJson::Plane { normal, offset, keep } => {
                if keep != "nonneg" {
                    return Err(serde::de::Error::custom("plane keep must be \"nonneg\""));
                }
                Ok(HalfSpace::Plane { normal: strip(normal)?, offset })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(y: &[i64], r: (i64, i64)) -> UpperPoint {
        UpperPoint::new(y.iter().map(|&v| ExactScalar::from(v)).collect(), ExactScalar::from_ratio(r.0, r.1))
    }

    #[test]
    fn four_square_decomposition() {
        for n in [1i64, 2, 3, 7, 15, 23, 1000, 12345] {
            let s = four_squares(&BigInt::from(n)).unwrap();
            let sum: BigInt = s.iter().map(|x| x * x).sum();
            assert_eq!(sum, BigInt::from(n));
        }
    }

    #[test]
    fn sphere_points_lie_on_sphere() {
        let h = HalfSpace::Sphere {
            center: vec![ExactScalar::from(-1), 0.into(), 0.into(), 0.into()],
            radius_sq: ExactScalar::from_ratio(7, 3),
            keep: Keep::Outside,
        };
        let pts = h.wall_points(10).unwrap();
        assert_eq!(pts.len(), 10);
        for z in pts {
            assert!(h.on_boundary(&z));
            assert!(z.r.sign() > 0);
        }
    }

    #[test]
    fn plane_identity_check() {
        let p = pt(&[0, 0, 0, 0], (1, 1));
        let q = pt(&[1, 0, 0, 0], (1, 1));
        let h = HalfSpace::Plane {
            normal: vec![ExactScalar::from(-1), 0.into(), 0.into(), 0.into()],
            offset: ExactScalar::from_ratio(1, 2),
        };
        assert!(wall_is_bisector(&h, &p, &q));
        for z in h.wall_points(10).unwrap() {
            assert!(equidistance_residual(&z, &p, &q).is_zero());
        }
        let flipped = HalfSpace::Plane {
            normal: vec![ExactScalar::from(1), 0.into(), 0.into(), 0.into()],
            offset: ExactScalar::from_ratio(-1, 2),
        };
        assert!(!wall_is_bisector(&flipped, &p, &q));
    }

    #[test]
    fn json_shape() {
        let h = HalfSpace::Plane { normal: vec![ExactScalar::from(1), 0.into()], offset: ExactScalar::from_ratio(1, 2) };
        let j = serde_json::to_value(&h).unwrap();
        assert_eq!(j["kind"], "plane");
        assert_eq!(j["keep"], "nonneg");
        assert_eq!(j["normal"].as_array().unwrap().len(), 3);
        assert_eq!(serde_json::from_value::<HalfSpace>(j).unwrap(), h);
    }
}
