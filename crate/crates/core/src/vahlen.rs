//! Vahlen matrices: 2×2 Clifford matrices acting on ℍⁿ⁺¹ by Möbius
//! transformations, with their ball-model conjugates, isometric spheres and
//! Dirichlet bisectors at the base point `iₙ`.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::clifford::{grade, CliffordElement, CliffordError};
use crate::exactnum::{ExactScalar, RadicalSum};
use crate::geometry::halfspace::{dot, HalfSpace, Keep, UpperPoint};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum VahlenError {
    #[error("not a Vahlen matrix: {0}")]
    Invalid(String),
    #[error("matrix fixes the base point (norm 2); no bisector or isometric sphere")]
    InStabilizer,
    #[error("point is not in the open upper half-space")]
    NotInterior,
    #[error("bisector of a point with itself")]
    SamePoint,
    #[error("entries have mismatched or unsupported degree")]
    Degree,
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

/// `[[α, β], [γ, δ]]` with entries in `Cl_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VahlenMatrix {
    alpha: CliffordElement,
    beta: CliffordElement,
    gamma: CliffordElement,
    delta: CliffordElement,
    norm_sq: ExactScalar,
}

impl fmt::Debug for VahlenMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.alpha, self.beta, self.gamma, self.delta)
    }
}

/// Check the defining conditions; `Err` names the first failing one.
pub fn is_vahlen(
    alpha: &CliffordElement,
    beta: &CliffordElement,
    gamma: &CliffordElement,
    delta: &CliffordElement,
) -> Result<(), VahlenError> {
    let n = alpha.degree();
    if [beta, gamma, delta].iter().any(|e| e.degree() != n) || n > 4 {
        return Err(VahlenError::Degree);
    }
    let det = &(alpha * &delta.conj_star()) - &(beta * &gamma.conj_star());
    if !det.is_one() {
        return Err(VahlenError::Invalid(format!("αδ* − βγ* = {det}, expected 1")));
    }
    let checks = [
        ("αβ*", alpha * &beta.conj_star()),
        ("γδ*", gamma * &delta.conj_star()),
        ("γ*α", &gamma.conj_star() * alpha),
        ("δ*β", &delta.conj_star() * beta),
    ];
    for (name, v) in checks {
        if !v.is_vector() {
            return Err(VahlenError::Invalid(format!("{name} = {v} is not a vector")));
        }
    }
    Ok(())
}

impl VahlenMatrix {
    pub fn new(
        alpha: CliffordElement,
        beta: CliffordElement,
        gamma: CliffordElement,
        delta: CliffordElement,
    ) -> Result<Self, VahlenError> {
        is_vahlen(&alpha, &beta, &gamma, &delta)?;
        Ok(Self::new_unchecked(alpha, beta, gamma, delta))
    }

    /// Build without validation; callers must know the conditions hold.
    pub fn new_unchecked(
        alpha: CliffordElement,
        beta: CliffordElement,
        gamma: CliffordElement,
        delta: CliffordElement,
    ) -> Self {
        let norm_sq = alpha.norm_sq() + beta.norm_sq() + gamma.norm_sq() + delta.norm_sq();
        VahlenMatrix { alpha, beta, gamma, delta, norm_sq }
    }

    pub fn identity(n: u8) -> Self {
        Self::new_unchecked(
            CliffordElement::one(n),
            CliffordElement::zero(n),
            CliffordElement::zero(n),
            CliffordElement::one(n),
        )
    }

    /// `[[0, −1], [1, 0]]`.
    pub fn inversion(n: u8) -> Self {
        Self::new_unchecked(
            CliffordElement::zero(n),
            -CliffordElement::one(n),
            CliffordElement::one(n),
            CliffordElement::zero(n),
        )
    }

    /// Translation `[[1, b], [0, 1]]` by a vector `b`.
    pub fn translation(b: CliffordElement) -> Self {
        let n = b.degree();
        Self::new_unchecked(CliffordElement::one(n), b, CliffordElement::zero(n), CliffordElement::one(n))
    }

    pub fn degree(&self) -> u8 {
        self.alpha.degree()
    }

    pub fn alpha(&self) -> &CliffordElement {
        &self.alpha
    }

    pub fn beta(&self) -> &CliffordElement {
        &self.beta
    }

    pub fn gamma(&self) -> &CliffordElement {
        &self.gamma
    }

    pub fn delta(&self) -> &CliffordElement {
        &self.delta
    }

    pub fn entries(&self) -> [&CliffordElement; 4] {
        [&self.alpha, &self.beta, &self.gamma, &self.delta]
    }

    /// `‖M‖² = |α|² + |β|² + |γ|² + |δ|²`.
    pub fn norm_sq(&self) -> &ExactScalar {
        &self.norm_sq
    }

    /// `δ = α′` and `β = −γ′`: the matrix fixes `iₙ`.
    pub fn is_su(&self) -> bool {
        self.delta == self.alpha.conj_prime() && self.beta == -self.gamma.conj_prime()
    }

    /// `(δ*, −β*; −γ*, α*)`.
    pub fn inverse(&self) -> Self {
        Self::new_unchecked(
            self.delta.conj_star(),
            -self.beta.conj_star(),
            -self.gamma.conj_star(),
            self.alpha.conj_star(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new_unchecked(-&self.alpha, -&self.beta, -&self.gamma, -&self.delta)
    }

    pub fn mul(&self, o: &VahlenMatrix) -> Self {
        Self::new_unchecked(
            &(&self.alpha * &o.alpha) + &(&self.beta * &o.gamma),
            &(&self.alpha * &o.beta) + &(&self.beta * &o.delta),
            &(&self.gamma * &o.alpha) + &(&self.delta * &o.gamma),
            &(&self.gamma * &o.beta) + &(&self.delta * &o.delta),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_one() && self.delta.is_one() && self.beta.is_zero() && self.gamma.is_zero()
    }

    /// Equal up to sign.
    pub fn projectively_eq(&self, o: &VahlenMatrix) -> bool {
        self == o || *self == o.neg()
    }

    /// Representative of `±M` whose first nonzero coefficient (entries in
    /// order α, β, γ, δ; blades by bitmask) is positive.
    pub fn canonical_sign(&self) -> Self {
        for e in self.entries() {
            if let Some(c) = e.coeffs().iter().find(|c| !c.is_zero()) {
                return if c.sign() < 0 { self.neg() } else { self.clone() };
            }
        }
        self.clone()
    }

    /// Size measure used to pick simple representatives: nonzero blades
    /// weighted by grade + 1.
    pub fn complexity(&self) -> u32 {
        self.entries()
            .iter()
            .map(|e| e.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(m, _)| grade(m) + 1).sum::<u32>())
            .sum()
    }

    /// `(αz + β)(γz + δ)⁻¹` evaluated with the closed fraction formula.
    pub fn act(&self, z: &UpperPoint) -> Result<UpperPoint, VahlenError> {
        let n = self.degree();
        if z.r.sign() <= 0 {
            return Err(VahlenError::NotInterior);
        }
        if z.y.len() != n as usize {
            return Err(VahlenError::Degree);
        }
        let y = CliffordElement::from_vector(n, &z.y);
        let zz = dot(&z.y, &z.y) + z.r.square();
        let m = n + 1;
        let zc = &y.embed(m) + &CliffordElement::blade(m, 1 << (n - 1), z.r.clone());
        let den = (&(&self.gamma.embed(m) * &zc) + &self.delta.embed(m)).norm_sq();
        assert!(den.sign() > 0, "|γz+δ|² must be positive for interior z");
        let gbar = self.gamma.conj_bar();
        let dbar = self.delta.conj_bar();
        let num = &(&(&(&self.alpha * &gbar).scale(&zz) + &(&self.beta * &dbar)) + &(&(&self.alpha * &y) * &dbar))
            + &(&(&self.beta * &y.conj_bar()) * &gbar);
        let coords = num.vector_coords()?;
        let inv = den.recip();
        Ok(UpperPoint::new(coords.iter().map(|c| c * &inv).collect(), &z.r * &inv))
    }

    /// `(αz + β)(γz + δ)⁻¹` computed by direct multiplication in `Cl_{n+1}`.
    pub fn act_via_products(&self, z: &UpperPoint) -> Result<UpperPoint, VahlenError> {
        let n = self.degree();
        let m = n + 1;
        let y = CliffordElement::from_vector(n, &z.y).embed(m);
        let zc = &y + &CliffordElement::blade(m, 1 << (n - 1), z.r.clone());
        let top = &(&self.alpha.embed(m) * &zc) + &self.beta.embed(m);
        let bottom = &(&self.gamma.embed(m) * &zc) + &self.delta.embed(m);
        let w = &top * &bottom.group_inverse()?;
        let coords = w.vector_coords()?;
        Ok(UpperPoint::new(coords[..n as usize].to_vec(), coords[n as usize].clone()))
    }

    /// Ball-model entries `A = (α + δ′ + (β − γ′)iₙ)/2`, `C = (γ + β′ + (δ − α′)iₙ)/2` in `Cl_{n+1}`.
    pub fn psi(&self) -> (CliffordElement, CliffordElement) {
        let n = self.degree();
        let m = n + 1;
        let i_n = CliffordElement::generator(m, n);
        let half = ExactScalar::from_ratio(1, 2);
        let a = &(&self.alpha + &self.delta.conj_prime()).embed(m)
            + &(&(&self.beta - &self.gamma.conj_prime()).embed(m) * &i_n);
        let c = &(&self.gamma + &self.beta.conj_prime()).embed(m)
            + &(&(&self.delta - &self.alpha.conj_prime()).embed(m) * &i_n);
        (a.scale(&half), c.scale(&half))
    }

    /// Center `C⁻¹A′` (a vector of 𝕍ⁿ⁺¹) and squared radius `1/|C|²` of the isometric sphere in the ball model.
    pub fn isometric_sphere_ball(&self) -> Result<(Vec<ExactScalar>, ExactScalar), VahlenError> {
        if self.is_su() {
            return Err(VahlenError::InStabilizer);
        }
        let (a, c) = self.psi();
        let center = &c.group_inverse()? * &a.conj_prime();
        Ok((center.vector_coords()?, c.norm_sq().recip()))
    }

    /// `(|P|², R²) = ((2 + ‖M‖²)/(‖M‖² − 2), 4/(‖M‖² − 2))`.
    pub fn rho(&self) -> Result<(ExactScalar, ExactScalar), VahlenError> {
        rho_from_norm(&self.norm_sq)
    }

    /// The closed half-space `D_{M⁻¹}(iₙ)` bounded by the bisector of `iₙ` and `M⁻¹(iₙ)`.
    pub fn bisector_at_basepoint(&self) -> Result<HalfSpace, VahlenError> {
        if self.is_su() {
            return Err(VahlenError::InStabilizer);
        }
        let s = self.alpha.norm_sq() + self.gamma.norm_sq();
        let v = &(&self.beta.conj_star() * &self.alpha.conj_prime()) + &(&self.delta.conj_star() * &self.gamma.conj_prime());
        let v = v.vector_coords()?;
        let one = ExactScalar::one();
        if s == one {
            let offset = dot(&v, &v) * ExactScalar::from_ratio(1, 2);
            return Ok(HalfSpace::Plane { normal: v, offset });
        }
        let k = -(&s - &one).recip();
        let center: Vec<ExactScalar> = v.iter().map(|x| x * &k).collect();
        let radius_sq = (&one + &dot(&center, &center)) / &s;
        let keep = if s > one { Keep::Outside } else { Keep::Inside };
        Ok(HalfSpace::Sphere { center, radius_sq, keep })
    }
}

pub fn rho_from_norm(m: &ExactScalar) -> Result<(ExactScalar, ExactScalar), VahlenError> {
    let two = ExactScalar::from(2);
    let d = m - &two;
    if d.sign() <= 0 {
        return Err(VahlenError::InStabilizer);
    }
    Ok((&(&two + m) / &d, &ExactScalar::from(4) / &d))
}

/// Sign of `ρ₁ − ρ₂` where `ρ = 1 + R − |P|` is built from the closed forms at norms `m₁`, `m₂`.
pub fn rho_difference_sign(m1: &BigRational, m2: &BigRational) -> i32 {
    let two = BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    let one = BigRational::from_integer(1.into());
    let mut s = RadicalSum::new();
    let p1 = (&two + m1) / (m1 - &two);
    let r1 = &four / (m1 - &two);
    let p2 = (&two + m2) / (m2 - &two);
    let r2 = &four / (m2 - &two);
    s.add_term(one.clone(), &r1);
    s.add_term(-one.clone(), &p1);
    s.add_term(-one.clone(), &r2);
    s.add_term(one, &p2);
    s.sign()
}

/// Closed half-space of points hyperbolically at least as close to `p` as to `q`.
pub fn bisector_generic(p: &UpperPoint, q: &UpperPoint) -> Result<HalfSpace, VahlenError> {
    if p == q {
        return Err(VahlenError::SamePoint);
    }
    if p.r.sign() <= 0 || q.r.sign() <= 0 {
        return Err(VahlenError::NotInterior);
    }
    let n = p.dim();
    if p.r == q.r {
        let normal: Vec<ExactScalar> = (0..n).map(|i| &p.y[i] - &q.y[i]).collect();
        let offset = (dot(&q.y, &q.y) - dot(&p.y, &p.y)) * ExactScalar::from_ratio(1, 2);
        return Ok(HalfSpace::Plane { normal, offset });
    }
    let a = &q.r - &p.r;
    let center: Vec<ExactScalar> = (0..n).map(|i| &(&(&q.r * &p.y[i]) - &(&p.r * &q.y[i])) / &a).collect();
    let constant = &(&(&q.r * &p.norm_sq()) - &(&p.r * &q.norm_sq())) / &a;
    let radius_sq = dot(&center, &center) - constant;
    let outside = dot_dist(&p.y, &center) + p.r.square() > radius_sq;
    let keep = if outside { Keep::Outside } else { Keep::Inside };
    Ok(HalfSpace::Sphere { center, radius_sq, keep })
}

fn dot_dist(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
    crate::geometry::halfspace::dist_sq(a, b)
}

#[derive(Serialize, Deserialize)]
struct VahlenJson {
    alpha: CliffordElement,
    beta: CliffordElement,
    gamma: CliffordElement,
    delta: CliffordElement,
}

impl Serialize for VahlenMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        VahlenJson {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            gamma: self.gamma.clone(),
            delta: self.delta.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VahlenMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = VahlenJson::deserialize(d)?;
        VahlenMatrix::new(j.alpha, j.beta, j.gamma, j.delta).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(v: i64) -> CliffordElement {
        CliffordElement::scalar(4, ExactScalar::from(v))
    }

    fn i(h: u8) -> CliffordElement {
        CliffordElement::generator(4, h)
    }

    fn mat(a: CliffordElement, b: CliffordElement, c: CliffordElement, d: CliffordElement) -> VahlenMatrix {
        VahlenMatrix::new(a, b, c, d).unwrap()
    }

    fn pt(y: [(i64, i64); 4], r: (i64, i64)) -> UpperPoint {
        UpperPoint::new(y.iter().map(|&(a, b)| ExactScalar::from_ratio(a, b)).collect(), ExactScalar::from_ratio(r.0, r.1))
    }

    #[test]
    fn validity_examples() {
        assert!(is_vahlen(&sc(1), &sc(0), &sc(0), &sc(1)).is_ok());
        assert!(is_vahlen(&sc(1), &i(1), &sc(0), &sc(1)).is_ok());
        assert!(is_vahlen(&i(1), &sc(0), &sc(0), &i(1)).is_err());
    }

    #[test]
    fn inverse_examples() {
        let id = VahlenMatrix::identity(4);
        assert_eq!(id.inverse(), id);
        let t = VahlenMatrix::translation(&sc(1) + &i(2));
        assert_eq!(t.inverse(), VahlenMatrix::translation(-(&sc(1) + &i(2))));
        let j = VahlenMatrix::inversion(4);
        assert_eq!(j.inverse(), mat(sc(0), sc(1), sc(-1), sc(0)));
        assert!(j.mul(&j.inverse()).is_identity());
    }

    #[test]
    fn norms() {
        let id = VahlenMatrix::identity(4);
        assert_eq!(*id.norm_sq(), ExactScalar::from(2));
        assert!(id.is_su());
        let t = VahlenMatrix::translation(sc(1));
        assert_eq!(*t.norm_sq(), ExactScalar::from(3));
        assert!(!t.is_su());
        let j = VahlenMatrix::inversion(4);
        assert_eq!(*j.norm_sq(), ExactScalar::from(2));
        assert!(j.is_su());
    }

    #[test]
    fn action_examples() {
        let z = pt([(1, 2), (-1, 3), (0, 1), (2, 5)], (3, 7));
        assert_eq!(VahlenMatrix::identity(4).act(&z).unwrap(), z);
        let beta = &sc(1) + &i(3);
        let moved = VahlenMatrix::translation(beta).act(&z).unwrap();
        assert_eq!(moved, pt([(3, 2), (-1, 3), (0, 1), (7, 5)], (3, 7)));
        let m = mat(sc(1), sc(0), sc(-1), sc(1));
        let img = m.act(&UpperPoint::basepoint(4)).unwrap();
        assert_eq!(img, pt([(-1, 2), (0, 1), (0, 1), (0, 1)], (1, 2)));
        assert_eq!(m.act_via_products(&z).unwrap(), m.act(&z).unwrap());
    }

    #[test]
    fn psi_examples() {
        let (a, c) = VahlenMatrix::identity(4).psi();
        assert!(a.is_one() && c.is_zero());
        let t = VahlenMatrix::translation(sc(1));
        let (a, c) = t.psi();
        let expect_a = (&CliffordElement::scalar(5, 2.into()) + &CliffordElement::generator(5, 4)).scale(&ExactScalar::from_ratio(1, 2));
        assert_eq!(a, expect_a);
        assert_eq!(c, CliffordElement::scalar(5, ExactScalar::from_ratio(1, 2)));
        assert_eq!(a.norm_sq() - c.norm_sq(), ExactScalar::one());
        let (a, c) = VahlenMatrix::inversion(4).psi();
        assert_eq!(a.norm_sq() - c.norm_sq(), ExactScalar::one());
    }

    #[test]
    fn isometric_sphere_examples() {
        let (c, r2) = VahlenMatrix::translation(sc(1)).isometric_sphere_ball().unwrap();
        let expect: Vec<ExactScalar> = [2, 0, 0, 0, -1].iter().map(|&v| ExactScalar::from(v)).collect();
        assert_eq!(c, expect);
        assert_eq!(r2, ExactScalar::from(4));
        assert!(VahlenMatrix::identity(4).isometric_sphere_ball().is_err());
        let (c, r2) = mat(sc(1), sc(0), sc(1), sc(1)).isometric_sphere_ball().unwrap();
        assert_eq!(dot(&c, &c) - ExactScalar::one(), r2);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_from_norm(&3.into()).unwrap(), (5.into(), 4.into()));
        assert_eq!(rho_from_norm(&6.into()).unwrap(), (2.into(), 1.into()));
        assert!(rho_from_norm(&2.into()).is_err());
        let r = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(rho_difference_sign(&r(3), &r(4)), 1);
        assert_eq!(rho_difference_sign(&r(7), &r(5)), -1);
        assert_eq!(rho_difference_sign(&r(5), &r(5)), 0);
    }

    #[test]
    fn bisector_examples() {
        let t = VahlenMatrix::translation(sc(1));
        let h = t.bisector_at_basepoint().unwrap();
        let expect = HalfSpace::Plane { normal: vec![1.into(), 0.into(), 0.into(), 0.into()], offset: ExactScalar::from_ratio(1, 2) };
        assert!(h.same_as(&expect));
        let m = mat(sc(1), sc(0), sc(1), sc(1));
        let h = m.bisector_at_basepoint().unwrap();
        let expect = HalfSpace::Sphere { center: vec![(-1).into(), 0.into(), 0.into(), 0.into()], radius_sq: 1.into(), keep: Keep::Outside };
        assert_eq!(h, expect);
        // Premultiplying by the inversion does not move the wall.
        let a0 = mat(sc(0), sc(-1), sc(1), sc(2));
        let h1 = a0.bisector_at_basepoint().unwrap();
        let h2 = VahlenMatrix::inversion(4).mul(&a0).bisector_at_basepoint().unwrap();
        assert!(h1.same_as(&h2));
        assert!(VahlenMatrix::identity(4).bisector_at_basepoint().is_err());
    }

    #[test]
    fn generic_bisector_examples() {
        let p = UpperPoint::basepoint(4);
        let q = pt([(1, 1), (0, 1), (0, 1), (0, 1)], (1, 1));
        let h = bisector_generic(&p, &q).unwrap();
        let expect = HalfSpace::Plane { normal: vec![(-1).into(), 0.into(), 0.into(), 0.into()], offset: ExactScalar::from_ratio(1, 2) };
        assert!(h.same_as(&expect));
        let q = pt([(-1, 2), (0, 1), (0, 1), (0, 1)], (1, 2));
        let h = bisector_generic(&p, &q).unwrap();
        let expect = HalfSpace::Sphere { center: vec![(-1).into(), 0.into(), 0.into(), 0.into()], radius_sq: 1.into(), keep: Keep::Outside };
        assert_eq!(h, expect);
        assert_eq!(bisector_generic(&p, &p), Err(VahlenError::SamePoint));
    }
}
