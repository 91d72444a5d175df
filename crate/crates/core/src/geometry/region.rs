//! Boundary traces of finite-sided domains and the subdivision certifier.
//!
//! A [`BoundaryRegion`] is a polytope in ℝⁿ with some open balls removed
//! (traces of hemispheres whose outside is kept) and possibly intersected
//! with closed balls (hemispheres whose inside is kept). Emptiness is
//! decided for the region with its ball boundaries removed: a point only
//! counts if it lies strictly outside every excluded ball and strictly inside
//! every included ball. Tangency points of the closed region therefore do not
//! prevent an "empty" verdict.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::ExactScalar;
use crate::geometry::halfspace::{dist_sq, HalfSpace, Keep};
use crate::geometry::lp::{feasible_point, lp_solve_exact, lp_solve_f64, polytope_boundedness, Boundedness, LinearConstraint, LpOutcome};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("dimension mismatch")]
    Dimension,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<ExactScalar>,
    pub radius_sq: ExactScalar,
}

impl Ball {
    pub fn new(center: Vec<ExactScalar>, radius_sq: ExactScalar) -> Self {
        Ball { center, radius_sq }
    }

    /// `|x − c|² − R²`.
    pub fn power(&self, x: &[ExactScalar]) -> ExactScalar {
        dist_sq(x, &self.center) - &self.radius_sq
    }

    /// Axis-aligned box containing the closed ball.
    pub fn bounding_box(&self) -> AaBox {
        let r = rational_sqrt_upper(&self.radius_sq.rational_upper_bound());
        let r = ExactScalar::from_rational(r);
        AaBox {
            lo: self.center.iter().map(|c| c - &r).collect(),
            hi: self.center.iter().map(|c| c + &r).collect(),
        }
    }
}

/// A rational `≥ √x` for rational `x ≥ 0`.
fn rational_sqrt_upper(x: &BigRational) -> BigRational {
    if !x.is_positive() {
        return BigRational::from_integer(0.into());
    }
    let scale = BigInt::from(1) << 32;
    let v = (x * BigRational::from_integer(&scale * &scale)).ceil().to_integer();
    let r = v.sqrt() + 1;
    BigRational::new(r, scale)
}

/// Closed axis-aligned box `Π [loᵢ, hiᵢ]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AaBox {
    pub lo: Vec<ExactScalar>,
    pub hi: Vec<ExactScalar>,
}

impl fmt::Debug for AaBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lo.iter().zip(&self.hi).map(|(l, h)| format!("[{l}, {h}]")).collect();
        write!(f, "{}", parts.join("×"))
    }
}

impl Serialize for AaBox {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<[&ExactScalar; 2]> = self.lo.iter().zip(&self.hi).map(|(l, h)| [l, h]).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AaBox {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<[ExactScalar; 2]>::deserialize(d)?;
        let (lo, hi) = v.into_iter().map(|[l, h]| (l, h)).unzip();
        Ok(AaBox { lo, hi })
    }
}

impl AaBox {
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn center(&self) -> Vec<ExactScalar> {
        let half = ExactScalar::from_ratio(1, 2);
        self.lo.iter().zip(&self.hi).map(|(l, h)| &(l + h) * &half).collect()
    }

    /// Split the longest edge (lowest index on ties) at its midpoint.
    pub fn split(&self) -> (AaBox, AaBox) {
        let mut best = 0;
        let mut best_len = &self.hi[0] - &self.lo[0];
        for i in 1..self.dim() {
            let len = &self.hi[i] - &self.lo[i];
            if len > best_len {
                best = i;
                best_len = len;
            }
        }
        let mid = &(&self.lo[best] + &self.hi[best]) * &ExactScalar::from_ratio(1, 2);
        let mut a = self.clone();
        let mut b = self.clone();
        a.hi[best] = mid.clone();
        b.lo[best] = mid;
        (a, b)
    }

    pub fn intersect(&self, other: &AaBox) -> Option<AaBox> {
        let lo: Vec<ExactScalar> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(b).clone()).collect();
        let hi: Vec<ExactScalar> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(b).clone()).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            None
        } else {
            Some(AaBox { lo, hi })
        }
    }

    pub fn contains(&self, x: &[ExactScalar]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| l <= v && v <= h)
    }

    /// Squared distance from `c` to the farthest corner.
    pub fn max_dist_sq(&self, c: &[ExactScalar]) -> ExactScalar {
        (0..self.dim())
            .map(|i| {
                let a = (&self.lo[i] - &c[i]).square();
                let b = (&self.hi[i] - &c[i]).square();
                a.max(b)
            })
            .sum()
    }

    /// Squared distance from `c` to the box.
    pub fn min_dist_sq(&self, c: &[ExactScalar]) -> ExactScalar {
        (0..self.dim())
            .map(|i| {
                if c[i] < self.lo[i] {
                    (&self.lo[i] - &c[i]).square()
                } else if c[i] > self.hi[i] {
                    (&c[i] - &self.hi[i]).square()
                } else {
                    ExactScalar::zero()
                }
            })
            .sum()
    }

    /// Nearest point of the box to `c`.
    pub fn clamp(&self, c: &[ExactScalar]) -> Vec<ExactScalar> {
        (0..self.dim()).map(|i| c[i].clone().max(self.lo[i].clone()).min(self.hi[i].clone())).collect()
    }

    fn as_constraints(&self) -> Vec<LinearConstraint> {
        let n = self.dim();
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut e = vec![ExactScalar::zero(); n];
            e[i] = ExactScalar::one();
            out.push(LinearConstraint::new(e.clone(), self.hi[i].clone()));
            e[i] = ExactScalar::from(-1);
            out.push(LinearConstraint::new(e, -&self.lo[i]));
        }
        out
    }
}

/// `B̄ ∩ F̄` traced on the boundary ℝⁿ.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoundaryRegion {
    pub dim: usize,
    pub polytope: Vec<LinearConstraint>,
    /// Open balls removed from the region.
    pub excluded: Vec<Ball>,
    /// Closed balls the region is intersected with.
    pub included: Vec<Ball>,
}

impl BoundaryRegion {
    pub fn new(dim: usize) -> Self {
        BoundaryRegion { dim, polytope: vec![], excluded: vec![], included: vec![] }
    }

    /// Fold the boundary trace of a half-space into the region.
    pub fn add_halfspace(&mut self, h: &HalfSpace) {
        match h {
            HalfSpace::Plane { normal, offset } => {
                self.polytope.push(LinearConstraint::new(normal.iter().map(|x| -x).collect(), offset.clone()))
            }
            HalfSpace::Sphere { center, radius_sq, keep: Keep::Outside } => {
                self.add_excluded(Ball::new(center.clone(), radius_sq.clone()))
            }
            HalfSpace::Sphere { center, radius_sq, keep: Keep::Inside } => {
                self.included.push(Ball::new(center.clone(), radius_sq.clone()))
            }
        }
    }

    pub fn add_excluded(&mut self, b: Ball) {
        if !self.excluded.contains(&b) {
            self.excluded.push(b);
        }
    }

    pub fn from_halfspaces(dim: usize, hs: &[HalfSpace]) -> Self {
        let mut r = Self::new(dim);
        for h in hs {
            r.add_halfspace(h);
        }
        r
    }

    /// Point of the open core: in the polytope, strictly outside excluded and strictly inside included balls.
    pub fn strictly_contains(&self, x: &[ExactScalar]) -> bool {
        self.polytope.iter().all(|c| c.satisfied(x))
            && self.excluded.iter().all(|b| b.power(x).sign() > 0)
            && self.included.iter().all(|b| b.power(x).sign() < 0)
    }

    /// Tight bounding box of the polytope by linear programming.
    /// `Ok(None)` when the polytope is empty.
    pub fn bounding_box(&self) -> Result<Option<AaBox>, GeometryError> {
        let normals: Vec<Vec<ExactScalar>> = self.polytope.iter().map(|c| c.normal.clone()).collect();
        if feasible_point(self.dim, &self.polytope).is_none() {
            return Ok(None);
        }
        if let Boundedness::Unbounded(_) = polytope_boundedness(self.dim, &normals) {
            return Err(GeometryError::Unbounded);
        }
        let mut lo = Vec::with_capacity(self.dim);
        let mut hi = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            for sign in [1i64, -1] {
                let mut c = vec![ExactScalar::zero(); self.dim];
                c[j] = ExactScalar::from(sign);
                match lp_solve_exact(&c, &self.polytope) {
                    LpOutcome::Optimal { value, .. } => {
                        if sign == 1 {
                            hi.push(value)
                        } else {
                            lo.push(-value)
                        }
                    }
                    _ => return Err(GeometryError::Unbounded),
                }
            }
        }
        Ok(Some(AaBox { lo, hi }))
    }
}

/// Why a leaf box contains no point of the open core.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Discharge {
    /// The lifted linear relaxation on the box has no strictly feasible point.
    Lifted,
    /// The box lies in the closed excluded ball `k`.
    InsideBall(usize),
    /// The box misses the open included ball `k`.
    OutsideBall(usize),
    /// The box misses the open query ball (used by shrink tests).
    OutsideQuery,
    /// The box lies within the covered neighbourhood of the certificate's cusp `k`.
    Cusp(usize),
}

impl fmt::Display for Discharge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Discharge::Lifted => write!(f, "lifted"),
            Discharge::InsideBall(k) => write!(f, "inside_ball {k}"),
            Discharge::OutsideBall(k) => write!(f, "outside_ball {k}"),
            Discharge::OutsideQuery => write!(f, "outside_query"),
            Discharge::Cusp(k) => write!(f, "cusp {k}"),
        }
    }
}

impl std::str::FromStr for Discharge {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let idx = |p: Option<&&str>| p.and_then(|v| v.parse::<usize>().ok()).ok_or_else(|| format!("bad reason {s:?}"));
        match parts.first().copied() {
            Some("lifted") if parts.len() == 1 => Ok(Discharge::Lifted),
            Some("inside_ball") if parts.len() == 2 => Ok(Discharge::InsideBall(idx(parts.get(1))?)),
            Some("outside_ball") if parts.len() == 2 => Ok(Discharge::OutsideBall(idx(parts.get(1))?)),
            Some("outside_query") if parts.len() == 1 => Ok(Discharge::OutsideQuery),
            Some("cusp") if parts.len() == 2 => Ok(Discharge::Cusp(idx(parts.get(1))?)),
            _ => Err(format!("bad reason {s:?}")),
        }
    }
}

impl Serialize for Discharge {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Discharge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertLeaf {
    #[serde(rename = "box")]
    pub bbox: AaBox,
    pub reason: Discharge,
}

/// Replayable covering certificate. `root = None` records an empty polytope.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EmptinessCertificate {
    pub root: Option<AaBox>,
    pub leaves: Vec<CertLeaf>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cusps: Vec<CuspCover>,
}

/// A point `c` on some ball boundaries whose punctured neighbourhood is covered.
///
/// Inversion at `c` maps every sphere through `c` to a hyperplane, so the
/// uncovered points near `c` invert to a polyhedron. When that polyhedron is
/// bounded by `ρ`, no region point lies within `1/ρ` of `c`; `reach_sq = 1/ρ²`
/// (`None` when the strict system has no solution and nothing is left at all).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CuspCover {
    pub point: Vec<ExactScalar>,
    pub reach_sq: Option<ExactScalar>,
}

impl EmptinessCertificate {
    pub fn max_depth(&self) -> u32 {
        self.leaves.len().max(1).ilog2() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmptinessResult {
    Empty(EmptinessCertificate),
    Witness(Vec<ExactScalar>),
    Inconclusive { depth: u32, boxes: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShrinkResult {
    /// A region point strictly inside the new ball.
    Shrinks(Vec<ExactScalar>),
    /// The region misses the open ball.
    Unchanged(EmptinessCertificate),
    Inconclusive { depth: u32, boxes: usize },
}

/// Resource limits for subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionLimits {
    pub depth_cap: u32,
    pub box_budget: usize,
}

impl Default for SubdivisionLimits {
    fn default() -> Self {
        SubdivisionLimits { depth_cap: 24, box_budget: 200_000 }
    }
}

/// Region plus an optional open query ball the witness must lie inside.
struct Query<'a> {
    region: &'a BoundaryRegion,
    target: Option<&'a Ball>,
    cusps: RefCell<Vec<CuspCover>>,
    tried: RefCell<HashSet<Vec<ExactScalar>>>,
}

/// Subdivision depth from which boxes are tested for a nearby cusp.
const CUSP_DEPTH: u32 = 12;

/// Solve `rows · x = rhs`; the affine solution set as a particular point and a null-space basis.
fn solve_affine(dim: usize, rows: &[(Vec<ExactScalar>, ExactScalar)]) -> Option<(Vec<ExactScalar>, Vec<Vec<ExactScalar>>)> {
    let mut m: Vec<(Vec<ExactScalar>, ExactScalar)> = rows.to_vec();
    let mut pivots = vec![];
    let mut r = 0;
    for col in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i].0[col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r].0[col].recip();
        let (row, rhs) = m[r].clone();
        let row: Vec<ExactScalar> = row.iter().map(|x| x * &inv).collect();
        let rhs = &rhs * &inv;
        for (i, (other, orhs)) in m.iter_mut().enumerate() {
            if i == r || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (o, x) in other.iter_mut().zip(&row) {
                *o = &*o - &(&f * x);
            }
            *orhs = &*orhs - &(&f * &rhs);
        }
        m[r] = (row, rhs);
        pivots.push(col);
        r += 1;
    }
    if m[r..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return None;
    }
    let mut x = vec![ExactScalar::zero(); dim];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m[i].1.clone();
    }
    let mut null = vec![];
    for free in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ExactScalar::zero(); dim];
        v[free] = ExactScalar::one();
        for (i, &col) in pivots.iter().enumerate() {
            v[col] = -&m[i].0[free];
        }
        null.push(v);
    }
    Some((x, null))
}

fn dot(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

enum BoxVerdict {
    Discharged(Discharge),
    Witness(Vec<ExactScalar>),
    Open,
}

impl<'a> Query<'a> {
    fn new(region: &'a BoundaryRegion, target: Option<&'a Ball>) -> Self {
        Query { region, target, cusps: RefCell::new(vec![]), tried: RefCell::new(HashSet::new()) }
    }

    /// Every sphere of the query: excluded balls, included balls, then the target.
    fn spheres(&self) -> impl Iterator<Item = &Ball> {
        self.region.excluded.iter().chain(&self.region.included).chain(self.target)
    }

    /// Exact cover radius at `c`, or `None` when the inverted polyhedron is unbounded.
    fn cusp_reach(&self, c: &[ExactScalar]) -> Option<Option<ExactScalar>> {
        let dim = self.region.dim;
        let half = ExactScalar::from_ratio(1, 2);
        let mut cons = vec![];
        let mut on_sphere = false;
        for (k, ball) in self.spheres().enumerate() {
            if !ball.power(c).is_zero() {
                continue;
            }
            on_sphere = true;
            let d: Vec<ExactScalar> = ball.center.iter().zip(c).map(|(a, b)| a - b).collect();
            if k < self.region.excluded.len() {
                // v in the closed ball  ⇔  ⟨w, centre − c⟩ ≥ 1/2; the uncovered side is the complement.
                cons.push(LinearConstraint::new(d, half.clone()));
            } else {
                // Region points lie inside the open ball: ⟨w, centre − c⟩ > 1/2.
                cons.push(LinearConstraint::new(d.iter().map(|x| -x).collect(), -&half));
            }
        }
        if !on_sphere {
            return None;
        }
        let mut cones = 0;
        for p in &self.region.polytope {
            if p.slack(c).is_zero() {
                cons.push(LinearConstraint::new(p.normal.clone(), ExactScalar::zero()));
                cones += 1;
            }
        }
        // Sphere constraints are strict, the polytope cones are not: maximise a common slack s ≤ 1.
        let n_strict = cons.len() - cones;
        let mut lifted: Vec<LinearConstraint> = cons
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut n = c.normal.clone();
                n.push(if i < n_strict { ExactScalar::one() } else { ExactScalar::zero() });
                LinearConstraint::new(n, c.bound.clone())
            })
            .collect();
        let mut unit = vec![ExactScalar::zero(); dim + 1];
        unit[dim] = ExactScalar::one();
        lifted.push(LinearConstraint::new(unit.clone(), ExactScalar::one()));
        match lp_solve_exact(&unit, &lifted) {
            LpOutcome::Optimal { value, .. } if value.sign() > 0 => {}
            _ => return Some(None),
        }
        let mut rho_sq = ExactScalar::zero();
        for j in 0..dim {
            let mut m = ExactScalar::zero();
            for sign in [1i64, -1] {
                let mut obj = vec![ExactScalar::zero(); dim];
                obj[j] = ExactScalar::from(sign);
                match lp_solve_exact(&obj, &cons) {
                    LpOutcome::Optimal { value, .. } => m = m.max(value.abs()),
                    LpOutcome::Unbounded { .. } => return None,
                    LpOutcome::Infeasible { .. } => return Some(None),
                }
            }
            rho_sq += &m.square();
        }
        if rho_sq.is_zero() {
            return Some(None);
        }
        Some(Some(rho_sq.recip()))
    }

    /// A point common to the spheres crossing the box, if they have exactly one.
    fn locate_cusp(&self, b: &AaBox) -> Option<Vec<ExactScalar>> {
        let dim = self.region.dim;
        let crossing: Vec<&Ball> =
            self.spheres().filter(|s| b.min_dist_sq(&s.center) <= s.radius_sq && s.radius_sq <= b.max_dist_sq(&s.center)).collect();
        let first = *crossing.first()?;
        let norm0 = dot(&first.center, &first.center) - &first.radius_sq;
        let mut rows: Vec<(Vec<ExactScalar>, ExactScalar)> = crossing[1..]
            .iter()
            .map(|s| {
                let a = s.center.iter().zip(&first.center).map(|(x, y)| ExactScalar::from(2) * (x - y)).collect();
                (a, dot(&s.center, &s.center) - &s.radius_sq - &norm0)
            })
            .collect();
        let (mut x, mut null) = solve_affine(dim, &rows)?;
        for p in &self.region.polytope {
            if null.is_empty() {
                break;
            }
            let lo: ExactScalar = p.normal.iter().enumerate().map(|(j, v)| if v.sign() > 0 { v * &b.lo[j] } else { v * &b.hi[j] }).sum();
            let hi: ExactScalar = p.normal.iter().enumerate().map(|(j, v)| if v.sign() > 0 { v * &b.hi[j] } else { v * &b.lo[j] }).sum();
            if lo > p.bound || hi < p.bound {
                continue;
            }
            rows.push((p.normal.clone(), p.bound.clone()));
            match solve_affine(dim, &rows) {
                Some((x2, n2)) if n2.len() < null.len() => (x, null) = (x2, n2),
                _ => {
                    rows.pop();
                }
            }
        }
        if !null.is_empty() {
            // Closest point of the affine set to the first centre; a single common point only if it is tangent.
            let k = null.len();
            let gram: Vec<(Vec<ExactScalar>, ExactScalar)> = (0..k)
                .map(|i| {
                    let diff: Vec<ExactScalar> = first.center.iter().zip(&x).map(|(a, b)| a - b).collect();
                    ((0..k).map(|j| dot(&null[i], &null[j])).collect(), dot(&null[i], &diff))
                })
                .collect();
            let (t, _) = solve_affine(k, &gram)?;
            for (i, ti) in t.iter().enumerate() {
                for (xj, nj) in x.iter_mut().zip(&null[i]) {
                    *xj = &*xj + &(ti * nj);
                }
            }
        }
        first.power(&x).is_zero().then_some(x)
    }

    /// Register a cover at a cusp near `b` when one exists; returns whether anything was added.
    fn try_cusp(&self, b: &AaBox) -> bool {
        let Some(c) = self.locate_cusp(b) else {
            return false;
        };
        if !self.tried.borrow_mut().insert(c.clone()) {
            return false;
        }
        match self.cusp_reach(&c) {
            Some(reach_sq) => {
                self.cusps.borrow_mut().push(CuspCover { point: c, reach_sq });
                true
            }
            None => false,
        }
    }

    fn strictly_contains(&self, x: &[ExactScalar]) -> bool {
        self.region.strictly_contains(x) && self.target.is_none_or(|b| b.power(x).sign() < 0)
    }

    /// Try to discharge a box; may also produce a witness.
    fn examine(&self, b: &AaBox) -> BoxVerdict {
        if let Some(r) = self.discharge(b) {
            return BoxVerdict::Discharged(r);
        }
        let Some(point) = self.lifted(b) else {
            return BoxVerdict::Discharged(Discharge::Lifted);
        };
        let mut candidates = vec![point, b.center()];
        if let Some(t) = self.target {
            candidates.push(b.clamp(&t.center));
        }
        match candidates.into_iter().find(|c| self.strictly_contains(c)) {
            Some(w) => BoxVerdict::Witness(w),
            None => BoxVerdict::Open,
        }
    }

    fn straddling(&self, b: &AaBox) -> Result<Vec<LinearConstraint>, ()> {
        let mut out = vec![];
        for c in &self.region.polytope {
            let mut min = ExactScalar::zero();
            let mut max = ExactScalar::zero();
            for (j, v) in c.normal.iter().enumerate() {
                match v.sign() {
                    1 => {
                        min += &(v * &b.lo[j]);
                        max += &(v * &b.hi[j]);
                    }
                    -1 => {
                        min += &(v * &b.hi[j]);
                        max += &(v * &b.lo[j]);
                    }
                    _ => {}
                }
            }
            if min > c.bound {
                return Err(());
            }
            if max > c.bound {
                out.push(c.clone());
            }
        }
        Ok(out)
    }

    /// Linear relaxation on the box with `s` standing for `|x|²`.
    ///
    /// Every power `p(x) = |x|² − 2⟨c, x⟩ + |c|² − R²` is linear in `(x, s)`, and on the box
    /// `s` lies between the tangent plane at the centre and the secant of `|x|²`. Maximising a
    /// common margin `σ` over the strict region conditions gives `σ ≤ 0` when the box holds no
    /// region point; otherwise the optimal `x` is returned as a witness candidate.
    fn lifted(&self, b: &AaBox) -> Option<Vec<ExactScalar>> {
        let dim = b.dim();
        let faces = self.straddling(b).ok()?;
        let two = ExactScalar::from(2);
        let row = |x: Vec<ExactScalar>, s: i64, sigma: i64| {
            let mut r = x;
            r.push(ExactScalar::from(s));
            r.push(ExactScalar::from(sigma));
            r
        };
        let konst = |e: &Ball| dot(&e.center, &e.center) - &e.radius_sq;
        let mut cons = vec![];
        // Excluded: p ≥ σ.
        for e in self.region.excluded.iter().filter(|e| b.min_dist_sq(&e.center) < e.radius_sq) {
            cons.push(LinearConstraint::new(row(e.center.iter().map(|c| &two * c).collect(), -1, 1), konst(e)));
        }
        // Included and query balls: p ≤ −σ.
        for e in self.region.included.iter().chain(self.target) {
            cons.push(LinearConstraint::new(row(e.center.iter().map(|c| -(&two * c)).collect(), 1, 1), -konst(e)));
        }
        let secant: Vec<ExactScalar> = (0..dim).map(|j| -(&b.lo[j] + &b.hi[j])).collect();
        let lo_hi: ExactScalar = (0..dim).map(|j| &b.lo[j] * &b.hi[j]).sum();
        cons.push(LinearConstraint::new(row(secant, 1, 0), -lo_hi));
        let m = b.center();
        cons.push(LinearConstraint::new(row(m.iter().map(|c| &two * c).collect(), -1, 0), dot(&m, &m)));
        for f in faces.iter().chain(&b.as_constraints()) {
            cons.push(LinearConstraint::new(row(f.normal.clone(), 0, 0), f.bound.clone()));
        }
        cons.push(LinearConstraint::new(row(vec![ExactScalar::zero(); dim], 0, 1), ExactScalar::one()));
        let objective = row(vec![ExactScalar::zero(); dim], 0, 1);
        let exact = |cs: &[LinearConstraint]| match lp_solve_exact(&objective, cs) {
            LpOutcome::Optimal { value, mut point, .. } if value.sign() > 0 => {
                point.truncate(dim);
                Some(point)
            }
            LpOutcome::Unbounded { mut point, .. } => {
                point.truncate(dim);
                Some(point)
            }
            _ => None,
        };
        // A floating solve picks the constraints that matter. Dropping constraints can only
        // raise the optimum, so a nonpositive exact optimum on the subset is conclusive.
        let as_f64 = |v: &[ExactScalar]| v.iter().map(ExactScalar::to_f64).collect::<Vec<f64>>();
        let float_cons: Vec<(Vec<f64>, f64)> = cons.iter().map(|c| (as_f64(&c.normal), c.bound.to_f64())).collect();
        match lp_solve_f64(&as_f64(&objective), &float_cons) {
            Some((value, point, _)) if value > 1e-9 => {
                let x = point[..dim].iter().filter_map(|&v| BigRational::from_float(v)).map(ExactScalar::from_rational).collect();
                Some(x)
            }
            Some((_, _, dual)) => {
                let last = cons.len() - 1;
                let support: Vec<LinearConstraint> =
                    cons.iter().enumerate().filter(|&(i, _)| i == last || dual[i] > 1e-12).map(|(_, c)| c.clone()).collect();
                match exact(&support) {
                    None => None,
                    Some(_) => exact(&cons),
                }
            }
            None => exact(&cons),
        }
    }

    /// Cheap exact discharge tests; the lifted relaxation is tried separately.
    fn discharge(&self, b: &AaBox) -> Option<Discharge> {
        for (k, ball) in self.region.excluded.iter().enumerate() {
            if b.max_dist_sq(&ball.center) <= ball.radius_sq {
                return Some(Discharge::InsideBall(k));
            }
        }
        for (k, ball) in self.region.included.iter().enumerate() {
            if b.min_dist_sq(&ball.center) >= ball.radius_sq {
                return Some(Discharge::OutsideBall(k));
            }
        }
        if let Some(t) = self.target {
            if b.min_dist_sq(&t.center) >= t.radius_sq {
                return Some(Discharge::OutsideQuery);
            }
        }
        for (k, cover) in self.cusps.borrow().iter().enumerate() {
            if cover.reach_sq.as_ref().is_none_or(|r| b.max_dist_sq(&cover.point) < *r) {
                return Some(Discharge::Cusp(k));
            }
        }
        None
    }

    fn check_reason(&self, b: &AaBox, reason: &Discharge) -> bool {
        match reason {
            Discharge::Lifted => self.lifted(b).is_none(),
            Discharge::InsideBall(k) => {
                self.region.excluded.get(*k).is_some_and(|ball| b.max_dist_sq(&ball.center) <= ball.radius_sq)
            }
            Discharge::OutsideBall(k) => {
                self.region.included.get(*k).is_some_and(|ball| b.min_dist_sq(&ball.center) >= ball.radius_sq)
            }
            Discharge::OutsideQuery => self.target.is_some_and(|t| b.min_dist_sq(&t.center) >= t.radius_sq),
            Discharge::Cusp(k) => self.cusps.borrow().get(*k).is_some_and(|cover| {
                cover.reach_sq.as_ref().is_none_or(|r| b.max_dist_sq(&cover.point) < *r)
            }),
        }
    }

    /// Heuristic priority: boxes whose centers are far outside every excluded ball first.
    fn priority(&self, b: &AaBox) -> f64 {
        let c = b.center();
        let cf: Vec<f64> = c.iter().map(|x| x.to_f64()).collect();
        let mut best = f64::INFINITY;
        for ball in &self.region.excluded {
            let d: f64 = cf.iter().zip(&ball.center).map(|(a, b)| (a - b.to_f64()).powi(2)).sum::<f64>() - ball.radius_sq.to_f64();
            best = best.min(d);
        }
        if let Some(t) = self.target {
            let d: f64 = cf.iter().zip(&t.center).map(|(a, b)| (a - b.to_f64()).powi(2)).sum::<f64>() - t.radius_sq.to_f64();
            best = best.min(-d);
        }
        if best.is_finite() {
            best
        } else {
            0.0
        }
    }

    fn run(&self, root: AaBox, limits: SubdivisionLimits) -> Result<EmptinessCertificate, Option<Vec<ExactScalar>>> {
        struct Item {
            prio: f64,
            seq: u64,
            depth: u32,
            bbox: AaBox,
        }
        impl PartialEq for Item {
            fn eq(&self, o: &Self) -> bool {
                self.cmp(o) == Ordering::Equal
            }
        }
        impl Eq for Item {}
        impl PartialOrd for Item {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }
        impl Ord for Item {
            fn cmp(&self, o: &Self) -> Ordering {
                self.prio.total_cmp(&o.prio).then_with(|| o.seq.cmp(&self.seq))
            }
        }
        let mut heap = BinaryHeap::new();
        let mut seq = 0u64;
        heap.push(Item { prio: self.priority(&root), seq, depth: 0, bbox: root.clone() });
        let mut leaves = vec![];
        let mut unresolved = false;
        let mut examined = 0usize;
        while let Some(Item { depth, bbox, .. }) = heap.pop() {
            examined += 1;
            if examined > limits.box_budget {
                return Err(None);
            }
            let mut verdict = self.examine(&bbox);
            if matches!(verdict, BoxVerdict::Open) && depth >= CUSP_DEPTH && self.try_cusp(&bbox) {
                verdict = self.examine(&bbox);
            }
            match verdict {
                BoxVerdict::Discharged(reason) => leaves.push(CertLeaf { bbox, reason }),
                BoxVerdict::Witness(w) => return Err(Some(w)),
                BoxVerdict::Open => {
                    if depth >= limits.depth_cap {
                        unresolved = true;
                        continue;
                    }
                    let (a, b) = bbox.split();
                    for child in [a, b] {
                        seq += 1;
                        heap.push(Item { prio: self.priority(&child), seq, depth: depth + 1, bbox: child });
                    }
                }
            }
        }
        if unresolved {
            return Err(None);
        }
        leaves.sort_by_key(|l| format!("{:?}", l.bbox));
        Ok(EmptinessCertificate { root: Some(root), leaves, cusps: self.cusps.borrow().clone() })
    }

    fn verify(&self, cert: &EmptinessCertificate) -> bool {
        let Some(root) = &cert.root else {
            return feasible_point(self.region.dim, &self.region.polytope).is_none();
        };
        let leaves: HashSet<&AaBox> = cert.leaves.iter().map(|l| &l.bbox).collect();
        if leaves.len() != cert.leaves.len() {
            return false;
        }
        for cover in &cert.cusps {
            let ok = match (self.cusp_reach(&cover.point), &cover.reach_sq) {
                (Some(None), _) => true,
                (Some(Some(r)), Some(claimed)) => claimed <= &r,
                _ => false,
            };
            if !ok {
                return false;
            }
        }
        *self.cusps.borrow_mut() = cert.cusps.clone();
        for l in &cert.leaves {
            if !self.check_reason(&l.bbox, &l.reason) {
                return false;
            }
        }
        // Replay the deterministic splitting and confirm the leaves tile the root.
        let limit = 64u32;
        let mut stack = vec![(root.clone(), 0u32)];
        let mut used = 0usize;
        while let Some((b, depth)) = stack.pop() {
            if leaves.contains(&b) {
                used += 1;
                continue;
            }
            if depth >= limit {
                return false;
            }
            let (x, y) = b.split();
            stack.push((x, depth + 1));
            stack.push((y, depth + 1));
        }
        used == cert.leaves.len()
    }
}

/// Decide whether the open core of `region` is empty.
pub fn region_is_empty(region: &BoundaryRegion, limits: SubdivisionLimits) -> Result<EmptinessResult, GeometryError> {
    let Some(root) = region.bounding_box()? else {
        return Ok(EmptinessResult::Empty(EmptinessCertificate { root: None, leaves: vec![], cusps: vec![] }));
    };
    let q = Query::new(region, None);
    Ok(match q.run(root, limits) {
        Ok(cert) => EmptinessResult::Empty(cert),
        Err(Some(w)) => {
            assert!(region.strictly_contains(&w), "witness failed re-check");
            EmptinessResult::Witness(w)
        }
        Err(None) => EmptinessResult::Inconclusive { depth: limits.depth_cap, boxes: limits.box_budget },
    })
}

/// Does the region (open core) meet the open ball?
pub fn region_shrinks(region: &BoundaryRegion, ball: &Ball, limits: SubdivisionLimits) -> Result<ShrinkResult, GeometryError> {
    let bbox = region.bounding_box()?;
    region_shrinks_within(region, bbox.as_ref(), ball, limits)
}

/// [`region_shrinks`] with the polytope's bounding box supplied by the caller
/// (it only changes when the polytope does).
pub fn region_shrinks_within(
    region: &BoundaryRegion,
    bbox: Option<&AaBox>,
    ball: &Ball,
    limits: SubdivisionLimits,
) -> Result<ShrinkResult, GeometryError> {
    if region.dim != ball.center.len() {
        return Err(GeometryError::Dimension);
    }
    let q = Query::new(region, Some(ball));
    if q.strictly_contains(&ball.center) {
        return Ok(ShrinkResult::Shrinks(ball.center.clone()));
    }
    let Some(bb) = bbox.cloned() else {
        return Ok(ShrinkResult::Unchanged(EmptinessCertificate { root: None, leaves: vec![], cusps: vec![] }));
    };
    let root = match bb.intersect(&ball.bounding_box()) {
        Some(r) => r,
        None => bb,
    };
    Ok(match q.run(root, limits) {
        Ok(cert) => ShrinkResult::Unchanged(cert),
        Err(Some(w)) => ShrinkResult::Shrinks(w),
        Err(None) => ShrinkResult::Inconclusive { depth: limits.depth_cap, boxes: limits.box_budget },
    })
}

/// Replay an emptiness certificate against `region`.
pub fn verify_emptiness(region: &BoundaryRegion, cert: &EmptinessCertificate) -> bool {
    Query::new(region, None).verify(cert)
}

/// Replay an "unchanged" certificate for a shrink query.
pub fn verify_unchanged(region: &BoundaryRegion, ball: &Ball, cert: &EmptinessCertificate) -> bool {
    Query::new(region, Some(ball)).verify(cert)
}

/// Does the closed ball meet the box at all (cheap pre-filter)?
pub fn ball_meets_box(ball: &Ball, b: &AaBox) -> bool {
    b.min_dist_sq(&ball.center) < ball.radius_sq
}
