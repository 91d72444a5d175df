//! The result file: writing a run, replaying its certificates, and slicing its walls.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::chi_bridge::{chi, GroupSpec};
use crate::domain::{generate_group, DomainConfig, GeneratorSet, Status, BOUNDARY_DIM};
use crate::exactnum::{rational_to_string, ExactScalar};
use crate::geometry::halfspace::{wall_is_bisector, HalfSpace, Keep, UpperPoint};
use crate::geometry::lp::{BoundednessCertificate, LinearConstraint};
use crate::geometry::region::{verify_emptiness, BoundaryRegion, EmptinessCertificate};
use crate::quat::QuatMatrix;
use crate::vahlen::{bisector_generic, VahlenMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Stabilizer,
    Hyperplane,
    Sphere,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub origin: Origin,
    pub norm: ExactScalar,
    pub clifford: VahlenMatrix,
    pub quat: QuatMatrix,
    /// Coordinates of the entries in the order `(x,y/ℤ)` when the spec is a general order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_coords: Option<Vec<[String; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspace: Option<HalfSpace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundednessRecord {
    /// The certificate refers to the first `walls` hyperplane generators.
    pub walls: usize,
    pub certificate: BoundednessCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub boundedness: BoundednessRecord,
    pub emptiness: Option<EmptinessCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub spec: GroupSpec,
    #[serde(rename = "N")]
    pub stop_norm: ExactScalar,
    pub config: DomainConfig,
    pub base_point: UpperPoint,
    pub stabilizer_order: usize,
    pub stabilizer: Vec<GeneratorRecord>,
    pub stabilizer_walls: Vec<HalfSpace>,
    pub generators: Vec<GeneratorRecord>,
    pub certificates: Certificates,
    pub status: Status,
    pub last_norm: ExactScalar,
    #[serde(default)]
    pub notes: Vec<String>,
}

fn record(spec: &GroupSpec, origin: Origin, m: &VahlenMatrix, wall: Option<&HalfSpace>) -> GeneratorRecord {
    let quat = chi(m).expect("degree 4");
    let order_coords = match spec {
        GroupSpec::QuatOrder { .. } => {
            let alg = spec.algebra();
            Some(
                quat.entries()
                    .iter()
                    .map(|q| alg.lambda_inv(q).expect("order element").map(|c| rational_to_string(&c)))
                    .collect(),
            )
        }
        _ => None,
    };
    GeneratorRecord { origin, norm: m.norm_sq().clone(), clifford: m.clone(), quat, order_coords, halfspace: wall.cloned() }
}

impl RunResult {
    pub fn from_generator_set(set: &GeneratorSet, config: DomainConfig) -> Self {
        let spec = set.spec;
        let stabilizer = set.stabilizer.generators.iter().map(|m| record(&spec, Origin::Stabilizer, m, None)).collect();
        let mut generators: Vec<GeneratorRecord> =
            set.hyperplane_generators.iter().map(|g| record(&spec, Origin::Hyperplane, &g.matrix, Some(&g.wall))).collect();
        generators.extend(set.sphere_generators.iter().map(|g| record(&spec, Origin::Sphere, &g.matrix, Some(&g.wall))));
        RunResult {
            spec,
            stop_norm: ExactScalar::from_rational(set.stop_norm.clone()),
            config,
            base_point: set.stabilizer.base_point.clone(),
            stabilizer_order: set.stabilizer.elements.len(),
            stabilizer,
            stabilizer_walls: set.stabilizer.walls.clone(),
            generators,
            certificates: Certificates {
                boundedness: BoundednessRecord { walls: set.hyperplane_seed, certificate: set.boundedness.clone() },
                emptiness: set.emptiness.clone(),
            },
            status: set.status,
            last_norm: ExactScalar::from_rational(set.last_norm.clone()),
            notes: set.notes.clone(),
        }
    }

    pub fn halfspaces(&self) -> Vec<HalfSpace> {
        let mut out = self.stabilizer_walls.clone();
        out.extend(self.generators.iter().filter_map(|g| g.halfspace.clone()));
        out
    }

    pub fn region(&self) -> BoundaryRegion {
        BoundaryRegion::from_halfspaces(BOUNDARY_DIM, &self.halfspaces())
    }

    /// Quaternion-side generator list (stabilizer first).
    pub fn quaternion_generators(&self) -> Vec<QuatMatrix> {
        self.stabilizer.iter().chain(&self.generators).map(|g| g.quat.clone()).collect()
    }
}

/// First failing item found by [`verify_result`].
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
#[error("{item}: {reason}")]
pub struct VerifyError {
    pub item: String,
    pub reason: String,
}

fn fail<T>(item: impl Into<String>, reason: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError { item: item.into(), reason: reason.into() })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub generators_checked: usize,
    pub walls_checked: usize,
    pub emptiness_leaves: usize,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} generators, {} walls, {} emptiness leaves verified",
            self.generators_checked, self.walls_checked, self.emptiness_leaves
        )
    }
}

fn check_generator(spec: &GroupSpec, idx: &str, g: &GeneratorRecord) -> Result<(), VerifyError> {
    let m = &g.clifford;
    if !spec.contains(m) {
        return fail(idx, "matrix is not in the group");
    }
    match chi(m) {
        Ok(q) if q == g.quat => {}
        _ => return fail(idx, "quaternion image does not match χ of the Clifford matrix"),
    }
    if !spec.algebra().is_unit_matrix(&g.quat) {
        return fail(idx, "quaternion image is not a unit matrix of the order");
    }
    if m.norm_sq() != &g.norm {
        return fail(idx, "recorded norm is wrong");
    }
    if let Some(c) = &g.order_coords {
        let alg = spec.algebra();
        let want: Vec<[String; 4]> =
            g.quat.entries().iter().map(|q| alg.lambda_inv(q).map(|c| c.map(|x| rational_to_string(&x)))).collect::<Result<_, _>>().map_err(|e| VerifyError { item: idx.into(), reason: e.to_string() })?;
        if *c != want {
            return fail(idx, "order coordinates do not match");
        }
    }
    Ok(())
}

fn check_wall(idx: &str, m: &VahlenMatrix, wall: &HalfSpace) -> Result<(), VerifyError> {
    let expected = m.bisector_at_basepoint().map_err(|e| VerifyError { item: idx.into(), reason: e.to_string() })?;
    if !expected.same_as(wall) && expected.normalized() != *wall {
        return fail(idx, "wall differs from the bisector of the generator");
    }
    let p = UpperPoint::basepoint(BOUNDARY_DIM);
    let q = m.inverse().act(&p).map_err(|e| VerifyError { item: idx.into(), reason: e.to_string() })?;
    if !wall_is_bisector(wall, &p, &q) {
        return fail(idx, "wall fails the equidistance identity");
    }
    Ok(())
}

/// Replay every certificate and re-validate every generator.
pub fn verify_result(r: &RunResult) -> Result<VerifyReport, VerifyError> {
    let spec = r.spec.normalized().map_err(|e| VerifyError { item: "spec".into(), reason: e.to_string() })?;
    if spec != r.spec {
        return fail("spec", "spec is not in normalized form");
    }
    if r.status == Status::Complete && r.generators.is_empty() {
        return fail("generators", "status complete with an empty generator list");
    }
    let mut report = VerifyReport::default();
    for (i, g) in r.stabilizer.iter().enumerate() {
        let idx = format!("stabilizer[{i}]");
        check_generator(&spec, &idx, g)?;
        if g.origin != Origin::Stabilizer || !g.clifford.is_su() {
            return fail(idx, "stabilizer generator does not fix the base point");
        }
        report.generators_checked += 1;
    }
    // Stabilizer walls: Dirichlet walls of the generated finite group about the recorded base point.
    let gens: Vec<VahlenMatrix> = r.stabilizer.iter().map(|g| g.clifford.clone()).collect();
    let group = generate_group(&gens, 4096).ok_or_else(|| VerifyError { item: "stabilizer".into(), reason: "group too large".into() })?;
    if group.len() != r.stabilizer_order {
        return fail("stabilizer", format!("generators give a group of order {}, recorded {}", group.len(), r.stabilizer_order));
    }
    let p0 = &r.base_point;
    let mut expected_walls: Vec<HalfSpace> = vec![];
    for g in group.iter().filter(|g| !g.is_identity()) {
        let q = g.act(p0).map_err(|e| VerifyError { item: "stabilizer".into(), reason: e.to_string() })?;
        if q == *p0 {
            return fail("base_point", "fixed by a nontrivial stabilizer element");
        }
        let w = bisector_generic(p0, &q).map_err(|e| VerifyError { item: "stabilizer".into(), reason: e.to_string() })?;
        if !expected_walls.iter().any(|x| x.same_as(&w)) {
            expected_walls.push(w);
        }
    }
    let same_set = expected_walls.len() == r.stabilizer_walls.len()
        && expected_walls.iter().all(|w| r.stabilizer_walls.iter().any(|x| x.same_as(w)));
    if !same_set {
        return fail("stabilizer_walls", "walls are not the Dirichlet walls of the stabilizer");
    }
    report.walls_checked += r.stabilizer_walls.len();

    let mut plane_walls = vec![];
    for (i, g) in r.generators.iter().enumerate() {
        let idx = format!("generators[{i}]");
        check_generator(&spec, &idx, g)?;
        let Some(wall) = &g.halfspace else {
            return fail(idx, "missing wall");
        };
        check_wall(&idx, &g.clifford, wall)?;
        match (g.origin, wall) {
            (Origin::Hyperplane, HalfSpace::Plane { .. }) => plane_walls.push(wall.clone()),
            (Origin::Sphere, HalfSpace::Sphere { .. }) => {}
            _ => return fail(idx, "origin does not match the wall type"),
        }
        report.generators_checked += 1;
        report.walls_checked += 1;
    }

    let b = &r.certificates.boundedness;
    if b.walls > plane_walls.len() {
        return fail("certificates.boundedness", "refers to more walls than recorded");
    }
    let normals: Vec<Vec<ExactScalar>> = plane_walls[..b.walls]
        .iter()
        .map(|w| match w {
            HalfSpace::Plane { normal, .. } => normal.iter().map(|x| -x).collect(),
            _ => unreachable!(),
        })
        .collect();
    if b.certificate.dim != BOUNDARY_DIM || !b.certificate.verify(&normals) {
        return fail("certificates.boundedness", "certificate does not verify");
    }
    match (&r.certificates.emptiness, r.status) {
        (Some(cert), _) => {
            if !verify_emptiness(&r.region(), cert) {
                return fail("certificates.emptiness", "certificate does not verify");
            }
            report.emptiness_leaves = cert.leaves.len();
        }
        (None, Status::Complete) => return fail("certificates.emptiness", "missing for a complete run"),
        (None, Status::Inconclusive) => {}
    }
    Ok(report)
}

/// One wall restricted to an affine slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SlicePrimitive {
    Sphere { source: usize, center: Vec<ExactScalar>, radius_sq: ExactScalar, keep: Keep },
    Plane { source: usize, normal: Vec<ExactScalar>, offset: ExactScalar },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slice {
    /// Names of the free coordinates, in order; `z0…z3` on the boundary, `z4` the height.
    pub free: Vec<String>,
    pub fixed: BTreeMap<String, ExactScalar>,
    pub primitives: Vec<SlicePrimitive>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum SliceError {
    #[error("bad --fix entry {0:?} (expected zK=value with K in 0..4)")]
    BadFix(String),
    #[error("a slice must leave 2 or 3 free coordinates, got {0}")]
    Dimension(usize),
    #[error("the height z4 must be fixed to a positive value")]
    Height,
}

/// Parse `z2=0,z3=1/2` into coordinate assignments.
pub fn parse_fix(spec: &str) -> Result<BTreeMap<usize, BigRational>, SliceError> {
    let mut out = BTreeMap::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| SliceError::BadFix(part.into()))?;
        let k: usize = name.trim().strip_prefix('z').and_then(|k| k.parse().ok()).ok_or_else(|| SliceError::BadFix(part.into()))?;
        if k > BOUNDARY_DIM {
            return Err(SliceError::BadFix(part.into()));
        }
        let v = crate::exactnum::parse_rational(value.trim()).map_err(|_| SliceError::BadFix(part.into()))?;
        out.insert(k, v);
    }
    Ok(out)
}

/// Restrict every wall of `F̃` to the slice fixing the given coordinates of `(y₀,…,y₃, r)`.
pub fn slice_walls(walls: &[HalfSpace], fix: &BTreeMap<usize, BigRational>) -> Result<Slice, SliceError> {
    let total = BOUNDARY_DIM + 1;
    let free_idx: Vec<usize> = (0..total).filter(|k| !fix.contains_key(k)).collect();
    if !(2..=3).contains(&free_idx.len()) {
        return Err(SliceError::Dimension(free_idx.len()));
    }
    if let Some(h) = fix.get(&BOUNDARY_DIM) {
        if h <= &BigRational::from_integer(0.into()) {
            return Err(SliceError::Height);
        }
    }
    let fixed: BTreeMap<String, ExactScalar> = fix.iter().map(|(k, v)| (format!("z{k}"), ExactScalar::from_rational(v.clone()))).collect();
    let val = |k: usize| fix.get(&k).map(|v| ExactScalar::from_rational(v.clone()));
    let mut primitives = vec![];
    for (source, w) in walls.iter().enumerate() {
        match w {
            HalfSpace::Sphere { center, radius_sq, keep } => {
                // |y − c|² + r² = R² with the center's height 0.
                let mut full = center.clone();
                full.push(ExactScalar::zero());
                let mut r2 = radius_sq.clone();
                for (k, c) in full.iter().enumerate() {
                    if let Some(v) = val(k) {
                        r2 = r2 - (&v - c).square();
                    }
                }
                if r2.sign() <= 0 {
                    continue;
                }
                let center = free_idx.iter().map(|&k| full[k].clone()).collect();
                primitives.push(SlicePrimitive::Sphere { source, center, radius_sq: r2, keep: *keep });
            }
            HalfSpace::Plane { normal, offset } => {
                let mut full = normal.clone();
                full.push(ExactScalar::zero());
                let mut off = offset.clone();
                for (k, n) in full.iter().enumerate() {
                    if let Some(v) = val(k) {
                        off += &(n * &v);
                    }
                }
                let normal: Vec<ExactScalar> = free_idx.iter().map(|&k| full[k].clone()).collect();
                if normal.iter().all(|x| x.is_zero()) {
                    continue;
                }
                primitives.push(SlicePrimitive::Plane { source, normal, offset: off });
            }
        }
    }
    Ok(Slice { free: free_idx.iter().map(|k| format!("z{k}")).collect(), fixed, primitives })
}

/// Walls of a result restricted to a slice.
pub fn slice_result(r: &RunResult, fix: &BTreeMap<usize, BigRational>) -> Result<Slice, SliceError> {
    slice_walls(&r.halfspaces(), fix)
}

/// Convenience: the constraint list of the polytope part of a result's region.
pub fn polytope_constraints(r: &RunResult) -> Vec<LinearConstraint> {
    r.region().polytope
}
