//! Stabilizer computation, the hyperplane search (Algorithm 1), the
//! hemisphere search (Algorithm 2) and assembly of quaternion-side generators.

pub mod enumerate;

use std::collections::{HashSet, VecDeque};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chi_bridge::{chi, ChiError, GroupSpec};
use crate::exactnum::ExactScalar;
use crate::geometry::halfspace::{HalfSpace, Keep, UpperPoint};
use crate::geometry::lp::{lp_solve_exact, polytope_boundedness, Boundedness, BoundednessCertificate, LinearConstraint, LpOutcome};
use crate::geometry::region::{
    region_is_empty, region_shrinks_within, AaBox, Ball, BoundaryRegion, EmptinessCertificate, EmptinessResult, GeometryError,
    ShrinkResult, SubdivisionLimits,
};
use crate::quat::QuatMatrix;
use crate::vahlen::{bisector_generic, VahlenError, VahlenMatrix};

pub use enumerate::{enumerate_shell, Shell, ShellEnumerator, ShellFilter};

/// Dimension of the boundary `∂ℍ⁵ = ℝ⁴`.
pub const BOUNDARY_DIM: usize = 4;

#[derive(thiserror::Error, Debug)]
pub enum DomainError {
    #[error("no compact hyperplane trace up to norm cap {0}")]
    NormCapReached(u32),
    #[error("every base point in the schedule is fixed by a nontrivial stabilizer element")]
    NoGenericBasePoint,
    #[error("norm-2 shell is not closed under multiplication")]
    StabilizerNotClosed,
    #[error("output re-validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Chi(#[from] ChiError),
    #[error(transparent)]
    Vahlen(#[from] VahlenError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainConfig {
    /// Largest `‖M‖²` examined.
    pub norm_cap: u32,
    pub limits: SubdivisionLimits,
}

impl Default for DomainConfig {
    fn default() -> Self {
        DomainConfig { norm_cap: 40, limits: SubdivisionLimits::default() }
    }
}

/// The finite stabilizer of `iₙ` (modulo `±I`) and a Dirichlet domain for it.
#[derive(Clone, Debug)]
pub struct Stabilizer {
    pub elements: Vec<VahlenMatrix>,
    pub generators: Vec<VahlenMatrix>,
    pub base_point: UpperPoint,
    pub walls: Vec<HalfSpace>,
}

/// A group element together with the wall `Σ_{M⁻¹}(iₙ)` it contributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallGenerator {
    pub matrix: VahlenMatrix,
    pub wall: HalfSpace,
}

#[derive(Clone, Debug)]
pub struct HyperplaneSearch {
    pub generators: Vec<WallGenerator>,
    pub stop_norm: BigRational,
    pub certificate: BoundednessCertificate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Complete,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub spec: GroupSpec,
    pub stabilizer: Stabilizer,
    pub hyperplane_generators: Vec<WallGenerator>,
    /// How many leading hyperplane generators came from Algorithm 1 (the boundedness certificate refers to these).
    pub hyperplane_seed: usize,
    pub sphere_generators: Vec<WallGenerator>,
    pub stop_norm: BigRational,
    pub boundedness: BoundednessCertificate,
    pub emptiness: Option<EmptinessCertificate>,
    pub status: Status,
    /// Largest shell norm examined by the hemisphere search.
    pub last_norm: BigRational,
    /// Human-readable remarks (inconclusive sub-tests and the like).
    pub notes: Vec<String>,
}

impl GeneratorSet {
    /// Every wall of `F̃`: stabilizer walls first, then generator walls.
    pub fn halfspaces(&self) -> Vec<HalfSpace> {
        let mut out = self.stabilizer.walls.clone();
        out.extend(self.hyperplane_generators.iter().map(|g| g.wall.clone()));
        out.extend(self.sphere_generators.iter().map(|g| g.wall.clone()));
        out
    }

    pub fn region(&self) -> BoundaryRegion {
        BoundaryRegion::from_halfspaces(BOUNDARY_DIM, &self.halfspaces())
    }

    /// Stabilizer generators followed by the wall generators.
    pub fn all_generators(&self) -> Vec<VahlenMatrix> {
        let mut out = self.stabilizer.generators.clone();
        out.extend(self.hyperplane_generators.iter().map(|g| g.matrix.clone()));
        out.extend(self.sphere_generators.iter().map(|g| g.matrix.clone()));
        out
    }
}

fn rational(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_ratio(n, d)
}

/// Base points tried in order for the stabilizer's Dirichlet domain.
pub fn base_point_schedule() -> Vec<UpperPoint> {
    let mut out = vec![UpperPoint::new(vec![rational(0, 1), rational(1, 11), rational(1, 13), rational(1, 17)], ExactScalar::one())];
    let mut y = vec![rational(1, 7), rational(1, 11), rational(1, 13), rational(1, 17)];
    for _ in 0..8 {
        out.push(UpperPoint::new(y.clone(), ExactScalar::one()));
        y = y.iter().map(|v| v * &rational(1, 2)).collect();
    }
    out
}

/// Sort key: simplest first, diagonal before off-diagonal, then by coefficients.
fn generator_key(m: &VahlenMatrix) -> (u32, bool, String) {
    (m.complexity(), !m.gamma().is_zero(), format!("{m:?}"))
}

/// Closure of a set of matrices under multiplication, modulo `±I`.
pub fn generate_group(gens: &[VahlenMatrix], limit: usize) -> Option<HashSet<VahlenMatrix>> {
    let n = gens.first().map_or(4, |g| g.degree());
    let id = VahlenMatrix::identity(n);
    let mut seen: HashSet<VahlenMatrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g).canonical_sign();
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen)
}

/// The stabilizer of `iₙ`: the norm-2 shell, checked closed, with greedy
/// generators and Dirichlet walls about a generic base point.
pub fn compute_stabilizer(spec: &GroupSpec) -> Result<Stabilizer, DomainError> {
    let shell = enumerate_shell(spec, &BigRational::from_integer(2.into()), ShellFilter::All);
    let mut elements: Vec<VahlenMatrix> = shell.members.iter().map(|m| m.canonical_sign()).collect();
    elements.sort_by_cached_key(generator_key);
    let set: HashSet<VahlenMatrix> = elements.iter().cloned().collect();
    for a in &elements {
        for b in &elements {
            if !set.contains(&a.mul(b).canonical_sign()) {
                return Err(DomainError::StabilizerNotClosed);
            }
        }
    }
    let mut generators = vec![];
    let mut generated: HashSet<VahlenMatrix> = HashSet::from([VahlenMatrix::identity(4)]);
    for e in &elements {
        if generated.len() == set.len() {
            break;
        }
        if !generated.contains(e) {
            generators.push(e.clone());
            generated = generate_group(&generators, set.len()).ok_or(DomainError::StabilizerNotClosed)?;
        }
    }
    let nontrivial: Vec<&VahlenMatrix> = elements.iter().filter(|m| !m.is_identity()).collect();
    for p0 in base_point_schedule() {
        let images: Vec<UpperPoint> = nontrivial.iter().map(|g| g.act(&p0)).collect::<Result<_, _>>()?;
        if images.contains(&p0) {
            continue;
        }
        let mut walls: Vec<HalfSpace> = vec![];
        for q in &images {
            let w = bisector_generic(&p0, q)?;
            if !walls.iter().any(|x| x.same_as(&w)) {
                walls.push(w);
            }
        }
        return Ok(Stabilizer { elements, generators, base_point: p0, walls });
    }
    Err(DomainError::NoGenericBasePoint)
}

fn plane_constraint(h: &HalfSpace) -> Option<LinearConstraint> {
    match h {
        HalfSpace::Plane { normal, offset } => Some(LinearConstraint::new(normal.iter().map(|x| -x).collect(), offset.clone())),
        _ => None,
    }
}

/// Certify boundedness of the polytope cut out by plane walls.
pub fn hyperplane_boundedness(walls: &[HalfSpace]) -> Boundedness {
    let normals: Vec<Vec<ExactScalar>> = walls.iter().filter_map(plane_constraint).map(|c| c.normal).collect();
    polytope_boundedness(BOUNDARY_DIM, &normals)
}

/// Pick one generator per distinct wall, simplest first.
fn merge_walls(existing: &mut Vec<WallGenerator>, mut fresh: Vec<WallGenerator>) -> usize {
    fresh.sort_by_cached_key(|g| generator_key(&g.matrix));
    let mut added = 0;
    for g in fresh {
        if !existing.iter().any(|e| e.wall.same_as(&g.wall)) {
            existing.push(g);
            added += 1;
        }
    }
    added
}

fn walls_for(members: &[VahlenMatrix]) -> Result<Vec<WallGenerator>, DomainError> {
    members
        .par_iter()
        .map(|m| {
            let m = m.canonical_sign();
            let wall = m.bisector_at_basepoint()?.normalized();
            Ok(WallGenerator { matrix: m, wall })
        })
        .collect()
}

/// Algorithm 1: collect vertical walls shell by shell until their boundary trace is bounded.
pub fn algorithm1(spec: &GroupSpec, enumerator: &mut ShellEnumerator, cfg: &DomainConfig) -> Result<HyperplaneSearch, DomainError> {
    let reduced = *spec == GroupSpec::Full;
    let mut gens: Vec<WallGenerator> = vec![];
    for twice in 5..=(2 * cfg.norm_cap as i64) {
        let shell = enumerator.shell(twice, ShellFilter::Hyperplane { reduced });
        if shell.members.is_empty() {
            continue;
        }
        let fresh = walls_for(&shell.members)?;
        if merge_walls(&mut gens, fresh) == 0 {
            continue;
        }
        let walls: Vec<HalfSpace> = gens.iter().map(|g| g.wall.clone()).collect();
        if let Boundedness::Bounded(certificate) = hyperplane_boundedness(&walls) {
            return Ok(HyperplaneSearch { generators: gens, stop_norm: BigRational::new(twice.into(), 2.into()), certificate });
        }
    }
    Err(DomainError::NormCapReached(cfg.norm_cap))
}

/// Can the wall remove part of the current region? Exact answer or `None` when undecided.
fn wall_cuts(
    region: &BoundaryRegion,
    bbox: Option<&AaBox>,
    wall: &HalfSpace,
    limits: SubdivisionLimits,
) -> Result<Option<bool>, DomainError> {
    match wall {
        HalfSpace::Sphere { center, radius_sq, keep: Keep::Outside } => {
            let ball = Ball::new(center.clone(), radius_sq.clone());
            Ok(match region_shrinks_within(region, bbox, &ball, limits)? {
                ShrinkResult::Shrinks(_) => Some(true),
                ShrinkResult::Unchanged(_) => Some(false),
                ShrinkResult::Inconclusive { .. } => None,
            })
        }
        HalfSpace::Plane { .. } => {
            // Removed side meets the polytope: max of −(⟨n, y⟩ + o) over the polytope is positive.
            let c = plane_constraint(wall).expect("plane");
            Ok(match lp_solve_exact(&c.normal, &region.polytope) {
                LpOutcome::Optimal { value, .. } => Some(value > c.bound),
                LpOutcome::Infeasible { .. } => Some(false),
                LpOutcome::Unbounded { .. } => Some(true),
            })
        }
        HalfSpace::Sphere { keep: Keep::Inside, .. } => Ok(None),
    }
}

/// Does the closed ball of a sphere wall meet the region's bounding box at all?
fn may_touch(wall: &HalfSpace, bbox: &Option<AaBox>) -> bool {
    match (wall, bbox) {
        (_, None) => false,
        (HalfSpace::Sphere { center, radius_sq, .. }, Some(b)) => b.min_dist_sq(center) < *radius_sq,
        _ => true,
    }
}

/// Algorithm 2: add walls that shrink the boundary region until it is certified empty.
pub fn algorithm2(
    spec: &GroupSpec,
    enumerator: &mut ShellEnumerator,
    stabilizer: Stabilizer,
    hyper: HyperplaneSearch,
    cfg: &DomainConfig,
) -> Result<GeneratorSet, DomainError> {
    let mut set = GeneratorSet {
        spec: *spec,
        stabilizer,
        hyperplane_seed: hyper.generators.len(),
        hyperplane_generators: hyper.generators,
        sphere_generators: vec![],
        stop_norm: hyper.stop_norm.clone(),
        boundedness: hyper.certificate,
        emptiness: None,
        status: Status::Inconclusive,
        last_norm: BigRational::from_integer(2.into()),
        notes: vec![],
    };
    let stop_twice = (hyper.stop_norm * BigRational::from_integer(2.into())).to_integer();
    let stop_twice: i64 = num_traits::ToPrimitive::to_i64(&stop_twice).expect("small");
    let mut region = set.region();
    let mut dirty = true;
    for twice in 4..=(2 * cfg.norm_cap as i64) {
        if dirty {
            match region_is_empty(&region, cfg.limits)? {
                EmptinessResult::Empty(cert) => {
                    set.emptiness = Some(cert);
                    set.status = Status::Complete;
                    return Ok(set);
                }
                EmptinessResult::Witness(_) => {}
                EmptinessResult::Inconclusive { depth, boxes } => {
                    set.notes.push(format!("emptiness undecided before norm {}/2 (depth {depth}, {boxes} boxes)", twice + 1))
                }
            }
            dirty = false;
        }
        if twice == 4 {
            continue;
        }
        let filter = if twice <= stop_twice { ShellFilter::Hemisphere } else { ShellFilter::All };
        let members: Vec<VahlenMatrix> = enumerator.shell(twice, filter).members.clone();
        set.last_norm = BigRational::new(twice.into(), 2.into());
        if members.is_empty() {
            continue;
        }
        let mut fresh = walls_for(&members)?;
        fresh.sort_by_cached_key(|g| generator_key(&g.matrix));
        let mut bbox = region.bounding_box()?;
        for g in fresh {
            if !may_touch(&g.wall, &bbox) {
                continue;
            }
            let known = set.stabilizer.walls.iter().any(|w| w.same_as(&g.wall))
                || set.hyperplane_generators.iter().chain(&set.sphere_generators).any(|e| e.wall.same_as(&g.wall));
            if known {
                continue;
            }
            let cuts = wall_cuts(&region, bbox.as_ref(), &g.wall, cfg.limits)?;
            if cuts.is_none() {
                set.notes.push(format!("shrink test undecided for a norm {}/2 wall; kept", twice));
            }
            if cuts != Some(false) {
                region.add_halfspace(&g.wall);
                if matches!(g.wall, HalfSpace::Plane { .. }) {
                    bbox = region.bounding_box()?;
                    set.hyperplane_generators.push(g);
                } else {
                    set.sphere_generators.push(g);
                }
                dirty = true;
            }
        }
    }
    if dirty {
        if let EmptinessResult::Empty(cert) = region_is_empty(&region, cfg.limits)? {
            set.emptiness = Some(cert);
            set.status = Status::Complete;
        }
    }
    Ok(set)
}

/// Run the stabilizer computation and both algorithms.
pub fn compute_generators(spec: GroupSpec, cfg: &DomainConfig) -> Result<GeneratorSet, DomainError> {
    let spec = spec.normalized()?;
    let stabilizer = compute_stabilizer(&spec)?;
    let mut enumerator = ShellEnumerator::new(spec, cfg.norm_cap as i64);
    let hyper = algorithm1(&spec, &mut enumerator, cfg)?;
    algorithm2(&spec, &mut enumerator, stabilizer, hyper, cfg)
}

/// Quaternion-side images of all generators, each re-validated.
pub fn assemble_output(set: &GeneratorSet) -> Result<Vec<QuatMatrix>, DomainError> {
    let alg = set.spec.algebra();
    set.all_generators()
        .iter()
        .map(|m| {
            let q = chi(m)?;
            if !set.spec.contains(m) {
                return Err(DomainError::Validation(format!("{m:?} is not in the group")));
            }
            if !alg.is_unit_matrix(&q) {
                return Err(DomainError::Validation(format!("χ({m:?}) is not a unit matrix")));
            }
            Ok(q)
        })
        .collect()
}
