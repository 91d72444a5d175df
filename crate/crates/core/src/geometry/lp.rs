//! Two-phase simplex with Bland's rule, exact over ExactScalar (and in `f64` for guidance).
//!
//! Problems are posed as `max c·x` subject to `A x ≤ b` with free `x`.
//! Every outcome carries a certificate that is re-verified before it is
//! returned: dual multipliers for an optimum, a ray for unboundedness, and
//! Farkas multipliers for infeasibility.

use serde::{Deserialize, Serialize};

use crate::exactnum::ExactScalar;
use crate::geometry::halfspace::dot;

/// `⟨normal, x⟩ ≤ bound`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub normal: Vec<ExactScalar>,
    pub bound: ExactScalar,
}

impl LinearConstraint {
    pub fn new(normal: Vec<ExactScalar>, bound: ExactScalar) -> Self {
        LinearConstraint { normal, bound }
    }

    /// `⟨normal, x⟩ − bound`; the constraint holds when this is `≤ 0`.
    pub fn slack(&self, x: &[ExactScalar]) -> ExactScalar {
        dot(&self.normal, x) - &self.bound
    }

    pub fn satisfied(&self, x: &[ExactScalar]) -> bool {
        self.slack(x).sign() <= 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// `value = c·point = b·dual`, `dual ≥ 0`, `Aᵀ dual = c`.
    Optimal { value: ExactScalar, point: Vec<ExactScalar>, dual: Vec<ExactScalar> },
    /// `point` is feasible, `A ray ≤ 0` and `c·ray > 0`.
    Unbounded { point: Vec<ExactScalar>, ray: Vec<ExactScalar> },
    /// `farkas ≥ 0`, `Aᵀ farkas = 0`, `b·farkas < 0`.
    Infeasible { farkas: Vec<ExactScalar> },
}

/// Arithmetic the simplex needs. `f64` uses a tolerance in `sign`, which is only
/// acceptable because floating solutions are re-checked exactly by callers.
trait Scalar: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn sign(&self) -> i32;
    fn recip(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool {
        self.sign() == 0
    }
}

impl Scalar for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn sign(&self) -> i32 {
        ExactScalar::sign(self)
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn recip(&self) -> Self {
        ExactScalar::recip(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
}

const F64_EPS: f64 = 1e-11;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn sign(&self) -> i32 {
        if *self > F64_EPS {
            1
        } else if *self < -F64_EPS {
            -1
        } else {
            0
        }
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.mul(&p);
            }
        }
        self.rhs[r] = self.rhs[r].mul(&p);
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.sub(&f.mul(pv));
                }
            }
            self.rhs[i] = self.rhs[i].sub(&f.mul(&prhs));
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        let ncols = cost.len();
        let mut r = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, rj) in r.iter_mut().enumerate().take(ncols) {
                let t = &self.rows[i][j];
                if !t.is_zero() {
                    *rj = rj.sub(&cb.mul(t));
                }
            }
        }
        r
    }

    /// Minimize `cost` over columns `< allowed`; `Err(col)` on an unbounded column.
    fn optimize(&mut self, cost: &[T], allowed: usize) -> Result<(), usize> {
        loop {
            let r = self.reduced_costs(cost);
            let Some(enter) = (0..allowed).find(|&j| r[j].sign() < 0) else {
                return Ok(());
            };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if a.sign() <= 0 {
                    continue;
                }
                let ratio = self.rhs[i].mul(&a.recip());
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => match ratio.sub(&br).sign() {
                        -1 => Some((i, ratio)),
                        0 if self.basis[i] < self.basis[bi] => Some((i, ratio)),
                        _ => Some((bi, br)),
                    },
                };
            }
            match best {
                None => return Err(enter),
                Some((row, _)) => self.pivot(row, enter),
            }
        }
    }
}

enum Outcome<T> {
    Optimal { point: Vec<T>, dual: Vec<T> },
    Unbounded { point: Vec<T>, ray: Vec<T> },
    Infeasible { farkas: Vec<T> },
}

/// Two-phase simplex for `max c·x`, `A x ≤ b`, free `x`. Requires `m > 0`.
fn simplex<T: Scalar>(objective: &[T], rows_in: &[(&[T], &T)]) -> Outcome<T> {
    let n = objective.len();
    let m = rows_in.len();
    // Columns: x⁺ (n), x⁻ (n), slack (m), artificial (m).
    let nstruct = 2 * n + m;
    let ncols = nstruct + m;
    let mut flip = vec![false; m];
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (normal, bound)) in rows_in.iter().enumerate() {
        let neg = bound.sign() < 0;
        flip[i] = neg;
        let s = |v: &T| if neg { v.neg() } else { v.clone() };
        let mut row = vec![T::zero(); ncols];
        for j in 0..n {
            row[j] = s(&normal[j]);
            row[n + j] = s(&normal[j]).neg();
        }
        row[2 * n + i] = if neg { T::one().neg() } else { T::one() };
        row[nstruct + i] = T::one();
        rows.push(row);
        rhs.push(s(bound));
    }
    let mut t = Tableau { rows, rhs, basis: (nstruct..ncols).collect() };

    // Phase 1.
    let mut cost1 = vec![T::zero(); ncols];
    for c in cost1.iter_mut().skip(nstruct) {
        *c = T::one();
    }
    t.optimize(&cost1, nstruct).expect("phase one is bounded below");
    let mut infeas = T::zero();
    for (i, &b) in t.basis.iter().enumerate() {
        if b >= nstruct {
            infeas = infeas.sub(&t.rhs[i].neg());
        }
    }
    let signed = |pi: Vec<T>| -> Vec<T> { (0..m).map(|i| if flip[i] { pi[i].clone() } else { pi[i].neg() }).collect() };
    if infeas.sign() > 0 {
        return Outcome::Infeasible { farkas: signed(multipliers(&t, &cost1, nstruct, m)) };
    }
    // Drive zero-level artificials out of the basis where possible.
    for i in 0..m {
        if t.basis[i] >= nstruct {
            if let Some(j) = (0..nstruct).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
            }
        }
    }

    // Phase 2: minimize −c·(x⁺ − x⁻).
    let mut cost2 = vec![T::zero(); ncols];
    for j in 0..n {
        cost2[j] = objective[j].neg();
        cost2[n + j] = objective[j].clone();
    }
    let result = t.optimize(&cost2, nstruct);
    let mut xs = vec![T::zero(); ncols];
    for (i, &b) in t.basis.iter().enumerate() {
        xs[b] = t.rhs[i].clone();
    }
    let point: Vec<T> = (0..n).map(|j| xs[j].sub(&xs[n + j])).collect();
    match result {
        Err(enter) => {
            let mut d = vec![T::zero(); ncols];
            d[enter] = T::one();
            for (i, &b) in t.basis.iter().enumerate() {
                d[b] = t.rows[i][enter].neg();
            }
            let ray = (0..n).map(|j| d[j].sub(&d[n + j])).collect();
            Outcome::Unbounded { point, ray }
        }
        Ok(()) => Outcome::Optimal { point, dual: signed(multipliers(&t, &cost2, nstruct, m)) },
    }
}

/// Maximize `objective · x` subject to `constraints`, `x` free.
pub fn lp_solve_exact(objective: &[ExactScalar], constraints: &[LinearConstraint]) -> LpOutcome {
    let n = objective.len();
    for c in constraints {
        assert_eq!(c.normal.len(), n, "constraint dimension mismatch");
    }
    if constraints.is_empty() {
        return if objective.iter().all(|c| c.is_zero()) {
            LpOutcome::Optimal { value: ExactScalar::zero(), point: vec![ExactScalar::zero(); n], dual: vec![] }
        } else {
            LpOutcome::Unbounded { point: vec![ExactScalar::zero(); n], ray: objective.to_vec() }
        };
    }
    let rows: Vec<(&[ExactScalar], &ExactScalar)> = constraints.iter().map(|c| (c.normal.as_slice(), &c.bound)).collect();
    let out = match simplex(objective, &rows) {
        Outcome::Optimal { point, dual } => LpOutcome::Optimal { value: dot(objective, &point), point, dual },
        Outcome::Unbounded { point, ray } => LpOutcome::Unbounded { point, ray },
        Outcome::Infeasible { farkas } => LpOutcome::Infeasible { farkas },
    };
    debug_assert!(verify_outcome(objective, constraints, &out));
    out
}

/// Floating-point solve used to guide exact computations; `None` unless optimal.
/// Returns the optimal value, a maximiser and the dual multipliers.
pub fn lp_solve_f64(objective: &[f64], constraints: &[(Vec<f64>, f64)]) -> Option<(f64, Vec<f64>, Vec<f64>)> {
    if constraints.is_empty() {
        return None;
    }
    let rows: Vec<(&[f64], &f64)> = constraints.iter().map(|(a, b)| (a.as_slice(), b)).collect();
    match simplex(objective, &rows) {
        Outcome::Optimal { point, dual } => {
            let value = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
            Some((value, point, dual))
        }
        _ => None,
    }
}

/// Simplex multipliers `c_Bᵀ B⁻¹`, read from the artificial columns (which start as the identity).
fn multipliers<T: Scalar>(t: &Tableau<T>, cost: &[T], nstruct: usize, m: usize) -> Vec<T> {
    (0..m)
        .map(|i| {
            let mut acc = T::zero();
            for (k, &b) in t.basis.iter().enumerate() {
                if !cost[b].is_zero() {
                    acc = acc.sub(&cost[b].mul(&t.rows[k][nstruct + i]).neg());
                }
            }
            acc
        })
        .collect()
}

/// Independent check of the certificate attached to an outcome.
pub fn verify_outcome(objective: &[ExactScalar], constraints: &[LinearConstraint], out: &LpOutcome) -> bool {
    let n = objective.len();
    let at = |y: &[ExactScalar]| -> Vec<ExactScalar> {
        (0..n).map(|j| constraints.iter().zip(y).map(|(c, yi)| &c.normal[j] * yi).sum()).collect()
    };
    match out {
        LpOutcome::Optimal { value, point, dual } => {
            constraints.iter().all(|c| c.satisfied(point))
                && dual.iter().all(|y| y.sign() >= 0)
                && at(dual) == objective
                && dot(objective, point) == *value
                && constraints.iter().zip(dual).map(|(c, y)| &c.bound * y).sum::<ExactScalar>() == *value
        }
        LpOutcome::Unbounded { point, ray } => {
            constraints.iter().all(|c| c.satisfied(point))
                && constraints.iter().all(|c| dot(&c.normal, ray).sign() <= 0)
                && dot(objective, ray).sign() > 0
        }
        LpOutcome::Infeasible { farkas } => {
            farkas.iter().all(|y| y.sign() >= 0)
                && at(farkas).iter().all(|v| v.is_zero())
                && constraints.iter().zip(farkas).map(|(c, y)| &c.bound * y).sum::<ExactScalar>().sign() < 0
        }
    }
}

/// Some point satisfying all constraints, or `None` if infeasible.
pub fn feasible_point(dim: usize, constraints: &[LinearConstraint]) -> Option<Vec<ExactScalar>> {
    match lp_solve_exact(&vec![ExactScalar::zero(); dim], constraints) {
        LpOutcome::Optimal { point, .. } | LpOutcome::Unbounded { point, .. } => Some(point),
        LpOutcome::Infeasible { .. } => None,
    }
}

/// Multipliers `y ≥ 0` with `Σ yᵢ vᵢ = s·e_j` for one signed coordinate direction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DirectionCertificate {
    pub coordinate: usize,
    pub positive: bool,
    pub multipliers: Vec<ExactScalar>,
}

/// Proof that `{x : ⟨vᵢ, x⟩ ≤ bᵢ}` is bounded: every `±e_j` is a nonnegative
/// combination of the normals, so the recession cone is `{0}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoundednessCertificate {
    pub dim: usize,
    pub directions: Vec<DirectionCertificate>,
}

impl BoundednessCertificate {
    pub fn verify(&self, normals: &[Vec<ExactScalar>]) -> bool {
        if self.directions.len() != 2 * self.dim {
            return false;
        }
        for j in 0..self.dim {
            for positive in [true, false] {
                let Some(d) = self.directions.iter().find(|d| d.coordinate == j && d.positive == positive) else {
                    return false;
                };
                if d.multipliers.len() != normals.len() || d.multipliers.iter().any(|y| y.sign() < 0) {
                    return false;
                }
                for k in 0..self.dim {
                    let s: ExactScalar = normals.iter().zip(&d.multipliers).map(|(v, y)| &v[k] * y).sum();
                    let want = if k != j {
                        ExactScalar::zero()
                    } else if positive {
                        ExactScalar::one()
                    } else {
                        ExactScalar::from(-1)
                    };
                    if s != want {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Boundedness {
    Bounded(BoundednessCertificate),
    /// A nonzero direction `d` with `⟨vᵢ, d⟩ ≤ 0` for all `i`.
    Unbounded(Vec<ExactScalar>),
}

/// Decide whether the recession cone of the constraint normals is trivial.
pub fn polytope_boundedness(dim: usize, normals: &[Vec<ExactScalar>]) -> Boundedness {
    if normals.is_empty() {
        let mut d = vec![ExactScalar::zero(); dim];
        d[0] = ExactScalar::one();
        return Boundedness::Unbounded(d);
    }
    let cone: Vec<LinearConstraint> = normals.iter().map(|v| LinearConstraint::new(v.clone(), ExactScalar::zero())).collect();
    let mut directions = Vec::with_capacity(2 * dim);
    for j in 0..dim {
        for positive in [true, false] {
            let mut c = vec![ExactScalar::zero(); dim];
            c[j] = if positive { ExactScalar::one() } else { ExactScalar::from(-1) };
            match lp_solve_exact(&c, &cone) {
                LpOutcome::Optimal { dual, .. } => directions.push(DirectionCertificate { coordinate: j, positive, multipliers: dual }),
                LpOutcome::Unbounded { ray, .. } => return Boundedness::Unbounded(ray),
                LpOutcome::Infeasible { .. } => unreachable!("the origin satisfies a homogeneous system"),
            }
        }
    }
    Boundedness::Bounded(BoundednessCertificate { dim, directions })
}

/// True iff the polytope `{⟨vᵢ, x⟩ ≤ bᵢ}` has trivial recession cone.
pub fn polytope_is_bounded(dim: usize, constraints: &[LinearConstraint]) -> bool {
    let normals: Vec<Vec<ExactScalar>> = constraints.iter().map(|c| c.normal.clone()).collect();
    matches!(polytope_boundedness(dim, &normals), Boundedness::Bounded(_))
}
