//! The isomorphism `χ: SL₊(Γ₄(ℝ)) → SL₂(ℍ(ℝ))` built from the central
//! idempotents `ε₁ = (1 + i₁i₂i₃)/2`, `ε₂ = (1 − i₁i₂i₃)/2` of `Cl₄`,
//! its inverse, integrality predicates, and the group specifications whose
//! preimages the domain algorithms work with.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::clifford::{CliffordElement, CliffordError};
use crate::exactnum::ExactScalar;
use crate::quat::{QuatAlgebra, QuatError, QuatMatrix, Quaternion};
use crate::vahlen::{VahlenError, VahlenMatrix};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ChiError {
    #[error("χ is defined on Cl₄ only (got Cl_{0})")]
    Degree(u8),
    #[error("matrix is not in SL₂: Δ² = {0}")]
    NotUnit(String),
    #[error("unsupported group spec: {0}")]
    UnsupportedSpec(String),
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error(transparent)]
    Vahlen(#[from] VahlenError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

// Blade masks in Cl₄: bit h−1 stands for i_h.
const I1: usize = 1;
const I2: usize = 2;
const I3: usize = 4;
const I12: usize = 3;
const I13: usize = 5;
const I23: usize = 6;
const I123: usize = 7;

/// `α = ε₁a₁ + ε₂a₂` with `a₁, a₂ ∈ Cl₃` written as quaternions through
/// `1 ↦ 1, i₁ ↦ i, i₂ ↦ j, i₁i₂ ↦ k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdempotentPair {
    pub a1: Quaternion,
    pub a2: Quaternion,
}

pub fn epsilon1() -> CliffordElement {
    let h = ExactScalar::from_ratio(1, 2);
    let mut e = CliffordElement::scalar(4, h.clone());
    e = &e + &CliffordElement::blade(4, I123, h);
    e
}

pub fn epsilon2() -> CliffordElement {
    let h = ExactScalar::from_ratio(1, 2);
    &CliffordElement::scalar(4, h.clone()) - &CliffordElement::blade(4, I123, h)
}

/// `ε₁² = ε₁`, `ε₂² = ε₂`, `ε₁ε₂ = 0`, `ε₁ + ε₂ = 1`, `ε₁* = ε₂`, `ε̄ᵢ = εᵢ`, both central.
pub fn epsilon_identities_hold() -> bool {
    static CHECKED: OnceLock<bool> = OnceLock::new();
    *CHECKED.get_or_init(|| {
        let (e1, e2) = (epsilon1(), epsilon2());
        let central = (1..4u8).all(|h| {
            let g = CliffordElement::generator(4, h);
            &g * &e1 == &e1 * &g
        });
        &e1 * &e1 == e1
            && &e2 * &e2 == e2
            && (&e1 * &e2).is_zero()
            && (&e1 + &e2).is_one()
            && e1.conj_star() == e2
            && e1.conj_bar() == e1
            && e2.conj_bar() == e2
            && central
    })
}

fn check_deg4(a: &CliffordElement) -> Result<(), ChiError> {
    if a.degree() == 4 {
        Ok(())
    } else {
        Err(ChiError::Degree(a.degree()))
    }
}

pub fn split_idempotent(alpha: &CliffordElement) -> Result<IdempotentPair, ChiError> {
    check_deg4(alpha)?;
    let c = |m: usize| alpha.coeff(m);
    let a1 = Quaternion::new([c(0) + c(I123), c(I1) - c(I23), c(I2) + c(I13), c(I12) - c(I3)]);
    let a2 = Quaternion::new([c(0) - c(I123), c(I1) + c(I23), c(I2) - c(I13), c(I12) + c(I3)]);
    Ok(IdempotentPair { a1, a2 })
}

pub fn join_idempotent(p: &IdempotentPair) -> CliffordElement {
    let h = ExactScalar::from_ratio(1, 2);
    let [x0, x1, x2, x3] = &p.a1.0;
    let [y0, y1, y2, y3] = &p.a2.0;
    let mut c = vec![ExactScalar::zero(); 8];
    c[0] = &(x0 + y0) * &h;
    c[I1] = &(x1 + y1) * &h;
    c[I2] = &(x2 + y2) * &h;
    c[I3] = &(y3 - x3) * &h;
    c[I12] = &(x3 + y3) * &h;
    c[I13] = &(x2 - y2) * &h;
    c[I23] = &(y1 - x1) * &h;
    c[I123] = &(x0 - y0) * &h;
    CliffordElement::from_coeffs(4, c).expect("degree 4")
}

/// `χ₁(α) = ω(a₁)`.
pub fn chi1(alpha: &CliffordElement) -> Result<Quaternion, ChiError> {
    Ok(split_idempotent(alpha)?.a1)
}

/// The unique vector `β ∈ 𝕍⁴` with `χ₁(β) = q`.
pub fn vector_lift(q: &Quaternion) -> CliffordElement {
    let [q0, q1, q2, q3] = &q.0;
    CliffordElement::from_vector(4, &[q0.clone(), q1.clone(), q2.clone(), -q3])
}

pub fn chi(m: &VahlenMatrix) -> Result<QuatMatrix, ChiError> {
    if m.degree() != 4 {
        return Err(ChiError::Degree(m.degree()));
    }
    let [a, b, c, d] = m.entries().map(|e| chi1(e).expect("degree checked"));
    Ok(QuatMatrix::new(a, b, c, d))
}

fn require_unit(q: &QuatMatrix) -> Result<(), ChiError> {
    let d = q.dieudonne_det_sq();
    if d.is_one() {
        Ok(())
    } else {
        Err(ChiError::NotUnit(d.to_string()))
    }
}

/// Preimage by the generator decomposition, three cases on `b`, `c`.
/// For `c ≠ 0` the preimages of the eight factors are multiplied in `Cl₄`.
///
/// With `c = 0` and `Δ = 1` both `a` and `d` are nonzero (`|a||d| = 1`), so the
/// two `c = 0` branches cover every input.
pub fn chi_inv(q: &QuatMatrix) -> Result<VahlenMatrix, ChiError> {
    require_unit(q)?;
    let (e1, e2) = (epsilon1(), epsilon2());
    let QuatMatrix { a, b, c, d } = q;
    let (al, be, ga, de) = if c.is_zero() {
        let alpha = vector_lift(a);
        let tau = vector_lift(&(a * d));
        let alpha_inv = alpha.vector_inverse()?;
        let tau_bar = tau.conj_bar();
        let upper_left = &(&e1 * &alpha) + &(&(&e2 * &alpha) * &tau_bar);
        let lower_right = &(&(&e1 * &alpha_inv) * &tau) + &(&e2 * &alpha_inv);
        let upper_right = if b.is_zero() {
            CliffordElement::zero(4)
        } else {
            // Upper-left times the preimage of [[1, a⁻¹b], [0, 1]]; the ε₂ part is ατ̄η, not αητ̄.
            let eta = vector_lift(&(&a.inverse()? * b));
            &upper_left * &eta
        };
        (upper_left, upper_right, CliffordElement::zero(4), lower_right)
    } else {
        // Preimages of the factors of
        // [[1, ac⁻¹], [0, 1]]·[[0, −1], [1, 0]]·[[1, −c], [0, 1]]·[[1, 0], [c⁻¹ − 1, 1]]
        //   ·[[1, 1], [0, 1]]·[[1, 0], [c − 1, 1]]·diag(1, σ)·[[1, c⁻¹d], [0, 1]],
        // multiplied out in Cl₄. Expanding the product symbolically only works
        // when lifts of c⁻¹d and σ commute, which fails e.g. for [[0, −1], [−i, −j]].
        let ci = c.inverse()?;
        let one = Quaternion::one();
        let (zero4, one4) = (CliffordElement::zero(4), CliffordElement::one(4));
        let upper = |x: &Quaternion| VahlenMatrix::translation(vector_lift(x));
        let lower = |x: &Quaternion| VahlenMatrix::new_unchecked(one4.clone(), zero4.clone(), vector_lift(x), one4.clone());
        let mu = vector_lift(&q.sigma());
        let diag = VahlenMatrix::new_unchecked(&e1 + &(&e2 * &mu.conj_bar()), zero4.clone(), zero4.clone(), &(&e1 * &mu) + &e2);
        let factors = [
            upper(&(a * &ci)),
            VahlenMatrix::inversion(4),
            upper(&-c),
            lower(&(&ci - &one)),
            upper(&one),
            lower(&(c - &one)),
            diag,
            upper(&(&ci * d)),
        ];
        let m = factors.iter().fold(VahlenMatrix::identity(4), |acc, f| acc.mul(f));
        let [al, be, ga, de] = m.entries().map(|e| e.clone());
        (al, be, ga, de)
    };
    Ok(VahlenMatrix::new(al, be, ga, de)?)
}

/// Preimage from `Q` and `Q⁻¹`: the `ε₂` halves are read off the inverse,
/// since `M⁻¹ = [[δ*, −β*], [−γ*, α*]]` and `χ₁(x*) = a₂*` for `x = ε₁a₁ + ε₂a₂`.
pub fn chi_inv_via_inverse(q: &QuatMatrix) -> Result<VahlenMatrix, ChiError> {
    require_unit(q)?;
    let qi = q.inverse()?;
    let pair = |x: &Quaternion, y: Quaternion| join_idempotent(&IdempotentPair { a1: x.clone(), a2: y.conj_star() });
    let al = pair(&q.a, qi.d.clone());
    let be = pair(&q.b, -&qi.b);
    let ga = pair(&q.c, -&qi.c);
    let de = pair(&q.d, qi.a.clone());
    Ok(VahlenMatrix::new(al, be, ga, de)?)
}

fn is_integral_quat(q: &Quaternion) -> bool {
    q.0.iter().all(|x| x.is_integer())
}

/// Entries are `ε₁a + ε₂b` with `a, b ∈ Cl₃(ℤ)`.
pub fn in_tilde_gamma4z(m: &VahlenMatrix) -> bool {
    m.degree() == 4
        && m.entries().iter().all(|e| {
            let p = split_idempotent(e).expect("degree 4");
            is_integral_quat(&p.a1) && is_integral_quat(&p.a2)
        })
}

/// Entries have integer blade coefficients.
pub fn in_gamma4z(m: &VahlenMatrix) -> bool {
    m.degree() == 4 && m.entries().iter().all(|e| e.coeffs().iter().all(|x| x.is_integer()))
}

/// Which subgroup of `SL₂` of a quaternion order is being pulled back.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    /// `SL₂(ℍ(ℤ))`, pulled back to `SL₊(Γ₄(ℤ))`.
    Full,
    /// Principal congruence subgroup of level `m` in `SL₂(ℍ(ℤ))`.
    Congruence { level: u32 },
    /// `SL₂` of the order `ℤ⟨i, j⟩` in `(x, y / ℚ)`, pulled back through `Λ` and `χ`.
    QuatOrder { x: i64, y: i64 },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Full => write!(f, "gamma4z"),
            GroupSpec::Congruence { level } => write!(f, "congruence {level}"),
            GroupSpec::QuatOrder { x, y } => write!(f, "quat {x} {y}"),
        }
    }
}

impl GroupSpec {
    /// Validate; `(−1, −1)` gives `ℍ(ℤ)` itself and is routed through `Γ₄(ℤ)`.
    pub fn normalized(self) -> Result<GroupSpec, ChiError> {
        match self {
            GroupSpec::Congruence { level: 0 } => Err(ChiError::UnsupportedSpec("level must be ≥ 1".into())),
            GroupSpec::Congruence { level: 1 } => Ok(GroupSpec::Full),
            GroupSpec::QuatOrder { x: -1, y: -1 } => Ok(GroupSpec::Full),
            GroupSpec::QuatOrder { x, y } => {
                QuatAlgebra::new(x, y).map_err(|e| ChiError::UnsupportedSpec(e.to_string()))?;
                Ok(self)
            }
            s => Ok(s),
        }
    }

    pub fn algebra(&self) -> QuatAlgebra {
        match self {
            GroupSpec::QuatOrder { x, y } => QuatAlgebra::new(*x, *y).expect("validated"),
            _ => QuatAlgebra::HAMILTON,
        }
    }

    /// Group elements live in `Γ₄(ℤ)` (integer norms) rather than the starred setting.
    pub fn is_integral_clifford(&self) -> bool {
        !matches!(self, GroupSpec::QuatOrder { .. })
    }

    /// Membership of a quaternion matrix in the group `G` itself.
    pub fn contains_quat(&self, q: &QuatMatrix) -> bool {
        if !q.dieudonne_det_sq().is_one() {
            return false;
        }
        match self {
            GroupSpec::Full => q.entries().iter().all(|e| is_integral_quat(e)),
            GroupSpec::Congruence { level } => {
                let m = ExactScalar::from(*level as i64);
                let id = QuatMatrix::identity();
                let ok = q.entries().into_iter().zip(id.entries()).all(|(e, i)| {
                    e.0.iter().zip(&i.0).all(|(x, y)| x.is_integer() && (x - y).try_div(&m).is_ok_and(|t| t.is_integer()))
                });
                ok
            }
            GroupSpec::QuatOrder { .. } => {
                let alg = self.algebra();
                q.entries().iter().all(|e| alg.is_integral(e))
            }
        }
    }

    /// Membership of a Vahlen matrix in the group the algorithms run on.
    pub fn contains(&self, m: &VahlenMatrix) -> bool {
        if m.degree() != 4 {
            return false;
        }
        if self.is_integral_clifford() && !in_gamma4z(m) {
            return false;
        }
        chi(m).is_ok_and(|q| self.contains_quat(&q))
    }
}

/// The membership predicate for a spec, usable as a filter.
pub fn pullback_membership(spec: GroupSpec) -> Result<impl Fn(&VahlenMatrix) -> bool, ChiError> {
    let spec = spec.normalized()?;
    Ok(move |m: &VahlenMatrix| spec.contains(m))
}
