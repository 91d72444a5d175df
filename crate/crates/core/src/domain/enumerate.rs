//! Lattice enumeration of matrix-norm shells.
//!
//! Work happens on the quaternion side with integer coordinates in the order
//! `(x,y/ℤ)`: for `Q = [[a, b], [c, d]]` with `Δ(Q) = 1`, the Vahlen preimage
//! `M = χ⁻¹(Q)` has `‖M‖² = ‖Q‖²`, so a shell is a finite set of integer
//! quaternion quadruples with prescribed entry norms.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chi_bridge::{join_idempotent, GroupSpec, IdempotentPair};
use crate::exactnum::ExactScalar;
use crate::quat::{IntQuat, QuatAlgebra, QuatMatrix, Quaternion};
use crate::vahlen::VahlenMatrix;

/// Integer quaternion matrix `[a, b, c, d]`.
pub type IntMatrix = [IntQuat; 4];

/// Which elements of a shell to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShellFilter {
    All,
    /// `|α|² + |γ|² = 1` (vertical bisectors). `reduced` keeps only `γ = 0`.
    Hyperplane { reduced: bool },
    /// `|α|² + |γ|² > 1`.
    Hemisphere,
}

/// All matrices of one norm in the group, modulo `±I`.
#[derive(Clone, Debug)]
pub struct Shell {
    pub norm: BigRational,
    pub members: Vec<VahlenMatrix>,
}

fn conj(p: &IntQuat) -> IntQuat {
    [p[0], -p[1], -p[2], -p[3]]
}

fn sub(p: &IntQuat, q: &IntQuat) -> IntQuat {
    [p[0] - q[0], p[1] - q[1], p[2] - q[2], p[3] - q[3]]
}

fn scale(p: &IntQuat, s: i64) -> IntQuat {
    p.map(|v| v * s)
}

/// Points of the order with reduced norm `k`, grouped by norm.
pub struct LatticeCache {
    alg: QuatAlgebra,
    by_norm: Vec<Vec<IntQuat>>,
}

impl LatticeCache {
    pub fn new(alg: QuatAlgebra, max_norm: i64) -> Self {
        let w = alg.weights();
        let bound = |k: usize| ((max_norm / w[k]) as f64).sqrt() as i64 + 1;
        let mut by_norm = vec![vec![]; max_norm as usize + 1];
        for u0 in -bound(0)..=bound(0) {
            for u1 in -bound(1)..=bound(1) {
                for u2 in -bound(2)..=bound(2) {
                    for u3 in -bound(3)..=bound(3) {
                        let u = [u0, u1, u2, u3];
                        let n = alg.nrd_int(&u);
                        if n <= max_norm {
                            by_norm[n as usize].push(u);
                        }
                    }
                }
            }
        }
        LatticeCache { alg, by_norm }
    }

    pub fn points(&self, k: i64) -> &[IntQuat] {
        self.by_norm.get(k as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn algebra(&self) -> QuatAlgebra {
        self.alg
    }
}

impl QuatAlgebra {
    /// Inverse of an integer matrix with `Δ = 1`, checked by multiplication.
    pub fn int_matrix_inverse(&self, m: &IntMatrix) -> Option<IntMatrix> {
        let [a, b, c, d] = m;
        let mul = |p: &IntQuat, q: &IntQuat| self.mul_int(p, q);
        let (na, nb, nc, nd) = (self.nrd_int(a), self.nrd_int(b), self.nrd_int(c), self.nrd_int(d));
        let n11 = sub(&scale(&conj(a), nd), &mul(&mul(&conj(c), d), &conj(b)));
        let n12 = sub(&scale(&conj(c), nb), &mul(&mul(&conj(a), b), &conj(d)));
        let n21 = sub(&scale(&conj(b), nc), &mul(&mul(&conj(d), c), &conj(a)));
        let n22 = sub(&scale(&conj(d), na), &mul(&mul(&conj(b), a), &conj(c)));
        let inv = [n11, n12, n21, n22];
        (self.int_matrix_mul(m, &inv) == [[1, 0, 0, 0], [0; 4], [0; 4], [1, 0, 0, 0]]).then_some(inv)
    }

    pub fn int_matrix_mul(&self, m: &IntMatrix, n: &IntMatrix) -> IntMatrix {
        let add = |p: IntQuat, q: IntQuat| [p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]];
        let mul = |p: &IntQuat, q: &IntQuat| self.mul_int(p, q);
        [
            add(mul(&m[0], &n[0]), mul(&m[1], &n[2])),
            add(mul(&m[0], &n[1]), mul(&m[1], &n[3])),
            add(mul(&m[2], &n[0]), mul(&m[3], &n[2])),
            add(mul(&m[2], &n[1]), mul(&m[3], &n[3])),
        ]
    }

    pub fn int_matrix_norm(&self, m: &IntMatrix) -> i64 {
        m.iter().map(|q| self.nrd_int(q)).sum()
    }

    pub fn int_matrix_embed(&self, m: &IntMatrix) -> QuatMatrix {
        let [a, b, c, d] = m.map(|q| self.lambda_embed_int(&q));
        QuatMatrix::new(a, b, c, d)
    }
}

/// `Q` (integer, `Δ = 1`) for a spec's group, pre-filter on the quaternion side.
fn int_member(spec: &GroupSpec, m: &IntMatrix, inv: &IntMatrix) -> bool {
    match spec {
        GroupSpec::Full => gamma4z_parity(m, inv),
        GroupSpec::Congruence { level } => {
            let l = *level as i64;
            let id = [[1, 0, 0, 0], [0; 4], [0; 4], [1, 0, 0, 0]];
            gamma4z_parity(m, inv) && m.iter().zip(&id).all(|(q, e)| (0..4).all(|k| (q[k] - e[k]).rem_euclid(l) == 0))
        }
        GroupSpec::QuatOrder { .. } => true,
    }
}

/// The preimage has integer blade coefficients iff `χ₁` of each entry and of
/// the matching inverse entry agree mod 2 coordinatewise.
fn gamma4z_parity(m: &IntMatrix, inv: &IntMatrix) -> bool {
    let pairs = [(0, 3), (1, 1), (2, 2), (3, 0)];
    pairs.iter().all(|&(i, j)| (0..4).all(|k| (m[i][k] - inv[j][k]).rem_euclid(2) == 0))
}

/// First nonzero coordinate positive.
fn is_sign_canonical(m: &IntMatrix) -> bool {
    m.iter().flatten().find(|&&v| v != 0).is_some_and(|&v| v > 0)
}

/// The Vahlen preimage from `Q` and `Q⁻¹` (the `ε₂` halves come from the inverse).
pub fn preimage_from_parts(q: &QuatMatrix, qi: &QuatMatrix) -> VahlenMatrix {
    let pair = |x: &Quaternion, y: Quaternion| join_idempotent(&IdempotentPair { a1: x.clone(), a2: y.conj_star() });
    VahlenMatrix::new_unchecked(
        pair(&q.a, qi.d.clone()),
        pair(&q.b, -&qi.b),
        pair(&q.c, -&qi.c),
        pair(&q.d, qi.a.clone()),
    )
}

/// Integer matrices `Q` with `‖Q‖² = n`, `Δ = 1`, in the spec's group, one per `±` pair.
pub fn enumerate_int_shell(cache: &LatticeCache, spec: &GroupSpec, n: i64, filter: ShellFilter) -> Vec<(IntMatrix, IntMatrix)> {
    let alg = cache.algebra();
    let mut parts = vec![];
    for na in 0..=n {
        for nc in 0..=(n - na) {
            let keep = match filter {
                ShellFilter::All => true,
                ShellFilter::Hyperplane { reduced } => na + nc == 1 && !(reduced && nc != 0),
                ShellFilter::Hemisphere => na + nc >= 2,
            };
            if !keep {
                continue;
            }
            for nd in 0..=(n - na - nc) {
                let nb = n - na - nc - nd;
                if nc == 0 && (na != 1 || nd != 1) {
                    continue;
                }
                parts.push((na, nb, nc, nd));
            }
        }
    }
    let mut out: Vec<(IntMatrix, IntMatrix)> = parts
        .par_iter()
        .flat_map_iter(|&(na, nb, nc, nd)| {
            let mut found = vec![];
            if nc == 0 {
                for a in cache.points(1) {
                    for d in cache.points(1) {
                        for b in cache.points(nb) {
                            found.push([*a, *b, [0; 4], *d]);
                        }
                    }
                }
            } else {
                // b = (a c̄ d − e)/|c|² with |e|² = |c|², which forces |σ| = 1.
                for a in cache.points(na) {
                    for c in cache.points(nc) {
                        let ac = alg.mul_int(a, &conj(c));
                        for d in cache.points(nd) {
                            let w = alg.mul_int(&ac, d);
                            for e in cache.points(nc) {
                                let diff = sub(&w, e);
                                if diff.iter().all(|t| t % nc == 0) {
                                    let b = diff.map(|t| t / nc);
                                    if alg.nrd_int(&b) == nb {
                                        found.push([*a, b, *c, *d]);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            found.into_iter().filter_map(|m| {
                if !is_sign_canonical(&m) {
                    return None;
                }
                let inv = alg.int_matrix_inverse(&m)?;
                int_member(spec, &m, &inv).then_some((m, inv))
            })
        })
        .collect();
    out.sort();
    out
}

/// Shell of Vahlen matrices of norm `norm` (empty unless `norm` is an integer).
pub fn enumerate_shell(spec: &GroupSpec, norm: &BigRational, filter: ShellFilter) -> Shell {
    let empty = Shell { norm: norm.clone(), members: vec![] };
    if !norm.is_integer() || norm.is_zero() {
        return empty;
    }
    let Some(n) = norm.to_integer().to_i64() else { return empty };
    let cache = LatticeCache::new(spec.algebra(), n);
    shell_from_cache(&cache, spec, n, filter)
}

pub fn shell_from_cache(cache: &LatticeCache, spec: &GroupSpec, n: i64, filter: ShellFilter) -> Shell {
    let alg = cache.algebra();
    let ints = enumerate_int_shell(cache, spec, n, filter);
    let members = ints
        .par_iter()
        .map(|(m, inv)| preimage_from_parts(&alg.int_matrix_embed(m), &alg.int_matrix_embed(inv)))
        .collect();
    Shell { norm: BigRational::from_integer(n.into()), members }
}

/// Cache of lattice points reused across consecutive shells.
pub struct ShellEnumerator {
    spec: GroupSpec,
    cache: LatticeCache,
    shells: HashMap<(i64, ShellFilterKey), Shell>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct ShellFilterKey(u8);

impl From<ShellFilter> for ShellFilterKey {
    fn from(f: ShellFilter) -> Self {
        ShellFilterKey(match f {
            ShellFilter::All => 0,
            ShellFilter::Hyperplane { reduced: false } => 1,
            ShellFilter::Hyperplane { reduced: true } => 2,
            ShellFilter::Hemisphere => 3,
        })
    }
}

impl ShellEnumerator {
    pub fn new(spec: GroupSpec, max_norm: i64) -> Self {
        ShellEnumerator { spec, cache: LatticeCache::new(spec.algebra(), max_norm.max(1)), shells: HashMap::new() }
    }

    /// Shell of norm `twice_norm / 2`.
    pub fn shell(&mut self, twice_norm: i64, filter: ShellFilter) -> &Shell {
        let key = (twice_norm, ShellFilterKey::from(filter));
        if !self.shells.contains_key(&key) {
            let shell = if twice_norm % 2 != 0 {
                Shell { norm: BigRational::new(twice_norm.into(), 2.into()), members: vec![] }
            } else {
                shell_from_cache(&self.cache, &self.spec, twice_norm / 2, filter)
            };
            self.shells.insert(key, shell);
        }
        &self.shells[&key]
    }
}

/// Scalar `‖M‖²` as a rational.
pub fn norm_rational(m: &VahlenMatrix) -> BigRational {
    m.norm_sq().as_rational().cloned().unwrap_or_else(|| {
        let s: &ExactScalar = m.norm_sq();
        panic!("matrix norm {s} is not rational")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chi_bridge::{chi, in_gamma4z};

    #[test]
    fn hamilton_shell_sizes() {
        // ± pairs of SL₂(ℍ(ℤ)) by norm, before the Γ₄(ℤ) parity filter.
        let cache = LatticeCache::new(QuatAlgebra::HAMILTON, 4);
        let spec = GroupSpec::QuatOrder { x: -1, y: -1 };
        let sizes: Vec<usize> = (2..=4).map(|n| enumerate_int_shell(&cache, &spec, n, ShellFilter::All).len()).collect();
        assert_eq!(sizes, vec![64, 1024, 3072]);
    }

    #[test]
    fn integer_inverse_and_preimage() {
        let spec = GroupSpec::Full;
        let s = enumerate_shell(&spec, &BigRational::from_integer(5.into()), ShellFilter::All);
        assert!(!s.members.is_empty());
        for m in s.members.iter().take(50) {
            assert!(crate::vahlen::is_vahlen(m.alpha(), m.beta(), m.gamma(), m.delta()).is_ok());
            assert!(in_gamma4z(m));
            assert_eq!(m.norm_sq(), &ExactScalar::from(5));
            assert!(chi(m).unwrap().dieudonne_det_sq().is_one());
        }
    }

    #[test]
    fn translation_shell() {
        let s = enumerate_shell(&GroupSpec::Full, &BigRational::from_integer(3.into()), ShellFilter::Hyperplane { reduced: true });
        assert!(s.members.iter().all(|m| m.gamma().is_zero()));
        let plain: Vec<_> = s.members.iter().filter(|m| m.alpha().is_one()).collect();
        assert_eq!(plain.len(), 8);
    }

    #[test]
    fn half_shell_empty() {
        let s = enumerate_shell(&GroupSpec::Full, &BigRational::new(5.into(), 2.into()), ShellFilter::All);
        assert!(s.members.is_empty());
    }
}
