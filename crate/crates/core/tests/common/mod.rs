#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use vahlen_domains::chi_bridge::chi_inv;
use vahlen_domains::exactnum::ExactScalar;
use vahlen_domains::quat::{IntQuat, QuatAlgebra, QuatMatrix, Quaternion};
use vahlen_domains::vahlen::VahlenMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(c: [i64; 4]) -> Quaternion {
    Quaternion::from_ints(c)
}

pub fn qm(a: [i64; 4], b: [i64; 4], c: [i64; 4], d: [i64; 4]) -> QuatMatrix {
    QuatMatrix::new(q(a), q(b), q(c), q(d))
}

pub const UNITS: [[i64; 4]; 8] =
    [[1, 0, 0, 0], [-1, 0, 0, 0], [0, 1, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, -1, 0], [0, 0, 0, 1], [0, 0, 0, -1]];

/// `[[0,1],[−1,0]]`, `diag(i,−i)`, `diag(j,−j)`, `diag(k,−k)` and the eight unit translations.
pub fn gamma4z_quat_generators() -> Vec<QuatMatrix> {
    let z = [0; 4];
    let mut out = vec![qm(z, [1, 0, 0, 0], [-1, 0, 0, 0], z)];
    for k in 1..4 {
        let mut u = [0; 4];
        u[k] = 1;
        let mut v = [0; 4];
        v[k] = -1;
        out.push(qm(u, z, z, v));
    }
    for b in UNITS {
        out.push(qm([1, 0, 0, 0], b, z, [1, 0, 0, 0]));
    }
    out
}

pub fn gamma4z_vahlen_generators() -> Vec<VahlenMatrix> {
    gamma4z_quat_generators().iter().map(|g| chi_inv(g).expect("unit matrix")).collect()
}

pub fn same_mod_sign(a: &QuatMatrix, b: &QuatMatrix) -> bool {
    a == b || *a == b.neg()
}

/// Random word of length `1..=max_len` in `gens`.
pub fn random_word<T: Clone>(rng: &mut impl Rng, gens: &[T], max_len: usize, mul: impl Fn(&T, &T) -> T) -> T {
    let len = rng.gen_range(1..=max_len);
    let mut w = gens[rng.gen_range(0..gens.len())].clone();
    for _ in 1..len {
        w = mul(&w, &gens[rng.gen_range(0..gens.len())]);
    }
    w
}

pub fn random_int_quat(rng: &mut impl Rng, bound: i64) -> IntQuat {
    [0; 4].map(|_| rng.gen_range(-bound..=bound))
}

/// Random element of `SL₂` of the order `ℤ⟨i,j⟩` in `(x,y/ℚ)`: a product of `J` and translations.
pub fn random_unit_matrix(rng: &mut impl Rng, alg: &QuatAlgebra, len: usize) -> QuatMatrix {
    let one = Quaternion::one();
    let zero = Quaternion::zero();
    let j = QuatMatrix::new(zero.clone(), one.clone(), -&one, zero.clone());
    let mut m = QuatMatrix::identity();
    for _ in 0..len {
        let b = alg.lambda_embed_int(&random_int_quat(rng, 1));
        let t = QuatMatrix::new(one.clone(), b, zero.clone(), one.clone());
        m = &(&m * &t) * &j;
    }
    m
}

/// Random matrix over the order with small coefficients, not necessarily invertible.
pub fn random_order_matrix(rng: &mut impl Rng, alg: &QuatAlgebra, bound: i64) -> QuatMatrix {
    let mut e = || alg.lambda_embed_int(&random_int_quat(rng, bound));
    QuatMatrix::new(e(), e(), e(), e())
}

pub fn rat(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_ratio(n, d)
}

pub fn ints(v: &[i64]) -> Vec<ExactScalar> {
    v.iter().map(|&x| ExactScalar::from(x)).collect()
}
