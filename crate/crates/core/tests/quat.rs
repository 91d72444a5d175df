mod common;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use vahlen_domains::quat::{determinant, int_to_coords, IntQuat, QuatAlgebra, QuatMatrix};

use common::*;

fn algebra() -> impl Strategy<Value = QuatAlgebra> {
    prop_oneof![Just((-1, -1)), Just((-1, -3)), Just((-2, -5)), Just((-3, -7))].prop_map(|(x, y)| QuatAlgebra::new(x, y).unwrap())
}

fn int_quat() -> impl Strategy<Value = IntQuat> {
    [-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3]
}

fn int_matrix() -> impl Strategy<Value = [IntQuat; 4]> {
    [int_quat(), int_quat(), int_quat(), int_quat()]
}

fn embed(alg: &QuatAlgebra, m: &[IntQuat; 4]) -> QuatMatrix {
    QuatMatrix::new(alg.lambda_embed_int(&m[0]), alg.lambda_embed_int(&m[1]), alg.lambda_embed_int(&m[2]), alg.lambda_embed_int(&m[3]))
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).fold(BigRational::zero(), |s, k| s + &a[i][k] * &b[k][j])).collect()).collect()
}

fn coords(alg: &QuatAlgebra, m: &QuatMatrix) -> Vec<[BigRational; 4]> {
    m.entries().iter().map(|q| alg.lambda_inv(q).unwrap()).collect()
}

proptest! {
    #[test]
    fn lambda_is_multiplicative(alg in algebra(), p in int_quat(), q in int_quat()) {
        let prod = alg.mul_int(&p, &q);
        prop_assert_eq!(alg.lambda_embed_int(&prod), &alg.lambda_embed_int(&p) * &alg.lambda_embed_int(&q));
        prop_assert_eq!(alg.lambda_embed(&alg.mul(&int_to_coords(&p), &int_to_coords(&q))), alg.lambda_embed_int(&prod));
        prop_assert_eq!(alg.lambda_embed_int(&p).norm_sq(), vahlen_domains::exactnum::ExactScalar::from(alg.nrd_int(&p)));
        prop_assert_eq!(alg.int_coords(&alg.lambda_embed_int(&p)), Some(p));
    }

    #[test]
    fn delta_is_multiplicative(alg in algebra(), a in int_matrix(), b in int_matrix()) {
        let (m, n) = (embed(&alg, &a), embed(&alg, &b));
        prop_assert_eq!((&m * &n).dieudonne_det_sq(), &m.dieudonne_det_sq() * &n.dieudonne_det_sq());
        prop_assert_eq!(m.dieudonne_det_sq(), m.delta_sq_expanded());
    }

    #[test]
    fn embedding_is_multiplicative_and_computes_the_reduced_norm(alg in algebra(), a in int_matrix(), b in int_matrix()) {
        let (m, n) = (embed(&alg, &a), embed(&alg, &b));
        let em = alg.embedding_matrix(&coords(&alg, &m));
        let en = alg.embedding_matrix(&coords(&alg, &n));
        let emn = alg.embedding_matrix(&coords(&alg, &(&m * &n)));
        prop_assert_eq!(emn, mat_mul(&em, &en));
        let rn = alg.reduced_norm_via_embedding(&m).unwrap();
        prop_assert_eq!(determinant(em), rn.clone());
        prop_assert_eq!(m.dieudonne_det_sq().square(), vahlen_domains::exactnum::ExactScalar::from_rational(rn));
    }

    #[test]
    fn inverse_multiplies_back(alg in algebra(), a in int_matrix()) {
        let m = embed(&alg, &a);
        prop_assume!(!m.dieudonne_det_sq().is_zero());
        let inv = m.inverse().unwrap();
        prop_assert_eq!(&m * &inv, QuatMatrix::identity());
        prop_assert_eq!(&inv * &m, QuatMatrix::identity());
    }

    #[test]
    fn unit_words_are_units(alg in algebra(), seed in any::<u64>()) {
        let m = random_unit_matrix(&mut rng(seed), &alg, 4);
        prop_assert!(alg.is_unit_matrix(&m));
        prop_assert!(alg.reduced_norm_via_embedding(&m).unwrap() == BigRational::from_integer(1.into()));
    }
}

#[test]
fn printed_delta_variant_is_not_the_determinant() {
    // |b|²|d|² in place of |b|²|c|² changes the value as soon as |c| ≠ |d|.
    let m = qm([1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [2, 0, 0, 0]);
    assert_ne!(m.delta_sq_bd_variant(), m.dieudonne_det_sq());
    assert_eq!(m.delta_sq_expanded(), m.dieudonne_det_sq());
}

#[test]
fn singular_matrix_has_no_inverse() {
    let m = qm([1, 1, 0, 0], [1, 1, 0, 0], [1, 1, 0, 0], [1, 1, 0, 0]);
    assert!(m.dieudonne_det_sq().is_zero());
    assert!(m.inverse().is_err());
}

#[test]
fn indefinite_algebras_are_rejected() {
    assert!(QuatAlgebra::new(1, -1).is_err());
    assert!(QuatAlgebra::new(-1, 2).is_err());
}
