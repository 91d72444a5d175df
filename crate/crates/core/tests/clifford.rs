use proptest::prelude::*;
use vahlen_domains::clifford::CliffordElement;
use vahlen_domains::exactnum::ExactScalar;

fn element(n: u8) -> impl Strategy<Value = CliffordElement> {
    prop::collection::vec(-5i64..=5, 1usize << (n - 1))
        .prop_map(move |c| CliffordElement::from_coeffs(n, c.into_iter().map(ExactScalar::from).collect()).unwrap())
}

fn vector(n: u8) -> impl Strategy<Value = CliffordElement> {
    prop::collection::vec(-5i64..=5, n as usize)
        .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
        .prop_map(move |v| CliffordElement::from_vector(n, &v.into_iter().map(ExactScalar::from).collect::<Vec<_>>()))
}

/// Product of a few nonzero vectors: an element of the Clifford group.
fn group_element(n: u8) -> impl Strategy<Value = CliffordElement> {
    prop::collection::vec(vector(n), 1..4).prop_map(move |vs| vs.into_iter().fold(CliffordElement::one(n), |a, v| &a * &v))
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in element(5), b in element(5), c in element(5)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn conjugation_laws(a in element(4), b in element(4)) {
        let ab = &a * &b;
        prop_assert_eq!(ab.conj_prime(), &a.conj_prime() * &b.conj_prime());
        prop_assert_eq!(ab.conj_star(), &b.conj_star() * &a.conj_star());
        prop_assert_eq!(ab.conj_bar(), &b.conj_bar() * &a.conj_bar());
        prop_assert_eq!(a.conj_bar(), a.conj_prime().conj_star());
        prop_assert_eq!(a.conj_prime().conj_prime(), a.clone());
        prop_assert_eq!(a.conj_star().conj_star(), a);
    }

    #[test]
    fn vectors_square_to_norms(v in vector(4)) {
        let vv = &v * &v.conj_bar();
        prop_assert!(vv.is_scalar());
        prop_assert_eq!(vv.coeff(0).clone(), v.norm_sq());
        prop_assert!((&v * &v.vector_inverse().unwrap()).is_one());
    }

    #[test]
    fn clifford_group_norm_is_multiplicative(x in group_element(4), y in group_element(4)) {
        prop_assert_eq!((&x * &y).norm_sq(), &x.norm_sq() * &y.norm_sq());
        let xx = &x * &x.conj_bar();
        prop_assert!(xx.is_scalar());
        prop_assert!((&x.group_inverse().unwrap() * &x).is_one());
        // Clifford-group elements preserve vectors under twisted conjugation.
        let v = CliffordElement::generator(4, 2);
        prop_assert!((&(&x * &v) * &x.conj_prime().group_inverse().unwrap()).is_vector());
    }

    #[test]
    fn embedding_is_a_homomorphism(a in element(3), b in element(3)) {
        prop_assert_eq!((&a * &b).embed(5), &a.embed(5) * &b.embed(5));
        prop_assert_eq!(a.embed(5).restrict(3), Some(a));
    }
}

#[test]
fn defining_relations() {
    for h in 1..5u8 {
        let ih = CliffordElement::generator(5, h);
        assert_eq!(&ih * &ih, -CliffordElement::one(5));
        for k in (h + 1)..5 {
            let ik = CliffordElement::generator(5, k);
            assert_eq!(&ih * &ik, -(&ik * &ih));
        }
    }
}

#[test]
fn degree_mismatch_is_an_error() {
    let a = CliffordElement::one(3);
    let b = CliffordElement::one(4);
    assert!(a.try_mul(&b).is_err());
    assert!(a.try_add(&b).is_err());
}
