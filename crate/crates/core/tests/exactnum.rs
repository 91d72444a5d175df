use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use vahlen_domains::exactnum::{ExactScalar, Field, RadicalSum};

fn field() -> Field {
    Field::new(2, 3).unwrap()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn scalar() -> impl Strategy<Value = ExactScalar> {
    [rational(), rational(), rational(), rational()].prop_map(|c| ExactScalar::new(field(), c))
}

fn approx(x: &ExactScalar) -> f64 {
    let c = x.coeffs().map(|v| num_traits::ToPrimitive::to_f64(&v).unwrap());
    c[0] + c[1] * 2f64.sqrt() + c[2] * 3f64.sqrt() + c[3] * 6f64.sqrt()
}

proptest! {
    #[test]
    fn ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn division_inverts_multiplication(a in scalar(), b in scalar()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(&(&a * &b) / &b, a.clone());
        prop_assert!((&b * &b.recip()).is_one());
    }

    #[test]
    fn sign_agrees_with_floating_point(a in scalar()) {
        let f = approx(&a);
        if f.abs() > 1e-9 {
            prop_assert_eq!(a.sign(), f.signum() as i32);
        }
        prop_assert_eq!((-&a).sign(), -a.sign());
    }

    #[test]
    fn sign_is_multiplicative(a in scalar(), b in scalar()) {
        prop_assert_eq!((&a * &b).sign(), a.sign() * b.sign());
        if !a.is_zero() {
            prop_assert_eq!(a.square().sign(), 1);
        }
    }

    #[test]
    fn order_is_consistent(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.cmp(&b), (&a - &b).sign().cmp(&0));
        prop_assert_eq!(a.abs().sign() >= 0, true);
    }

    #[test]
    fn enclosure_contains_value(a in scalar()) {
        let (lo, hi) = a.enclosure(40);
        prop_assert!(ExactScalar::from_rational(lo) <= a && a <= ExactScalar::from_rational(hi));
    }

    #[test]
    fn json_roundtrip(a in scalar()) {
        let s = serde_json::to_string(&a).unwrap();
        let b: ExactScalar = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn radical_sum_sign_matches(c in prop::collection::vec((rational(), 1i64..30), 1..5)) {
        let mut s = RadicalSum::new();
        let mut f = 0.0;
        for (coef, r) in &c {
            s.add_term(coef.clone(), &BigRational::from_integer(BigInt::from(*r)));
            f += num_traits::ToPrimitive::to_f64(coef).unwrap() * (*r as f64).sqrt();
        }
        if f.abs() > 1e-9 {
            prop_assert_eq!(s.sign(), f.signum() as i32);
        }
    }
}

#[test]
fn cancellations_are_exact() {
    let f = field();
    let r2 = ExactScalar::sqrt_int(f, 2).unwrap();
    let r3 = ExactScalar::sqrt_int(f, 3).unwrap();
    let r6 = ExactScalar::sqrt_int(f, 6).unwrap();
    let s = &r2 + &r3;
    let zero = &(&s * &s) - &(&ExactScalar::from(5) + &(&ExactScalar::from(2) * &r6));
    assert!(zero.is_zero());
    assert_eq!(zero.sign(), 0);
    assert_eq!(ExactScalar::sqrt_int(f, 24).unwrap(), &ExactScalar::from(2) * &r6);
    // √2 + √3 − √6 − 0.4 is small and positive (≈ 0.2965…).
    let x = &(&s - &r6) - &ExactScalar::from_ratio(2, 5);
    assert_eq!(x.sign(), 1);
}

#[test]
fn mixed_fields_are_rejected() {
    let a = ExactScalar::sqrt_int(Field::new(2, 1).unwrap(), 2).unwrap();
    let b = ExactScalar::sqrt_int(Field::new(5, 1).unwrap(), 5).unwrap();
    assert!(a.try_add(&b).is_err());
    assert!(ExactScalar::sqrt_int(Field::new(2, 1).unwrap(), 3).is_err());
}
