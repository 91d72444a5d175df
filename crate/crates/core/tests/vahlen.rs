mod common;

use proptest::prelude::*;
use vahlen_domains::chi_bridge::chi_inv;
use vahlen_domains::exactnum::ExactScalar;
use vahlen_domains::geometry::halfspace::{equidistance_residual, wall_is_bisector, HalfSpace, UpperPoint};
use vahlen_domains::quat::QuatAlgebra;
use vahlen_domains::vahlen::{bisector_generic, VahlenMatrix};

use common::*;

fn gamma4z_element() -> impl Strategy<Value = VahlenMatrix> {
    any::<u64>().prop_map(|seed| random_word(&mut rng(seed), &gamma4z_vahlen_generators(), 8, |a, b| a.mul(b)))
}

/// Preimage of a unit of the order in `(−1,−3/ℚ)`: entries over `ℚ(√3)`.
fn order_element() -> impl Strategy<Value = VahlenMatrix> {
    any::<u64>().prop_map(|seed| chi_inv(&random_unit_matrix(&mut rng(seed), &QuatAlgebra::new(-1, -3).unwrap(), 3)).unwrap())
}

fn point() -> impl Strategy<Value = UpperPoint> {
    ([(-9i64..=9, 1i64..=5), (-9..=9, 1..=5), (-9..=9, 1..=5), (-9..=9, 1..=5)], (1i64..=9, 1i64..=5))
        .prop_map(|(y, (rn, rd))| UpperPoint::new(y.iter().map(|&(n, d)| rat(n, d)).collect(), rat(rn, rd)))
}

/// `|z − w|² / (z_r w_r)`, a function of the hyperbolic distance.
fn distance_invariant(z: &UpperPoint, w: &UpperPoint) -> ExactScalar {
    &z.dist_sq(w) / &(&z.r * &w.r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_composes(m in gamma4z_element(), n in gamma4z_element(), z in point()) {
        let lhs = m.mul(&n).act(&z).unwrap();
        let rhs = m.act(&n.act(&z).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs, m.mul(&n).act_via_products(&z).unwrap());
        prop_assert_eq!(m.inverse().act(&m.act(&z).unwrap()).unwrap(), z);
    }

    #[test]
    fn action_is_an_isometry(m in order_element(), z in point(), w in point()) {
        let (mz, mw) = (m.act(&z).unwrap(), m.act(&w).unwrap());
        prop_assert_eq!(distance_invariant(&mz, &mw), distance_invariant(&z, &w));
        prop_assert_eq!(mz, m.act_via_products(&z).unwrap());
    }

    #[test]
    fn inverse_and_products_stay_vahlen(m in order_element(), n in gamma4z_element()) {
        prop_assert!(m.mul(&m.inverse()).is_identity());
        let n4 = n.mul(&n.inverse());
        prop_assert!(n4.is_identity());
        prop_assert!(m.norm_sq().sign() > 0);
    }

    #[test]
    fn closed_form_bisector_matches_generic(m in prop_oneof![gamma4z_element(), order_element()]) {
        prop_assume!(!m.is_su());
        let p = UpperPoint::basepoint(4);
        let q = m.inverse().act(&p).unwrap();
        let w = m.bisector_at_basepoint().unwrap();
        let g = bisector_generic(&p, &q).unwrap();
        prop_assert!(w.same_as(&g) || w.normalized() == g.normalized());
        prop_assert!(wall_is_bisector(&w, &p, &q));
        prop_assert!(w.contains(&p));
        prop_assert!(!w.contains(&q));
        if let Some(pts) = w.wall_points(10) {
            for z in pts {
                prop_assert!(equidistance_residual(&z, &p, &q).is_zero());
            }
        }
    }

    #[test]
    fn norm_formulas_agree(m in prop_oneof![gamma4z_element(), order_element()]) {
        prop_assume!(!m.is_su());
        let (a, c) = m.psi();
        prop_assert!((a.norm_sq() - c.norm_sq()).is_one());
        let (p2, r2) = m.rho().unwrap();
        let (center, radius_sq) = m.isometric_sphere_ball().unwrap();
        prop_assert_eq!(center.iter().map(|x| x * x).sum::<ExactScalar>(), p2);
        prop_assert_eq!(radius_sq, r2);
    }
}

#[test]
fn translations_give_planes() {
    let b = vahlen_domains::clifford::CliffordElement::generator(4, 1);
    let t = VahlenMatrix::translation(b);
    match t.bisector_at_basepoint().unwrap() {
        HalfSpace::Plane { normal, offset } => {
            assert_eq!(normal, ints(&[0, 1, 0, 0]));
            assert_eq!(offset, rat(1, 2));
        }
        h => panic!("expected a plane, got {h:?}"),
    }
}

#[test]
fn stabilizer_elements_have_no_wall() {
    let j = VahlenMatrix::inversion(4);
    assert!(j.is_su());
    assert!(j.bisector_at_basepoint().is_err());
    assert!(j.rho().is_err());
}
