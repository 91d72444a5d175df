mod common;

use num_rational::BigRational;
use vahlen_domains::chi_bridge::{chi, GroupSpec};
use vahlen_domains::domain::enumerate::{enumerate_shell, norm_rational};
use vahlen_domains::domain::{
    compute_generators, compute_stabilizer, generate_group, DomainConfig, DomainError, ShellEnumerator, ShellFilter, Status,
};
use vahlen_domains::geometry::halfspace::{HalfSpace, UpperPoint};
use vahlen_domains::io::{slice_result, parse_fix, verify_result, RunResult, SlicePrimitive};
use vahlen_domains::quat::QuatAlgebra;

use common::*;

fn gamma4z_result() -> RunResult {
    let cfg = DomainConfig { norm_cap: 10, ..Default::default() };
    let set = compute_generators(GroupSpec::Full, &cfg).unwrap();
    RunResult::from_generator_set(&set, cfg)
}

#[test]
fn shells_contain_exactly_the_group_elements_of_that_norm() {
    let mut en = ShellEnumerator::new(GroupSpec::Full, 4);
    let shell = en.shell(6, ShellFilter::All).members.clone();
    assert!(!shell.is_empty());
    for m in &shell {
        assert!(GroupSpec::Full.contains(m));
        assert_eq!(norm_rational(m), BigRational::from_integer(3.into()));
    }
    let q: Vec<_> = shell.iter().map(|m| chi(m).unwrap()).collect();
    for (i, a) in q.iter().enumerate() {
        for b in &q[i + 1..] {
            assert!(!same_mod_sign(a, b), "duplicate modulo ±I");
        }
    }
    assert!(en.shell(7, ShellFilter::All).members.is_empty());
    let direct = enumerate_shell(&GroupSpec::Full, &BigRational::from_integer(3.into()), ShellFilter::All);
    assert_eq!(direct.members.len(), shell.len());
}

#[test]
fn general_order_stabilizer_is_a_finite_group() {
    let spec = GroupSpec::QuatOrder { x: -1, y: -3 };
    let stab = compute_stabilizer(&spec).unwrap();
    let group = generate_group(&stab.generators, 4096).unwrap();
    assert_eq!(group.len(), stab.elements.len());
    let p = &stab.base_point;
    for m in &stab.elements {
        assert!(m.is_su());
        assert_eq!(m.act(&UpperPoint::basepoint(4)).unwrap(), UpperPoint::basepoint(4));
        if !m.is_identity() {
            assert_ne!(&m.act(p).unwrap(), p);
        }
    }
    let alg = QuatAlgebra::new(-1, -3).unwrap();
    assert!(stab.elements.iter().all(|m| alg.is_unit_matrix(&chi(m).unwrap())));
}

#[test]
fn gamma4z_result_replays() {
    let r = gamma4z_result();
    assert_eq!(r.status, Status::Complete);
    assert_eq!(r.stabilizer_order, 16);
    let report = verify_result(&r).unwrap();
    assert_eq!(report.generators_checked, 12);
    let json = serde_json::to_string(&r).unwrap();
    let back: RunResult = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
}

#[test]
fn verification_catches_tampering() {
    let r = gamma4z_result();
    let mut no_translation = r.clone();
    no_translation.generators.pop();
    assert!(verify_result(&no_translation).is_err());

    let mut moved = r.clone();
    if let Some(HalfSpace::Plane { offset, .. }) = &mut moved.generators[0].halfspace {
        *offset = rat(1, 3);
    }
    assert!(verify_result(&moved).is_err());

    let mut wrong_quat = r.clone();
    wrong_quat.generators[0].quat = wrong_quat.generators[0].quat.neg();
    assert!(verify_result(&wrong_quat).is_err());

    let mut no_cert = r.clone();
    no_cert.certificates.emptiness = None;
    assert!(verify_result(&no_cert).is_err());
    no_cert.status = Status::Inconclusive;
    assert!(verify_result(&no_cert).is_ok());
}

#[test]
fn slicing_the_gamma4z_domain() {
    let r = gamma4z_result();
    let slice = slice_result(&r, &parse_fix("z2=0,z3=0").unwrap()).unwrap();
    assert_eq!(slice.free.len(), 3);
    let planes = slice.primitives.iter().filter(|p| matches!(p, SlicePrimitive::Plane { .. })).count();
    assert!(planes >= 4);
    assert!(slice_result(&r, &parse_fix("z0=0").unwrap()).is_err());
    assert!(parse_fix("z9=1").is_err());
}

#[test]
fn algorithm1_needs_enough_shells() {
    let cfg = DomainConfig { norm_cap: 2, ..Default::default() };
    assert!(matches!(compute_generators(GroupSpec::Full, &cfg), Err(DomainError::NormCapReached(2))));
}
