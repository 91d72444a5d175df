//! Möbius action of Vahlen matrices on upper half-space and the walls they define.

use vahlen_domains::clifford::CliffordElement;
use vahlen_domains::exactnum::ExactScalar;
use vahlen_domains::geometry::halfspace::{wall_is_bisector, UpperPoint};
use vahlen_domains::vahlen::{bisector_generic, VahlenMatrix};

fn main() {
    let n = 4;
    let b = CliffordElement::from_vector(n, &[1, 1, 0, 0].map(ExactScalar::from));
    let m = VahlenMatrix::translation(b).mul(&VahlenMatrix::inversion(n));
    println!("M = {m:?}, ‖M‖² = {}", m.norm_sq());

    let p = UpperPoint::basepoint(n as usize);
    let q = m.inverse().act(&p).unwrap();
    println!("M⁻¹(i₄) = {q:?}");

    let wall = m.bisector_at_basepoint().unwrap();
    println!("closed-form wall: {wall:?}");
    println!("generic bisector: {:?}", bisector_generic(&p, &q).unwrap());
    println!("equidistance identity holds: {}", wall_is_bisector(&wall, &p, &q));

    let (ps, r2) = m.rho().unwrap();
    println!("ball model: |P|² = {ps}, R² = {r2}");
}
