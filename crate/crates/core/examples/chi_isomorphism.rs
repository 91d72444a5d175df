//! The isomorphism χ between Vahlen matrices over Cl₄ and 2×2 quaternion matrices.

use vahlen_domains::chi_bridge::{chi, chi_inv, chi_inv_via_inverse, epsilon1, epsilon2, in_gamma4z, in_tilde_gamma4z};
use vahlen_domains::quat::{QuatMatrix, Quaternion};

fn main() {
    println!("ε₁ = {}, ε₂ = {}", epsilon1(), epsilon2());
    let q = |c: [i64; 4]| Quaternion::from_ints(c);
    // (T_i J)(T_j J) with T_b = [[1, b], [0, 1]] and J = [[0, −1], [1, 0]].
    let unit = QuatMatrix::new(q([-1, 0, 0, 1]), q([0, -1, 0, 0]), q([0, 0, 1, 0]), q([-1, 0, 0, 0]));
    println!("Δ² = {}", unit.dieudonne_det_sq());

    let m = chi_inv(&unit).unwrap();
    println!("χ⁻¹(Q) = {m:?}");
    println!("χ(χ⁻¹(Q)) = Q: {}", chi(&m).unwrap() == unit);
    println!("agrees with the inverse-based preimage: {}", m == chi_inv_via_inverse(&unit).unwrap());
    println!("in SL₊(Γ̃₄(ℤ)): {}, in SL₊(Γ₄(ℤ)): {}", in_tilde_gamma4z(&m), in_gamma4z(&m));

    let n = chi_inv(&QuatMatrix::new(q([1, 0, 0, 0]), q([0; 4]), q([0; 4]), q([0, 1, 0, 0]))).unwrap();
    println!("diag(1, i) pulls back to {n:?}: in Γ₄(ℤ)? {}", in_gamma4z(&n));
}
