//! Quaternion matrices: the pseudo-determinant σ, Δ and the reduced norm.

use vahlen_domains::quat::{QuatAlgebra, QuatMatrix, Quaternion};

fn main() {
    let alg = QuatAlgebra::new(-1, -3).unwrap();
    let e = |c: [i64; 4]| alg.lambda_embed_int(&c);
    // [[1 + j, i], [k, 2]] over the order ℤ⟨i, j⟩ of (−1, −3 / ℚ).
    let m = QuatMatrix::new(e([1, 0, 1, 0]), e([0, 1, 0, 0]), e([0, 0, 0, 1]), e([2, 0, 0, 0]));
    println!("σ = {:?}", m.sigma());
    println!("Δ² = {}", m.dieudonne_det_sq());
    println!("(Δ²)² = {}, reduced norm via the 8×8 embedding = {}", m.dieudonne_det_sq().square(), alg.reduced_norm_via_embedding(&m).unwrap());

    let one = Quaternion::one();
    let zero = Quaternion::zero();
    let t = QuatMatrix::new(one.clone(), e([0, 1, 1, 0]), zero.clone(), one.clone());
    let j = QuatMatrix::new(zero.clone(), one.clone(), -&one, zero);
    let u = &t * &j;
    println!("T·J is a unit of the order: {}", alg.is_unit_matrix(&u));
    println!("(T·J)⁻¹ = {:?}", u.inverse().unwrap());
}
