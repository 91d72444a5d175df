//! Clifford algebra Cl₄ with its three conjugations and the Clifford group.

use vahlen_domains::clifford::CliffordElement;
use vahlen_domains::exactnum::ExactScalar;

fn main() {
    let n = 4;
    let (i1, i2, i3) = (CliffordElement::generator(n, 1), CliffordElement::generator(n, 2), CliffordElement::generator(n, 3));
    println!("i₁² = {}", &i1 * &i1);
    println!("i₁i₂ + i₂i₁ = {}", &(&i1 * &i2) + &(&i2 * &i1));

    let x = &(&i1 * &i2) * &i3;
    println!("x = i₁i₂i₃: x′ = {}, x* = {}, x̄ = {}", x.conj_prime(), x.conj_star(), x.conj_bar());

    let v = CliffordElement::from_vector(n, &[1, 2, 0, -1].map(ExactScalar::from));
    let w = CliffordElement::from_vector(n, &[0, 1, 1, 1].map(ExactScalar::from));
    let g = &v * &w;
    println!("g = vw = {g}");
    println!("|g|² = {} = |v|²|w|² = {}", g.norm_sq(), &v.norm_sq() * &w.norm_sq());
    println!("g⁻¹ = {}", g.group_inverse().unwrap());
    println!("v⁻¹ = {}", v.vector_inverse().unwrap());
}
