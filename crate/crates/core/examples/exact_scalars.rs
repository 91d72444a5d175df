//! Exact arithmetic in ℚ(√2, √3) and exact sign decisions.

use vahlen_domains::exactnum::{ExactScalar, Field, RadicalSum};
use num_rational::BigRational;

fn main() {
    let f = Field::new(2, 3).expect("squarefree radicands");
    let r2 = ExactScalar::sqrt_int(f, 2).unwrap();
    let r3 = ExactScalar::sqrt_int(f, 3).unwrap();
    let s = &r2 + &r3;
    println!("field {f}");
    println!("(√2 + √3)² = {}", s.square());
    println!("1/(√2 + √3) = {}", s.recip());

    // √2 + √3 − √6 − 7/10 is about −0.003.
    let x = &(&s - &ExactScalar::sqrt_int(f, 6).unwrap()) - &ExactScalar::from_ratio(7, 10);
    let (lo, hi) = x.enclosure(32);
    println!("x = {x} ≈ {:.6}, sign {}, enclosure [{lo}, {hi}]", x.to_f64(), x.sign());

    // Signs of sums of square roots of rationals.
    let mut sum = RadicalSum::new();
    for (c, r) in [(1, 5), (1, 7), (-1, 23)] {
        sum.add_term(BigRational::from_integer(c.into()), &BigRational::from_integer(r.into()));
    }
    println!("sign(√5 + √7 − √23) = {}", sum.sign());
}
