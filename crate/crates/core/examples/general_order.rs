//! Generators for SL₂ of the order ℤ⟨i, j⟩ in (−1, −3 / ℚ). Takes a few minutes.
//!
//! Usage: `cargo run --release --example general_order [norm_cap]`

use std::time::Instant;

use vahlen_domains::chi_bridge::GroupSpec;
use vahlen_domains::domain::{assemble_output, compute_generators, DomainConfig};
use vahlen_domains::quat::QuatAlgebra;

fn main() {
    let cap = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let t = Instant::now();
    let spec = GroupSpec::QuatOrder { x: -1, y: -3 };
    let set = compute_generators(spec, &DomainConfig { norm_cap: cap, ..Default::default() }).expect("run");
    println!("status {:?}, N = {}, last shell {}", set.status, set.stop_norm, set.last_norm);
    println!("stabilizer of order {}", set.stabilizer.elements.len());
    let alg = QuatAlgebra::new(-1, -3).unwrap();
    for q in assemble_output(&set).expect("validated") {
        let coords: Vec<String> = q.entries().iter().map(|e| format!("{:?}", alg.int_coords(e).expect("integral"))).collect();
        println!("  [{}]", coords.join(", "));
    }
    for n in &set.notes {
        println!("note: {n}");
    }
    println!("elapsed {:.1?}", t.elapsed());
}
