//! Generators of SL₂(ℍ(ℤ)) up to finite index, via the preimage in SL₊(Γ₄(ℤ)).

use std::time::Instant;

use vahlen_domains::chi_bridge::GroupSpec;
use vahlen_domains::domain::{assemble_output, compute_generators, DomainConfig};

fn main() {
    let t = Instant::now();
    let set = compute_generators(GroupSpec::Full, &DomainConfig { norm_cap: 10, ..Default::default() })
        .expect("Γ₄(ℤ) run");
    println!("status: {:?}, hyperplane stop norm {}", set.status, set.stop_norm);
    println!("stabilizer: {} elements mod ±I, {} generators", set.stabilizer.elements.len(), set.stabilizer.generators.len());
    for q in assemble_output(&set).expect("validated output") {
        println!("  [[{:?}, {:?}], [{:?}, {:?}]]", q.a, q.b, q.c, q.d);
    }
    if let Some(cert) = &set.emptiness {
        println!("boundary region empty: {} leaf boxes", cert.leaves.len());
    }
    println!("elapsed {:.2?}", t.elapsed());
}
