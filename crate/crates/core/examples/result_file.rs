//! Write a result file, replay its certificates and take a 3D slice of the walls.

use vahlen_domains::chi_bridge::GroupSpec;
use vahlen_domains::domain::{compute_generators, DomainConfig};
use vahlen_domains::io::{parse_fix, slice_result, verify_result, RunResult};

fn main() {
    let cfg = DomainConfig { norm_cap: 10, ..Default::default() };
    let set = compute_generators(GroupSpec::Full, &cfg).expect("Γ₄(ℤ) run");
    let result = RunResult::from_generator_set(&set, cfg);
    let json = serde_json::to_string_pretty(&result).unwrap();
    println!("result file: {} bytes", json.len());

    let back: RunResult = serde_json::from_str(&json).unwrap();
    match verify_result(&back) {
        Ok(report) => println!("verified: {report}"),
        Err(e) => println!("verification failed at {e}"),
    }

    let mut tampered = back.clone();
    tampered.generators.pop();
    println!("without the last generator: {}", verify_result(&tampered).err().map_or("ok".into(), |e| e.to_string()));

    let slice = slice_result(&back, &parse_fix("z2=0,z3=0").unwrap()).unwrap();
    println!("slice in ({}): {} primitives", slice.free.join(", "), slice.primitives.len());
    println!("{}", serde_json::to_string(&slice.primitives[0]).unwrap());
}
