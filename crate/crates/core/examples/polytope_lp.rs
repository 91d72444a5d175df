//! Exact linear programming and boundedness certificates for the vertical walls.

use vahlen_domains::exactnum::ExactScalar;
use vahlen_domains::geometry::lp::{lp_solve_exact, polytope_boundedness, Boundedness, LinearConstraint, LpOutcome};

fn v(x: &[i64]) -> Vec<ExactScalar> {
    x.iter().map(|&a| ExactScalar::from(a)).collect()
}

fn main() {
    // |x| ≤ 1/2, |y| ≤ 1/2, x + y ≤ 1/2 in the plane.
    let half = ExactScalar::from_ratio(1, 2);
    let rows: Vec<LinearConstraint> =
        [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1]].iter().map(|n| LinearConstraint::new(v(n), half.clone())).collect();
    match lp_solve_exact(&v(&[2, 1]), &rows) {
        LpOutcome::Optimal { value, point, dual } => println!("max 2x + y = {value} at {point:?}, multipliers {dual:?}"),
        other => println!("{other:?}"),
    }

    let normals: Vec<Vec<ExactScalar>> = rows.iter().map(|c| c.normal.clone()).collect();
    match polytope_boundedness(2, &normals) {
        Boundedness::Bounded(cert) => println!("bounded; certificate verifies: {}", cert.verify(&normals)),
        Boundedness::Unbounded(ray) => println!("unbounded along {ray:?}"),
    }
    match polytope_boundedness(2, &normals[..3]) {
        Boundedness::Bounded(_) => println!("bounded"),
        Boundedness::Unbounded(ray) => println!("dropping two walls leaves the ray {ray:?}"),
    }
}
