//! Certified emptiness of a boundary region: box subdivision with replayable leaves.

use vahlen_domains::exactnum::ExactScalar;
use vahlen_domains::geometry::lp::LinearConstraint;
use vahlen_domains::geometry::region::{region_is_empty, verify_emptiness, Ball, BoundaryRegion, EmptinessResult, SubdivisionLimits};

fn v(x: &[i64]) -> Vec<ExactScalar> {
    x.iter().map(|&a| ExactScalar::from(a)).collect()
}

fn main() {
    // The square [−1, 1]² minus four open disks through the origin.
    let mut region = BoundaryRegion::new(2);
    for n in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
        region.polytope.push(LinearConstraint::new(v(&n), ExactScalar::one()));
    }
    for c in [[1, 1], [1, -1], [-1, 1], [-1, -1]] {
        region.add_excluded(Ball::new(v(&c), ExactScalar::from(2)));
    }
    match region_is_empty(&region, SubdivisionLimits::default()).unwrap() {
        EmptinessResult::Empty(cert) => {
            println!("empty: {} leaves, {} cusp covers", cert.leaves.len(), cert.cusps.len());
            for leaf in cert.leaves.iter().take(6) {
                println!("  {:?}: {}", leaf.bbox, leaf.reason);
            }
            println!("replay: {}", verify_emptiness(&region, &cert));
        }
        other => println!("{other:?}"),
    }

    region.excluded[0] = Ball::new(v(&[1, 1]), ExactScalar::from_ratio(3, 2));
    if let EmptinessResult::Witness(w) = region_is_empty(&region, SubdivisionLimits::default()).unwrap() {
        println!("after shrinking a disk: witness {w:?}");
    }
}
