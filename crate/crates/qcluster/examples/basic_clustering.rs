//! Cluster a small instance with single-linkage and max-sum.
//!
//! Run with: cargo run -p qcluster --example basic_clustering

use qcluster::cluster::{lambda_objective, max_sum_approx, max_sum_exact, single_linkage};
use qcluster::similarity::SimilarityInstance;

fn main() -> qcluster::Result<()> {
    // A path-like instance: 1—2—3—4 strongly chained, weak elsewhere.
    let s = SimilarityInstance::from_edges(
        4,
        &[
            (1, 2, 10.0),
            (2, 3, 9.0),
            (3, 4, 8.0),
            (1, 3, 1.0),
            (1, 4, 1.0),
            (2, 4, 1.0),
        ],
    )?;

    println!(
        "instance on {} points, total weight {}",
        s.n(),
        s.total_weight()
    );
    for k in 1..=4 {
        let sl = single_linkage(&s, k)?;
        let ms = max_sum_approx(&s, k)?;
        let exact = max_sum_exact(&s, k)?;
        println!("k={k}");
        println!("  single-linkage     {:?}", sl.blocks());
        println!("  max-sum (2-2/k)    {:?}", ms.blocks());
        println!(
            "  max-sum (exact)    {:?}   in-cluster weight {}",
            exact.blocks(),
            lambda_objective(&s, &exact)
        );
    }
    Ok(())
}
