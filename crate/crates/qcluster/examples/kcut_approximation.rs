//! Compare the iterative minimum-cut approximation against the exhaustive
//! minimum k-cut: the removed weight stays within the 2 − 2/k factor.
//!
//! Run with: cargo run -p qcluster --example kcut_approximation

use qcluster::cluster::max_sum_approx;
use qcluster::flow::{brute_force_min_kcut, partition_cut_weight};
use qcluster::similarity::{random_instance, trial_stream};

fn main() -> qcluster::Result<()> {
    let mut rng = trial_stream(0x5EED, 2);
    let mut worst_ratio: f64 = 0.0;
    println!(" n  k   removed    optimal   ratio   bound");
    for trial in 0..12 {
        let n = 6 + trial % 3;
        let s = random_instance(n, &mut rng)?;
        for k in [2usize, 3, 4] {
            let approx = max_sum_approx(&s, k)?;
            let removed = partition_cut_weight(&s, &approx);
            let (optimal, _) = brute_force_min_kcut(&s, k)?;
            let ratio = removed / optimal;
            worst_ratio = worst_ratio.max(ratio);
            println!(
                "{n:>2} {k:>2}   {removed:>7.4}   {optimal:>7.4}   {ratio:>5.3}   {:>5.3}",
                2.0 - 2.0 / k as f64
            );
        }
    }
    println!("worst observed ratio: {worst_ratio:.3}");
    Ok(())
}
