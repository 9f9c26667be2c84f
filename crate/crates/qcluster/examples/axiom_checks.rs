//! Run the five property checkers on single-linkage, and demonstrate the
//! scale-sensitive negative control getting caught.
//!
//! Run with: cargo run -p qcluster --example axiom_checks

use qcluster::axiom::{
    check_consistency, check_k_richness, check_mct_consistency, check_mst_consistency,
    check_scale_invariance, PropertyReport, ThresholdPartitioner,
};
use qcluster::cluster::SingleLinkage;
use qcluster::similarity::DEFAULT_MASTER_SEED;

fn show(report: &PropertyReport) {
    println!(
        "  {:<16} {:<20} trials={:<5} discarded={}",
        report.property.as_str(),
        report.verdict.as_str(),
        report.trials,
        report.discarded
    );
}

fn main() -> qcluster::Result<()> {
    let seed = DEFAULT_MASTER_SEED;

    println!("single-linkage:");
    show(&check_scale_invariance(&SingleLinkage, 300, seed)?);
    show(&check_consistency(&SingleLinkage, 300, seed)?);
    show(&check_k_richness(&SingleLinkage, 5, 2, seed)?);
    show(&check_mst_consistency(&SingleLinkage, 100, seed)?);
    show(&check_mct_consistency(&SingleLinkage, 100, seed)?);

    println!("\nthreshold control (not scale-invariant by design):");
    let report = check_scale_invariance(&ThresholdPartitioner::default(), 300, seed)?;
    show(&report);
    if let Some(qcluster::axiom::Counterexample::ScaleInvariance { k, alpha, .. }) =
        report.counterexample
    {
        println!("  caught with k={k}, alpha={alpha}");
    }
    Ok(())
}
