//! Replay the output-preserving transformation chains: starting from the
//! dominant-weight witness of the reference partition, four instance
//! transformations reach an instance whose tree k-cut matches the original's
//! while the traced function's output never changes.
//!
//! Run with: cargo run -p qcluster --example uniqueness_chains

use qcluster::axiom::{uniqueness_chain, ChainMode, ChainTrace};
use qcluster::cluster::{MaxSumApprox, SingleLinkage};
use qcluster::similarity::{random_instance, trial_stream};

fn show(trace: &ChainTrace) {
    println!("  reference partition: {:?}", trace.gamma.blocks());
    for step in &trace.steps {
        let weights: Vec<String> = step
            .instance
            .pairs()
            .map(|(_, w)| format!("{w:.3}"))
            .collect();
        println!(
            "  {}: output {:?}  weights [{}]",
            step.label,
            step.output.as_ref().map(|p| p.blocks()),
            weights.join(", ")
        );
    }
    println!(
        "  reference attained: {}, outputs preserved: {}, final k-cut matches: {}",
        trace.reference_attained, trace.outputs_preserved, trace.final_kcut_matches
    );
    if !trace.issues.is_empty() {
        println!("  issues: {:?}", trace.issues);
    }
}

fn main() -> qcluster::Result<()> {
    let mut rng = trial_stream(0x5EED, 3);
    let s = random_instance(5, &mut rng)?;

    println!("cut-tree chain traced through the iterative max-sum, k=2:");
    show(&uniqueness_chain(&MaxSumApprox, &s, 2, ChainMode::Mct)?);

    println!("\nspanning-tree chain traced through single-linkage, k=3:");
    show(&uniqueness_chain(&SingleLinkage, &s, 3, ChainMode::Mst)?);
    Ok(())
}
