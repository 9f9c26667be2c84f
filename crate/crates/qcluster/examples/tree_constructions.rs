//! Build the maximum spanning tree and the Gomory-Hu cut tree of an
//! instance, and check the cut tree's defining property: the minimum edge
//! on any tree path carries the minimum cut value of that pair.
//!
//! Run with: cargo run -p qcluster --example tree_constructions

use qcluster::flow::st_min_cut;
use qcluster::similarity::{random_instance, trial_stream};
use qcluster::tree::{gomory_hu_cut_tree, mst, verify_mct};

fn main() -> qcluster::Result<()> {
    let mut rng = trial_stream(0x5EED, 0);
    let s = random_instance(6, &mut rng)?;

    let spanning = mst(&s);
    println!("maximum spanning tree (ascending weights):");
    for ((u, v), w) in spanning.edges() {
        println!("  ({u}, {v})  {w:.4}");
    }
    println!("  total weight {:.4}", spanning.total_weight());

    let cut_tree = gomory_hu_cut_tree(&s);
    println!("\ngomory-hu cut tree:");
    for ((u, v), w) in cut_tree.edges() {
        println!("  ({u}, {v})  {w:.4}");
    }

    println!("\npath minima vs direct minimum cuts:");
    for u in 1..=s.n() {
        for v in (u + 1)..=s.n() {
            let (_, path_min) = cut_tree.path_min_edge(u, v)?;
            let cut = st_min_cut(&s, u, v)?;
            println!(
                "  ({u}, {v})  path-min {path_min:.4}  min-cut {:.4}  side {:?}",
                cut.value, cut.side
            );
        }
    }

    println!("\nverify_mct(cut tree) = {}", verify_mct(&cut_tree, &s)?);
    println!("verify_mct(spanning tree) = {}", verify_mct(&spanning, &s)?);
    Ok(())
}
