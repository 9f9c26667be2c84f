//! Cluster Gaussian coordinates by mutual information: the generalized
//! Gomory-Hu tree of the MI oracle, cut at its lightest edges, separates
//! weakly dependent blocks.
//!
//! Run with: cargo run -p qcluster --example mdl_gaussian_clustering

use qcluster::cluster::q_cluster;
use qcluster::submodular::{gaussian_mi_oracle, GaussianModel};
use qcluster::tree::gomory_hu_general;

fn main() -> qcluster::Result<()> {
    // Two correlated blocks {1,2,3} and {4,5}, nearly independent of each
    // other, plus a lone coordinate 6.
    let mut cov = vec![vec![0.0; 6]; 6];
    for (i, row) in cov.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for (i, j, rho) in [
        (0, 1, 0.65),
        (0, 2, 0.6),
        (1, 2, 0.6),
        (3, 4, 0.7),
        (0, 3, 0.05),
        (1, 4, 0.05),
    ] {
        cov[i][j] = rho;
        cov[j][i] = rho;
    }
    let model = GaussianModel::new(cov)?;
    let oracle = gaussian_mi_oracle(&model);

    let tree = gomory_hu_general(&oracle)?;
    println!("generalized cut tree over the MI oracle:");
    for ((u, v), w) in tree.edges() {
        println!("  ({u}, {v})  {w:.6}");
    }

    for k in 2..=4 {
        let clusters = q_cluster(&oracle, k)?;
        println!("k={k}: {:?}", clusters.blocks());
    }
    Ok(())
}
