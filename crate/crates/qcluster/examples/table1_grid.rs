//! Print the five-function verdict grid: consistency, k-richness, and the
//! two tree-consistency properties for single-linkage, max-sum, the two
//! permutation families, and the constant partitioner.
//!
//! Run with: cargo run -p qcluster --example table1_grid
//! (use --release for the full default trial counts)

use qcluster::axiom::{table1_grid, Verdict};
use qcluster::similarity::DEFAULT_MASTER_SEED;

fn main() -> qcluster::Result<()> {
    let grid = table1_grid(DEFAULT_MASTER_SEED, 400, 80)?;

    let mark = |v: Verdict| match v {
        Verdict::SatisfiedOnTrials => "ok ",
        Verdict::Violated => " x ",
    };

    println!(
        "{:<16} {:>12} {:>10} {:>16} {:>16}",
        "function", "Consistency", "kRichness", "MSTConsistency", "MCTConsistency"
    );
    for row in grid.cells.chunks(4) {
        print!("{:<16}", row[0].function_name);
        for cell in row {
            let width = match cell.property {
                qcluster::axiom::PropertyName::Consistency => 12,
                qcluster::axiom::PropertyName::KRichness => 10,
                _ => 16,
            };
            print!(" {:>width$}", mark(cell.report.verdict), width = width);
        }
        println!();
    }
    println!(
        "\ncells matching the expected pattern: {}/{}",
        grid.matched_cells(),
        grid.total_cells()
    );
    Ok(())
}
