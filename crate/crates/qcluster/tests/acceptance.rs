//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measurements. Run with `cargo test -p qcluster --test acceptance --
//! --nocapture` to see every line.

use std::time::Instant;

use qcluster::axiom::{
    check_consistency, check_k_richness, check_scale_invariance, swap_lemma_apply, table1_grid,
    uniqueness_chain, ChainMode, Counterexample, GridCell, PropertyName, Verdict,
};
use qcluster::cluster::{
    max_sum_approx, single_linkage, single_linkage_via_mst, ConstantPartitioner, MaxSum,
    MctCutsMember, MstCutsMember, PartitionPermutation, PartitioningFunction, SingleLinkage,
};
use qcluster::flow::{brute_force_min_kcut, partition_cut_weight};
use qcluster::similarity::{
    is_gamma_transform, random_instance, trial_stream, DEFAULT_MASTER_SEED,
};
use qcluster::submodular::{
    cut_oracle, gaussian_mi_oracle, is_submodular, is_symmetric, parity_oracle, queyranne_minimize,
    submodularity_violation, GaussianModel, PointSet, SetFunctionOracle,
};
use qcluster::tree::{gomory_hu_cut_tree, tree_min_kcut, verify_mct};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = DEFAULT_MASTER_SEED;
const TOL: f64 = 1e-9;

fn stream(index: u64) -> ChaCha8Rng {
    trial_stream(SEED, 0xACCE_0000 + index)
}

fn random_gaussian(n: usize, rng: &mut ChaCha8Rng) -> GaussianModel {
    let a: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen::<f64>() - 0.5).collect())
        .collect();
    let mut cov = vec![vec![0.0; n]; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in 0..n {
            cov[i][j] = (0..n).map(|k| a[i][k] * a[j][k]).sum::<f64>();
        }
        cov[i][i] += 1.0;
    }
    GaussianModel::new(cov).expect("A·Aᵀ + I is positive-definite")
}

#[test]
fn criterion_01_single_linkage_dual_form_equivalence() {
    let start = Instant::now();
    let mut rng = stream(1);
    let mut checks = 0u32;
    for _ in 0..500 {
        let n = rng.gen_range(2..=12);
        let s = random_instance(n, &mut rng).unwrap();
        for k in 1..=n {
            assert_eq!(
                single_linkage(&s, k).unwrap(),
                single_linkage_via_mst(&s, k).unwrap(),
                "dual forms diverged at n={n} k={k}"
            );
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60 s");
    println!(
        "ACCEPTANCE 1 PASS — single-linkage dual forms agree on 500 instances ({checks} (s,k) checks, {:.2} s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_02_gomory_hu_validity() {
    let mut rng = stream(2);
    for trial in 0..100 {
        let n = rng.gen_range(2..=10);
        let s = random_instance(n, &mut rng).unwrap();
        let tree = gomory_hu_cut_tree(&s);
        assert!(
            verify_mct(&tree, &s).unwrap(),
            "cut-tree verification failed at n={n} trial={trial}"
        );
    }
    println!("ACCEPTANCE 2 PASS — Gomory-Hu trees verified against exhaustive pairwise cuts on 100 instances");
}

#[test]
fn criterion_03_approximation_bound() {
    let mut rng = stream(3);
    let mut checks = 0u32;
    for _ in 0..200 {
        let n = rng.gen_range(4..=9);
        let s = random_instance(n, &mut rng).unwrap();
        for k in [2usize, 3, 4] {
            let approx = max_sum_approx(&s, k).unwrap();
            let removed = partition_cut_weight(&s, &approx);
            let (optimal, _) = brute_force_min_kcut(&s, k).unwrap();
            let factor = 2.0 - 2.0 / k as f64;
            assert!(
                removed <= factor * optimal + TOL,
                "bound violated at n={n} k={k}: {removed} > {factor}·{optimal}"
            );
            checks += 1;
        }
    }
    println!("ACCEPTANCE 3 PASS — removed weight within (2 − 2/k) of the optimum on {checks} (s,k) checks");
}

#[test]
fn criterion_04_k2_triple_equivalence() {
    let mut rng = stream(4);
    for trial in 0..200 {
        let n = rng.gen_range(2..=10);
        let s = random_instance(n, &mut rng).unwrap();
        let approx = max_sum_approx(&s, 2.min(n)).unwrap();
        let tree_cut = tree_min_kcut(&gomory_hu_cut_tree(&s), 2.min(n)).unwrap();
        assert_eq!(
            approx, tree_cut.partition,
            "partitions diverged at n={n} trial={trial}"
        );
        if n >= 2 {
            let cut_value = partition_cut_weight(&s, &approx);
            let (_, queyranne_value) = queyranne_minimize(&cut_oracle(&s)).unwrap();
            assert!(
                (cut_value - queyranne_value).abs() <= TOL,
                "values diverged at n={n}: {cut_value} vs {queyranne_value}"
            );
        }
    }
    println!("ACCEPTANCE 4 PASS — k=2: iterative max-sum, cut-tree cut, and the submodular minimizer agree on 200 instances");
}

#[test]
fn criterion_05_queyranne_exactness() {
    fn exhaustive_min(f: &SetFunctionOracle) -> f64 {
        let n = f.n();
        (1u64..(1 << n) - 1)
            .map(|bits| f.eval(PointSet::from_bits(bits)))
            .fold(f64::INFINITY, f64::min)
    }
    let mut rng = stream(5);
    for trial in 0..50 {
        let n = rng.gen_range(2..=10);
        let s = random_instance(n, &mut rng).unwrap();
        let f = cut_oracle(&s);
        let (_, value) = queyranne_minimize(&f).unwrap();
        let brute = exhaustive_min(&f);
        assert!(
            (value - brute).abs() <= TOL,
            "cut oracle {trial}: {value} vs {brute}"
        );
    }
    for trial in 0..50 {
        let n = rng.gen_range(2..=10);
        let model = random_gaussian(n, &mut rng);
        let f = gaussian_mi_oracle(&model);
        let (_, value) = queyranne_minimize(&f).unwrap();
        let brute = exhaustive_min(&f);
        assert!(
            (value - brute).abs() <= TOL,
            "mi oracle {trial}: {value} vs {brute}"
        );
    }
    println!("ACCEPTANCE 5 PASS — pendant-pair minimizer exact on 50 cut + 50 Gaussian-MI oracles");
}

#[test]
fn criterion_06_submodularity_verdicts() {
    let mut rng = stream(6);
    for n in 2..=7 {
        let s = random_instance(n, &mut rng).unwrap();
        let cut = cut_oracle(&s);
        assert!(
            is_symmetric(&cut).unwrap(),
            "cut oracle asymmetric at n={n}"
        );
        assert!(
            is_submodular(&cut).unwrap(),
            "cut oracle non-submodular at n={n}"
        );
        let model = random_gaussian(n, &mut rng);
        let mi = gaussian_mi_oracle(&model);
        assert!(is_symmetric(&mi).unwrap(), "MI oracle asymmetric at n={n}");
        assert!(
            is_submodular(&mi).unwrap(),
            "MI oracle non-submodular at n={n}"
        );
    }
    let parity = parity_oracle(4);
    let witness = submodularity_violation(&parity).unwrap();
    let (a, b) = witness.expect("parity must fail submodularity");
    let lhs = parity.eval(a) + parity.eval(b);
    let rhs = parity.eval(a.intersection(b)) + parity.eval(a.union(b));
    assert!(lhs < rhs - TOL, "stored witness must re-validate");
    println!(
        "ACCEPTANCE 6 PASS — cut and Gaussian-MI oracles symmetric+submodular for n ≤ 7; parity witness ({a}, {b}) re-validates"
    );
}

/// Rebuilds the grid's function roster for counterexample re-validation.
fn grid_function(name: &str) -> Box<dyn PartitioningFunction> {
    match name {
        "sl" => Box::new(SingleLinkage),
        "maxsum" => Box::new(MaxSum),
        name if name.starts_with("mst-cuts") => Box::new(MstCutsMember::new(
            PartitionPermutation::cyclic_shift(4, 2).unwrap(),
        )),
        name if name.starts_with("mct-cuts") => Box::new(MctCutsMember::new(
            PartitionPermutation::cyclic_shift(4, 2).unwrap(),
        )),
        "constant" => Box::new(ConstantPartitioner),
        other => panic!("unexpected grid function {other}"),
    }
}

fn revalidate_cell(cell: &GridCell) {
    let function = grid_function(&cell.function_name);
    match cell
        .report
        .counterexample
        .as_ref()
        .expect("violated cells store counterexamples")
    {
        Counterexample::Consistency {
            s,
            s_prime,
            k,
            expected,
            actual,
        } => {
            assert_eq!(&function.apply(s, *k).unwrap(), expected);
            assert_eq!(&function.apply(s_prime, *k).unwrap(), actual);
            assert_ne!(expected, actual);
            assert!(is_gamma_transform(s, s_prime, expected).unwrap());
        }
        Counterexample::TreeConsistency {
            s,
            s_prime,
            k,
            expected,
            actual,
        } => {
            assert_eq!(&function.apply(s, *k).unwrap(), expected);
            assert_eq!(&function.apply(s_prime, *k).unwrap(), actual);
            assert_ne!(expected, actual);
            let (lhs, rhs) = match cell.property {
                PropertyName::MstConsistency => (
                    tree_min_kcut(&qcluster::tree::mst(s), *k)
                        .unwrap()
                        .partition,
                    tree_min_kcut(&qcluster::tree::mst(s_prime), *k)
                        .unwrap()
                        .partition,
                ),
                _ => (
                    tree_min_kcut(&gomory_hu_cut_tree(s), *k).unwrap().partition,
                    tree_min_kcut(&gomory_hu_cut_tree(s_prime), *k)
                        .unwrap()
                        .partition,
                ),
            };
            assert_eq!(lhs, rhs, "premise must hold on the stored witness");
        }
        Counterexample::Richness {
            n,
            k,
            target,
            fixed_output,
        } => {
            let witness = qcluster::similarity::richness_witness(target);
            let out = function.apply(&witness, *k).unwrap();
            assert_ne!(&out, target, "structural gap must not be attainable");
            assert_eq!(Some(&out), fixed_output.as_ref());
            assert_eq!((out.n(), out.k()), (*n, *k));
        }
        Counterexample::ScaleInvariance { .. } => {
            panic!("scale-invariance is not a grid column")
        }
    }
}

#[test]
fn criterion_07_table1_grid_reproduction() {
    let grid = table1_grid(SEED, 1000, 200).unwrap();
    assert_eq!(grid.total_cells(), 20);
    for cell in &grid.cells {
        assert!(
            cell.matches(),
            "cell ({}, {}) expected {:?}, got {:?}",
            cell.function_name,
            cell.property.as_str(),
            cell.expected,
            cell.report.verdict
        );
        if cell.report.verdict == Verdict::Violated {
            revalidate_cell(cell);
        }
    }
    let violated = grid
        .cells
        .iter()
        .filter(|c| c.report.verdict == Verdict::Violated)
        .count();
    println!(
        "ACCEPTANCE 7 PASS — verdict grid matches the expected pattern 20/20 ({violated} violated cells re-validated)"
    );
}

#[test]
fn criterion_08_swap_lemma_preserves_outputs() {
    let functions: [&dyn PartitioningFunction; 2] = [&SingleLinkage, &MaxSum];
    let mut rng = stream(8);
    let mut tested = 0u32;
    let mut skipped = 0u32;
    while tested < 200 {
        let n = rng.gen_range(4..=9);
        let k = rng.gen_range(1..=n);
        let s = random_instance(n, &mut rng).unwrap();
        let function = functions[(tested % 2) as usize];
        let gamma = function.apply(&s, k).unwrap();
        let order = s.canonical_order();
        let candidates: Vec<usize> = (0..order.len() - 1)
            .filter(|&p| {
                let ((ai, aj), _) = order.edges()[p];
                let ((bi, bj), _) = order.edges()[p + 1];
                gamma.classify_edge(ai, aj).unwrap() == gamma.classify_edge(bi, bj).unwrap()
            })
            .collect();
        if candidates.is_empty() {
            skipped += 1;
            continue;
        }
        let p = candidates[rng.gen_range(0..candidates.len())];
        let s_prime = swap_lemma_apply(&s, p, &gamma).unwrap();
        assert!(is_gamma_transform(&s, &s_prime, &gamma).unwrap());
        assert_eq!(
            function.apply(&s_prime, k).unwrap(),
            gamma,
            "swap changed {} at n={n} k={k} p={p}",
            function.name()
        );
        tested += 1;
    }
    println!(
        "ACCEPTANCE 8 PASS — adjacent same-class swaps preserved single-linkage and max-sum on {tested} triples ({skipped} trials lacked a same-class adjacency)"
    );
}

#[test]
fn criterion_09_uniqueness_chains() {
    let mut rng = stream(9);
    for trial in 0..100 {
        let n = rng.gen_range(4..=8);
        let k = 2 + (trial % 2);
        let s = random_instance(n, &mut rng).unwrap();

        let mct =
            uniqueness_chain(&qcluster::cluster::MaxSumApprox, &s, k, ChainMode::Mct).unwrap();
        assert!(
            mct.reference_attained
                && mct.outputs_preserved
                && mct.final_kcut_matches
                && mct.transforms_valid.iter().all(|&b| b),
            "cut-tree chain failed at n={n} k={k} trial={trial}: {:?}",
            mct.issues
        );

        let mst = uniqueness_chain(&SingleLinkage, &s, k, ChainMode::Mst).unwrap();
        assert!(
            mst.reference_attained
                && mst.outputs_preserved
                && mst.final_kcut_matches
                && mst.transforms_valid.iter().all(|&b| b),
            "spanning-tree chain failed at n={n} k={k} trial={trial}: {:?}",
            mst.issues
        );
    }
    println!(
        "ACCEPTANCE 9 PASS — transformation chains preserved outputs and final tree k-cuts on 100 instances × 2 modes"
    );
}

#[test]
fn criterion_10_axiom_suites() {
    for (name, function) in [
        ("sl", &SingleLinkage as &dyn PartitioningFunction),
        ("maxsum", &MaxSum as &dyn PartitioningFunction),
    ] {
        let si = check_scale_invariance(function, 1000, SEED).unwrap();
        assert_eq!(
            si.verdict,
            Verdict::SatisfiedOnTrials,
            "{name} scale-invariance"
        );
        assert_eq!(si.trials, 1000);

        let consistency = check_consistency(function, 1000, SEED).unwrap();
        assert_eq!(
            consistency.verdict,
            Verdict::SatisfiedOnTrials,
            "{name} consistency"
        );
        assert_eq!(consistency.trials, 1000);

        for k in [2usize, 3] {
            let richness = check_k_richness(function, 5, k, SEED).unwrap();
            assert_eq!(
                richness.verdict,
                Verdict::SatisfiedOnTrials,
                "{name} richness at (5,{k})"
            );
        }
    }
    println!(
        "ACCEPTANCE 10 PASS — single-linkage and max-sum: scale-invariance and consistency clean over 1000 trials each; all (5,2) and (5,3) partitionings attained"
    );
}

#[test]
fn criterion_11_cli_determinism() {
    use std::process::Command;

    let dir = tempfile::tempdir().unwrap();
    let t3 = dir.path().join("t3.edges");
    std::fs::write(&t3, "1 2 3\n1 3 2\n2 3 1\n").unwrap();
    let cov = dir.path().join("cov.csv");
    std::fs::write(&cov, "1.0,0.6,0.1\n0.6,1.0,0.1\n0.1,0.1,1.0\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_qcluster");

    let runs: Vec<Vec<String>> = vec![
        vec![
            "cluster",
            "--algo",
            "sl",
            "--k",
            "2",
            "--input",
            t3.to_str().unwrap(),
        ],
        vec![
            "cluster",
            "--algo",
            "maxsum",
            "--k",
            "2",
            "--input",
            t3.to_str().unwrap(),
        ],
        vec![
            "cluster",
            "--algo",
            "qcluster-mdl",
            "--k",
            "2",
            "--input",
            cov.to_str().unwrap(),
            "--format",
            "matrix",
        ],
        vec!["tree", "--kind", "mct", "--input", t3.to_str().unwrap()],
        vec![
            "oracle",
            "--which",
            "queyranne",
            "--input",
            t3.to_str().unwrap(),
        ],
        vec![
            "axioms",
            "--function",
            "constant",
            "--trials",
            "40",
            "--seed",
            "24069",
        ],
    ]
    .into_iter()
    .map(|args| args.into_iter().map(String::from).collect())
    .collect();

    let start = Instant::now();
    for args in &runs {
        let first = Command::new(bin).args(args).output().unwrap();
        let second = Command::new(bin).args(args).output().unwrap();
        assert_eq!(
            first.stdout, second.stdout,
            "stdout differs between runs for {args:?}"
        );
        assert_eq!(first.status.code(), second.status.code());
        assert!(!first.stdout.is_empty());
    }
    println!(
        "ACCEPTANCE 11 PASS — repeated CLI runs byte-identical across {} commands ({:.2} s)",
        runs.len(),
        start.elapsed().as_secs_f64()
    );
}
