//! Tree constructions: the canonical maximum spanning tree, the canonical
//! Gomory-Hu minimum-cut tree, its generalization to arbitrary symmetric
//! set-function oracles, and minimum k-cuts of trees.

use crate::error::{Error, Result};
use crate::flow::{brute_force_st_min_cut, DenseGraph};
use crate::similarity::{Pair, Partitioning, SimilarityInstance};
use crate::submodular::{PointSet, SetFunctionOracle};

/// Union-find over `0..n` with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    count: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
            count: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of x and y; returns false if already joined.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (big, small) = if self.size[rx] >= self.size[ry] {
            (rx, ry)
        } else {
            (ry, rx)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.count -= 1;
        true
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Ascending weight; ties fall to the descending pair order. This is the
/// exact reverse of the canonical instance order, which keeps "cut the k−1
/// lightest tree edges" aligned with the agglomerative merge scan even when
/// weights tie.
fn canonical_tree_cmp(a: &(Pair, f64), b: &(Pair, f64)) -> std::cmp::Ordering {
    a.1.partial_cmp(&b.1)
        .expect("finite weights")
        .then(b.0.cmp(&a.0))
}

/// A spanning tree on `1..=n` with real edge weights, stored in canonical
/// order (ascending weight, descending lexicographic tie-break).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedTree {
    n: usize,
    edges: Vec<(Pair, f64)>,
}

impl WeightedTree {
    pub fn new(n: usize, edges: Vec<(Pair, f64)>) -> Result<Self> {
        if edges.len() + 1 != n {
            return Err(Error::InvalidPartitioning(format!(
                "a tree on {n} nodes needs {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut sets = DisjointSets::new(n);
        let mut canonical = Vec::with_capacity(edges.len());
        for ((i, j), w) in edges {
            if i == j || i < 1 || j > n || i > j {
                return Err(Error::InvalidPair(i, j));
            }
            if !w.is_finite() {
                return Err(Error::InvalidWeight { i, j, w });
            }
            if !sets.union(i - 1, j - 1) {
                return Err(Error::InvalidPartitioning(format!(
                    "edge ({i}, {j}) closes a cycle"
                )));
            }
            canonical.push(((i, j), w));
        }
        canonical.sort_by(canonical_tree_cmp);
        Ok(WeightedTree {
            n,
            edges: canonical,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in canonical order: ascending weight, lexicographic ties.
    pub fn edges(&self) -> &[(Pair, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|(_, w)| w).sum()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        // (neighbor, edge index)
        let mut adj = vec![Vec::new(); self.n + 1];
        for (idx, ((i, j), _)) in self.edges.iter().enumerate() {
            adj[*i].push((*j, idx));
            adj[*j].push((*i, idx));
        }
        adj
    }

    /// Edge indices along the unique path from u to v.
    fn path_edges(&self, u: usize, v: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.n + 1];
        let mut stack = vec![u];
        let mut seen = vec![false; self.n + 1];
        seen[u] = true;
        while let Some(x) = stack.pop() {
            if x == v {
                break;
            }
            for &(y, eidx) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, eidx));
                    stack.push(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = v;
        while cur != u {
            let (p, eidx) = prev[cur].expect("tree is connected");
            path.push(eidx);
            cur = p;
        }
        path
    }

    /// The minimum-weight edge on the unique u-v path; ties resolved by the
    /// canonical edge order.
    pub fn path_min_edge(&self, u: usize, v: usize) -> Result<(Pair, f64)> {
        for p in [u, v] {
            if p < 1 || p > self.n {
                return Err(Error::InvalidPoint {
                    point: p,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::InvalidPair(u, v));
        }
        let best = self
            .path_edges(u, v)
            .into_iter()
            .min()
            .expect("path is non-empty");
        Ok(self.edges[best])
    }

    /// Connected components after deleting the given edges (by index).
    fn components_without(&self, removed: &[usize]) -> Partitioning {
        let mut sets = DisjointSets::new(self.n);
        for (idx, ((i, j), _)) in self.edges.iter().enumerate() {
            if !removed.contains(&idx) {
                sets.union(i - 1, j - 1);
            }
        }
        let labels: Vec<usize> = (0..self.n).map(|p| sets.find(p)).collect();
        Partitioning::from_labels(&labels)
    }
}

/// The result of cutting the k−1 canonically-lightest edges of a tree.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeKCut {
    pub removed_edges: Vec<(Pair, f64)>,
    pub partition: Partitioning,
}

/// Removes the k−1 canonically-lightest edges; the partition is the
/// component structure of the remaining forest.
pub fn tree_min_kcut(tree: &WeightedTree, k: usize) -> Result<TreeKCut> {
    let n = tree.n();
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, min: 1, max: n });
    }
    let removed_idx: Vec<usize> = (0..k - 1).collect();
    let partition = tree.components_without(&removed_idx);
    Ok(TreeKCut {
        removed_edges: tree.edges[..k - 1].to_vec(),
        partition,
    })
}

/// The canonical maximum spanning tree: Kruskal over the canonical edge
/// order (descending weight, lexicographic ties), which makes the result
/// unique for a given instance.
pub fn mst(s: &SimilarityInstance) -> WeightedTree {
    let n = s.n();
    let mut sets = DisjointSets::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for ((i, j), w) in s.canonical_order().edges() {
        if sets.union(i - 1, j - 1) {
            edges.push(((*i, *j), *w));
            if edges.len() == n - 1 {
                break;
            }
        }
    }
    WeightedTree::new(n, edges).expect("Kruskal yields a spanning tree")
}

/// One supernode of the Gomory-Hu iteration: the points it holds, plus the
/// tree edges to its neighbors.
struct Supernode {
    members: Vec<usize>,      // ascending point ids
    edges: Vec<(usize, f64)>, // (neighbor supernode index, weight)
}

/// Contracted view used for one Gomory-Hu splitting step: each element is
/// either a single member point of the split supernode or a whole neighbor
/// subtree fused into one vertex.
struct ContractedElement {
    points: Vec<usize>,
    /// Neighbor supernode this element stands for, if it is a fused subtree.
    subtree_root: Option<usize>,
}

fn gomory_hu_generic(
    n: usize,
    mut min_separating_cut: impl FnMut(&[ContractedElement], usize, usize) -> (f64, Vec<bool>),
) -> WeightedTree {
    let mut nodes: Vec<Supernode> = vec![Supernode {
        members: (1..=n).collect(),
        edges: Vec::new(),
    }];

    loop {
        // Split the supernode whose two smallest members form the
        // lexicographically smallest unseparated pair.
        let split = nodes
            .iter()
            .enumerate()
            .filter(|(_, sn)| sn.members.len() >= 2)
            .min_by_key(|(_, sn)| (sn.members[0], sn.members[1]))
            .map(|(idx, _)| idx);
        let Some(x) = split else { break };
        let a = nodes[x].members[0];
        let b = nodes[x].members[1];

        // Gather the subtree hanging off each neighbor of x (components of
        // the supernode tree with x removed).
        let neighbor_roots: Vec<usize> = nodes[x].edges.iter().map(|&(to, _)| to).collect();
        let mut subtree_points: Vec<Vec<usize>> = Vec::with_capacity(neighbor_roots.len());
        for &root in &neighbor_roots {
            let mut pts = Vec::new();
            let mut stack = vec![root];
            let mut seen = vec![false; nodes.len()];
            seen[x] = true;
            seen[root] = true;
            while let Some(cur) = stack.pop() {
                pts.extend_from_slice(&nodes[cur].members);
                for &(to, _) in &nodes[cur].edges {
                    if !seen[to] {
                        seen[to] = true;
                        stack.push(to);
                    }
                }
            }
            pts.sort_unstable();
            subtree_points.push(pts);
        }

        // Contracted elements, ordered by smallest contained point so the
        // flow computation scans vertices deterministically.
        let mut elements: Vec<ContractedElement> = nodes[x]
            .members
            .iter()
            .map(|&m| ContractedElement {
                points: vec![m],
                subtree_root: None,
            })
            .collect();
        for (root, pts) in neighbor_roots.iter().zip(subtree_points) {
            elements.push(ContractedElement {
                points: pts,
                subtree_root: Some(*root),
            });
        }
        elements.sort_by_key(|e| e.points[0]);
        let ea = elements
            .iter()
            .position(|e| e.points == [a])
            .expect("a is a member element");
        let eb = elements
            .iter()
            .position(|e| e.points == [b])
            .expect("b is a member element");

        let (value, a_side) = min_separating_cut(&elements, ea, eb);

        // Split x's members by side.
        let mut members_a = Vec::new();
        let mut members_b = Vec::new();
        for (idx, e) in elements.iter().enumerate() {
            if e.subtree_root.is_none() {
                if a_side[idx] {
                    members_a.push(e.points[0]);
                } else {
                    members_b.push(e.points[0]);
                }
            }
        }

        // New supernode for b's side; x keeps a's side.
        let y = nodes.len();
        let old_edges = std::mem::take(&mut nodes[x].edges);
        nodes[x].members = members_a;
        nodes.push(Supernode {
            members: members_b,
            edges: Vec::new(),
        });

        // Reattach each neighbor subtree to the side its fused vertex fell on.
        for (to, w) in old_edges {
            let eidx = elements
                .iter()
                .position(|e| e.subtree_root == Some(to))
                .expect("neighbor was contracted");
            let new_end = if a_side[eidx] { x } else { y };
            nodes[new_end].edges.push((to, w));
            let back = nodes[to]
                .edges
                .iter_mut()
                .find(|(t, _)| *t == x)
                .expect("tree edge is symmetric");
            back.0 = new_end;
        }
        nodes[x].edges.push((y, value));
        nodes[y].edges.push((x, value));
    }

    // All supernodes are singletons; translate to a tree on point ids.
    let mut edges = Vec::with_capacity(n - 1);
    for (idx, sn) in nodes.iter().enumerate() {
        let u = sn.members[0];
        for &(to, w) in &sn.edges {
            if to > idx {
                let v = nodes[to].members[0];
                edges.push(((u.min(v), u.max(v)), w));
            }
        }
    }
    WeightedTree::new(n, edges).expect("Gomory-Hu yields a spanning tree")
}

/// The canonical Gomory-Hu minimum-cut tree of the instance's cut function.
/// Pairwise path-minima equal minimum cut values; [`verify_mct`] is the
/// contract for the construction.
pub fn gomory_hu_cut_tree(s: &SimilarityInstance) -> WeightedTree {
    gomory_hu_generic(s.n(), |elements, ea, eb| {
        let m = elements.len();
        let mut g = DenseGraph::new(m);
        for u in 0..m {
            for v in (u + 1)..m {
                let w: f64 = elements[u]
                    .points
                    .iter()
                    .flat_map(|&p| elements[v].points.iter().map(move |&q| s.weight(p, q)))
                    .sum();
                g.cap[u][v] = w;
                g.cap[v][u] = w;
            }
        }
        let (flow, side) = g.max_flow_min_cut(ea, eb);
        (flow, side)
    })
}

/// Gomory-Hu tree for an arbitrary symmetric set-function oracle. Each
/// splitting step minimizes f by exhaustive search over the contracted
/// elements (subsets keeping every fused subtree whole). n ≤ 16.
pub fn gomory_hu_general(f: &SetFunctionOracle) -> Result<WeightedTree> {
    let n = f.n();
    if n > 16 {
        return Err(Error::OracleSize { n, limit: 16 });
    }
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    Ok(gomory_hu_generic(n, |elements, ea, eb| {
        let m = elements.len();
        let free: Vec<usize> = (0..m).filter(|&e| e != ea && e != eb).collect();
        let mut best: Option<(f64, u32)> = None;
        for mask in 0u32..(1 << free.len()) {
            let mut pts = PointSet::empty();
            for &p in &elements[ea].points {
                pts.insert(p);
            }
            for (bit, &e) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    for &p in &elements[e].points {
                        pts.insert(p);
                    }
                }
            }
            let value = f.eval(pts);
            if best.is_none_or(|(v, _)| value < v) {
                best = Some((value, mask));
            }
        }
        let (value, mask) = best.expect("at least the empty selection");
        let mut side = vec![false; m];
        side[ea] = true;
        for (bit, &e) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                side[e] = true;
            }
        }
        (value, side)
    }))
}

/// Checks the minimum-cut-tree contract against the exhaustive cut oracle:
/// for every pair, the minimum edge on the tree path must carry the
/// brute-force minimum cut value, and removing it must induce a cut of that
/// same value. n ≤ 12.
pub fn verify_mct(tree: &WeightedTree, s: &SimilarityInstance) -> Result<bool> {
    let n = s.n();
    if tree.n() != n {
        return Err(Error::ShapeMismatch(tree.n(), n));
    }
    if n > 12 {
        return Err(Error::OracleSize { n, limit: 12 });
    }
    for u in 1..=n {
        for v in (u + 1)..=n {
            let oracle = brute_force_st_min_cut(s, u, v)?;
            let (edge, w) = tree.path_min_edge(u, v)?;
            if (w - oracle.value).abs() > 1e-9 {
                return Ok(false);
            }
            let edge_idx = tree
                .edges
                .iter()
                .position(|(p, _)| *p == edge)
                .expect("edge comes from the tree");
            let induced = tree.components_without(&[edge_idx]);
            let cut_value = crate::flow::partition_cut_weight(s, &induced);
            if (cut_value - oracle.value).abs() > 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::{random_instance, trial_stream, DEFAULT_MASTER_SEED};
    use crate::submodular::cut_oracle;

    fn t3() -> SimilarityInstance {
        SimilarityInstance::from_edges(3, &[(1, 2, 3.0), (1, 3, 2.0), (2, 3, 1.0)]).unwrap()
    }

    fn p4() -> SimilarityInstance {
        SimilarityInstance::from_edges(
            4,
            &[
                (1, 2, 10.0),
                (2, 3, 9.0),
                (3, 4, 8.0),
                (1, 3, 1.0),
                (1, 4, 1.0),
                (2, 4, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn mst_small_examples() {
        let tree = mst(&t3());
        assert_eq!(tree.edges(), &[((1, 3), 2.0), ((1, 2), 3.0)]);

        let tree = mst(&p4());
        assert_eq!(
            tree.edges(),
            &[((3, 4), 8.0), ((2, 3), 9.0), ((1, 2), 10.0)]
        );
    }

    /// Independent oracle: enumerate all spanning trees as (n−1)-subsets of
    /// edges and keep the acyclic ones.
    fn max_spanning_weight_exhaustive(s: &SimilarityInstance) -> f64 {
        let edges: Vec<_> = s.pairs().collect();
        let n = s.n();
        let mut best = f64::NEG_INFINITY;
        let m = edges.len();
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != n - 1 {
                continue;
            }
            let mut sets = DisjointSets::new(n);
            let mut ok = true;
            let mut total = 0.0;
            for (idx, ((i, j), w)) in edges.iter().enumerate() {
                if mask >> idx & 1 == 1 {
                    if !sets.union(i - 1, j - 1) {
                        ok = false;
                        break;
                    }
                    total += w;
                }
            }
            if ok && sets.count() == 1 {
                best = best.max(total);
            }
        }
        best
    }

    #[test]
    fn mst_total_weight_is_maximal() {
        assert_eq!(mst(&t3()).total_weight(), 5.0);
        let mut rng = trial_stream(DEFAULT_MASTER_SEED, 20);
        for n in 2..=6 {
            for _ in 0..10 {
                let s = random_instance(n, &mut rng).unwrap();
                let kruskal = mst(&s).total_weight();
                let exhaustive = max_spanning_weight_exhaustive(&s);
                assert!(
                    (kruskal - exhaustive).abs() < 1e-9,
                    "n={n}: {kruskal} vs {exhaustive}"
                );
            }
        }
    }

    #[test]
    fn gomory_hu_triangle_path_minima() {
        let tree = gomory_hu_cut_tree(&t3());
        let expected = [((1, 2), 4.0), ((1, 3), 3.0), ((2, 3), 3.0)];
        for ((u, v), want) in expected {
            let (_, w) = tree.path_min_edge(u, v).unwrap();
            assert!((w - want).abs() < 1e-9, "pair ({u},{v}): {w} vs {want}");
        }
        assert!(verify_mct(&tree, &t3()).unwrap());
    }

    #[test]
    fn gomory_hu_passes_verification_on_random_instances() {
        let mut rng = trial_stream(DEFAULT_MASTER_SEED, 21);
        for trial in 0..40 {
            let n = 2 + trial % 8;
            let s = random_instance(n, &mut rng).unwrap();
            let tree = gomory_hu_cut_tree(&s);
            assert!(verify_mct(&tree, &s).unwrap(), "n={n} trial={trial}");
        }
    }

    #[test]
    fn gomory_hu_lightest_edge_is_global_min_cut() {
        let mut rng = trial_stream(DEFAULT_MASTER_SEED, 22);
        for trial in 0..100 {
            let n = 2 + trial % 8;
            let s = random_instance(n, &mut rng).unwrap();
            let tree = gomory_hu_cut_tree(&s);
            let lightest = tree.edges()[0].1;
            let global = crate::flow::global_min_cut(&s).value;
            assert!((lightest - global).abs() < 1e-9);
        }
    }

    #[test]
    fn gomory_hu_scales_linearly() {
        let mut rng = trial_stream(DEFAULT_MASTER_SEED, 23);
        let s = random_instance(7, &mut rng).unwrap();
        let base = gomory_hu_cut_tree(&s);
        let scaled = gomory_hu_cut_tree(&s.scale(4.0).unwrap());
        let base_pairs: Vec<_> = base.edges().iter().map(|(p, _)| *p).collect();
        let scaled_pairs: Vec<_> = scaled.edges().iter().map(|(p, _)| *p).collect();
        assert_eq!(base_pairs, scaled_pairs);
        for (a, b) in base.edges().iter().zip(scaled.edges()) {
            assert!((b.1 - 4.0 * a.1).abs() < 1e-9);
        }
    }

    #[test]
    fn mst_is_not_a_min_cut_tree() {
        // Path-min of (1,2) in mst(T3) is 2, but the min 1-2 cut is 4.
        assert!(!verify_mct(&mst(&t3()), &t3()).unwrap());
    }

    #[test]
    fn arbitrary_heavy_tree_fails_verification() {
        let mut rng = trial_stream(DEFAULT_MASTER_SEED, 24);
        for _ in 0..10 {
            let s = random_instance(6, &mut rng).unwrap();
            let star = WeightedTree::new(6, (2..=6).map(|v| ((1, v), 1000.0 + v as f64)).collect())
                .unwrap();
            assert!(!verify_mct(&star, &s).unwrap());
        }
    }

    #[test]
    fn general_tree_matches_cut_tree_path_minima() {
        let mut rng = trial_stream(DEFAULT_MASTER_SEED, 25);
        for trial in 0..20 {
            let n = 2 + trial % 7;
            let s = random_instance(n, &mut rng).unwrap();
            let by_flow = gomory_hu_cut_tree(&s);
            let by_oracle = gomory_hu_general(&cut_oracle(&s)).unwrap();
            for u in 1..=n {
                for v in (u + 1)..=n {
                    let (_, w1) = by_flow.path_min_edge(u, v).unwrap();
                    let (_, w2) = by_oracle.path_min_edge(u, v).unwrap();
                    assert!((w1 - w2).abs() < 1e-9, "n={n} pair ({u},{v})");
                }
            }
        }
    }

    #[test]
    fn general_tree_of_independent_gaussian_has_zero_minima() {
        let model = crate::submodular::GaussianModel::identity(5).unwrap();
        let tree = gomory_hu_general(&crate::submodular::gaussian_mi_oracle(&model)).unwrap();
        for u in 1..=5 {
            for v in (u + 1)..=5 {
                let (_, w) = tree.path_min_edge(u, v).unwrap();
                assert!(w.abs() < 1e-9, "pair ({u},{v}) has nonzero minimum {w}");
            }
        }
    }

    #[test]
    fn general_tree_rejects_oversized_ground_sets() {
        let f = crate::submodular::SetFunctionOracle::new(17, |_| 0.0);
        assert!(matches!(
            gomory_hu_general(&f),
            Err(Error::OracleSize { .. })
        ));
    }

    #[test]
    fn tree_min_kcut_examples() {
        let tree = mst(&t3());
        let cut = tree_min_kcut(&tree, 2).unwrap();
        assert_eq!(cut.removed_edges, vec![((1, 3), 2.0)]);
        assert_eq!(cut.partition.blocks(), &[vec![1, 2], vec![3]]);

        let whole = tree_min_kcut(&tree, 1).unwrap();
        assert!(whole.removed_edges.is_empty());
        assert_eq!(whole.partition.k(), 1);

        let shattered = tree_min_kcut(&tree, 3).unwrap();
        assert_eq!(shattered.partition, Partitioning::singletons(3));

        assert!(matches!(
            tree_min_kcut(&tree, 4),
            Err(Error::InvalidK { .. })
        ));
        assert!(matches!(
            tree_min_kcut(&tree, 0),
            Err(Error::InvalidK { .. })
        ));
    }

    #[test]
    fn lightest_edges_give_minimum_tree_kcut() {
        // Compare against exhaustive minimization of the tree's own cut
        // weight over all k-partitionings (absent pairs count zero).
        let mut rng = trial_stream(DEFAULT_MASTER_SEED, 26);
        for trial in 0..20 {
            let n = 3 + trial % 6;
            let s = random_instance(n, &mut rng).unwrap();
            let tree = mst(&s);
            for k in 1..=n {
                let fast = tree_min_kcut(&tree, k).unwrap();
                let fast_value: f64 = fast.removed_edges.iter().map(|(_, w)| w).sum();
                let mut best = f64::INFINITY;
                crate::similarity::visit_partitionings(n, k, |p| {
                    let crossing: f64 = tree
                        .edges()
                        .iter()
                        .filter(|((i, j), _)| !p.same_block(*i, *j).unwrap())
                        .map(|(_, w)| w)
                        .sum();
                    best = best.min(crossing);
                })
                .unwrap();
                assert!(
                    (fast_value - best).abs() < 1e-9,
                    "n={n} k={k}: {fast_value} vs {best}"
                );
            }
        }
    }
}
