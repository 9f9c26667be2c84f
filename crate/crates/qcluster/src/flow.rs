//! Minimum cuts on complete weighted graphs: a deterministic
//! shortest-augmenting-path max-flow, the global minimum cut, and exhaustive
//! cut oracles for verification.

use crate::error::{Error, Result};
use crate::similarity::{visit_partitionings, Partitioning, SimilarityInstance};

/// A cut of an instance: the crossing weight and the side containing the
/// designated source (for s-t cuts) or point 1 (for global cuts).
#[derive(Clone, Debug, PartialEq)]
pub struct CutResult {
    pub value: f64,
    /// Ascending point ids; non-empty and proper.
    pub side: Vec<usize>,
}

/// Dense symmetric capacity matrix on vertices `0..n`. Used for flows on
/// instances and on contracted graphs during Gomory-Hu construction.
#[derive(Clone, Debug)]
pub(crate) struct DenseGraph {
    pub n: usize,
    pub cap: Vec<Vec<f64>>,
}

impl DenseGraph {
    pub fn new(n: usize) -> Self {
        DenseGraph {
            n,
            cap: vec![vec![0.0; n]; n],
        }
    }

    pub fn from_instance(s: &SimilarityInstance) -> Self {
        let n = s.n();
        let mut g = DenseGraph::new(n);
        for ((i, j), w) in s.pairs() {
            g.cap[i - 1][j - 1] = w;
            g.cap[j - 1][i - 1] = w;
        }
        g
    }

    /// Maximum flow between `a` and `b` by shortest augmenting paths, with
    /// neighbors scanned in ascending vertex order. Returns the flow value
    /// and the set of vertices reachable from `a` in the final residual
    /// graph (a minimum cut side).
    pub fn max_flow_min_cut(&self, a: usize, b: usize) -> (f64, Vec<bool>) {
        let n = self.n;
        let mut residual = self.cap.clone();
        let mut flow = 0.0;
        let mut parent: Vec<usize> = vec![usize::MAX; n];
        loop {
            parent.fill(usize::MAX);
            parent[a] = a;
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(a);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if parent[v] == usize::MAX && residual[u][v] > 0.0 {
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if parent[b] == usize::MAX {
                let reachable = parent.iter().map(|&p| p != usize::MAX).collect();
                return (flow, reachable);
            }
            let mut bottleneck = f64::INFINITY;
            let mut v = b;
            while v != a {
                let u = parent[v];
                bottleneck = bottleneck.min(residual[u][v]);
                v = u;
            }
            let mut v = b;
            while v != a {
                let u = parent[v];
                residual[u][v] -= bottleneck;
                residual[v][u] += bottleneck;
                v = u;
            }
            flow += bottleneck;
        }
    }
}

fn side_from_mask(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(idx, &inside)| inside.then_some(idx + 1))
        .collect()
}

/// Crossing weight of the bipartition (side, complement) in `s`.
fn cut_weight_of_side(s: &SimilarityInstance, side: &[usize]) -> f64 {
    let mut inside = vec![false; s.n() + 1];
    for &p in side {
        inside[p] = true;
    }
    s.pairs()
        .filter(|((i, j), _)| inside[*i] != inside[*j])
        .fold(0.0, |acc, (_, w)| acc + w)
}

/// Total weight crossing between different blocks of `gamma`.
pub fn partition_cut_weight(s: &SimilarityInstance, gamma: &Partitioning) -> f64 {
    s.pairs()
        .filter(|((i, j), _)| {
            !gamma
                .same_block(*i, *j)
                .expect("partitioning covers the points")
        })
        .fold(0.0, |acc, (_, w)| acc + w)
}

/// A minimum cut separating `a` and `b`, computed by max-flow. The side
/// contains `a`; the value is recomputed from the side.
pub fn st_min_cut(s: &SimilarityInstance, a: usize, b: usize) -> Result<CutResult> {
    let n = s.n();
    if a == b {
        return Err(Error::InvalidPair(a, b));
    }
    for p in [a, b] {
        if p < 1 || p > n {
            return Err(Error::InvalidPoint { point: p, n });
        }
    }
    let g = DenseGraph::from_instance(s);
    let (_, mask) = g.max_flow_min_cut(a - 1, b - 1);
    let side = side_from_mask(&mask);
    let value = cut_weight_of_side(s, &side);
    Ok(CutResult { value, side })
}

/// Maximum flow value between `a` and `b` (equal to the min-cut value).
pub fn st_max_flow_value(s: &SimilarityInstance, a: usize, b: usize) -> Result<f64> {
    let n = s.n();
    if a == b {
        return Err(Error::InvalidPair(a, b));
    }
    for p in [a, b] {
        if p < 1 || p > n {
            return Err(Error::InvalidPoint { point: p, n });
        }
    }
    let g = DenseGraph::from_instance(s);
    Ok(g.max_flow_min_cut(a - 1, b - 1).0)
}

/// The global minimum cut: the cheapest over st_min_cut(s, 1, t) for
/// t in 2..=n, first minimum kept on ties. The side contains point 1.
pub fn global_min_cut(s: &SimilarityInstance) -> CutResult {
    let mut best: Option<CutResult> = None;
    for t in 2..=s.n() {
        let cut = st_min_cut(s, 1, t).expect("valid pair");
        if best.as_ref().is_none_or(|b| cut.value < b.value) {
            best = Some(cut);
        }
    }
    best.expect("n >= 2")
}

/// Exhaustive minimum a-b cut over all 2^(n−2) separating subsets.
/// Independent of the max-flow route; n ≤ 12.
pub fn brute_force_st_min_cut(s: &SimilarityInstance, a: usize, b: usize) -> Result<CutResult> {
    let n = s.n();
    if n > 12 {
        return Err(Error::OracleSize { n, limit: 12 });
    }
    if a == b {
        return Err(Error::InvalidPair(a, b));
    }
    for p in [a, b] {
        if p < 1 || p > n {
            return Err(Error::InvalidPoint { point: p, n });
        }
    }
    let free: Vec<usize> = (1..=n).filter(|&p| p != a && p != b).collect();
    let mut best: Option<CutResult> = None;
    for mask in 0u32..(1 << free.len()) {
        let mut side = vec![a];
        for (bit, &p) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                side.push(p);
            }
        }
        side.sort_unstable();
        let value = cut_weight_of_side(s, &side);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(CutResult { value, side });
        }
    }
    Ok(best.expect("at least one separating subset"))
}

/// Exhaustive minimum k-cut: minimizes the crossing weight over every
/// k-partitioning, ties broken by canonical enumeration order. n ≤ 12.
pub fn brute_force_min_kcut(s: &SimilarityInstance, k: usize) -> Result<(f64, Partitioning)> {
    let n = s.n();
    if n > 12 {
        return Err(Error::OracleSize { n, limit: 12 });
    }
    let mut best: Option<(f64, Partitioning)> = None;
    visit_partitionings(n, k, |p| {
        let value = partition_cut_weight(s, p);
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, p.clone()));
        }
    })?;
    Ok(best.expect("at least one partitioning"))
}
