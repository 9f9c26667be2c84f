//! Symmetric set-function oracles (graph cuts, Gaussian mutual information),
//! exhaustive symmetry/submodularity verification, and Queyranne's exact
//! minimizer over non-trivial subsets.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::similarity::SimilarityInstance;

/// A subset of points `1..=n`, packed into a bitmask (n ≤ 64 structurally;
/// the oracles in this crate stay at n ≤ 16).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    bits: u64,
}

impl PointSet {
    pub fn empty() -> Self {
        PointSet { bits: 0 }
    }

    pub fn full(n: usize) -> Self {
        PointSet {
            bits: if n == 64 { u64::MAX } else { (1 << n) - 1 },
        }
    }

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> Self {
        let mut s = PointSet::empty();
        for p in points {
            s.insert(p);
        }
        s
    }

    pub fn from_bits(bits: u64) -> Self {
        PointSet { bits }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn insert(&mut self, p: usize) {
        debug_assert!(p >= 1);
        self.bits |= 1 << (p - 1);
    }

    pub fn contains(&self, p: usize) -> bool {
        p >= 1 && self.bits >> (p - 1) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn complement(&self, n: usize) -> Self {
        PointSet {
            bits: !self.bits & PointSet::full(n).bits,
        }
    }

    pub fn union(&self, other: PointSet) -> Self {
        PointSet {
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: PointSet) -> Self {
        PointSet {
            bits: self.bits & other.bits,
        }
    }

    /// Member points in ascending order.
    pub fn points(&self) -> Vec<usize> {
        (1..=64).filter(|&p| self.contains(p)).collect()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, p) in self.points().iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// A set function on subsets of `1..=n`, evaluated through a shared pure
/// closure, so oracles can be cloned and evaluated concurrently.
#[derive(Clone)]
pub struct SetFunctionOracle {
    n: usize,
    eval: Arc<dyn Fn(PointSet) -> f64 + Send + Sync>,
}

impl fmt::Debug for SetFunctionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetFunctionOracle")
            .field("n", &self.n)
            .finish()
    }
}

impl SetFunctionOracle {
    pub fn new(n: usize, eval: impl Fn(PointSet) -> f64 + Send + Sync + 'static) -> Self {
        SetFunctionOracle {
            n,
            eval: Arc::new(eval),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, a: PointSet) -> f64 {
        (self.eval)(a)
    }
}

/// The cut function of an instance: eval(A) is the weight crossing
/// (A, complement). Symmetric and submodular.
pub fn cut_oracle(s: &SimilarityInstance) -> SetFunctionOracle {
    let s = s.clone();
    SetFunctionOracle::new(s.n(), move |a| {
        s.pairs()
            .filter(|((i, j), _)| a.contains(*i) != a.contains(*j))
            .fold(0.0, |acc, (_, w)| acc + w)
    })
}

/// Parity of the subset size: symmetric for even n but not submodular.
/// Serves as the standard negative control for the submodularity check.
pub fn parity_oracle(n: usize) -> SetFunctionOracle {
    SetFunctionOracle::new(n, |a| (a.len() % 2) as f64)
}

/// A zero-mean Gaussian model given by a symmetric positive-definite
/// covariance matrix.
#[derive(Clone, Debug)]
pub struct GaussianModel {
    n: usize,
    cov: Vec<f64>, // row-major n×n, symmetrized
    log_det: f64,
}

/// Cholesky log-determinant of the principal submatrix indexed by `points`
/// (ascending). Returns None if the submatrix is not positive-definite.
fn cholesky_log_det(cov: &[f64], n: usize, points: &[usize]) -> Option<f64> {
    let m = points.len();
    if m == 0 {
        return Some(0.0);
    }
    let mut l = vec![0.0f64; m * m];
    let mut log_det = 0.0;
    for r in 0..m {
        for c in 0..=r {
            let mut sum = cov[(points[r] - 1) * n + (points[c] - 1)];
            for k in 0..c {
                sum -= l[r * m + k] * l[c * m + k];
            }
            if r == c {
                // Non-positive or non-finite pivot: not positive-definite.
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                let root = sum.sqrt();
                l[r * m + c] = root;
                log_det += 2.0 * root.ln();
            } else {
                l[r * m + c] = sum / l[c * m + c];
            }
        }
    }
    Some(log_det)
}

impl GaussianModel {
    /// Validates shape, symmetry (within 1e-9, then symmetrized), and
    /// positive-definiteness via Cholesky factorization.
    pub fn new(covariance: Vec<Vec<f64>>) -> Result<Self> {
        let n = covariance.len();
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        if covariance.iter().any(|row| row.len() != n) {
            return Err(Error::Input(format!("covariance matrix must be {n}x{n}")));
        }
        #[allow(clippy::needless_range_loop)] // (i, j) vs (j, i) symmetry checks
        for i in 0..n {
            for j in 0..n {
                let v = covariance[i][j];
                if !v.is_finite() {
                    return Err(Error::NotPositiveDefinite);
                }
                if (v - covariance[j][i]).abs() > 1e-9 {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        let mut cov = vec![0.0; n * n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..n {
                cov[i * n + j] = 0.5 * (covariance[i][j] + covariance[j][i]);
            }
        }
        let all: Vec<usize> = (1..=n).collect();
        let log_det = cholesky_log_det(&cov, n, &all).ok_or(Error::NotPositiveDefinite)?;
        Ok(GaussianModel { n, cov, log_det })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut cov = vec![vec![0.0; n]; n];
        for (i, row) in cov.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        GaussianModel::new(cov)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        self.cov[(i - 1) * self.n + (j - 1)]
    }

    fn log_det_principal(&self, a: PointSet) -> f64 {
        cholesky_log_det(&self.cov, self.n, &a.points())
            .expect("principal submatrices of a positive-definite matrix are positive-definite")
    }
}

/// Mutual information between the coordinates in A and the rest:
/// eval(A) = ½·(log det Σ_AA + log det Σ_BB − log det Σ). Symmetric,
/// submodular, and zero on the trivial subsets.
pub fn gaussian_mi_oracle(model: &GaussianModel) -> SetFunctionOracle {
    let model = model.clone();
    SetFunctionOracle::new(model.n, move |a| {
        let b = a.complement(model.n);
        0.5 * (model.log_det_principal(a) + model.log_det_principal(b) - model.log_det)
    })
}

const VERIFY_LIMIT: usize = 10;

/// Exhaustively checks eval(A) = eval(complement) for every subset. n ≤ 10.
pub fn is_symmetric(f: &SetFunctionOracle) -> Result<bool> {
    let n = f.n();
    if n > VERIFY_LIMIT {
        return Err(Error::OracleSize {
            n,
            limit: VERIFY_LIMIT,
        });
    }
    for bits in 0u64..(1 << n) {
        let a = PointSet::from_bits(bits);
        if (f.eval(a) - f.eval(a.complement(n))).abs() > 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First pair (A, B) violating f(A)+f(B) ≥ f(A∩B)+f(A∪B), under the
/// deterministic enumeration order, or None. n ≤ 10.
pub fn submodularity_violation(f: &SetFunctionOracle) -> Result<Option<(PointSet, PointSet)>> {
    let n = f.n();
    if n > VERIFY_LIMIT {
        return Err(Error::OracleSize {
            n,
            limit: VERIFY_LIMIT,
        });
    }
    let values: Vec<f64> = (0u64..(1 << n))
        .map(|bits| f.eval(PointSet::from_bits(bits)))
        .collect();
    for a in 0u64..(1 << n) {
        for b in 0u64..(1 << n) {
            let lhs = values[a as usize] + values[b as usize];
            let rhs = values[(a & b) as usize] + values[(a | b) as usize];
            if lhs < rhs - 1e-9 {
                return Ok(Some((PointSet::from_bits(a), PointSet::from_bits(b))));
            }
        }
    }
    Ok(None)
}

/// Exhaustively checks the submodular inequality over all subset pairs.
pub fn is_submodular(f: &SetFunctionOracle) -> Result<bool> {
    Ok(submodularity_violation(f)?.is_none())
}

/// Queyranne's pendant-pair algorithm: returns a non-trivial subset
/// minimizing a symmetric submodular function, in O(n³) oracle calls.
///
/// Each round builds a maximum-adjacency-style order by repeatedly taking
/// the group u minimizing f(W ∪ u) − f(u); the last two groups form a
/// pendant pair, the last group is recorded as a candidate, and the pair is
/// contracted. Ordering starts from the group containing point 1 and ties
/// fall to the smallest group id, so the run is deterministic.
pub fn queyranne_minimize(f: &SetFunctionOracle) -> Result<(PointSet, f64)> {
    let n = f.n();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    // Groups of original points, kept sorted by smallest member.
    let mut groups: Vec<PointSet> = (1..=n).map(|p| PointSet::from_points([p])).collect();
    let mut best: Option<(PointSet, f64)> = None;

    while groups.len() >= 2 {
        let m = groups.len();
        let mut order: Vec<usize> = Vec::with_capacity(m);
        let mut in_order = vec![false; m];
        order.push(0);
        in_order[0] = true;
        let mut w_set = groups[0];
        while order.len() < m {
            let mut pick: Option<(f64, usize)> = None;
            for (g, &gs) in groups.iter().enumerate() {
                if in_order[g] {
                    continue;
                }
                let key = f.eval(w_set.union(gs)) - f.eval(gs);
                if pick.is_none_or(|(k, _)| key < k) {
                    pick = Some((key, g));
                }
            }
            let (_, g) = pick.expect("some group remains");
            order.push(g);
            in_order[g] = true;
            w_set = w_set.union(groups[g]);
        }

        let last = groups[order[m - 1]];
        let second = groups[order[m - 2]];
        let candidate = f.eval(last);
        if best.as_ref().is_none_or(|(_, v)| candidate < *v) {
            best = Some((last, candidate));
        }

        // Contract the pendant pair.
        let merged = last.union(second);
        let mut next: Vec<PointSet> = groups
            .into_iter()
            .filter(|g| *g != last && *g != second)
            .collect();
        next.push(merged);
        next.sort_by_key(|g| g.points()[0]);
        groups = next;
    }

    Ok(best.expect("n >= 2 yields at least one candidate"))
}
