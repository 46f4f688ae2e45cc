//! System shape, repair resources, and the selection/ordering vectors that
//! index the candidate worst-case information flow graphs.
//!
//! Clusters are labelled `1..=L`. Selection vectors are stored with their
//! counts sorted non-increasing, so physical node identities never appear.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{from_usize, Rational};

/// Discrete shape of a clustered storage system. Helper counts are always
/// maximal: every surviving node in the cluster and every node outside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemConfig {
    n: usize,
    k: usize,
    clusters: usize,
    cluster_size: usize,
}

impl SystemConfig {
    pub fn new(n: usize, k: usize, clusters: usize) -> Result<Self> {
        if clusters == 0 {
            return Err(Error::InvalidClusterCount);
        }
        if n < 2 {
            return Err(Error::InvalidN(n));
        }
        if !n.is_multiple_of(clusters) {
            return Err(Error::NonDividing { nodes: n, clusters });
        }
        if k == 0 || k >= n {
            return Err(Error::InvalidK { n, k });
        }
        Ok(Self { n, k, clusters, cluster_size: n / clusters })
    }

    /// Storage node count `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Nodes contacted by a data collector, `k`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Cluster count `L`.
    pub fn clusters(&self) -> usize {
        self.clusters
    }

    /// Nodes per cluster, `n_I = n / L`.
    pub fn cluster_size(&self) -> usize {
        self.cluster_size
    }

    /// Intra-cluster helpers, `d_I = n_I - 1`.
    pub fn intra_helpers(&self) -> usize {
        self.cluster_size - 1
    }

    /// Cross-cluster helpers, `d_c = n - n_I`.
    pub fn cross_helpers(&self) -> usize {
        self.n - self.cluster_size
    }

    /// Cluster (1-based) holding physical node `node` (0-based).
    pub(crate) fn cluster_of(&self, node: usize) -> usize {
        node / self.cluster_size + 1
    }
}

impl fmt::Display for SystemConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, k={}, L={})", self.n, self.k, self.clusters)
    }
}

/// Storage size and per-helper repair traffic, all exact.
///
/// Built against a [`SystemConfig`]: a per-helper amount with no helpers
/// behind it (`beta_c` when `L = 1`, `beta_I` when `n_I = 1`) is forced to
/// zero, and `beta_I >= beta_c` is only enforced when both helper kinds exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceAllocation {
    alpha: Rational,
    beta_i: Rational,
    beta_c: Rational,
    intra_helpers: usize,
    cross_helpers: usize,
}

impl ResourceAllocation {
    pub fn new(cfg: &SystemConfig, alpha: Rational, beta_i: Rational, beta_c: Rational) -> Result<Self> {
        for (name, value) in [("alpha", &alpha), ("beta_I", &beta_i), ("beta_c", &beta_c)] {
            if value.is_negative() {
                return Err(Error::NegativeResource { name, value: Box::new(value.clone()) });
            }
        }
        let beta_i = if cfg.intra_helpers() == 0 { Rational::zero() } else { beta_i };
        let beta_c = if cfg.cross_helpers() == 0 { Rational::zero() } else { beta_c };
        if cfg.intra_helpers() > 0 && beta_i < beta_c {
            return Err(Error::AssumptionViolated { beta_i: Box::new(beta_i), beta_c: Box::new(beta_c) });
        }
        Ok(Self { alpha, beta_i, beta_c, intra_helpers: cfg.intra_helpers(), cross_helpers: cfg.cross_helpers() })
    }

    /// Same system with a different storage size.
    pub fn with_alpha(&self, alpha: Rational) -> Result<Self> {
        if alpha.is_negative() {
            return Err(Error::NegativeResource { name: "alpha", value: Box::new(alpha) });
        }
        Ok(Self { alpha, ..self.clone() })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta_i(&self) -> &Rational {
        &self.beta_i
    }

    pub fn beta_c(&self) -> &Rational {
        &self.beta_c
    }

    /// `gamma_I = d_I * beta_I`
    pub fn gamma_i(&self) -> Rational {
        &self.beta_i * from_usize(self.intra_helpers)
    }

    /// `gamma_c = d_c * beta_c`
    pub fn gamma_c(&self) -> Rational {
        &self.beta_c * from_usize(self.cross_helpers)
    }

    /// Total repair bandwidth per newcomer.
    pub fn gamma(&self) -> Rational {
        self.gamma_i() + self.gamma_c()
    }

    /// `beta_c / beta_I`, undefined when `beta_I = 0`.
    pub fn kappa(&self) -> Option<Rational> {
        (!self.beta_i.is_zero()).then(|| &self.beta_c / &self.beta_i)
    }

    pub(crate) fn matches(&self, cfg: &SystemConfig) -> bool {
        self.intra_helpers == cfg.intra_helpers() && self.cross_helpers == cfg.cross_helpers()
    }
}

/// Per-cluster counts of the `k` nodes a data collector contacts, sorted
/// non-increasing and padded with zeros to length `L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SelectionVector(Vec<usize>);

impl SelectionVector {
    pub fn new(cfg: &SystemConfig, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != cfg.clusters() {
            return Err(Error::InvalidSelection(format!("expected {} entries, got {}", cfg.clusters(), counts.len())));
        }
        if let Some(&c) = counts.iter().find(|&&c| c > cfg.cluster_size()) {
            return Err(Error::InvalidSelection(format!("count {c} exceeds n_I={}", cfg.cluster_size())));
        }
        if counts.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidSelection(format!("{counts:?} is not non-increasing")));
        }
        let total: usize = counts.iter().sum();
        if total != cfg.k() {
            return Err(Error::InvalidSelection(format!("counts sum to {total}, expected k={}", cfg.k())));
        }
        Ok(Self(counts))
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// Total selected nodes, `k`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of clusters `L`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `k! / prod(s_l!)`, the size of the ordering set of this selection.
    pub fn ordering_count(&self) -> u128 {
        let mut remaining = self.total() as u128;
        let mut count: u128 = 1;
        for &part in &self.0 {
            // multinomial as a product of binomials; each step stays integral
            for i in 0..part as u128 {
                count = count * (remaining - i) / (i + 1);
            }
            remaining -= part as u128;
        }
        count
    }
}

impl fmt::Display for SelectionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

/// Cluster (1-based) of each contacted node, in repair (topological) order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderingVector(Vec<usize>);

impl OrderingVector {
    pub fn new(selection: &SelectionVector, clusters: Vec<usize>) -> Result<Self> {
        let mut seen = vec![0usize; selection.len()];
        for &c in &clusters {
            if c == 0 || c > selection.len() {
                return Err(Error::InvalidOrdering(format!("cluster index {c} outside 1..={}", selection.len())));
            }
            seen[c - 1] += 1;
        }
        if seen != selection.counts() {
            return Err(Error::InvalidOrdering(format!("{clusters:?} does not match selection {selection}")));
        }
        Ok(Self(clusters))
    }

    pub(crate) fn new_unchecked(clusters: Vec<usize>) -> Self {
        Self(clusters)
    }

    pub fn clusters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for OrderingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[usize]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

/// Checks that `selection` belongs to `cfg` and `ordering` to `selection`.
pub(crate) fn check_consistent(
    cfg: &SystemConfig,
    selection: &SelectionVector,
    ordering: &OrderingVector,
) -> Result<()> {
    SelectionVector::new(cfg, selection.counts().to_vec())
        .map_err(|e| Error::InconsistentArguments(format!("selection {selection} vs {cfg}: {e}")))?;
    OrderingVector::new(selection, ordering.clusters().to_vec())
        .map_err(|e| Error::InconsistentArguments(format!("ordering {ordering}: {e}")))?;
    Ok(())
}

/// Every selection vector of `cfg`, lexicographically descending.
pub fn enumerate_selection_vectors(cfg: &SystemConfig) -> Vec<SelectionVector> {
    fn fill(
        pos: usize,
        remaining: usize,
        cap: usize,
        clusters: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<SelectionVector>,
    ) {
        if pos == clusters {
            if remaining == 0 {
                out.push(SelectionVector(current.clone()));
            }
            return;
        }
        let slots_after = clusters - pos - 1;
        for v in (0..=cap.min(remaining)).rev() {
            // later entries are at most v each
            if remaining - v > v * slots_after {
                break;
            }
            current.push(v);
            fill(pos + 1, remaining - v, v, clusters, current, out);
            current.pop();
        }
    }

    let mut out = Vec::new();
    let mut current = Vec::with_capacity(cfg.clusters());
    fill(0, cfg.k(), cfg.cluster_size(), cfg.clusters(), &mut current, &mut out);
    out
}

/// Every distinct ordering of `selection`, lexicographically ascending.
pub fn enumerate_ordering_vectors(selection: &SelectionVector) -> Vec<OrderingVector> {
    let mut current: Vec<usize> =
        selection.counts().iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c)).collect();
    let mut out = vec![OrderingVector(current.clone())];
    while next_permutation(&mut current) {
        out.push(OrderingVector(current.clone()));
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let pivot = i - 1;
    let j = (i..v.len()).rev().find(|&j| v[j] > v[pivot]).expect("successor exists");
    v.swap(pivot, j);
    v[i..].reverse();
    true
}
