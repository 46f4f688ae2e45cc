//! Closed-form min-cut machinery: weight values, the min-cut sum for a given
//! selection and ordering, the vertical ordering and horizontal selection
//! that minimize it, and the resulting capacity.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{check_consistent, OrderingVector, ResourceAllocation, SelectionVector, SystemConfig};
use crate::rational::{from_usize, Rational};

/// Weight values of one ordering: `a[i]` intra-cluster helpers not yet
/// replaced when the i-th contacted node is repaired, and the resulting
/// incoming repair traffic `omega[i] = a[i]*beta_I + (n - i - a[i])*beta_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    pub a: Vec<usize>,
    pub omega: Vec<Rational>,
}

impl WeightProfile {
    /// Cross-cluster counterpart `b_i = n - i - a_i` (1-based `i`).
    pub fn b(&self, n: usize) -> Vec<usize> {
        self.a.iter().enumerate().map(|(i, &a)| n - (i + 1) - a).collect()
    }

    pub fn omega_sum(&self) -> Rational {
        self.omega.iter().sum()
    }
}

fn check_resources(cfg: &SystemConfig, res: &ResourceAllocation) -> Result<()> {
    if res.matches(cfg) {
        Ok(())
    } else {
        Err(Error::InconsistentArguments(format!("resources were built for another system than {cfg}")))
    }
}

pub fn weight_profile(
    cfg: &SystemConfig,
    res: &ResourceAllocation,
    selection: &SelectionVector,
    ordering: &OrderingVector,
) -> Result<WeightProfile> {
    check_consistent(cfg, selection, ordering)?;
    check_resources(cfg, res)?;
    Ok(profile_unchecked(cfg, res, ordering))
}

fn profile_unchecked(cfg: &SystemConfig, res: &ResourceAllocation, ordering: &OrderingVector) -> WeightProfile {
    let mut seen = vec![0usize; cfg.clusters()];
    let mut a = Vec::with_capacity(ordering.len());
    let mut omega = Vec::with_capacity(ordering.len());
    for (idx, &cluster) in ordering.clusters().iter().enumerate() {
        let ai = cfg.intra_helpers() - seen[cluster - 1];
        seen[cluster - 1] += 1;
        let bi = cfg.n() - (idx + 1) - ai;
        omega.push(res.beta_i() * from_usize(ai) + res.beta_c() * from_usize(bi));
        a.push(ai);
    }
    WeightProfile { a, omega }
}

/// `sum_i min(omega_i, alpha)`: the cut that puts exactly the selected
/// newcomers on the collector side. A graph's min-cut can be lower by also
/// cutting surviving nodes, but never below [`capacity`].
pub fn min_cut_formula(
    cfg: &SystemConfig,
    res: &ResourceAllocation,
    selection: &SelectionVector,
    ordering: &OrderingVector,
) -> Result<Rational> {
    let profile = weight_profile(cfg, res, selection, ordering)?;
    Ok(capped_sum(&profile.omega, res.alpha()))
}

pub(crate) fn capped_sum(omega: &[Rational], alpha: &Rational) -> Rational {
    omega.iter().map(|w| w.min(alpha).clone()).sum()
}

/// `sum_i omega_i` for `selection`, from the ordering-free counts
/// `sum a_i = k(n_I - 1) - sum_l s_l(s_l - 1)/2` and
/// `sum (a_i + b_i) = sum_{i<=k} (n - i)`. Panics if the direct sum over the
/// vertical ordering disagrees.
pub fn ordering_invariant_weight_sum(
    cfg: &SystemConfig,
    res: &ResourceAllocation,
    selection: &SelectionVector,
) -> Result<Rational> {
    let ordering = vertical_ordering(selection);
    check_consistent(cfg, selection, &ordering)?;
    check_resources(cfg, res)?;

    let k = cfg.k();
    let repeats: usize = selection.counts().iter().map(|&s| s * s.saturating_sub(1) / 2).sum();
    let sum_a = k * cfg.intra_helpers() - repeats;
    let sum_ab: usize = (1..=k).map(|i| cfg.n() - i).sum();
    let sum_b = sum_ab - sum_a;
    let closed = res.beta_i() * from_usize(sum_a) + res.beta_c() * from_usize(sum_b);

    let direct = profile_unchecked(cfg, res, &ordering).omega_sum();
    assert_eq!(closed, direct, "weight sum for {selection} depends on the ordering");
    Ok(closed)
}

/// Round-robin ordering: sweep clusters `1..=L`, taking one node from each
/// cluster that still has selected nodes, and restart at cluster 1 on
/// reaching an exhausted cluster (or the end).
pub fn vertical_ordering(selection: &SelectionVector) -> OrderingVector {
    let mut left = selection.counts().to_vec();
    let k = selection.total();
    let mut out = Vec::with_capacity(k);
    let mut l = 0;
    while out.len() < k {
        if l == left.len() || left[l] == 0 {
            l = 0;
            continue;
        }
        out.push(l + 1);
        left[l] -= 1;
        l += 1;
    }
    OrderingVector::new_unchecked(out)
}

/// Whole clusters first: `floor(k / n_I)` full clusters, then the remainder.
pub fn horizontal_selection(cfg: &SystemConfig) -> SelectionVector {
    let size = cfg.cluster_size();
    let full = cfg.k() / size;
    let rest = cfg.k() % size;
    let counts = (0..cfg.clusters())
        .map(|i| match i {
            i if i < full => size,
            i if i == full => rest,
            _ => 0,
        })
        .collect();
    SelectionVector::new(cfg, counts).expect("horizontal selection is valid")
}

/// Row sizes of the horizontal/vertical layout: `g(i)` for `i = 1..=n_I`.
pub fn row_sizes(cfg: &SystemConfig) -> Vec<usize> {
    let size = cfg.cluster_size();
    let (q, r) = (cfg.k() / size, cfg.k() % size);
    (1..=size).map(|i| if i <= r { q + 1 } else { q }).collect()
}

/// Storage capacity
/// `C = sum_{i=1}^{n_I} sum_{j=1}^{g(i)} min(alpha, x(i) gamma_I + y(i,j) gamma_c)`,
/// evaluated without division as
/// `min(alpha, (n_I - i) beta_I + (n - (n_I - i) - G(i-1) - j) beta_c)`.
pub fn capacity(cfg: &SystemConfig, res: &ResourceAllocation) -> Result<Rational> {
    check_resources(cfg, res)?;
    if cfg.intra_helpers() > 0 && cfg.cross_helpers() > 0 && res.beta_i() < res.beta_c() {
        return Err(Error::AssumptionViolated {
            beta_i: Box::new(res.beta_i().clone()),
            beta_c: Box::new(res.beta_c().clone()),
        });
    }
    let terms = capacity_terms(cfg, res.beta_i(), res.beta_c());
    let total = capped_sum(&terms, res.alpha());

    if cfg!(any(debug_assertions, feature = "self-check")) {
        let s_h = horizontal_selection(cfg);
        let via_ordering = min_cut_formula(cfg, res, &s_h, &vertical_ordering(&s_h))?;
        assert_eq!(total, via_ordering, "closed form disagrees with c_min(s_h, pi_v) for {cfg}");
    }
    Ok(total)
}

/// Uncapped terms of the capacity sum, in row order.
pub(crate) fn capacity_terms(cfg: &SystemConfig, beta_i: &Rational, beta_c: &Rational) -> Vec<Rational> {
    let size = cfg.cluster_size();
    let mut terms = Vec::with_capacity(cfg.k());
    let mut before = 0usize;
    for (row, g) in row_sizes(cfg).into_iter().enumerate() {
        let i = row + 1;
        for j in 1..=g {
            let cross = cfg.n() - (size - i) - before - j;
            let mut w = beta_i * from_usize(size - i);
            if !beta_c.is_zero() {
                w += beta_c * from_usize(cross);
            }
            terms.push(w);
        }
        before += g;
    }
    terms
}
