//! Exhaustive cross-check of the closed-form results against the max-flow
//! oracle on every small system.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::capacity::{
    capacity, capacity_terms, capped_sum, horizontal_selection, min_cut_formula, ordering_invariant_weight_sum,
    vertical_ordering, weight_profile,
};
use crate::error::Result;
use crate::flowgraph::{brute_force_capacity, DEFAULT_BUDGET};
use crate::model::{enumerate_ordering_vectors, enumerate_selection_vectors, ResourceAllocation, SystemConfig};
use crate::rational::{from_usize, ratio, to_fraction, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Add 1 to the first weight value of the closed form, to prove the
    /// checker notices a wrong formula.
    pub perturb: bool,
    pub budget: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { max_n: 8, trials: 20, seed: 0, perturb: false, budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    /// Closed-form capacity equals the brute-force max-flow minimum.
    OracleEquivalence,
    /// Vertical ordering minimizes the min-cut for each selection.
    VerticalOrdering,
    /// Horizontal selection minimizes the min-cut under vertical ordering.
    HorizontalSelection,
    /// The weight sum does not depend on the ordering.
    WeightSumConstancy,
    /// With `L = 1` or `beta_I = beta_c` the classic non-clustered sum.
    NonClusteredReduction,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::OracleEquivalence => "oracle-equivalence",
            Check::VerticalOrdering => "vertical-ordering",
            Check::HorizontalSelection => "horizontal-selection",
            Check::WeightSumConstancy => "weight-sum-constancy",
            Check::NonClusteredReduction => "non-clustered-reduction",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub check: Check,
    pub config: SystemConfig,
    pub alpha: Rational,
    pub beta_i: Rational,
    pub beta_c: Rational,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} failed for {} alpha={} beta_I={} beta_c={}: {}",
            self.check,
            self.config,
            to_fraction(&self.alpha),
            to_fraction(&self.beta_i),
            to_fraction(&self.beta_c),
            self.detail
        )
    }
}

/// Tallies per check; `failures` lists every counterexample in grid order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub configs: usize,
    pub cases: usize,
    pub oracle_comparisons: usize,
    pub ordering_comparisons: usize,
    pub selection_comparisons: usize,
    pub weight_sum_comparisons: usize,
    pub reduction_comparisons: usize,
    pub failures: Vec<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures_of(&self, check: Check) -> usize {
        self.failures.iter().filter(|c| c.check == check).count()
    }

    fn absorb(&mut self, other: CaseOutcome) {
        self.cases += 1;
        self.oracle_comparisons += other.oracle;
        self.ordering_comparisons += other.orderings;
        self.selection_comparisons += other.selections;
        self.weight_sum_comparisons += other.weight_sums;
        self.reduction_comparisons += other.reductions;
        self.failures.extend(other.failures);
    }
}

/// Every `(n, k, L)` with `2 <= n <= max_n`, `L | n`, `1 <= k < n`.
pub fn small_configs(max_n: usize) -> Vec<SystemConfig> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for l in (1..=n).filter(|l| n % l == 0) {
            for k in 1..n {
                out.push(SystemConfig::new(n, k, l).expect("grid is valid"));
            }
        }
    }
    out
}

/// Random `(alpha, beta_I, beta_c)` with small denominators and
/// `beta_I >= beta_c`; alpha spans the range of the weight values so both
/// sides of every `min` get exercised.
pub fn random_resources(rng: &mut impl Rng, cfg: &SystemConfig) -> (Rational, Rational, Rational) {
    let den = rng.gen_range(1..=4);
    let beta_i = ratio(rng.gen_range(0..=8), den);
    let parts = rng.gen_range(1..=4);
    let beta_c = &beta_i * ratio(rng.gen_range(0..=parts), parts);
    let alpha = ratio(rng.gen_range(0..=(8 * cfg.n() as i64)), rng.gen_range(1..=4));
    (alpha, beta_i, beta_c)
}

#[derive(Default)]
struct CaseOutcome {
    oracle: usize,
    orderings: usize,
    selections: usize,
    weight_sums: usize,
    reductions: usize,
    failures: Vec<Counterexample>,
}

fn check_case(cfg: &SystemConfig, raw: &(Rational, Rational, Rational), opts: &VerifyOptions) -> Result<CaseOutcome> {
    let (alpha, beta_i, beta_c) = raw;
    let res = ResourceAllocation::new(cfg, alpha.clone(), beta_i.clone(), beta_c.clone())?;
    let mut out = CaseOutcome::default();
    let fail = |check, detail: String| Counterexample {
        check,
        config: *cfg,
        alpha: res.alpha().clone(),
        beta_i: res.beta_i().clone(),
        beta_c: res.beta_c().clone(),
        detail,
    };

    let closed = if opts.perturb {
        let mut terms = capacity_terms(cfg, res.beta_i(), res.beta_c());
        terms[0] += from_usize(1);
        capped_sum(&terms, res.alpha())
    } else {
        capacity(cfg, &res)?
    };
    let oracle = brute_force_capacity(cfg, &res, opts.budget)?;
    out.oracle += 1;
    if closed != oracle {
        out.failures.push(fail(
            Check::OracleEquivalence,
            format!("closed form {} vs max-flow {}", to_fraction(&closed), to_fraction(&oracle)),
        ));
    }

    let s_h = horizontal_selection(cfg);
    let best = min_cut_formula(cfg, &res, &s_h, &vertical_ordering(&s_h))?;
    for s in enumerate_selection_vectors(cfg) {
        let pi_v = vertical_ordering(&s);
        let vertical = min_cut_formula(cfg, &res, &s, &pi_v)?;
        out.selections += 1;
        if best > vertical {
            out.failures.push(fail(
                Check::HorizontalSelection,
                format!("s_h gives {} but {s} gives {}", to_fraction(&best), to_fraction(&vertical)),
            ));
        }
        let common = ordering_invariant_weight_sum(cfg, &res, &s)?;
        for pi in enumerate_ordering_vectors(&s) {
            let profile = weight_profile(cfg, &res, &s, &pi)?;
            out.weight_sums += 1;
            if profile.omega_sum() != common {
                out.failures.push(fail(
                    Check::WeightSumConstancy,
                    format!("{s} {pi}: sum {} vs {}", to_fraction(&profile.omega_sum()), to_fraction(&common)),
                ));
            }
            let c = capped_sum(&profile.omega, res.alpha());
            out.orderings += 1;
            if vertical > c {
                out.failures.push(fail(
                    Check::VerticalOrdering,
                    format!("{s}: {pi_v} gives {} but {pi} gives {}", to_fraction(&vertical), to_fraction(&c)),
                ));
            }
        }
    }

    if cfg.clusters() == 1 || res.beta_i() == res.beta_c() {
        let beta = if cfg.clusters() == 1 { res.beta_i() } else { res.beta_c() };
        let classic: Rational = (1..=cfg.k()).map(|i| res.alpha().min(&(beta * from_usize(cfg.n() - i))).clone()).sum();
        out.reductions += 1;
        if closed != classic {
            out.failures.push(fail(
                Check::NonClusteredReduction,
                format!("closed form {} vs non-clustered {}", to_fraction(&closed), to_fraction(&classic)),
            ));
        }
    }
    Ok(out)
}

/// Runs every check on `opts.trials` random resource draws per small
/// configuration, plus one draw with `beta_I = beta_c` per configuration so
/// the reduction check always has material.
pub fn verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let configs = small_configs(opts.max_n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cases = Vec::new();
    for cfg in &configs {
        for _ in 0..opts.trials {
            cases.push((*cfg, random_resources(&mut rng, cfg)));
        }
        let (alpha, beta, _) = random_resources(&mut rng, cfg);
        cases.push((*cfg, (alpha, beta.clone(), beta)));
    }
    let outcomes: Vec<Result<CaseOutcome>> = cases.par_iter().map(|(cfg, raw)| check_case(cfg, raw, opts)).collect();
    let mut report = VerifyReport { configs: configs.len(), ..Default::default() };
    for outcome in outcomes {
        report.absorb(outcome?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_grid_counts() {
        // n=2: L in {1,2}, k=1 -> 2 configs
        assert_eq!(small_configs(2).len(), 2);
        // n=4: L in {1,2,4} x k in 1..4 -> 9, plus n=3: L in {1,3} x 2 -> 4
        assert_eq!(small_configs(4).len(), 2 + 4 + 9);
    }

    #[test]
    fn random_draws_respect_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = SystemConfig::new(6, 3, 2).unwrap();
        for _ in 0..200 {
            let (alpha, bi, bc) = random_resources(&mut rng, &cfg);
            assert!(bi >= bc);
            assert!(ResourceAllocation::new(&cfg, alpha, bi, bc).is_ok());
        }
    }

    #[test]
    fn tiny_grid_passes() {
        let report = verify(&VerifyOptions { max_n: 4, trials: 2, ..Default::default() }).unwrap();
        assert!(report.passed(), "{:?}", report.failures.first());
        assert_eq!(report.cases, 15 * 3);
    }

    #[test]
    fn perturbation_is_detected() {
        let report = verify(&VerifyOptions { max_n: 4, trials: 3, perturb: true, ..Default::default() }).unwrap();
        assert!(report.failures_of(Check::OracleEquivalence) > 0);
    }
}
