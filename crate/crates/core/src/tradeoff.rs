//! Resource trade-offs built on the capacity formula: capacity against the
//! cross/intra per-helper ratio `kappa` at fixed total bandwidth, the
//! smallest intra-cluster bandwidth that makes cross-cluster repair traffic
//! unnecessary, and the cheapest cross-cluster bandwidth for a given
//! intra-cluster budget.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bisect::{invert_concave, BisectionOptions, Threshold};
use crate::capacity::{capacity, row_sizes};
use crate::error::{Error, Result};
use crate::model::{ResourceAllocation, SystemConfig};
use crate::rational::{from_usize, serde_fraction, to_fraction, to_significant, Rational};

/// Size `M` of the stored file. Always positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileSize(Rational);

impl FileSize {
    pub fn new(size: Rational) -> Result<Self> {
        if size.is_positive() {
            Ok(Self(size))
        } else {
            Err(Error::InvalidFileSize(Box::new(size)))
        }
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// Capacity at fixed `(alpha, gamma)` with `beta_c = kappa * beta_I`, using
/// `gamma = (d_I + d_c * kappa) * beta_I`.
pub fn capacity_of_kappa(cfg: &SystemConfig, alpha: &Rational, gamma: &Rational, kappa: &Rational) -> Result<Rational> {
    if kappa.is_negative() || *kappa > Rational::one() {
        return Err(Error::KappaOutOfRange(Box::new(kappa.clone())));
    }
    if gamma.is_negative() {
        return Err(Error::NegativeResource { name: "gamma", value: Box::new(gamma.clone()) });
    }
    let helpers = from_usize(cfg.intra_helpers()) + from_usize(cfg.cross_helpers()) * kappa;
    if helpers.is_zero() {
        return Err(Error::InvalidParameter(format!("kappa=0 with n_I=1 leaves no repair helpers in {cfg}")));
    }
    let beta_i = gamma / &helpers;
    let beta_c = &beta_i * kappa;
    let res = ResourceAllocation::new(cfg, alpha.clone(), beta_i, beta_c)?;
    capacity(cfg, &res)
}

fn zero_cross_capacity(cfg: &SystemConfig, alpha: &Rational, gamma_i: &Rational) -> Result<Rational> {
    let beta_i = gamma_i / from_usize(cfg.intra_helpers());
    capacity(cfg, &ResourceAllocation::new(cfg, alpha.clone(), beta_i, Rational::zero())?)
}

/// Smallest `alpha` at which zero cross-cluster traffic can store `m`:
/// with `gamma_c = 0` the last row of the layout contributes nothing, so
/// capacity never exceeds `alpha * sum_{i < n_I} g(i)`. `None` when `n_I = 1`.
pub fn zero_cross_alpha_floor(cfg: &SystemConfig, m: &FileSize) -> Option<Rational> {
    let rows = row_sizes(cfg);
    let usable: usize = rows[..rows.len() - 1].iter().sum();
    (usable > 0).then(|| m.value() / from_usize(usable))
}

/// Coefficients of the piecewise threshold formula.
struct ZeroCrossBranches {
    epsilon: Vec<Rational>,
    delta: Vec<Rational>,
    b: Vec<Rational>,
}

impl ZeroCrossBranches {
    fn new(cfg: &SystemConfig) -> Self {
        let size = cfg.cluster_size();
        let (q, r) = (cfg.k() / size, cfg.k() % size);
        let b: Vec<Rational> = (0..size).map(|t| Rational::one() - from_usize(t) / from_usize(size - 1)).collect();
        let epsilon = (0..size)
            .map(|t| {
                let full: Rational = b[t..].iter().sum();
                let partial: Rational = if t < r { b[t..r].iter().sum() } else { Rational::zero() };
                from_usize(q) * full + partial
            })
            .collect();
        let delta = (0..size)
            .map(|t| if t <= r { from_usize((q + 1) * t) } else { from_usize(cfg.k() - q * (size - t)) })
            .collect();
        Self { epsilon, delta, b }
    }

    /// `M / (epsilon_t / b_t + delta_t)`, the lower end of branch `t`.
    fn lower(&self, t: usize, m: &Rational) -> Rational {
        m / (&self.epsilon[t] / &self.b[t] + &self.delta[t])
    }
}

/// Minimum intra-cluster repair bandwidth `gamma_I*` that lets the system
/// store `m` with zero cross-cluster traffic, from the closed-form piecewise
/// expression. Any `gamma_I >= gamma_I*` works; anything smaller does not.
pub fn gamma_i_star(cfg: &SystemConfig, m: &FileSize, alpha: &Rational) -> Result<Rational> {
    let size = cfg.cluster_size();
    if size <= 2 {
        return Err(Error::DegenerateCluster(size));
    }
    let floor = zero_cross_alpha_floor(cfg, m).expect("n_I > 2");
    if *alpha < floor {
        return Err(Error::AlphaTooSmall { alpha: Box::new(alpha.clone()), floor: Box::new(floor) });
    }
    let m_val = m.value();
    let br = ZeroCrossBranches::new(cfg);

    let top = m_val / &br.epsilon[0];
    let threshold = if *alpha >= top {
        top
    } else {
        let t = (1..=size - 2)
            .find(|&t| br.lower(t, m_val) <= *alpha && *alpha < br.lower(t - 1, m_val))
            .expect("branches cover [floor, M/epsilon_0)");
        (m_val - &br.delta[t] * alpha) / &br.epsilon[t]
    };

    if cfg!(any(debug_assertions, feature = "self-check")) {
        assert_eq!(&zero_cross_capacity(cfg, alpha, &threshold)?, m_val, "gamma_I* misses M for {cfg}");
    }
    Ok(threshold)
}

/// `gamma_I*` by inverting `capacity(alpha, gamma_I, 0) = m` numerically.
/// Works for every `n_I >= 2`, including the sizes the closed form skips.
pub fn gamma_i_star_by_bisection(
    cfg: &SystemConfig,
    m: &FileSize,
    alpha: &Rational,
    opts: &BisectionOptions,
) -> Result<Threshold> {
    let Some(floor) = zero_cross_alpha_floor(cfg, m) else {
        return Err(Error::Infeasible(format!("{cfg} has no intra-cluster helpers")));
    };
    if *alpha < floor {
        return Err(Error::AlphaTooSmall { alpha: Box::new(alpha.clone()), floor: Box::new(floor) });
    }
    // beta_I = alpha saturates every term that has an intra-cluster helper
    let hi = alpha * from_usize(cfg.intra_helpers());
    invert_concave(|g| zero_cross_capacity(cfg, alpha, g), m.value(), Rational::zero(), hi, opts)?
        .ok_or_else(|| Error::Infeasible(format!("zero cross traffic cannot reach M at alpha={}", to_fraction(alpha))))
}

/// Closed form where it applies, bisection for `n_I <= 2`.
pub fn zero_cross_threshold(
    cfg: &SystemConfig,
    m: &FileSize,
    alpha: &Rational,
    opts: &BisectionOptions,
) -> Result<Rational> {
    match gamma_i_star(cfg, m, alpha) {
        Err(Error::DegenerateCluster(_)) => gamma_i_star_by_bisection(cfg, m, alpha, opts).map(|t| t.value),
        other => other,
    }
}

/// Smallest `gamma_c` (with `beta_c <= beta_I`) for which the capacity at
/// `(alpha, gamma_i, gamma_c)` reaches `m`.
pub fn min_gamma_c(
    cfg: &SystemConfig,
    m: &FileSize,
    alpha: &Rational,
    gamma_i: &Rational,
    opts: &BisectionOptions,
) -> Result<Threshold> {
    if !alpha.is_positive() {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", to_fraction(alpha))));
    }
    if gamma_i.is_negative() {
        return Err(Error::NegativeResource { name: "gamma_I", value: Box::new(gamma_i.clone()) });
    }
    let beta_i = if cfg.intra_helpers() > 0 { gamma_i / from_usize(cfg.intra_helpers()) } else { Rational::zero() };
    let d_c = from_usize(cfg.cross_helpers());
    let eval = |gamma_c: &Rational| -> Result<Rational> {
        let beta_c = if d_c.is_zero() { Rational::zero() } else { gamma_c / &d_c };
        capacity(cfg, &ResourceAllocation::new(cfg, alpha.clone(), beta_i.clone(), beta_c)?)
    };
    let ceiling = if cfg.cross_helpers() == 0 {
        Rational::zero()
    } else if cfg.intra_helpers() > 0 {
        &beta_i * &d_c
    } else {
        // no intra helpers: capacity stops growing once (n-k) beta_c = alpha
        alpha * &d_c / from_usize(cfg.n() - cfg.k())
    };
    invert_concave(eval, m.value(), Rational::zero(), ceiling, opts)?.ok_or_else(|| {
        Error::Infeasible(format!(
            "capacity stays below M={} for every gamma_c at alpha={}, gamma_I={}",
            to_fraction(m.value()),
            to_fraction(alpha),
            to_fraction(gamma_i)
        ))
    })
}

/// `gamma_c` that no amount of intra-cluster bandwidth can reduce further:
/// [`min_gamma_c`] at `beta_I = alpha`, past which it is constant.
pub fn irreducible_gamma_c(
    cfg: &SystemConfig,
    m: &FileSize,
    alpha: &Rational,
    opts: &BisectionOptions,
) -> Result<Threshold> {
    let gamma_i = alpha * from_usize(cfg.intra_helpers());
    min_gamma_c(cfg, m, alpha, &gamma_i, opts)
}

/// Smallest total bandwidth storing `m` when `beta_c = beta_I`.
pub fn symmetric_min_gamma(
    cfg: &SystemConfig,
    m: &FileSize,
    alpha: &Rational,
    opts: &BisectionOptions,
) -> Result<Threshold> {
    let hi = alpha * from_usize(cfg.n() - 1) / from_usize(cfg.n() - cfg.k());
    invert_concave(|g| capacity_of_kappa(cfg, alpha, g, &Rational::one()), m.value(), Rational::zero(), hi, opts)?
        .ok_or_else(|| Error::Infeasible(format!("alpha={} is below M/k", to_fraction(alpha))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveKind {
    #[serde(rename = "kappa")]
    Kappa,
    #[serde(rename = "alpha-gamma")]
    AlphaGamma,
    #[serde(rename = "gammaI-gammaC")]
    GammaIGammaC,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Kappa => "kappa",
            CurveKind::AlphaGamma => "alpha-gamma",
            CurveKind::GammaIGammaC => "gammaI-gammaC",
        })
    }
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa" => Ok(CurveKind::Kappa),
            "alpha-gamma" => Ok(CurveKind::AlphaGamma),
            "gammaI-gammaC" => Ok(CurveKind::GammaIGammaC),
            other => Err(Error::Parse(format!("unknown curve kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    #[serde(with = "serde_fraction")]
    pub x: Rational,
    #[serde(with = "serde_fraction")]
    pub y: Rational,
    /// False when `y` is a bisection bracket end rather than an exact root.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveGap {
    #[serde(with = "serde_fraction")]
    pub x: Rational,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveMetadata {
    pub kind: CurveKind,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "L")]
    pub clusters: usize,
    /// Fixed parameters as exact `p/q` strings.
    pub fixed: BTreeMap<String, String>,
    pub flags: Vec<String>,
}

/// Flag set on a (gamma_I, gamma_c) series where no grid point gets by with
/// less cross-cluster bandwidth than the irreducible amount.
pub const FLAG_CROSS_IRREDUCIBLE: &str = "cross_cluster_irreducible";
/// Flag set when every grid point of a series is infeasible.
pub const FLAG_ALL_INFEASIBLE: &str = "all_infeasible";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradeoffCurve {
    pub series: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<CurvePoint>,
    pub gaps: Vec<CurveGap>,
    pub metadata: CurveMetadata,
}

impl TradeoffCurve {
    /// Header `x_label,y_label`, then one row per point with twelve
    /// significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{}\n", self.x_label, self.y_label);
        for p in &self.points {
            out.push_str(&to_significant(&p.x, 12));
            out.push(',');
            out.push_str(&to_significant(&p.y, 12));
            out.push('\n');
        }
        out
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.metadata.flags.iter().any(|f| f == flag)
    }
}

/// Fixed inputs of a sweep; which ones are required depends on the kind.
#[derive(Debug, Clone, Default)]
pub struct SweepParams {
    pub file_size: Option<FileSize>,
    pub alpha: Option<Rational>,
    pub gamma: Option<Rational>,
    pub bisection: BisectionOptions,
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
pub fn linear_grid(start: &Rational, stop: &Rational, points: usize) -> Vec<Rational> {
    match points {
        0 => Vec::new(),
        1 => vec![start.clone()],
        _ => {
            let step = (stop - start) / from_usize(points - 1);
            (0..points).map(|i| start + &step * from_usize(i)).collect()
        }
    }
}

/// Grid used when the caller does not supply one.
pub fn default_grid(kind: CurveKind, cfg: &SystemConfig, params: &SweepParams) -> Result<Vec<Rational>> {
    Ok(match kind {
        CurveKind::Kappa => linear_grid(&Rational::zero(), &Rational::one(), 21),
        CurveKind::AlphaGamma => {
            let m = require(params.file_size.as_ref(), "file size M")?;
            let low = m.value() / from_usize(cfg.k());
            linear_grid(&low, &(&low * from_usize(2)), 21)
        }
        CurveKind::GammaIGammaC => {
            let alpha = require(params.alpha.as_ref(), "alpha")?;
            linear_grid(&Rational::zero(), &(alpha * from_usize(cfg.intra_helpers().max(1))), 41)
        }
    })
}

fn require<'a, T>(value: Option<&'a T>, name: &str) -> Result<&'a T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("{name} is required for this curve")))
}

fn check_grid(grid: &[Rational]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if let Some(w) = grid.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(format!(
            "grid must be strictly increasing, found {} then {}",
            to_fraction(&w[0]),
            to_fraction(&w[1])
        )));
    }
    Ok(())
}

type PointResult = Result<(Rational, bool)>;

fn assemble(
    series: &str,
    labels: (&str, &str),
    grid: &[Rational],
    results: Vec<PointResult>,
    metadata: CurveMetadata,
) -> TradeoffCurve {
    let mut points = Vec::new();
    let mut gaps = Vec::new();
    for (x, r) in grid.iter().zip(results) {
        match r {
            Ok((y, exact)) => points.push(CurvePoint { x: x.clone(), y, exact }),
            Err(e) => gaps.push(CurveGap { x: x.clone(), reason: e.to_string() }),
        }
    }
    let mut metadata = metadata;
    if points.is_empty() {
        metadata.flags.push(FLAG_ALL_INFEASIBLE.into());
    }
    TradeoffCurve { series: series.into(), x_label: labels.0.into(), y_label: labels.1.into(), points, gaps, metadata }
}

/// Evaluates one trade-off family on `grid`. Points that fail become gaps
/// in the curve rather than errors.
pub fn sweep(
    kind: CurveKind,
    cfg: &SystemConfig,
    params: &SweepParams,
    grid: &[Rational],
) -> Result<Vec<TradeoffCurve>> {
    check_grid(grid)?;
    let mut fixed = BTreeMap::new();
    if let Some(m) = &params.file_size {
        fixed.insert("M".to_string(), to_fraction(m.value()));
    }
    let meta = |fixed: BTreeMap<String, String>| CurveMetadata {
        kind,
        n: cfg.n(),
        k: cfg.k(),
        clusters: cfg.clusters(),
        fixed,
        flags: Vec::new(),
    };
    let opts = &params.bisection;

    match kind {
        CurveKind::Kappa => {
            let alpha = require(params.alpha.as_ref(), "alpha")?;
            let gamma = require(params.gamma.as_ref(), "gamma")?;
            fixed.insert("alpha".into(), to_fraction(alpha));
            fixed.insert("gamma".into(), to_fraction(gamma));
            let results =
                grid.par_iter().map(|kappa| capacity_of_kappa(cfg, alpha, gamma, kappa).map(|c| (c, true))).collect();
            Ok(vec![assemble("capacity", ("kappa", "capacity"), grid, results, meta(fixed))])
        }
        CurveKind::AlphaGamma => {
            let m = require(params.file_size.as_ref(), "file size M")?;
            let baseline = grid
                .par_iter()
                .map(|alpha| symmetric_min_gamma(cfg, m, alpha, opts).map(|t| (t.value, t.exact)))
                .collect();
            let zero_cross = grid
                .par_iter()
                .map(|alpha| match gamma_i_star(cfg, m, alpha) {
                    Err(Error::DegenerateCluster(_)) => {
                        gamma_i_star_by_bisection(cfg, m, alpha, opts).map(|t| (t.value, t.exact))
                    }
                    other => other.map(|g| (g, true)),
                })
                .collect();
            let mut zero_fixed = fixed.clone();
            zero_fixed.insert("gamma_c".into(), "0/1".into());
            if let Some(floor) = zero_cross_alpha_floor(cfg, m) {
                zero_fixed.insert("alpha_floor".into(), to_fraction(&floor));
            }
            let mut base_fixed = fixed;
            base_fixed.insert("kappa".into(), "1/1".into());
            Ok(vec![
                assemble("baseline", ("alpha", "gamma"), grid, baseline, meta(base_fixed)),
                assemble("zero_cross", ("alpha", "gamma"), grid, zero_cross, meta(zero_fixed)),
            ])
        }
        CurveKind::GammaIGammaC => {
            let m = require(params.file_size.as_ref(), "file size M")?;
            let alpha = require(params.alpha.as_ref(), "alpha")?;
            fixed.insert("alpha".into(), to_fraction(alpha));
            let results: Vec<PointResult> =
                grid.par_iter().map(|gi| min_gamma_c(cfg, m, alpha, gi, opts).map(|t| (t.value, t.exact))).collect();
            let floor = irreducible_gamma_c(cfg, m, alpha, opts).ok().map(|t| t.value);
            if let Some(f) = &floor {
                fixed.insert("gamma_c_floor".into(), to_fraction(f));
            }
            let mut curve = assemble("min_gamma_c", ("gamma_I", "gamma_c"), grid, results, meta(fixed));
            let irreducible = match &floor {
                None => true,
                Some(f) => f.is_positive() && curve.points.iter().all(|p| p.y == *f),
            };
            if irreducible {
                curve.metadata.flags.push(FLAG_CROSS_IRREDUCIBLE.into());
            }
            Ok(vec![curve])
        }
    }
}

/// Exact JSON sidecar for a set of curves.
pub fn curves_to_json(curves: &[TradeoffCurve]) -> String {
    #[derive(Serialize)]
    struct Sidecar<'a> {
        curves: &'a [TradeoffCurve],
    }
    let mut text = serde_json::to_string_pretty(&Sidecar { curves }).expect("curves serialize");
    text.push('\n');
    text
}
