use thiserror::Error;

use crate::rational::{to_fraction, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cluster count L={clusters} does not divide node count n={nodes}")]
    NonDividing { nodes: usize, clusters: usize },
    #[error("k={k} must satisfy 1 <= k < n={n}")]
    InvalidK { n: usize, k: usize },
    #[error("n={0} must be at least 2")]
    InvalidN(usize),
    #[error("cluster count must be at least 1")]
    InvalidClusterCount,
    #[error("{name} must be non-negative, got {}", to_fraction(.value))]
    NegativeResource { name: &'static str, value: Box<Rational> },
    #[error("beta_I={} < beta_c={} violates beta_I >= beta_c", to_fraction(.beta_i), to_fraction(.beta_c))]
    AssumptionViolated { beta_i: Box<Rational>, beta_c: Box<Rational> },
    #[error("invalid selection vector: {0}")]
    InvalidSelection(String),
    #[error("invalid ordering vector: {0}")]
    InvalidOrdering(String),
    #[error("inconsistent arguments: {0}")]
    InconsistentArguments(String),
    #[error("collector is unreachable from the source")]
    Disconnected,
    #[error("brute-force search needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("kappa={} outside [0, 1]", to_fraction(.0))]
    KappaOutOfRange(Box<Rational>),
    #[error("file size must be positive, got {}", to_fraction(.0))]
    InvalidFileSize(Box<Rational>),
    #[error("alpha={} is below {}, zero cross-cluster repair is unachievable",
        to_fraction(.alpha), to_fraction(.floor))]
    AlphaTooSmall { alpha: Box<Rational>, floor: Box<Rational> },
    #[error("cluster size n_I={0} leaves the zero-cross-traffic threshold formula without branches")]
    DegenerateCluster(usize),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
