//! Storage capacity of clustered distributed storage systems.
//!
//! A file is spread over `n` nodes grouped into `L` equal clusters; any `k`
//! nodes suffice to rebuild it. A failed node is regenerated from every
//! surviving node, pulling `beta_I` from each node in its own cluster and
//! `beta_c` from each node outside it. This crate computes exactly how large
//! a file such a system can hold for given storage `alpha` and repair
//! bandwidths:
//!
//! * [`capacity::capacity`] evaluates the closed form,
//! * [`flowgraph::brute_force_capacity`] recomputes it by max-flow over every
//!   candidate information flow graph,
//! * [`tradeoff`] turns the closed form into resource trade-off curves.
//!
//! All arithmetic is over exact rationals.
//!
//! ```
//! use cdss::{capacity::capacity, model::{ResourceAllocation, SystemConfig}, rational::{int, ratio}};
//!
//! let cfg = SystemConfig::new(4, 3, 2).unwrap();
//! let res = ResourceAllocation::new(&cfg, int(10), int(1), ratio(1, 2)).unwrap();
//! assert_eq!(capacity(&cfg, &res).unwrap(), int(4));
//! ```

pub mod bisect;
pub mod capacity;
pub mod cli;
pub mod error;
pub mod flowgraph;
mod maxflow;
pub mod model;
pub mod rational;
pub mod tradeoff;
pub mod verify;

pub use error::{Error, Result};
pub use model::{OrderingVector, ResourceAllocation, SelectionVector, SystemConfig};
pub use rational::Rational;
