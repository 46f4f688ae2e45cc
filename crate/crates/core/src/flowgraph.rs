//! Information flow graphs and their exact min-cut.
//!
//! This is the brute-force side of every capacity check: it builds the
//! sequential-failure graph for one (selection, ordering) pair and runs
//! max-flow on it, without using any closed-form weight values.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maxflow::FlowNetwork;
use crate::model::{
    check_consistent, enumerate_ordering_vectors, enumerate_selection_vectors, OrderingVector, ResourceAllocation,
    SelectionVector, SystemConfig,
};
use crate::rational::{to_fraction, Rational};

pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertex {
    Source,
    /// Input half of storage node instance `id`.
    In(usize),
    /// Output half of storage node instance `id`.
    Out(usize),
    Collector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: Vertex,
    pub to: Vertex,
    pub capacity: Capacity,
}

/// Capacitated DAG from one source to one data collector. Storage node
/// instances are numbered `0..storage_nodes`: the `n` initial nodes first,
/// then newcomers in repair order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InformationFlowGraph {
    storage_nodes: usize,
    edges: Vec<Edge>,
}

impl InformationFlowGraph {
    pub fn new(storage_nodes: usize) -> Self {
        Self { storage_nodes, edges: Vec::new() }
    }

    /// Appends a storage node instance and returns its id.
    pub fn add_storage_node(&mut self) -> usize {
        self.storage_nodes += 1;
        self.storage_nodes - 1
    }

    pub fn add_edge(&mut self, from: Vertex, to: Vertex, capacity: Capacity) {
        for v in [from, to] {
            if let Vertex::In(id) | Vertex::Out(id) = v {
                assert!(id < self.storage_nodes, "storage node {id} does not exist");
            }
        }
        self.edges.push(Edge { from, to, capacity });
    }

    pub fn storage_nodes(&self) -> usize {
        self.storage_nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.storage_nodes + 2
    }

    fn index(&self, v: Vertex) -> usize {
        match v {
            Vertex::Source => 0,
            Vertex::Collector => 1,
            Vertex::In(id) => 2 + 2 * id,
            Vertex::Out(id) => 3 + 2 * id,
        }
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.vertex_count();
        let mut indegree = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            let (u, v) = (self.index(e.from), self.index(e.to));
            out[u].push(v);
            indegree[v] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut visited = 0;
        while let Some(u) = stack.pop() {
            visited += 1;
            for &v in &out[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    stack.push(v);
                }
            }
        }
        visited == n
    }

    fn has_path(&self) -> bool {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count()];
        for e in &self.edges {
            out[self.index(e.from)].push(self.index(e.to));
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &out[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen[1]
    }

    /// Graphviz rendering; vertices `S`, `I<id>`, `O<id>`, `DC`, capacities as `p/q`.
    pub fn to_dot(&self) -> String {
        let name = |v: Vertex| match v {
            Vertex::Source => "S".to_string(),
            Vertex::Collector => "DC".to_string(),
            Vertex::In(id) => format!("I{id}"),
            Vertex::Out(id) => format!("O{id}"),
        };
        let mut dot = String::from("digraph G {\n");
        for e in &self.edges {
            let label = match &e.capacity {
                Capacity::Finite(c) => to_fraction(c),
                Capacity::Infinite => "inf".to_string(),
            };
            let _ = writeln!(dot, "  {} -> {} [label=\"{label}\"];", name(e.from), name(e.to));
        }
        dot.push_str("}\n");
        dot
    }
}

/// Sequential-failure graph: nodes `c_1..c_k` fail and are repaired in the
/// order given by `ordering`, each newcomer downloading from the current
/// instance of every other node, and the data collector reads the `k`
/// newcomers. Within a cluster the first `s_l` slots are the ones that fail.
pub fn build_worst_case_graph(
    cfg: &SystemConfig,
    res: &ResourceAllocation,
    selection: &SelectionVector,
    ordering: &OrderingVector,
) -> Result<InformationFlowGraph> {
    check_consistent(cfg, selection, ordering)?;
    if !res.matches(cfg) {
        return Err(Error::InconsistentArguments(format!("resources were built for another system than {cfg}")));
    }
    let n = cfg.n();
    let size = cfg.cluster_size();
    let alpha = Capacity::Finite(res.alpha().clone());

    let mut g = InformationFlowGraph::new(n);
    for id in 0..n {
        g.add_edge(Vertex::Source, Vertex::In(id), Capacity::Infinite);
        g.add_edge(Vertex::In(id), Vertex::Out(id), alpha.clone());
    }

    let mut current: Vec<usize> = (0..n).collect();
    let mut failed_in_cluster = vec![0usize; cfg.clusters()];
    let mut newcomers = Vec::with_capacity(cfg.k());
    for &cluster in ordering.clusters() {
        let slot = failed_in_cluster[cluster - 1];
        failed_in_cluster[cluster - 1] += 1;
        let target = (cluster - 1) * size + slot;

        let newcomer = g.add_storage_node();
        for helper in (0..n).filter(|&h| h != target) {
            let beta = if cfg.cluster_of(helper) == cluster { res.beta_i() } else { res.beta_c() };
            g.add_edge(Vertex::Out(current[helper]), Vertex::In(newcomer), Capacity::Finite(beta.clone()));
        }
        g.add_edge(Vertex::In(newcomer), Vertex::Out(newcomer), alpha.clone());
        current[target] = newcomer;
        newcomers.push(newcomer);
    }
    for id in newcomers {
        g.add_edge(Vertex::Out(id), Vertex::Collector, Capacity::Infinite);
    }
    Ok(g)
}

/// Exact source-to-collector min-cut. Capacities are scaled to integers by
/// their common denominator; infinite edges get one more than the sum of all
/// finite capacities.
pub fn min_cut(g: &InformationFlowGraph) -> Result<Rational> {
    if !g.has_path() {
        return Err(Error::Disconnected);
    }
    let scale = g
        .edges
        .iter()
        .filter_map(|e| match &e.capacity {
            Capacity::Finite(c) => Some(c.denom().clone()),
            Capacity::Infinite => None,
        })
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let scaled: Vec<Option<BigInt>> = g
        .edges
        .iter()
        .map(|e| match &e.capacity {
            Capacity::Finite(c) => Some(c.numer() * (&scale / c.denom())),
            Capacity::Infinite => None,
        })
        .collect();
    let infinite: BigInt = scaled.iter().flatten().fold(BigInt::one(), |acc, c| acc + c);
    let integral: Vec<BigInt> = scaled.into_iter().map(|c| c.unwrap_or_else(|| infinite.clone())).collect();

    let flow = match run_flow(g, &integral, |c| i128::try_from(c).ok()) {
        Some(f) => BigInt::from(f),
        None => run_flow(g, &integral, |c| Some(c.clone())).expect("bigint flow cannot overflow"),
    };
    Ok(Rational::new(flow, scale))
}

fn run_flow<T>(g: &InformationFlowGraph, capacities: &[BigInt], convert: impl Fn(&BigInt) -> Option<T>) -> Option<T>
where
    T: crate::maxflow::FlowAmount,
{
    let mut net = FlowNetwork::<T>::new(g.vertex_count());
    for (e, cap) in g.edges.iter().zip(capacities) {
        if cap.is_zero() {
            continue;
        }
        let cap = convert(cap)?;
        net.add_edge(g.index(e.from), g.index(e.to), cap);
    }
    net.max_flow(0, 1)
}

/// Every `(selection, ordering)` pair of `cfg`, checked against `budget`.
pub fn candidate_pairs(cfg: &SystemConfig, budget: u128) -> Result<Vec<(SelectionVector, OrderingVector)>> {
    let selections = enumerate_selection_vectors(cfg);
    let required: u128 = selections.iter().map(SelectionVector::ordering_count).sum();
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(selections
        .into_iter()
        .flat_map(|s| enumerate_ordering_vectors(&s).into_iter().map(move |o| (s.clone(), o)))
        .collect())
}

/// Capacity by exhaustion: the smallest max-flow over every selection and
/// ordering vector.
pub fn brute_force_capacity(cfg: &SystemConfig, res: &ResourceAllocation, budget: u128) -> Result<Rational> {
    let pairs = candidate_pairs(cfg, budget)?;
    pairs
        .par_iter()
        .map(|(s, o)| build_worst_case_graph(cfg, res, s, o).and_then(|g| min_cut(&g)))
        .try_reduce_with(|a, b| Ok(a.min(b)))
        .expect("k >= 1 gives at least one selection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn cfg(n: usize, k: usize, l: usize) -> SystemConfig {
        SystemConfig::new(n, k, l).unwrap()
    }

    fn graph(
        n: usize,
        k: usize,
        l: usize,
        s: Vec<usize>,
        pi: Vec<usize>,
        res: (Rational, Rational, Rational),
    ) -> InformationFlowGraph {
        let c = cfg(n, k, l);
        let r = ResourceAllocation::new(&c, res.0, res.1, res.2).unwrap();
        let s = SelectionVector::new(&c, s).unwrap();
        let o = OrderingVector::new(&s, pi).unwrap();
        build_worst_case_graph(&c, &r, &s, &o).unwrap()
    }

    fn count(g: &InformationFlowGraph, pred: impl Fn(&Edge) -> bool) -> usize {
        g.edges().iter().filter(|e| pred(e)).count()
    }

    #[test]
    fn edge_counts_follow_construction() {
        let g = graph(4, 3, 2, vec![2, 1], vec![1, 2, 1], (int(10), int(1), ratio(1, 2)));
        assert_eq!(g.storage_nodes(), 7);
        let repair = count(&g, |e| matches!((e.from, e.to), (Vertex::Out(_), Vertex::In(_))));
        assert_eq!(repair, 9);
        assert_eq!(count(&g, |e| e.to == Vertex::Collector), 3);
        assert_eq!(count(&g, |e| matches!((e.from, e.to), (Vertex::In(a), Vertex::Out(b)) if a == b)), 7);
        assert!(g.is_acyclic());
    }

    #[test]
    fn smallest_instance_has_single_intra_edge() {
        let g = graph(2, 1, 1, vec![1], vec![1], (int(3), int(1), int(0)));
        let repair: Vec<_> = g.edges().iter().filter(|e| e.to == Vertex::In(2)).collect();
        assert_eq!(repair.len(), 1);
        assert_eq!(repair[0].capacity, Capacity::Finite(int(1)));
    }

    #[test]
    fn single_failure_repair_pattern() {
        // n=4, L=2: the newcomer in cluster 1 gets one beta_I edge and two beta_c edges
        let g = graph(4, 1, 2, vec![1, 0], vec![1], (int(2), int(1), ratio(1, 2)));
        let into_newcomer: Vec<_> = g.edges().iter().filter(|e| e.to == Vertex::In(4)).collect();
        let intra = into_newcomer.iter().filter(|e| e.capacity == Capacity::Finite(int(1))).count();
        let cross = into_newcomer.iter().filter(|e| e.capacity == Capacity::Finite(ratio(1, 2))).count();
        assert_eq!((intra, cross), (1, 2));
        // the cheaper side is the two cross edges plus one intra edge = 2
        assert_eq!(min_cut(&g).unwrap(), int(2));
    }

    #[test]
    fn single_bottleneck_path() {
        let mut g = InformationFlowGraph::new(1);
        g.add_edge(Vertex::Source, Vertex::In(0), Capacity::Infinite);
        g.add_edge(Vertex::In(0), Vertex::Out(0), Capacity::Finite(int(3)));
        g.add_edge(Vertex::Out(0), Vertex::Collector, Capacity::Infinite);
        assert_eq!(min_cut(&g).unwrap(), int(3));
    }

    #[test]
    fn unreachable_collector_is_an_error() {
        let mut g = InformationFlowGraph::new(1);
        g.add_edge(Vertex::Source, Vertex::In(0), Capacity::Infinite);
        assert_eq!(min_cut(&g), Err(Error::Disconnected));
    }

    #[test]
    fn worked_example_min_cut() {
        let g = graph(4, 3, 2, vec![2, 1], vec![1, 2, 1], (int(10), int(1), ratio(1, 2)));
        assert_eq!(min_cut(&g).unwrap(), int(4));
    }

    #[test]
    fn non_clustered_shape_matches_classic_sum() {
        // n=4, k=3, d=3, uniform beta: sum over i of min(alpha, (n-i) beta)
        for alpha in [int(1), ratio(5, 2), int(10)] {
            let g = graph(4, 3, 1, vec![3], vec![1, 1, 1], (alpha.clone(), int(1), int(0)));
            let expected: Rational = (1..=3).map(|i| alpha.clone().min(int(4 - i))).sum();
            assert_eq!(min_cut(&g).unwrap(), expected);
        }
    }

    #[test]
    fn brute_force_examples() {
        let c = cfg(4, 3, 2);
        let r = ResourceAllocation::new(&c, int(10), int(1), ratio(1, 2)).unwrap();
        assert_eq!(brute_force_capacity(&c, &r, DEFAULT_BUDGET).unwrap(), int(4));

        let c = cfg(4, 3, 1);
        let r = ResourceAllocation::new(&c, int(10), int(1), int(1)).unwrap();
        assert_eq!(brute_force_capacity(&c, &r, DEFAULT_BUDGET).unwrap(), int(6));

        let c = cfg(6, 4, 3);
        let r = ResourceAllocation::new(&c, int(0), int(3), int(2)).unwrap();
        assert_eq!(brute_force_capacity(&c, &r, DEFAULT_BUDGET).unwrap(), int(0));
    }

    #[test]
    fn budget_is_enforced() {
        let c = cfg(8, 7, 8);
        let r = ResourceAllocation::new(&c, int(1), int(1), int(1)).unwrap();
        assert_eq!(brute_force_capacity(&c, &r, 100), Err(Error::BudgetExceeded { required: 5040, budget: 100 }));
    }

    #[test]
    fn inconsistent_arguments_are_rejected() {
        let c = cfg(4, 3, 2);
        let other = cfg(6, 3, 2);
        let r = ResourceAllocation::new(&c, int(1), int(1), int(1)).unwrap();
        let s = SelectionVector::new(&other, vec![2, 1]).unwrap();
        let o = OrderingVector::new(&s, vec![1, 1, 2]).unwrap();
        assert!(matches!(build_worst_case_graph(&other, &r, &s, &o), Err(Error::InconsistentArguments(_))));
        let s3 = SelectionVector::new(&cfg(6, 3, 3), vec![1, 1, 1]).unwrap();
        let o3 = OrderingVector::new(&s3, vec![1, 2, 3]).unwrap();
        assert!(matches!(build_worst_case_graph(&c, &r, &s3, &o3), Err(Error::InconsistentArguments(_))));
    }

    #[test]
    fn dot_output_names_vertices() {
        let g = graph(2, 1, 1, vec![1], vec![1], (ratio(3, 2), int(1), int(0)));
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph G {"));
        assert!(dot.contains("S -> I0 [label=\"inf\"];"));
        assert!(dot.contains("I0 -> O0 [label=\"3/2\"];"));
        assert!(dot.contains("O1 -> I2 [label=\"1/1\"];"));
        assert!(dot.contains("O2 -> DC"));
    }
}
