//! Dinic's algorithm over exact integer capacities.

use std::collections::VecDeque;

use num_traits::{CheckedAdd, CheckedSub, Zero};

pub(crate) trait FlowAmount: Clone + Ord + Zero + CheckedAdd + CheckedSub {}

impl<T: Clone + Ord + Zero + CheckedAdd + CheckedSub> FlowAmount for T {}

pub(crate) struct FlowNetwork<T> {
    adj: Vec<Vec<usize>>,
    head: Vec<usize>,
    residual: Vec<T>,
}

impl<T: FlowAmount> FlowNetwork<T> {
    pub fn new(vertices: usize) -> Self {
        Self { adj: vec![Vec::new(); vertices], head: Vec::new(), residual: Vec::new() }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, capacity: T) {
        // edge e and its reverse e ^ 1
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.residual.push(capacity);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.residual.push(T::zero());
    }

    /// Maximum flow from `source` to `sink`, or `None` if an intermediate
    /// sum overflows `T`.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> Option<T> {
        let mut total = T::zero();
        loop {
            let Some(level) = self.levels(source, sink) else {
                return Some(total);
            };
            let mut next = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.augment(source, sink, None, &level, &mut next)?;
                if pushed.is_zero() {
                    break;
                }
                total = total.checked_add(&pushed)?;
            }
        }
    }

    #[cfg(test)]
    /// Vertices reachable from `source` in the residual graph.
    pub fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let w = self.head[e];
                if !seen[w] && !self.residual[e].is_zero() {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    fn levels(&self, source: usize, sink: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let w = self.head[e];
                if level[w] == usize::MAX && !self.residual[e].is_zero() {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        (level[sink] != usize::MAX).then_some(level)
    }

    /// One blocking-flow path; `limit == None` means unbounded.
    fn augment(&mut self, v: usize, sink: usize, limit: Option<&T>, level: &[usize], next: &mut [usize]) -> Option<T> {
        if v == sink {
            return Some(limit.cloned().expect("source is never the sink"));
        }
        while next[v] < self.adj[v].len() {
            let e = self.adj[v][next[v]];
            let w = self.head[e];
            if level[w] == level[v] + 1 && !self.residual[e].is_zero() {
                let cap = match limit {
                    Some(l) if *l < self.residual[e] => l.clone(),
                    _ => self.residual[e].clone(),
                };
                let pushed = self.augment(w, sink, Some(&cap), level, next)?;
                if !pushed.is_zero() {
                    self.residual[e] = self.residual[e].checked_sub(&pushed)?;
                    self.residual[e ^ 1] = self.residual[e ^ 1].checked_add(&pushed)?;
                    return Some(pushed);
                }
            }
            next[v] += 1;
        }
        Some(T::zero())
    }
}
