//! Temporal reachability evaluation.
//!
//! For each node `v` the engine keeps the set of sources that temporally reach
//! `v` as a packed bit row. Firing edge `(a, b)` ORs the row of `a` into the
//! row of `b`; processing edges in increasing time order is exact because a
//! temporal path needs strictly increasing labels.

use thiserror::Error;

use crate::graph::{check_permutation, Digraph, NodeId, OrderError, Schedule, Temporalisation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("temporalisation has {found} labels, graph has {expected} edges")]
    LabelCount { expected: usize, found: usize },
}

/// Mutable reach-set state: row `v` holds the sources that reach `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachState {
    nodes: usize,
    words: usize,
    bits: Vec<u64>,
}

impl ReachState {
    /// The state before any edge fires: every node reaches only itself.
    pub fn new(nodes: usize) -> Self {
        let words = nodes.div_ceil(64);
        let mut bits = vec![0u64; nodes * words];
        for v in 0..nodes {
            bits[v * words + v / 64] |= 1 << (v % 64);
        }
        Self { nodes, words, bits }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    fn row(&self, v: NodeId) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    /// Fires edge `(tail, head)`: everything that reaches `tail` now reaches `head`.
    #[inline]
    pub fn fire(&mut self, tail: NodeId, head: NodeId) {
        if tail == head {
            return;
        }
        let w = self.words;
        let (src, dst) = if tail < head {
            let (lo, hi) = self.bits.split_at_mut(head * w);
            (&lo[tail * w..(tail + 1) * w], &mut hi[..w])
        } else {
            let (lo, hi) = self.bits.split_at_mut(tail * w);
            (&hi[..w], &mut lo[head * w..(head + 1) * w])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= *s;
        }
    }

    /// Fires a group of equal-time edges against the state as it was before
    /// the group, so no two edges of the group chain.
    pub fn fire_simultaneous(&mut self, edges: &[(NodeId, NodeId)]) {
        match edges {
            [] => {}
            [(a, b)] => self.fire(*a, *b),
            _ => {
                let w = self.words;
                let mut pending = Vec::with_capacity(edges.len() * w);
                for &(a, _) in edges {
                    pending.extend_from_slice(self.row(a));
                }
                for (i, &(_, b)) in edges.iter().enumerate() {
                    let dst = &mut self.bits[b * w..(b + 1) * w];
                    for (d, s) in dst.iter_mut().zip(&pending[i * w..(i + 1) * w]) {
                        *d |= *s;
                    }
                }
            }
        }
    }

    /// True iff `source` temporally reaches `target`.
    pub fn reaches(&self, source: NodeId, target: NodeId) -> bool {
        self.row(target)[source / 64] >> (source % 64) & 1 == 1
    }

    /// Number of ordered reachable pairs, reflexive pairs included.
    pub fn total(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Sources reaching `target`, ascending.
    pub fn sources_of(&self, target: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        for (wi, &word) in self.row(target).iter().enumerate() {
            let mut word = word;
            while word != 0 {
                out.push(wi * 64 + word.trailing_zeros() as usize);
                word &= word - 1;
            }
        }
        out
    }

    pub fn into_result(self) -> ReachabilityResult {
        let mut per_source_counts = vec![0u64; self.nodes];
        for v in 0..self.nodes {
            for (wi, &word) in self.row(v).iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    per_source_counts[wi * 64 + word.trailing_zeros() as usize] += 1;
                    word &= word - 1;
                }
            }
        }
        let total = per_source_counts.iter().sum();
        ReachabilityResult {
            state: self,
            per_source_counts,
            total,
        }
    }
}

/// Outcome of evaluating one temporalisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityResult {
    state: ReachState,
    per_source_counts: Vec<u64>,
    total: u64,
}

impl ReachabilityResult {
    pub fn total(&self) -> u64 {
        self.total
    }

    /// `per_source_counts()[u]` is the number of nodes `u` reaches, itself included.
    pub fn per_source_counts(&self) -> &[u64] {
        &self.per_source_counts
    }

    pub fn reaches(&self, source: NodeId, target: NodeId) -> bool {
        self.state.reaches(source, target)
    }

    /// Sources that reach `target`, ascending.
    pub fn reach_from(&self, target: NodeId) -> Vec<NodeId> {
        self.state.sources_of(target)
    }

    /// Nodes reached from `source`, ascending.
    pub fn reached_by(&self, source: NodeId) -> Vec<NodeId> {
        (0..self.state.nodes)
            .filter(|&v| self.state.reaches(source, v))
            .collect()
    }
}

/// Evaluates the temporalisation that gives the `i`-th edge of `schedule` time `i + 1`.
pub fn evaluate_schedule(
    g: &Digraph,
    schedule: &Schedule,
) -> Result<ReachabilityResult, EvalError> {
    evaluate_order(g, schedule.order())
}

/// Same as [`evaluate_schedule`] over a raw index slice.
pub fn evaluate_order(g: &Digraph, order: &[usize]) -> Result<ReachabilityResult, EvalError> {
    check_permutation(order, g.edge_count())?;
    Ok(run_order(g, order).into_result())
}

/// Fires `order` without validation; callers guarantee a permutation.
pub(crate) fn run_order(g: &Digraph, order: &[usize]) -> ReachState {
    let mut state = ReachState::new(g.node_count());
    let edges = g.edges();
    for &e in order {
        let (a, b) = edges[e];
        state.fire(a, b);
    }
    state
}

/// Total reachability of `order` (assumed to be a permutation).
pub(crate) fn total_of(g: &Digraph, order: &[usize]) -> u64 {
    run_order(g, order).total()
}

/// Evaluates a temporalisation with possibly repeated labels. Edges sharing a
/// label fire simultaneously and never chain.
pub fn evaluate_temporalisation(
    g: &Digraph,
    t: &Temporalisation,
) -> Result<ReachabilityResult, EvalError> {
    if t.len() != g.edge_count() {
        return Err(EvalError::LabelCount {
            expected: g.edge_count(),
            found: t.len(),
        });
    }
    let order = t.to_schedule().into_order();
    let times = t.times();
    let mut state = ReachState::new(g.node_count());
    let mut group = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let label = times[order[start]];
        let end = start
            + order[start..]
                .iter()
                .take_while(|&&e| times[e] == label)
                .count();
        group.clear();
        group.extend(order[start..end].iter().map(|&e| g.edge(e)));
        state.fire_simultaneous(&group);
        start = end;
    }
    Ok(state.into_result())
}
