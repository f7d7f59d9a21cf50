//! Schedule search: exhaustive enumeration, seeded local search, and the
//! arborescence construction.
//!
//! Every solver is deterministic. Independent branches (first edge of the
//! enumeration, restarts, roots) run in parallel on the rayon pool and are
//! merged by maximum total with a fixed tie-break, so the thread count never
//! changes the answer.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::astra::{greedy_pair, ArborescencePair, AstraError};
use crate::engine::{total_of, ReachState};
use crate::graph::{Digraph, EdgeId, NodeId, Schedule};

/// Default edge limit for [`solve_exact`]; `10!` schedules.
pub const EXACT_SCHEDULE_LIMIT: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("exact search infeasible at this scale: {edges} edges exceeds limit {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error("edge {0} is a self-loop")]
    SelfLoop(EdgeId),
    #[error("root {root} out of range for {node_count} nodes")]
    RootOutOfRange { root: NodeId, node_count: usize },
    #[error(transparent)]
    Pair(#[from] AstraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    LocalSearch,
    Arborescence,
}

/// Lower-bound witness of the arborescence method: every in-tree node reaches
/// every out-tree node, so `total >= in_nodes * out_nodes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub root: NodeId,
    pub in_nodes: usize,
    pub out_nodes: usize,
}

impl Certificate {
    pub fn product(&self) -> u64 {
        self.in_nodes as u64 * self.out_nodes as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub method: Method,
    #[serde(rename = "total")]
    pub best_total: u64,
    #[serde(rename = "schedule", serialize_with = "serialize_schedule")]
    pub best_schedule: Schedule,
    pub explored: u64,
    pub certificate: Option<Certificate>,
}

fn serialize_schedule<S: serde::Serializer>(s: &Schedule, ser: S) -> Result<S::Ok, S::Error> {
    s.order().serialize(ser)
}

fn reject_self_loops(g: &Digraph) -> Result<(), SolveError> {
    match g.first_self_loop() {
        Some(e) => Err(SolveError::SelfLoop(e)),
        None => Ok(()),
    }
}

/// Higher total wins; equal totals go to the lexicographically smaller order.
fn better(a: &(u64, Vec<EdgeId>), b: &(u64, Vec<EdgeId>)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Evaluates all `m!` schedules and returns the lexicographically smallest
/// maximizer.
pub fn solve_exact(g: &Digraph, limit: usize) -> Result<SolveResult, SolveError> {
    let m = g.edge_count();
    if m > limit {
        return Err(SolveError::TooLarge { edges: m, limit });
    }
    reject_self_loops(g)?;
    if m == 0 {
        return Ok(SolveResult {
            method: Method::Exact,
            best_total: g.node_count() as u64,
            best_schedule: Schedule::identity(0),
            explored: 1,
            certificate: None,
        });
    }

    let branches: Vec<((u64, Vec<EdgeId>), u64)> = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut search = Enumeration::new(g);
            search.place(0, first);
            search.descend(1);
            (search.best, search.explored)
        })
        .collect();

    let explored = branches.iter().map(|(_, n)| n).sum();
    let (best_total, order) = branches
        .into_iter()
        .map(|(b, _)| b)
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("m > 0");
    Ok(SolveResult {
        method: Method::Exact,
        best_total,
        best_schedule: Schedule::from_vec_unchecked(order),
        explored,
        certificate: None,
    })
}

/// Depth-first enumeration in lexicographic order with one reach state per
/// prefix length, so each leaf costs a single edge firing.
struct Enumeration<'g> {
    g: &'g Digraph,
    states: Vec<ReachState>,
    used: Vec<bool>,
    prefix: Vec<EdgeId>,
    best: (u64, Vec<EdgeId>),
    explored: u64,
}

impl<'g> Enumeration<'g> {
    fn new(g: &'g Digraph) -> Self {
        let m = g.edge_count();
        Self {
            g,
            states: vec![ReachState::new(g.node_count()); m + 1],
            used: vec![false; m],
            prefix: Vec::with_capacity(m),
            best: (0, Vec::new()),
            explored: 0,
        }
    }

    /// Puts edge `e` at position `depth`, deriving `states[depth + 1]`.
    fn place(&mut self, depth: usize, e: EdgeId) {
        let (done, rest) = self.states.split_at_mut(depth + 1);
        rest[0].clone_from(&done[depth]);
        let (a, b) = self.g.edge(e);
        rest[0].fire(a, b);
        self.used[e] = true;
        self.prefix.push(e);
    }

    fn unplace(&mut self, e: EdgeId) {
        self.used[e] = false;
        self.prefix.pop();
    }

    fn descend(&mut self, depth: usize) {
        let m = self.used.len();
        if depth == m {
            self.explored += 1;
            let total = self.states[m].total();
            if total > self.best.0 {
                self.best = (total, self.prefix.clone());
            }
            return;
        }
        for e in 0..m {
            if !self.used[e] {
                self.place(depth, e);
                self.descend(depth + 1);
                self.unplace(e);
            }
        }
    }
}

/// Random-restart hill climbing over adjacent transpositions. Restart `r`
/// draws from ChaCha8 seeded with `seed` on stream `r`. A move is kept when
/// it does not lower the total. At least one restart always runs.
pub fn solve_local(
    g: &Digraph,
    seed: u64,
    restarts: u64,
    steps: u64,
) -> Result<SolveResult, SolveError> {
    reject_self_loops(g)?;
    let m = g.edge_count();
    let runs: Vec<((u64, Vec<EdgeId>), u64)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r);
            let mut order: Vec<EdgeId> = (0..m).collect();
            order.shuffle(&mut rng);
            let mut current = total_of(g, &order);
            let mut best = (current, order.clone());
            let mut evaluated = 1;
            if m >= 2 {
                for _ in 0..steps {
                    let i = rng.random_range(0..m - 1);
                    order.swap(i, i + 1);
                    let t = total_of(g, &order);
                    evaluated += 1;
                    if t >= current {
                        current = t;
                        let cand = (t, order.clone());
                        if better(&cand, &best) {
                            best = cand;
                        }
                    } else {
                        order.swap(i, i + 1);
                    }
                }
            }
            (best, evaluated)
        })
        .collect();

    let explored = runs.iter().map(|(_, n)| n).sum();
    let (best_total, order) = runs
        .into_iter()
        .map(|(b, _)| b)
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("at least one restart");
    Ok(SolveResult {
        method: Method::LocalSearch,
        best_total,
        best_schedule: Schedule::from_vec_unchecked(order),
        explored,
        certificate: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    All,
    Given(NodeId),
}

/// Schedule built from an arborescence pair: in-tree edges by non-increasing
/// depth of their tail, then out-tree edges by non-decreasing depth of their
/// head, then every other edge in index order. Ties within a phase keep
/// index order. An edge listed in both trees is kept in the in-phase only.
pub fn arborescence_schedule(g: &Digraph, pair: &ArborescencePair) -> Schedule {
    let in_depth = pair.in_depths(g);
    let out_depth = pair.out_depths(g);
    let mut placed = vec![false; g.edge_count()];

    let mut in_phase: Vec<EdgeId> = pair.in_edges.clone();
    in_phase.sort_by_key(|&e| (std::cmp::Reverse(in_depth[g.edge(e).0]), e));
    for &e in &in_phase {
        placed[e] = true;
    }
    let mut out_phase: Vec<EdgeId> = pair
        .out_edges
        .iter()
        .copied()
        .filter(|&e| !placed[e])
        .collect();
    out_phase.sort_by_key(|&e| (out_depth[g.edge(e).1], e));
    for &e in &out_phase {
        placed[e] = true;
    }
    let mut order = in_phase;
    order.extend(out_phase);
    order.extend((0..g.edge_count()).filter(|&e| !placed[e]));
    Schedule::from_vec_unchecked(order)
}

/// For each candidate root, takes the greedy edge-disjoint pair and evaluates
/// its [`arborescence_schedule`]. Returns the best root's schedule; equal
/// totals go to the smaller root id.
pub fn solve_arborescence(
    g: &Digraph,
    roots: RootChoice,
    seed: u64,
) -> Result<SolveResult, SolveError> {
    reject_self_loops(g)?;
    let candidates: Vec<NodeId> = match roots {
        RootChoice::All => (0..g.node_count()).collect(),
        RootChoice::Given(r) if r < g.node_count() => vec![r],
        RootChoice::Given(root) => {
            return Err(SolveError::RootOutOfRange {
                root,
                node_count: g.node_count(),
            })
        }
    };
    let per_root: Vec<(u64, Schedule, Certificate)> = candidates
        .into_par_iter()
        .map(|root| {
            let pair = greedy_pair(g, root, seed)?;
            let schedule = arborescence_schedule(g, &pair);
            let total = total_of(g, schedule.order());
            let cert = Certificate {
                root,
                in_nodes: pair.in_nodes.len(),
                out_nodes: pair.out_nodes.len(),
            };
            Ok((total, schedule, cert))
        })
        .collect::<Result<_, AstraError>>()?;

    let explored = per_root.len() as u64;
    let (best_total, best_schedule, cert) = per_root
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .ok_or(AstraError::TooFewNodes(0))?;
    Ok(SolveResult {
        method: Method::Arborescence,
        best_total,
        best_schedule,
        explored,
        certificate: Some(cert),
    })
}
