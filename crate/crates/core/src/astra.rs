//! Edge-disjoint out/in arborescence pairs sharing a root.
//!
//! The objective for a root is `min(|out_nodes|, |in_nodes|)`, both counts
//! including the root. [`exact_pair`] finds the optimum by enumerating rooted
//! out-trees with bounding; for a fixed out-tree the best in-tree is the
//! breadth-first in-tree of the residual graph, so only out-trees need search.
//! [`greedy_pair`] is the scalable heuristic used by the arborescence solver.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Digraph, EdgeId, NodeId};
use crate::scc::is_strongly_connected;

/// Default edge limit for [`exact_pair`].
pub const EXACT_EDGE_LIMIT: usize = 20;

/// Number of seeded shuffled attempts [`greedy_pair`] makes on top of the two
/// index-ordered ones.
pub const GREEDY_SHUFFLES: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AstraError {
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("edge {0} is a self-loop")]
    SelfLoop(EdgeId),
    #[error("root {root} out of range for {node_count} nodes")]
    RootOutOfRange { root: NodeId, node_count: usize },
    #[error("exact search infeasible at this scale: {edges} edges exceeds limit {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error("chain length k must be at least 1")]
    ZeroChainLength,
    #[error("need at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("{requested} extra edges requested but only {available} non-cycle edges exist")]
    TooManyExtraEdges { requested: usize, available: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArborescencePair {
    pub root: NodeId,
    /// Edges of the out-arborescence, ascending.
    pub out_edges: Vec<EdgeId>,
    /// Edges of the in-arborescence, ascending.
    pub in_edges: Vec<EdgeId>,
    /// Nodes spanned by the out-arborescence, ascending, root included.
    pub out_nodes: Vec<NodeId>,
    /// Nodes spanned by the in-arborescence, ascending, root included.
    pub in_nodes: Vec<NodeId>,
}

impl ArborescencePair {
    pub fn min_size(&self) -> usize {
        self.out_nodes.len().min(self.in_nodes.len())
    }

    pub fn size_sum(&self) -> usize {
        self.out_nodes.len() + self.in_nodes.len()
    }

    /// Distance from the root along out-tree edges, `None` off the tree.
    pub fn out_depths(&self, g: &Digraph) -> Vec<Option<usize>> {
        tree_depths(g, self.root, &self.out_edges, false)
    }

    /// Distance to the root along in-tree edges, `None` off the tree.
    pub fn in_depths(&self, g: &Digraph) -> Vec<Option<usize>> {
        tree_depths(g, self.root, &self.in_edges, true)
    }

    fn rank_key(&self) -> (usize, usize) {
        (self.min_size(), self.size_sum())
    }

    /// Total order used for selection: larger min, then larger sum, then
    /// lexicographically smaller edge sets rank higher.
    fn better_than(&self, other: &Self) -> bool {
        match self.rank_key().cmp(&other.rank_key()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                (&self.out_edges, &self.in_edges) < (&other.out_edges, &other.in_edges)
            }
        }
    }
}

fn tree_depths(
    g: &Digraph,
    root: NodeId,
    edges: &[EdgeId],
    toward_root: bool,
) -> Vec<Option<usize>> {
    let mut children = vec![Vec::new(); g.node_count()];
    for &e in edges {
        let (a, b) = g.edge(e);
        if toward_root {
            children[b].push(a);
        } else {
            children[a].push(b);
        }
    }
    let mut depth = vec![None; g.node_count()];
    depth[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = depth[v].unwrap_or(0);
        for &c in &children[v] {
            if depth[c].is_none() {
                depth[c] = Some(d + 1);
                queue.push_back(c);
            }
        }
    }
    depth
}

/// Checks every structural property of a pair against `g`: edge
/// disjointness, root membership, and that each edge set is a tree oriented
/// away from (out) or toward (in) the root covering exactly its node set.
pub fn check_pair(g: &Digraph, pair: &ArborescencePair) -> Result<(), String> {
    let out: HashSet<_> = pair.out_edges.iter().copied().collect();
    if let Some(e) = pair.in_edges.iter().find(|e| out.contains(e)) {
        return Err(format!("edge {e} used by both trees"));
    }
    check_tree(g, pair.root, &pair.out_edges, &pair.out_nodes, false)
        .map_err(|m| format!("out: {m}"))?;
    check_tree(g, pair.root, &pair.in_edges, &pair.in_nodes, true).map_err(|m| format!("in: {m}"))
}

fn check_tree(
    g: &Digraph,
    root: NodeId,
    edges: &[EdgeId],
    nodes: &[NodeId],
    toward_root: bool,
) -> Result<(), String> {
    let n = g.node_count();
    if root >= n {
        return Err("root out of range".into());
    }
    let node_set: HashSet<_> = nodes.iter().copied().collect();
    if node_set.len() != nodes.len() {
        return Err("repeated node".into());
    }
    if !node_set.contains(&root) {
        return Err("root not spanned".into());
    }
    if edges.len() + 1 != nodes.len() {
        return Err(format!("{} edges for {} nodes", edges.len(), nodes.len()));
    }
    // every non-root node has exactly one edge toward its parent
    let mut parent_edges = vec![0usize; n];
    let mut seen_edge = HashSet::new();
    for &e in edges {
        if e >= g.edge_count() || !seen_edge.insert(e) {
            return Err(format!("bad edge {e}"));
        }
        let (a, b) = g.edge(e);
        let (parent, child) = if toward_root { (b, a) } else { (a, b) };
        if !node_set.contains(&parent) || !node_set.contains(&child) {
            return Err(format!("edge {e} leaves the node set"));
        }
        if child == root {
            return Err(format!("edge {e} points the wrong way at the root"));
        }
        parent_edges[child] += 1;
    }
    for &v in nodes {
        if v != root && parent_edges[v] != 1 {
            return Err(format!("node {v} has {} parent edges", parent_edges[v]));
        }
    }
    // connected from the root
    let depths = tree_depths(g, root, edges, toward_root);
    if let Some(v) = nodes.iter().find(|&&v| depths[v].is_none()) {
        return Err(format!("node {v} not connected to the root"));
    }
    Ok(())
}

fn require_searchable(g: &Digraph, root: NodeId) -> Result<(), AstraError> {
    if root >= g.node_count() {
        return Err(AstraError::RootOutOfRange {
            root,
            node_count: g.node_count(),
        });
    }
    require_strongly_connected(g)
}

fn require_strongly_connected(g: &Digraph) -> Result<(), AstraError> {
    if let Some(e) = g.first_self_loop() {
        return Err(AstraError::SelfLoop(e));
    }
    if !is_strongly_connected(g) {
        return Err(AstraError::NotStronglyConnected);
    }
    Ok(())
}

/// Breadth-first tree grown from `root`, skipping `blocked` edges. Neighbors
/// are scanned in the order given by `adj`. Returns the tree edges and the
/// spanned nodes as flags.
fn bfs_tree(
    g: &Digraph,
    root: NodeId,
    adj: &[Vec<EdgeId>],
    blocked: &[bool],
    toward_root: bool,
) -> (Vec<EdgeId>, Vec<bool>) {
    let mut spanned = vec![false; g.node_count()];
    spanned[root] = true;
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &e in &adj[v] {
            if blocked[e] {
                continue;
            }
            let (a, b) = g.edge(e);
            let next = if toward_root { a } else { b };
            if !spanned[next] {
                spanned[next] = true;
                tree.push(e);
                queue.push_back(next);
            }
        }
    }
    (tree, spanned)
}

fn assemble(
    root: NodeId,
    mut out_edges: Vec<EdgeId>,
    out: &[bool],
    mut in_edges: Vec<EdgeId>,
    inn: &[bool],
) -> ArborescencePair {
    out_edges.sort_unstable();
    in_edges.sort_unstable();
    let flags = |f: &[bool]| {
        f.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(v, _)| v)
            .collect()
    };
    ArborescencePair {
        root,
        out_edges,
        in_edges,
        out_nodes: flags(out),
        in_nodes: flags(inn),
    }
}

/// Builds one tree, removes its edges, and builds the other in the residual
/// graph; tries both build orders with index-ordered neighbor scans and then
/// [`GREEDY_SHUFFLES`] seeded shuffles, keeping the best attempt.
pub fn greedy_pair(g: &Digraph, root: NodeId, seed: u64) -> Result<ArborescencePair, AstraError> {
    require_searchable(g, root)?;
    Ok(greedy_pair_unchecked(g, root, seed))
}

fn greedy_pair_unchecked(g: &Digraph, root: NodeId, seed: u64) -> ArborescencePair {
    let out_adj = g.out_edges();
    let in_adj = g.in_edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(root as u64);

    let attempt = |out_adj: &[Vec<EdgeId>], in_adj: &[Vec<EdgeId>], in_first: bool| {
        let mut blocked = vec![false; g.edge_count()];
        if in_first {
            let (in_tree, in_nodes) = bfs_tree(g, root, in_adj, &blocked, true);
            for &e in &in_tree {
                blocked[e] = true;
            }
            let (out_tree, out_nodes) = bfs_tree(g, root, out_adj, &blocked, false);
            assemble(root, out_tree, &out_nodes, in_tree, &in_nodes)
        } else {
            let (out_tree, out_nodes) = bfs_tree(g, root, out_adj, &blocked, false);
            for &e in &out_tree {
                blocked[e] = true;
            }
            let (in_tree, in_nodes) = bfs_tree(g, root, in_adj, &blocked, true);
            assemble(root, out_tree, &out_nodes, in_tree, &in_nodes)
        }
    };

    let mut best = attempt(&out_adj, &in_adj, true);
    let consider = |cand: ArborescencePair, best: &mut ArborescencePair| {
        if cand.rank_key() > best.rank_key() {
            *best = cand;
        }
    };
    consider(attempt(&out_adj, &in_adj, false), &mut best);
    for i in 0..GREEDY_SHUFFLES {
        let mut out_s = out_adj.clone();
        let mut in_s = in_adj.clone();
        for list in out_s.iter_mut().chain(in_s.iter_mut()) {
            list.shuffle(&mut rng);
        }
        let in_first = if i % 2 == 0 {
            rng.random_bool(0.5)
        } else {
            i % 4 == 1
        };
        consider(attempt(&out_s, &in_s, in_first), &mut best);
    }
    best
}

/// Exact optimum of the pair objective at `root`. Ties are broken by larger
/// size sum, then by the lexicographically smallest (out, in) edge lists.
pub fn exact_pair(g: &Digraph, root: NodeId, limit: usize) -> Result<ArborescencePair, AstraError> {
    if g.edge_count() > limit {
        return Err(AstraError::TooLarge {
            edges: g.edge_count(),
            limit,
        });
    }
    require_searchable(g, root)?;
    Ok(ExactSearch::new(g, root).run())
}

struct ExactSearch<'g> {
    g: &'g Digraph,
    root: NodeId,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
    in_tree: Vec<bool>,
    tree_edges: Vec<EdgeId>,
    used: Vec<bool>,
    excluded: Vec<bool>,
    best: Option<ArborescencePair>,
}

impl<'g> ExactSearch<'g> {
    fn new(g: &'g Digraph, root: NodeId) -> Self {
        let mut in_tree = vec![false; g.node_count()];
        in_tree[root] = true;
        Self {
            g,
            root,
            out_adj: g.out_edges(),
            in_adj: g.in_edges(),
            in_tree,
            tree_edges: Vec::new(),
            used: vec![false; g.edge_count()],
            excluded: vec![false; g.edge_count()],
            best: None,
        }
    }

    fn run(mut self) -> ArborescencePair {
        self.descend();
        self.best.expect("the single-node pair is always feasible")
    }

    fn frontier_edge(&self) -> Option<EdgeId> {
        (0..self.g.edge_count()).find(|&e| {
            let (a, b) = self.g.edge(e);
            !self.excluded[e] && self.in_tree[a] && !self.in_tree[b]
        })
    }

    /// Nodes the current tree could still grow to, counting current nodes.
    fn out_bound(&self) -> usize {
        let mut seen = self.in_tree.clone();
        let mut queue: VecDeque<_> = (0..seen.len()).filter(|&v| seen[v]).collect();
        let mut count = queue.len();
        while let Some(v) = queue.pop_front() {
            for &e in &self.out_adj[v] {
                let b = self.g.edge(e).1;
                if !self.excluded[e] && !seen[b] {
                    seen[b] = true;
                    count += 1;
                    queue.push_back(b);
                }
            }
        }
        count
    }

    fn descend(&mut self) {
        let (in_edges, in_nodes) = bfs_tree(self.g, self.root, &self.in_adj, &self.used, true);
        let in_bound = in_nodes.iter().filter(|&&s| s).count();
        let out_bound = self.out_bound();
        if let Some(best) = &self.best {
            let bound = (out_bound.min(in_bound), out_bound + in_bound);
            if bound < best.rank_key() {
                return;
            }
        }
        match self.frontier_edge() {
            None => {
                let cand = assemble(
                    self.root,
                    self.tree_edges.clone(),
                    &self.in_tree,
                    in_edges,
                    &in_nodes,
                );
                if self.best.as_ref().is_none_or(|b| cand.better_than(b)) {
                    self.best = Some(cand);
                }
            }
            Some(e) => {
                let head = self.g.edge(e).1;
                self.in_tree[head] = true;
                self.used[e] = true;
                self.tree_edges.push(e);
                self.descend();
                self.tree_edges.pop();
                self.used[e] = false;
                self.in_tree[head] = false;

                self.excluded[e] = true;
                self.descend();
                self.excluded[e] = false;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PairMethod {
    Exact { limit: usize },
    Greedy { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootValue {
    pub root: NodeId,
    pub min_size: usize,
    pub out_size: usize,
    pub in_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AstraReport {
    pub per_root: Vec<RootValue>,
    pub best_root: NodeId,
    pub best_min: usize,
    pub ratio: f64,
    pub method: PairMethod,
}

pub fn pair_for_root(
    g: &Digraph,
    root: NodeId,
    method: PairMethod,
) -> Result<ArborescencePair, AstraError> {
    match method {
        PairMethod::Exact { limit } => exact_pair(g, root, limit),
        PairMethod::Greedy { seed } => greedy_pair(g, root, seed),
    }
}

/// Runs the pair search at every root. The best root maximizes the min size;
/// ties go to the smallest root id.
pub fn best_root(g: &Digraph, method: PairMethod) -> Result<AstraReport, AstraError> {
    if let PairMethod::Exact { limit } = method {
        if g.edge_count() > limit {
            return Err(AstraError::TooLarge {
                edges: g.edge_count(),
                limit,
            });
        }
    }
    require_strongly_connected(g)?;
    if g.node_count() == 0 {
        return Err(AstraError::TooFewNodes(0));
    }
    let per_root: Vec<RootValue> = (0..g.node_count())
        .into_par_iter()
        .map(|root| {
            let pair = match method {
                PairMethod::Exact { .. } => ExactSearch::new(g, root).run(),
                PairMethod::Greedy { seed } => greedy_pair_unchecked(g, root, seed),
            };
            RootValue {
                root,
                min_size: pair.min_size(),
                out_size: pair.out_nodes.len(),
                in_size: pair.in_nodes.len(),
            }
        })
        .collect();
    let best = per_root.iter().fold(&per_root[0], |best, r| {
        if r.min_size > best.min_size {
            r
        } else {
            best
        }
    });
    Ok(AstraReport {
        best_root: best.root,
        best_min: best.min_size,
        ratio: best.min_size as f64 / g.node_count() as f64,
        method,
        per_root,
    })
}

/// Role names for the lower-bound family, by node id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fig3Role {
    X,
    Y,
    Xi(usize),
    Yi(usize),
    Z(usize, usize),
}

impl std::fmt::Display for Fig3Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fig3Role::X => write!(f, "x"),
            Fig3Role::Y => write!(f, "y"),
            Fig3Role::Xi(i) => write!(f, "x_{i}"),
            Fig3Role::Yi(i) => write!(f, "y_{i}"),
            Fig3Role::Z(i, j) => write!(f, "z_{i},{j}"),
        }
    }
}

/// The three-branch family on `3k + 8` nodes in which no common-root pair has
/// both trees larger than `k + 8`.
///
/// Node ids: `x = 0`, `y = 1`, then `x_i, y_i` at `2i, 2i + 1` for
/// `i = 1..=3`, then `z_{i,j}` at `8 + (i-1)k + (j-1)`. Edges: `(x, y)`, then
/// per branch `(y, x_i), (x_i, y_i), (y_i, x), (y_i, z_{i,1}), (z_{i,k}, x_i)`,
/// then the three `z` chains.
pub fn gen_fig3(k: usize) -> Result<(Digraph, Vec<Fig3Role>), AstraError> {
    if k == 0 {
        return Err(AstraError::ZeroChainLength);
    }
    let n = 3 * k + 8;
    let x = 0;
    let y = 1;
    let xi = |i: usize| 2 * i;
    let yi = |i: usize| 2 * i + 1;
    let z = |i: usize, j: usize| 8 + (i - 1) * k + (j - 1);

    let mut roles = vec![Fig3Role::X, Fig3Role::Y];
    for i in 1..=3 {
        roles.push(Fig3Role::Xi(i));
        roles.push(Fig3Role::Yi(i));
    }
    for i in 1..=3 {
        for j in 1..=k {
            roles.push(Fig3Role::Z(i, j));
        }
    }

    let mut edges = vec![(x, y)];
    for i in 1..=3 {
        edges.extend([
            (y, xi(i)),
            (xi(i), yi(i)),
            (yi(i), x),
            (yi(i), z(i, 1)),
            (z(i, k), xi(i)),
        ]);
    }
    for i in 1..=3 {
        for j in 1..k {
            edges.push((z(i, j), z(i, j + 1)));
        }
    }
    let g = Digraph::new(n, edges).expect("ids are in range by construction");
    Ok((g, roles))
}

/// A random Hamiltonian cycle plus `extra_edges` distinct random non-loop
/// edges not already on the cycle. Randomness is ChaCha8 seeded with `seed`.
pub fn gen_random_sc(n: usize, extra_edges: usize, seed: u64) -> Result<Digraph, AstraError> {
    if n < 2 {
        return Err(AstraError::TooFewNodes(n));
    }
    let available = n * (n - 1) - n;
    if extra_edges > available {
        return Err(AstraError::TooManyExtraEdges {
            requested: extra_edges,
            available,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<NodeId> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges: Vec<(NodeId, NodeId)> = (0..n).map(|i| (perm[i], perm[(i + 1) % n])).collect();
    if n == 2 {
        // both directions of the single pair are already on the cycle
        return Ok(Digraph::new(n, edges).expect("in range"));
    }
    let mut present: HashSet<(NodeId, NodeId)> = edges.iter().copied().collect();
    if extra_edges * 2 > available {
        let mut candidates: Vec<_> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && !present.contains(&(a, b)))
            .collect();
        candidates.shuffle(&mut rng);
        edges.extend(candidates.into_iter().take(extra_edges));
    } else {
        while edges.len() < n + extra_edges {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a != b && present.insert((a, b)) {
                edges.push((a, b));
            }
        }
    }
    Ok(Digraph::new(n, edges).expect("in range"))
}
