//! Directed graphs with stable edge indices, edge orderings and time labels,
//! plus the plain-text file formats used to persist them.
//!
//! Digraph file:
//!
//! ```text
//! n m
//! tail head        (m lines, 0-based node ids)
//! ```
//!
//! The temporal-graph file is the same with a third `time` column. A schedule
//! file is one line of whitespace-separated edge indices. Lines starting with
//! `#` and blank lines are ignored by every reader. Writers emit the canonical
//! form: single spaces, LF endings, no trailing whitespace.

use std::fmt::Write as _;

use thiserror::Error;

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: endpoint {node} out of range for {node_count} nodes")]
    EndpointOutOfRange {
        line: usize,
        node: usize,
        node_count: usize,
    },
    #[error("line {line}: time label must be >= 1")]
    ZeroTime { line: usize },
    #[error("header announces {expected} edges but {found} were given")]
    CountMismatch { expected: usize, found: usize },
    #[error("missing header line")]
    MissingHeader,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("schedule has {found} entries, graph has {expected} edges")]
    Length { expected: usize, found: usize },
    #[error("edge index {0} out of range")]
    OutOfRange(EdgeId),
    #[error("edge index {0} appears more than once")]
    Duplicate(EdgeId),
}

/// An immutable directed graph. Edge `i` is the `i`-th edge given at
/// construction time; indices never move. Self-loops and parallel edges are
/// representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
}

impl Digraph {
    /// Builds a digraph, checking every endpoint against `node_count`.
    pub fn new(node_count: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Self, FormatError> {
        for (i, &(a, b)) in edges.iter().enumerate() {
            for node in [a, b] {
                if node >= node_count {
                    return Err(FormatError::EndpointOutOfRange {
                        line: i + 2,
                        node,
                        node_count,
                    });
                }
            }
        }
        Ok(Self { node_count, edges })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e]
    }

    pub fn first_self_loop(&self) -> Option<EdgeId> {
        self.edges.iter().position(|&(a, b)| a == b)
    }

    /// Outgoing edge ids per node, in increasing edge-index order.
    pub fn out_edges(&self) -> Vec<Vec<EdgeId>> {
        let mut out = vec![Vec::new(); self.node_count];
        for (e, &(a, _)) in self.edges.iter().enumerate() {
            out[a].push(e);
        }
        out
    }

    /// Incoming edge ids per node, in increasing edge-index order.
    pub fn in_edges(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.node_count];
        for (e, &(_, b)) in self.edges.iter().enumerate() {
            inc[b].push(e);
        }
        inc
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or(FormatError::MissingHeader)?;
        let [n, m] = parse_fields::<2>(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, body) in lines {
            let [a, b] = parse_fields::<2>(line, body)?;
            check_endpoints(line, n, a, b)?;
            edges.push((a, b));
        }
        if edges.len() != m {
            return Err(FormatError::CountMismatch {
                expected: m,
                found: edges.len(),
            });
        }
        Ok(Self {
            node_count: n,
            edges,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.node_count, self.edges.len());
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }
}

/// One natural time label per edge; equal labels are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Temporalisation {
    times: Vec<u64>,
}

impl Temporalisation {
    pub fn new(times: Vec<u64>) -> Result<Self, FormatError> {
        if let Some(i) = times.iter().position(|&t| t == 0) {
            return Err(FormatError::ZeroTime { line: i + 2 });
        }
        Ok(Self { times })
    }

    pub fn times(&self) -> &[u64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Assigns time `i + 1` to the `i`-th edge of `schedule`.
    pub fn from_schedule(schedule: &Schedule) -> Self {
        let mut times = vec![0; schedule.len()];
        for (pos, &e) in schedule.order().iter().enumerate() {
            times[e] = pos as u64 + 1;
        }
        Self { times }
    }

    /// Stable sort of edge indices by label. Ties keep index order, so every
    /// temporal path of `self` stays valid in the result; reachability can
    /// only grow.
    pub fn to_schedule(&self) -> Schedule {
        let mut order: Vec<EdgeId> = (0..self.times.len()).collect();
        order.sort_by_key(|&e| self.times[e]);
        Schedule { order }
    }

    /// Reads a temporal-graph file: header `n m`, then `tail head time`.
    pub fn parse_temporal_graph(text: &str) -> Result<(Digraph, Self), FormatError> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or(FormatError::MissingHeader)?;
        let [n, m] = parse_fields::<2>(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        let mut times = Vec::with_capacity(m);
        for (line, body) in lines {
            let [a, b, t] = parse_fields::<3>(line, body)?;
            check_endpoints(line, n, a, b)?;
            if t == 0 {
                return Err(FormatError::ZeroTime { line });
            }
            edges.push((a, b));
            times.push(t as u64);
        }
        if edges.len() != m {
            return Err(FormatError::CountMismatch {
                expected: m,
                found: edges.len(),
            });
        }
        Ok((
            Digraph {
                node_count: n,
                edges,
            },
            Self { times },
        ))
    }

    pub fn to_temporal_text(&self, g: &Digraph) -> String {
        let mut s = format!("{} {}\n", g.node_count(), g.edge_count());
        for (&(a, b), t) in g.edges().iter().zip(&self.times) {
            let _ = writeln!(s, "{a} {b} {t}");
        }
        s
    }

    /// Reads one line of whitespace-separated labels.
    pub fn parse_labels(text: &str) -> Result<Self, FormatError> {
        let times = parse_index_line(text)?
            .into_iter()
            .map(|(line, v)| {
                if v == 0 {
                    Err(FormatError::ZeroTime { line })
                } else {
                    Ok(v as u64)
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { times })
    }
}

/// A total order on the edges of a digraph: `order[i]` is the edge that fires
/// at time `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schedule {
    order: Vec<EdgeId>,
}

impl Schedule {
    /// Validates that `order` is a permutation of `0..edge_count`.
    pub fn new(order: Vec<EdgeId>, edge_count: usize) -> Result<Self, OrderError> {
        check_permutation(&order, edge_count)?;
        Ok(Self { order })
    }

    pub fn identity(edge_count: usize) -> Self {
        Self {
            order: (0..edge_count).collect(),
        }
    }

    pub(crate) fn from_vec_unchecked(order: Vec<EdgeId>) -> Self {
        Self { order }
    }

    pub fn order(&self) -> &[EdgeId] {
        &self.order
    }

    pub fn into_order(self) -> Vec<EdgeId> {
        self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Parses a schedule file without checking it against a graph.
    pub fn parse(text: &str) -> Result<Vec<EdgeId>, FormatError> {
        Ok(parse_index_line(text)?
            .into_iter()
            .map(|(_, v)| v)
            .collect())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, e) in self.order.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{e}");
        }
        s.push('\n');
        s
    }
}

pub(crate) fn check_permutation(order: &[EdgeId], edge_count: usize) -> Result<(), OrderError> {
    if order.len() != edge_count {
        return Err(OrderError::Length {
            expected: edge_count,
            found: order.len(),
        });
    }
    let mut seen = vec![false; edge_count];
    for &e in order {
        if e >= edge_count {
            return Err(OrderError::OutOfRange(e));
        }
        if std::mem::replace(&mut seen[e], true) {
            return Err(OrderError::Duplicate(e));
        }
    }
    Ok(())
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_fields<const N: usize>(line: usize, body: &str) -> Result<[usize; N], FormatError> {
    let mut out = [0usize; N];
    let mut tokens = body.split_whitespace();
    for slot in out.iter_mut() {
        let tok = tokens.next().ok_or_else(|| FormatError::Syntax {
            line,
            msg: format!("expected {N} fields"),
        })?;
        *slot = tok.parse().map_err(|_| FormatError::Syntax {
            line,
            msg: format!("invalid number {tok:?}"),
        })?;
    }
    if tokens.next().is_some() {
        return Err(FormatError::Syntax {
            line,
            msg: format!("expected {N} fields"),
        });
    }
    Ok(out)
}

fn check_endpoints(line: usize, n: usize, a: usize, b: usize) -> Result<(), FormatError> {
    for node in [a, b] {
        if node >= n {
            return Err(FormatError::EndpointOutOfRange {
                line,
                node,
                node_count: n,
            });
        }
    }
    Ok(())
}

fn parse_index_line(text: &str) -> Result<Vec<(usize, usize)>, FormatError> {
    let mut out = Vec::new();
    for (line, body) in content_lines(text) {
        for tok in body.split_whitespace() {
            let v = tok.parse().map_err(|_| FormatError::Syntax {
                line,
                msg: format!("invalid number {tok:?}"),
            })?;
            out.push((line, v));
        }
    }
    Ok(out)
}
