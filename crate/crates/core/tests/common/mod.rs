//! Brute-force oracles shared by the integration tests. None of them touch
//! the bit-row engine or the arborescence search they are used to check.
#![allow(dead_code)]

use mret_core::Digraph;

/// Counts reachable ordered pairs by enumerating every temporal path: from
/// each source, extend along any edge whose time is later than the last one.
/// `times[e]` is the label of edge `e`.
pub fn naive_total_by_paths(g: &Digraph, times: &[u64]) -> u64 {
    naive_reach_matrix(g, times)
        .iter()
        .map(|row| row.iter().filter(|&&r| r).count() as u64)
        .sum()
}

/// `m[u][v]` is true iff a temporal path from `u` to `v` exists.
pub fn naive_reach_matrix(g: &Digraph, times: &[u64]) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut m = vec![vec![false; n]; n];
    for (u, row) in m.iter_mut().enumerate() {
        row[u] = true;
        extend(g, times, u, 0, row);
    }
    m
}

fn extend(g: &Digraph, times: &[u64], at: usize, after: u64, row: &mut [bool]) {
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if a == at && times[e] > after {
            row[b] = true;
            extend(g, times, b, times[e], row);
        }
    }
}

/// Time labels `1..=m` for a schedule.
pub fn labels_of(order: &[usize]) -> Vec<u64> {
    let mut t = vec![0; order.len()];
    for (p, &e) in order.iter().enumerate() {
        t[e] = p as u64 + 1;
    }
    t
}

pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for e in 0..used.len() {
            if !used[e] {
                used[e] = true;
                prefix.push(e);
                rec(prefix, used, out);
                prefix.pop();
                used[e] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Best `(min, sum)` of spanned node counts over every assignment of each
/// edge to {out-tree, in-tree, unused} at `root`.
pub fn labeling_optimum(g: &Digraph, root: usize) -> (usize, usize) {
    let m = g.edge_count();
    let mut best = (0, 0);
    let mut label = vec![0u8; m];
    loop {
        let out: Vec<usize> = (0..m).filter(|&e| label[e] == 1).collect();
        let inn: Vec<usize> = (0..m).filter(|&e| label[e] == 2).collect();
        if let (Some(a), Some(b)) = (
            tree_size(g, root, &out, false),
            tree_size(g, root, &inn, true),
        ) {
            best = best.max((a.min(b), a + b));
        }
        // next ternary labeling
        let mut i = 0;
        while i < m && label[i] == 2 {
            label[i] = 0;
            i += 1;
        }
        if i == m {
            return best;
        }
        label[i] += 1;
    }
}

/// Node count if `edges` is an arborescence at `root` (toward it when
/// `toward_root`), else `None`.
fn tree_size(g: &Digraph, root: usize, edges: &[usize], toward_root: bool) -> Option<usize> {
    let n = g.node_count();
    let mut parent = vec![usize::MAX; n];
    for &e in edges {
        let (a, b) = g.edge(e);
        let (p, c) = if toward_root { (b, a) } else { (a, b) };
        if c == root || parent[c] != usize::MAX {
            return None;
        }
        parent[c] = p;
    }
    // every child must walk up to the root without cycling
    for &e in edges {
        let (a, b) = g.edge(e);
        let mut v = if toward_root { a } else { b };
        let mut steps = 0;
        while v != root {
            v = parent[v];
            steps += 1;
            if v == usize::MAX || steps > n {
                return None;
            }
        }
    }
    Some(edges.len() + 1)
}

/// Every simple (loop-free) digraph on `n` nodes with at most `max_edges`
/// edges, edges listed in lexicographic order.
pub fn all_simple_digraphs(n: usize, max_edges: usize) -> Vec<Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .collect();
    let mut out = Vec::new();
    fn rec(
        pairs: &[(usize, usize)],
        start: usize,
        cur: &mut Vec<(usize, usize)>,
        max: usize,
        n: usize,
        out: &mut Vec<Digraph>,
    ) {
        out.push(Digraph::new(n, cur.clone()).unwrap());
        if cur.len() == max {
            return;
        }
        for i in start..pairs.len() {
            cur.push(pairs[i]);
            rec(pairs, i + 1, cur, max, n, out);
            cur.pop();
        }
    }
    rec(&pairs, 0, &mut Vec::new(), max_edges, n, &mut out);
    out
}
