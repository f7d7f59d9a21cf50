//! Strongly connected components of the static digraph (iterative Tarjan).

use crate::graph::{Digraph, NodeId};

/// Component id per node. Components are numbered in the order Tarjan closes
/// them, which is a reverse topological order of the condensation.
pub fn strongly_connected_components(g: &Digraph) -> (usize, Vec<usize>) {
    const UNVISITED: usize = usize::MAX;
    let n = g.node_count();
    let adj = adjacency(g);
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNVISITED; n];
    let mut stack: Vec<NodeId> = Vec::new();
    // (node, next neighbor position)
    let mut call: Vec<(NodeId, usize)> = Vec::new();
    let mut next_index = 0;
    let mut comps = 0;

    for start in 0..n {
        if index[start] != UNVISITED {
            continue;
        }
        call.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    comp[w] = comps;
                    if w == v {
                        break;
                    }
                }
                comps += 1;
            }
        }
    }
    (comps, comp)
}

/// True iff every node reaches every other node. The empty graph counts as
/// strongly connected.
pub fn is_strongly_connected(g: &Digraph) -> bool {
    strongly_connected_components(g).0 <= 1
}

fn adjacency(g: &Digraph) -> Vec<Vec<NodeId>> {
    let mut adj = vec![Vec::new(); g.node_count()];
    for &(a, b) in g.edges() {
        adj[a].push(b);
    }
    adj
}
