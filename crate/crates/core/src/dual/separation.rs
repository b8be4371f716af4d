use std::collections::HashMap;

use rayon::prelude::*;

use crate::graph::{Neighbors, NodeId, WeightedGraph};

/// A cycle with exactly one repulsive edge.
///
/// `nodes[0]` and `nodes[len - 1]` are joined by the repulsive edge
/// (`nodes[0] < nodes[len - 1]`); consecutive nodes are joined by
/// attractive edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConflictedCycle {
    pub nodes: Vec<NodeId>,
}

impl ConflictedCycle {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn repulsive_edge(&self) -> (NodeId, NodeId) {
        (self.nodes[0], self.nodes[self.nodes.len() - 1])
    }
}

/// For every repulsive edge `(i, j)`, finds one shortest attractive path
/// from `i` to `j` with at most `max_len - 1` hops.
///
/// Breadth-first search starts at the smaller endpoint and expands
/// neighbours in ascending order; the first discovery of a node fixes its
/// predecessor. Cycles are returned in the order of their repulsive edges.
pub fn separate_conflicted_cycles(g: &WeightedGraph, max_len: usize) -> Vec<ConflictedCycle> {
    assert!(max_len >= 3, "cycles have at least three edges");
    let positive = Neighbors::build(g, |_, e| e.cost > 0.0);
    let max_hops = max_len - 1;
    g.edges()
        .par_iter()
        .filter(|e| e.cost < 0.0)
        .filter_map(|e| shortest_positive_path(&positive, e.u, e.v, max_hops))
        .map(|nodes| ConflictedCycle { nodes })
        .collect()
}

fn shortest_positive_path(
    nb: &Neighbors,
    from: NodeId,
    to: NodeId,
    max_hops: usize,
) -> Option<Vec<NodeId>> {
    if nb.of(from).is_empty() || nb.of(to).is_empty() {
        return None;
    }
    let mut pred: HashMap<NodeId, NodeId> = HashMap::new();
    pred.insert(from, from);
    let mut frontier = vec![from];
    let mut next = Vec::new();
    for _ in 0..max_hops {
        for &x in &frontier {
            for &(y, _) in nb.of(x) {
                if pred.contains_key(&y) {
                    continue;
                }
                pred.insert(y, x);
                if y == to {
                    let mut path = vec![to];
                    let mut cur = to;
                    while cur != from {
                        cur = pred[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    // a direct positive edge would be parallel to the repulsive one
                    debug_assert!(path.len() >= 3);
                    return Some(path);
                }
                next.push(y);
            }
        }
        if next.is_empty() {
            return None;
        }
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    None
}
