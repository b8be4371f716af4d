use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use super::ContractionMapping;
use crate::graph::{NodeId, WeightedGraph};

/// The strictly positive edge of maximum cost, ties to the smallest `(u, v)`.
pub fn select_max_edge(g: &WeightedGraph) -> Vec<(NodeId, NodeId)> {
    let mut best: Option<(f64, (NodeId, NodeId))> = None;
    for e in g.edges().iter().filter(|e| e.cost > 0.0) {
        match best {
            Some((c, _)) if e.cost <= c => {}
            _ => best = Some((e.cost, e.key())),
        }
    }
    best.map(|(_, k)| vec![k]).unwrap_or_default()
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    cost: f64,
    /// smallest original member of each side, `lo < hi`
    key: (NodeId, NodeId),
    a: NodeId,
    b: NodeId,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then_with(|| other.key.cmp(&self.key))
            .then_with(|| (other.a, other.b).cmp(&(self.a, self.b)))
    }
}

/// Greedy additive edge contraction to exhaustion, using a lazy max-heap.
///
/// Contracts the heaviest positive edge until none is left. Clusters are
/// merged small-into-large. Equal-cost candidates are ordered by the smallest
/// original member of their endpoints, which matches contracting on a
/// canonically relabeled graph as long as no cluster's smallest member
/// changes while its candidates wait in the heap (exact ties only).
///
/// Returns the mapping onto the final clusters and the total joined cost.
pub fn greedy_additive_contraction(g: &WeightedGraph) -> (ContractionMapping, f64) {
    let n = g.num_nodes();
    let mut adj: Vec<HashMap<NodeId, f64>> = vec![HashMap::new(); n];
    let mut heap = BinaryHeap::new();
    for e in g.edges() {
        adj[e.u].insert(e.v, e.cost);
        adj[e.v].insert(e.u, e.cost);
        if e.cost > 0.0 {
            heap.push(Candidate {
                cost: e.cost,
                key: (e.u, e.v),
                a: e.u,
                b: e.v,
            });
        }
    }
    let mut min_member: Vec<NodeId> = (0..n).collect();
    let mut merged_into: Vec<NodeId> = (0..n).collect();
    let mut alive = vec![true; n];
    let mut joined = 0.0;

    while let Some(cand) = heap.pop() {
        if cand.cost <= 0.0 {
            break;
        }
        let (a, b) = (cand.a, cand.b);
        if !alive[a] || !alive[b] {
            continue;
        }
        match adj[a].get(&b) {
            Some(&c) if c.to_bits() == cand.cost.to_bits() => {}
            _ => continue,
        }
        let key = ordered(min_member[a], min_member[b]);
        if key != cand.key {
            heap.push(Candidate { key, ..cand });
            continue;
        }

        let (keep, drop) = if adj[a].len() >= adj[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        joined += cand.cost;
        adj[keep].remove(&drop);
        let dropped = std::mem::take(&mut adj[drop]);
        alive[drop] = false;
        merged_into[drop] = keep;
        min_member[keep] = min_member[keep].min(min_member[drop]);
        for (w, c) in dropped {
            if w == keep {
                continue;
            }
            adj[w].remove(&drop);
            let total = {
                let slot = adj[keep].entry(w).or_insert(0.0);
                *slot += c;
                *slot
            };
            adj[w].insert(keep, total);
            if total > 0.0 {
                heap.push(Candidate {
                    cost: total,
                    key: ordered(min_member[keep], min_member[w]),
                    a: keep.min(w),
                    b: keep.max(w),
                });
            }
        }
    }

    let root: Vec<NodeId> = (0..n)
        .map(|mut x| {
            while merged_into[x] != x {
                x = merged_into[x];
            }
            x
        })
        .collect();
    (ContractionMapping::from_raw(&root), joined)
}

fn ordered(x: NodeId, y: NodeId) -> (NodeId, NodeId) {
    (x.min(y), x.max(y))
}
