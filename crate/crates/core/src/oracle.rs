//! Slow reference implementations used to check the solver.
//!
//! Everything here is written as plainly as possible and shares no
//! algorithmic code with the main modules, so agreement between the two
//! carries weight.

use std::collections::{BTreeMap, BTreeSet};

use crate::dual::ConflictedCycle;
use crate::error::{Error, Result};
use crate::graph::{Labeling, NodeId, WeightedGraph};

pub const MAX_BRUTE_FORCE_NODES: usize = 12;
pub const MAX_CYCLE_ENUMERATION_NODES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub optimum_cost: f64,
    pub optimum_labeling: Labeling,
}

fn cut_cost(g: &WeightedGraph, label: &[usize]) -> f64 {
    let mut total = 0.0;
    for e in g.edges() {
        if label[e.u] != label[e.v] {
            total += e.cost;
        }
    }
    total
}

/// Exact optimum by enumerating every set partition (restricted growth
/// strings). Ties go to the first partition in enumeration order.
pub fn brute_force_optimum(g: &WeightedGraph) -> Result<OracleResult> {
    let n = g.num_nodes();
    if n > MAX_BRUTE_FORCE_NODES {
        return Err(Error::SizeGuard {
            limit: MAX_BRUTE_FORCE_NODES,
            got: n,
        });
    }
    if n == 0 {
        return Ok(OracleResult {
            optimum_cost: 0.0,
            optimum_labeling: Labeling::singletons(0),
        });
    }

    let mut a = vec![0usize; n];
    let mut best_cost = cut_cost(g, &a);
    let mut best = a.clone();
    while next_partition(&mut a) {
        let c = cut_cost(g, &a);
        if c < best_cost {
            best_cost = c;
            best = a.clone();
        }
    }
    Ok(OracleResult {
        optimum_cost: best_cost,
        optimum_labeling: Labeling::from_raw(&best),
    })
}

/// Steps to the next restricted growth string (`a[0] = 0`,
/// `a[i] <= 1 + max(a[..i])`); `false` after the last one.
fn next_partition(a: &mut [usize]) -> bool {
    for i in (1..a.len()).rev() {
        let prefix_max = a[..i].iter().copied().max().unwrap();
        if a[i] <= prefix_max {
            a[i] += 1;
            for x in &mut a[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}

/// Contracts the components of `(V, S)` by relabeling edge endpoints and
/// summing parallel edges. Returns the contracted graph and the total cost
/// of the edges that fell inside a component.
pub fn naive_contract(g: &WeightedGraph, s: &[(NodeId, NodeId)]) -> (WeightedGraph, f64) {
    let label = component_labels(g.num_nodes(), s);
    let num_labels = label.iter().copied().max().map_or(0, |m| m + 1);
    let mut joined = 0.0;
    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for e in g.edges() {
        let (a, b) = (label[e.u], label[e.v]);
        if a == b {
            joined += e.cost;
        } else {
            *merged.entry((a.min(b), a.max(b))).or_insert(0.0) += e.cost;
        }
    }
    let contracted =
        WeightedGraph::new(num_labels, merged.into_iter().map(|((a, b), c)| (a, b, c)))
            .expect("labels are in range");
    (contracted, joined)
}

/// Component label per node, numbered by smallest member, via plain DFS.
fn component_labels(n: usize, s: &[(NodeId, NodeId)]) -> Vec<usize> {
    let mut adjacent = vec![Vec::new(); n];
    for &(u, v) in s {
        adjacent[u].push(v);
        adjacent[v].push(u);
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        label[start] = next;
        while let Some(x) = stack.pop() {
            for &y in &adjacent[x] {
                if label[y] == usize::MAX {
                    label[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// Sequential greedy additive edge contraction: repeatedly contract the
/// heaviest positive edge (ties to the smallest `(u, v)`) until none is left.
pub fn naive_gaec(g: &WeightedGraph) -> (Labeling, f64) {
    let mut current = g.clone();
    let mut label: Vec<usize> = (0..g.num_nodes()).collect();
    loop {
        let mut pick: Option<(f64, NodeId, NodeId)> = None;
        for e in current.edges() {
            if e.cost <= 0.0 {
                continue;
            }
            let better = match pick {
                None => true,
                Some((c, u, v)) => e.cost > c || (e.cost == c && (e.u, e.v) < (u, v)),
            };
            if better {
                pick = Some((e.cost, e.u, e.v));
            }
        }
        let Some((_, u, v)) = pick else { break };
        let step = component_labels(current.num_nodes(), &[(u, v)]);
        for l in label.iter_mut() {
            *l = step[*l];
        }
        current = naive_contract(&current, &[(u, v)]).0;
    }
    let cost = cut_cost(g, &label);
    (Labeling::from_raw(&label), cost)
}

/// Every simple cycle of at most `max_len` edges that consists of one
/// repulsive edge and otherwise attractive edges.
///
/// Cycles are written like [`ConflictedCycle`]: starting at the smaller
/// endpoint of the repulsive edge and ending at the other one.
pub fn enumerate_conflicted_cycles_exhaustive(
    g: &WeightedGraph,
    max_len: usize,
) -> Result<BTreeSet<ConflictedCycle>> {
    let n = g.num_nodes();
    if n > MAX_CYCLE_ENUMERATION_NODES {
        return Err(Error::SizeGuard {
            limit: MAX_CYCLE_ENUMERATION_NODES,
            got: n,
        });
    }
    let mut positive = vec![Vec::new(); n];
    for e in g.edges().iter().filter(|e| e.cost > 0.0) {
        positive[e.u].push(e.v);
        positive[e.v].push(e.u);
    }
    let mut out = BTreeSet::new();
    for e in g.edges().iter().filter(|e| e.cost < 0.0) {
        let mut path = vec![e.u];
        extend_paths(&positive, e.v, max_len, &mut path, &mut out);
    }
    Ok(out)
}

fn extend_paths(
    positive: &[Vec<NodeId>],
    target: NodeId,
    max_len: usize,
    path: &mut Vec<NodeId>,
    out: &mut BTreeSet<ConflictedCycle>,
) {
    let last = *path.last().unwrap();
    // a path of k nodes closes a cycle of k edges
    for &y in &positive[last] {
        if y == target {
            if path.len() >= 2 && path.len() < max_len {
                let mut nodes = path.clone();
                nodes.push(target);
                out.insert(ConflictedCycle { nodes });
            }
            continue;
        }
        if path.contains(&y) || path.len() + 2 > max_len {
            continue;
        }
        path.push(y);
        extend_paths(positive, target, max_len, path, out);
        path.pop();
    }
}
