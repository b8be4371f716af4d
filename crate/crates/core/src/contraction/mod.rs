//! Primal side: contraction mappings, sparse contraction and the strategies
//! that choose which edges to contract.
//!
//! Contracting an edge set `S` merges every connected component of `(V, S)`
//! into a single node. Parallel edges created by the merge are summed and
//! edges that end up inside a component vanish; their total cost is reported
//! as the *joined cost*. For any labeling `l'` of the contracted graph,
//!
//! ```text
//! cost(contracted, l') + joined_cost == cost(original, l' ∘ f)
//! ```

mod forest;
mod greedy;
mod matching;

use rayon::prelude::*;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{Edge, Labeling, NodeId, SparseAdjacency, WeightedGraph};

pub use forest::{maximum_spanning_forest, select_spanning_forest_no_conflicts};
pub use greedy::{greedy_additive_contraction, select_max_edge};
pub use matching::select_matching;

/// Surjective relabeling `f: V -> V'`.
///
/// Target ids are canonical: they are numbered in order of the smallest
/// source node mapped to them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMapping {
    map: Vec<NodeId>,
    num_targets: usize,
}

impl ContractionMapping {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
            num_targets: n,
        }
    }

    /// Canonicalises an arbitrary mapping.
    pub fn from_raw(raw: &[NodeId]) -> Self {
        let lab = Labeling::from_raw(raw);
        Self {
            num_targets: lab.num_clusters(),
            map: lab.cluster_of().to_vec(),
        }
    }

    pub fn map(&self) -> &[NodeId] {
        &self.map
    }

    pub fn apply(&self, v: NodeId) -> NodeId {
        self.map[v]
    }

    pub fn num_sources(&self) -> usize {
        self.map.len()
    }

    pub fn num_targets(&self) -> usize {
        self.num_targets
    }

    pub fn is_identity(&self) -> bool {
        self.num_targets == self.map.len()
    }

    /// `v -> next(self(v))`.
    pub fn then(&self, next: &ContractionMapping) -> ContractionMapping {
        assert_eq!(next.num_sources(), self.num_targets);
        let map: Vec<_> = self.map.iter().map(|&t| next.map[t]).collect();
        debug_assert_eq!(ContractionMapping::from_raw(&map).map, map);
        ContractionMapping {
            map,
            num_targets: next.num_targets,
        }
    }

    pub fn to_labeling(&self) -> Labeling {
        Labeling::from_raw(&self.map)
    }
}

/// Maps every node to its component in `(V, S)`.
pub fn connected_components(
    num_nodes: usize,
    edges: &[(NodeId, NodeId)],
) -> Result<ContractionMapping> {
    let mut sets = DisjointSets::new(num_nodes);
    for &(u, v) in edges {
        for node in [u, v] {
            if node >= num_nodes {
                return Err(Error::NodeOutOfRange { node, num_nodes });
            }
        }
        sets.union(u, v);
    }
    // roots are the smallest member, so scanning in order yields canonical ids
    let mut target_of_root = vec![usize::MAX; num_nodes];
    let mut next = 0;
    let map = (0..num_nodes)
        .map(|v| {
            let r = sets.find(v);
            if target_of_root[r] == usize::MAX {
                target_of_root[r] = next;
                next += 1;
            }
            target_of_root[r]
        })
        .collect();
    Ok(ContractionMapping {
        map,
        num_targets: next,
    })
}

#[derive(Debug, Clone)]
pub struct ContractionResult {
    pub contracted: SparseAdjacency,
    pub mapping: ContractionMapping,
    /// Total cost of the edges whose endpoints were merged.
    pub joined_cost: f64,
}

/// Contracts a symmetric adjacency under `f`.
///
/// Works on the upper triangle: entries are relabeled in parallel, merged
/// entries are split off into the joined cost, and the rest is sorted by key
/// and reduced. Summation order is the input order for every key, so the
/// result does not depend on the thread count.
pub fn contract(adj: &SparseAdjacency, f: &ContractionMapping) -> ContractionResult {
    assert_eq!(
        f.num_sources(),
        adj.num_nodes,
        "mapping length must match the adjacency"
    );
    let relabeled: Vec<(NodeId, NodeId, f64)> = (0..adj.nnz())
        .into_par_iter()
        .filter(|&i| adj.rows[i] < adj.cols[i])
        .map(|i| (f.map[adj.rows[i]], f.map[adj.cols[i]], adj.vals[i]))
        .collect();

    let joined_cost: f64 = relabeled
        .iter()
        .filter(|(a, b, _)| a == b)
        .map(|&(_, _, c)| c)
        .sum();

    let mut kept: Vec<(NodeId, NodeId, f64)> = relabeled
        .into_par_iter()
        .filter(|(a, b, _)| a != b)
        .map(|(a, b, c)| (a.min(b), a.max(b), c))
        .collect();
    kept.par_sort_by_key(|&(a, b, _)| (a, b));

    let mut upper: Vec<Edge> = Vec::with_capacity(kept.len());
    for (a, b, c) in kept {
        match upper.last_mut() {
            Some(last) if last.u == a && last.v == b => last.cost += c,
            _ => upper.push(Edge::new(a, b, c)),
        }
    }

    ContractionResult {
        contracted: SparseAdjacency::from_upper(f.num_targets(), &upper),
        mapping: f.clone(),
        joined_cost,
    }
}

/// Graph-level contraction; same semantics as [`contract`].
pub fn contract_graph(g: &WeightedGraph, f: &ContractionMapping) -> (WeightedGraph, f64) {
    let res = contract(&g.adjacency(), f);
    (res.contracted.to_graph(), res.joined_cost)
}

/// Which edges a contraction step merges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// The single largest positive edge.
    Gaec,
    /// Handshake matching on positive edges.
    Matching,
    /// Maximum spanning forest on positive edges with conflicts removed.
    SpanningForest,
    /// Matching, falling back to the spanning forest when the matching is
    /// smaller than `switch_fraction * |V|`.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOptions {
    pub matching_rounds: usize,
    pub switch_fraction: f64,
    /// Enables a tiny deterministic perturbation of matching proposals.
    pub jitter_seed: Option<u64>,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            matching_rounds: 5,
            switch_fraction: 0.1,
            jitter_seed: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub graph: WeightedGraph,
    pub mapping: ContractionMapping,
    pub joined_cost: f64,
    /// Size of the contraction set.
    pub contracted_edges: usize,
    /// Strategy that produced the contraction set.
    pub policy_used: Policy,
}

/// Chooses the contraction set for `policy`.
pub fn select_contraction_set(
    g: &WeightedGraph,
    policy: Policy,
    opts: &StepOptions,
) -> (Vec<(NodeId, NodeId)>, Policy) {
    match policy {
        Policy::Gaec => (select_max_edge(g), Policy::Gaec),
        Policy::Matching => (
            select_matching(g, opts.matching_rounds, opts.jitter_seed),
            Policy::Matching,
        ),
        Policy::SpanningForest => (
            select_spanning_forest_no_conflicts(g),
            Policy::SpanningForest,
        ),
        Policy::Auto => {
            let s = select_matching(g, opts.matching_rounds, opts.jitter_seed);
            if (s.len() as f64) < opts.switch_fraction * g.num_nodes() as f64 {
                (
                    select_spanning_forest_no_conflicts(g),
                    Policy::SpanningForest,
                )
            } else {
                (s, Policy::Matching)
            }
        }
    }
}

/// One round of parallel edge contraction.
///
/// An empty contraction set leaves the graph unchanged with the identity
/// mapping.
pub fn contraction_step(g: &WeightedGraph, policy: Policy, opts: &StepOptions) -> StepOutcome {
    let (set, policy_used) = select_contraction_set(g, policy, opts);
    if set.is_empty() {
        return StepOutcome {
            graph: g.clone(),
            mapping: ContractionMapping::identity(g.num_nodes()),
            joined_cost: 0.0,
            contracted_edges: 0,
            policy_used,
        };
    }
    let mapping = connected_components(g.num_nodes(), &set).expect("selected edges are in range");
    let res = contract(&g.adjacency(), &mapping);
    StepOutcome {
        graph: res.contracted.to_graph(),
        mapping,
        joined_cost: res.joined_cost,
        contracted_edges: set.len(),
        policy_used,
    }
}
