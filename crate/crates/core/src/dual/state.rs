use std::collections::HashSet;

use rayon::prelude::*;

use super::{triangle_cost, triangle_minimum, update_triangle, ConflictedCycle, IJ, IK, JK};
use crate::graph::{Edge, Labeling, NodeId, WeightedGraph};

/// A triangle `i < j < k` with handles of its edges `ij`, `ik`, `jk` in the
/// augmented edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triplet {
    pub nodes: [NodeId; 3],
    pub edges: [usize; 3],
}

/// Edge/triangle decomposition with its Lagrange multipliers.
///
/// The augmented graph holds the original edges plus zero-cost chords added
/// by triangulation. Reparametrised costs are never stored; they are derived
/// from the base costs and `lambda` on demand.
#[derive(Debug, Clone)]
pub struct DualState {
    graph: WeightedGraph,
    is_chord: Vec<bool>,
    triplets: Vec<Triplet>,
    lambda: Vec<[f64; 3]>,
    /// `(triplet, slot)` pairs per edge, CSR layout.
    incidence_offsets: Vec<usize>,
    incidence: Vec<(u32, u8)>,
}

/// Fan-triangulates conflicted cycles into triplets, with all multipliers 0.
pub fn triangulate(cycles: &[ConflictedCycle], g: &WeightedGraph) -> DualState {
    let mut state = DualState::new(g);
    state.add_cycles(cycles);
    state
}

impl DualState {
    /// A state without triplets.
    pub fn new(g: &WeightedGraph) -> Self {
        let mut s = Self {
            graph: g.clone(),
            is_chord: vec![false; g.num_edges()],
            triplets: Vec::new(),
            lambda: Vec::new(),
            incidence_offsets: Vec::new(),
            incidence: Vec::new(),
        };
        s.rebuild_incidence();
        s
    }

    /// Adds the fan triangulation of `cycles`, anchored at `nodes[0]`.
    ///
    /// Missing chords enter the augmented graph with cost 0. Triplets already
    /// present keep their multipliers; new ones start at 0.
    pub fn add_cycles(&mut self, cycles: &[ConflictedCycle]) {
        let mut known: HashSet<[NodeId; 3]> = self.triplets.iter().map(|t| t.nodes).collect();
        let mut new_triples = Vec::new();
        let mut chords = Vec::new();
        for c in cycles {
            let v = &c.nodes;
            debug_assert!(v.len() >= 3);
            let anchor = v[0];
            for m in 1..v.len() - 1 {
                if m >= 2 && self.graph.find_edge(anchor, v[m]).is_none() {
                    chords.push(Edge::new(anchor.min(v[m]), anchor.max(v[m]), 0.0));
                }
                let mut t = [anchor, v[m], v[m + 1]];
                t.sort_unstable();
                if known.insert(t) {
                    new_triples.push(t);
                }
            }
        }

        if !chords.is_empty() {
            self.extend_graph(chords);
        }
        for nodes in new_triples {
            let [i, j, k] = nodes;
            let edge = |a, b| {
                self.graph
                    .find_edge(a, b)
                    .expect("triangle edge missing from the augmented graph")
            };
            let edges = [edge(i, j), edge(i, k), edge(j, k)];
            self.triplets.push(Triplet { nodes, edges });
            self.lambda.push([0.0; 3]);
        }
        self.rebuild_incidence();
    }

    fn extend_graph(&mut self, chords: Vec<Edge>) {
        let old = self.graph.edges();
        let mut all: Vec<Edge> = Vec::with_capacity(old.len() + chords.len());
        all.extend_from_slice(old);
        // duplicates among chords collapse to a single 0-cost edge
        let mut chords = chords;
        chords.sort_unstable_by_key(Edge::key);
        chords.dedup_by_key(|e| e.key());
        all.extend(chords.iter().copied());
        let merged = WeightedGraph::from_unsorted(self.graph.num_nodes(), all);
        let chord_keys: HashSet<(NodeId, NodeId)> = chords.iter().map(Edge::key).collect();
        let is_chord = merged
            .edges()
            .iter()
            .map(|e| chord_keys.contains(&e.key()) || self.is_chord_key(e.key()))
            .collect();
        for t in &mut self.triplets {
            let [i, j, k] = t.nodes;
            t.edges = [
                merged.find_edge(i, j).unwrap(),
                merged.find_edge(i, k).unwrap(),
                merged.find_edge(j, k).unwrap(),
            ];
        }
        self.graph = merged;
        self.is_chord = is_chord;
    }

    fn is_chord_key(&self, key: (NodeId, NodeId)) -> bool {
        self.graph
            .find_edge(key.0, key.1)
            .is_some_and(|i| self.is_chord[i])
    }

    fn rebuild_incidence(&mut self) {
        let m = self.graph.num_edges();
        let mut offsets = vec![0usize; m + 1];
        for t in &self.triplets {
            for &e in &t.edges {
                offsets[e + 1] += 1;
            }
        }
        for e in 0..m {
            offsets[e + 1] += offsets[e];
        }
        let mut fill = offsets.clone();
        let mut incidence = vec![(0u32, 0u8); offsets[m]];
        for (ti, t) in self.triplets.iter().enumerate() {
            for (slot, &e) in t.edges.iter().enumerate() {
                incidence[fill[e]] = (ti as u32, slot as u8);
                fill[e] += 1;
            }
        }
        self.incidence_offsets = offsets;
        self.incidence = incidence;
    }

    /// The augmented graph with base costs.
    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn num_chords(&self) -> usize {
        self.is_chord.iter().filter(|&&c| c).count()
    }

    pub fn is_chord(&self, e: usize) -> bool {
        self.is_chord[e]
    }

    pub fn triplets(&self) -> &[Triplet] {
        &self.triplets
    }

    pub fn lambda(&self) -> &[[f64; 3]] {
        &self.lambda
    }

    pub fn lambda_mut(&mut self) -> &mut [[f64; 3]] {
        &mut self.lambda
    }

    /// Number of triplets containing edge `e`.
    pub fn coverage(&self, e: usize) -> usize {
        self.incidence_offsets[e + 1] - self.incidence_offsets[e]
    }

    fn incident(&self, e: usize) -> &[(u32, u8)] {
        &self.incidence[self.incidence_offsets[e]..self.incidence_offsets[e + 1]]
    }

    /// `c_e + Σ_{t ∋ e} λ[t][e]`.
    pub fn reparametrized_cost(&self, e: usize) -> f64 {
        let mut c = self.graph.edges()[e].cost;
        for &(t, s) in self.incident(e) {
            c += self.lambda[t as usize][s as usize];
        }
        c
    }

    pub fn reparametrized_costs(&self) -> Vec<f64> {
        (0..self.num_edges())
            .into_par_iter()
            .map(|e| self.reparametrized_cost(e))
            .collect()
    }

    /// The augmented graph carrying reparametrised costs.
    pub fn reparametrized_graph(&self) -> WeightedGraph {
        self.graph.with_costs(&self.reparametrized_costs())
    }

    /// Min-marginal of triplet `t` for its edge in `slot`.
    pub fn triplet_min_marginal(&self, t: usize, slot: usize) -> f64 {
        super::triangle_min_marginal(&self.lambda[t], slot)
    }

    /// `Σ_e min(0, c^λ_e) + Σ_t min_{y ∈ MC_Δ} c^λ_t(y)`.
    ///
    /// Valid lower bound on the optimal multicut of the augmented graph, and
    /// hence of the original one (chords cost 0), for any multipliers.
    pub fn lower_bound(&self) -> f64 {
        let costs = self.reparametrized_costs();
        let tri: Vec<f64> = self.lambda.par_iter().map(triangle_minimum).collect();
        // sequential sums keep the result independent of the thread count
        let edges: f64 = costs.iter().map(|&c| c.min(0.0)).sum();
        edges + tri.iter().sum::<f64>()
    }

    /// Moves every covered edge's reparametrised cost onto its triplets,
    /// split evenly; covered edges end at (numerically) zero cost.
    pub fn edges_to_triplets(&mut self) {
        let shares: Vec<f64> = (0..self.num_edges())
            .into_par_iter()
            .map(|e| match self.coverage(e) {
                0 => 0.0,
                k => self.reparametrized_cost(e) / k as f64,
            })
            .collect();
        self.triplets
            .par_iter()
            .zip(self.lambda.par_iter_mut())
            .for_each(|(t, lam)| {
                for s in 0..3 {
                    lam[s] -= shares[t.edges[s]];
                }
            });
    }

    /// Same update as [`Self::edges_to_triplets`], applied edge by edge in `order`.
    pub fn edges_to_triplets_in_order(&mut self, order: &[usize]) {
        for &e in order {
            let k = self.coverage(e);
            if k == 0 {
                continue;
            }
            let share = self.reparametrized_cost(e) / k as f64;
            let (lo, hi) = (self.incidence_offsets[e], self.incidence_offsets[e + 1]);
            for i in lo..hi {
                let (t, s) = self.incidence[i];
                self.lambda[t as usize][s as usize] -= share;
            }
        }
    }

    /// Damped triangle-to-edge messages, independently per triplet.
    pub fn triplets_to_edges(&mut self) {
        self.lambda.par_iter_mut().for_each(update_triangle);
    }

    /// Same update as [`Self::triplets_to_edges`], triplet by triplet in `order`.
    pub fn triplets_to_edges_in_order(&mut self, order: &[usize]) {
        for &t in order {
            update_triangle(&mut self.lambda[t]);
        }
    }

    /// One full pass: edge phase, then triplet phase.
    pub fn message_passing_iteration(&mut self) {
        if self.triplets.is_empty() {
            return;
        }
        self.edges_to_triplets();
        self.triplets_to_edges();
    }

    /// Cut indicator per augmented edge under a node labeling.
    pub fn edge_cuts(&self, lab: &Labeling) -> Vec<bool> {
        let c = lab.cluster_of();
        self.graph
            .edges()
            .iter()
            .map(|e| c[e.u] != c[e.v])
            .collect()
    }

    /// Total reparametrised cost of an edge labeling, triplet terms included.
    /// Equals the base cost of the labeling when it is consistent.
    pub fn reparametrized_objective(&self, cuts: &[bool]) -> f64 {
        let edges: f64 = (0..self.num_edges())
            .filter(|&e| cuts[e])
            .map(|e| self.reparametrized_cost(e))
            .sum();
        let tri: f64 = self
            .triplets
            .iter()
            .zip(&self.lambda)
            .map(|(t, lam)| {
                triangle_cost(
                    lam,
                    &[cuts[t.edges[IJ]], cuts[t.edges[IK]], cuts[t.edges[JK]]],
                )
            })
            .sum();
        edges + tri
    }
}
