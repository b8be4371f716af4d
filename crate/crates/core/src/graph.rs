//! Instance representation: weighted graphs, sparse symmetric adjacency,
//! node labelings, the text instance format and the multicut objective.
//!
//! Costs follow the usual sign convention: a positive cost is attractive
//! (cutting the edge is penalised), a negative cost is repulsive.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: f64,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, cost: f64) -> Self {
        Self { u, v, cost }
    }

    #[inline]
    pub fn key(&self) -> (NodeId, NodeId) {
        (self.u, self.v)
    }
}

/// Undirected graph with one real cost per edge.
///
/// Edges are stored once per unordered pair with `u < v`, sorted
/// lexicographically by `(u, v)`. Parallel input edges are summed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedGraph {
    num_nodes: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Builds a graph from arbitrary `(u, v, cost)` triples.
    pub fn new<I>(num_nodes: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut list = Vec::new();
        for (u, v, cost) in edges {
            for node in [u, v] {
                if node >= num_nodes {
                    return Err(Error::NodeOutOfRange { node, num_nodes });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on node {u}")));
            }
            list.push(Edge::new(u.min(v), u.max(v), cost));
        }
        Ok(Self::from_unsorted(num_nodes, list))
    }

    /// Normalises an edge list whose entries already satisfy `u < v < num_nodes`.
    pub(crate) fn from_unsorted(num_nodes: usize, mut edges: Vec<Edge>) -> Self {
        // stable, so duplicate sums run in input order
        edges.par_sort_by_key(Edge::key);
        edges.dedup_by(|next, kept| {
            if next.key() == kept.key() {
                kept.cost += next.cost;
                true
            } else {
                false
            }
        });
        Self { num_nodes, edges }
    }

    /// Caller guarantees the canonical form (sorted, unique, `u < v`).
    pub(crate) fn from_canonical(num_nodes: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0].key() < w[1].key()));
        debug_assert!(edges.iter().all(|e| e.u < e.v && e.v < num_nodes));
        Self { num_nodes, edges }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Index of edge `{u, v}`, if present.
    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search_by_key(&key, Edge::key).ok()
    }

    pub fn has_positive_edge(&self) -> bool {
        self.edges.iter().any(|e| e.cost > 0.0)
    }

    /// Same topology with new costs, one per edge.
    pub fn with_costs(&self, costs: &[f64]) -> Self {
        assert_eq!(costs.len(), self.edges.len());
        let edges = self
            .edges
            .iter()
            .zip(costs)
            .map(|(e, &c)| Edge::new(e.u, e.v, c))
            .collect();
        Self {
            num_nodes: self.num_nodes,
            edges,
        }
    }

    pub fn adjacency(&self) -> SparseAdjacency {
        build_adjacency(self)
    }

    /// Writes the instance in the `MULTICUT` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.edges.len() * 24);
        out.push_str("MULTICUT\n");
        let _ = writeln!(out, "NODES {}", self.num_nodes);
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.cost);
        }
        out
    }
}

/// Parses the `MULTICUT` text format.
///
/// ```text
/// # optional comments
/// MULTICUT
/// NODES 3        (optional)
/// 0 1 2.5
/// 1 2 -1
/// ```
pub fn parse_instance(text: &[u8]) -> Result<WeightedGraph> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let line = 1 + text[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count();
        Error::Parse {
            line,
            msg: "invalid UTF-8".into(),
        }
    })?;

    let mut seen_header = false;
    let mut declared_nodes: Option<usize> = None;
    let mut saw_edge = false;
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim_matches(|c| c == ' ' || c == '\t');
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };

        if !seen_header {
            if trimmed != "MULTICUT" {
                return Err(err(format!(
                    "expected `MULTICUT` header, found `{trimmed}`"
                )));
            }
            seen_header = true;
            continue;
        }

        let fields: Vec<&str> = trimmed
            .split([' ', '\t'])
            .filter(|f| !f.is_empty())
            .collect();

        if fields[0] == "NODES" {
            if saw_edge || declared_nodes.is_some() {
                return Err(err("`NODES` must directly follow the header".into()));
            }
            if fields.len() != 2 {
                return Err(err("expected `NODES <n>`".into()));
            }
            let n = fields[1]
                .parse::<usize>()
                .map_err(|_| err(format!("invalid node count `{}`", fields[1])))?;
            declared_nodes = Some(n);
            continue;
        }

        if fields.len() != 3 {
            return Err(err(format!(
                "expected `<u> <v> <cost>`, found {} fields",
                fields.len()
            )));
        }
        let node = |s: &str| -> Result<usize> {
            let id = s
                .parse::<i64>()
                .map_err(|_| err(format!("invalid node id `{s}`")))?;
            if id < 0 {
                return Err(err(format!("negative node id {id}")));
            }
            Ok(id as usize)
        };
        let u = node(fields[0])?;
        let v = node(fields[1])?;
        let cost = fields[2]
            .parse::<f64>()
            .map_err(|_| err(format!("invalid cost `{}`", fields[2])))?;
        if !cost.is_finite() {
            return Err(err(format!("non-finite cost `{}`", fields[2])));
        }
        if u == v {
            return Err(err(format!("self-loop on node {u}")));
        }
        if let Some(n) = declared_nodes {
            if u.max(v) >= n {
                return Err(err(format!("node {} exceeds declared NODES {n}", u.max(v))));
            }
        }
        saw_edge = true;
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push(Edge::new(u.min(v), u.max(v), cost));
    }

    if !seen_header {
        return Err(Error::Parse {
            line: text.split('\n').count(),
            msg: "missing `MULTICUT` header".into(),
        });
    }
    let num_nodes = declared_nodes.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
    Ok(WeightedGraph::from_unsorted(num_nodes, edges))
}

/// Symmetric sparse cost matrix in coordinate form, sorted by `(row, col)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseAdjacency {
    pub num_nodes: usize,
    pub rows: Vec<NodeId>,
    pub cols: Vec<NodeId>,
    pub vals: Vec<f64>,
}

impl SparseAdjacency {
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Builds the symmetric form from upper-triangular entries that are
    /// already sorted and unique.
    pub(crate) fn from_upper(num_nodes: usize, upper: &[Edge]) -> Self {
        let mut entries: Vec<(NodeId, NodeId, f64)> = Vec::with_capacity(2 * upper.len());
        for e in upper {
            entries.push((e.u, e.v, e.cost));
            entries.push((e.v, e.u, e.cost));
        }
        entries.par_sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut adj = SparseAdjacency {
            num_nodes,
            rows: Vec::with_capacity(entries.len()),
            cols: Vec::with_capacity(entries.len()),
            vals: Vec::with_capacity(entries.len()),
        };
        for (r, c, v) in entries {
            adj.rows.push(r);
            adj.cols.push(c);
            adj.vals.push(v);
        }
        adj
    }

    /// Upper-triangular entries as a graph.
    pub fn to_graph(&self) -> WeightedGraph {
        let edges = self
            .rows
            .iter()
            .zip(&self.cols)
            .zip(&self.vals)
            .filter(|((r, c), _)| r < c)
            .map(|((&r, &c), &v)| Edge::new(r, c, v))
            .collect();
        WeightedGraph::from_canonical(self.num_nodes, edges)
    }
}

pub fn build_adjacency(g: &WeightedGraph) -> SparseAdjacency {
    SparseAdjacency::from_upper(g.num_nodes, &g.edges)
}

/// Partition of the node set, one cluster id per node.
///
/// Cluster ids are canonical: `0..num_clusters`, numbered in order of first
/// occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Labeling {
    cluster_of: Vec<usize>,
    num_clusters: usize,
}

impl Labeling {
    /// Canonicalises arbitrary cluster ids.
    pub fn from_raw(raw: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let cluster_of = raw
            .iter()
            .map(|&c| {
                let next = remap.len();
                *remap.entry(c).or_insert(next)
            })
            .collect();
        Self {
            cluster_of,
            num_clusters: remap.len(),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            cluster_of: (0..n).collect(),
            num_clusters: n,
        }
    }

    pub fn single_cluster(n: usize) -> Self {
        Self {
            cluster_of: vec![0; n],
            num_clusters: usize::from(n > 0),
        }
    }

    pub fn cluster_of(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn len(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cluster_of.is_empty()
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }
}

/// Total cost of the edges whose endpoints lie in different clusters.
pub fn clustering_cost(g: &WeightedGraph, lab: &Labeling) -> Result<f64> {
    clustering_cost_raw(g, lab.cluster_of())
}

pub(crate) fn clustering_cost_raw(g: &WeightedGraph, cluster_of: &[usize]) -> Result<f64> {
    if cluster_of.len() != g.num_nodes() {
        return Err(Error::LabelingMismatch {
            expected: g.num_nodes(),
            got: cluster_of.len(),
        });
    }
    Ok(g.edges
        .iter()
        .filter(|e| cluster_of[e.u] != cluster_of[e.v])
        .map(|e| e.cost)
        .sum())
}

/// Compressed neighbour lists over a subset of edges. Neighbours of each
/// node come out in ascending order because edges are sorted.
#[derive(Debug, Clone)]
pub(crate) struct Neighbors {
    offsets: Vec<usize>,
    targets: Vec<(NodeId, usize)>,
}

impl Neighbors {
    pub fn build(g: &WeightedGraph, keep: impl Fn(usize, &Edge) -> bool) -> Self {
        let n = g.num_nodes();
        let mut degree = vec![0usize; n + 1];
        for (_, e) in g.edges().iter().enumerate().filter(|(i, e)| keep(*i, e)) {
            degree[e.u + 1] += 1;
            degree[e.v + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut targets = vec![(0, 0); offsets[n]];
        for (id, e) in g.edges().iter().enumerate().filter(|(i, e)| keep(*i, e)) {
            targets[fill[e.u]] = (e.v, id);
            fill[e.u] += 1;
            targets[fill[e.v]] = (e.u, id);
            fill[e.v] += 1;
        }
        Self { offsets, targets }
    }

    /// `(neighbour, edge index)` pairs of `x`, neighbours ascending.
    #[inline]
    pub fn of(&self, x: NodeId) -> &[(NodeId, usize)] {
        &self.targets[self.offsets[x]..self.offsets[x + 1]]
    }
}
