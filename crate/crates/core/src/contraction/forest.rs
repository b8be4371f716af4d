use std::cmp::Ordering;

use crate::dsu::DisjointSets;
use crate::graph::{Edge, Neighbors, NodeId, WeightedGraph};

/// Heavier first, then lexicographically smaller.
fn heavier(a: &Edge, b: &Edge) -> bool {
    match a.cost.total_cmp(&b.cost) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.key() < b.key(),
    }
}

/// Maximum spanning forest of the strictly positive edges (Borůvka).
///
/// Edges are totally ordered by (cost descending, `(u, v)` ascending), so the
/// forest is unique. Returns edge indices into `g.edges()`, ascending.
pub fn maximum_spanning_forest(g: &WeightedGraph) -> Vec<usize> {
    let n = g.num_nodes();
    let edges = g.edges();
    let mut live: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].cost > 0.0).collect();
    let mut sets = DisjointSets::new(n);
    let mut forest = Vec::new();
    let mut comp = vec![0; n];
    let mut best: Vec<Option<usize>> = vec![None; n];

    while !live.is_empty() {
        for (x, c) in comp.iter_mut().enumerate() {
            *c = sets.find(x);
        }
        live.retain(|&i| comp[edges[i].u] != comp[edges[i].v]);
        for &i in &live {
            let e = &edges[i];
            for c in [comp[e.u], comp[e.v]] {
                match best[c] {
                    Some(b) if !heavier(e, &edges[b]) => {}
                    _ => best[c] = Some(i),
                }
            }
        }
        let mut grew = false;
        for slot in best.iter_mut() {
            if let Some(i) = slot.take() {
                if sets.union(edges[i].u, edges[i].v) {
                    forest.push(i);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    forest.sort_unstable();
    forest
}

/// Spanning-forest contraction set without conflicts.
///
/// Starts from the maximum spanning forest of the positive edges. Then, for
/// every negative edge `(i, j)` in ascending `(i, j)` order, if `i` and `j`
/// are still connected in the forest the cheapest edge on their path is
/// removed (ties to the lexicographically smallest edge). Afterwards no
/// negative edge lies inside a component.
pub fn select_spanning_forest_no_conflicts(g: &WeightedGraph) -> Vec<(NodeId, NodeId)> {
    let forest = maximum_spanning_forest(g);
    if forest.is_empty() {
        return Vec::new();
    }
    let edges = g.edges();
    let mut paths = PathIndex::new(g, &forest);
    for e in edges.iter().filter(|e| e.cost < 0.0) {
        if let Some(slot) = paths.cheapest_on_path(e.u, e.v) {
            paths.remove(slot);
        }
    }
    let mut kept: Vec<(NodeId, NodeId)> = paths.remaining().map(|i| edges[i].key()).collect();
    kept.sort_unstable();
    kept
}

/// Heavy-light decomposition of a forest with a segment tree over the parent
/// edges, answering "cheapest live edge on the u-v path" in O(log^2 n).
struct PathIndex<'a> {
    edges: &'a [Edge],
    parent: Vec<NodeId>,
    depth: Vec<usize>,
    head: Vec<NodeId>,
    pos: Vec<usize>,
    root: Vec<NodeId>,
    /// Edge index stored at each position (the edge to the parent).
    edge_at: Vec<Option<usize>>,
    tree: SegTree,
}

const NO_NODE: NodeId = NodeId::MAX;

impl<'a> PathIndex<'a> {
    fn new(g: &'a WeightedGraph, forest: &[usize]) -> Self {
        let n = g.num_nodes();
        let edges = g.edges();
        let in_forest = {
            let mut mask = vec![false; edges.len()];
            for &i in forest {
                mask[i] = true;
            }
            mask
        };
        let nb = Neighbors::build(g, |i, _| in_forest[i]);

        let mut parent = vec![NO_NODE; n];
        let mut parent_edge = vec![None; n];
        let mut depth = vec![0; n];
        let mut root = vec![NO_NODE; n];
        let mut order = Vec::with_capacity(n);
        for r in 0..n {
            if root[r] != NO_NODE {
                continue;
            }
            root[r] = r;
            let start = order.len();
            order.push(r);
            let mut k = start;
            while k < order.len() {
                let x = order[k];
                k += 1;
                for &(y, e) in nb.of(x) {
                    if root[y] == NO_NODE {
                        root[y] = r;
                        parent[y] = x;
                        parent_edge[y] = Some(e);
                        depth[y] = depth[x] + 1;
                        order.push(y);
                    }
                }
            }
        }

        let mut size = vec![1usize; n];
        let mut heavy = vec![NO_NODE; n];
        for &x in order.iter().rev() {
            let p = parent[x];
            if p != NO_NODE {
                size[p] += size[x];
                if heavy[p] == NO_NODE
                    || size[x] > size[heavy[p]]
                    || (size[x] == size[heavy[p]] && x < heavy[p])
                {
                    heavy[p] = x;
                }
            }
        }

        let mut head = vec![NO_NODE; n];
        let mut pos = vec![0; n];
        let mut edge_at = vec![None; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for r in 0..n {
            if root[r] != r {
                continue;
            }
            head[r] = r;
            stack.push(r);
            while let Some(h) = stack.pop() {
                let mut x = h;
                loop {
                    pos[x] = next;
                    edge_at[next] = parent_edge[x];
                    next += 1;
                    for &(y, _) in nb.of(x) {
                        if parent[y] == x && y != heavy[x] {
                            head[y] = y;
                            stack.push(y);
                        }
                    }
                    if heavy[x] == NO_NODE {
                        break;
                    }
                    head[heavy[x]] = head[x];
                    x = heavy[x];
                }
            }
        }

        let leaves: Vec<Slot> = edge_at
            .iter()
            .map(|e| match e {
                Some(i) => Slot::live(&edges[*i]),
                None => Slot::EMPTY,
            })
            .collect();

        Self {
            edges,
            parent,
            depth,
            head,
            pos,
            root,
            edge_at,
            tree: SegTree::new(&leaves),
        }
    }

    /// Position of the cheapest path edge if `u` and `v` are still connected.
    fn cheapest_on_path(&self, mut u: NodeId, mut v: NodeId) -> Option<usize> {
        if self.root[u] != self.root[v] {
            return None;
        }
        let mut acc = Slot::EMPTY;
        while self.head[u] != self.head[v] {
            if self.depth[self.head[u]] < self.depth[self.head[v]] {
                std::mem::swap(&mut u, &mut v);
            }
            let h = self.head[u];
            acc = acc.combine(self.tree.query(self.pos[h], self.pos[u] + 1));
            u = self.parent[h];
        }
        if self.depth[u] > self.depth[v] {
            std::mem::swap(&mut u, &mut v);
        }
        if u != v {
            acc = acc.combine(self.tree.query(self.pos[u] + 1, self.pos[v] + 1));
        }
        if acc.removed {
            return None;
        }
        acc.best.map(|(_, _, _, slot)| slot)
    }

    fn remove(&mut self, slot: usize) {
        self.tree.mark_removed(slot);
    }

    fn remaining(&self) -> impl Iterator<Item = usize> + '_ {
        self.edge_at
            .iter()
            .enumerate()
            .filter_map(|(slot, e)| e.filter(|_| !self.tree.is_removed(slot)))
            .inspect(|&i| debug_assert!(self.edges[i].cost > 0.0))
    }
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    removed: bool,
    /// (cost, u, v, position) of the cheapest edge in range.
    best: Option<(f64, NodeId, NodeId, usize)>,
}

impl Slot {
    const EMPTY: Slot = Slot {
        removed: false,
        best: None,
    };

    fn live(e: &Edge) -> Slot {
        Slot {
            removed: false,
            best: Some((e.cost, e.u, e.v, usize::MAX)),
        }
    }

    fn combine(self, other: Slot) -> Slot {
        let best = match (self.best, other.best) {
            (None, b) | (b, None) => b,
            (Some(a), Some(b)) => {
                let ord = a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2)));
                if ord == Ordering::Greater {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        };
        Slot {
            removed: self.removed || other.removed,
            best,
        }
    }
}

struct SegTree {
    size: usize,
    nodes: Vec<Slot>,
}

impl SegTree {
    fn new(leaves: &[Slot]) -> Self {
        let size = leaves.len().next_power_of_two().max(1);
        let mut nodes = vec![Slot::EMPTY; 2 * size];
        for (i, leaf) in leaves.iter().enumerate() {
            let mut s = *leaf;
            if let Some(b) = s.best.as_mut() {
                b.3 = i;
            }
            nodes[size + i] = s;
        }
        for i in (1..size).rev() {
            nodes[i] = nodes[2 * i].combine(nodes[2 * i + 1]);
        }
        Self { size, nodes }
    }

    /// Combined slot over `[lo, hi)`.
    fn query(&self, lo: usize, hi: usize) -> Slot {
        let mut acc = Slot::EMPTY;
        let (mut l, mut r) = (lo + self.size, hi + self.size);
        while l < r {
            if l & 1 == 1 {
                acc = acc.combine(self.nodes[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                acc = acc.combine(self.nodes[r]);
            }
            l >>= 1;
            r >>= 1;
        }
        acc
    }

    fn mark_removed(&mut self, slot: usize) {
        let mut i = slot + self.size;
        self.nodes[i].removed = true;
        i >>= 1;
        while i >= 1 {
            self.nodes[i] = self.nodes[2 * i].combine(self.nodes[2 * i + 1]);
            i >>= 1;
        }
    }

    fn is_removed(&self, slot: usize) -> bool {
        self.nodes[slot + self.size].removed
    }
}
