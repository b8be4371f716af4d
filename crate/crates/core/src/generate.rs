//! Seeded synthetic instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Erdős–Rényi graph `G(n, p)` with standard-normal costs.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidGraph(format!(
            "edge probability {p} not in [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                let c: f64 = rng.sample(StandardNormal);
                edges.push((u, v, c));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub height: usize,
    pub width: usize,
    /// Long-range edge stride; 0 disables long-range edges.
    pub stride: usize,
    /// Side length of the square regions of the hidden segmentation.
    pub block: usize,
    /// Mean magnitude of the cost, positive inside a region, negative across.
    pub signal: f64,
    pub noise: f64,
}

impl GridSpec {
    pub fn new(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            stride: 0,
            block: 16,
            signal: 0.5,
            noise: 1.0,
        }
    }
}

/// 4-connected `height x width` grid, plus edges from every node whose row
/// and column are multiples of `stride` to the nodes `stride` steps below and
/// to the right.
///
/// Costs come from a hidden segmentation into `block`-sized squares with a
/// random offset: `±signal + noise * N(0, 1)`, positive when both endpoints
/// share a square.
pub fn grid_graph(spec: &GridSpec, seed: u64) -> Result<WeightedGraph> {
    let (h, w) = (spec.height, spec.width);
    if h == 0 || w == 0 {
        return Err(Error::InvalidGraph(format!(
            "grid dimensions must be positive, got {h}x{w}"
        )));
    }
    if spec.block == 0 {
        return Err(Error::InvalidGraph("block size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let off_r = rng.random_range(0..spec.block);
    let off_c = rng.random_range(0..spec.block);
    let region = |r: usize, c: usize| ((r + off_r) / spec.block, (c + off_c) / spec.block);
    let id = |r: usize, c: usize| r * w + c;

    let mut edges = Vec::with_capacity(2 * h * w);
    let mut push = |rng: &mut ChaCha8Rng, a: (usize, usize), b: (usize, usize)| {
        let sign = if region(a.0, a.1) == region(b.0, b.1) {
            1.0
        } else {
            -1.0
        };
        let z: f64 = rng.sample(StandardNormal);
        edges.push((
            id(a.0, a.1),
            id(b.0, b.1),
            sign * spec.signal + spec.noise * z,
        ));
    };
    for r in 0..h {
        for c in 0..w {
            if c + 1 < w {
                push(&mut rng, (r, c), (r, c + 1));
            }
            if r + 1 < h {
                push(&mut rng, (r, c), (r + 1, c));
            }
        }
    }
    if spec.stride > 1 {
        let s = spec.stride;
        for r in (0..h).step_by(s) {
            for c in (0..w).step_by(s) {
                if c + s < w {
                    push(&mut rng, (r, c), (r, c + s));
                }
                if r + s < h {
                    push(&mut rng, (r, c), (r + s, c));
                }
            }
        }
    }
    WeightedGraph::new(h * w, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_is_deterministic() {
        let a = random_graph(6, 0.5, 1).unwrap();
        assert_eq!(a.to_text(), random_graph(6, 0.5, 1).unwrap().to_text());
        assert_ne!(a.to_text(), random_graph(6, 0.5, 2).unwrap().to_text());
        assert!(random_graph(3, 1.5, 0).is_err());
        assert_eq!(random_graph(5, 1.0, 0).unwrap().num_edges(), 10);
    }

    #[test]
    fn grid_counts() {
        let g = grid_graph(&GridSpec::new(2, 2), 0).unwrap();
        assert_eq!((g.num_nodes(), g.num_edges()), (4, 4));
        let spec = GridSpec {
            stride: 2,
            ..GridSpec::new(3, 3)
        };
        let g = grid_graph(&spec, 0).unwrap();
        // 12 grid edges; long range from (0,0), (0,2), (2,0): 4 edges
        assert_eq!((g.num_nodes(), g.num_edges()), (9, 16));
        assert!(grid_graph(&GridSpec::new(0, 3), 0).is_err());
    }

    #[test]
    fn grid_costs_have_both_signs() {
        let g = grid_graph(&GridSpec::new(40, 40), 3).unwrap();
        assert!(g.edges().iter().any(|e| e.cost > 0.0));
        assert!(g.edges().iter().any(|e| e.cost < 0.0));
    }
}
