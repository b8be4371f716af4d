use rayon::prelude::*;

use crate::graph::{Neighbors, NodeId, WeightedGraph};

const UNMATCHED: NodeId = NodeId::MAX;

/// Handshake matching on strictly positive edges.
///
/// Each round every unmatched node points at its heaviest unmatched
/// positive neighbour (ties to the smaller id); mutually pointing pairs are
/// matched. Stops after `rounds` rounds or when a round adds nothing.
/// Returns matched pairs `(u, v)` with `u < v`, sorted.
pub fn select_matching(
    g: &WeightedGraph,
    rounds: usize,
    jitter_seed: Option<u64>,
) -> Vec<(NodeId, NodeId)> {
    let n = g.num_nodes();
    let nb = Neighbors::build(g, |_, e| e.cost > 0.0);
    let weight: Vec<f64> = match jitter_seed {
        None => g.edges().iter().map(|e| e.cost).collect(),
        Some(seed) => g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| e.cost * (1.0 + 1e-9 * unit_hash(seed, i as u64)))
            .collect(),
    };

    let mut mate = vec![UNMATCHED; n];
    for _ in 0..rounds {
        let proposal: Vec<NodeId> = (0..n)
            .into_par_iter()
            .map(|x| {
                if mate[x] != UNMATCHED {
                    return UNMATCHED;
                }
                let mut best = UNMATCHED;
                let mut best_w = f64::NEG_INFINITY;
                for &(y, e) in nb.of(x) {
                    if mate[y] == UNMATCHED && weight[e] > best_w {
                        best = y;
                        best_w = weight[e];
                    }
                }
                best
            })
            .collect();
        let handshakes: Vec<NodeId> = (0..n)
            .into_par_iter()
            .filter(|&x| {
                let p = proposal[x];
                p != UNMATCHED && x < p && proposal[p] == x
            })
            .collect();
        if handshakes.is_empty() {
            break;
        }
        for x in handshakes {
            let p = proposal[x];
            mate[x] = p;
            mate[p] = x;
        }
    }

    (0..n)
        .filter(|&x| mate[x] != UNMATCHED && x < mate[x])
        .map(|x| (x, mate[x]))
        .collect()
}

/// splitmix64 of `(seed, i)` mapped to `[0, 1)`.
fn unit_hash(seed: u64, i: u64) -> f64 {
    let mut z = seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}
