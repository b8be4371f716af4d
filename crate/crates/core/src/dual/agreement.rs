use super::{triangle_cost, DualState, MC_DELTA};

/// Checks edge-triangle agreement of the ε-optimal local solutions.
///
/// Starts from the ε-optimal label sets of every edge and triplet and
/// propagates to a fixpoint: a triplet labeling is dropped when its value on
/// some edge is no longer allowed there, and an edge label is dropped when
/// some covering triplet has no remaining labeling that agrees with it.
/// Returns `true` iff no set becomes empty, i.e. an arc-consistent kernel
/// exists.
pub fn check_edge_triangle_agreement(state: &DualState, eps: f64) -> bool {
    assert!(eps >= 0.0);
    let costs = state.reparametrized_costs();
    // bit 0: label 0 allowed, bit 1: label 1 allowed
    let mut edge_sets: Vec<u8> = costs
        .iter()
        .map(|&c| {
            let floor = c.min(0.0) + eps;
            let mut m = 0u8;
            if 0.0 <= floor {
                m |= 1;
            }
            if c <= floor {
                m |= 2;
            }
            m
        })
        .collect();

    let triplets = state.triplets();
    let mut tri_sets: Vec<u8> = state
        .lambda()
        .iter()
        .map(|lam| {
            let vals: Vec<f64> = MC_DELTA.iter().map(|y| triangle_cost(lam, y)).collect();
            let best = vals.iter().copied().fold(f64::INFINITY, f64::min);
            vals.iter()
                .enumerate()
                .filter(|(_, &v)| v <= best + eps)
                .fold(0u8, |m, (i, _)| m | (1 << i))
        })
        .collect();

    let allowed = |mask: u8, y: bool| mask & (1 << u8::from(y)) != 0;

    let mut changed = true;
    while changed {
        changed = false;
        for (t, set) in triplets.iter().zip(tri_sets.iter_mut()) {
            for (i, y) in MC_DELTA.iter().enumerate() {
                if *set & (1 << i) == 0 {
                    continue;
                }
                if (0..3).any(|s| !allowed(edge_sets[t.edges[s]], y[s])) {
                    *set &= !(1 << i);
                    changed = true;
                }
            }
        }
        for (t, &set) in triplets.iter().zip(&tri_sets) {
            for s in 0..3 {
                let mut projection = 0u8;
                for (i, y) in MC_DELTA.iter().enumerate() {
                    if set & (1 << i) != 0 {
                        projection |= 1 << u8::from(y[s]);
                    }
                }
                let e = t.edges[s];
                let narrowed = edge_sets[e] & projection;
                if narrowed != edge_sets[e] {
                    edge_sets[e] = narrowed;
                    changed = true;
                }
            }
        }
    }
    edge_sets.iter().all(|&m| m != 0) && tri_sets.iter().all(|&m| m != 0)
}
