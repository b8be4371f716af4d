//! Dual side: a Lagrangean decomposition of the cycle relaxation into edge
//! and triangle subproblems, optimised by parallel message passing.
//!
//! Multipliers `λ[t][s]` couple triangle `t` with its `s`-th edge. The
//! reparametrised costs are
//!
//! ```text
//! edge:     c_e + Σ_{t ∋ e} λ[t][e]
//! triangle: -Σ_{e ∈ t} λ[t][e] · y_e      for y in MC_Δ
//! ```
//!
//! and the lower bound is the sum of the independent subproblem minima.

mod agreement;
mod separation;
mod state;

pub use agreement::check_edge_triangle_agreement;
pub use separation::{separate_conflicted_cycles, ConflictedCycle};
pub use state::{triangulate, DualState, Triplet};

/// Edge slots of a triangle `i < j < k`, in schedule order.
pub const IJ: usize = 0;
pub const IK: usize = 1;
pub const JK: usize = 2;

/// Feasible cut patterns `(y_ij, y_ik, y_jk)` of a triangle: every pattern
/// except those cutting exactly one edge.
pub const MC_DELTA: [[bool; 3]; 5] = [
    [false, false, false],
    [true, true, false],
    [true, false, true],
    [false, true, true],
    [true, true, true],
];

/// Cost of triangle labeling `y` under multipliers `lambda`.
#[inline]
pub fn triangle_cost(lambda: &[f64; 3], y: &[bool; 3]) -> f64 {
    let mut c = 0.0;
    for s in 0..3 {
        if y[s] {
            c -= lambda[s];
        }
    }
    c
}

/// Minimum triangle cost over `MC_Δ`.
#[inline]
pub fn triangle_minimum(lambda: &[f64; 3]) -> f64 {
    MC_DELTA
        .iter()
        .map(|y| triangle_cost(lambda, y))
        .fold(f64::INFINITY, f64::min)
}

/// `min_{y_s = 1} c(y) - min_{y_s = 0} c(y)` over `MC_Δ`.
#[inline]
pub fn triangle_min_marginal(lambda: &[f64; 3], slot: usize) -> f64 {
    let mut on = f64::INFINITY;
    let mut off = f64::INFINITY;
    for y in &MC_DELTA {
        let c = triangle_cost(lambda, y);
        if y[slot] {
            on = on.min(c);
        } else {
            off = off.min(c);
        }
    }
    on - off
}

/// Damped triangle-to-edge schedule: `(slot, fraction of the min-marginal)`.
pub(crate) const TRIANGLE_SCHEDULE: [(usize, f64); 6] = [
    (IJ, 1.0 / 3.0),
    (IK, 0.5),
    (JK, 1.0),
    (IJ, 0.5),
    (IK, 1.0),
    (IJ, 1.0),
];

/// Runs the six-step schedule on one triangle's multipliers.
#[inline]
pub(crate) fn update_triangle(lambda: &mut [f64; 3]) {
    for &(slot, w) in &TRIANGLE_SCHEDULE {
        let m = triangle_min_marginal(lambda, slot);
        lambda[slot] += w * m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_marginals_at_zero() {
        for s in 0..3 {
            assert_eq!(triangle_min_marginal(&[0.0; 3], s), 0.0);
        }
    }

    #[test]
    fn min_marginal_all_ones() {
        // costs: 000 -> 0, two cuts -> -2, three cuts -> -3
        let lam = [1.0, 1.0, 1.0];
        for s in 0..3 {
            assert_eq!(triangle_min_marginal(&lam, s), -1.0);
        }
        assert_eq!(triangle_minimum(&lam), -3.0);
    }

    #[test]
    fn min_marginal_mixed() {
        // coefficients (+1, -2, +1) on (ij, ik, jk)
        let lam = [-1.0, 2.0, -1.0];
        assert_eq!(triangle_min_marginal(&lam, IK), -1.0);
        assert_eq!(triangle_minimum(&lam), -1.0);
    }

    #[test]
    fn schedule_trace_on_triangle() {
        // after the edge phase of the (+1, +1, -2) triangle:
        // λ_ij = λ_01 = -1, λ_ik = λ_02 = +2, λ_jk = λ_12 = -1
        let mut lam = [-1.0, 2.0, -1.0];
        let mut ms = Vec::new();
        for &(slot, w) in &TRIANGLE_SCHEDULE {
            let m = triangle_min_marginal(&lam, slot);
            ms.push(m);
            lam[slot] += w * m;
        }
        assert_eq!(ms, vec![0.0, -1.0, 0.0, 0.0, -0.5, 0.0]);
        assert_eq!(lam, [-1.0, 1.0, -1.0]);
    }

    #[test]
    fn zero_marginals_are_a_fixed_point() {
        let mut lam = [-1.0, 1.0, -1.0];
        update_triangle(&mut lam);
        assert_eq!(lam, [-1.0, 1.0, -1.0]);
        let mut zero = [0.0; 3];
        update_triangle(&mut zero);
        assert_eq!(zero, [0.0; 3]);
    }
}
