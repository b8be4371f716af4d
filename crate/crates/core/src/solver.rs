//! The recursive primal-dual driver and the solver modes.
//!
//! | mode   | what runs                                                        |
//! |--------|------------------------------------------------------------------|
//! | `GAEC` | greedy additive edge contraction                                 |
//! | `P`    | parallel contraction rounds (matching, spanning-forest fallback) |
//! | `PD`   | per round: separate, message passing, contract on `c^λ`          |
//! | `PD+`  | `PD` with longer separated cycles                                |
//! | `D`    | separation and message passing only; lower bound                 |

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::contraction::{
    contract_graph, contraction_step, greedy_additive_contraction, ContractionMapping, Policy,
    StepOptions,
};
use crate::dual::{separate_conflicted_cycles, triangulate, DualState};
use crate::error::{Error, Result};
use crate::graph::{clustering_cost, Labeling, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "P")]
    Primal,
    #[serde(rename = "PD")]
    PrimalDual,
    #[serde(rename = "PD+")]
    PrimalDualPlus,
    #[serde(rename = "D")]
    Dual,
    #[serde(rename = "GAEC")]
    Gaec,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Primal,
        Mode::PrimalDual,
        Mode::PrimalDualPlus,
        Mode::Dual,
        Mode::Gaec,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Primal => "P",
            Mode::PrimalDual => "PD",
            Mode::PrimalDualPlus => "PD+",
            Mode::Dual => "D",
            Mode::Gaec => "GAEC",
        }
    }

    fn uses_duals(self) -> bool {
        matches!(self, Mode::PrimalDual | Mode::PrimalDualPlus | Mode::Dual)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown mode `{s}` (expected P, PD, PD+, D or GAEC)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub mode: Mode,
    /// Message-passing iterations per round.
    pub mp_iterations: usize,
    pub max_cycle_length: usize,
    pub matching_switch_fraction: f64,
    pub matching_rounds: usize,
    /// Cap on primal-dual rounds.
    pub max_rounds: usize,
    /// Separation rounds in dual-only mode.
    pub separation_rounds: usize,
    /// Perturb matching proposals with `seed`.
    pub matching_jitter: bool,
    pub seed: u64,
    /// Worker threads; 0 uses the machine's parallelism.
    pub threads: usize,
}

impl SolverConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            mp_iterations: 5,
            max_cycle_length: if mode == Mode::PrimalDualPlus { 7 } else { 5 },
            matching_switch_fraction: 0.1,
            matching_rounds: 5,
            max_rounds: 100,
            separation_rounds: 1,
            matching_jitter: false,
            seed: 0,
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode.uses_duals() && self.mp_iterations < 1 {
            return Err(Error::Config("mp_iterations must be at least 1".into()));
        }
        if self.max_cycle_length < 3 {
            return Err(Error::Config("max_cycle_length must be at least 3".into()));
        }
        if !(self.matching_switch_fraction > 0.0 && self.matching_switch_fraction <= 1.0) {
            return Err(Error::Config(
                "matching_switch_fraction must lie in (0, 1]".into(),
            ));
        }
        if self.max_rounds < 1 || self.separation_rounds < 1 {
            return Err(Error::Config(
                "max_rounds and separation_rounds must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn step_options(&self) -> StepOptions {
        StepOptions {
            matching_rounds: self.matching_rounds,
            switch_fraction: self.matching_switch_fraction,
            jitter_seed: self.matching_jitter.then_some(self.seed),
        }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::new(Mode::PrimalDual)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub nodes: usize,
    pub edges: usize,
    pub triplets: usize,
    pub lower_bound: Option<f64>,
    /// Only the first round's bound refers to the original problem.
    pub lower_bound_valid: bool,
    pub contracted_edges: usize,
    pub strategy: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub labeling: Labeling,
    /// Objective of `labeling` under the original costs.
    pub primal_cost: f64,
    /// Valid lower bound, or `-inf` for modes without duals.
    pub lower_bound: f64,
    pub trace: Vec<RoundRecord>,
}

impl Solution {
    pub fn lower_bound(&self) -> Option<f64> {
        self.lower_bound.is_finite().then_some(self.lower_bound)
    }
}

/// Solves `g` in the configured mode, on a dedicated thread pool.
pub fn solve(g: &WeightedGraph, cfg: &SolverConfig) -> Result<Solution> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| match cfg.mode {
        Mode::Gaec => Ok(solve_gaec(g)),
        Mode::Primal => Ok(solve_primal(g, cfg)),
        Mode::PrimalDual | Mode::PrimalDualPlus => Ok(solve_primal_dual(g, cfg)),
        Mode::Dual => Ok(solve_dual(g, cfg)),
    })
}

/// Lower bound from separation and message passing alone (mode `D`).
pub fn dual_bound(g: &WeightedGraph, cfg: &SolverConfig) -> Result<f64> {
    if cfg.mode != Mode::Dual {
        return Err(Error::Config(format!(
            "dual_bound needs mode D, got {}",
            cfg.mode
        )));
    }
    Ok(solve(g, cfg)?.lower_bound)
}

fn finish(
    g: &WeightedGraph,
    mapping: &ContractionMapping,
    lower_bound: f64,
    trace: Vec<RoundRecord>,
) -> Solution {
    let labeling = mapping.to_labeling();
    let primal_cost = clustering_cost(g, &labeling).expect("mapping covers every node");
    Solution {
        labeling,
        primal_cost,
        lower_bound,
        trace,
    }
}

fn solve_gaec(g: &WeightedGraph) -> Solution {
    let start = Instant::now();
    let (mapping, _) = greedy_additive_contraction(g);
    let record = RoundRecord {
        round: 1,
        nodes: g.num_nodes(),
        edges: g.num_edges(),
        triplets: 0,
        lower_bound: None,
        lower_bound_valid: false,
        contracted_edges: g.num_nodes() - mapping.num_targets(),
        strategy: Some("gaec".into()),
        elapsed_ms: ms(start),
    };
    finish(g, &mapping, f64::NEG_INFINITY, vec![record])
}

fn solve_primal(g: &WeightedGraph, cfg: &SolverConfig) -> Solution {
    let opts = cfg.step_options();
    let mut current = g.clone();
    let mut mapping = ContractionMapping::identity(g.num_nodes());
    let mut trace = Vec::new();
    for round in 1.. {
        let start = Instant::now();
        let step = contraction_step(&current, Policy::Auto, &opts);
        trace.push(RoundRecord {
            round,
            nodes: current.num_nodes(),
            edges: current.num_edges(),
            triplets: 0,
            lower_bound: None,
            lower_bound_valid: false,
            contracted_edges: step.contracted_edges,
            strategy: Some(strategy_name(step.policy_used).into()),
            elapsed_ms: ms(start),
        });
        if step.contracted_edges == 0 {
            break;
        }
        mapping = mapping.then(&step.mapping);
        current = step.graph;
    }
    finish(g, &mapping, f64::NEG_INFINITY, trace)
}

fn solve_primal_dual(g: &WeightedGraph, cfg: &SolverConfig) -> Solution {
    let opts = cfg.step_options();
    let mut current = g.clone();
    let mut mapping = ContractionMapping::identity(g.num_nodes());
    let mut lower_bound = f64::NEG_INFINITY;
    let mut trace = Vec::new();

    for round in 1..=cfg.max_rounds {
        let start = Instant::now();
        let cycles = separate_conflicted_cycles(&current, cfg.max_cycle_length);
        // multipliers start from zero on every contracted graph
        let mut state = triangulate(&cycles, &current);
        for _ in 0..cfg.mp_iterations {
            state.message_passing_iteration();
        }
        let round_bound = state.lower_bound();
        if round == 1 {
            lower_bound = round_bound;
        }
        let reparametrized = state.reparametrized_graph();
        let step = contraction_step(&reparametrized, Policy::Auto, &opts);
        trace.push(RoundRecord {
            round,
            nodes: current.num_nodes(),
            edges: current.num_edges(),
            triplets: state.triplets().len(),
            lower_bound: Some(round_bound),
            lower_bound_valid: round == 1,
            contracted_edges: step.contracted_edges,
            strategy: Some(strategy_name(step.policy_used).into()),
            elapsed_ms: ms(start),
        });
        if step.contracted_edges == 0 {
            break;
        }
        mapping = mapping.then(&step.mapping);
        current = step.graph;
    }

    // Greedy cleanup on the original costs: first from the primal-dual
    // quotient, then compared against greedy contraction from scratch.
    let start = Instant::now();
    let (quotient, _) = contract_graph(g, &mapping);
    let (refine, _) = greedy_additive_contraction(&quotient);
    let refined = mapping.then(&refine);
    let refined_cost = clustering_cost(g, &refined.to_labeling()).expect("full labeling");
    let (scratch, _) = greedy_additive_contraction(g);
    let scratch_cost = clustering_cost(g, &scratch.to_labeling()).expect("full labeling");
    let (chosen, strategy) = if scratch_cost < refined_cost {
        (scratch, "cleanup-gaec-restart")
    } else {
        (refined, "cleanup-gaec")
    };
    trace.push(RoundRecord {
        round: trace.len() + 1,
        nodes: quotient.num_nodes(),
        edges: quotient.num_edges(),
        triplets: 0,
        lower_bound: None,
        lower_bound_valid: false,
        contracted_edges: quotient.num_nodes() - refine.num_targets(),
        strategy: Some(strategy.into()),
        elapsed_ms: ms(start),
    });
    finish(g, &chosen, lower_bound, trace)
}

fn solve_dual(g: &WeightedGraph, cfg: &SolverConfig) -> Solution {
    let mut state = DualState::new(g);
    let mut trace = Vec::new();
    for round in 1..=cfg.separation_rounds {
        let start = Instant::now();
        let cycles = if round == 1 {
            separate_conflicted_cycles(g, cfg.max_cycle_length)
        } else {
            separate_conflicted_cycles(&state.reparametrized_graph(), cfg.max_cycle_length)
        };
        state.add_cycles(&cycles);
        for _ in 0..cfg.mp_iterations {
            state.message_passing_iteration();
        }
        trace.push(RoundRecord {
            round,
            nodes: g.num_nodes(),
            edges: state.num_edges(),
            triplets: state.triplets().len(),
            lower_bound: Some(state.lower_bound()),
            lower_bound_valid: true,
            contracted_edges: 0,
            strategy: None,
            elapsed_ms: ms(start),
        });
    }
    let lower_bound = state.lower_bound();
    finish(
        g,
        &ContractionMapping::identity(g.num_nodes()),
        lower_bound,
        trace,
    )
}

fn strategy_name(p: Policy) -> &'static str {
    match p {
        Policy::Gaec => "gaec",
        Policy::Matching => "matching",
        Policy::SpanningForest => "spanning-forest",
        Policy::Auto => "auto",
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
