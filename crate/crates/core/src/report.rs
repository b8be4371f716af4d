//! Machine-readable run reports (JSON) and benchmark tables (CSV).

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::solver::{Mode, RoundRecord, Solution, SolverConfig};

/// JSON schema the reports conform to.
pub const RUN_REPORT_SCHEMA: &str = include_str!("../schema/run_report.schema.json");

/// Columns of the benchmark CSV, in order.
pub const BENCH_COLUMNS: [&str; 5] = ["instance", "mode", "primal_cost", "lower_bound", "time_ms"];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WallTimes {
    pub parse: f64,
    pub solve: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub mode: Mode,
    pub config: SolverConfig,
    pub primal_cost: f64,
    pub lower_bound: Option<f64>,
    pub gap: Option<f64>,
    pub node_labels: Vec<usize>,
    pub trace: Vec<RoundRecord>,
    pub wall_times_ms: WallTimes,
    pub seed: u64,
    pub threads: usize,
}

impl RunReport {
    pub fn new(
        instance: impl Into<String>,
        cfg: &SolverConfig,
        sol: &Solution,
        times: WallTimes,
    ) -> Self {
        let lower_bound = sol.lower_bound();
        Self {
            instance: instance.into(),
            mode: cfg.mode,
            config: cfg.clone(),
            primal_cost: sol.primal_cost,
            lower_bound,
            gap: lower_bound.map(|lb| sol.primal_cost - lb),
            node_labels: sol.labeling.cluster_of().to_vec(),
            trace: sol.trace.clone(),
            wall_times_ms: times,
            seed: cfg.seed,
            threads: cfg.threads,
        }
    }

    /// Zeroes every timing field, leaving a report that only depends on
    /// the instance and the configuration.
    pub fn without_timings(mut self) -> Self {
        self.wall_times_ms = WallTimes::default();
        for r in &mut self.trace {
            r.elapsed_ms = 0.0;
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serialisable")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub mode: Mode,
    pub primal_cost: f64,
    pub lower_bound: Option<f64>,
    pub time_ms: f64,
}

/// Writes the rows, followed by one `mean` row per mode (in order of first
/// appearance). The mean lower bound is left empty unless every row of the
/// mode has one.
pub fn write_bench_csv<W: Write>(out: W, rows: &[BenchRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_COLUMNS)?;
    let fmt_lb = |lb: Option<f64>| lb.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.instance.clone(),
            r.mode.to_string(),
            r.primal_cost.to_string(),
            fmt_lb(r.lower_bound),
            format!("{:.3}", r.time_ms),
        ])?;
    }
    let mut modes: Vec<Mode> = Vec::new();
    for r in rows {
        if !modes.contains(&r.mode) {
            modes.push(r.mode);
        }
    }
    for m in modes {
        let of_mode: Vec<&BenchRow> = rows.iter().filter(|r| r.mode == m).collect();
        let k = of_mode.len() as f64;
        let primal = of_mode.iter().map(|r| r.primal_cost).sum::<f64>() / k;
        let lb = of_mode
            .iter()
            .map(|r| r.lower_bound)
            .collect::<Option<Vec<f64>>>()
            .map(|v| v.iter().sum::<f64>() / k);
        let time = of_mode.iter().map(|r| r.time_ms).sum::<f64>() / k;
        w.write_record([
            "mean".to_string(),
            m.to_string(),
            primal.to_string(),
            fmt_lb(lb),
            format!("{time:.3}"),
        ])?;
    }
    w.flush()?;
    Ok(())
}
