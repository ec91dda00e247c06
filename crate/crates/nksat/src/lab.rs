//! Experiment harness: per-trial detector/solver pipelines, seeded
//! parameter sweeps with CSV and JSON reporting, and Monte Carlo checks of
//! the closed-form probabilities behind the solubility analysis.
//!
//! A trial runs the pipeline in a fixed order: generate the instance, scan
//! for an all-zero function, look for a conflicting pair, extract and solve
//! the 2-SAT sub-problem, then reduce to CNF and run DPLL. Fast mode skips
//! the solver once an earlier stage has certified insolubility; full-stats
//! mode always solves, which is what the consistency checks and cost curves
//! need.
//!
//! Sweeps derive every trial seed as `hash(root seed, n, parameter, trial
//! index)`, so any cell can be reproduced in isolation and results do not
//! depend on scheduling. Wall-clock fields are zeroed in records to keep
//! repeated runs byte-identical.

use crate::cnf::nk_to_cnf;
use crate::generator::{check_params, generate, GenError, GenParams, Model};
use crate::instance::LocalFitness;
use crate::solver::{
    dpll_with_budget, SolveOutcome, SolveStats, DEFAULT_DECISION_BUDGET,
};
use crate::structure::{find_all_zero_function, find_conflicting_pair, is_conflicting};
use crate::twosat::{extract_two_sat, pair_containment_rate, solve_two_sat};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Set this environment variable to a positive integer to cap the number
/// of worker threads a sweep uses.
pub const WORKER_ENV: &str = "NKSAT_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialMode {
    /// Skip the SAT solver when a detector already certified insolubility.
    Fast,
    /// Always run the solver, on both the full CNF and the 2-SAT
    /// sub-problem, recording their stats.
    FullStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOptions {
    pub mode: TrialMode,
    pub decision_budget: u64,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions { mode: TrialMode::Fast, decision_budget: DEFAULT_DECISION_BUDGET }
    }
}

/// The pipeline stage that settled a trial's verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineStage {
    AllZeroScan,
    ConflictingPair,
    TwoSatSub,
    FullSolve,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub params: GenParams,
    pub instance_digest: String,
    /// Lowest all-zero function index, if any.
    pub all_zero_function: Option<usize>,
    pub conflicting_pair: Option<(usize, usize)>,
    /// Verdict of the 2-SAT sub-problem.
    pub two_sat_unsat: bool,
    /// Final verdict; `None` only when the solver ran out of budget before
    /// any stage could decide.
    pub insoluble: Option<bool>,
    pub decided_by: Option<PipelineStage>,
    /// Stats of the DPLL run on the full reduction; absent when fast mode
    /// skipped it. Wall time is zeroed for reproducibility.
    pub full_stats: Option<SolveStats>,
    /// Stats of a DPLL run on the 2-SAT sub-problem (full-stats mode only).
    pub two_sat_stats: Option<SolveStats>,
}

impl TrialRecord {
    /// Search cost this trial contributes to sweep aggregates. Trials
    /// decided before the solver ran cost zero decisions.
    pub fn decision_cost(&self) -> u64 {
        self.full_stats.map_or(0, |s| s.decisions)
    }
}

pub fn run_trial(params: &GenParams, options: &TrialOptions) -> Result<TrialRecord, GenError> {
    let inst = generate(params)?;
    let instance_digest = inst.digest();
    let all_zero_function = find_all_zero_function(&inst);
    let conflicting_pair = find_conflicting_pair(&inst);
    let sub = extract_two_sat(&inst);
    let two_sat_unsat = !solve_two_sat(&sub)
        .expect("extracted sub-problem has only unit and binary clauses")
        .is_sat();

    let mut decided: Option<(bool, PipelineStage)> = if all_zero_function.is_some() {
        Some((true, PipelineStage::AllZeroScan))
    } else if conflicting_pair.is_some() {
        Some((true, PipelineStage::ConflictingPair))
    } else if two_sat_unsat {
        Some((true, PipelineStage::TwoSatSub))
    } else {
        None
    };

    let mut full_stats = None;
    let mut two_sat_stats = None;
    if options.mode == TrialMode::FullStats || decided.is_none() {
        let (outcome, mut stats) = dpll_with_budget(&nk_to_cnf(&inst), options.decision_budget);
        stats.wall_micros = 0;
        full_stats = Some(stats);
        match outcome {
            SolveOutcome::Sat(witness) => {
                debug_assert!(inst.is_solution(&crate::instance::Assignment::new(witness)));
                debug_assert!(decided.is_none(), "a detector contradicted a witness");
                decided = Some((false, PipelineStage::FullSolve));
            }
            SolveOutcome::Unsat => {
                if decided.is_none() {
                    decided = Some((true, PipelineStage::FullSolve));
                }
            }
            SolveOutcome::BudgetExceeded => {}
        }
    }
    if options.mode == TrialMode::FullStats {
        let (sub_outcome, mut stats) = dpll_with_budget(&sub, options.decision_budget);
        stats.wall_micros = 0;
        two_sat_stats = Some(stats);
        debug_assert!(
            matches!(sub_outcome, SolveOutcome::BudgetExceeded)
                || sub_outcome.is_unsat() == two_sat_unsat
        );
    }

    Ok(TrialRecord {
        params: *params,
        instance_digest,
        all_zero_function,
        conflicting_pair,
        two_sat_unsat,
        insoluble: decided.map(|(v, _)| v),
        decided_by: decided.map(|(_, s)| s),
        full_stats,
        two_sat_stats,
    })
}

/// Parameter axis of a sweep: zero counts per table (fixed ratio model) or
/// per-entry zero probabilities (uniform model).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GridParam {
    ZeroDensity(Vec<f64>),
    ZeroProbability(Vec<f64>),
}

impl GridParam {
    pub fn values(&self) -> &[f64] {
        match self {
            GridParam::ZeroDensity(v) | GridParam::ZeroProbability(v) => v,
        }
    }

    fn model_for(&self, value: f64) -> Model {
        match self {
            GridParam::ZeroDensity(_) => Model::FixedRatio { z: value },
            GridParam::ZeroProbability(_) => Model::Uniform { p: value },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub k: usize,
    pub n_values: Vec<usize>,
    pub param: GridParam,
    pub trials_per_cell: usize,
    pub root_seed: u64,
}

/// One (n, parameter) cell of a finished sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub n: usize,
    /// The swept parameter value; `z` for fixed-ratio sweeps, `p` for
    /// uniform ones. The CSV column is named `z` either way.
    pub z: f64,
    pub trials: usize,
    pub frac_insoluble_full: f64,
    pub frac_insoluble_2sat: f64,
    pub mean_decisions: f64,
    pub median_decisions: f64,
    pub sqrt_mean_decisions: f64,
}

impl CellSummary {
    fn standard_error(&self) -> f64 {
        let f = self.frac_insoluble_full;
        (f * (1.0 - f) / self.trials.max(1) as f64).sqrt()
    }
}

/// Where each n's insoluble fraction first reaches one half.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingEstimate {
    pub n: usize,
    /// Interpolated parameter value for the full verdicts, when the curve
    /// reaches 0.5 inside the grid.
    pub full: Option<f64>,
    /// Same for the 2-SAT sub-problem verdicts.
    pub two_sat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    /// Sorted by (n, parameter) ascending regardless of grid order.
    pub cells: Vec<CellSummary>,
    pub crossings: Vec<CrossingEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub records: Vec<TrialRecord>,
    pub summary: SweepSummary,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Per-trial seed derived from the sweep coordinates, so a single cell or
/// trial can be reproduced without running the rest of the grid.
pub fn trial_seed(root_seed: u64, n: usize, param: f64, trial: usize) -> u64 {
    let mut h = splitmix64(root_seed);
    h = splitmix64(h ^ n as u64);
    h = splitmix64(h ^ param.to_bits());
    h = splitmix64(h ^ trial as u64)    ;
    h
}

fn worker_cap() -> Option<usize> {
    std::env::var(WORKER_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&w| w >= 1)
}

/// Runs every cell of the grid, invoking `on_cell` with each cell's
/// records as soon as the cell finishes, in grid order. Trials inside a
/// cell run in parallel; records are ordered by trial index regardless of
/// completion order.
pub fn sweep_streaming(
    grid: &SweepGrid,
    options: &TrialOptions,
    mut on_cell: impl FnMut(&[TrialRecord]),
) -> Result<SweepResult, GenError> {
    for &n in &grid.n_values {
        for &value in grid.param.values() {
            check_params(&GenParams {
                n,
                k: grid.k,
                model: grid.param.model_for(value),
                seed: 0,
            })?;
        }
    }
    let pool = worker_cap().map(|w| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("worker pool")
    });
    let mut records = Vec::with_capacity(
        grid.n_values.len() * grid.param.values().len() * grid.trials_per_cell,
    );
    for &n in &grid.n_values {
        for &value in grid.param.values() {
            let run = || -> Vec<TrialRecord> {
                use rayon::prelude::*;
                (0..grid.trials_per_cell)
                    .into_par_iter()
                    .map(|trial| {
                        let params = GenParams {
                            n,
                            k: grid.k,
                            model: grid.param.model_for(value),
                            seed: trial_seed(grid.root_seed, n, value, trial),
                        };
                        run_trial(&params, options).expect("cell parameters validated above")
                    })
                    .collect()
            };
            let cell = match &pool {
                Some(pool) => pool.install(run),
                None => run(),
            };
            on_cell(&cell);
            records.extend(cell);
        }
    }
    let summary = summarize(grid, &records);
    Ok(SweepResult { records, summary })
}

pub fn sweep(grid: &SweepGrid, options: &TrialOptions) -> Result<SweepResult, GenError> {
    sweep_streaming(grid, options, |_| {})
}

/// Aggregates records into per-cell summaries and crossing estimates.
/// Records are keyed by their own parameters, so the outcome does not
/// depend on record order.
pub fn summarize(grid: &SweepGrid, records: &[TrialRecord]) -> SweepSummary {
    let mut cell_order: Vec<(usize, f64)> = Vec::new();
    for &n in &grid.n_values {
        for &value in grid.param.values() {
            cell_order.push((n, value));
        }
    }
    cell_order.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    cell_order.dedup_by(|a, b| a.0 == b.0 && a.1.to_bits() == b.1.to_bits());

    let mut cells = Vec::with_capacity(cell_order.len());
    for &(n, value) in &cell_order {
        let mut insoluble_full = 0usize;
        let mut insoluble_2sat = 0usize;
        let mut costs: Vec<u64> = Vec::new();
        for r in records {
            if r.params.n != n || r.params.model.parameter().to_bits() != value.to_bits() {
                continue;
            }
            if r.insoluble == Some(true) {
                insoluble_full += 1;
            }
            if r.two_sat_unsat {
                insoluble_2sat += 1;
            }
            costs.push(r.decision_cost());
        }
        let trials = costs.len();
        costs.sort_unstable();
        let mean = if trials == 0 {
            0.0
        } else {
            costs.iter().sum::<u64>() as f64 / trials as f64
        };
        let median = match trials {
            0 => 0.0,
            t if t % 2 == 1 => costs[t / 2] as f64,
            t => (costs[t / 2 - 1] + costs[t / 2]) as f64 / 2.0,
        };
        let denom = trials.max(1) as f64;
        cells.push(CellSummary {
            n,
            z: value,
            trials,
            frac_insoluble_full: insoluble_full as f64 / denom,
            frac_insoluble_2sat: insoluble_2sat as f64 / denom,
            mean_decisions: mean,
            median_decisions: median,
            sqrt_mean_decisions: mean.sqrt(),
        });
    }

    let mut crossings = Vec::new();
    let mut n_sorted: Vec<usize> = grid.n_values.clone();
    n_sorted.sort_unstable();
    n_sorted.dedup();
    for n in n_sorted {
        let series: Vec<&CellSummary> = cells.iter().filter(|c| c.n == n).collect();
        let full = crossing_point(
            &series.iter().map(|c| (c.z, c.frac_insoluble_full)).collect::<Vec<_>>(),
        );
        let two_sat = crossing_point(
            &series.iter().map(|c| (c.z, c.frac_insoluble_2sat)).collect::<Vec<_>>(),
        );
        crossings.push(CrossingEstimate { n, full, two_sat });
    }
    SweepSummary { cells, crossings }
}

/// First grid point where the fraction reaches 0.5, linearly interpolated
/// against the previous point. `None` when the curve never gets there.
pub fn crossing_point(series: &[(f64, f64)]) -> Option<f64> {
    let hit = series.iter().position(|&(_, f)| f >= 0.5)?;
    if hit == 0 {
        return Some(series[0].0);
    }
    let (z_lo, f_lo) = series[hit - 1];
    let (z_hi, f_hi) = series[hit];
    Some(z_lo + (0.5 - f_lo) * (z_hi - z_lo) / (f_hi - f_lo))
}

/// Adjacent parameter steps where the insoluble fraction drops by more
/// than two standard errors of the difference. These are flags for review,
/// not failures; single-pair violations are expected noise at 100 trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityFlag {
    pub n: usize,
    pub z_previous: f64,
    pub z_current: f64,
    pub drop: f64,
    pub allowance: f64,
}

pub fn monotonicity_flags(summary: &SweepSummary) -> Vec<MonotonicityFlag> {
    let mut flags = Vec::new();
    for pair in summary.cells.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.n != b.n {
            continue;
        }
        let drop = a.frac_insoluble_full - b.frac_insoluble_full;
        let allowance =
            2.0 * (a.standard_error().powi(2) + b.standard_error().powi(2)).sqrt();
        if drop > allowance {
            flags.push(MonotonicityFlag {
                n: a.n,
                z_previous: a.z,
                z_current: b.z,
                drop,
                allowance,
            });
        }
    }
    flags
}

pub const CSV_HEADER: &str = "n,z,trials,frac_insoluble_full,frac_insoluble_2sat,mean_decisions,median_decisions,sqrt_mean_decisions";

/// Renders the summary as CSV, one row per cell in (n, z) ascending order.
/// Floats print in shortest round-trip form, so equal inputs give byte
/// equal output.
pub fn summary_to_csv(summary: &SweepSummary) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in &summary.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            c.n,
            c.z,
            c.trials,
            c.frac_insoluble_full,
            c.frac_insoluble_2sat,
            c.mean_decisions,
            c.median_decisions,
            c.sqrt_mean_decisions
        )
        .unwrap();
    }
    out
}

/// Machine-readable sweep provenance written next to the CSV.
pub fn sweep_metadata(grid: &SweepGrid, options: &TrialOptions) -> serde_json::Value {
    serde_json::json!({
        "grid": grid,
        "options": options,
        "crate_version": env!("CARGO_PKG_VERSION"),
        "worker_env": WORKER_ENV,
        "csv_header": CSV_HEADER,
    })
}

#[derive(Debug, Error)]
#[error("writing {path}: {source}")]
pub struct ReportError {
    pub path: PathBuf,
    #[source]
    pub source: std::io::Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportPaths {
    pub csv: PathBuf,
    pub metadata: PathBuf,
    pub svg: Option<PathBuf>,
}

/// Writes `summary.csv` and `meta.json` (and optionally `curves.svg`) into
/// `dir`, creating it if needed.
pub fn write_report(
    dir: &Path,
    grid: &SweepGrid,
    options: &TrialOptions,
    summary: &SweepSummary,
    with_svg: bool,
) -> Result<ReportPaths, ReportError> {
    let write = |path: PathBuf, content: String| -> Result<PathBuf, ReportError> {
        std::fs::write(&path, content).map_err(|source| ReportError { path: path.clone(), source })?;
        Ok(path)
    };
    std::fs::create_dir_all(dir).map_err(|source| ReportError { path: dir.to_path_buf(), source })?;
    let csv = write(dir.join("summary.csv"), summary_to_csv(summary))?;
    let meta_text = serde_json::to_string_pretty(&sweep_metadata(grid, options)).unwrap();
    let metadata = write(dir.join("meta.json"), meta_text + "\n")?;
    let svg = if with_svg {
        Some(write(dir.join("curves.svg"), fraction_curves_svg(summary))?)
    } else {
        None
    };
    Ok(ReportPaths { csv, metadata, svg })
}

/// Appends records to a JSON-lines file, one record per line, flushing at
/// the end. Used to persist partial sweeps incrementally.
pub fn append_records_jsonl(path: &Path, records: &[TrialRecord]) -> Result<(), ReportError> {
    let wrap = |source: std::io::Error| ReportError { path: path.to_path_buf(), source };
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(wrap)?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(r).unwrap());
        buf.push('\n');
    }
    file.write_all(buf.as_bytes()).map_err(wrap)?;
    file.flush().map_err(wrap)
}

/// Minimal standalone SVG of the insoluble-fraction curves: solid lines
/// for the full verdicts, dashed for the 2-SAT sub-problem, one color per
/// n.
pub fn fraction_curves_svg(summary: &SweepSummary) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const L: f64 = 54.0;
    const R: f64 = 18.0;
    const T: f64 = 18.0;
    const B: f64 = 44.0;
    const PALETTE: [&str; 6] = ["#2563eb", "#dc2626", "#16a34a", "#9333ea", "#ea580c", "#0d9488"];

    let mut ns: Vec<usize> = summary.cells.iter().map(|c| c.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let (mut z_min, mut z_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in &summary.cells {
        z_min = z_min.min(c.z);
        z_max = z_max.max(c.z);
    }
    if !z_min.is_finite() || z_max <= z_min {
        z_min = 0.0;
        z_max = 1.0;
    }
    let x = |z: f64| L + (z - z_min) / (z_max - z_min) * (W - L - R);
    let y = |f: f64| T + (1.0 - f) * (H - T - B);

    let mut svg = String::new();
    write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    )
    .unwrap();
    // Axes and reference line at one half.
    write!(
        svg,
        "<line x1=\"{L}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{L}\" y1=\"{T}\" x2=\"{L}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{L}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\" stroke-dasharray=\"2 4\"/>\n",
        y(0.0), W - R, y(0.0),
        y(0.0),
        y(0.5), W - R, y(0.5)
    )
    .unwrap();
    for (value, label) in [(0.0, "0"), (0.5, "0.5"), (1.0, "1")] {
        write!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{label}</text>\n",
            L - 6.0,
            y(value) + 4.0
        )
        .unwrap();
    }
    for z in [z_min, z_max] {
        write!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{z}</text>\n",
            x(z),
            H - B + 18.0
        )
        .unwrap();
    }
    write!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">parameter</text>\n\
         <text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">insoluble fraction</text>\n",
        (L + W - R) / 2.0,
        H - 8.0,
        (T + H - B) / 2.0,
        (T + H - B) / 2.0
    )
    .unwrap();

    for (ni, &n) in ns.iter().enumerate() {
        let color = PALETTE[ni % PALETTE.len()];
        let series: Vec<&CellSummary> = summary.cells.iter().filter(|c| c.n == n).collect();
        for (fraction, dash) in [(0usize, ""), (1, " stroke-dasharray=\"5 3\"")] {
            let points: String = series
                .iter()
                .map(|c| {
                    let f = if fraction == 0 { c.frac_insoluble_full } else { c.frac_insoluble_2sat };
                    format!("{:.2},{:.2}", x(c.z), y(f))
                })
                .collect::<Vec<_>>()
                .join(" ");
            write!(
                svg,
                "<polyline points=\"{points}\" fill=\"none\" stroke=\"{color}\"{dash}/>\n"
            )
            .unwrap();
        }
        write!(
            svg,
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">n={n}</text>\n",
            W - R - 70.0,
            T + 16.0 * (ni as f64 + 1.0)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

/// Outcome of one Monte Carlo comparison against a closed-form value. The
/// standard error uses the exact probability, so a zero-variance target
/// (p = 0 or 1) reports zero sigmas on exact agreement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub name: String,
    pub samples: u64,
    pub estimate: f64,
    pub expected: f64,
    pub std_error: f64,
    pub sigmas: f64,
}

impl McReport {
    fn from_hits(name: &str, samples: u64, hits: u64, expected: f64) -> Self {
        let estimate = hits as f64 / samples as f64;
        let std_error = (expected * (1.0 - expected) / samples as f64).sqrt();
        let sigmas = if std_error > 0.0 {
            (estimate - expected).abs() / std_error
        } else if (estimate - expected).abs() < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        McReport { name: name.to_string(), samples, estimate, expected, std_error, sigmas }
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.sigmas <= sigmas
    }
}

impl std::fmt::Display for McReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: estimate {:.6e} vs expected {:.6e} ({} samples, {:.2} sigma)",
            self.name, self.estimate, self.expected, self.samples, self.sigmas
        )
    }
}

/// Empirical probability that a uniform-model instance contains at least
/// one all-zero table, against the exact `1 - (1 - p^(2^(k+1)))^n`. Only
/// tables matter for the event, so neighborhoods are not sampled.
pub fn mc_check_all_zero(p: f64, n: usize, k: usize, samples: u64, seed: u64) -> McReport {
    let rows = 1usize << (k + 1);
    let expected = 1.0 - (1.0 - p.powi(rows as i32)).powi(n as i32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut found = false;
        for _ in 0..n {
            let mut all_zero = true;
            for _ in 0..rows {
                if rng.random::<f64>() >= p {
                    all_zero = false;
                }
            }
            if all_zero {
                found = true;
            }
        }
        if found {
            hits += 1;
        }
    }
    McReport::from_hits("all-zero-function", samples, hits, expected)
}

/// The fixed sharing geometry used by the conflict check: two k=2
/// functions whose variable sets overlap in exactly one variable (the
/// first function's main variable reappears as a neighbor of the second).
/// Row pairs are precomputed for all 32 joint assignments.
const CONFLICT_GEOMETRY: ([usize; 3], [usize; 3]) = ([0, 1, 2], [3, 0, 4]);

fn conflict_row_pairs() -> Vec<(usize, usize)> {
    let (vi, vj) = CONFLICT_GEOMETRY;
    let union = [0usize, 1, 2, 3, 4];
    let row = |vars: &[usize; 3], joint: usize| -> usize {
        let bit = |v: usize| {
            let pos = union.iter().position(|&u| u == v).unwrap();
            (joint >> pos) & 1
        };
        bit(vars[0]) << 2 | bit(vars[1]) << 1 | bit(vars[2])
    };
    (0..32).map(|joint| (row(&vi, joint), row(&vj, joint))).collect()
}

fn sample_zero_mask(rng: &mut ChaCha8Rng, zeros: usize) -> u8 {
    let mut ones: u8 = 0xFF;
    for idx in rand::seq::index::sample(rng, 8, zeros) {
        ones &= !(1u8 << idx);
    }
    ones
}

/// Empirical probability that two independent 4-zero tables over the fixed
/// one-shared-variable geometry form a conflicting pair, against the
/// conditional value 2/4900.
pub fn mc_check_conflict(samples: u64, seed: u64) -> McReport {
    let pairs = conflict_row_pairs();
    let expected = 2.0 / 4900.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let ones_i = sample_zero_mask(&mut rng, 4);
        let ones_j = sample_zero_mask(&mut rng, 4);
        let conflict = pairs
            .iter()
            .all(|&(ri, rj)| ones_i >> ri & 1 == 0 || ones_j >> rj & 1 == 0);
        if conflict {
            hits += 1;
        }
    }
    McReport::from_hits("conflicting-pair", samples, hits, expected)
}

/// Control group for the conflict check: identical table sampling but
/// disjoint variable sets, where a conflict is impossible.
pub fn mc_check_conflict_control(samples: u64, seed: u64) -> McReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let fi = table_from_mask(sample_zero_mask(&mut rng, 4), 0, [1, 2]);
        let fj = table_from_mask(sample_zero_mask(&mut rng, 4), 3, [4, 5]);
        if is_conflicting(&fi, &fj) {
            hits += 1;
        }
    }
    McReport::from_hits("conflicting-pair-control", samples, hits, 0.0)
}

fn table_from_mask(ones: u8, main_var: usize, neighborhood: [usize; 2]) -> LocalFitness {
    LocalFitness {
        main_var,
        neighborhood: neighborhood.to_vec(),
        table: (0..8).map(|r| (ones >> r) & 1).collect(),
    }
}

/// Exhaustive count over all C(8,4)^2 = 4900 table pairs in the shared
/// geometry: returns (conflicting pairs, total pairs).
pub fn conflict_count_exhaustive() -> (u64, u64) {
    let pairs = conflict_row_pairs();
    let masks: Vec<u8> = (0u16..256)
        .map(|m| m as u8)
        .filter(|m| m.count_ones() == 4)
        .collect();
    let mut conflicting = 0u64;
    let mut total = 0u64;
    for &ones_i in &masks {
        for &ones_j in &masks {
            total += 1;
            if pairs
                .iter()
                .all(|&(ri, rj)| ones_i >> ri & 1 == 0 || ones_j >> rj & 1 == 0)
            {
                conflicting += 1;
            }
        }
    }
    (conflicting, total)
}

/// Empirical probability that a random table whose zero count is 2 with
/// probability 1-alpha and 3 with probability alpha contains both rows of
/// a fixed sibling clause pair, against r(alpha) = (1-alpha)/28 +
/// (6/56)alpha. The two target rows are 100 and 101: the patterns
/// falsifying a binary skeleton on the first two variables.
pub fn mc_check_module_prob(alpha: f64, samples: u64, seed: u64) -> McReport {
    let expected = pair_containment_rate(alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let zeros = if rng.random::<f64>() < alpha { 3 } else { 2 };
        let ones = sample_zero_mask(&mut rng, zeros);
        if ones >> 4 & 1 == 0 && ones >> 5 & 1 == 0 {
            hits += 1;
        }
    }
    McReport::from_hits("module-containment", samples, hits, expected)
}

/// Empirical probability that a sampled k=2 neighborhood hits one fixed
/// pair, against the 1/C(n-1,2) collision factor that multiplies
/// r(alpha) in the module-density argument.
pub fn mc_check_collision_factor(n: usize, samples: u64, seed: u64) -> McReport {
    let choices = ((n - 1) * (n - 2) / 2) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut nbrs = crate::generator::sample_neighborhood(n, 2, 0, &mut rng).unwrap();
        nbrs.sort_unstable();
        if nbrs == [1, 2] {
            hits += 1;
        }
    }
    McReport::from_hits("neighborhood-collision", samples, hits, 1.0 / choices)
}
