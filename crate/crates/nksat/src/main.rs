//! Thin command-line front end over the library. Each subcommand is a
//! direct call into one module; the examples directory shows the same
//! operations as library code.

use clap::{Args, Parser, Subcommand, ValueEnum};
use nksat::cnf::nk_to_cnf;
use nksat::dimacs::{parse_dimacs_str, write_dimacs};
use nksat::generator::{generate, GenParams, Model};
use nksat::instance::NKInstance;
use nksat::lab::{
    mc_check_all_zero, mc_check_conflict, mc_check_conflict_control, mc_check_module_prob,
    append_records_jsonl, sweep_streaming, write_report, GridParam, SweepGrid, TrialMode,
    TrialOptions,
};
use nksat::solver::{dpll_with_budget, SolveOutcome, DEFAULT_DECISION_BUDGET};
use nksat::structure::{components, build_connection_graph, find_all_zero_function, find_conflicting_pair};
use nksat::twosat::{build_t3_module, extract_two_sat, solve_two_sat, TwoSatOutcome};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nksat",
    version,
    about = "Random constraint landscapes: generation, SAT reduction, structural analysis, experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance and write it as JSON.
    Generate(GenerateArgs),
    /// Reduce an instance to CNF and write DIMACS.
    Reduce(ReduceArgs),
    /// Report an instance's structure as JSON.
    Analyze(AnalyzeArgs),
    /// Run the DPLL solver on a DIMACS file.
    Solve(SolveArgs),
    /// Run a seeded experiment sweep and write CSV/JSON reports.
    Sweep(SweepArgs),
    /// Compare a Monte Carlo estimate against its closed form.
    McCheck(McCheckArgs),
    /// Write a contradiction module (unsatisfiable with a 2-SAT core) as DIMACS.
    Module(ModuleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Uniform,
    FixedRatio,
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of variables (and of local functions).
    #[arg(long)]
    n: usize,
    /// Neighborhood size.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Random model; inferred from which of --p/--z is present.
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Per-entry zero probability (uniform model).
    #[arg(long, conflicts_with = "z")]
    p: Option<f64>,
    /// Zero entries per table, fractional part randomized (fixed-ratio model).
    #[arg(long)]
    z: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Indent the JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct ReduceArgs {
    /// Instance JSON file, or - for stdin.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output DIMACS file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportKind {
    Components,
    Conflicts,
    Twosat,
    All,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Instance JSON file, or - for stdin.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportKind::All)]
    report: ReportKind,
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS file, or - for stdin.
    #[arg(long = "in")]
    input: PathBuf,
    /// Decision budget before the solver gives up.
    #[arg(long, default_value_t = DEFAULT_DECISION_BUDGET)]
    budget: u64,
    /// Write run statistics as JSON to this file.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Comma-separated list of instance sizes, e.g. 512,1024,2048,4096.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Zero-density grid: lo:hi:step or a comma list (fixed-ratio model).
    #[arg(long, value_parser = parse_f64_grid, conflicts_with = "p")]
    z: Option<F64Grid>,
    /// Zero-probability grid: lo:hi:step or a comma list (uniform model).
    #[arg(long, value_parser = parse_f64_grid)]
    p: Option<F64Grid>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report directory; receives records.jsonl, summary.csv, meta.json.
    #[arg(long)]
    out: PathBuf,
    /// Solve every trial fully instead of stopping at the first certificate.
    #[arg(long)]
    full_stats: bool,
    #[arg(long, default_value_t = DEFAULT_DECISION_BUDGET)]
    budget: u64,
    /// Also render the insoluble-fraction curves to curves.svg.
    #[arg(long)]
    svg: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum McWhich {
    /// Probability that an instance contains an all-zero table.
    AllZero,
    /// Conditional probability that two tables sharing one variable conflict.
    Conflict,
    /// Probability that a table contains both rows of a sibling clause pair.
    Module,
}

#[derive(Args)]
struct McCheckArgs {
    #[arg(long, value_enum)]
    which: McWhich,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Zero probability for the all-zero check.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Instance size for the all-zero check.
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Mixing weight for the module check's zero-count distribution.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
}

#[derive(Args)]
struct ModuleArgs {
    /// Size parameter; the module has 3p+2 clause pairs over 6p+3 variables.
    #[arg(long)]
    p: usize,
    /// Output DIMACS file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the binary-clause projection instead of the full module.
    #[arg(long)]
    projection: bool,
}

/// A parsed parameter grid; wrapped so clap reads the whole grid
/// expression as one argument value.
#[derive(Clone, Debug, PartialEq)]
struct F64Grid(Vec<f64>);

/// Accepts either a comma list ("2.7,2.8") or an inclusive range with step
/// ("2.71:3.00:0.01"). Range arithmetic runs on decimal-scaled integers so
/// grid values come out exact.
fn parse_f64_grid(s: &str) -> Result<F64Grid, String> {
    if !s.contains(':') {
        return s
            .split(',')
            .map(|part| part.trim().parse::<f64>().map_err(|e| format!("{part:?}: {e}")))
            .collect::<Result<Vec<f64>, String>>()
            .map(F64Grid);
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("{s:?}: expected lo:hi:step"));
    }
    let decimals = |t: &str| t.split('.').nth(1).map_or(0, str::len) as u32;
    let scale = 10f64.powi(parts.iter().map(|t| decimals(t)).max().unwrap() as i32);
    let scaled = |t: &str| -> Result<i64, String> {
        let v: f64 = t.trim().parse().map_err(|e| format!("{t:?}: {e}"))?;
        Ok((v * scale).round() as i64)
    };
    let (lo, hi, step) = (scaled(parts[0])?, scaled(parts[1])?, scaled(parts[2])?);
    if step <= 0 {
        return Err(format!("{s:?}: step must be positive"));
    }
    if hi < lo {
        return Err(format!("{s:?}: empty range"));
    }
    Ok(F64Grid(
        (lo..=hi).step_by(step as usize).map(|v| v as f64 / scale).collect(),
    ))
}

fn read_input(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut buf = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_instance(path: &Path) -> Result<NKInstance, String> {
    NKInstance::from_json(&read_input(path)?).map_err(|e| e.to_string())
}

fn run_generate(args: GenerateArgs) -> Result<(), String> {
    let model = match (args.model, args.p, args.z) {
        (Some(ModelKind::Uniform) | None, Some(p), None) => Model::Uniform { p },
        (Some(ModelKind::FixedRatio) | None, None, Some(z)) => Model::FixedRatio { z },
        (Some(ModelKind::Uniform), None, Some(_)) => {
            return Err("--model uniform takes --p, not --z".into())
        }
        (Some(ModelKind::FixedRatio), Some(_), None) => {
            return Err("--model fixed-ratio takes --z, not --p".into())
        }
        _ => return Err("exactly one of --p or --z is required".into()),
    };
    let params = GenParams { n: args.n, k: args.k, model, seed: args.seed };
    let inst = generate(&params).map_err(|e| e.to_string())?;
    let mut text = if args.pretty { inst.to_json_pretty() } else { inst.to_json() };
    text.push('\n');
    write_output(&args.out, &text)
}

fn run_reduce(args: ReduceArgs) -> Result<(), String> {
    let inst = read_instance(&args.input)?;
    write_output(&args.out, &write_dimacs(&nk_to_cnf(&inst)))
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), String> {
    let inst = read_instance(&args.input)?;
    let mut report = serde_json::json!({
        "n": inst.n,
        "k": inst.k,
        "digest": inst.digest(),
        "all_zero_function": find_all_zero_function(&inst),
    });
    let want = |kind: ReportKind| args.report == kind || args.report == ReportKind::All;
    if want(ReportKind::Components) {
        let graph = build_connection_graph(&inst);
        let (comps, stats) = components(&graph, &inst);
        report["components"] = serde_json::json!({
            "count": stats.count,
            "largest_functions": stats.max_functions,
            "largest_variables": stats.max_variables,
            "edges": graph.edges.len(),
            "sizes": comps
                .iter()
                .map(|c| serde_json::json!({
                    "functions": c.functions.len(),
                    "variables": c.variables.len(),
                    "has_zeros": c.has_zeros,
                }))
                .collect::<Vec<_>>(),
        });
    }
    if want(ReportKind::Conflicts) {
        report["conflicting_pair"] = serde_json::json!(find_conflicting_pair(&inst));
    }
    if want(ReportKind::Twosat) {
        let sub = extract_two_sat(&inst);
        let outcome = solve_two_sat(&sub).map_err(|e| e.to_string())?;
        report["two_sat"] = serde_json::json!({
            "clauses": sub.len(),
            "verdict": if outcome.is_sat() { "sat" } else { "unsat" },
            "contradictory_var": match &outcome {
                TwoSatOutcome::Unsat { contradictory_var } => *contradictory_var,
                TwoSatOutcome::Sat(_) => None,
            },
        });
    }
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}

fn run_solve(args: SolveArgs) -> Result<(), String> {
    let formula = parse_dimacs_str(&read_input(&args.input)?).map_err(|e| e.to_string())?;
    let (outcome, stats) = dpll_with_budget(&formula, args.budget);
    match &outcome {
        SolveOutcome::Sat(bits) => {
            println!("s SATISFIABLE");
            let lits: Vec<String> = bits
                .iter()
                .enumerate()
                .map(|(v, &b)| if b { format!("{}", v + 1) } else { format!("-{}", v + 1) })
                .collect();
            println!("v {} 0", lits.join(" "));
        }
        SolveOutcome::Unsat => println!("s UNSATISFIABLE"),
        SolveOutcome::BudgetExceeded => println!("s UNKNOWN"),
    }
    if let Some(path) = &args.stats {
        let text = serde_json::to_string_pretty(&stats).unwrap() + "\n";
        std::fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display()))?;
    } else {
        eprintln!(
            "c {} decisions, {} propagations, {} pure eliminations, {} us",
            stats.decisions, stats.propagations, stats.pure_eliminations, stats.wall_micros
        );
    }
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<(), String> {
    if args.n.is_empty() {
        return Err("--n needs at least one size".into());
    }
    let param = match (args.z, args.p) {
        (Some(zs), None) => GridParam::ZeroDensity(zs.0),
        (None, Some(ps)) => GridParam::ZeroProbability(ps.0),
        _ => return Err("exactly one of --z or --p is required".into()),
    };
    let grid = SweepGrid {
        k: args.k,
        n_values: args.n,
        param,
        trials_per_cell: args.trials,
        root_seed: args.seed,
    };
    let options = TrialOptions {
        mode: if args.full_stats { TrialMode::FullStats } else { TrialMode::Fast },
        decision_budget: args.budget,
    };
    std::fs::create_dir_all(&args.out)
        .map_err(|e| format!("creating {}: {e}", args.out.display()))?;
    let records_path = args.out.join("records.jsonl");
    if records_path.exists() {
        std::fs::remove_file(&records_path)
            .map_err(|e| format!("clearing {}: {e}", records_path.display()))?;
    }
    let total_cells = grid.n_values.len() * grid.param.values().len();
    let mut done = 0usize;
    let mut flush_error: Option<String> = None;
    let result = sweep_streaming(&grid, &options, |cell| {
        if flush_error.is_none() {
            if let Err(e) = append_records_jsonl(&records_path, cell) {
                flush_error = Some(e.to_string());
            }
            done += 1;
            eprintln!("c cell {done}/{total_cells} finished");
        }
    })
    .map_err(|e| e.to_string())?;
    if let Some(e) = flush_error {
        return Err(e);
    }
    let paths = write_report(&args.out, &grid, &options, &result.summary, args.svg)
        .map_err(|e| e.to_string())?;
    for crossing in &result.summary.crossings {
        match crossing.full {
            Some(z) => eprintln!("c n={}: insoluble fraction crosses 0.5 near {z:.4}", crossing.n),
            None => eprintln!("c n={}: insoluble fraction never reaches 0.5", crossing.n),
        }
    }
    println!("{}", paths.csv.display());
    Ok(())
}

fn run_mc_check(args: McCheckArgs) -> Result<bool, String> {
    let reports = match args.which {
        McWhich::AllZero => {
            vec![mc_check_all_zero(args.p, args.n, args.k, args.samples, args.seed)]
        }
        McWhich::Conflict => vec![
            mc_check_conflict(args.samples, args.seed),
            mc_check_conflict_control(args.samples.min(100_000), args.seed + 1),
        ],
        McWhich::Module => {
            vec![mc_check_module_prob(args.alpha, args.samples, args.seed)]
        }
    };
    let mut ok = true;
    for report in &reports {
        println!("{report}");
        ok &= report.within(4.0);
    }
    Ok(ok)
}

fn run_module(args: ModuleArgs) -> Result<(), String> {
    let module = build_t3_module(args.p).map_err(|e| e.to_string())?;
    let formula = if args.projection { &module.projection } else { &module.clauses };
    write_output(&args.out, &write_dimacs(formula))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => run_generate(args),
        Command::Reduce(args) => run_reduce(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Solve(args) => run_solve(args),
        Command::Sweep(args) => run_sweep(args),
        Command::McCheck(args) => match run_mc_check(args) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(2),
            Err(e) => Err(e),
        },
        Command::Module(args) => run_module(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_expand_on_a_decimal_lattice() {
        let grid = parse_f64_grid("2.71:3.00:0.01").unwrap().0;
        assert_eq!(grid.len(), 30);
        assert_eq!(grid[0], 2.71);
        assert_eq!(grid[29], 3.00);
        assert_eq!(grid[12], 2.83);
    }

    #[test]
    fn comma_lists_pass_through() {
        assert_eq!(parse_f64_grid("2.7,3.0").unwrap().0, vec![2.7, 3.0]);
    }

    #[test]
    fn bad_grids_are_rejected() {
        assert!(parse_f64_grid("1:2").is_err());
        assert!(parse_f64_grid("2:1:0.5").is_err());
        assert!(parse_f64_grid("1:2:0").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
