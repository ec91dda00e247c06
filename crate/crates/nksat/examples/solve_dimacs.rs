//! Solves CNF formulas with the DPLL engine and cross-checks the verdicts.
//!
//! The solver runs a preprocessing pass (unit propagation, pure literal
//! elimination, one round of resolvents, failed literal probing) and then
//! branches on the variable most frequent among the smallest open clauses,
//! trying false first. Work is metered in decisions so runs are comparable
//! across machines. Pass a DIMACS file as the first argument to solve it;
//! with no argument the example solves generated instances and checks the
//! answers against exhaustive enumeration.

use std::env;
use std::fs::File;
use std::io::BufReader;

use nksat::cnf::nk_to_cnf;
use nksat::dimacs::parse_dimacs;
use nksat::generator::{generate, GenParams, Model};
use nksat::instance::Assignment;
use nksat::solver::{brute_force, check_witness, dpll, SolveOutcome};

fn solve_and_report(label: &str, formula: &nksat::cnf::CnfFormula) -> SolveOutcome {
    let (outcome, stats) = dpll(formula);
    let verdict = match &outcome {
        SolveOutcome::Sat(_) => "SAT",
        SolveOutcome::Unsat => "UNSAT",
        SolveOutcome::BudgetExceeded => "BUDGET EXCEEDED",
    };
    println!(
        "{label}: {verdict} ({} decisions, {} propagations, {} pures, {} probed{})",
        stats.decisions,
        stats.propagations,
        stats.pure_eliminations,
        stats.forced_literals,
        if stats.solved_by_preprocessing { ", preprocessing only" } else { "" }
    );
    if let SolveOutcome::Sat(bits) = &outcome {
        assert!(check_witness(formula, bits), "witness must satisfy the formula");
    }
    outcome
}

fn main() {
    if let Some(path) = env::args().nth(1) {
        let reader = BufReader::new(File::open(&path).expect("open DIMACS file"));
        let formula = parse_dimacs(reader).expect("parse DIMACS");
        println!(
            "{path}: {} variables, {} clauses",
            formula.num_vars,
            formula.len()
        );
        solve_and_report(&path, &formula);
        return;
    }

    // Small instances: DPLL must agree with brute force on every seed.
    for seed in 0..8 {
        let params = GenParams {
            n: 14,
            k: 2,
            model: Model::FixedRatio { z: 2.9 },
            seed,
        };
        let inst = generate(&params).unwrap();
        let formula = nk_to_cnf(&inst);
        let outcome = solve_and_report(&format!("n=14 seed={seed}"), &formula);
        let reference = brute_force(&formula).expect("14 variables fit");
        assert_eq!(outcome.is_sat(), reference.is_sat(), "seed {seed} disagrees");
        if let SolveOutcome::Sat(bits) = &outcome {
            let a = Assignment::new(bits.clone());
            assert!(inst.is_solution(&a), "witness must solve the instance");
        }
    }
    println!("all verdicts match exhaustive enumeration");

    // A larger one near the hard region, for scale.
    let params = GenParams {
        n: 512,
        k: 2,
        model: Model::FixedRatio { z: 2.83 },
        seed: 1,
    };
    let inst = generate(&params).unwrap();
    solve_and_report("n=512 z=2.83", &nk_to_cnf(&inst));
}
