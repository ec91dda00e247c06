//! Extracts the binary clauses each local function implies and solves that
//! 2-SAT sub-problem.
//!
//! A clause of width one or two follows from a function when every
//! satisfying row of its table satisfies the clause. The union of these
//! implied clauses over all functions is a necessary condition for the
//! instance: if the 2-SAT sub-problem is unsatisfiable, so is the
//! instance. The converse fails in general, but near the solubility
//! threshold the sub-problem captures most of the hardness, which is why
//! insoluble instances there are usually refuted without any search.

use nksat::cnf::nk_to_cnf;
use nksat::generator::{generate, GenParams, Model};
use nksat::solver::dpll;
use nksat::twosat::{
    extract_two_sat, implied_binary_clauses, solve_two_sat, ImplicationGraph, ImpliedClauses,
    TwoSatOutcome,
};

fn main() {
    let params = GenParams {
        n: 512,
        k: 2,
        model: Model::FixedRatio { z: 2.9 },
        seed: 3,
    };
    let inst = generate(&params).expect("valid parameters");

    // Per-function view on the first function that implies anything.
    for f in &inst.functions {
        match implied_binary_clauses(f) {
            ImpliedClauses::Contradiction => {
                println!("function {} has no satisfying row at all", f.main_var);
                break;
            }
            ImpliedClauses::Clauses(clauses) if !clauses.is_empty() => {
                println!(
                    "function {} (table {}) implies:",
                    f.main_var,
                    f.table.iter().map(|b| char::from(b'0' + b)).collect::<String>()
                );
                for c in &clauses {
                    println!("  {c}");
                }
                break;
            }
            ImpliedClauses::Clauses(_) => {}
        }
    }

    let sub = extract_two_sat(&inst);
    let units = sub.clauses.iter().filter(|c| c.len() == 1).count();
    println!(
        "\n2-SAT sub-problem: {} clauses ({} units) over {} variables",
        sub.len(),
        units,
        sub.num_vars
    );

    // The implication graph has two vertices per variable and mirrored
    // edges, two per binary clause.
    let graph = ImplicationGraph::from_formula(&sub).expect("widths are at most two");
    assert!(graph.is_skew_symmetric());
    println!(
        "implication graph: {} vertices, mirrored edge list intact",
        2 * sub.num_vars
    );

    match solve_two_sat(&sub).expect("widths are at most two") {
        TwoSatOutcome::Sat(bits) => {
            println!("sub-problem SAT, e.g. x0={} x1={} x2={}", bits[0], bits[1], bits[2]);
        }
        TwoSatOutcome::Unsat { contradictory_var } => {
            println!("sub-problem UNSAT (variable {contradictory_var:?} forces both ways)");
        }
    }

    // Refuting the sub-problem refutes the instance. Check the implication
    // across a seed range: whenever 2-SAT says no, the full solver must
    // also say no.
    let mut sub_unsat = 0;
    let mut full_unsat = 0;
    let trials = 60;
    for seed in 0..trials {
        let inst = generate(&GenParams {
            n: 192,
            k: 2,
            model: Model::FixedRatio { z: 2.95 },
            seed,
        })
        .unwrap();
        let sub_is_unsat = !solve_two_sat(&extract_two_sat(&inst)).unwrap().is_sat();
        let (full, _) = dpll(&nk_to_cnf(&inst));
        if sub_is_unsat {
            sub_unsat += 1;
            assert!(full.is_unsat(), "2-SAT refutation must be sound (seed {seed})");
        }
        if full.is_unsat() {
            full_unsat += 1;
        }
    }
    println!(
        "\nn=192 z=2.95, {trials} seeds: {sub_unsat} refuted by 2-SAT alone, {full_unsat} insoluble in total"
    );
}
