//! Builds the chained clause gadgets whose appearance marks the
//! solubility threshold, and evaluates the constant they predict.
//!
//! A module of size parameter p consists of t = 3p + 2 clause pairs; the
//! two members of a pair differ only in the sign of a private variable, so
//! together they imply the shared binary clause. The t binary projections
//! chain the u variables into two implication cycles that force u_0 both
//! ways, so the module is unsatisfiable no matter what the private
//! variables do. Counting how often a random table implies a fixed clause
//! pair gives the density where such modules start to appear, which pins
//! the asymptotic threshold constant.

use nksat::solver::{brute_force, dpll};
use nksat::twosat::{build_t3_module, pair_containment_rate, solve_two_sat, threshold_constant};

fn main() {
    for p in 1..=4 {
        let module = build_t3_module(p).expect("p >= 1");
        let (outcome, stats) = dpll(&module.clauses);
        assert!(outcome.is_unsat(), "modules are contradictions by design");
        let projection_unsat = !solve_two_sat(&module.projection)
            .expect("projections are binary")
            .is_sat();
        assert!(projection_unsat);
        println!(
            "p={p}: t={} pairs, {} variables, {} three-literal clauses; \
             UNSAT (projection UNSAT too, {} decisions on the full module)",
            module.t,
            module.num_vars,
            module.clauses.len(),
            stats.decisions
        );
    }

    // Spot-check the smallest module against exhaustive enumeration.
    let smallest = build_t3_module(1).unwrap();
    assert!(brute_force(&smallest.clauses).expect("9 variables fit").is_unsat());
    println!("p=1 module confirmed UNSAT by enumeration over 2^9 assignments");

    // The clause pairs above appear inside random tables at a rate that
    // depends on the zero surplus alpha = z - 2. A table with two zeros
    // contains a fixed pair with probability 1/28, with three zeros 6/56.
    println!("\npair containment rate by zero surplus:");
    for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("  alpha={alpha:.2}  rate={:.6}", pair_containment_rate(alpha));
    }

    // Modules persist once chains of expected length 2(3 + sqrt(5)) carry
    // a pair each, which solves to a single density value.
    let threshold = threshold_constant();
    println!("\npredicted threshold density: z = {threshold:.4}");
    assert!((threshold - 2.8369).abs() < 5e-5);
}
