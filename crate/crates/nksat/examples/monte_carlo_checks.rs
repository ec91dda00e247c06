//! Cross-checks the closed-form probabilities used by the analysis
//! against direct simulation.
//!
//! Each check draws fresh samples of the relevant random structure, counts
//! hits, and compares the empirical rate with the formula, reporting the
//! gap in standard errors. A handful of sigmas is noise; dozens would mean
//! a formula or a sampler is wrong. The conflicting-pair geometry is small
//! enough to count exhaustively, so that one gets an exact cross-check
//! too.

use nksat::lab::{
    conflict_count_exhaustive, mc_check_all_zero, mc_check_collision_factor, mc_check_conflict,
    mc_check_conflict_control, mc_check_module_prob, McReport,
};

fn report(r: &McReport) {
    let flag = if r.within(4.0) { "ok" } else { "DEVIATES" };
    println!("  [{flag}] {r}");
}

fn main() {
    let samples = 200_000;
    let seed = 42;

    println!("all-zero table, uniform model (exact: 1 - (1 - p^8)^n):");
    for (p, n) in [(0.5, 64), (0.6, 128), (0.7, 32)] {
        report(&mc_check_all_zero(p, n, 2, samples, seed));
    }

    println!("\nconflicting pair of 4-zero tables in the shared geometry:");
    report(&mc_check_conflict(samples, seed));
    report(&mc_check_conflict_control(samples, seed));

    let (conflicting, total) = conflict_count_exhaustive();
    println!(
        "  exhaustive count: {conflicting} of {total} table pairs conflict = {:.6e}",
        conflicting as f64 / total as f64
    );
    assert_eq!(conflicting, 2, "exactly the two complementary splits");

    println!("\nclause-pair containment r(alpha) = (1-alpha)/28 + (6/56)alpha:");
    for alpha in [0.0, 0.5, 0.83, 1.0] {
        report(&mc_check_module_prob(alpha, samples, seed));
    }

    println!("\nneighborhood collision factor 1/C(n-1,2):");
    for n in [32, 256] {
        report(&mc_check_collision_factor(n, samples, seed));
    }
}
