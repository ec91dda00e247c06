//! NK landscape decision problems, end to end: seeded instance generation,
//! reduction to (k+1)-SAT, structural insolubility detectors, a
//! decomposition solver, 2-SAT machinery, a DPLL solver, and an experiment
//! harness for mapping the solubility phase transition of the fixed ratio
//! model.
//!
//! The library is the product; the `examples/` directory is its front door.
//! Each example is a small runnable program exercising one capability:
//!
//! ```text
//! examples/
//!   generate_instances.rs      both random models, JSON persistence
//!   reduce_to_cnf.rs           truth table -> clauses, DIMACS output
//!   solve_dimacs.rs            DPLL with stats, brute-force cross-check
//!   decompose_components.rs    connection graph + component solving
//!   insolubility_detectors.rs  all-zero scan and conflicting pairs
//!   two_sat_subproblem.rs      implied binary clauses, SCC solving
//!   contradiction_modules.rs   chained clause gadgets + threshold constant
//!   phase_sweep.rs             miniature (n, z) sweep with CSV output
//!   monte_carlo_checks.rs      estimator cross-checks for rare structures
//!   uniform_components.rs      component-size statistics, uniform model
//! ```
//!
//! Run one with `cargo run --release --example phase_sweep`.
//!
//! A thin `nksat` binary wraps the same entry points as subcommands
//! (`generate`, `reduce`, `analyze`, `solve`, `sweep`, `mc-check`,
//! `module`) for shell pipelines; see `README.md`.

pub mod cnf;
pub mod dimacs;
pub mod generator;
pub mod instance;
pub mod lab;
pub mod solver;
pub mod structure;
pub mod twosat;

pub use instance::{Assignment, LocalFitness, NKInstance};
