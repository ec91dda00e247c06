//! Reduces an instance to CNF and writes it as DIMACS.
//!
//! Each local function contributes one clause per zero row of its truth
//! table: the clause that forbids exactly that row, with the main variable
//! first and a literal positive when the row bit is 0. A table over k
//! neighbors yields clauses of width k + 1, so k = 2 gives a 3-SAT
//! formula. An assignment satisfies the formula iff it is a solution of
//! the instance.

use nksat::cnf::{clause_for_row, nk_to_cnf};
use nksat::dimacs::{parse_dimacs_str, write_dimacs};
use nksat::generator::{generate, GenParams, Model};
use nksat::instance::decode_row;

fn main() {
    let params = GenParams {
        n: 12,
        k: 2,
        model: Model::FixedRatio { z: 2.5 },
        seed: 99,
    };
    let inst = generate(&params).expect("valid parameters");

    // Show the row-to-clause mapping on the first function with zeros.
    let f = inst
        .functions
        .iter()
        .find(|f| f.has_zero())
        .expect("z = 2.5 gives every function at least two zeros");
    println!(
        "function {} over neighbors {:?}:",
        f.main_var, f.neighborhood
    );
    for row in f.zero_rows() {
        let (main_bit, neighbor_bits) = decode_row(row, f.k());
        let clause = clause_for_row(f, row);
        println!(
            "  row {row:>2} (main={} nbrs={:?})  forbidden by  {clause}",
            main_bit as u8,
            neighbor_bits.iter().map(|&b| b as u8).collect::<Vec<_>>()
        );
    }

    let formula = nk_to_cnf(&inst);
    let zeros: usize = inst.functions.iter().map(|g| g.zero_count()).sum();
    println!(
        "\nfull reduction: {} variables, {} clauses ({} table zeros)",
        formula.num_vars,
        formula.len(),
        zeros
    );
    assert_eq!(formula.len(), zeros);

    let text = write_dimacs(&formula);
    print!("\n{text}");

    // The DIMACS writer and parser are inverses on the clause content.
    let parsed = parse_dimacs_str(&text).expect("own output parses");
    assert_eq!(parsed.num_vars, formula.num_vars);
    assert_eq!(parsed.clauses, formula.clauses);
    println!("parsed back: {} clauses, identical", parsed.len());
}
