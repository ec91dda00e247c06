//! Clause-level representation and the reduction from NK instances to
//! (k+1)-SAT.
//!
//! Each zero row of a local fitness function becomes one clause over the
//! function's variables, signed so that exactly that row falsifies the
//! clause. An assignment satisfies the conjunction over all functions iff
//! it brings every local function to 1, so the decision problem and the
//! CNF are equisatisfiable row for row.

use crate::instance::{LocalFitness, NKInstance};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn negate(self) -> Self {
        Literal { var: self.var, negated: !self.negated }
    }

    pub fn satisfied_by(self, bits: &[bool]) -> bool {
        bits[self.var] != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

/// A disjunction of variable-distinct literals. The empty clause is never
/// represented here; formula-level unsatisfiability uses
/// [`CnfFormula::has_empty_clause`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        debug_assert!(!literals.is_empty(), "empty clause is a formula-level marker");
        debug_assert!(
            {
                let mut vars: Vec<usize> = literals.iter().map(|l| l.var).collect();
                vars.sort_unstable();
                vars.windows(2).all(|w| w[0] != w[1])
            },
            "clause literals must be variable-distinct"
        );
        Clause { literals }
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn satisfied_by(&self, bits: &[bool]) -> bool {
        self.literals.iter().any(|l| l.satisfied_by(bits))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Where a clause came from, kept through serialization so UNSAT cores can
/// be traced back to functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseOrigin {
    /// Reduction clause for zero row `row` of function `function`.
    ZeroRow { function: usize, row: usize },
    /// Binary/unit clause implied by function `function`'s one-rows.
    Implied { function: usize },
    /// Hand-built or externally loaded.
    Synthetic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
    /// Parallel to `clauses`.
    pub origins: Vec<ClauseOrigin>,
    /// Formula-level empty-clause marker: the formula is unsatisfiable
    /// regardless of `clauses`.
    pub has_empty_clause: bool,
}

impl CnfFormula {
    pub fn new(num_vars: usize) -> Self {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
            origins: Vec::new(),
            has_empty_clause: false,
        }
    }

    pub fn push(&mut self, clause: Clause, origin: ClauseOrigin) {
        debug_assert!(clause.literals.iter().all(|l| l.var < self.num_vars));
        self.clauses.push(clause);
        self.origins.push(origin);
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn satisfied_by(&self, bits: &[bool]) -> bool {
        !self.has_empty_clause && self.clauses.iter().all(|c| c.satisfied_by(bits))
    }

    /// Structural well-formedness, used by tests and the DIMACS parser.
    pub fn is_well_formed(&self) -> bool {
        self.origins.len() == self.clauses.len()
            && self.clauses.iter().all(|c| {
                !c.literals.is_empty() && c.literals.iter().all(|l| l.var < self.num_vars)
            })
    }
}

/// One clause per zero row: over `(main_var, neighborhood...)`, the literal
/// for a variable is positive iff that variable's bit in the row is 0, so
/// the row itself is the clause's unique falsifying pattern.
pub fn clause_for_row(f: &LocalFitness, row: usize) -> Clause {
    let k = f.k();
    let mut literals = Vec::with_capacity(k + 1);
    literals.push(Literal {
        var: f.main_var,
        negated: (row >> k) & 1 == 1,
    });
    for (j, &v) in f.neighborhood.iter().enumerate() {
        literals.push(Literal {
            var: v,
            negated: (row >> (k - 1 - j)) & 1 == 1,
        });
    }
    Clause::new(literals)
}

/// All clauses of one function, in ascending zero-row order.
pub fn local_to_clauses(f: &LocalFitness) -> Vec<Clause> {
    f.zero_rows().map(|r| clause_for_row(f, r)).collect()
}

/// The full reduction: clause groups of every function concatenated in
/// function order, duplicates kept so clause count equals total zero rows.
pub fn nk_to_cnf(inst: &NKInstance) -> CnfFormula {
    let mut formula = CnfFormula::new(inst.n);
    for (i, f) in inst.functions.iter().enumerate() {
        for r in f.zero_rows() {
            formula.push(clause_for_row(f, r), ClauseOrigin::ZeroRow { function: i, row: r });
        }
    }
    formula
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate, GenParams, Model};
    use crate::instance::Assignment;

    /// Zeros at rows 000, 011, 101, 110.
    fn xor_like_function() -> LocalFitness {
        LocalFitness {
            main_var: 0,
            neighborhood: vec![1, 2],
            table: vec![0, 1, 1, 0, 1, 0, 0, 1],
        }
    }

    #[test]
    fn xor_like_function_reduces_to_the_four_expected_clauses() {
        let clauses = local_to_clauses(&xor_like_function());
        let expect = vec![
            Clause::new(vec![Literal::pos(0), Literal::pos(1), Literal::pos(2)]),
            Clause::new(vec![Literal::pos(0), Literal::neg(1), Literal::neg(2)]),
            Clause::new(vec![Literal::neg(0), Literal::pos(1), Literal::neg(2)]),
            Clause::new(vec![Literal::neg(0), Literal::neg(1), Literal::pos(2)]),
        ];
        assert_eq!(clauses, expect);
    }

    #[test]
    fn constant_one_function_reduces_to_nothing() {
        let f = LocalFitness {
            main_var: 0,
            neighborhood: vec![1, 2],
            table: vec![1; 8],
        };
        assert!(local_to_clauses(&f).is_empty());
    }

    #[test]
    fn dead_function_reduces_to_all_polarity_patterns() {
        let f = LocalFitness {
            main_var: 0,
            neighborhood: vec![1, 2],
            table: vec![0; 8],
        };
        let clauses = local_to_clauses(&f);
        assert_eq!(clauses.len(), 8);
        let mut patterns: Vec<Vec<bool>> = clauses
            .iter()
            .map(|c| {
                assert_eq!(
                    c.literals.iter().map(|l| l.var).collect::<Vec<_>>(),
                    vec![0, 1, 2]
                );
                c.literals.iter().map(|l| l.negated).collect()
            })
            .collect();
        patterns.sort();
        patterns.dedup();
        assert_eq!(patterns.len(), 8);
    }

    #[test]
    fn all_ones_instance_reduces_to_empty_formula() {
        let inst = generate(&GenParams {
            n: 12,
            k: 2,
            model: Model::FixedRatio { z: 0.0 },
            seed: 3,
        })
        .unwrap();
        let formula = nk_to_cnf(&inst);
        assert_eq!(formula.len(), 0);
        assert!(formula.satisfied_by(&vec![false; 12]));
    }

    #[test]
    fn integer_z_gives_z_n_clauses() {
        let inst = generate(&GenParams {
            n: 20,
            k: 2,
            model: Model::FixedRatio { z: 3.0 },
            seed: 8,
        })
        .unwrap();
        let formula = nk_to_cnf(&inst);
        assert_eq!(formula.len(), 60);
        assert!(formula.is_well_formed());
    }

    #[test]
    fn clause_shape_and_origin_accounting() {
        let inst = generate(&GenParams {
            n: 15,
            k: 2,
            model: Model::Uniform { p: 0.4 },
            seed: 21,
        })
        .unwrap();
        let formula = nk_to_cnf(&inst);
        let total_zero_rows: usize = inst.functions.iter().map(|f| f.zero_count()).sum();
        assert_eq!(formula.len(), total_zero_rows);
        for (clause, origin) in formula.clauses.iter().zip(&formula.origins) {
            assert_eq!(clause.len(), 3);
            let &ClauseOrigin::ZeroRow { function, row } = origin else {
                panic!("reduction clauses must carry zero-row origins");
            };
            assert_eq!(inst.functions[function].table[row], 0);
            assert_eq!(clause, &clause_for_row(&inst.functions[function], row));
        }
    }

    #[test]
    fn reduction_is_faithful_on_small_instances() {
        for seed in 0..12u64 {
            let model = if seed % 2 == 0 {
                Model::Uniform { p: 0.25 }
            } else {
                Model::FixedRatio { z: 2.5 }
            };
            let n = 6 + (seed as usize % 5);
            let inst = generate(&GenParams { n, k: 2, model, seed }).unwrap();
            let formula = nk_to_cnf(&inst);
            for c in 0..1usize << n {
                let bits: Vec<bool> = (0..n).map(|j| (c >> j) & 1 == 1).collect();
                let a = Assignment::new(bits.clone());
                assert_eq!(
                    inst.is_solution(&a),
                    formula.satisfied_by(&bits),
                    "mismatch at seed {seed}, assignment {c:b}"
                );
            }
        }
    }
}
