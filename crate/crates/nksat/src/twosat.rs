//! Binary-clause consequences of local functions, a linear-time 2-SAT
//! solver, and the contradiction modules that pin down where random
//! instances stop being soluble.
//!
//! Every local function implies some set of unit and binary clauses over
//! its own variables: a clause is implied when every one-row of the table
//! satisfies it. Collecting these across an instance gives a 2-SAT
//! sub-problem whose unsatisfiability certifies unsatisfiability of the
//! full reduction. The solver builds the usual implication graph (nodes
//! `2v` for the positive literal and `2v+1` for the negative) and runs
//! Tarjan's SCC algorithm; a variable sharing a component with its negation
//! is a contradiction, and otherwise each variable is set true iff its
//! positive node's component comes earlier in completion order.

use crate::cnf::{Clause, ClauseOrigin, CnfFormula, Literal};
use crate::instance::{LocalFitness, NKInstance};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TwoSatError {
    #[error("clause {index} has {len} literals; the implication graph takes at most 2")]
    ClauseTooWide { index: usize, len: usize },
    #[error("module size parameter must be at least 1, got {p}")]
    ModuleSizeZero { p: usize },
}

/// Unit and binary consequences of one function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImpliedClauses {
    /// The table has no one-rows, so the function alone is unsatisfiable.
    Contradiction,
    Clauses(Vec<Clause>),
}

fn bit_of(row: usize, slot: usize, k: usize) -> bool {
    let shift = if slot == 0 { k } else { k - slot };
    (row >> shift) & 1 == 1
}

/// Unit clauses first, then binary clauses over variable slots in table
/// order. Binary clauses touching a variable that already has a unit are
/// dropped as subsumed.
pub fn implied_binary_clauses(f: &LocalFitness) -> ImpliedClauses {
    let one_rows: Vec<usize> = f.one_rows().collect();
    if one_rows.is_empty() {
        return ImpliedClauses::Contradiction;
    }
    let vars = f.variables();
    let k = f.k();
    let slots = vars.len();
    let mut has_unit = vec![false; slots];
    let mut clauses = Vec::new();
    for slot in 0..slots {
        for wanted in [true, false] {
            if one_rows.iter().all(|&r| bit_of(r, slot, k) == wanted) {
                has_unit[slot] = true;
                clauses.push(Clause::new(vec![Literal {
                    var: vars[slot],
                    negated: !wanted,
                }]));
                break;
            }
        }
    }
    for a in 0..slots {
        if has_unit[a] {
            continue;
        }
        for b in a + 1..slots {
            if has_unit[b] {
                continue;
            }
            for wanted_a in [true, false] {
                for wanted_b in [true, false] {
                    if one_rows
                        .iter()
                        .all(|&r| bit_of(r, a, k) == wanted_a || bit_of(r, b, k) == wanted_b)
                    {
                        clauses.push(Clause::new(vec![
                            Literal { var: vars[a], negated: !wanted_a },
                            Literal { var: vars[b], negated: !wanted_b },
                        ]));
                    }
                }
            }
        }
    }
    ImpliedClauses::Clauses(clauses)
}

/// Union of every function's implied clauses over the instance's `n`
/// variables. A function with no one-rows sets the empty-clause marker.
pub fn extract_two_sat(inst: &NKInstance) -> CnfFormula {
    let mut formula = CnfFormula::new(inst.n);
    for (i, f) in inst.functions.iter().enumerate() {
        match implied_binary_clauses(f) {
            ImpliedClauses::Contradiction => formula.has_empty_clause = true,
            ImpliedClauses::Clauses(clauses) => {
                for c in clauses {
                    formula.push(c, ClauseOrigin::Implied { function: i });
                }
            }
        }
    }
    formula
}

/// Node `2v` is the literal `v`, node `2v+1` its negation. A binary clause
/// contributes two implication edges, a unit clause one.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicationGraph {
    pub num_vars: usize,
    pub adjacency: Vec<Vec<u32>>,
    pub num_edges: usize,
}

fn node(l: Literal) -> u32 {
    ((l.var as u32) << 1) | u32::from(l.negated)
}

impl ImplicationGraph {
    pub fn from_formula(formula: &CnfFormula) -> Result<Self, TwoSatError> {
        let mut adjacency = vec![Vec::new(); 2 * formula.num_vars];
        let mut num_edges = 0;
        for (index, clause) in formula.clauses.iter().enumerate() {
            match clause.literals.as_slice() {
                &[a] => {
                    adjacency[(node(a) ^ 1) as usize].push(node(a));
                    num_edges += 1;
                }
                &[a, b] => {
                    adjacency[(node(a) ^ 1) as usize].push(node(b));
                    adjacency[(node(b) ^ 1) as usize].push(node(a));
                    num_edges += 2;
                }
                lits => {
                    return Err(TwoSatError::ClauseTooWide { index, len: lits.len() });
                }
            }
        }
        Ok(ImplicationGraph { num_vars: formula.num_vars, adjacency, num_edges })
    }

    /// Every edge `u -> w` must come with its mirror `!w -> !u`. Unit
    /// edges `!a -> a` are their own mirrors.
    pub fn is_skew_symmetric(&self) -> bool {
        let mut edges = std::collections::BTreeSet::new();
        for (u, targets) in self.adjacency.iter().enumerate() {
            for &w in targets {
                edges.insert((u as u32, w));
            }
        }
        edges.iter().all(|&(u, w)| edges.contains(&(w ^ 1, u ^ 1)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoSatOutcome {
    Sat(Vec<bool>),
    Unsat {
        /// Lowest variable sharing a strongly connected component with its
        /// negation; absent when the formula carried the empty-clause
        /// marker.
        contradictory_var: Option<usize>,
    },
}

impl TwoSatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, TwoSatOutcome::Sat(_))
    }
}

/// Iterative Tarjan SCC. Component ids are assigned in completion order,
/// so a cross-component edge always points from a higher id to a lower one.
fn tarjan_scc(adjacency: &[Vec<u32>]) -> Vec<u32> {
    let n = adjacency.len();
    let undiscovered = u32::MAX;
    let mut index = vec![undiscovered; n];
    let mut low = vec![0u32; n];
    let mut comp = vec![undiscovered; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut work: Vec<(u32, usize)> = Vec::new();
    let mut next_index = 0u32;
    let mut next_comp = 0u32;
    for root in 0..n {
        if index[root] != undiscovered {
            continue;
        }
        work.push((root as u32, 0));
        while let Some(&mut (v, ref mut edge_pos)) = work.last_mut() {
            let v = v as usize;
            if *edge_pos == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v as u32);
                on_stack[v] = true;
            }
            if let Some(&w) = adjacency[v].get(*edge_pos) {
                *edge_pos += 1;
                let w = w as usize;
                if index[w] == undiscovered {
                    work.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    let parent = parent as usize;
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap() as usize;
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

pub fn solve_two_sat(formula: &CnfFormula) -> Result<TwoSatOutcome, TwoSatError> {
    if formula.has_empty_clause {
        return Ok(TwoSatOutcome::Unsat { contradictory_var: None });
    }
    let graph = ImplicationGraph::from_formula(formula)?;
    let comp = tarjan_scc(&graph.adjacency);
    for v in 0..formula.num_vars {
        if comp[2 * v] == comp[2 * v + 1] {
            return Ok(TwoSatOutcome::Unsat { contradictory_var: Some(v) });
        }
    }
    // A literal whose component completed earlier (smaller id) sits on the
    // sink side of the condensation, so making it true cannot imply a false
    // literal.
    let bits = (0..formula.num_vars)
        .map(|v| comp[2 * v] < comp[2 * v + 1])
        .collect();
    Ok(TwoSatOutcome::Sat(bits))
}

/// A family of 3-CNF formulas, one per size parameter `p >= 1`, built so
/// the binary skeleton shared by each clause pair forms two contradictory
/// implication cycles. Variables `u_0..u_3p` occupy indices `0..=3p` and
/// `z_1..z_{3p+2}` occupy indices `3p+1..=6p+2`.
#[derive(Debug, Clone)]
pub struct T3Module {
    pub p: usize,
    /// Clause-pair count: `t = 3p + 2`.
    pub t: usize,
    pub num_vars: usize,
    /// The `2t` three-literal clauses; pair `m` consists of clauses `2m`
    /// and `2m+1`, identical except for the sign on `z_m`.
    pub clauses: CnfFormula,
    /// The `t` binary clauses common to both members of each pair.
    pub projection: CnfFormula,
}

pub fn build_t3_module(p: usize) -> Result<T3Module, TwoSatError> {
    if p == 0 {
        return Err(TwoSatError::ModuleSizeZero { p });
    }
    let t = 3 * p + 2;
    let num_vars = 6 * p + 3;
    let u = |m: usize| m;
    let z = |m: usize| 3 * p + m;
    let mut clauses = CnfFormula::new(num_vars);
    let mut projection = CnfFormula::new(num_vars);
    for m in 1..=t {
        let (a, b) = if m == p {
            (Literal::neg(u(p)), Literal::neg(u(0)))
        } else if m < 3 * p {
            (Literal::neg(u(m)), Literal::pos(u(m + 1)))
        } else if m == 3 * p {
            (Literal::neg(u(3 * p)), Literal::pos(u(0)))
        } else if m == 3 * p + 1 {
            (Literal::neg(u(0)), Literal::pos(u(1)))
        } else {
            (Literal::pos(u(0)), Literal::pos(u(p + 1)))
        };
        clauses.push(
            Clause::new(vec![a, b, Literal::pos(z(m))]),
            ClauseOrigin::Synthetic,
        );
        clauses.push(
            Clause::new(vec![a, b, Literal::neg(z(m))]),
            ClauseOrigin::Synthetic,
        );
        projection.push(Clause::new(vec![a, b]), ClauseOrigin::Synthetic);
    }
    Ok(T3Module { p, t, num_vars, clauses, projection })
}

/// Probability that both members of a fixed clause pair are implied by a
/// random table holding `2 + alpha` zeros on average: tables with two zero
/// rows contain a fixed pair of rows with probability 1/28, tables with
/// three with probability 6/56.
pub fn pair_containment_rate(alpha: f64) -> f64 {
    (1.0 - alpha) / 28.0 + alpha * 6.0 / 56.0
}

/// The zero density where contradiction modules start appearing at
/// constant rate: the solution of `2 (3 + sqrt(5)) * rate(alpha) = 1`,
/// shifted by the two guaranteed zeros. Numerically 2.8369 to four places.
pub fn threshold_constant() -> f64 {
    2.0 + (14.0 / (3.0 + 5.0f64.sqrt()) - 1.0) / 2.0
}
