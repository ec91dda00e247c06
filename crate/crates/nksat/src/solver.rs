//! Complete SAT solvers: exhaustive enumeration for tiny formulas and an
//! iterative DPLL with unit propagation and pure-literal elimination.
//!
//! The DPLL keeps per-clause counters (satisfied-literal count, unassigned
//! count) plus occurrence lists per literal, a histogram of unsatisfied
//! clause sizes, and per-literal active-occurrence counts for purity
//! detection. Branching picks the variable occurring most often among the
//! smallest unsatisfied clauses, lowest index on ties, and tries `false`
//! first. Work is metered in decisions: one decision per branch node, with
//! the complementary value tried under the same node. A configurable
//! decision budget turns runaway searches into an explicit
//! [`SolveOutcome::BudgetExceeded`] instead of a wrong verdict.
//!
//! Two additions keep the search honest on structured inputs without any
//! clause learning. Before search, a preprocessing stage seeds the clause
//! database with one round of same-variable-set resolvents and then runs
//! failed-literal probing to a fixpoint, so instances that are already
//! contradictory in their implied binary clauses are refuted with zero
//! decisions. During search, every assignment tracks which decision levels
//! it depends on, and a conflict unwinds straight to the deepest decision
//! it actually blames (conflict-directed backjumping) instead of stepping
//! back one level at a time.

use crate::cnf::CnfFormula;
use serde::Serialize;
use std::collections::{HashMap, HashSet, VecDeque};
use std::time::Instant;
use thiserror::Error;

pub const DEFAULT_DECISION_BUDGET: u64 = 10_000_000;

/// Largest formula [`brute_force`] accepts.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Witness assignment indexed by variable; unconstrained variables are
    /// left `false`.
    Sat(Vec<bool>),
    Unsat,
    /// The decision budget ran out before a verdict. Never reported as
    /// SAT or UNSAT.
    BudgetExceeded,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveOutcome::Unsat)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Branch nodes expanded. Trying the complementary value at the same
    /// node is not a new decision.
    pub decisions: u64,
    /// Forced assignments made by unit propagation.
    pub propagations: u64,
    /// Assignments made by pure-literal elimination.
    pub pure_eliminations: u64,
    /// Root assignments discovered by failed-literal probing.
    pub forced_literals: u64,
    /// True when the verdict fell out of the preprocessing pass (propagate,
    /// purify, probe) with zero decisions.
    pub solved_by_preprocessing: bool,
    /// Wall-clock time, microseconds. Not reproducible across runs.
    pub wall_micros: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("{num_vars} variables exceed the exhaustive-search limit of {max}")]
    TooManyVariables { num_vars: usize, max: usize },
}

/// Checks a witness against every clause, independently of any solver
/// bookkeeping.
pub fn check_witness(formula: &CnfFormula, bits: &[bool]) -> bool {
    bits.len() == formula.num_vars && formula.satisfied_by(bits)
}

/// Tries all `2^num_vars` assignments in lexicographic order with variable 0
/// as the most significant bit, returning the first satisfying one.
pub fn brute_force(formula: &CnfFormula) -> Result<SolveOutcome, SolverError> {
    let nv = formula.num_vars;
    if nv > BRUTE_FORCE_MAX_VARS {
        return Err(SolverError::TooManyVariables { num_vars: nv, max: BRUTE_FORCE_MAX_VARS });
    }
    if formula.has_empty_clause {
        return Ok(SolveOutcome::Unsat);
    }
    let mut bits = vec![false; nv];
    for counter in 0u64..1 << nv {
        for (j, b) in bits.iter_mut().enumerate() {
            *b = (counter >> (nv - 1 - j)) & 1 == 1;
        }
        if formula.clauses.iter().all(|c| c.satisfied_by(&bits)) {
            return Ok(SolveOutcome::Sat(bits));
        }
    }
    Ok(SolveOutcome::Unsat)
}

pub fn dpll(formula: &CnfFormula) -> (SolveOutcome, SolveStats) {
    dpll_with_budget(formula, DEFAULT_DECISION_BUDGET)
}

pub fn dpll_with_budget(formula: &CnfFormula, budget: u64) -> (SolveOutcome, SolveStats) {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    if formula.has_empty_clause {
        stats.solved_by_preprocessing = true;
        stats.wall_micros = start.elapsed().as_micros() as u64;
        return (SolveOutcome::Unsat, stats);
    }
    let mut engine = Engine::new(formula);
    let outcome = engine.solve(budget, &mut stats);
    stats.solved_by_preprocessing = stats.decisions == 0
        && matches!(outcome, SolveOutcome::Sat(_) | SolveOutcome::Unsat);
    stats.wall_micros = start.elapsed().as_micros() as u64;
    (outcome, stats)
}

const UNASSIGNED: u8 = 2;

fn lit_code(var: usize, negated: bool) -> u32 {
    ((var as u32) << 1) | u32::from(negated)
}

struct Frame {
    var: u32,
    trail_mark: usize,
    tried_flip: bool,
}

/// Fixed-width bitsets over decision levels, one slot per variable plus
/// scratch slots, backing the conflict-directed backjumping bookkeeping.
struct LevelSets {
    words: usize,
    bits: Vec<u64>,
}

impl LevelSets {
    fn new(slots: usize, levels: usize) -> Self {
        let words = levels.div_ceil(64).max(1);
        LevelSets { words, bits: vec![0; slots * words] }
    }

    fn clear(&mut self, slot: usize) {
        let at = slot * self.words;
        self.bits[at..at + self.words].fill(0);
    }

    fn set_bit(&mut self, slot: usize, level: usize) {
        self.bits[slot * self.words + level / 64] |= 1u64 << (level % 64);
    }

    fn clear_bit(&mut self, slot: usize, level: usize) {
        self.bits[slot * self.words + level / 64] &= !(1u64 << (level % 64));
    }

    fn union_into(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.words, src * self.words);
        for w in 0..self.words {
            let bits = self.bits[s + w];
            self.bits[d + w] |= bits;
        }
    }

    fn copy_into(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.words, src * self.words);
        for w in 0..self.words {
            let bits = self.bits[s + w];
            self.bits[d + w] = bits;
        }
    }

    fn highest_bit(&self, slot: usize) -> Option<usize> {
        let at = slot * self.words;
        for w in (0..self.words).rev() {
            let bits = self.bits[at + w];
            if bits != 0 {
                return Some(w * 64 + 63 - bits.leading_zeros() as usize);
            }
        }
        None
    }
}

/// One round of resolution between clauses over identical variable sets
/// that differ in exactly one polarity. Each local constraint set in this
/// problem family lives on one small variable tuple, so its joint
/// implications surface as these short resolvents; seeding the search with
/// them lets unit propagation travel between constraints instead of
/// rediscovering the same two-literal facts in every subtree.
/// Input clauses must be sorted by literal code; resolvents come back
/// sorted and deduplicated, without duplicating any input clause.
fn implied_resolvents(clauses: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut groups: HashMap<&[u32], Vec<usize>> = HashMap::new();
    let mut vars_buf: Vec<Vec<u32>> = Vec::with_capacity(clauses.len());
    for codes in clauses {
        vars_buf.push(codes.iter().map(|&c| c >> 1).collect());
    }
    for (ci, vars) in vars_buf.iter().enumerate() {
        groups.entry(vars.as_slice()).or_default().push(ci);
    }
    let seen: HashSet<&[u32]> = clauses.iter().map(|c| c.as_slice()).collect();
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut accepted: HashSet<Vec<u32>> = HashSet::new();
    // Visit groups in first-occurrence order, not hash order, so the
    // resolvent list (and everything downstream of clause numbering) is
    // identical from run to run.
    for vars in &vars_buf {
        let Some(members) = groups.remove(vars.as_slice()) else {
            continue;
        };
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                let (ca, cb) = (&clauses[a], &clauses[b]);
                let mut clashes = ca.iter().zip(cb.iter()).filter(|(x, y)| x != y);
                let (Some(_), None) = (clashes.next(), clashes.next()) else {
                    continue;
                };
                let resolvent: Vec<u32> = ca
                    .iter()
                    .zip(cb.iter())
                    .filter(|(x, y)| x == y)
                    .map(|(&x, _)| x)
                    .collect();
                if resolvent.is_empty()
                    || seen.contains(resolvent.as_slice())
                    || accepted.contains(&resolvent)
                {
                    continue;
                }
                accepted.insert(resolvent.clone());
                out.push(resolvent);
            }
        }
    }
    out
}

struct Engine {
    /// Clause literals as codes `var<<1 | negated`.
    clauses: Vec<Vec<u32>>,
    /// Clause indices containing each literal code.
    occurrences: Vec<Vec<u32>>,
    /// Per variable: 0 = false, 1 = true, 2 = unassigned.
    values: Vec<u8>,
    /// Per clause: satisfied-literal count and unassigned-literal count.
    sat_count: Vec<u32>,
    unassigned_count: Vec<u32>,
    /// Histogram of unsatisfied clause sizes by unassigned count.
    size_histogram: Vec<u32>,
    /// Per literal code: occurrences among currently unsatisfied clauses.
    active: Vec<u32>,
    trail: Vec<u32>,
    /// Pending implied literals with the clause that implied each one.
    unit_queue: VecDeque<(u32, u32)>,
    pure_candidates: Vec<u32>,
    /// Per-variable culprit sets (which decision levels each assignment
    /// depends on), plus one scratch slot at index `num_vars` used as the
    /// working conflict set while backjumping.
    sets: LevelSets,
    satisfied_clauses: u32,
    branch_counts: Vec<u32>,
    branch_touched: Vec<u32>,
}

impl Engine {
    fn new(formula: &CnfFormula) -> Self {
        let nv = formula.num_vars;
        let mut clauses: Vec<Vec<u32>> = formula
            .clauses
            .iter()
            .map(|clause| {
                let mut codes: Vec<u32> = clause
                    .literals
                    .iter()
                    .map(|l| lit_code(l.var, l.negated))
                    .collect();
                codes.sort_unstable();
                codes
            })
            .collect();
        clauses.extend(implied_resolvents(&clauses));
        let mut occurrences = vec![Vec::new(); 2 * nv];
        let mut active = vec![0u32; 2 * nv];
        let mut size_histogram = vec![0u32; 2];
        let mut unit_queue = VecDeque::new();
        for (ci, codes) in clauses.iter().enumerate() {
            for &code in codes {
                occurrences[code as usize].push(ci as u32);
                active[code as usize] += 1;
            }
            if size_histogram.len() <= codes.len() {
                size_histogram.resize(codes.len() + 1, 0);
            }
            size_histogram[codes.len()] += 1;
            if codes.len() == 1 {
                unit_queue.push_back((codes[0], ci as u32));
            }
        }
        let num_clauses = clauses.len();
        let unassigned_count = clauses.iter().map(|c| c.len() as u32).collect();
        Engine {
            clauses,
            occurrences,
            values: vec![UNASSIGNED; nv],
            sat_count: vec![0; num_clauses],
            unassigned_count,
            size_histogram,
            active,
            trail: Vec::with_capacity(nv),
            unit_queue,
            pure_candidates: (0..nv as u32).collect(),
            sets: LevelSets::new(nv + 1, nv.max(1)),
            satisfied_clauses: 0,
            branch_counts: vec![0; nv],
            branch_touched: Vec::new(),
        }
    }

    /// Makes literal `code` true, updating every counter. Returns the first
    /// clause that lost its last literal, if the assignment conflicts.
    fn assign(&mut self, code: u32) -> Option<u32> {
        let var = (code >> 1) as usize;
        debug_assert_eq!(self.values[var], UNASSIGNED);
        self.values[var] = (code & 1 ^ 1) as u8;
        self.trail.push(code);
        for idx in 0..self.occurrences[code as usize].len() {
            let ci = self.occurrences[code as usize][idx] as usize;
            self.sat_count[ci] += 1;
            if self.sat_count[ci] == 1 {
                self.satisfied_clauses += 1;
                self.size_histogram[self.unassigned_count[ci] as usize] -= 1;
                for li in 0..self.clauses[ci].len() {
                    let other = self.clauses[ci][li] as usize;
                    self.active[other] -= 1;
                    if self.active[other] == 0 {
                        self.pure_candidates.push(other as u32 >> 1);
                    }
                }
            }
        }
        let falsified = code ^ 1;
        let mut conflict = None;
        for idx in 0..self.occurrences[falsified as usize].len() {
            let ci = self.occurrences[falsified as usize][idx] as usize;
            self.unassigned_count[ci] -= 1;
            if self.sat_count[ci] == 0 {
                let left = self.unassigned_count[ci] as usize;
                self.size_histogram[left + 1] -= 1;
                self.size_histogram[left] += 1;
                if left == 1 {
                    if let Some(&unit) = self.clauses[ci]
                        .iter()
                        .find(|&&l| self.values[(l >> 1) as usize] == UNASSIGNED)
                    {
                        self.unit_queue.push_back((unit, ci as u32));
                    }
                } else if left == 0 && conflict.is_none() {
                    conflict = Some(ci as u32);
                }
            }
        }
        conflict
    }

    fn unassign_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let code = self.trail.pop().unwrap();
            let var = (code >> 1) as usize;
            for idx in 0..self.occurrences[code as usize].len() {
                let ci = self.occurrences[code as usize][idx] as usize;
                if self.sat_count[ci] == 1 {
                    self.satisfied_clauses -= 1;
                    self.size_histogram[self.unassigned_count[ci] as usize] += 1;
                    for li in 0..self.clauses[ci].len() {
                        self.active[self.clauses[ci][li] as usize] += 1;
                    }
                }
                self.sat_count[ci] -= 1;
            }
            let falsified = code ^ 1;
            for idx in 0..self.occurrences[falsified as usize].len() {
                let ci = self.occurrences[falsified as usize][idx] as usize;
                if self.sat_count[ci] == 0 {
                    let left = self.unassigned_count[ci] as usize;
                    self.size_histogram[left] -= 1;
                    self.size_histogram[left + 1] += 1;
                }
                self.unassigned_count[ci] += 1;
            }
            self.values[var] = UNASSIGNED;
        }
    }

    /// Drains units, then pure literals, to a fixpoint. On conflict the
    /// queue is cleared and a fully falsified clause is returned.
    fn propagate(&mut self, stats: &mut SolveStats) -> Result<(), u32> {
        loop {
            if let Some((code, reason)) = self.unit_queue.pop_front() {
                let var = (code >> 1) as usize;
                let want = (code & 1 ^ 1) as u8;
                match self.values[var] {
                    UNASSIGNED => {
                        stats.propagations += 1;
                        // The implied literal depends on whatever falsified
                        // the rest of its reason clause.
                        self.sets.clear(var);
                        for li in 0..self.clauses[reason as usize].len() {
                            let other = self.clauses[reason as usize][li];
                            if other != code {
                                self.sets.union_into(var, (other >> 1) as usize);
                            }
                        }
                        if let Some(ci) = self.assign(code) {
                            self.unit_queue.clear();
                            return Err(ci);
                        }
                    }
                    v if v == want => {}
                    _ => {
                        // The pending literal was contradicted, so its
                        // reason clause is now falsified end to end.
                        self.unit_queue.clear();
                        return Err(reason);
                    }
                }
                continue;
            }
            if let Some(var) = self.pure_candidates.pop() {
                let var = var as usize;
                if self.values[var] != UNASSIGNED {
                    continue;
                }
                let pos = self.active[lit_code(var, false) as usize];
                let neg = self.active[lit_code(var, true) as usize];
                let choice = if neg == 0 && pos > 0 {
                    Some(lit_code(var, false))
                } else if pos == 0 && neg > 0 {
                    Some(lit_code(var, true))
                } else {
                    None
                };
                if let Some(code) = choice {
                    stats.pure_eliminations += 1;
                    // Every clause holding the complement is already
                    // satisfied by earlier assignments, so a pure literal
                    // depends on no decision and cannot conflict.
                    self.sets.clear(var);
                    if let Some(ci) = self.assign(code) {
                        self.unit_queue.clear();
                        return Err(ci);
                    }
                }
                continue;
            }
            return Ok(());
        }
    }

    /// Failed-literal probing at the root, run to a fixpoint: tentatively
    /// assert each value of every constrained variable and propagate; a
    /// value that collapses forces the opposite one permanently. Classic
    /// backtracking solvers ran exactly this kind of lookahead as their
    /// preprocessing stage. Combined with the seeded resolvents it refutes,
    /// without spending any decision, every instance whose implied binary
    /// clauses are contradictory on their own, because propagation over
    /// binary clauses walks the full implication chain of the probed value.
    /// Returns Err when some variable fails both ways.
    fn probe_forced_literals(&mut self, stats: &mut SolveStats) -> Result<(), ()> {
        let nv = self.values.len();
        loop {
            let mut forced_any = false;
            for var in 0..nv {
                if self.values[var] != UNASSIGNED {
                    continue;
                }
                for probe in [lit_code(var, true), lit_code(var, false)] {
                    if self.active[probe as usize] == 0
                        && self.active[(probe ^ 1) as usize] == 0
                    {
                        // The variable sits in satisfied clauses only;
                        // neither value can propagate anything.
                        break;
                    }
                    let mark = self.trail.len();
                    self.sets.clear(var);
                    let conflicted = match self.assign(probe) {
                        Some(_) => {
                            self.unit_queue.clear();
                            true
                        }
                        None => self.propagate(stats).is_err(),
                    };
                    self.unassign_to(mark);
                    if !conflicted {
                        continue;
                    }
                    stats.forced_literals += 1;
                    forced_any = true;
                    self.sets.clear(var);
                    let failed = match self.assign(probe ^ 1) {
                        Some(_) => true,
                        None => self.propagate(stats).is_err(),
                    };
                    if failed {
                        return Err(());
                    }
                    break;
                }
            }
            if !forced_any {
                return Ok(());
            }
        }
    }

    /// Most occurrences among the smallest unsatisfied clauses, lowest
    /// variable index on ties.
    fn pick_branch_variable(&mut self) -> u32 {
        let smallest = (2..self.size_histogram.len())
            .find(|&s| self.size_histogram[s] > 0)
            .expect("an unsatisfied clause with two unassigned literals must exist");
        self.branch_touched.clear();
        for ci in 0..self.clauses.len() {
            if self.sat_count[ci] != 0 || self.unassigned_count[ci] as usize != smallest {
                continue;
            }
            for li in 0..self.clauses[ci].len() {
                let var = (self.clauses[ci][li] >> 1) as usize;
                if self.values[var] == UNASSIGNED {
                    if self.branch_counts[var] == 0 {
                        self.branch_touched.push(var as u32);
                    }
                    self.branch_counts[var] += 1;
                }
            }
        }
        let mut best_var = u32::MAX;
        let mut best_count = 0u32;
        for &var in &self.branch_touched {
            let count = self.branch_counts[var as usize];
            if count > best_count || (count == best_count && var < best_var) {
                best_count = count;
                best_var = var;
            }
        }
        for &var in &self.branch_touched {
            self.branch_counts[var as usize] = 0;
        }
        debug_assert_ne!(best_var, u32::MAX);
        best_var
    }

    fn witness(&self) -> Vec<bool> {
        self.values.iter().map(|&v| v == 1).collect()
    }

    fn solve(&mut self, budget: u64, stats: &mut SolveStats) -> SolveOutcome {
        let total = self.clauses.len() as u32;
        let scratch = self.values.len();
        let mut frames: Vec<Frame> = Vec::new();
        if self.propagate(stats).is_err() || self.probe_forced_literals(stats).is_err() {
            return SolveOutcome::Unsat;
        }
        loop {
            if self.satisfied_clauses == total {
                return SolveOutcome::Sat(self.witness());
            }
            if stats.decisions == budget {
                return SolveOutcome::BudgetExceeded;
            }
            stats.decisions += 1;
            let var = self.pick_branch_variable();
            self.sets.clear(var as usize);
            self.sets.set_bit(var as usize, frames.len());
            frames.push(Frame {
                var,
                trail_mark: self.trail.len(),
                tried_flip: false,
            });
            let mut conflict = self.assign(lit_code(var as usize, true));
            loop {
                if conflict.is_none() {
                    conflict = self.propagate(stats).err();
                }
                let Some(ci) = conflict else { break };
                // Gather the decision levels this conflict depends on.
                self.sets.clear(scratch);
                for li in 0..self.clauses[ci as usize].len() {
                    let v = (self.clauses[ci as usize][li] >> 1) as usize;
                    self.sets.union_into(scratch, v);
                }
                conflict = loop {
                    // Jump straight to the deepest culprit decision; a
                    // conflict with no culprits refutes the formula.
                    let Some(level) = self.sets.highest_bit(scratch) else {
                        return SolveOutcome::Unsat;
                    };
                    frames.truncate(level + 1);
                    let frame = frames.last_mut().expect("culprit level is live");
                    let (fvar, mark) = (frame.var, frame.trail_mark);
                    let flipped = frame.tried_flip;
                    frame.tried_flip = true;
                    self.unassign_to(mark);
                    self.sets.clear_bit(scratch, level);
                    if flipped {
                        // Both values failed. Whatever forced the flip is
                        // as guilty as this conflict, so merge and go on.
                        self.sets.union_into(scratch, fvar as usize);
                        frames.pop();
                    } else {
                        // The remaining culprits force the opposite value,
                        // which therefore inherits them as its own culprits.
                        self.sets.copy_into(fvar as usize, scratch);
                        break self.assign(lit_code(fvar as usize, false));
                    }
                };
            }
        }
    }
}
