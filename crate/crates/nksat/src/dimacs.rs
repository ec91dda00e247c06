//! DIMACS CNF serialization.
//!
//! Variables are written 1-based (internal variable `v` appears as `v+1`),
//! one clause per line terminated by `0`. Clause origins ride along as
//! comment lines immediately before their clause: `c o <function> <row>`
//! for reduction clauses and `c o <function>` for implied ones. A bare `0`
//! line encodes the formula-level empty-clause marker and is written after
//! all real clauses. The parser accepts anything the writer produces plus
//! ordinary solver-style files; it tolerates a clause count that disagrees
//! with the header but rejects structural damage with a line number.

use crate::cnf::{Clause, ClauseOrigin, CnfFormula, Literal};
use std::fmt::Write as _;
use std::io::BufRead;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header, expected `p cnf <vars> <clauses>`")]
    MalformedHeader { line: usize },
    #[error("line {line}: duplicate `p cnf` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: literal {literal} out of range for {num_vars} variables")]
    LiteralOutOfRange { line: usize, literal: i64, num_vars: usize },
    #[error("line {line}: unreadable token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: variable {var} repeats within one clause")]
    RepeatedVariable { line: usize, var: usize },
    #[error("line {line}: last clause is missing its `0` terminator")]
    MissingTerminator { line: usize },
}

pub fn write_dimacs(formula: &CnfFormula) -> String {
    let mut out = String::new();
    let clause_lines = formula.clauses.len() + usize::from(formula.has_empty_clause);
    writeln!(out, "p cnf {} {}", formula.num_vars, clause_lines).unwrap();
    for (clause, origin) in formula.clauses.iter().zip(&formula.origins) {
        match *origin {
            ClauseOrigin::ZeroRow { function, row } => {
                writeln!(out, "c o {function} {row}").unwrap();
            }
            ClauseOrigin::Implied { function } => {
                writeln!(out, "c o {function}").unwrap();
            }
            ClauseOrigin::Synthetic => {}
        }
        for lit in &clause.literals {
            let signed = (lit.var + 1) as i64;
            if lit.negated {
                write!(out, "{} ", -signed).unwrap();
            } else {
                write!(out, "{signed} ").unwrap();
            }
        }
        writeln!(out, "0").unwrap();
    }
    if formula.has_empty_clause {
        writeln!(out, "0").unwrap();
    }
    out
}

/// Parses a comment line's origin payload; unrecognized comments are skipped.
fn parse_origin(rest: &str) -> Option<ClauseOrigin> {
    let mut toks = rest.split_whitespace();
    if toks.next()? != "o" {
        return None;
    }
    let function: usize = toks.next()?.parse().ok()?;
    match toks.next() {
        None => Some(ClauseOrigin::Implied { function }),
        Some(row_tok) => {
            let row: usize = row_tok.parse().ok()?;
            if toks.next().is_some() {
                return None;
            }
            Some(ClauseOrigin::ZeroRow { function, row })
        }
    }
}

pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<CnfFormula, DimacsError> {
    let mut formula: Option<CnfFormula> = None;
    let mut pending_origin: Option<ClauseOrigin> = None;
    let mut current: Vec<Literal> = Vec::new();
    let mut clause_open_line = 0usize;
    let mut line_no = 0usize;

    for line in reader.lines() {
        line_no += 1;
        let line = line.map_err(|_| DimacsError::BadToken {
            line: line_no,
            token: "<unreadable line>".into(),
        })?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix('c') {
            if let Some(origin) = parse_origin(rest) {
                pending_origin = Some(origin);
            }
            continue;
        }
        if let Some(rest) = text.strip_prefix('p') {
            if formula.is_some() {
                return Err(DimacsError::DuplicateHeader { line: line_no });
            }
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let parsed = match toks.as_slice() {
                ["cnf", vars, clauses] => vars
                    .parse::<usize>()
                    .ok()
                    .zip(clauses.parse::<usize>().ok()),
                _ => None,
            };
            let Some((num_vars, _declared_clauses)) = parsed else {
                return Err(DimacsError::MalformedHeader { line: line_no });
            };
            formula = Some(CnfFormula::new(num_vars));
            continue;
        }
        let Some(f) = formula.as_mut() else {
            return Err(DimacsError::MissingHeader { line: line_no });
        };
        if current.is_empty() {
            clause_open_line = line_no;
        }
        for tok in text.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| DimacsError::BadToken {
                line: line_no,
                token: tok.to_string(),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    f.has_empty_clause = true;
                } else {
                    f.push(
                        Clause::new(std::mem::take(&mut current)),
                        pending_origin.take().unwrap_or(ClauseOrigin::Synthetic),
                    );
                }
                pending_origin = None;
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > f.num_vars {
                return Err(DimacsError::LiteralOutOfRange {
                    line: line_no,
                    literal: lit,
                    num_vars: f.num_vars,
                });
            }
            let var = var - 1;
            if current.iter().any(|l| l.var == var) {
                return Err(DimacsError::RepeatedVariable { line: line_no, var });
            }
            current.push(Literal { var, negated: lit < 0 });
        }
    }

    if !current.is_empty() {
        return Err(DimacsError::MissingTerminator { line: clause_open_line });
    }
    match formula {
        Some(f) => Ok(f),
        None => Err(DimacsError::MissingHeader { line: line_no.max(1) }),
    }
}

pub fn parse_dimacs_str(text: &str) -> Result<CnfFormula, DimacsError> {
    parse_dimacs(text.as_bytes())
}
