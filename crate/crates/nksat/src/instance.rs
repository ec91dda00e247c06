//! Core data model: local fitness functions, instances, assignments.
//!
//! An instance over `n` binary variables carries one local fitness function
//! per variable. Function `i` depends on its main variable `i` plus `k`
//! distinct neighbor variables and is stored as a dense lookup table with
//! `2^(k+1)` rows. The fitness of an assignment is the number of local
//! functions that evaluate to 1; the decision problem asks whether some
//! assignment reaches fitness `n`.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Builds the table row index for a main-variable bit and neighbor bits.
///
/// Wire-level contract: the main variable is the most significant bit and
/// the last neighbor the least significant, so `r = x_main * 2^k +
/// sum_j pi_j * 2^(k-1-j)` with `j` the 0-based neighborhood position.
/// Tables serialize as bitstrings with row 0 first, so this layout is fixed.
pub fn row_index(main_bit: bool, neighbor_bits: &[bool]) -> usize {
    let k = neighbor_bits.len();
    let mut r = (main_bit as usize) << k;
    for (j, &b) in neighbor_bits.iter().enumerate() {
        r |= (b as usize) << (k - 1 - j);
    }
    r
}

/// Inverse of [`row_index`]: recovers `(main_bit, neighbor_bits)` from a row.
pub fn decode_row(row: usize, k: usize) -> (bool, Vec<bool>) {
    let main_bit = (row >> k) & 1 == 1;
    let nbrs = (0..k).map(|j| (row >> (k - 1 - j)) & 1 == 1).collect();
    (main_bit, nbrs)
}

/// One local fitness function: a main variable, `k` neighbors, and a dense
/// value table over the `2^(k+1)` joint settings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFitness {
    #[serde(rename = "main")]
    pub main_var: usize,
    #[serde(rename = "nbrs")]
    pub neighborhood: Vec<usize>,
    #[serde(with = "bitstring")]
    pub table: Vec<u8>,
}

impl LocalFitness {
    pub fn k(&self) -> usize {
        self.neighborhood.len()
    }

    /// Number of table rows, `2^(k+1)`.
    pub fn rows(&self) -> usize {
        1 << (self.k() + 1)
    }

    /// All variables this function reads: main variable first, then the
    /// neighborhood in stored order.
    pub fn variables(&self) -> Vec<usize> {
        let mut vars = Vec::with_capacity(self.k() + 1);
        vars.push(self.main_var);
        vars.extend_from_slice(&self.neighborhood);
        vars
    }

    /// Table row selected by an assignment.
    pub fn row_for(&self, a: &Assignment) -> usize {
        let k = self.k();
        let mut r = (a.bits[self.main_var] as usize) << k;
        for (j, &v) in self.neighborhood.iter().enumerate() {
            r |= (a.bits[v] as usize) << (k - 1 - j);
        }
        r
    }

    /// Fitness value under an assignment.
    pub fn evaluate(&self, a: &Assignment) -> u8 {
        self.table[self.row_for(a)]
    }

    pub fn zero_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 0)
            .map(|(r, _)| r)
    }

    pub fn one_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(r, _)| r)
    }

    pub fn zero_count(&self) -> usize {
        self.table.iter().filter(|&&v| v == 0).count()
    }

    pub fn is_all_zero(&self) -> bool {
        self.table.iter().all(|&v| v == 0)
    }

    pub fn has_zero(&self) -> bool {
        self.table.iter().any(|&v| v == 0)
    }
}

/// A complete instance: `n` variables, one function per variable,
/// `functions[i].main_var == i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NKInstance {
    pub n: usize,
    pub k: usize,
    pub functions: Vec<LocalFitness>,
}

impl NKInstance {
    /// Total fitness: the number of local functions evaluating to 1.
    /// Depends only on each function's own `main_var`, not its list position.
    pub fn evaluate(&self, a: &Assignment) -> usize {
        assert_eq!(a.bits.len(), self.n, "assignment length != n");
        self.functions
            .iter()
            .map(|f| f.evaluate(a) as usize)
            .sum()
    }

    /// True iff the assignment brings every local function to 1.
    pub fn is_solution(&self, a: &Assignment) -> bool {
        assert_eq!(a.bits.len(), self.n, "assignment length != n");
        self.functions.iter().all(|f| f.evaluate(a) == 1)
    }

    /// Serializes to the canonical JSON schema.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }

    /// Parses and validates. Schema errors and invariant violations are kept
    /// separate so callers can tell malformed JSON from a bad instance.
    pub fn from_json(s: &str) -> Result<Self, InstanceError> {
        let inst: NKInstance = serde_json::from_str(s)?;
        let violations = validate(&inst);
        if violations.is_empty() {
            Ok(inst)
        } else {
            Err(InstanceError::Invalid(violations))
        }
    }

    /// Stable content hash (FNV-1a over a canonical byte walk), usable as a
    /// short identity for experiment records.
    pub fn digest(&self) -> String {
        const OFFSET: u64 = 0xcbf29ce484222325;
        const PRIME: u64 = 0x100000001b3;
        let mut h = OFFSET;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        eat(self.n as u64);
        eat(self.k as u64);
        for f in &self.functions {
            eat(f.main_var as u64);
            for &v in &f.neighborhood {
                eat(v as u64);
            }
            for &bit in &f.table {
                eat(bit as u64);
            }
        }
        format!("{h:016x}")
    }
}

/// An assignment of all `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn all_false(n: usize) -> Self {
        Assignment { bits: vec![false; n] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("instance violates invariants: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// One invariant breach found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    FunctionCount { expected: usize, found: usize },
    KOutOfRange { k: usize, n: usize },
    MainVarMismatch { index: usize, main_var: usize },
    NeighborhoodSize { function: usize, expected: usize, found: usize },
    NeighborOutOfRange { function: usize, var: usize },
    NeighborIsMain { function: usize },
    NeighborDuplicate { function: usize, var: usize },
    TableLength { function: usize, expected: usize, found: usize },
    TableEntry { function: usize, row: usize, value: u8 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match *self {
            FunctionCount { expected, found } => {
                write!(f, "expected {expected} functions, found {found}")
            }
            KOutOfRange { k, n } => write!(f, "k = {k} out of range for n = {n}"),
            MainVarMismatch { index, main_var } => {
                write!(f, "function {index} has main variable {main_var}")
            }
            NeighborhoodSize { function, expected, found } => {
                write!(f, "function {function} has {found} neighbors, expected {expected}")
            }
            NeighborOutOfRange { function, var } => {
                write!(f, "function {function} references variable {var} out of range")
            }
            NeighborIsMain { function } => {
                write!(f, "function {function} lists its main variable as a neighbor")
            }
            NeighborDuplicate { function, var } => {
                write!(f, "function {function} repeats neighbor {var}")
            }
            TableLength { function, expected, found } => {
                write!(f, "function {function} table has {found} rows, expected {expected}")
            }
            TableEntry { function, row, value } => {
                write!(f, "function {function} table row {row} holds {value}, expected 0 or 1")
            }
        }
    }
}

/// Checks every structural invariant. An empty result means well-formed.
pub fn validate(inst: &NKInstance) -> Vec<Violation> {
    let mut out = Vec::new();
    if inst.n == 0 || inst.k > inst.n - 1 {
        out.push(Violation::KOutOfRange { k: inst.k, n: inst.n });
    }
    if inst.functions.len() != inst.n {
        out.push(Violation::FunctionCount {
            expected: inst.n,
            found: inst.functions.len(),
        });
    }
    for (i, f) in inst.functions.iter().enumerate() {
        if f.main_var != i {
            out.push(Violation::MainVarMismatch { index: i, main_var: f.main_var });
        }
        if f.neighborhood.len() != inst.k {
            out.push(Violation::NeighborhoodSize {
                function: i,
                expected: inst.k,
                found: f.neighborhood.len(),
            });
        }
        let mut seen = vec![false; inst.n];
        for &v in &f.neighborhood {
            if v >= inst.n {
                out.push(Violation::NeighborOutOfRange { function: i, var: v });
                continue;
            }
            if v == f.main_var {
                out.push(Violation::NeighborIsMain { function: i });
            }
            if seen[v] {
                out.push(Violation::NeighborDuplicate { function: i, var: v });
            }
            seen[v] = true;
        }
        let expected_rows = 1usize << (f.neighborhood.len() + 1);
        if f.table.len() != expected_rows {
            out.push(Violation::TableLength {
                function: i,
                expected: expected_rows,
                found: f.table.len(),
            });
        }
        for (r, &v) in f.table.iter().enumerate() {
            if v > 1 {
                out.push(Violation::TableEntry { function: i, row: r, value: v });
            }
        }
    }
    out
}

/// Serializes tables as bitstrings ("01101001", row 0 first) per the JSON
/// instance schema.
mod bitstring {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(table: &[u8], s: S) -> Result<S::Ok, S::Error> {
        let text: String = table
            .iter()
            .map(|&b| if b == 0 { '0' } else { '1' })
            .collect();
        s.serialize_str(&text)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let text = String::deserialize(d)?;
        text.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(D::Error::custom(format!(
                    "table bitstring holds '{other}', expected '0' or '1'"
                ))),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// The worked three-variable example: zeros at rows 000, 011, 101, 110.
    pub(crate) fn xor_like_function() -> LocalFitness {
        LocalFitness {
            main_var: 0,
            neighborhood: vec![1, 2],
            table: vec![0, 1, 1, 0, 1, 0, 0, 1],
        }
    }

    fn random_instance(rng: &mut StdRng, n: usize, k: usize) -> NKInstance {
        let functions = (0..n)
            .map(|i| {
                let mut nbrs = Vec::new();
                while nbrs.len() < k {
                    let v = rng.random_range(0..n);
                    if v != i && !nbrs.contains(&v) {
                        nbrs.push(v);
                    }
                }
                let table = (0..1usize << (k + 1))
                    .map(|_| rng.random_range(0..=1) as u8)
                    .collect();
                LocalFitness { main_var: i, neighborhood: nbrs, table }
            })
            .collect();
        NKInstance { n, k, functions }
    }

    fn random_assignment(rng: &mut StdRng, n: usize) -> Assignment {
        Assignment::new((0..n).map(|_| rng.random_bool(0.5)).collect())
    }

    /// Independent oracle: finds the table row by scanning all rows and
    /// matching decoded bits against the assignment, instead of building the
    /// index arithmetically.
    fn evaluate_by_row_scan(f: &LocalFitness, a: &Assignment) -> u8 {
        let k = f.k();
        for r in 0..f.rows() {
            let (main_bit, nbr_bits) = decode_row(r, k);
            let matches = a.bits[f.main_var] == main_bit
                && f.neighborhood
                    .iter()
                    .zip(&nbr_bits)
                    .all(|(&v, &b)| a.bits[v] == b);
            if matches {
                return f.table[r];
            }
        }
        unreachable!("some row always matches");
    }

    #[test]
    fn row_index_places_main_variable_first() {
        assert_eq!(row_index(false, &[false, false]), 0);
        assert_eq!(row_index(false, &[true, true]), 3);
        assert_eq!(row_index(true, &[false, true]), 5);
        assert_eq!(row_index(true, &[true, false]), 6);
        assert_eq!(row_index(true, &[]), 1);
        assert_eq!(row_index(false, &[]), 0);
    }

    #[test]
    fn constant_one_function_evaluates_to_one() {
        let f = LocalFitness {
            main_var: 0,
            neighborhood: vec![1, 2],
            table: vec![1; 8],
        };
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_assignment(&mut rng, 3);
            assert_eq!(f.evaluate(&a), 1);
        }
    }

    #[test]
    fn xor_like_function_rows() {
        let f = xor_like_function();
        // (x, y, z) = (0, 0, 1) -> row 001 -> 1
        let a = Assignment::new(vec![false, false, true]);
        assert_eq!(f.evaluate(&a), 1);
        // (x, y, z) = (1, 1, 0) -> row 110 -> 0
        let a = Assignment::new(vec![true, true, false]);
        assert_eq!(f.evaluate(&a), 0);
    }

    #[test]
    fn evaluate_counts_satisfied_functions() {
        let n = 5;
        let all_ones = NKInstance {
            n,
            k: 1,
            functions: (0..n)
                .map(|i| LocalFitness {
                    main_var: i,
                    neighborhood: vec![(i + 1) % n],
                    table: vec![1; 4],
                })
                .collect(),
        };
        let a = Assignment::all_false(n);
        assert_eq!(all_ones.evaluate(&a), n);
        assert!(all_ones.is_solution(&a));

        let mut all_zeros = all_ones.clone();
        for f in &mut all_zeros.functions {
            f.table = vec![0; 4];
        }
        assert_eq!(all_zeros.evaluate(&a), 0);
        assert!(!all_zeros.is_solution(&a));
    }

    #[test]
    fn one_dead_function_blocks_solutions() {
        let mut rng = StdRng::seed_from_u64(11);
        let mut inst = random_instance(&mut rng, 6, 2);
        inst.functions[3].table = vec![0; 8];
        for _ in 0..50 {
            let a = random_assignment(&mut rng, 6);
            assert!(!inst.is_solution(&a));
        }
    }

    #[test]
    fn evaluate_agrees_with_row_scan_oracle() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..40 {
            let n = rng.random_range(3..=12);
            let k = rng.random_range(0..=2.min(n - 1));
            let inst = random_instance(&mut rng, n, k);
            for _ in 0..10 {
                let a = random_assignment(&mut rng, n);
                let direct = inst.evaluate(&a);
                let oracle: usize = inst
                    .functions
                    .iter()
                    .map(|f| evaluate_by_row_scan(f, &a) as usize)
                    .sum();
                assert_eq!(direct, oracle);
                assert!(direct <= n);
                assert_eq!(inst.is_solution(&a), direct == n);
            }
        }
    }

    #[test]
    fn is_solution_matches_exhaustive_maximum() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..20 {
            let n = rng.random_range(2..=10);
            let k = rng.random_range(0..=2.min(n - 1));
            let inst = random_instance(&mut rng, n, k);
            let mut best = 0;
            let mut any_solution = false;
            for c in 0..1usize << n {
                let a = Assignment::new((0..n).map(|j| (c >> (n - 1 - j)) & 1 == 1).collect());
                let v = inst.evaluate(&a);
                best = best.max(v);
                any_solution |= inst.is_solution(&a);
            }
            assert_eq!(any_solution, best == n);
        }
    }

    #[test]
    fn evaluate_ignores_function_list_order() {
        let mut rng = StdRng::seed_from_u64(37);
        let inst = random_instance(&mut rng, 8, 2);
        let mut shuffled = inst.clone();
        shuffled.functions.reverse();
        shuffled.functions.swap(0, 3);
        for _ in 0..20 {
            let a = random_assignment(&mut rng, 8);
            assert_eq!(inst.evaluate(&a), shuffled.evaluate(&a));
        }
    }

    #[test]
    fn validate_accepts_well_formed_instances() {
        let mut rng = StdRng::seed_from_u64(41);
        let inst = random_instance(&mut rng, 9, 2);
        assert!(validate(&inst).is_empty());
    }

    #[test]
    fn validate_reports_duplicate_neighbor() {
        let mut rng = StdRng::seed_from_u64(43);
        let mut inst = random_instance(&mut rng, 6, 2);
        inst.functions[4].neighborhood = vec![1, 1];
        let violations = validate(&inst);
        assert_eq!(
            violations,
            vec![Violation::NeighborDuplicate { function: 4, var: 1 }]
        );
    }

    #[test]
    fn validate_reports_short_table() {
        let mut rng = StdRng::seed_from_u64(47);
        let mut inst = random_instance(&mut rng, 6, 2);
        inst.functions[2].table.pop();
        let violations = validate(&inst);
        assert_eq!(
            violations,
            vec![Violation::TableLength { function: 2, expected: 8, found: 7 }]
        );
    }

    #[test]
    fn validate_reports_main_var_mismatch() {
        let mut rng = StdRng::seed_from_u64(53);
        let mut inst = random_instance(&mut rng, 6, 2);
        inst.functions[0].main_var = 5;
        let violations = validate(&inst);
        assert!(violations.contains(&Violation::MainVarMismatch { index: 0, main_var: 5 }));
    }

    #[test]
    fn json_schema_uses_wire_field_names() {
        let inst = NKInstance {
            n: 3,
            k: 2,
            functions: vec![
                xor_like_function(),
                LocalFitness { main_var: 1, neighborhood: vec![0, 2], table: vec![1; 8] },
                LocalFitness { main_var: 2, neighborhood: vec![0, 1], table: vec![1; 8] },
            ],
        };
        let value: serde_json::Value = serde_json::from_str(&inst.to_json()).unwrap();
        assert_eq!(value["n"], 3);
        assert_eq!(value["k"], 2);
        assert_eq!(value["functions"][0]["main"], 0);
        assert_eq!(value["functions"][0]["nbrs"], serde_json::json!([1, 2]));
        assert_eq!(value["functions"][0]["table"], "01101001");
    }

    #[test]
    fn json_round_trip_preserves_instances() {
        let mut rng = StdRng::seed_from_u64(59);
        for _ in 0..10 {
            let n = rng.random_range(2..=10);
            let inst = random_instance(&mut rng, n, 1);
            let back = NKInstance::from_json(&inst.to_json()).unwrap();
            assert_eq!(inst, back);
        }
    }

    #[test]
    fn json_rejects_bad_table_characters() {
        let text = r#"{"n":1,"k":0,"functions":[{"main":0,"nbrs":[],"table":"1x"}]}"#;
        assert!(matches!(
            NKInstance::from_json(text),
            Err(InstanceError::Json(_))
        ));
    }

    #[test]
    fn json_rejects_invariant_violations() {
        let text = r#"{"n":2,"k":0,"functions":[{"main":0,"nbrs":[],"table":"10"},{"main":0,"nbrs":[],"table":"10"}]}"#;
        match NKInstance::from_json(text) {
            Err(InstanceError::Invalid(v)) => {
                assert!(v.contains(&Violation::MainVarMismatch { index: 1, main_var: 0 }))
            }
            other => panic!("expected invariant violations, got {other:?}"),
        }
    }

    #[test]
    fn digest_is_stable_and_content_sensitive() {
        let mut rng = StdRng::seed_from_u64(61);
        let inst = random_instance(&mut rng, 6, 2);
        assert_eq!(inst.digest(), inst.clone().digest());
        let mut other = inst.clone();
        other.functions[0].table[0] ^= 1;
        assert_ne!(inst.digest(), other.digest());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn row_encoding_is_a_bijection(k in 0usize..=6, seed in any::<u64>()) {
            let rows = 1usize << (k + 1);
            let row = (seed % rows as u64) as usize;
            let (main_bit, nbr_bits) = decode_row(row, k);
            prop_assert_eq!(row_index(main_bit, &nbr_bits), row);
        }

        #[test]
        fn evaluate_stays_in_bounds(seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let n = rng.random_range(2..=10);
            let k = rng.random_range(0..=2.min(n - 1));
            let inst = random_instance(&mut rng, n, k);
            let a = random_assignment(&mut rng, n);
            let v = inst.evaluate(&a);
            prop_assert!(v <= n);
            prop_assert_eq!(inst.is_solution(&a), v == n);
        }
    }
}
