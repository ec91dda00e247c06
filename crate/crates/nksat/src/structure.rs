//! Structural solubility analysis built on the connection graph.
//!
//! Two local functions are connected when their variable sets (main
//! variable plus neighborhood, for each) share a variable and both
//! functions have at least one zero row. Functions without zeros never
//! constrain anything and stay isolated. Connected components can then be
//! decided independently by enumerating only the variables the component
//! touches, and the instance is soluble iff every component is.
//!
//! The module also detects two cheap certificates of insolubility: a
//! function with an all-zero table, and a conflicting pair, meaning two
//! functions sharing a variable whose product is 0 under every joint
//! assignment of their combined variables.

use crate::instance::{Assignment, LocalFitness, NKInstance};
use std::collections::BTreeSet;
use thiserror::Error;

/// Functions are vertices; edges require a shared variable and a zero row
/// on both sides. Edge list is sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionGraph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub adjacency: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Member function indices, ascending.
    pub functions: Vec<usize>,
    /// Union of the members' variable sets, ascending.
    pub variables: Vec<usize>,
    /// False only for isolated functions with no zero rows.
    pub has_zeros: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComponentStats {
    pub count: usize,
    /// Largest component by touched-variable count.
    pub max_variables: usize,
    /// Largest component by member-function count.
    pub max_functions: usize,
}

/// Variables a component touches beyond this bound are not enumerated;
/// callers fall back to a full SAT solve instead.
pub const DEFAULT_COMPONENT_CAP: usize = 30;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("component {component} touches {variables} variables, above the cap of {cap}")]
pub struct CapacityExceeded {
    pub component: usize,
    pub variables: usize,
    pub cap: usize,
}

/// Assignment restricted to a component's variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    /// Ascending, parallel to `values`.
    pub variables: Vec<usize>,
    pub values: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solubility {
    Soluble { witness: Assignment },
    Insoluble { reason: InsolubleReason },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsolubleReason {
    AllZeroFunction { function: usize },
    ConflictingPair { first: usize, second: usize },
    ComponentUnsat { component: usize },
    /// Established by a SAT solver on the full reduction.
    SolverUnsat,
}

impl Solubility {
    pub fn is_soluble(&self) -> bool {
        matches!(self, Solubility::Soluble { .. })
    }
}

/// Lowest-indexed function whose table is identically zero, if any.
pub fn find_all_zero_function(inst: &NKInstance) -> Option<usize> {
    inst.functions.iter().position(|f| f.is_all_zero())
}

pub fn build_connection_graph(inst: &NKInstance) -> ConnectionGraph {
    let n = inst.n;
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, f) in inst.functions.iter().enumerate() {
        if !f.has_zero() {
            continue;
        }
        for v in f.variables() {
            touching[v].push(i);
        }
    }
    let mut edge_set = BTreeSet::new();
    for list in &touching {
        for (a_pos, &a) in list.iter().enumerate() {
            for &b in &list[a_pos + 1..] {
                edge_set.insert((a, b));
            }
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    let mut adjacency = vec![Vec::new(); inst.functions.len()];
    for &(a, b) in &edges {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    ConnectionGraph { num_vertices: inst.functions.len(), edges, adjacency }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Attach the larger root index under the smaller so roots are
            // the minimum member, which keeps component order stable.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Connected components ordered by their smallest function index.
pub fn components(graph: &ConnectionGraph, inst: &NKInstance) -> (Vec<Component>, ComponentStats) {
    let n = graph.num_vertices;
    let mut uf = UnionFind::new(n);
    for &(a, b) in &graph.edges {
        uf.union(a, b);
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let root = uf.find(i);
        members[root].push(i);
    }
    let mut out = Vec::new();
    let mut stats = ComponentStats::default();
    for root in 0..n {
        if members[root].is_empty() {
            continue;
        }
        let functions = std::mem::take(&mut members[root]);
        let mut variables = BTreeSet::new();
        let mut has_zeros = false;
        for &i in &functions {
            has_zeros |= inst.functions[i].has_zero();
            variables.extend(inst.functions[i].variables());
        }
        let variables: Vec<usize> = variables.into_iter().collect();
        stats.count += 1;
        stats.max_variables = stats.max_variables.max(variables.len());
        stats.max_functions = stats.max_functions.max(functions.len());
        out.push(Component { functions, variables, has_zeros });
    }
    (out, stats)
}

/// Enumerates the component's variables in counter order: counter bit `j`
/// drives the `j`-th smallest variable, so all-false comes first. Returns
/// the first assignment making every member function 1.
pub fn solve_component(
    inst: &NKInstance,
    component: &Component,
    cap: usize,
) -> Result<Option<PartialAssignment>, CapacityExceeded> {
    let m = component.variables.len();
    if m > cap {
        return Err(CapacityExceeded { component: 0, variables: m, cap });
    }
    let mut scratch = Assignment::all_false(inst.n);
    for counter in 0u64..1 << m {
        for (j, &v) in component.variables.iter().enumerate() {
            scratch.bits[v] = (counter >> j) & 1 == 1;
        }
        if component
            .functions
            .iter()
            .all(|&i| inst.functions[i].evaluate(&scratch) == 1)
        {
            let values = component.variables.iter().map(|&v| scratch.bits[v]).collect();
            return Ok(Some(PartialAssignment {
                variables: component.variables.clone(),
                values,
            }));
        }
    }
    Ok(None)
}

/// Full decomposition pipeline: all-zero scan, then per-component
/// enumeration. Witness variables outside every solved component stay
/// false. Fails fast on the first insoluble component.
pub fn decompose_solve(inst: &NKInstance, cap: usize) -> Result<Solubility, CapacityExceeded> {
    if let Some(function) = find_all_zero_function(inst) {
        return Ok(Solubility::Insoluble {
            reason: InsolubleReason::AllZeroFunction { function },
        });
    }
    let graph = build_connection_graph(inst);
    let (comps, _) = components(&graph, inst);
    let mut witness = Assignment::all_false(inst.n);
    for (idx, comp) in comps.iter().enumerate() {
        if !comp.has_zeros {
            // Any assignment satisfies a zero-free function.
            continue;
        }
        match solve_component(inst, comp, cap) {
            Err(mut e) => {
                e.component = idx;
                return Err(e);
            }
            Ok(None) => {
                return Ok(Solubility::Insoluble {
                    reason: InsolubleReason::ComponentUnsat { component: idx },
                });
            }
            Ok(Some(partial)) => {
                for (&v, &b) in partial.variables.iter().zip(&partial.values) {
                    witness.bits[v] = b;
                }
            }
        }
    }
    debug_assert!(inst.is_solution(&witness));
    Ok(Solubility::Soluble { witness })
}

/// True when the two functions share a variable and no joint assignment of
/// their combined variables makes both 1. Checked by enumerating all
/// `2^|union|` assignments (at most `2^(2k+2)`).
pub fn is_conflicting(fi: &LocalFitness, fj: &LocalFitness) -> bool {
    let vars_i = fi.variables();
    let vars_j = fj.variables();
    let mut union: Vec<usize> = vars_i.iter().chain(&vars_j).copied().collect();
    union.sort_unstable();
    union.dedup();
    if union.len() == vars_i.len() + vars_j.len() {
        return false; // disjoint variable sets
    }
    let position = |v: usize| union.iter().position(|&u| u == v).unwrap();
    let shifts_of = |vars: &[usize]| -> Vec<(usize, usize)> {
        let k = vars.len() - 1;
        vars.iter()
            .enumerate()
            .map(|(slot, &v)| {
                let shift = if slot == 0 { k } else { k - slot };
                (position(v), shift)
            })
            .collect()
    };
    let map_i = shifts_of(&vars_i);
    let map_j = shifts_of(&vars_j);
    let row = |map: &[(usize, usize)], counter: u64| -> usize {
        map.iter()
            .map(|&(pos, shift)| (((counter >> pos) & 1) as usize) << shift)
            .sum()
    };
    for counter in 0u64..1 << union.len() {
        if fi.table[row(&map_i, counter)] == 1 && fj.table[row(&map_j, counter)] == 1 {
            return false;
        }
    }
    true
}

/// First conflicting pair in lexicographic order of (i, j), found by
/// scanning each function against the later functions sharing one of its
/// variables.
pub fn find_conflicting_pair(inst: &NKInstance) -> Option<(usize, usize)> {
    let n = inst.n;
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, f) in inst.functions.iter().enumerate() {
        for v in f.variables() {
            touching[v].push(i);
        }
    }
    for (i, fi) in inst.functions.iter().enumerate() {
        let mut partners = BTreeSet::new();
        for v in fi.variables() {
            partners.extend(touching[v].iter().copied().filter(|&j| j > i));
        }
        for j in partners {
            if is_conflicting(fi, &inst.functions[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// For instances where every function has at most one zero row, setting
/// each main variable to the complement of its bit in that row dodges every
/// zero, so the result is always a solution. Variables whose functions have
/// no zero row stay false.
pub fn complement_zero_row_witness(inst: &NKInstance) -> Assignment {
    let mut witness = Assignment::all_false(inst.n);
    for (i, f) in inst.functions.iter().enumerate() {
        if let Some(row) = f.zero_rows().next() {
            witness.bits[i] = (row >> f.k()) & 1 == 0;
        }
    }
    witness
}
