//! Hamiltonicity encoding of a graph and its implication-only translation.
//!
//! `encode_alpha` produces the positional CNF: variable `x_i_v` means "position
//! `i` of the cycle holds vertex `v`". `translate_beta` maps it into the
//! implicational fragment with the fresh atom `q` standing for absurdity, and
//! returns `T(alpha) -> q`, which is valid exactly when the graph has no
//! Hamiltonian cycle.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Formula, ABSURDITY};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassicalFormula {
    Var { position: usize, vertex: usize },
    Not(Box<ClassicalFormula>),
    And(Vec<ClassicalFormula>),
    Or(Vec<ClassicalFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("assignment has no value for x_{position}_{vertex}")]
    MissingVariable { position: usize, vertex: usize },
}

pub type Assignment = BTreeMap<(usize, usize), bool>;

use ClassicalFormula::*;

fn var(position: usize, vertex: usize) -> ClassicalFormula {
    Var { position, vertex }
}

fn neg(f: ClassicalFormula) -> ClassicalFormula {
    Not(Box::new(f))
}

pub fn variable_name(position: usize, vertex: usize) -> String {
    format!("x_{position}_{vertex}")
}

/// Conjunction of clause groups, in this order:
/// every position holds a vertex, no position holds two, every vertex has a
/// position, no vertex has two, and consecutive positions (cyclically) hold
/// adjacent vertices.
pub fn encode_alpha(g: &Graph) -> ClassicalFormula {
    let n = g.n();
    let mut clauses = Vec::new();
    for i in 0..n {
        clauses.push(Or((0..n).map(|v| var(i, v)).collect()));
    }
    for i in 0..n {
        for u in 0..n {
            for v in u + 1..n {
                clauses.push(Or(vec![neg(var(i, u)), neg(var(i, v))]));
            }
        }
    }
    for v in 0..n {
        clauses.push(Or((0..n).map(|i| var(i, v)).collect()));
    }
    for v in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                clauses.push(Or(vec![neg(var(i, v)), neg(var(j, v))]));
            }
        }
    }
    for i in 0..n {
        let next = (i + 1) % n;
        for u in 0..n {
            for v in 0..n {
                if u != v && !g.adjacent(u, v) {
                    clauses.push(Or(vec![neg(var(i, u)), neg(var(next, v))]));
                }
            }
        }
    }
    And(clauses)
}

pub fn eval_classical(f: &ClassicalFormula, assignment: &Assignment) -> Result<bool, EvalError> {
    Ok(match f {
        Var { position, vertex } => {
            *assignment
                .get(&(*position, *vertex))
                .ok_or(EvalError::MissingVariable {
                    position: *position,
                    vertex: *vertex,
                })?
        }
        Not(inner) => !eval_classical(inner, assignment)?,
        And(items) => {
            let mut all = true;
            for item in items {
                all &= eval_classical(item, assignment)?;
            }
            all
        }
        Or(items) => {
            let mut any = false;
            for item in items {
                any |= eval_classical(item, assignment)?;
            }
            any
        }
    })
}

/// Brute force over all `2^(n*n)` assignments. Only meant for tiny graphs.
pub fn brute_force_satisfiable(g: &Graph) -> bool {
    let n = g.n();
    let vars = n * n;
    assert!(vars <= 25, "brute force limited to n <= 5");
    let alpha = encode_alpha(g);
    (0u64..(1 << vars)).any(|mask| {
        let assignment: Assignment = (0..vars)
            .map(|k| ((k / n, k % n), mask & (1 << k) != 0))
            .collect();
        eval_classical(&alpha, &assignment).expect("total assignment")
    })
}

/// The q-translation of a classical formula into the implicational fragment.
pub fn translate(f: &ClassicalFormula) -> Formula {
    let q = Formula::atom(ABSURDITY);
    translate_with(f, &q)
}

fn translate_with(f: &ClassicalFormula, q: &Formula) -> Formula {
    let not = |a: Formula| Formula::implies(a, q.clone());
    match f {
        Var { position, vertex } => Formula::atom(&variable_name(*position, *vertex)),
        Not(inner) => not(translate_with(inner, q)),
        And(items) => fold(items, q, |a, b| not(Formula::implies(a, not(b)))),
        Or(items) => fold(items, q, |a, b| Formula::implies(not(a), not(not(b)))),
    }
}

fn fold(
    items: &[ClassicalFormula],
    q: &Formula,
    combine: impl Fn(Formula, Formula) -> Formula,
) -> Formula {
    let mut iter = items.iter();
    let first = translate_with(iter.next().expect("nonempty connective"), q);
    iter.fold(first, |acc, item| combine(acc, translate_with(item, q)))
}

/// `T(encode_alpha(g)) -> q`.
pub fn translate_beta(g: &Graph) -> Formula {
    Formula::implies(translate(&encode_alpha(g)), Formula::atom(ABSURDITY))
}
