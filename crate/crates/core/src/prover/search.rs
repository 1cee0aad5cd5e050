//! Backward proof search in a contraction-free sequent calculus for
//! implication. Contexts are sorted sets of interned formula ids; the goal is a
//! single formula.
//!
//! Rules, read bottom-up:
//!
//! ```text
//! Ax    G, A |- A
//! R->   G, A |- B            gives  G |- A -> B
//! L0->  G, p, B |- H         gives  G, p, p -> B |- H        (p an atom)
//! L->-> G, D -> E, C |- D    and  G, E |- H
//!                            gives  G, (C -> D) -> E |- H
//! ```
//!
//! `Ax`, `R->`, `L0->` and the right premise of `L->->` are invertible, so only
//! the choice of `L->->` principal formula backtracks.

use std::collections::HashMap;
use std::sync::Arc;

use crate::intern::{FormulaId, FormulaTable, Shape};

#[derive(Debug)]
pub(crate) enum Deriv {
    Ax {
        goal: FormulaId,
    },
    RImp {
        antecedent: FormulaId,
        goal: FormulaId,
        sub: Arc<Deriv>,
    },
    L0 {
        imp: FormulaId,
        atom: FormulaId,
        consequent: FormulaId,
        sub: Arc<Deriv>,
    },
    LImp {
        principal: FormulaId,
        c: FormulaId,
        d: FormulaId,
        d_to_e: FormulaId,
        e: FormulaId,
        left: Arc<Deriv>,
        right: Arc<Deriv>,
    },
}

/// A failed sequent: the atoms of its context, and countermodels for the
/// left premises that failed.
#[derive(Debug)]
pub(crate) struct ModelTree {
    pub atoms: Vec<u32>,
    pub children: Vec<Arc<ModelTree>>,
}

pub(crate) type Outcome = Result<Arc<Deriv>, Arc<ModelTree>>;

enum Step {
    R(FormulaId, FormulaId),
    L0(FormulaId, FormulaId, FormulaId),
}

/// Depth of the cheap lookahead used to rank principal formulas.
const LOOKAHEAD: u32 = 16;
/// Contexts larger than this are not memoized.
const MEMO_CONTEXT: usize = 64;

pub(crate) struct Search<'t> {
    table: &'t mut FormulaTable,
    memo: HashMap<(Vec<FormulaId>, FormulaId), Outcome>,
}

impl<'t> Search<'t> {
    pub fn new(table: &'t mut FormulaTable) -> Search<'t> {
        Search {
            table,
            memo: HashMap::new(),
        }
    }

    pub fn prove(&mut self, mut ctx: Vec<FormulaId>, mut goal: FormulaId) -> Outcome {
        ctx.sort_unstable();
        ctx.dedup();
        let mut steps = Vec::new();
        let core = loop {
            if contains(&ctx, goal) {
                break Ok(Arc::new(Deriv::Ax { goal }));
            }
            if let Shape::Implies(a, b) = self.table.shape(goal) {
                steps.push(Step::R(a, goal));
                insert(&mut ctx, a);
                goal = b;
                continue;
            }
            if let Some((imp, p, b)) = self.find_l0(&ctx) {
                steps.push(Step::L0(imp, p, b));
                remove(&mut ctx, imp);
                insert(&mut ctx, b);
                continue;
            }
            break self.branch(ctx, goal);
        };
        core.map(|d| {
            steps.into_iter().rev().fold(d, |sub, step| {
                Arc::new(match step {
                    Step::R(antecedent, goal) => Deriv::RImp {
                        antecedent,
                        goal,
                        sub,
                    },
                    Step::L0(imp, atom, consequent) => Deriv::L0 {
                        imp,
                        atom,
                        consequent,
                        sub,
                    },
                })
            })
        })
    }

    fn find_l0(&self, ctx: &[FormulaId]) -> Option<(FormulaId, FormulaId, FormulaId)> {
        ctx.iter().find_map(|&f| match self.table.shape(f) {
            Shape::Implies(p, b) if self.table.is_atom(p) && contains(ctx, p) => Some((f, p, b)),
            _ => None,
        })
    }

    fn branch(&mut self, ctx: Vec<FormulaId>, goal: FormulaId) -> Outcome {
        let key = (ctx.len() <= MEMO_CONTEXT).then(|| (ctx.clone(), goal));
        if let Some(k) = &key {
            if let Some(hit) = self.memo.get(k) {
                return hit.clone();
            }
        }
        let mut candidates: Vec<(u32, FormulaId, FormulaId, FormulaId, FormulaId)> = Vec::new();
        for &f in &ctx {
            if let Shape::Implies(cd, e) = self.table.shape(f) {
                if let Shape::Implies(c, d) = self.table.shape(cd) {
                    let cost = u32::from(!self.closes(&ctx, c, d, LOOKAHEAD))
                        + u32::from(!self.closes(&ctx, e, goal, LOOKAHEAD));
                    candidates.push((cost, f, c, d, e));
                }
            }
        }
        candidates.sort_unstable();
        let mut failures = Vec::new();
        let mut result = None;
        for (_, f, c, d, e) in candidates {
            let d_to_e = self.table.implies(d, e);
            let mut left_ctx = ctx.clone();
            remove(&mut left_ctx, f);
            insert(&mut left_ctx, d_to_e);
            insert(&mut left_ctx, c);
            let left = match self.prove(left_ctx, d) {
                Ok(l) => l,
                Err(m) => {
                    failures.push(m);
                    continue;
                }
            };
            let mut right_ctx = ctx.clone();
            remove(&mut right_ctx, f);
            insert(&mut right_ctx, e);
            result = Some(self.prove(right_ctx, goal).map(|right| {
                Arc::new(Deriv::LImp {
                    principal: f,
                    c,
                    d,
                    d_to_e,
                    e,
                    left,
                    right,
                })
            }));
            break;
        }
        let outcome = result.unwrap_or_else(|| {
            Err(Arc::new(ModelTree {
                atoms: ctx
                    .iter()
                    .filter_map(|&f| match self.table.shape(f) {
                        Shape::Atom(a) => Some(a),
                        Shape::Implies(..) => None,
                    })
                    .collect(),
                children: failures,
            }))
        });
        if let Some(k) = key {
            self.memo.insert(k, outcome.clone());
        }
        outcome
    }

    /// Cheap sufficient test for `ctx, extra |- goal`.
    fn closes(&self, ctx: &[FormulaId], extra: FormulaId, goal: FormulaId, depth: u32) -> bool {
        if extra == goal || contains(ctx, goal) {
            return true;
        }
        if depth == 0 {
            return false;
        }
        match self.table.shape(extra) {
            Shape::Implies(a, b) => {
                self.derivable(ctx, a, depth - 1) && self.closes(ctx, b, goal, depth - 1)
            }
            Shape::Atom(_) => self
                .table
                .find_implies(extra, goal)
                .is_some_and(|f| contains(ctx, f)),
        }
    }

    fn derivable(&self, ctx: &[FormulaId], h: FormulaId, depth: u32) -> bool {
        if contains(ctx, h) {
            return true;
        }
        match self.table.shape(h) {
            Shape::Implies(x, y) if depth > 0 => self.closes(ctx, x, y, depth - 1),
            _ => false,
        }
    }
}

fn contains(ctx: &[FormulaId], f: FormulaId) -> bool {
    ctx.binary_search(&f).is_ok()
}

fn insert(ctx: &mut Vec<FormulaId>, f: FormulaId) {
    if let Err(i) = ctx.binary_search(&f) {
        ctx.insert(i, f);
    }
}

fn remove(ctx: &mut Vec<FormulaId>, f: FormulaId) {
    if let Ok(i) = ctx.binary_search(&f) {
        ctx.remove(i);
    }
}
