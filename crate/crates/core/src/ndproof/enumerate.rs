//! Exhaustive enumeration of small closed normal proofs.
//!
//! Normal proofs are generated in intro/elimination-spine form: a proof of
//! `A -> B` may end in an introduction, and any proof may be a hypothesis
//! applied to a sequence of minor premises. Restricting to normal proofs keeps
//! the set finite (every formula is a subformula of the conclusion).

use thiserror::Error;

use super::{Label, NdProof};
use crate::formula::Formula;

pub const MAX_ENUMERATION_SIZE: usize = 12;
pub const MAX_ENUMERATION_ATOMS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("size bound {0} exceeds the enumeration limit {MAX_ENUMERATION_SIZE}")]
    SizeBound(usize),
    #[error("target has {0} atoms, the enumeration limit is {MAX_ENUMERATION_ATOMS}")]
    TooManyAtoms(usize),
}

/// All closed normal proofs of `target` with at most `size_bound` nodes,
/// one representative per label renaming, ordered by size.
pub fn enumerate_proofs(
    target: &Formula,
    size_bound: usize,
) -> Result<Vec<NdProof>, EnumerateError> {
    if size_bound > MAX_ENUMERATION_SIZE {
        return Err(EnumerateError::SizeBound(size_bound));
    }
    let atoms = target.atoms().len();
    if atoms > MAX_ENUMERATION_ATOMS {
        return Err(EnumerateError::TooManyAtoms(atoms));
    }
    let mut out = Vec::new();
    let mut ctx = Vec::new();
    for size in 1..=size_bound {
        for p in exact(&mut ctx, target, size) {
            out.push(p.canonical_labels());
        }
    }
    Ok(out)
}

/// Normal proofs of `goal` from hypotheses `ctx` with exactly `size` nodes.
/// Hypotheses are labelled by their position in `ctx`.
fn exact(ctx: &mut Vec<Formula>, goal: &Formula, size: usize) -> Vec<NdProof> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    if let Some((a, b)) = goal.as_implication() {
        if size >= 2 {
            let label = ctx.len() as Label + 1;
            ctx.push(a.clone());
            for body in exact(ctx, b, size - 1) {
                out.push(NdProof::intro(a.clone(), label, body));
            }
            ctx.pop();
        }
    }
    for idx in 0..ctx.len() {
        let hyp = ctx[idx].clone();
        let label = idx as Label + 1;
        // peel hyp = A1 -> ... -> Ak -> goal
        let mut minors: Vec<Formula> = Vec::new();
        let mut rest = &hyp;
        loop {
            if rest == goal {
                let k = minors.len();
                if size == 1 + k {
                    if k == 0 {
                        out.push(NdProof::hyp(hyp.clone(), label));
                    }
                } else if size > 1 + k && k > 0 {
                    for args in spread(ctx, &minors, size - 1 - k) {
                        let mut spine = NdProof::hyp(hyp.clone(), label);
                        for arg in args {
                            spine = NdProof::elim(spine, arg);
                        }
                        out.push(spine);
                    }
                }
            }
            match rest.as_implication() {
                Some((a, b)) => {
                    minors.push(a.clone());
                    rest = b;
                }
                None => break,
            }
        }
    }
    out
}

/// Every way of proving each of `goals` so that the sizes sum to `total`.
fn spread(ctx: &mut Vec<Formula>, goals: &[Formula], total: usize) -> Vec<Vec<NdProof>> {
    let Some((first, rest)) = goals.split_first() else {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    };
    let mut out = Vec::new();
    // each remaining goal needs at least one node
    for s in 1..=total.saturating_sub(rest.len()) {
        let heads = exact(ctx, first, s);
        if heads.is_empty() {
            continue;
        }
        let tails = spread(ctx, rest, total - s);
        for h in &heads {
            for t in &tails {
                let mut v = Vec::with_capacity(goals.len());
                v.push(h.clone());
                v.extend(t.iter().cloned());
                out.push(v);
            }
        }
    }
    out
}
