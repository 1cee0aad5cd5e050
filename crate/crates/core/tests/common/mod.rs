#![allow(dead_code)]

use std::collections::BTreeSet;

use dagcert::formula::Formula;

/// Every formula with exactly `size` nodes over `atoms`.
pub fn all_formulas(atoms: &[&str], size: usize) -> Vec<Formula> {
    if size == 0 || size.is_multiple_of(2) {
        return Vec::new();
    }
    if size == 1 {
        return atoms.iter().map(|a| Formula::atom(a)).collect();
    }
    let mut out = Vec::new();
    for left in (1..size - 1).step_by(2) {
        for a in all_formulas(atoms, left) {
            for b in all_formulas(atoms, size - 1 - left) {
                out.push(Formula::implies(a.clone(), b));
            }
        }
    }
    out
}

/// Smallest cut-free derivation of `ctx |- goal`, measured in natural
/// deduction nodes. A left rule on `A1 -> ... -> Ak -> goal` costs one
/// hypothesis node, `k` eliminations, and the derivations of each `Ai`.
pub fn min_derivation(ctx: &BTreeSet<Formula>, goal: &Formula, budget: usize) -> Option<usize> {
    if budget == 0 {
        return None;
    }
    if ctx.contains(goal) {
        return Some(1);
    }
    let mut best: Option<usize> = None;
    let consider = |cost: usize, best: &mut Option<usize>| {
        if best.is_none_or(|b| cost < b) {
            *best = Some(cost);
        }
    };
    if let Some((a, b)) = goal.as_implication() {
        let mut wider = ctx.clone();
        wider.insert(a.clone());
        if let Some(s) = min_derivation(&wider, b, budget - 1) {
            consider(1 + s, &mut best);
        }
    }
    for h in ctx {
        let mut args: Vec<&Formula> = Vec::new();
        let mut rest = h;
        while let Some((a, b)) = rest.as_implication() {
            args.push(a);
            rest = b;
            if rest == goal {
                let limit = best.map_or(budget, |b| b.min(budget));
                let mut total = 1 + args.len();
                let mut ok = true;
                for arg in &args {
                    if total >= limit {
                        ok = false;
                        break;
                    }
                    match min_derivation(ctx, arg, limit - total) {
                        Some(s) => total += s,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok && total <= limit {
                    consider(total, &mut best);
                }
            }
        }
    }
    best
}
