//! Seeded random test material: formulas, closed normal proofs, and
//! arbitrary (mostly invalid) proof DAGs.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::compression::{DagNode, DagProof, Edge, Mode, Role};
use crate::formula::Formula;
use crate::intern::FormulaTable;
use crate::ndproof::{Label, NdProof, Rule};

/// A uniformly shaped random formula with `size` nodes (rounded down to odd).
pub fn random_formula(rng: &mut impl Rng, atoms: &[&str], size: usize) -> Formula {
    let size = if size.is_multiple_of(2) {
        size.saturating_sub(1).max(1)
    } else {
        size
    };
    if size == 1 {
        return Formula::atom(atoms.choose(rng).expect("at least one atom"));
    }
    let left = 2 * rng.gen_range(0..(size - 1) / 2) + 1;
    let a = random_formula(rng, atoms, left);
    let b = random_formula(rng, atoms, size - 1 - left);
    Formula::implies(a, b)
}

struct ProofSearch<'r, R: Rng> {
    rng: &'r mut R,
    calls: usize,
    next_label: Label,
}

const SEARCH_CALLS: usize = 4000;

impl<R: Rng> ProofSearch<'_, R> {
    /// A random normal proof of `goal` from `ctx` with at most `budget` nodes.
    fn search(
        &mut self,
        ctx: &mut Vec<(Formula, Label)>,
        goal: &Formula,
        budget: usize,
    ) -> Option<NdProof> {
        self.calls += 1;
        if budget == 0 || self.calls > SEARCH_CALLS {
            return None;
        }
        // candidate moves: None = introduction, Some(i) = spine on ctx[i]
        let mut moves: Vec<Option<usize>> = Vec::new();
        if goal.as_implication().is_some() {
            moves.push(None);
            moves.push(None);
        }
        for (i, (h, _)) in ctx.iter().enumerate() {
            if spine_to(h, goal).is_some() {
                moves.push(Some(i));
            }
        }
        moves.shuffle(self.rng);
        for mv in moves {
            let found = match mv {
                None => {
                    let (a, b) = goal.as_implication().expect("implication goal");
                    let label = self.next_label;
                    self.next_label += 1;
                    ctx.push((a.clone(), label));
                    let body = self.search(ctx, b, budget - 1);
                    ctx.pop();
                    body.map(|body| NdProof::intro(a.clone(), label, body))
                }
                Some(i) => {
                    let (h, label) = ctx[i].clone();
                    let args = spine_to(&h, goal).expect("spine candidate");
                    let Some(mut remaining) = budget.checked_sub(1 + args.len()) else {
                        continue;
                    };
                    let mut spine = NdProof::hyp(h, label);
                    let mut complete = true;
                    for arg in &args {
                        match self.search(ctx, arg, remaining) {
                            Some(p) => {
                                remaining -= p.size();
                                spine = NdProof::elim(spine, p);
                            }
                            None => {
                                complete = false;
                                break;
                            }
                        }
                    }
                    complete.then_some(spine)
                }
            };
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Antecedents `A1 .. Ak` if `h = A1 -> ... -> Ak -> goal`.
fn spine_to(h: &Formula, goal: &Formula) -> Option<Vec<Formula>> {
    let mut args = Vec::new();
    let mut rest = h;
    loop {
        if rest == goal {
            return Some(args);
        }
        let (a, b) = rest.as_implication()?;
        args.push(a.clone());
        rest = b;
    }
}

/// A random closed normal proof with canonical labels and at most
/// `max_size` nodes.
pub fn random_proof(rng: &mut impl Rng, max_size: usize) -> NdProof {
    loop {
        let size = 2 * rng.gen_range(1..=6) + 1;
        let target = random_formula(rng, &["p", "q", "r"], size);
        let mut s = ProofSearch {
            rng: &mut *rng,
            calls: 0,
            next_label: 1,
        };
        if let Some(p) = s.search(&mut Vec::new(), &target, max_size) {
            if p.size() <= max_size {
                return p.canonical_labels();
            }
        }
    }
}

pub fn random_proof_corpus(seed: u64, count: usize, max_size: usize) -> Vec<NdProof> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_proof(&mut rng, max_size))
        .collect()
}

/// A random leveled DAG over subformulas of a random conclusion. Levels and
/// edge roles fit node rules, but formulas and labels are arbitrary, so most
/// of these are rejected by the checker.
pub fn random_dag(rng: &mut impl Rng, max_nodes: usize) -> DagProof {
    let size = 2 * rng.gen_range(1..=4) + 1;
    let target = random_formula(rng, &["p", "q"], size);
    let mut table = FormulaTable::new();
    let root_formula = table.intern(&target);
    let pool: Vec<u32> = target
        .subformulas()
        .iter()
        .map(|f| table.intern(f))
        .collect();
    let labels: Label = rng.gen_range(1..=3);
    let mut nodes = vec![DagNode {
        formula: root_formula,
        rule: Rule::ImpIntro(1),
        level: 0,
    }];
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut level = 0;
    while !frontier.is_empty() && nodes.len() < max_nodes {
        level += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            let wanted: &[Role] = match nodes[v].rule {
                Rule::Hyp(_) => &[],
                Rule::ImpIntro(_) => &[Role::Sole],
                Rule::ImpElim => &[Role::Major, Role::Minor],
            };
            for &role in wanted {
                let reuse = !next.is_empty() && rng.gen_bool(0.3);
                let child = if reuse || nodes.len() >= max_nodes {
                    match next.choose(rng) {
                        Some(&c) => c,
                        None => continue,
                    }
                } else {
                    let rule = match rng.gen_range(0..3) {
                        0 => Rule::Hyp(rng.gen_range(1..=labels)),
                        1 => Rule::ImpIntro(rng.gen_range(1..=labels)),
                        _ => Rule::ImpElim,
                    };
                    nodes.push(DagNode {
                        formula: *pool.choose(rng).expect("nonempty pool"),
                        rule,
                        level,
                    });
                    next.push(nodes.len() - 1);
                    nodes.len() - 1
                };
                edges.push(Edge {
                    parent: v,
                    role,
                    child,
                });
            }
        }
        frontier = next;
    }
    edges.sort();
    edges.dedup();
    let mode = if rng.gen_bool(0.5) {
        Mode::Subtree
    } else {
        Mode::Label
    };
    DagProof {
        table,
        nodes,
        edges,
        root: 0,
        mode,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proofs_are_closed_normal_and_small() {
        for p in random_proof_corpus(1, 200, 60) {
            let c = p.check().unwrap();
            assert!(c.is_closed());
            assert!(p.is_normal().unwrap());
            assert!(p.size() <= 60);
            assert_eq!(p, p.canonical_labels());
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(
            random_proof_corpus(9, 20, 60),
            random_proof_corpus(9, 20, 60)
        );
    }

    #[test]
    fn random_formula_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for size in [1, 3, 7, 15] {
            assert_eq!(random_formula(&mut rng, &["p"], size).node_count(), size);
        }
    }
}
