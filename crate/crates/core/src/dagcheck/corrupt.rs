//! Seeded single mutations of certificates, for negative testing.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::compression::{DagProof, Role};
use crate::intern::{FormulaId, Shape};
use crate::ndproof::Rule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutationKind {
    /// Swap the major and minor premise edges of one elimination.
    RoleSwap,
    /// Change one node's formula to a different subformula of the conclusion.
    Relabel,
    /// Give one discharging introduction a fresh label.
    DropDischarge,
    /// Point one edge at a different node of the same level and another formula.
    Rewire,
}

pub const ALL_MUTATIONS: [MutationKind; 4] = [
    MutationKind::RoleSwap,
    MutationKind::Relabel,
    MutationKind::DropDischarge,
    MutationKind::Rewire,
];

impl MutationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MutationKind::RoleSwap => "role_swap",
            MutationKind::Relabel => "relabel",
            MutationKind::DropDischarge => "drop_discharge",
            MutationKind::Rewire => "rewire",
        }
    }

    pub fn all() -> [MutationKind; 4] {
        ALL_MUTATIONS
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MutationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<MutationKind, String> {
        ALL_MUTATIONS
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown mutation `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorruptError {
    #[error("certificate has no site for a {0} mutation")]
    NoMutationSite(MutationKind),
}

pub fn corrupt(d: &DagProof, seed: u64, kind: MutationKind) -> Result<DagProof, CorruptError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = d.clone();
    let none = CorruptError::NoMutationSite(kind);
    let n = d.nodes.len();
    match kind {
        MutationKind::RoleSwap => {
            let sites: Vec<usize> = (0..n)
                .filter(|&v| {
                    d.nodes[v].rule == Rule::ImpElim
                        && d.edges
                            .iter()
                            .any(|e| e.parent == v && e.role == Role::Major)
                        && d.edges
                            .iter()
                            .any(|e| e.parent == v && e.role == Role::Minor)
                })
                .collect();
            let &v = sites.choose(&mut rng).ok_or(none)?;
            for e in out.edges.iter_mut().filter(|e| e.parent == v) {
                e.role = match e.role {
                    Role::Major => Role::Minor,
                    Role::Minor => Role::Major,
                    Role::Sole => Role::Sole,
                };
            }
        }
        MutationKind::Relabel => {
            let subs = conclusion_subformulas(d);
            let sites: Vec<usize> = (0..n)
                .filter(|&v| subs.iter().any(|&s| s != d.nodes[v].formula))
                .collect();
            let &v = sites.choose(&mut rng).ok_or(none)?;
            let choices: Vec<FormulaId> = subs
                .into_iter()
                .filter(|&s| s != d.nodes[v].formula)
                .collect();
            out.nodes[v].formula = *choices.choose(&mut rng).expect("site has a choice");
        }
        MutationKind::DropDischarge => {
            let used: std::collections::HashSet<_> = d
                .nodes
                .iter()
                .filter_map(|x| match x.rule {
                    Rule::Hyp(l) => Some(l),
                    _ => None,
                })
                .collect();
            let sites: Vec<usize> = (0..n)
                .filter(|&v| matches!(d.nodes[v].rule, Rule::ImpIntro(l) if used.contains(&l)))
                .collect();
            let &v = sites.choose(&mut rng).ok_or(none)?;
            let fresh = d
                .nodes
                .iter()
                .filter_map(|x| x.rule.label())
                .max()
                .unwrap_or(0)
                + 1;
            out.nodes[v].rule = Rule::ImpIntro(fresh);
        }
        MutationKind::Rewire => {
            let targets = |i: usize| -> Vec<usize> {
                let e = d.edges[i];
                if e.child >= n {
                    return Vec::new();
                }
                let c = d.nodes[e.child];
                (0..n)
                    .filter(|&w| d.nodes[w].level == c.level && d.nodes[w].formula != c.formula)
                    .collect()
            };
            let sites: Vec<usize> = (0..d.edges.len())
                .filter(|&i| !targets(i).is_empty())
                .collect();
            let &i = sites.choose(&mut rng).ok_or(none)?;
            out.edges[i].child = *targets(i).choose(&mut rng).expect("site has a target");
        }
    }
    out.edges.sort();
    Ok(out)
}

fn conclusion_subformulas(d: &DagProof) -> Vec<FormulaId> {
    let Some(root) = d.nodes.get(d.root) else {
        return Vec::new();
    };
    if root.formula as usize >= d.table.len() {
        return Vec::new();
    }
    let mut seen = vec![false; d.table.len()];
    let mut stack = vec![root.formula];
    while let Some(f) = stack.pop() {
        if std::mem::replace(&mut seen[f as usize], true) {
            continue;
        }
        if let Shape::Implies(a, b) = d.table.shape(f) {
            stack.push(a);
            stack.push(b);
        }
    }
    (0..d.table.len() as FormulaId)
        .filter(|&f| seen[f as usize])
        .collect()
}
