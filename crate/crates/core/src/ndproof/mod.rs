//! Tree-shaped natural deduction for implicational logic.
//!
//! Two rules: `->`-introduction, which discharges every hypothesis leaf
//! carrying its label (possibly none), and `->`-elimination with the major
//! premise first.

mod enumerate;
mod serial;

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

pub use enumerate::{
    enumerate_proofs, EnumerateError, MAX_ENUMERATION_ATOMS, MAX_ENUMERATION_SIZE,
};
pub use serial::{parse_proof, SerialError};

pub type Label = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Hyp(Label),
    ImpIntro(Label),
    ImpElim,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Hyp(_) => "hyp",
            Rule::ImpIntro(_) => "intro",
            Rule::ImpElim => "elim",
        }
    }

    pub fn label(&self) -> Option<Label> {
        match *self {
            Rule::Hyp(l) | Rule::ImpIntro(l) => Some(l),
            Rule::ImpElim => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NdProof {
    pub formula: Formula,
    pub rule: Rule,
    pub premises: Vec<NdProof>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeErrorKind {
    RuleShape,
    FormulaMismatch,
    DuplicateLabel,
    DanglingLabel,
}

/// Check failure at a node. `path` lists premise indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind:?} at {}: {message}", display_path(path))]
pub struct TreeError {
    pub kind: TreeErrorKind,
    pub path: Vec<usize>,
    pub message: String,
}

fn display_path(path: &[usize]) -> String {
    let mut s = String::from("root");
    for p in path {
        s.push('.');
        s.push_str(&p.to_string());
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedTree {
    pub conclusion: Formula,
    /// Formulas of undischarged hypothesis leaves, with multiplicity, sorted.
    pub open_assumptions: Vec<Formula>,
}

impl CheckedTree {
    pub fn is_closed(&self) -> bool {
        self.open_assumptions.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub height: usize,
    pub size: usize,
}

impl NdProof {
    pub fn new(formula: Formula, rule: Rule, premises: Vec<NdProof>) -> NdProof {
        NdProof {
            formula,
            rule,
            premises,
        }
    }

    pub fn hyp(formula: Formula, label: Label) -> NdProof {
        NdProof::new(formula, Rule::Hyp(label), vec![])
    }

    /// Discharges `label` (assumption `antecedent`) over `body`.
    pub fn intro(antecedent: Formula, label: Label, body: NdProof) -> NdProof {
        let formula = Formula::implies(antecedent, body.formula.clone());
        NdProof::new(formula, Rule::ImpIntro(label), vec![body])
    }

    /// Eliminates `major: A -> B` against `minor: A`. Panics if `major` does
    /// not conclude an implication.
    pub fn elim(major: NdProof, minor: NdProof) -> NdProof {
        let (_, b) = major
            .formula
            .as_implication()
            .expect("major premise must be an implication");
        NdProof::new(b.clone(), Rule::ImpElim, vec![major, minor])
    }

    pub fn conclusion(&self) -> &Formula {
        &self.formula
    }

    /// Preorder traversal.
    pub fn nodes(&self) -> Vec<&NdProof> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            out.push(p);
            for c in p.premises.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            count += 1;
            stack.extend(p.premises.iter());
        }
        count
    }

    /// Height counts rule applications on the longest branch, so a lone
    /// hypothesis has height 0.
    pub fn metrics(&self) -> Metrics {
        let mut height = 0;
        let mut size = 0;
        let mut stack = vec![(self, 0usize)];
        while let Some((p, depth)) = stack.pop() {
            size += 1;
            height = height.max(depth);
            for c in &p.premises {
                stack.push((c, depth + 1));
            }
        }
        Metrics { height, size }
    }

    pub fn check(&self) -> Result<CheckedTree, TreeError> {
        check_tree(self)
    }

    pub fn is_normal(&self) -> Result<bool, TreeError> {
        is_normal(self)
    }

    /// Renames labels so that introductions are numbered 1, 2, ... in preorder
    /// and free hypothesis labels continue the same counter at first use.
    /// Two proofs are equal up to label renaming iff their canonical forms are equal.
    pub fn canonical_labels(&self) -> NdProof {
        let mut next = 1;
        let mut free = HashMap::new();
        let mut scope: HashMap<Label, Vec<Label>> = HashMap::new();
        relabel(self, &mut next, &mut scope, &mut free)
    }

    pub fn alpha_eq(&self, other: &NdProof) -> bool {
        self.canonical_labels() == other.canonical_labels()
    }

    /// Applies `f` to every label, preserving structure.
    pub fn map_labels(&self, f: &impl Fn(Label) -> Label) -> NdProof {
        let rule = match self.rule {
            Rule::Hyp(l) => Rule::Hyp(f(l)),
            Rule::ImpIntro(l) => Rule::ImpIntro(f(l)),
            Rule::ImpElim => Rule::ImpElim,
        };
        NdProof::new(
            self.formula.clone(),
            rule,
            self.premises.iter().map(|p| p.map_labels(f)).collect(),
        )
    }

    pub fn to_text(&self) -> String {
        serial::write_proof(self)
    }
}

fn relabel(
    p: &NdProof,
    next: &mut Label,
    scope: &mut HashMap<Label, Vec<Label>>,
    free: &mut HashMap<Label, Label>,
) -> NdProof {
    match p.rule {
        Rule::Hyp(l) => {
            let mapped = match scope.get(&l).and_then(|s| s.last()) {
                Some(&m) => m,
                None => *free.entry(l).or_insert_with(|| {
                    let m = *next;
                    *next += 1;
                    m
                }),
            };
            NdProof::hyp(p.formula.clone(), mapped)
        }
        Rule::ImpIntro(l) => {
            let fresh = *next;
            *next += 1;
            scope.entry(l).or_default().push(fresh);
            let premises = p
                .premises
                .iter()
                .map(|c| relabel(c, next, scope, free))
                .collect();
            scope.get_mut(&l).expect("pushed").pop();
            NdProof::new(p.formula.clone(), Rule::ImpIntro(fresh), premises)
        }
        Rule::ImpElim => NdProof::new(
            p.formula.clone(),
            Rule::ImpElim,
            p.premises
                .iter()
                .map(|c| relabel(c, next, scope, free))
                .collect(),
        ),
    }
}

impl fmt::Debug for NdProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule.label() {
            Some(l) => write!(f, "{}^{}", self.rule.tag(), l)?,
            None => write!(f, "{}", self.rule.tag())?,
        }
        if !self.premises.is_empty() {
            f.debug_list().entries(&self.premises).finish()?;
        }
        write!(f, " : {}", self.formula)
    }
}

fn err(kind: TreeErrorKind, path: &[usize], message: impl Into<String>) -> TreeError {
    TreeError {
        kind,
        path: path.to_vec(),
        message: message.into(),
    }
}

/// Verifies every rule application and discharge, returning the conclusion
/// and the open assumptions.
pub fn check_tree(p: &NdProof) -> Result<CheckedTree, TreeError> {
    // first pass: introduction labels must be pairwise distinct
    let mut intro_labels: HashSet<Label> = HashSet::new();
    let mut stack = vec![(p, Vec::new())];
    while let Some((node, path)) = stack.pop() {
        if let Rule::ImpIntro(l) = node.rule {
            if !intro_labels.insert(l) {
                return Err(err(
                    TreeErrorKind::DuplicateLabel,
                    &path,
                    format!("label {l} discharged by more than one introduction"),
                ));
            }
        }
        for (i, c) in node.premises.iter().enumerate() {
            let mut cp = path.clone();
            cp.push(i);
            stack.push((c, cp));
        }
    }

    let mut open = Vec::new();
    let mut scope: HashMap<Label, &Formula> = HashMap::new();
    let mut path = Vec::new();
    check_node(p, &intro_labels, &mut scope, &mut path, &mut open)?;
    open.sort();
    Ok(CheckedTree {
        conclusion: p.formula.clone(),
        open_assumptions: open,
    })
}

fn check_node<'a>(
    node: &'a NdProof,
    intro_labels: &HashSet<Label>,
    scope: &mut HashMap<Label, &'a Formula>,
    path: &mut Vec<usize>,
    open: &mut Vec<Formula>,
) -> Result<(), TreeError> {
    let arity = match node.rule {
        Rule::Hyp(_) => 0,
        Rule::ImpIntro(_) => 1,
        Rule::ImpElim => 2,
    };
    if node.premises.len() != arity {
        return Err(err(
            TreeErrorKind::RuleShape,
            path,
            format!(
                "{} expects {arity} premises, found {}",
                node.rule.tag(),
                node.premises.len()
            ),
        ));
    }
    match node.rule {
        Rule::Hyp(l) => match scope.get(&l) {
            Some(&a) => {
                if *a != node.formula {
                    return Err(err(
                        TreeErrorKind::FormulaMismatch,
                        path,
                        format!("hypothesis {} discharged as {}", node.formula, a),
                    ));
                }
            }
            None if intro_labels.contains(&l) => {
                return Err(err(
                    TreeErrorKind::DanglingLabel,
                    path,
                    format!("label {l} is discharged by an introduction that is not an ancestor"),
                ));
            }
            None => open.push(node.formula.clone()),
        },
        Rule::ImpIntro(l) => {
            let Some((a, b)) = node.formula.as_implication() else {
                return Err(err(
                    TreeErrorKind::RuleShape,
                    path,
                    format!("introduction concludes non-implication {}", node.formula),
                ));
            };
            if *b != node.premises[0].formula {
                return Err(err(
                    TreeErrorKind::FormulaMismatch,
                    path,
                    format!(
                        "introduction of {} over premise {}",
                        node.formula, node.premises[0].formula
                    ),
                ));
            }
            scope.insert(l, a);
            path.push(0);
            let r = check_node(&node.premises[0], intro_labels, scope, path, open);
            path.pop();
            scope.remove(&l);
            r?;
        }
        Rule::ImpElim => {
            let major = &node.premises[0];
            let minor = &node.premises[1];
            let Some((a, b)) = major.formula.as_implication() else {
                return Err(err(
                    TreeErrorKind::RuleShape,
                    path,
                    format!("major premise {} is not an implication", major.formula),
                ));
            };
            if *a != minor.formula || *b != node.formula {
                return Err(err(
                    TreeErrorKind::FormulaMismatch,
                    path,
                    format!(
                        "cannot eliminate {} against {} to obtain {}",
                        major.formula, minor.formula, node.formula
                    ),
                ));
            }
            for (i, c) in node.premises.iter().enumerate() {
                path.push(i);
                let r = check_node(c, intro_labels, scope, path, open);
                path.pop();
                r?;
            }
        }
    }
    Ok(())
}

/// No introduction is the major premise of an elimination.
pub fn is_normal(p: &NdProof) -> Result<bool, TreeError> {
    check_tree(p)?;
    Ok(is_normal_unchecked(p))
}

pub(crate) fn is_normal_unchecked(p: &NdProof) -> bool {
    let mut stack = vec![p];
    while let Some(node) = stack.pop() {
        if node.rule == Rule::ImpElim && matches!(node.premises[0].rule, Rule::ImpIntro(_)) {
            return false;
        }
        stack.extend(node.premises.iter());
    }
    true
}

pub fn metrics(p: &NdProof) -> Metrics {
    p.metrics()
}
