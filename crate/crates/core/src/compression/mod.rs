//! Compression of tree proofs into leveled proof DAGs.
//!
//! A node's level is its depth in the source tree and merging only happens
//! within a level, so every premise edge goes from level `l` to `l + 1`.
//!
//! * [`Mode::Subtree`] merges nodes whose subtrees are identical once
//!   introduction labels are renamed canonically. It is lossless: unfolding
//!   gives the original proof back up to label renaming.
//! * [`Mode::Label`] merges every pair of nodes with the same level, formula
//!   and rule. Hypothesis and introduction labels become formula ids, so a
//!   hypothesis `A` is discharged by any introduction of `A -> _`.

mod serial;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::Formula;
use crate::intern::{FormulaId, FormulaTable, PtrCache};
use crate::ndproof::{Label, NdProof, Rule, TreeError};

pub use serial::parse_dag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Subtree,
    Label,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Subtree => "subtree",
            Mode::Label => "label",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "subtree" => Ok(Mode::Subtree),
            "label" => Ok(Mode::Label),
            _ => Err(format!("unknown mode `{s}` (expected subtree or label)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Major,
    Minor,
    Sole,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Major => "major",
            Role::Minor => "minor",
            Role::Sole => "sole",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DagNode {
    pub formula: FormulaId,
    pub rule: Rule,
    pub level: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub parent: usize,
    pub role: Role,
    pub child: usize,
}

/// A leveled proof DAG. Formulas live in an interned table; nodes refer to
/// them by id.
///
/// The fields are not validated on construction: certificates read from
/// outside may violate any invariant, and the checker is what decides.
#[derive(Clone, Debug)]
pub struct DagProof {
    pub table: FormulaTable,
    pub nodes: Vec<DagNode>,
    pub edges: Vec<Edge>,
    pub root: usize,
    pub mode: Mode,
}

impl PartialEq for DagProof {
    fn eq(&self, other: &DagProof) -> bool {
        self.to_text() == other.to_text()
    }
}

impl Eq for DagProof {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompressError {
    #[error("input proof does not check: {0}")]
    Check(#[from] TreeError),
    #[error("input proof is not normal")]
    NotNormal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnfoldError {
    #[error("unfolding exceeds the budget of {budget} nodes ({partial} built before stopping)")]
    BudgetExceeded { budget: usize, partial: usize },
    #[error("malformed DAG: {0}")]
    Structure(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionStats {
    pub tree_size: usize,
    pub dag_nodes: usize,
    pub dag_edges: usize,
    pub ratio: f64,
}

impl DagProof {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|V| + |E|`.
    pub fn size(&self) -> usize {
        self.nodes.len() + self.edges.len()
    }

    pub fn formula(&self, v: usize) -> &Formula {
        self.table.formula(self.nodes[v].formula)
    }

    pub fn conclusion(&self) -> &Formula {
        self.formula(self.root)
    }

    /// Premises of each node, major before minor, as `(child, role)`.
    pub fn premises(&self) -> Vec<Vec<(usize, Role)>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        let mut sorted = self.edges.clone();
        sorted.sort();
        for e in sorted {
            if e.parent < out.len() {
                out[e.parent].push((e.child, e.role));
            }
        }
        out
    }

    /// Number of levels below the root.
    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.level).max().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        serial::write_dag(self)
    }
}

pub fn compress(p: &NdProof, mode: Mode) -> Result<DagProof, CompressError> {
    p.check()?;
    if !crate::ndproof::is_normal_unchecked(p) {
        return Err(CompressError::NotNormal);
    }
    let mut table = FormulaTable::new();
    let mut cache = PtrCache::new();
    let flat = flatten(p, &mut table, &mut cache);
    let (rules, merge_keys) = match mode {
        Mode::Subtree => subtree_keys(&flat),
        Mode::Label => label_keys(&flat, &table),
    };

    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut final_id = vec![0usize; flat.len()];
    let mut nodes = Vec::new();
    for (i, node) in flat.iter().enumerate() {
        final_id[i] = *ids.entry(merge_keys[i]).or_insert_with(|| {
            nodes.push(DagNode {
                formula: node.formula,
                rule: rules[i],
                level: node.level,
            });
            nodes.len() - 1
        });
    }
    let mut edges = BTreeSet::new();
    for (i, node) in flat.iter().enumerate() {
        for (k, &c) in node.children.iter().enumerate() {
            let role = match (node.rule, k) {
                (Rule::ImpElim, 0) => Role::Major,
                (Rule::ImpElim, _) => Role::Minor,
                _ => Role::Sole,
            };
            edges.insert(Edge {
                parent: final_id[i],
                role,
                child: final_id[c],
            });
        }
    }
    Ok(DagProof {
        table,
        nodes,
        edges: edges.into_iter().collect(),
        root: 0,
        mode,
    })
}

struct Flat {
    formula: FormulaId,
    rule: Rule,
    level: usize,
    children: Vec<usize>,
}

/// Preorder arena; children always have larger indices than their parent.
fn flatten<'a>(p: &'a NdProof, table: &mut FormulaTable, cache: &mut PtrCache<'a>) -> Vec<Flat> {
    let mut out: Vec<Flat> = Vec::new();
    let mut stack: Vec<(&'a NdProof, usize, Option<usize>)> = vec![(p, 0, None)];
    while let Some((node, level, parent)) = stack.pop() {
        let idx = out.len();
        out.push(Flat {
            formula: table.intern_with(&node.formula, cache),
            rule: node.rule,
            level,
            children: Vec::new(),
        });
        if let Some(par) = parent {
            out[par].children.push(idx);
        }
        for c in node.premises.iter().rev() {
            stack.push((c, level + 1, Some(idx)));
        }
    }
    out
}

fn interner<K: std::hash::Hash + Eq>(map: &mut HashMap<K, u64>, key: K) -> u64 {
    let next = map.len() as u64;
    *map.entry(key).or_insert(next)
}

/// Relabels introductions by the alpha-equivalence class of their subtree,
/// then hash-conses the relabeled tree level by level.
fn subtree_keys(flat: &[Flat]) -> (Vec<Rule>, Vec<u64>) {
    let n = flat.len();
    let mut binder: HashMap<Label, usize> = HashMap::new();
    for (i, node) in flat.iter().enumerate() {
        if let Rule::ImpIntro(l) = node.rule {
            binder.insert(l, i);
        }
    }
    let mut intro_depth = vec![0u64; n];
    for (i, node) in flat.iter().enumerate() {
        let d = intro_depth[i] + u64::from(matches!(node.rule, Rule::ImpIntro(_)));
        for &c in &node.children {
            intro_depth[c] = d;
        }
    }

    // Alpha-equivalence classes via de Bruijn style distances to binders.
    let mut class_ids: HashMap<(FormulaId, u8, u64, Vec<u64>), u64> = HashMap::new();
    let mut class = vec![0u64; n];
    for i in (0..n).rev() {
        let node = &flat[i];
        let (tag, payload) = match node.rule {
            Rule::Hyp(l) => match binder.get(&l) {
                Some(&b) => (0, intro_depth[i] - intro_depth[b]),
                None => (1, u64::from(l)),
            },
            Rule::ImpIntro(_) => (2, 0),
            Rule::ImpElim => (3, 0),
        };
        let children = node.children.iter().map(|&c| class[c]).collect();
        class[i] = interner(&mut class_ids, (node.formula, tag, payload, children));
    }

    let offset = class_ids.len() as Label + 1;
    let new_label = |l: Label| match binder.get(&l) {
        Some(&b) => class[b] as Label + 1,
        None => offset + l,
    };
    let rules: Vec<Rule> = flat
        .iter()
        .map(|node| match node.rule {
            Rule::Hyp(l) => Rule::Hyp(new_label(l)),
            Rule::ImpIntro(l) => Rule::ImpIntro(new_label(l)),
            Rule::ImpElim => Rule::ImpElim,
        })
        .collect();

    let mut dag_ids: HashMap<(usize, FormulaId, Rule, Vec<u64>), u64> = HashMap::new();
    let mut key = vec![0u64; n];
    for i in (0..n).rev() {
        let node = &flat[i];
        let children = node.children.iter().map(|&c| key[c]).collect();
        key[i] = interner(&mut dag_ids, (node.level, node.formula, rules[i], children));
    }
    (rules, key)
}

/// Labels become `1 + id` of the hypothesis formula; nodes merge on
/// `(level, formula, rule)`.
fn label_keys(flat: &[Flat], table: &FormulaTable) -> (Vec<Rule>, Vec<u64>) {
    let rules: Vec<Rule> = flat
        .iter()
        .map(|node| match node.rule {
            Rule::Hyp(_) => Rule::Hyp(node.formula + 1),
            Rule::ImpIntro(_) => {
                let (a, _) = table
                    .implication(node.formula)
                    .expect("checked introduction concludes an implication");
                Rule::ImpIntro(a + 1)
            }
            Rule::ImpElim => Rule::ImpElim,
        })
        .collect();
    let mut ids: HashMap<(usize, FormulaId, Rule), u64> = HashMap::new();
    let keys = flat
        .iter()
        .zip(&rules)
        .map(|(node, &rule)| interner(&mut ids, (node.level, node.formula, rule)))
        .collect();
    (rules, keys)
}

/// Expands shared nodes top-down into a tree with canonical labels. Nodes of
/// a label-mode DAG with several premise alternatives keep all of them, so the
/// result need not be a well-formed proof.
pub fn unfold(d: &DagProof, node_budget: usize) -> Result<NdProof, UnfoldError> {
    let n = d.nodes.len();
    if d.root >= n {
        return Err(UnfoldError::Structure(format!(
            "root {} is not a node",
            d.root
        )));
    }
    for e in &d.edges {
        if e.parent >= n || e.child >= n {
            return Err(UnfoldError::Structure(format!(
                "edge {} -> {} names a missing node",
                e.parent, e.child
            )));
        }
        if d.nodes[e.child].level != d.nodes[e.parent].level + 1 {
            return Err(UnfoldError::Structure(format!(
                "edge {} -> {} does not go down one level",
                e.parent, e.child
            )));
        }
    }
    if d.nodes.iter().any(|v| v.formula as usize >= d.table.len()) {
        return Err(UnfoldError::Structure("node formula not in table".into()));
    }
    let premises = d.premises();
    let mut built = 0usize;
    let tree = expand(d, &premises, d.root, node_budget, &mut built)?;
    Ok(tree.canonical_labels())
}

fn expand(
    d: &DagProof,
    premises: &[Vec<(usize, Role)>],
    v: usize,
    budget: usize,
    built: &mut usize,
) -> Result<NdProof, UnfoldError> {
    *built += 1;
    if *built > budget {
        return Err(UnfoldError::BudgetExceeded {
            budget,
            partial: *built,
        });
    }
    let mut children = Vec::with_capacity(premises[v].len());
    for &(c, _) in &premises[v] {
        children.push(expand(d, premises, c, budget, built)?);
    }
    Ok(NdProof::new(
        d.formula(v).clone(),
        d.nodes[v].rule,
        children,
    ))
}

pub fn compression_stats(p: &NdProof, d: &DagProof) -> CompressionStats {
    let tree_size = p.size();
    CompressionStats {
        tree_size,
        dag_nodes: d.node_count(),
        dag_edges: d.edge_count(),
        ratio: tree_size as f64 / d.size() as f64,
    }
}

/// Dependency set of every node: `{l}` for a hypothesis, the union over
/// premises for an elimination, and the premise's set minus `l` for an
/// introduction. Nodes with several premise alternatives take the union.
pub fn dependency_sets(d: &DagProof) -> Vec<BTreeSet<Label>> {
    let premises = d.premises();
    let mut order: Vec<usize> = (0..d.nodes.len()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(d.nodes[v].level));
    let mut deps: Vec<BTreeSet<Label>> = vec![BTreeSet::new(); d.nodes.len()];
    for v in order {
        let mut set = BTreeSet::new();
        match d.nodes[v].rule {
            Rule::Hyp(l) => {
                set.insert(l);
            }
            rule => {
                for &(c, _) in &premises[v] {
                    set.extend(deps[c].iter().copied());
                }
                if let Rule::ImpIntro(l) = rule {
                    set.remove(&l);
                }
            }
        }
        deps[v] = set;
    }
    deps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn id_q(label: Label) -> NdProof {
        NdProof::intro(f("q"), label, NdProof::hyp(f("q"), label))
    }

    /// Two copies of the identity on `q` as minor premises at depth 2.
    fn duplicated() -> NdProof {
        let left = NdProof::elim(NdProof::hyp(f("(q->q)->r->s"), 10), id_q(1));
        let right = NdProof::elim(NdProof::hyp(f("(q->q)->r"), 11), id_q(2));
        NdProof::elim(left, right)
    }

    #[test]
    fn subtree_merges_identical_minor_premises() {
        let p = duplicated();
        let d = compress(&p, Mode::Subtree).unwrap();
        assert_eq!(d.node_count(), p.size() - 2);
        assert_eq!(d.conclusion(), p.conclusion());
        let s = compression_stats(&p, &d);
        assert_eq!(s.tree_size, 9);
        assert_eq!((s.dag_nodes, s.dag_edges), (7, 7));
        // the uncollapsed tree would give 9 / 17
        assert!(s.ratio > 9.0 / 17.0);
        assert!(unfold(&d, 100).unwrap().alpha_eq(&p));
    }

    #[test]
    fn nothing_to_collapse() {
        let p = NdProof::intro(
            f("p"),
            1,
            NdProof::intro(f("q"), 2, NdProof::hyp(f("p"), 1)),
        );
        for mode in [Mode::Subtree, Mode::Label] {
            let d = compress(&p, mode).unwrap();
            assert_eq!(d.node_count(), 3);
            assert_eq!(d.edge_count(), 2);
            assert!(compression_stats(&p, &d).ratio <= 1.0);
        }
        assert_eq!(unfold(&compress(&p, Mode::Subtree).unwrap(), 3).unwrap(), p);
    }

    #[test]
    fn rejects_bad_input() {
        let redex = NdProof::elim(id_q(1), NdProof::hyp(f("q"), 2));
        assert_eq!(
            compress(&redex, Mode::Subtree),
            Err(CompressError::NotNormal)
        );
        let broken = NdProof::new(f("q"), Rule::ImpElim, vec![NdProof::hyp(f("q"), 1)]);
        assert!(matches!(
            compress(&broken, Mode::Label),
            Err(CompressError::Check(_))
        ));
    }

    #[test]
    fn budget() {
        let p = duplicated();
        let d = compress(&p, Mode::Subtree).unwrap();
        assert_eq!(
            unfold(&d, 5),
            Err(UnfoldError::BudgetExceeded {
                budget: 5,
                partial: 6
            })
        );
    }

    #[test]
    fn dependency_sets_follow_the_rules() {
        let d = compress(&duplicated(), Mode::Subtree).unwrap();
        let deps = dependency_sets(&d);
        assert_eq!(deps[d.root].len(), 2);
        let closed = compress(&id_q(1), Mode::Subtree).unwrap();
        assert!(dependency_sets(&closed)[closed.root].is_empty());
    }
}
