//! Decision procedure for implicational validity.
//!
//! [`decide`] returns either a closed normal proof or a Kripke countermodel.
//! Classically falsifiable formulas are refuted by a one-world model straight
//! away; everything else goes through contraction-free backward search.

mod classical;
mod kripke;
mod search;
mod translate;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::Formula;
use crate::graph::{is_hamiltonian_capped, Graph, DEFAULT_ORACLE_CAP};
use crate::intern::FormulaTable;
use crate::ndproof::{Metrics, NdProof};
use crate::reduction::translate_beta;

pub use kripke::{kripke_eval, parse_model, KripkeError, KripkeModel};

use search::{ModelTree, Search};
use translate::Translator;

pub const MAX_ATOMS: usize = 40;
pub const MAX_NODES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid(NdProof),
    Invalid(KripkeModel),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error(
        "input too large: {atoms} atoms and {nodes} nodes (limits {MAX_ATOMS} and {MAX_NODES})"
    )]
    Capacity { atoms: usize, nodes: usize },
    #[error("not a tautology: the graph is hamiltonian")]
    NotATautology,
}

pub fn decide(f: &Formula) -> Result<Verdict, ProverError> {
    let atoms = f.atoms();
    let nodes = f.node_count();
    if atoms.len() > MAX_ATOMS || nodes > MAX_NODES {
        return Err(ProverError::Capacity {
            atoms: atoms.len(),
            nodes,
        });
    }
    let mut table = FormulaTable::new();
    let id = table.intern(f);
    if let Some(true_atoms) = classical::falsify(&table, id) {
        let names = true_atoms.iter().map(|&a| table.atom_name(a).to_string());
        return Ok(Verdict::Invalid(KripkeModel::single(names)));
    }
    let outcome = Search::new(&mut table).prove(Vec::new(), id);
    Ok(match outcome {
        Ok(d) => Verdict::Valid(Translator::new(&table).proof(&d)),
        Err(tree) => Verdict::Invalid(flatten(&table, &tree).minimize(f)),
    })
}

fn flatten(table: &FormulaTable, tree: &ModelTree) -> KripkeModel {
    fn walk(
        table: &FormulaTable,
        t: &ModelTree,
        ancestors: &mut Vec<usize>,
        valuation: &mut Vec<BTreeSet<String>>,
        pairs: &mut Vec<(usize, usize)>,
    ) {
        let w = valuation.len();
        valuation.push(
            t.atoms
                .iter()
                .map(|&a| table.atom_name(a).to_string())
                .collect(),
        );
        pairs.extend(ancestors.iter().map(|&u| (u, w)));
        ancestors.push(w);
        for c in &t.children {
            walk(table, c, ancestors, valuation, pairs);
        }
        ancestors.pop();
    }
    let mut valuation = Vec::new();
    let mut pairs = Vec::new();
    walk(table, tree, &mut Vec::new(), &mut valuation, &mut pairs);
    KripkeModel::from_parts(valuation, pairs).expect("search trees give monotone models")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaProof {
    pub proof: NdProof,
    pub metrics: Metrics,
}

/// Proof of the non-hamiltonicity tautology for `g`.
pub fn prove_beta(g: &Graph) -> Result<BetaProof, ProverError> {
    prove_beta_capped(g, DEFAULT_ORACLE_CAP)
}

/// As [`prove_beta`]; graphs with at most `oracle_cap` vertices are checked
/// with the hamiltonicity oracle before searching.
pub fn prove_beta_capped(g: &Graph, oracle_cap: usize) -> Result<BetaProof, ProverError> {
    if g.n() <= oracle_cap && is_hamiltonian_capped(g, oracle_cap).unwrap_or(false) {
        return Err(ProverError::NotATautology);
    }
    match decide(&translate_beta(g))? {
        Verdict::Valid(proof) => {
            let metrics = proof.metrics();
            Ok(BetaProof { proof, metrics })
        }
        Verdict::Invalid(_) => Err(ProverError::NotATautology),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn assert_valid(s: &str) -> NdProof {
        match decide(&f(s)).unwrap() {
            Verdict::Valid(p) => {
                let c = p.check().unwrap();
                assert!(c.is_closed(), "{s}");
                assert_eq!(c.conclusion, f(s));
                assert!(p.is_normal().unwrap(), "{s}");
                p
            }
            Verdict::Invalid(m) => panic!("{s} refuted by\n{}", m.to_text()),
        }
    }

    fn assert_invalid(s: &str) -> KripkeModel {
        match decide(&f(s)).unwrap() {
            Verdict::Invalid(m) => {
                m.validate().unwrap();
                assert!(!m.eval(0, &f(s)).unwrap(), "{s}");
                m
            }
            Verdict::Valid(p) => panic!("{s} proved by {p:?}"),
        }
    }

    #[test]
    fn identity() {
        let p = assert_valid("p->p");
        assert_eq!(p, NdProof::intro(f("p"), 1, NdProof::hyp(f("p"), 1)));
    }

    #[test]
    fn peirce_two_worlds() {
        let m = assert_invalid("((p->q)->p)->p");
        assert_eq!(m.to_text(), "kripke 1\nworlds 2\n0 -\n1 p\norder 1\n0 1\n");
    }

    #[test]
    fn small_valid_and_invalid() {
        for s in [
            "p->q->p",
            "(p->q->r)->(p->q)->p->r",
            "(p->q)->(q->r)->p->r",
            "((((p->q)->p)->p)->q)->q",
            "((p->q)->p)->(p->q)->q",
            "(((p->q)->q)->q)->p->q",
        ] {
            assert_valid(s);
        }
        for s in [
            "p",
            "p->q",
            "((p->q)->q)->(q->p)->p",
            "((p->q)->p)->p",
            "(((p->q)->p)->p)->p->q",
        ] {
            assert_invalid(s);
        }
    }

    #[test]
    fn capacity() {
        let atoms: Vec<Formula> = (0..41).map(|i| Formula::atom(&format!("a{i}"))).collect();
        let big = Formula::chain(atoms[..40].iter().cloned(), atoms[40].clone());
        assert_eq!(
            decide(&big),
            Err(ProverError::Capacity {
                atoms: 41,
                nodes: 81
            })
        );
    }

    #[test]
    fn beta_small_graphs() {
        let p3 = Graph::new(3, [(0, 1), (1, 2)]);
        let b = prove_beta(&p3).unwrap();
        assert!(b.proof.check().unwrap().is_closed());
        assert!(b.proof.is_normal().unwrap());
        assert_eq!(b.proof.conclusion(), &translate_beta(&p3));
        let k3 = Graph::new(3, [(0, 1), (1, 2), (0, 2)]);
        assert_eq!(prove_beta(&k3), Err(ProverError::NotATautology));
    }
}
