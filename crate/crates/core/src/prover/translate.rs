//! Sequent derivations to normal natural deduction proofs.
//!
//! Each context formula is mapped to a producer of its proof. The formula
//! `D -> E` introduced by the left premise of `L->->` has no direct proof
//! term; it is produced by applying the principal `(C -> D) -> E` to a vacuous
//! introduction of `C -> D`. Producers only ever yield neutral terms
//! (hypotheses or eliminations), which keeps the result normal.

use std::collections::HashMap;
use std::sync::Arc;

use super::search::Deriv;
use crate::intern::{FormulaId, FormulaTable};
use crate::ndproof::{Label, NdProof};

#[derive(Debug)]
enum Term {
    Hyp(FormulaId, Label),
    Intro(FormulaId, Label, Arc<Term>),
    Elim(Arc<Term>, Arc<Term>),
}

#[derive(Clone)]
enum Producer {
    Term(Arc<Term>),
    FromPrincipal {
        principal: Box<Producer>,
        c: FormulaId,
        d: FormulaId,
        d_to_e: FormulaId,
    },
}

pub(crate) struct Translator<'t> {
    table: &'t FormulaTable,
    env: HashMap<FormulaId, Producer>,
    next_label: Label,
}

impl<'t> Translator<'t> {
    pub fn new(table: &'t FormulaTable) -> Translator<'t> {
        Translator {
            table,
            env: HashMap::new(),
            next_label: 1,
        }
    }

    /// Proof of the root sequent's goal; the root context must be empty.
    pub fn proof(mut self, d: &Deriv) -> NdProof {
        let t = self.translate(d);
        self.to_tree(&t).canonical_labels()
    }

    fn fresh(&mut self) -> Label {
        let l = self.next_label;
        self.next_label += 1;
        l
    }

    fn bind(&mut self, f: FormulaId, p: Producer) -> Option<Producer> {
        self.env.insert(f, p)
    }

    fn unbind(&mut self, f: FormulaId, prev: Option<Producer>) {
        match prev {
            Some(p) => self.env.insert(f, p),
            None => self.env.remove(&f),
        };
    }

    fn lookup(&self, f: FormulaId) -> Producer {
        self.env
            .get(&f)
            .cloned()
            .expect("sequent context formula without a producer")
    }

    fn translate(&mut self, d: &Deriv) -> Arc<Term> {
        match d {
            Deriv::Ax { goal } => {
                let p = self.lookup(*goal);
                self.produce(&p)
            }
            Deriv::RImp {
                antecedent,
                goal,
                sub,
            } => {
                let label = self.fresh();
                let prev = self.bind(
                    *antecedent,
                    Producer::Term(Arc::new(Term::Hyp(*antecedent, label))),
                );
                let body = self.translate(sub);
                self.unbind(*antecedent, prev);
                Arc::new(Term::Intro(*goal, label, body))
            }
            Deriv::L0 {
                imp,
                atom,
                consequent,
                sub,
            } => {
                let major = self.lookup(*imp);
                let minor = self.lookup(*atom);
                let minor = self.produce(&minor);
                let t = self.apply(&major, minor);
                let prev = self.bind(*consequent, Producer::Term(t));
                let out = self.translate(sub);
                self.unbind(*consequent, prev);
                out
            }
            Deriv::LImp {
                principal,
                c,
                d,
                d_to_e,
                e,
                left,
                right,
            } => {
                let pr = self.lookup(*principal);
                let label = self.fresh();
                let prev_c = self.bind(*c, Producer::Term(Arc::new(Term::Hyp(*c, label))));
                let prev_de = self.bind(
                    *d_to_e,
                    Producer::FromPrincipal {
                        principal: Box::new(pr.clone()),
                        c: *c,
                        d: *d,
                        d_to_e: *d_to_e,
                    },
                );
                let body = self.translate(left);
                self.unbind(*d_to_e, prev_de);
                self.unbind(*c, prev_c);
                let cd = self.implication(*c, *d);
                let t = self.apply(&pr, Arc::new(Term::Intro(cd, label, body)));
                let prev_e = self.bind(*e, Producer::Term(t));
                let out = self.translate(right);
                self.unbind(*e, prev_e);
                out
            }
        }
    }

    fn implication(&self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.table
            .find_implies(a, b)
            .expect("implication interned during search")
    }

    /// A term for the producer's formula.
    fn produce(&mut self, p: &Producer) -> Arc<Term> {
        match p {
            Producer::Term(t) => t.clone(),
            Producer::FromPrincipal { d, d_to_e, .. } => {
                let label = self.fresh();
                let body = self.apply(p, Arc::new(Term::Hyp(*d, label)));
                Arc::new(Term::Intro(*d_to_e, label, body))
            }
        }
    }

    /// The producer's formula `A -> B` applied to a proof of `A`, yielding a
    /// neutral term for `B`.
    fn apply(&mut self, p: &Producer, minor: Arc<Term>) -> Arc<Term> {
        match p {
            Producer::Term(t) => Arc::new(Term::Elim(t.clone(), minor)),
            Producer::FromPrincipal {
                principal, c, d, ..
            } => {
                let label = self.fresh();
                let cd = self.implication(*c, *d);
                let vacuous = Arc::new(Term::Intro(cd, label, minor));
                self.apply(principal, vacuous)
            }
        }
    }

    fn to_tree(&self, t: &Term) -> NdProof {
        match t {
            Term::Hyp(f, l) => NdProof::hyp(self.table.formula(*f).clone(), *l),
            Term::Intro(f, l, body) => {
                let (a, _) = self
                    .table
                    .implication(*f)
                    .expect("intro formula is an implication");
                NdProof::intro(self.table.formula(a).clone(), *l, self.to_tree(body))
            }
            Term::Elim(major, minor) => NdProof::elim(self.to_tree(major), self.to_tree(minor)),
        }
    }
}
