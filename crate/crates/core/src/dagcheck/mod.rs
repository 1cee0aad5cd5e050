//! Certificate checker for proof DAGs.
//!
//! The checker runs a fixed sequence of elementary steps and reports each
//! one to a [`StepSink`]. Counting the steps gives the instrumented cost,
//! recording them gives an execution trace, and replaying a recorded trace
//! against a fresh run verifies it.
//!
//! Phases, in order: root, nodes, edges, reachability from the root,
//! uniqueness (subtree mode only), local rules, hypothesis bindings, and
//! discharge coverage. Coverage for a label `l` holds when no hypothesis
//! labelled `l` can be reached from the root without passing through an
//! introduction labelled `l`; it is tested by searching upwards from the
//! hypotheses with those introductions removed.

mod corrupt;
mod trace;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::compression::{DagProof, Mode, Role};
use crate::formula::Formula;
use crate::intern::FormulaId;
use crate::ndproof::{Label, Rule};

pub use corrupt::{corrupt, CorruptError, MutationKind, ALL_MUTATIONS};
pub use trace::{digest, emit_trace, mutate_trace, parse_trace, verify_trace, Trace, TraceError};

/// Every run satisfies `steps <= STEP_CONSTANT * |V| * (|E| + m)`.
pub const STEP_CONSTANT: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RejectReason {
    Structure,
    Rule,
    Discharge,
    Reachability,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::Structure => "structure",
            RejectReason::Rule => "rule",
            RejectReason::Discharge => "discharge",
            RejectReason::Reachability => "reachability",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Root,
    Node(usize),
    Edge(usize),
    Label(Label),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Root => write!(f, "root"),
            Location::Node(v) => write!(f, "node {v}"),
            Location::Edge(e) => write!(f, "edge {e}"),
            Location::Label(l) => write!(f, "label {l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckResult {
    Accept {
        conclusion: Formula,
        steps: u64,
    },
    Reject {
        reason: RejectReason,
        location: Location,
        steps: u64,
    },
}

impl CheckResult {
    pub fn is_accept(&self) -> bool {
        matches!(self, CheckResult::Accept { .. })
    }

    pub fn steps(&self) -> u64 {
        match self {
            CheckResult::Accept { steps, .. } | CheckResult::Reject { steps, .. } => *steps,
        }
    }

    pub fn reason(&self) -> Option<RejectReason> {
        match self {
            CheckResult::Accept { .. } => None,
            CheckResult::Reject { reason, .. } => Some(*reason),
        }
    }
}

/// One elementary check. `Edge` indices refer to the certificate's edge list
/// as stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Root(usize, bool),
    Node(usize, bool),
    Edge(usize, bool),
    Reach(usize, bool),
    Unique(usize, bool),
    Rule(usize, bool),
    Bind(usize, bool),
    Label(Label),
    Visit(Label, usize, bool),
    Accept,
    Reject(RejectReason, Location),
}

pub trait StepSink {
    /// Returns `false` to stop the run.
    fn step(&mut self, s: Step) -> bool;
}

struct Counter(u64);

impl StepSink for Counter {
    fn step(&mut self, _: Step) -> bool {
        self.0 += 1;
        true
    }
}

pub(crate) struct Stopped;

pub fn check_dag(d: &DagProof) -> CheckResult {
    let mut c = Counter(0);
    let verdict = match run(d, &mut c) {
        Ok(v) => v,
        Err(Stopped) => unreachable!("the counter never stops a run"),
    };
    match verdict {
        Step::Reject(reason, location) => CheckResult::Reject {
            reason,
            location,
            steps: c.0,
        },
        _ => CheckResult::Accept {
            conclusion: d.conclusion().clone(),
            steps: c.0,
        },
    }
}

/// `C * |V| * (|E| + m)` for the certificate, with `m` the size of its
/// conclusion (zero if the root is out of range).
pub fn step_budget(d: &DagProof, c: u64) -> u64 {
    let m = d
        .nodes
        .get(d.root)
        .filter(|n| (n.formula as usize) < d.table.len())
        .map_or(0, |n| d.table.node_count(n.formula) as u64);
    c * d.nodes.len() as u64 * (d.edges.len() as u64 + m)
}

type NodeKey<'a> = (usize, FormulaId, Rule, &'a [(usize, Role)]);

/// Runs the checker, returning the final verdict step (already emitted).
pub(crate) fn run(d: &DagProof, sink: &mut impl StepSink) -> Result<Step, Stopped> {
    let mut emit = |s: Step| if sink.step(s) { Ok(()) } else { Err(Stopped) };
    macro_rules! check {
        ($step:expr, $ok:expr, $reason:expr, $loc:expr) => {{
            let ok = $ok;
            emit($step(ok))?;
            if !ok {
                let v = Step::Reject($reason, $loc);
                emit(v)?;
                return Ok(v);
            }
        }};
    }
    let n = d.nodes.len();
    let table = &d.table;

    check!(
        |ok| Step::Root(d.root, ok),
        d.root < n && d.nodes[d.root].level == 0,
        RejectReason::Structure,
        Location::Root
    );
    for (v, node) in d.nodes.iter().enumerate() {
        check!(
            |ok| Step::Node(v, ok),
            (node.formula as usize) < table.len(),
            RejectReason::Structure,
            Location::Node(v)
        );
    }

    let mut children: Vec<Vec<(usize, Role)>> = vec![Vec::new(); n];
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut seen = HashSet::with_capacity(d.edges.len());
    for (i, e) in d.edges.iter().enumerate() {
        let ok = e.parent < n
            && e.child < n
            && d.nodes[e.child].level == d.nodes[e.parent].level + 1
            && matches!(
                (d.nodes[e.parent].rule, e.role),
                (Rule::ImpElim, Role::Major | Role::Minor) | (Rule::ImpIntro(_), Role::Sole)
            )
            && seen.insert((e.parent, e.child, e.role));
        check!(
            |ok| Step::Edge(i, ok),
            ok,
            RejectReason::Structure,
            Location::Edge(i)
        );
        children[e.parent].push((e.child, e.role));
        parents[e.child].push(e.parent);
    }
    for c in &mut children {
        c.sort_unstable_by_key(|&(v, r)| (r, v));
    }

    let mut reached = vec![false; n];
    let mut queue = std::collections::VecDeque::from([d.root]);
    reached[d.root] = true;
    while let Some(v) = queue.pop_front() {
        emit(Step::Reach(v, true))?;
        for &(c, _) in &children[v] {
            if !reached[c] {
                reached[c] = true;
                queue.push_back(c);
            }
        }
    }
    if let Some(v) = reached.iter().position(|r| !r) {
        check!(
            |ok| Step::Reach(v, ok),
            false,
            RejectReason::Reachability,
            Location::Node(v)
        );
    }

    if d.mode == Mode::Subtree {
        let mut keys: HashSet<NodeKey> = HashSet::with_capacity(n);
        for (v, node) in d.nodes.iter().enumerate() {
            let fresh = keys.insert((node.level, node.formula, node.rule, &children[v][..]));
            check!(
                |ok| Step::Unique(v, ok),
                fresh,
                RejectReason::Structure,
                Location::Node(v)
            );
        }
    }

    let single = d.mode == Mode::Subtree;
    let mut antecedent: HashMap<Label, FormulaId> = HashMap::new();
    for (v, node) in d.nodes.iter().enumerate() {
        let ok = match node.rule {
            Rule::Hyp(_) => children[v].is_empty(),
            Rule::ImpIntro(l) => match table.implication(node.formula) {
                Some((a, b)) => {
                    let premises = &children[v];
                    let arity = if single {
                        premises.len() == 1
                    } else {
                        !premises.is_empty()
                    };
                    arity
                        && premises.iter().all(|&(c, _)| d.nodes[c].formula == b)
                        && *antecedent.entry(l).or_insert(a) == a
                }
                None => false,
            },
            Rule::ImpElim => elim_ok(d, &children[v], node.formula, single),
        };
        check!(
            |ok| Step::Rule(v, ok),
            ok,
            RejectReason::Rule,
            Location::Node(v)
        );
    }

    let mut hyps: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
    let mut dischargers: HashMap<Label, Vec<usize>> = HashMap::new();
    for (v, node) in d.nodes.iter().enumerate() {
        match node.rule {
            Rule::Hyp(l) => {
                let ok = antecedent.get(&l).is_none_or(|&a| a == node.formula);
                check!(
                    |ok| Step::Bind(v, ok),
                    ok,
                    RejectReason::Rule,
                    Location::Node(v)
                );
                hyps.entry(l).or_default().push(v);
            }
            Rule::ImpIntro(l) => dischargers.entry(l).or_default().push(v),
            Rule::ImpElim => {}
        }
    }

    let mut blocked = vec![u32::MAX; n];
    let mut mark = vec![u32::MAX; n];
    for (round, (&l, sources)) in hyps.iter().enumerate() {
        emit(Step::Label(l))?;
        let round = round as u32;
        for &v in dischargers.get(&l).map_or(&[][..], |x| &x[..]) {
            blocked[v] = round;
        }
        let mut stack: Vec<usize> = Vec::new();
        for &h in sources {
            if mark[h] != round {
                mark[h] = round;
                stack.push(h);
            }
        }
        while let Some(v) = stack.pop() {
            let ok = v != d.root;
            check!(
                |ok| Step::Visit(l, v, ok),
                ok,
                RejectReason::Discharge,
                Location::Label(l)
            );
            for &p in &parents[v] {
                if mark[p] != round && blocked[p] != round {
                    mark[p] = round;
                    stack.push(p);
                }
            }
        }
    }

    emit(Step::Accept)?;
    Ok(Step::Accept)
}

/// Every major premise is `X -> F` for some minor premise `X`, and every
/// minor premise is matched by a major one.
fn elim_ok(d: &DagProof, premises: &[(usize, Role)], f: FormulaId, single: bool) -> bool {
    let majors: Vec<FormulaId> = premises
        .iter()
        .filter(|p| p.1 == Role::Major)
        .map(|&(c, _)| d.nodes[c].formula)
        .collect();
    let minors: Vec<FormulaId> = premises
        .iter()
        .filter(|p| p.1 == Role::Minor)
        .map(|&(c, _)| d.nodes[c].formula)
        .collect();
    if majors.is_empty() || minors.is_empty() {
        return false;
    }
    if single && (majors.len() != 1 || minors.len() != 1) {
        return false;
    }
    let major_ok = majors.iter().all(|&m| match d.table.implication(m) {
        Some((x, y)) => y == f && minors.contains(&x),
        None => false,
    });
    let minor_ok = minors.iter().all(|&x| {
        majors
            .iter()
            .any(|&m| d.table.implication(m) == Some((x, f)))
    });
    major_ok && minor_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compression::{compress, DagNode, Edge};
    use crate::formula::parse;
    use crate::intern::FormulaTable;
    use crate::ndproof::NdProof;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn identity() -> NdProof {
        NdProof::intro(f("p"), 1, NdProof::hyp(f("p"), 1))
    }

    #[test]
    fn accepts_identity() {
        for mode in [Mode::Subtree, Mode::Label] {
            let d = compress(&identity(), mode).unwrap();
            match check_dag(&d) {
                CheckResult::Accept { conclusion, steps } => {
                    assert_eq!(conclusion, f("p->p"));
                    assert!(steps <= step_budget(&d, STEP_CONSTANT));
                }
                r => panic!("{r:?}"),
            }
        }
    }

    #[test]
    fn elim_with_atomic_major_is_a_rule_error() {
        let mut table = FormulaTable::new();
        let p = table.atom("p");
        let d = DagProof {
            table,
            nodes: vec![
                DagNode {
                    formula: p,
                    rule: Rule::ImpElim,
                    level: 0,
                },
                DagNode {
                    formula: p,
                    rule: Rule::Hyp(1),
                    level: 1,
                },
                DagNode {
                    formula: p,
                    rule: Rule::Hyp(2),
                    level: 1,
                },
            ],
            edges: vec![
                Edge {
                    parent: 0,
                    role: Role::Major,
                    child: 1,
                },
                Edge {
                    parent: 0,
                    role: Role::Minor,
                    child: 2,
                },
            ],
            root: 0,
            mode: Mode::Label,
        };
        assert_eq!(check_dag(&d).reason(), Some(RejectReason::Rule));
    }

    #[test]
    fn open_certificates_are_rejected() {
        let d = compress(&NdProof::hyp(f("p"), 1), Mode::Subtree).unwrap();
        assert_eq!(check_dag(&d).reason(), Some(RejectReason::Discharge));
    }

    #[test]
    fn structural_failures() {
        let mut d = compress(&identity(), Mode::Subtree).unwrap();
        d.root = 7;
        assert_eq!(check_dag(&d).reason(), Some(RejectReason::Structure));
        let mut d = compress(&identity(), Mode::Subtree).unwrap();
        d.nodes[1].level = 2;
        assert_eq!(check_dag(&d).reason(), Some(RejectReason::Structure));
        let mut d = compress(&identity(), Mode::Subtree).unwrap();
        d.edges.clear();
        assert_eq!(check_dag(&d).reason(), Some(RejectReason::Reachability));
        let mut d = compress(&identity(), Mode::Subtree).unwrap();
        d.edges.push(d.edges[0]);
        assert_eq!(check_dag(&d).reason(), Some(RejectReason::Structure));
    }

    #[test]
    fn subtree_mode_rejects_duplicate_nodes() {
        let q = NdProof::intro(f("q"), 1, NdProof::hyp(f("q"), 1));
        let p = NdProof::elim(
            NdProof::elim(NdProof::hyp(f("(q->q)->(q->q)->r"), 5), q.clone()),
            q,
        );
        let p = NdProof::intro(f("(q->q)->(q->q)->r"), 5, p).canonical_labels();
        let mut d = compress(&p, Mode::Subtree).unwrap();
        assert!(check_dag(&d).is_accept());
        let extra = d.nodes.len();
        let dup = d.nodes[extra - 1];
        d.nodes.push(dup);
        let parent = d
            .edges
            .iter()
            .find(|e| e.child == extra - 1)
            .copied()
            .unwrap();
        d.edges.push(Edge {
            child: extra,
            ..parent
        });
        assert_eq!(check_dag(&d).reason(), Some(RejectReason::Structure));
    }
}
