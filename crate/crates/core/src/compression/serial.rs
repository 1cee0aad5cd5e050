//! Canonical text form of proof DAGs.
//!
//! ```text
//! dagproof 1
//! mode subtree
//! root 0
//! formulas 2
//! 0 atom p
//! 1 imp 0 0
//! nodes 2
//! 0 0 intro 1 1
//! 1 1 hyp 1 0
//! edges 1
//! 0 1 sole
//! ```
//!
//! The formula table is structural: entry `i` is an atom or an implication
//! between earlier entries, with no repeats. Node lines are
//! `id level rule label formula` (label `-` for eliminations); edge lines are
//! `parent child role`, sorted by parent, role, child.

use std::fmt::Write as _;

use super::{DagNode, DagProof, Edge, Mode, Role};
use crate::formula::is_valid_atom_name;
use crate::intern::{FormulaTable, Shape};
use crate::ndproof::{Label, Rule};
use crate::textio::{bad, header_count, Lines, SerialError};

pub(crate) fn write_dag(d: &DagProof) -> String {
    let mut out = String::from("dagproof 1\n");
    let _ = writeln!(out, "mode {}", d.mode);
    let _ = writeln!(out, "root {}", d.root);
    let _ = writeln!(out, "formulas {}", d.table.len());
    for id in 0..d.table.len() as u32 {
        let _ = match d.table.shape(id) {
            Shape::Atom(a) => writeln!(out, "{id} atom {}", d.table.atom_name(a)),
            Shape::Implies(a, b) => writeln!(out, "{id} imp {a} {b}"),
        };
    }
    let _ = writeln!(out, "nodes {}", d.nodes.len());
    for (i, n) in d.nodes.iter().enumerate() {
        let label = n
            .rule
            .label()
            .map_or_else(|| "-".to_string(), |l| l.to_string());
        let _ = writeln!(
            out,
            "{i} {} {} {label} {}",
            n.level,
            n.rule.tag(),
            n.formula
        );
    }
    let mut edges = d.edges.clone();
    edges.sort();
    let _ = writeln!(out, "edges {}", edges.len());
    for e in edges {
        let _ = writeln!(out, "{} {} {}", e.parent, e.child, e.role.as_str());
    }
    out
}

/// Reads a certificate. Only the syntax is validated (including that every
/// id refers to an existing entry); semantic checks are left to the checker.
pub fn parse_dag(text: &str) -> Result<DagProof, SerialError> {
    let mut lines = Lines::new(text);
    let (line, head) = lines.next()?;
    if head != "dagproof 1" {
        return Err(bad(line, "expected header `dagproof 1`"));
    }
    let (line, l) = lines.next()?;
    let mode: Mode = l
        .strip_prefix("mode ")
        .ok_or_else(|| bad(line, "expected `mode <subtree|label>`"))?
        .trim()
        .parse()
        .map_err(|e: String| bad(line, e))?;
    let root = header_count(&mut lines, "root")?;

    let k = header_count(&mut lines, "formulas")?;
    let mut table = FormulaTable::new();
    for i in 0..k {
        let (line, l) = lines.next()?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.first().and_then(|s| s.parse::<usize>().ok()) != Some(i) {
            return Err(bad(line, format!("expected formula id {i}")));
        }
        let id = match parts[1..] {
            ["atom", name] if is_valid_atom_name(name) => table.atom(name),
            ["imp", a, b] => {
                let a: u32 = a.parse().map_err(|_| bad(line, "bad formula id"))?;
                let b: u32 = b.parse().map_err(|_| bad(line, "bad formula id"))?;
                if a as usize >= i || b as usize >= i {
                    return Err(bad(line, "implication must refer to earlier entries"));
                }
                table.implies(a, b)
            }
            _ => {
                return Err(bad(
                    line,
                    "expected `<id> atom <name>` or `<id> imp <a> <b>`",
                ))
            }
        };
        if id as usize != i {
            return Err(bad(line, format!("formula {i} repeats entry {id}")));
        }
    }

    let n = header_count(&mut lines, "nodes")?;
    let mut nodes = Vec::with_capacity(n.min(1 << 16));
    for i in 0..n {
        let (line, l) = lines.next()?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(bad(line, "expected `id level rule label formula`"));
        }
        if parts[0].parse::<usize>().ok() != Some(i) {
            return Err(bad(line, format!("expected node id {i}")));
        }
        let level: usize = parts[1].parse().map_err(|_| bad(line, "bad level"))?;
        let label: Option<Label> = match parts[3] {
            "-" => None,
            s => Some(s.parse().map_err(|_| bad(line, "bad label"))?),
        };
        let rule = match (parts[2], label) {
            ("hyp", Some(l)) => Rule::Hyp(l),
            ("intro", Some(l)) => Rule::ImpIntro(l),
            ("elim", None) => Rule::ImpElim,
            _ => return Err(bad(line, "bad rule/label combination")),
        };
        let formula: u32 = parts[4].parse().map_err(|_| bad(line, "bad formula id"))?;
        if formula as usize >= k {
            return Err(bad(line, "formula id out of range"));
        }
        nodes.push(DagNode {
            formula,
            rule,
            level,
        });
    }
    if root >= n {
        return Err(bad(lines.last, format!("root {root} is not a node")));
    }

    let m = header_count(&mut lines, "edges")?;
    let mut edges = Vec::with_capacity(m.min(1 << 16));
    for _ in 0..m {
        let (line, l) = lines.next()?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [p, c, r] = parts[..] else {
            return Err(bad(line, "expected `parent child role`"));
        };
        let parent: usize = p.parse().map_err(|_| bad(line, "bad node id"))?;
        let child: usize = c.parse().map_err(|_| bad(line, "bad node id"))?;
        if parent >= n || child >= n {
            return Err(bad(line, "edge endpoint out of range"));
        }
        let role = match r {
            "major" => Role::Major,
            "minor" => Role::Minor,
            "sole" => Role::Sole,
            _ => return Err(bad(line, "role must be major, minor or sole")),
        };
        edges.push(Edge {
            parent,
            role,
            child,
        });
    }
    lines.finish()?;
    Ok(DagProof {
        table,
        nodes,
        edges,
        root,
        mode,
    })
}
