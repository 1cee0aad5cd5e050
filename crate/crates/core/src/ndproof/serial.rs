//! Canonical text form of tree proofs.
//!
//! ```text
//! ndproof 1
//! formulas 2
//! 0 p->p
//! 1 p
//! nodes 2
//! 0 intro 1 1 0
//! 1 hyp 1 - 1
//! ```
//!
//! Formulas are listed once, numbered by first use. Node lines are
//! `id rule label premises formula`, in preorder, with premise ids separated by
//! commas (major first) and `-` for "none".

use std::collections::HashMap;

use super::{Label, NdProof, Rule};
use crate::formula::Formula;
use crate::intern::{FormulaTable, PtrCache};
use crate::textio::{bad, header_count, parse_formula_table, Lines};

pub use crate::textio::SerialError;

pub(crate) fn write_proof(p: &NdProof) -> String {
    let nodes = p.nodes();
    let mut ids: HashMap<*const NdProof, usize> = HashMap::with_capacity(nodes.len());
    for (i, n) in nodes.iter().enumerate() {
        ids.insert(*n as *const NdProof, i);
    }
    let mut table = FormulaTable::new();
    let mut cache = PtrCache::new();
    let mut first_use: HashMap<u32, usize> = HashMap::new();
    let mut listed: Vec<&Formula> = Vec::new();
    let mut node_fids = Vec::with_capacity(nodes.len());
    for n in &nodes {
        let fid = table.intern_with(&n.formula, &mut cache);
        let idx = *first_use.entry(fid).or_insert_with(|| {
            listed.push(&n.formula);
            listed.len() - 1
        });
        node_fids.push(idx);
    }

    let mut out = String::from("ndproof 1\n");
    out.push_str(&format!("formulas {}\n", listed.len()));
    for (i, f) in listed.iter().enumerate() {
        out.push_str(&format!("{i} {}\n", f.render()));
    }
    out.push_str(&format!("nodes {}\n", nodes.len()));
    for (i, n) in nodes.iter().enumerate() {
        let label = n
            .rule
            .label()
            .map_or_else(|| "-".to_string(), |l| l.to_string());
        let premises = if n.premises.is_empty() {
            "-".to_string()
        } else {
            n.premises
                .iter()
                .map(|c| ids[&(c as *const NdProof)].to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&format!(
            "{i} {} {label} {premises} {}\n",
            n.rule.tag(),
            node_fids[i]
        ));
    }
    out
}

pub fn parse_proof(text: &str) -> Result<NdProof, SerialError> {
    let mut lines = Lines::new(text);
    let (line, head) = lines.next()?;
    if head != "ndproof 1" {
        return Err(bad(line, "expected header `ndproof 1`"));
    }
    let formulas = parse_formula_table(&mut lines)?;
    let count = header_count(&mut lines, "nodes")?;
    if count == 0 {
        return Err(bad(lines.last, "proof has no nodes"));
    }
    struct Raw {
        line: usize,
        rule: Rule,
        premises: Vec<usize>,
        formula: usize,
    }
    let mut raw = Vec::with_capacity(count.min(1 << 16));
    for i in 0..count {
        let (line, l) = lines.next()?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(bad(line, "expected `id rule label premises formula`"));
        }
        if parts[0].parse::<usize>().ok() != Some(i) {
            return Err(bad(line, format!("expected node id {i}")));
        }
        let label: Option<Label> = match parts[2] {
            "-" => None,
            s => Some(s.parse().map_err(|_| bad(line, "bad label"))?),
        };
        let rule = match (parts[1], label) {
            ("hyp", Some(l)) => Rule::Hyp(l),
            ("intro", Some(l)) => Rule::ImpIntro(l),
            ("elim", None) => Rule::ImpElim,
            _ => return Err(bad(line, "bad rule/label combination")),
        };
        let premises: Vec<usize> = if parts[3] == "-" {
            Vec::new()
        } else {
            parts[3]
                .split(',')
                .map(|s| s.parse().map_err(|_| bad(line, "bad premise id")))
                .collect::<Result<_, _>>()?
        };
        for &c in &premises {
            if c <= i || c >= count {
                return Err(bad(line, format!("premise {c} is not a later node")));
            }
        }
        let formula: usize = parts[4]
            .parse()
            .map_err(|_| bad(line, "bad formula index"))?;
        if formula >= formulas.len() {
            return Err(bad(line, "formula index out of range"));
        }
        raw.push(Raw {
            line,
            rule,
            premises,
            formula,
        });
    }
    lines.finish()?;

    let mut used = vec![false; count];
    let mut built: Vec<Option<NdProof>> = (0..count).map(|_| None).collect();
    for i in (0..count).rev() {
        let r = &raw[i];
        let mut premises = Vec::with_capacity(r.premises.len());
        for &c in &r.premises {
            if used[c] {
                return Err(bad(r.line, format!("node {c} used as a premise twice")));
            }
            used[c] = true;
            premises.push(built[c].take().expect("built"));
        }
        built[i] = Some(NdProof::new(formulas[r.formula].clone(), r.rule, premises));
    }
    if let Some(orphan) = (1..count).find(|&i| !used[i]) {
        return Err(bad(
            raw[orphan].line,
            format!("node {orphan} is not a premise of anything"),
        ));
    }
    Ok(built[0].take().expect("root"))
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn identity_text_is_canonical() {
        let p = NdProof::intro(f("p"), 1, NdProof::hyp(f("p"), 1));
        let text = p.to_text();
        assert_eq!(
            text,
            "ndproof 1\nformulas 2\n0 p->p\n1 p\nnodes 2\n0 intro 1 1 0\n1 hyp 1 - 1\n"
        );
        assert_eq!(parse_proof(&text).unwrap(), p);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_proof("").is_err());
        assert!(parse_proof("ndproof 2\n").is_err());
        let shared =
            "ndproof 1\nformulas 1\n0 p\nnodes 3\n0 elim - 1,1 0\n1 hyp 1 - 0\n2 hyp 1 - 0\n";
        assert!(parse_proof(shared).is_err());
        let backwards = "ndproof 1\nformulas 1\n0 p\nnodes 2\n0 hyp 1 - 0\n1 intro 1 0 0\n";
        assert!(parse_proof(backwards).is_err());
        let bad_formula = "ndproof 1\nformulas 1\n0 p->\nnodes 1\n0 hyp 1 - 0\n";
        assert_eq!(parse_proof(bad_formula).unwrap_err().line, 3);
    }
}
