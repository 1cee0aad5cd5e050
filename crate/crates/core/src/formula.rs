//! Implication-only formulas: representation, text syntax and subformula analytics.
//!
//! The grammar is `F ::= atom | F "->" F | "(" F ")"` with `->` associating to
//! the right. Atom names match `[a-zA-Z][a-zA-Z0-9_]*`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Name of the atom the reduction uses in place of absurdity.
pub const ABSURDITY: &str = "q";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Arc<str>),
    Implies(Arc<Formula>, Arc<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn implies(antecedent: Formula, consequent: Formula) -> Formula {
        Formula::Implies(Arc::new(antecedent), Arc::new(consequent))
    }

    /// Builds `a1 -> a2 -> ... -> last`.
    pub fn chain<I: IntoIterator<Item = Formula>>(antecedents: I, last: Formula) -> Formula {
        let items: Vec<Formula> = antecedents.into_iter().collect();
        items
            .into_iter()
            .rev()
            .fold(last, |acc, a| Formula::implies(a, acc))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn atom_name(&self) -> Option<&str> {
        match self {
            Formula::Atom(name) => Some(name),
            Formula::Implies(..) => None,
        }
    }

    /// Splits `A -> B` into `(A, B)`.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Implies(a, b) => Some((a, b)),
            Formula::Atom(_) => None,
        }
    }

    /// Occurrences of atoms plus occurrences of implications.
    pub fn node_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            count += 1;
            if let Formula::Implies(a, b) = f {
                stack.push(a);
                stack.push(b);
            }
        }
        count
    }

    /// All distinct subformulas, including `self`.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut seen: HashSet<*const Formula> = HashSet::new();
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if !seen.insert(f as *const Formula) {
                continue;
            }
            if out.insert(f.clone()) {
                if let Formula::Implies(a, b) = f {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        out
    }

    /// Distinct atom names, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut seen: HashSet<*const Formula> = HashSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if !seen.insert(f as *const Formula) {
                continue;
            }
            match f {
                Formula::Atom(name) => {
                    out.insert(name.to_string());
                }
                Formula::Implies(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        write_formula(self, &mut out);
        out
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    // the consequent spine is written iteratively so long right-nested
    // chains do not recurse
    let mut cur = f;
    loop {
        match cur {
            Formula::Atom(name) => {
                out.push_str(name);
                return;
            }
            Formula::Implies(a, b) => {
                if a.is_atom() {
                    write_formula(a, out);
                } else {
                    out.push('(');
                    write_formula(a, out);
                    out.push(')');
                }
                out.push_str("->");
                cur = b;
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

pub fn is_valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty input"));
    }
    let f = p.formula()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

/// Parses a corpus: one formula per line, blank lines and `#` comments skipped.
/// Errors carry the 1-based line number.
pub fn parse_corpus(text: &str) -> Result<Vec<Formula>, (usize, ParseError)> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push(parse(trimmed).map_err(|e| (idx + 1, e))?);
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn eat_arrow(&mut self) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(b"->") {
            self.pos += 2;
            true
        } else {
            false
        }
    }

    // F ::= primary ("->" primary)* folded to the right
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.primary()?];
        while self.eat_arrow() {
            parts.push(self.primary()?);
        }
        let last = parts.pop().expect("at least one primary");
        Ok(Formula::chain(parts, last))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            None => Err(self.error("expected formula")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.formula()?;
                self.skip_ws();
                if self.src.get(self.pos) != Some(&b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(Formula::atom(name))
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }
}
