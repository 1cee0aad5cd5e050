//! Finite Kripke models for implicational logic.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::Formula;
use crate::intern::{FormulaTable, Shape};
use crate::textio::{bad, header_count, Lines, SerialError};

/// Worlds are `0..len`; `le[u][v]` means `u <= v`. World 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    valuation: Vec<BTreeSet<String>>,
    le: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("unknown world {0}")]
    UnknownWorld(usize),
    #[error("order is not a partial order with least element 0")]
    NotAnOrder,
    #[error("valuation is not monotone between worlds {0} and {1}")]
    NotMonotone(usize, usize),
}

impl KripkeModel {
    /// A one-world model forcing exactly `atoms`.
    pub fn single(atoms: impl IntoIterator<Item = String>) -> KripkeModel {
        KripkeModel {
            valuation: vec![atoms.into_iter().collect()],
            le: vec![vec![true]],
        }
    }

    /// Builds a model from valuations and strict order pairs `(u, v)` with
    /// `u < v`; the reflexive-transitive closure is taken.
    pub fn from_parts(
        valuation: Vec<BTreeSet<String>>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<KripkeModel, KripkeError> {
        let n = valuation.len();
        if n == 0 {
            return Err(KripkeError::NotAnOrder);
        }
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (u, v) in pairs {
            if u >= n {
                return Err(KripkeError::UnknownWorld(u));
            }
            if v >= n {
                return Err(KripkeError::UnknownWorld(v));
            }
            le[u][v] = true;
        }
        for k in 0..n {
            let through = le[k].clone();
            for row in le.iter_mut() {
                if row[k] {
                    for (x, &y) in row.iter_mut().zip(&through) {
                        *x |= y;
                    }
                }
            }
        }
        let m = KripkeModel { valuation, le };
        m.validate()?;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.valuation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valuation.is_empty()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn valuation(&self, w: usize) -> &BTreeSet<String> {
        &self.valuation[w]
    }

    pub fn le(&self, u: usize, v: usize) -> bool {
        self.le[u][v]
    }

    /// Partial order with the root below everything, and monotone valuation.
    pub fn validate(&self) -> Result<(), KripkeError> {
        let n = self.len();
        if n == 0 || self.le.len() != n {
            return Err(KripkeError::NotAnOrder);
        }
        for u in 0..n {
            if !self.le[u][u] || !self.le[0][u] {
                return Err(KripkeError::NotAnOrder);
            }
            for v in 0..n {
                if u != v && self.le[u][v] && self.le[v][u] {
                    return Err(KripkeError::NotAnOrder);
                }
                for w in 0..n {
                    if self.le[u][v] && self.le[v][w] && !self.le[u][w] {
                        return Err(KripkeError::NotAnOrder);
                    }
                }
                if self.le[u][v] && !self.valuation[u].is_subset(&self.valuation[v]) {
                    return Err(KripkeError::NotMonotone(u, v));
                }
            }
        }
        Ok(())
    }

    /// Does world `w` force `f`?
    pub fn eval(&self, w: usize, f: &Formula) -> Result<bool, KripkeError> {
        if w >= self.len() {
            return Err(KripkeError::UnknownWorld(w));
        }
        let mut table = FormulaTable::new();
        let id = table.intern(f);
        Ok(self.forcing(&table)[id as usize][w])
    }

    /// `forced[s][w]` for every formula `s` in `table`, computed in id order
    /// (subformulas always have smaller ids than their superformulas).
    pub(crate) fn forcing(&self, table: &FormulaTable) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut forced: Vec<Vec<bool>> = Vec::with_capacity(table.len());
        for id in 0..table.len() as u32 {
            let row = match table.shape(id) {
                Shape::Atom(a) => {
                    let name = table.atom_name(a);
                    (0..n).map(|w| self.valuation[w].contains(name)).collect()
                }
                Shape::Implies(a, b) => {
                    let (fa, fb) = (&forced[a as usize], &forced[b as usize]);
                    (0..n)
                        .map(|w| (0..n).all(|v| !self.le[w][v] || !fa[v] || fb[v]))
                        .collect()
                }
            };
            forced.push(row);
        }
        forced
    }

    /// Keeps only the listed worlds (which must include the root).
    pub(crate) fn restrict(&self, keep: &[usize]) -> KripkeModel {
        KripkeModel {
            valuation: keep.iter().map(|&w| self.valuation[w].clone()).collect(),
            le: keep
                .iter()
                .map(|&u| keep.iter().map(|&v| self.le[u][v]).collect())
                .collect(),
        }
    }

    /// Greedily deletes non-root worlds, last first, while the root still
    /// refutes `f`.
    pub fn minimize(&self, f: &Formula) -> KripkeModel {
        let mut table = FormulaTable::new();
        let id = table.intern(f) as usize;
        let mut keep: Vec<usize> = (0..self.len()).collect();
        let mut idx = keep.len();
        while idx > 1 {
            idx -= 1;
            let mut trial = keep.clone();
            trial.remove(idx);
            if !self.restrict(&trial).forcing(&table)[id][0] {
                keep = trial;
            }
        }
        self.restrict(&keep)
    }

    /// ```text
    /// kripke 1
    /// worlds 2
    /// 0 -
    /// 1 p
    /// order 1
    /// 0 1
    /// ```
    /// Atoms are comma separated; `order` lists every strict pair `u < v`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("kripke 1\n");
        let _ = writeln!(out, "worlds {}", self.len());
        for (w, atoms) in self.valuation.iter().enumerate() {
            let list = if atoms.is_empty() {
                "-".to_string()
            } else {
                atoms.iter().cloned().collect::<Vec<_>>().join(",")
            };
            let _ = writeln!(out, "{w} {list}");
        }
        let pairs: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|u| (0..self.len()).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && self.le[u][v])
            .collect();
        let _ = writeln!(out, "order {}", pairs.len());
        for (u, v) in pairs {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

pub fn kripke_eval(m: &KripkeModel, w: usize, f: &Formula) -> Result<bool, KripkeError> {
    m.eval(w, f)
}

pub fn parse_model(text: &str) -> Result<KripkeModel, SerialError> {
    let mut lines = Lines::new(text);
    let (line, head) = lines.next()?;
    if head != "kripke 1" {
        return Err(bad(line, "expected header `kripke 1`"));
    }
    let n = header_count(&mut lines, "worlds")?;
    let mut valuation = Vec::with_capacity(n.min(1 << 16));
    for w in 0..n {
        let (line, l) = lines.next()?;
        let (idx, atoms) = l
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad(line, "expected `<world> <atoms>`"))?;
        if idx.parse::<usize>().ok() != Some(w) {
            return Err(bad(line, format!("expected world {w}")));
        }
        let atoms = atoms.trim();
        let set: BTreeSet<String> = if atoms == "-" {
            BTreeSet::new()
        } else {
            atoms.split(',').map(|a| a.trim().to_string()).collect()
        };
        valuation.push(set);
    }
    let m = header_count(&mut lines, "order")?;
    let mut pairs = Vec::with_capacity(m.min(1 << 16));
    for _ in 0..m {
        let (line, l) = lines.next()?;
        let nums: Option<Vec<usize>> = l.split_whitespace().map(|x| x.parse().ok()).collect();
        match nums.as_deref() {
            Some([u, v]) => pairs.push((*u, *v)),
            _ => return Err(bad(line, "expected `<u> <v>`")),
        }
    }
    lines.finish()?;
    KripkeModel::from_parts(valuation, pairs).map_err(|e| bad(lines.last, e.to_string()))
}
