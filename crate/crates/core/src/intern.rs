//! Hash-consed formula table.
//!
//! Maps structurally equal formulas to one dense id so that equality and
//! hashing are O(1) on the hot paths (proof search, compression, checking).

use std::collections::HashMap;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::formula::Formula;

pub type FormulaId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Atom(u32),
    Implies(FormulaId, FormulaId),
}

#[derive(Default, Clone, Debug)]
pub struct FormulaTable {
    shapes: Vec<Shape>,
    formulas: Vec<Formula>,
    by_shape: HashMap<Shape, FormulaId>,
    atom_names: Vec<Arc<str>>,
    atom_ids: HashMap<Arc<str>, u32>,
}

impl FormulaTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn shape(&self, id: FormulaId) -> Shape {
        self.shapes[id as usize]
    }

    pub fn formula(&self, id: FormulaId) -> &Formula {
        &self.formulas[id as usize]
    }

    pub fn atom_name(&self, atom: u32) -> &str {
        &self.atom_names[atom as usize]
    }

    pub fn is_atom(&self, id: FormulaId) -> bool {
        matches!(self.shape(id), Shape::Atom(_))
    }

    pub fn implication(&self, id: FormulaId) -> Option<(FormulaId, FormulaId)> {
        match self.shape(id) {
            Shape::Implies(a, b) => Some((a, b)),
            Shape::Atom(_) => None,
        }
    }

    pub fn lookup(&self, f: &Formula) -> Option<FormulaId> {
        match f {
            Formula::Atom(name) => {
                let a = *self.atom_ids.get(name)?;
                self.by_shape.get(&Shape::Atom(a)).copied()
            }
            Formula::Implies(a, b) => {
                let ia = self.lookup(a)?;
                let ib = self.lookup(b)?;
                self.by_shape.get(&Shape::Implies(ia, ib)).copied()
            }
        }
    }

    /// Id of `a -> b` if it has been interned.
    pub fn find_implies(&self, a: FormulaId, b: FormulaId) -> Option<FormulaId> {
        self.by_shape.get(&Shape::Implies(a, b)).copied()
    }

    pub fn atom(&mut self, name: &str) -> FormulaId {
        let a = match self.atom_ids.get(name) {
            Some(&a) => a,
            None => {
                let a = self.atom_names.len() as u32;
                let name: Arc<str> = Arc::from(name);
                self.atom_names.push(name.clone());
                self.atom_ids.insert(name, a);
                a
            }
        };
        self.insert_shape(Shape::Atom(a))
    }

    pub fn implies(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.insert_shape(Shape::Implies(a, b))
    }

    fn insert_shape(&mut self, shape: Shape) -> FormulaId {
        if let Some(&id) = self.by_shape.get(&shape) {
            return id;
        }
        let formula = match shape {
            Shape::Atom(a) => Formula::Atom(self.atom_names[a as usize].clone()),
            Shape::Implies(a, b) => Formula::Implies(
                Arc::new(self.formulas[a as usize].clone()),
                Arc::new(self.formulas[b as usize].clone()),
            ),
        };
        let id = self.shapes.len() as FormulaId;
        self.shapes.push(shape);
        self.formulas.push(formula);
        self.by_shape.insert(shape, id);
        id
    }

    /// Interns `f` and all its subformulas. Antecedents are interned before
    /// consequents, so ids follow a left-first post-order of first occurrence.
    pub fn intern(&mut self, f: &Formula) -> FormulaId {
        match f {
            Formula::Atom(name) => self.atom(name),
            Formula::Implies(a, b) => {
                let ia = self.intern(a);
                let ib = self.intern(b);
                self.implies(ia, ib)
            }
        }
    }

    /// Like [`intern`](Self::intern), memoised on the addresses of shared
    /// subformulas. Worth it when many formulas share `Arc` children, as the
    /// formulas of one proof do.
    pub fn intern_with<'a>(&mut self, f: &'a Formula, cache: &mut PtrCache<'a>) -> FormulaId {
        match f {
            Formula::Atom(name) => self.atom(name),
            Formula::Implies(a, b) => {
                let key = (Arc::as_ptr(a), Arc::as_ptr(b));
                if let Some(&id) = cache.map.get(&key) {
                    return id;
                }
                let ia = self.intern_with(a, cache);
                let ib = self.intern_with(b, cache);
                let id = self.implies(ia, ib);
                cache.map.insert(key, id);
                id
            }
        }
    }

    pub fn node_count(&self, id: FormulaId) -> usize {
        let mut count = 0;
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            count += 1;
            if let Shape::Implies(a, b) = self.shape(x) {
                stack.push(a);
                stack.push(b);
            }
        }
        count
    }
}

/// Address memo for [`FormulaTable::intern_with`]; borrows the formulas it
/// has seen so the addresses stay valid.
#[derive(Default)]
pub struct PtrCache<'a> {
    map: HashMap<(*const Formula, *const Formula), FormulaId>,
    _borrow: PhantomData<&'a Formula>,
}

impl PtrCache<'_> {
    pub fn new() -> Self {
        Self::default()
    }
}
