//! Classical falsifiability by backtracking over atoms with three-valued
//! evaluation. Any falsifying assignment is a one-world Kripke countermodel.

use crate::intern::{FormulaId, FormulaTable, Shape};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tv {
    False,
    True,
    Unknown,
}

/// Returns the atoms set true by some assignment falsifying `target`, or
/// `None` if `target` is a classical tautology. Only formulas in
/// `table[..=target]` are evaluated, so `target` should have been interned
/// last.
pub(crate) fn falsify(table: &FormulaTable, target: FormulaId) -> Option<Vec<u32>> {
    let limit = target as usize + 1;
    let mut atoms: Vec<u32> = Vec::new();
    for id in 0..limit as u32 {
        if let Shape::Atom(a) = table.shape(id) {
            atoms.push(a);
        }
    }
    let max_atom = atoms.iter().copied().max().map_or(0, |a| a as usize + 1);
    let mut assignment = vec![Tv::Unknown; max_atom];
    let mut scratch = vec![Tv::Unknown; limit];
    if search(table, target, &atoms, 0, &mut assignment, &mut scratch) {
        Some(
            atoms
                .iter()
                .copied()
                .filter(|&a| assignment[a as usize] == Tv::True)
                .collect(),
        )
    } else {
        None
    }
}

fn evaluate(table: &FormulaTable, assignment: &[Tv], scratch: &mut [Tv]) {
    for id in 0..scratch.len() {
        scratch[id] = match table.shape(id as u32) {
            Shape::Atom(a) => assignment[a as usize],
            Shape::Implies(a, b) => match (scratch[a as usize], scratch[b as usize]) {
                (Tv::False, _) | (_, Tv::True) => Tv::True,
                (Tv::True, Tv::False) => Tv::False,
                _ => Tv::Unknown,
            },
        };
    }
}

fn search(
    table: &FormulaTable,
    target: FormulaId,
    atoms: &[u32],
    next: usize,
    assignment: &mut Vec<Tv>,
    scratch: &mut [Tv],
) -> bool {
    evaluate(table, assignment, scratch);
    match scratch[target as usize] {
        Tv::True => return false,
        Tv::False => {
            for &a in &atoms[next..] {
                if assignment[a as usize] == Tv::Unknown {
                    assignment[a as usize] = Tv::False;
                }
            }
            return true;
        }
        Tv::Unknown => {}
    }
    let Some(&atom) = atoms.get(next) else {
        return false;
    };
    for value in [Tv::True, Tv::False] {
        assignment[atom as usize] = value;
        if search(table, target, atoms, next + 1, assignment, scratch) {
            return true;
        }
    }
    assignment[atom as usize] = Tv::Unknown;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn run(s: &str) -> Option<Vec<String>> {
        let mut t = FormulaTable::new();
        let id = t.intern(&parse(s).unwrap());
        falsify(&t, id).map(|v| v.iter().map(|&a| t.atom_name(a).to_string()).collect())
    }

    #[test]
    fn tautologies_and_countermodels() {
        assert_eq!(run("p->p"), None);
        assert_eq!(run("((p->q)->p)->p"), None);
        assert_eq!(run("p"), Some(vec![]));
        assert_eq!(run("q->p"), Some(vec!["q".to_string()]));
    }
}
