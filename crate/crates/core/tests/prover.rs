use std::collections::BTreeSet;

use dagcert::formula::{parse, Formula};
use dagcert::graph::{family, is_hamiltonian};
use dagcert::prover::{decide, parse_model, prove_beta, KripkeModel, ProverError, Verdict};
use dagcert::reduction::translate_beta;

/// Every formula over `atoms` with exactly `size` nodes.
fn formulas(atoms: &[&str], size: usize) -> Vec<Formula> {
    if size == 1 {
        return atoms.iter().map(|a| Formula::atom(a)).collect();
    }
    let mut out = Vec::new();
    let mut left = 1;
    while left + 2 <= size {
        let right = size - 1 - left;
        for a in formulas(atoms, left) {
            for b in formulas(atoms, right) {
                out.push(Formula::implies(a.clone(), b));
            }
        }
        left += 2;
    }
    out
}

/// Rooted partial orders on up to three worlds with every monotone valuation
/// of `p` and `q`.
fn small_models() -> Vec<KripkeModel> {
    let orders: Vec<(usize, Vec<(usize, usize)>)> = vec![
        (1, vec![]),
        (2, vec![(0, 1)]),
        (3, vec![(0, 1), (0, 2)]),
        (3, vec![(0, 1), (1, 2)]),
    ];
    let subsets: Vec<BTreeSet<String>> = vec![
        BTreeSet::new(),
        ["p".to_string()].into(),
        ["q".to_string()].into(),
        ["p".to_string(), "q".to_string()].into(),
    ];
    let mut out = Vec::new();
    for (n, pairs) in orders {
        let mut idx = vec![0usize; n];
        loop {
            let val: Vec<BTreeSet<String>> = idx.iter().map(|&i| subsets[i].clone()).collect();
            if let Ok(m) = KripkeModel::from_parts(val, pairs.clone()) {
                out.push(m);
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < subsets.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    out
}

#[test]
fn agrees_with_exhaustive_model_search() {
    let models = small_models();
    let mut checked = 0;
    for size in [1, 3, 5, 7] {
        for f in formulas(&["p", "q"], size) {
            let refuted = models.iter().any(|m| !m.eval(0, &f).unwrap());
            match decide(&f).unwrap() {
                Verdict::Valid(p) => {
                    assert!(!refuted, "{f} proved but has a small countermodel");
                    let c = p.check().unwrap();
                    assert!(c.is_closed());
                    assert_eq!(c.conclusion, f);
                    assert!(p.is_normal().unwrap());
                }
                Verdict::Invalid(m) => {
                    assert!(refuted, "{f} refuted but valid in all small models");
                    m.validate().unwrap();
                    assert!(!m.eval(m.root(), &f).unwrap());
                }
            }
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn deterministic_verdicts() {
    for s in [
        "((p->q)->p)->p",
        "((p->q)->r)->(p->r)->((q->r)->r)->r",
        "(((p->q)->p)->p)->q->q",
    ] {
        let f = parse(s).unwrap();
        assert_eq!(decide(&f).unwrap(), decide(&f).unwrap());
    }
}

#[test]
fn countermodel_text_round_trips() {
    let f = parse("((p->q)->r)->(p->r)->((q->r)->r)->r").unwrap();
    if let Verdict::Invalid(m) = decide(&f).unwrap() {
        assert_eq!(parse_model(&m.to_text()).unwrap(), m);
    }
    let peirce = parse("((p->q)->p)->p").unwrap();
    let Verdict::Invalid(m) = decide(&peirce).unwrap() else {
        panic!("Peirce's law is not intuitionistic");
    };
    assert_eq!(parse_model(&m.to_text()).unwrap(), m);
}

#[test]
fn beta_proofs_for_non_hamiltonian_graphs() {
    for n in 3..=5 {
        let g = family("path", n, 0).unwrap();
        let b = prove_beta(&g).unwrap();
        let c = b.proof.check().unwrap();
        assert!(c.is_closed());
        assert_eq!(c.conclusion, translate_beta(&g));
        assert!(b.proof.is_normal().unwrap());
        assert_eq!(b.metrics, b.proof.metrics());
    }
    for seed in 0..4 {
        let g = family("random", 4, seed).unwrap();
        match prove_beta(&g) {
            Ok(b) => {
                assert!(!is_hamiltonian(&g).unwrap());
                assert!(b.proof.check().unwrap().is_closed());
            }
            Err(e) => {
                assert_eq!(e, ProverError::NotATautology);
                assert!(is_hamiltonian(&g).unwrap());
            }
        }
    }
}

#[test]
fn hamiltonian_beta_is_refuted_by_decide() {
    let k3 = family("complete", 3, 0).unwrap();
    assert!(!decide(&translate_beta(&k3)).unwrap().is_valid());
}
