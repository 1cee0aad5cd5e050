use dagcert::compression::{compress, compression_stats, parse_dag, unfold, Mode, UnfoldError};
use dagcert::compression::{DagNode, DagProof, Edge, Role};
use dagcert::corpus::random_proof;
use dagcert::dagcheck::check_dag;
use dagcert::formula::parse;
use dagcert::intern::FormulaTable;
use dagcert::ndproof::Rule;
use dagcert::prover::prove_beta;
use dagcert::Graph;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn label_bound(p: &dagcert::NdProof) -> usize {
    (p.metrics().height + 1) * p.conclusion().subformulas().len() * 3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subtree_round_trip(seed in any::<u64>()) {
        let p = random_proof(&mut ChaCha8Rng::seed_from_u64(seed), 60);
        let d = compress(&p, Mode::Subtree).unwrap();
        prop_assert_eq!(d.conclusion(), p.conclusion());
        prop_assert_eq!(unfold(&d, p.size()).unwrap(), p.clone());
        prop_assert!(check_dag(&d).is_accept());
        prop_assert_eq!(parse_dag(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn label_mode_is_coarser_and_bounded(seed in any::<u64>()) {
        let p = random_proof(&mut ChaCha8Rng::seed_from_u64(seed), 60);
        let sub = compress(&p, Mode::Subtree).unwrap();
        let lab = compress(&p, Mode::Label).unwrap();
        prop_assert_eq!(lab.conclusion(), p.conclusion());
        prop_assert!(sub.node_count() <= p.size());
        prop_assert!(lab.node_count() <= sub.node_count());
        prop_assert!(lab.node_count() <= label_bound(&p));
    }
}

#[test]
fn beta_p4_label_bound() {
    let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]);
    let b = prove_beta(&g).unwrap();
    let d = compress(&b.proof, Mode::Label).unwrap();
    assert!(d.node_count() <= label_bound(&b.proof));
    let s = compression_stats(&b.proof, &d);
    assert_eq!(s.tree_size, b.metrics.size);
    assert!(s.dag_nodes <= s.tree_size);
}

#[test]
fn unfold_budget_on_self_similar_dag() {
    // a chain of 20 eliminations whose major and minor premise are the same
    // node, so the tree has 2^20 - 1 nodes
    let mut table = FormulaTable::new();
    let p = table.atom("p");
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for level in 0..20 {
        nodes.push(DagNode {
            formula: p,
            rule: Rule::ImpElim,
            level,
        });
        if level > 0 {
            edges.push(Edge {
                parent: level - 1,
                role: Role::Major,
                child: level,
            });
            edges.push(Edge {
                parent: level - 1,
                role: Role::Minor,
                child: level,
            });
        }
    }
    let wide = DagProof {
        table,
        nodes,
        edges,
        root: 0,
        mode: Mode::Label,
    };
    match unfold(&wide, 10) {
        Err(UnfoldError::BudgetExceeded {
            budget: 10,
            partial,
        }) => assert_eq!(partial, 11),
        other => panic!("{other:?}"),
    }
}

#[test]
fn uncollapsed_unfolds_to_itself() {
    let p = dagcert::NdProof::intro(
        parse("p->q").unwrap(),
        1,
        dagcert::NdProof::intro(
            parse("p").unwrap(),
            2,
            dagcert::NdProof::elim(
                dagcert::NdProof::hyp(parse("p->q").unwrap(), 1),
                dagcert::NdProof::hyp(parse("p").unwrap(), 2),
            ),
        ),
    );
    let d = compress(&p, Mode::Subtree).unwrap();
    assert_eq!(d.node_count(), p.size());
    for budget in [p.size(), p.size() + 10] {
        assert_eq!(unfold(&d, budget).unwrap(), p);
    }
}
