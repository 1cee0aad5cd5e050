use dagcert::compression::{compress, parse_dag, Mode};
use dagcert::corpus::{random_dag, random_proof, random_proof_corpus};
use dagcert::dagcheck::{
    check_dag, corrupt, emit_trace, mutate_trace, parse_trace, step_budget, verify_trace,
    CheckResult, MutationKind, RejectReason, Step, ALL_MUTATIONS, STEP_CONSTANT,
};
use dagcert::formula::parse;
use dagcert::graph::family;
use dagcert::prover::{decide, prove_beta, Verdict};
use dagcert::reduction::translate_beta;
use dagcert::NdProof;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn oracle_valid(f: &dagcert::Formula) -> bool {
    matches!(decide(f).unwrap(), Verdict::Valid(_))
}

#[test]
fn beta_p3_certificate_is_accepted() {
    let g = family("path", 3, 0).unwrap();
    let b = prove_beta(&g).unwrap();
    let d = compress(&b.proof, Mode::Subtree).unwrap();
    match check_dag(&d) {
        CheckResult::Accept { conclusion, steps } => {
            assert_eq!(conclusion, translate_beta(&g));
            assert!(steps <= step_budget(&d, STEP_CONSTANT));
        }
        r => panic!("{r:?}"),
    }
}

#[test]
fn honest_subtree_certificates_are_accepted() {
    for p in random_proof_corpus(11, 300, 60) {
        let d = compress(&p, Mode::Subtree).unwrap();
        let r = check_dag(&d);
        assert!(r.is_accept(), "{r:?}");
        assert!(r.steps() <= step_budget(&d, STEP_CONSTANT));
    }
}

#[test]
fn accepted_closed_certificates_have_valid_conclusions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut accepted = 0;
    let mut certificates = Vec::new();
    for (i, p) in random_proof_corpus(12, 150, 40).into_iter().enumerate() {
        for mode in [Mode::Subtree, Mode::Label] {
            let d = compress(&p, mode).unwrap();
            for kind in ALL_MUTATIONS {
                if let Ok(bad) = corrupt(&d, i as u64, kind) {
                    certificates.push(bad);
                }
            }
            certificates.push(d);
        }
    }
    for _ in 0..2000 {
        certificates.push(random_dag(&mut rng, 12));
    }
    for d in &certificates {
        if let CheckResult::Accept { conclusion, .. } = check_dag(d) {
            accepted += 1;
            assert!(oracle_valid(&conclusion), "accepted invalid {conclusion}");
        }
    }
    assert!(accepted > 100);
}

#[test]
fn subtree_mutations_are_caught() {
    for (i, p) in random_proof_corpus(13, 200, 60).into_iter().enumerate() {
        let d = compress(&p, Mode::Subtree).unwrap();
        for kind in ALL_MUTATIONS {
            let Ok(bad) = corrupt(&d, i as u64, kind) else {
                continue;
            };
            match check_dag(&bad) {
                CheckResult::Accept { conclusion, .. } => {
                    assert_ne!(&conclusion, p.conclusion(), "{kind} slipped through");
                }
                CheckResult::Reject { .. } => {}
            }
            let again = corrupt(&d, i as u64, kind).unwrap();
            assert_eq!(again, bad);
            assert_eq!(parse_dag(&bad.to_text()).unwrap(), bad);
        }
    }
}

#[test]
fn drop_discharge_identity() {
    let p = NdProof::intro(parse("p").unwrap(), 1, NdProof::hyp(parse("p").unwrap(), 1));
    let d = compress(&p, Mode::Subtree).unwrap();
    let bad = corrupt(&d, 42, MutationKind::DropDischarge).unwrap();
    assert_eq!(check_dag(&bad).reason(), Some(RejectReason::Discharge));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn genuine_traces_verify(seed in any::<u64>(), label in any::<bool>()) {
        let p = random_proof(&mut ChaCha8Rng::seed_from_u64(seed), 60);
        let mode = if label { Mode::Label } else { Mode::Subtree };
        let d = compress(&p, mode).unwrap();
        let t = emit_trace(&d);
        prop_assert_eq!(t.len() as u64, check_dag(&d).steps());
        prop_assert_eq!(verify_trace(&t, &d), Ok(true));
        prop_assert_eq!(parse_trace(&t.to_text()).unwrap(), t.clone());
        let bad = corrupt(&d, seed, MutationKind::Relabel).unwrap();
        let tb = emit_trace(&bad);
        prop_assert!(matches!(tb.steps.last(), Some(Step::Accept | Step::Reject(..))));
        prop_assert_eq!(verify_trace(&tb, &bad), Ok(true));
    }

    #[test]
    fn trace_mutations_are_caught(seed in any::<u64>()) {
        let p = random_proof(&mut ChaCha8Rng::seed_from_u64(seed), 60);
        let d = compress(&p, Mode::Subtree).unwrap();
        let t = emit_trace(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mutant = mutate_trace(&t, &mut rng);
        prop_assert_ne!(&mutant, &t);
        prop_assert_eq!(verify_trace(&mutant, &d), Ok(false));
    }
}

#[test]
fn malformed_text_never_panics() {
    let p = random_proof_corpus(3, 1, 30).remove(0);
    let text = compress(&p, Mode::Subtree).unwrap().to_text();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    use rand::Rng;
    for _ in 0..500 {
        let mut bytes = text.clone().into_bytes();
        let i = rng.gen_range(0..bytes.len());
        bytes[i] = b"0123456789 -\nabcz>"[rng.gen_range(0..18)];
        if let Ok(s) = String::from_utf8(bytes) {
            if let Ok(d) = parse_dag(&s) {
                let _ = check_dag(&d);
            }
        }
    }
}
