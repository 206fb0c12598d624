use num_bigint::BigUint;
use proptest::prelude::*;

use eigentree::construct::{join, synthesize, SynthConfig};
use eigentree::exact::{IntPoly, RatPoly};
use eigentree::fexpr::Dag;
use eigentree::verify::{sample_primes, tree_divisible, verify, verify_modular, VerifyConfig};

fn synth(c: &[i64]) -> eigentree::construct::SynthesisResult {
    synthesize(&RatPoly::from_i64s(c), &SynthConfig::default()).unwrap()
}

#[test]
fn fresh_primes_agree() {
    let other = sample_primes(8, 12345);
    for c in [
        &[-1i64, -1, 1][..],
        &[-1, -2, 1, 1],
        &[2, 0, -4, 0, 1],
        &[7, -7, 0, 1],
    ] {
        let r = synth(c);
        assert!(r.verdict.divisible());
        let v = verify_modular(r.store.dag(), r.witness, &r.effective, &other);
        assert!(v.divisible(), "{:?}", c);
    }
}

#[test]
fn witness_does_not_fit_a_wrong_polynomial() {
    let r = synth(&[-1, -1, 1]);
    let wrong = IntPoly::from_i64s(&[-1, -3, 1]);
    let v = verify_modular(r.store.dag(), r.witness, &wrong, &sample_primes(5, 1));
    assert!(!v.divisible());
}

#[test]
fn reducible_inputs() {
    // (x² − 1)(x² − 4), (x − 1)(x² − 3) and x(x² − 2)
    for c in [&[4i64, 0, -5, 0, 1][..], &[3, -3, -1, 1], &[0, -2, 0, 1]] {
        let r = synth(c);
        let input = IntPoly::from_i64s(c);
        assert!(input
            .to_rat()
            .div_rem(&r.effective.to_rat())
            .unwrap()
            .1
            .is_zero());
        if let Ok(t) = r.store.materialize(r.witness, 5000) {
            assert!(tree_divisible(&t, &r.effective), "{:?}", c);
        }
    }
}

#[test]
fn exact_and_modular_agree_when_both_apply() {
    for c in [&[4i64, 0, -5, 0, 1][..], &[-6, 0, 1], &[0, -2, 0, 1]] {
        let r = synth(c);
        let exact = verify(
            r.store.dag(),
            r.witness,
            &r.effective,
            &VerifyConfig::default(),
        );
        assert!(
            matches!(exact, eigentree::verify::Verdict::Exact { divisible: true }),
            "{:?}",
            c
        );
        let modular = verify_modular(r.store.dag(), r.witness, &r.effective, &sample_primes(3, 5));
        assert!(modular.divisible());
    }
}

#[test]
fn join_of_synthesized_witnesses() {
    let inputs: [&[i64]; 3] = [&[-1, -1, 1], &[-1, -3, 0, 1], &[-2, 0, 1]];
    let results: Vec<_> = inputs.iter().map(|c| synth(c)).collect();
    let mut dag = Dag::new();
    let roots: Vec<_> = results
        .iter()
        .map(|r| dag.import(r.store.dag(), r.witness))
        .collect();
    let root = join(&mut dag, &roots);
    let expected = BigUint::from(1u32)
        + results
            .iter()
            .map(|r| r.stats.tree_size.clone() * 2u32)
            .sum::<BigUint>();
    assert_eq!(*dag.size(root), expected);
    for r in &results {
        assert!(verify(&dag, root, &r.effective, &VerifyConfig::default()).divisible());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn random_quadratics(a in -6i64..7, b in -6i64..15) {
        // x² − a·x − b has real roots iff a² + 4b ≥ 0
        prop_assume!(a * a + 4 * b > 0);
        let p = RatPoly::from_i64s(&[-b, -a, 1]);
        let r = synthesize(&p, &SynthConfig::default()).unwrap();
        prop_assert!(r.verdict.divisible());
        let again = verify_modular(r.store.dag(), r.witness, &r.effective, &sample_primes(4, 99));
        prop_assert!(again.divisible());
        if let Ok(t) = r.store.materialize(r.witness, 2000) {
            prop_assert!(tree_divisible(&t, &r.effective));
        }
    }
}
