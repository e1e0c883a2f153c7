use std::sync::OnceLock;

use branchforge::altembed::GroupChain;
use branchforge::fpwords::{evaluate, parse_word, random_word, render_word, FPWord};
use branchforge::gammalab::{certify_finite_order, random_generator_word, GammaScenario};
use branchforge::shrinklab::{greedy_shrinking_prefix, ZSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn n1() -> &'static GammaScenario {
    static S: OnceLock<GammaScenario> = OnceLock::new();
    S.get_or_init(|| GammaScenario::new("n1", GroupChain::trivial(), 1, 4, None).unwrap())
}

fn c2() -> &'static GammaScenario {
    static S: OnceLock<GammaScenario> = OnceLock::new();
    S.get_or_init(|| GammaScenario::new("c2", GroupChain::cyclic(2), 1, 7, None).unwrap())
}

fn word(s: &GammaScenario, seed: u64, max_len_b: usize) -> FPWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_word(s.shape(), 1, rng.gen_range(0..=max_len_b), &mut rng).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn evaluation_is_a_homomorphism(a in any::<u64>(), b in any::<u64>()) {
        let s = n1();
        let (u, v) = (word(s, a, 3), word(s, b, 3));
        let product = evaluate(&u.mul(&v, s.shape()).unwrap(), s.tree()).unwrap();
        let composed = evaluate(&u, s.tree()).unwrap().compose(&evaluate(&v, s.tree()).unwrap());
        prop_assert!(product.equal_up_to_depth(&composed, 4).unwrap());
    }

    #[test]
    fn inverse_cancels(a in any::<u64>()) {
        let s = c2();
        let w = word(s, a, 4);
        prop_assert!(w.mul(&w.inverse(s.shape()), s.shape()).unwrap().is_empty());
    }

    #[test]
    fn multiplication_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let s = c2();
        let sh = s.shape();
        let (x, y, z) = (word(s, a, 2), word(s, b, 2), word(s, c, 2));
        let left = x.mul(&y, sh).unwrap().mul(&z, sh).unwrap();
        let right = x.mul(&y.mul(&z, sh).unwrap(), sh).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn dsl_round_trip(a in any::<u64>()) {
        let s = c2();
        let w = word(s, a, 4);
        let text = render_word(&w, s.shape());
        prop_assert_eq!(parse_word(&text, s.shape(), 1).unwrap(), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zset_respects_bound(a in any::<u64>()) {
        let s = n1();
        let w = word(s, a, 3);
        prop_assume!(!w.length().is_short());
        let z = ZSet::compute(&w, s.shape()).unwrap();
        prop_assert!(z.len() as u128 <= z.bound());
        prop_assert!(z.check_witnesses(s.shape()).unwrap());
    }

    #[test]
    fn greedy_search_is_deterministic(a in any::<u64>()) {
        let s = c2();
        let mut rng = ChaCha8Rng::seed_from_u64(a);
        let words: Vec<FPWord> = (0..4)
            .map(|_| random_generator_word(s, 1, 2, &mut rng).unwrap().1)
            .collect();
        let first = greedy_shrinking_prefix(s.id(), &words, s.shape(), 4).unwrap();
        let second = greedy_shrinking_prefix(s.id(), &words, s.shape(), 4).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn order_certificates_verify(a in any::<u64>()) {
        let s = c2();
        let mut rng = ChaCha8Rng::seed_from_u64(a);
        let (_, w) = random_generator_word(s, 1, 2, &mut rng).unwrap();
        let cert = certify_finite_order(&w, s, 6, 3).unwrap();
        prop_assume!(cert.complete);
        let order = cert.order.unwrap();
        prop_assert!(cert.verified);
        prop_assert_eq!(cert.order_multiple.unwrap() % order, 0);
        let g = evaluate(&w, s.tree()).unwrap();
        prop_assert!(g.pow(order as i64).is_identity_to_depth(3).unwrap());
    }
}
