//! Counting machinery: Z-sets and their size bound, Landau's function, the
//! counting-hypothesis ratio, and the greedy construction of shrinking spine
//! prefixes with replayable certificates.

mod landau;
mod ratio;
mod search;
mod zset;

pub use landau::{landau, landau_bound_check, landau_row, LandauRow, LANDAU_LIMIT};
pub use ratio::{HypothesisRatio, RatioReport};
pub use search::{
    greedy_shrinking_prefix, replay_certificate, ActiveWord, LevelRecord, Prefix,
    ShrinkCertificate, TrackedWord, ZSetRecord,
};
pub use zset::{Witness, ZSet};

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::altembed::GroupChain;
    use crate::error::Error;
    use crate::fpwords::{parse_word, random_word, FPWord};
    use crate::treeauto::TreeShape;

    fn shape(chain: GroupChain, horizon: usize) -> TreeShape {
        TreeShape::new(chain, 1, horizon).unwrap()
    }

    fn rational(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn pruned_zset_matches_exhaustive() {
        let sh = shape(GroupChain::trivial(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut nonempty = 0;
        for _ in 0..40 {
            let w = random_word(&sh, 1, rng.gen_range(1..=3), &mut rng).unwrap();
            if w.length().is_short() {
                continue;
            }
            let fast = ZSet::compute(&w, &sh).unwrap();
            let slow = ZSet::compute_exhaustive(&w, &sh).unwrap();
            assert_eq!(fast, slow);
            assert!(fast.len() as u128 <= fast.bound());
            assert!(fast.check_witnesses(&sh).unwrap());
            nonempty += usize::from(!fast.is_empty());
        }
        assert!(nonempty > 0);
    }

    #[test]
    fn conjugated_single_letter_has_empty_zset() {
        let sh = shape(GroupChain::trivial(), 2);
        let w = parse_word("A((1 2 3 4 5)) B(q=(1 2 3)) A((1 5 4 3 2))", &sh, 1).unwrap();
        assert_eq!(w.length(), crate::fpwords::LenPair::new(1, 2));
        assert!(ZSet::compute(&w, &sh).unwrap().is_empty());
        assert!(ZSet::compute_exhaustive(&w, &sh).unwrap().is_empty());
    }

    #[test]
    fn short_words_have_no_zset() {
        let sh = shape(GroupChain::trivial(), 2);
        let w = parse_word("B(q=(1 2 3))", &sh, 1).unwrap();
        assert!(matches!(ZSet::compute(&w, &sh), Err(Error::Domain(_))));
    }

    #[test]
    fn ratios() {
        let sh = shape(GroupChain::trivial(), 1);
        let r = HypothesisRatio::new(&sh.level(1).unwrap());
        assert_eq!(r.ratio, rational(18, 95));
        assert_eq!(r.bound, rational(19, 150));
        assert!(r.bound_holds());
        assert!(!r.supports(1));

        let sh2 = shape(GroupChain::cyclic(2), 1);
        let r2 = HypothesisRatio::new(&sh2.level(1).unwrap());
        // |Y|=816, |Y'|=23, m=7
        assert_eq!(r2.ratio, rational(816 * 23, 7 * 839));
        assert!(r2.supports(3));
        assert!(!r2.supports(4));
        assert_eq!(r2.report().largest_supported_len_b, "3");
    }

    #[test]
    fn empty_search_uses_smallest_pairs() {
        let sh = shape(GroupChain::trivial(), 3);
        let cert = greedy_shrinking_prefix("t", &[], &sh, 2).unwrap();
        let data = sh.level(1).unwrap();
        assert_eq!(cert.prefix.alpha, vec![data.y()[0]; 2]);
        assert_eq!(cert.prefix.beta, vec![data.y_prime()[0]; 2]);
        assert!(cert.complete);
        replay_certificate(&cert, &sh).unwrap();
    }

    #[test]
    fn short_word_shrinks_immediately() {
        let sh = shape(GroupChain::trivial(), 2);
        let w = parse_word("B(q=(1 2 3 4 5))", &sh, 1).unwrap();
        let cert = greedy_shrinking_prefix("t", &[w], &sh, 1).unwrap();
        assert_eq!(cert.words[0].shrink_depth, Some(0));
        assert!(cert.zsets.is_empty());
    }

    #[test]
    fn search_on_two_letter_word_replays() {
        let sh = shape(GroupChain::trivial(), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let w: FPWord = loop {
            let w = random_word(&sh, 1, 2, &mut rng).unwrap();
            if !ZSet::compute(&w, &sh).unwrap().is_empty() {
                break w;
            }
        };
        let cert = greedy_shrinking_prefix("n1", &[w], &sh, 4).unwrap();
        assert!(cert.complete, "{cert:?}");
        assert!(!cert.guaranteed);
        assert!(cert.levels.iter().all(|l| l.excluded < l.total));
        replay_certificate(&cert, &sh).unwrap();
        let mut tampered = cert.clone();
        tampered.prefix.alpha[0] = sh.level(1).unwrap().y()[1];
        assert!(replay_certificate(&tampered, &sh).is_err());
    }
}
