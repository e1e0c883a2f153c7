//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criterion 6 asks for `g(n) ≤ n!/2^(n-1)` on all of `n ≤ 12`, which is
//! false for `n = 2, 3, 4`. It is checked literally, reported as FAIL, and
//! listed in `EXPECTED_FAILURES`; any other failure fails the run.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use branchforge::altembed::{
    embed_finite_group, verify_altalt, FiniteGroupTable, GroupChain, LevelData,
};
use branchforge::fpwords::{
    evaluate, random_word, section_word_with, stabilized_section_word_with, FPWord,
};
use branchforge::gammalab::{
    certify_finite_order, random_generator_word, verify_wreath_identities, GammaScenario,
};
use branchforge::permcore::{Permutation, DEFAULT_DEGREE_CAP};
use branchforge::shrinklab::{
    greedy_shrinking_prefix, landau, landau_bound_check, replay_certificate, HypothesisRatio,
    ShrinkCertificate, ZSet,
};
use branchforge::treeauto::TreeAut;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXPECTED_FAILURES: &[usize] = &[6];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

/// Freeness, parity, injectivity and multiplicativity of the embedding,
/// checked point by point.
fn embedding_is_sound(table: &FiniteGroupTable, images: &[Permutation]) -> bool {
    let n = table.order();
    let first: Vec<u32> = std::iter::once(3)
        .chain(6..=(n as u32 + 4))
        .map(|p| p - 1)
        .collect();
    let second: Vec<u32> = std::iter::once(4)
        .chain((n as u32 + 5)..=(2 * n as u32 + 3))
        .map(|p| p - 1)
        .collect();
    let distinct: BTreeSet<&Permutation> = images.iter().collect();
    if distinct.len() != n {
        return false;
    }
    for (a, img) in images.iter().enumerate() {
        if img.degree() != 2 * n + 3 || !img.is_even() {
            return false;
        }
        for set in [&first, &second] {
            if set.iter().any(|&p| !set.contains(&img.apply(p))) {
                return false;
            }
            if !img.is_identity() && set.iter().any(|&p| img.apply(p) == p) {
                return false;
            }
        }
        for (b, other) in images.iter().enumerate() {
            if images[table.mul(a as u32, b as u32) as usize] != img.compose(other) {
                return false;
            }
        }
    }
    true
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let klein = FiniteGroupTable::from_permutations(&[
        Permutation::parse("(1 2)(3 4)", 4).unwrap(),
        Permutation::parse("(1 3)(2 4)", 4).unwrap(),
    ])
    .unwrap()
    .0;
    let groups = [
        ("C1", FiniteGroupTable::cyclic(1).unwrap()),
        ("C2", FiniteGroupTable::cyclic(2).unwrap()),
        ("C3", FiniteGroupTable::cyclic(3).unwrap()),
        ("C2xC2", klein),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, table) in &groups {
        let images = embed_finite_group(table).unwrap();
        let sound = embedding_is_sound(table, &images);
        let generated = verify_altalt(&images, table.order()).unwrap();
        ok &= sound && generated;
        notes.push(format!(
            "{name}->Alt({}) {}",
            2 * table.order() + 3,
            sound && generated
        ));
    }
    let elapsed = start.elapsed();
    outcome(
        ok && within(elapsed, Duration::from_secs(60)),
        format!("{} in {elapsed:.2?}", notes.join(", ")),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let one = LevelData::build(&GroupChain::trivial(), 1, DEFAULT_DEGREE_CAP).unwrap();
    let two = LevelData::build(&GroupChain::cyclic(2), 1, DEFAULT_DEGREE_CAP).unwrap();
    let stab = one.origin_stabilizer_order().unwrap();
    let ok = one.x_size() == 20
        && one.y_prime().len() == 1
        && one.y().len() == 18
        && stab == BigUint::from(3u32)
        && two.x_size() == 840
        && two.y_prime().len() == 23
        && two.y().len() == 816;
    let elapsed = start.elapsed();
    outcome(
        ok && within(elapsed, Duration::from_secs(10)),
        format!(
            "n=1: |X|=20 |Y|=18 |Y'|=1 |Stab(o)|={stab}; n=2: |X|=840 |Y|={} |Y'|=23; \
             printed |Y| formula gives {} and {}, enumeration disagrees; {elapsed:.2?}",
            two.y().len(),
            one.printed_y_formula(),
            two.printed_y_formula()
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let s = GammaScenario::new("n1", GroupChain::trivial(), 1, 4, None).unwrap();
    let x_size = s.shape().level(1).unwrap().x_size() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let words: Vec<TreeAut> = (0..501)
        .map(|_| {
            let (_, w) = random_generator_word(&s, 1, 3, &mut rng).unwrap();
            evaluate(&w, s.tree()).unwrap()
        })
        .collect();
    let mut failures = 0usize;
    let mut checks = 0usize;
    for pair in words.windows(2) {
        let (g, h) = (&pair[0], &pair[1]);
        let x = rng.gen_range(0..x_size);
        let path = [x, rng.gen_range(0..x_size), rng.gen_range(0..x_size)];
        let image = g.apply(&path).unwrap();
        let split = {
            let mut v = g.apply(&path[..1]).unwrap();
            v.extend(g.section(x).unwrap().apply(&path[1..]).unwrap());
            v
        };
        let composed = g.compose(h).section(x).unwrap();
        let rule = g
            .section(h.apply(&[x]).unwrap()[0])
            .unwrap()
            .compose(&h.section(x).unwrap());
        let conj = h.compose(g).compose(&h.inverse());
        let hinv_x = h.inverse().apply(&[x]).unwrap()[0];
        let g_hinv_x = g.apply(&[hinv_x]).unwrap()[0];
        let conj_rule = h
            .section(g_hinv_x)
            .unwrap()
            .compose(&g.section(hinv_x).unwrap())
            .compose(&h.inverse().section(x).unwrap());
        let twice = g
            .stabilized_section(&path[..1])
            .unwrap()
            .stabilized_section(&path[1..2])
            .unwrap();
        let once = g.stabilized_section(&path[..2]).unwrap();
        let results = [
            image == split,
            composed.equal_up_to_depth(&rule, 2).unwrap(),
            conj.section(x)
                .unwrap()
                .equal_up_to_depth(&conj_rule, 2)
                .unwrap(),
            twice.equal_up_to_depth(&once, 1).unwrap(),
            g.section_at(&path[..2])
                .unwrap()
                .equal_up_to_depth(&g.section(x).unwrap().section(path[1]).unwrap(), 1)
                .unwrap(),
        ];
        checks += results.len();
        failures += results.iter().filter(|&&r| !r).count();
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && within(elapsed, Duration::from_secs(120)),
        format!(
            "{} words, {checks} identities, {failures} failures, {elapsed:.2?}",
            words.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let s = GammaScenario::new("n1", GroupChain::trivial(), 1, 2, None).unwrap();
    let shape = s.shape();
    let pair = s.spine().at(1).unwrap();
    let x_size = shape.level(1).unwrap().x_size() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = 0usize;
    for _ in 0..1000 {
        let w = random_word(shape, 1, rng.gen_range(0..=4), &mut rng).unwrap();
        let total: usize = (0..x_size)
            .map(|x| section_word_with(&w, x, pair, shape).unwrap().len_b())
            .sum();
        failures += usize::from(total > w.len_b());
        for x in 0..x_size {
            let st = stabilized_section_word_with(&w, x, pair, shape).unwrap();
            failures += usize::from(st.len_b() > w.len_b());
        }
    }
    outcome(failures == 0, format!("1000 words, {failures} failures"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let s = GammaScenario::new("n1", GroupChain::trivial(), 1, 2, None).unwrap();
    let shape = s.shape();
    let data = shape.level(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut words = 0usize;
    let mut violations = 0usize;
    let mut largest = 0usize;
    while words < 200 {
        let w = random_word(shape, 1, rng.gen_range(1..=3), &mut rng).unwrap();
        if w.length().is_short() {
            continue;
        }
        words += 1;
        let z = ZSet::compute_exhaustive(&w, shape).unwrap();
        let bound = w.len_b() * data.alt_degree() * (data.y().len() + data.y_prime().len());
        violations += usize::from(z.len() > bound);
        violations += usize::from(z != ZSet::compute(&w, shape).unwrap());
        largest = largest.max(z.len());
    }
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && within(elapsed, Duration::from_secs(60)),
        format!("{words} words, largest |Z|={largest}, {violations} violations, {elapsed:.2?}"),
    )
}

/// Maximal lcm over all partitions of `n`, by direct enumeration.
fn brute_landau(n: u64) -> u64 {
    fn go(rest: u64, max_part: u64, acc: u64, best: &mut u64) {
        *best = (*best).max(acc);
        for part in (1..=rest.min(max_part)).rev() {
            go(rest - part, part, acc.lcm(&part), best);
        }
    }
    let mut best = 1;
    go(n, n, 1, &mut best);
    best
}

fn criterion_6() -> Outcome {
    let agree = (1..=20).all(|n| landau(n).unwrap() == BigUint::from(brute_landau(n as u64)));
    let failing: Vec<usize> = (1..=12)
        .filter(|&n| !landau_bound_check(n).unwrap())
        .collect();
    outcome(
        agree && failing.is_empty(),
        format!("g(n) matches brute force for n<=20: {agree}; g(n) <= n!/2^(n-1) fails for n in {failing:?}"),
    )
}

fn criterion_7() -> Outcome {
    let data = LevelData::build(&GroupChain::trivial(), 1, DEFAULT_DEGREE_CAP).unwrap();
    let r = HypothesisRatio::new(&data);
    let (y, yp, m) = (
        data.y().len() as i64,
        data.y_prime().len() as i64,
        data.alt_degree() as i64,
    );
    let oracle = BigRational::new(BigInt::from(y * yp), BigInt::from(m * (y + yp)));
    let expected = BigRational::new(BigInt::from(18), BigInt::from(95));
    let bound = BigRational::new(BigInt::from(19), BigInt::from(150));
    let ok = r.ratio == oracle && r.ratio == expected && r.bound == bound && r.ratio >= r.bound;
    outcome(ok, format!("ratio {} >= bound {}", r.ratio, r.bound))
}

fn mixed_chain() -> GroupChain {
    GroupChain::from_json(
        r#"{"generators": ["s"], "quotients": [
            {"degree": 1, "images": {"s": "()"}},
            {"degree": 2, "images": {"s": "(1 2)"}}]}"#,
    )
    .unwrap()
}

fn criterion_8() -> Outcome {
    let s = GammaScenario::new("mixed", mixed_chain(), 1, 7, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let words: Vec<FPWord> = (0..10)
        .map(|_| random_generator_word(&s, 1, 2, &mut rng).unwrap().1)
        .collect();
    let cert = greedy_shrinking_prefix(s.id(), &words, s.shape(), 6).unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back: ShrinkCertificate = serde_json::from_str(&text).unwrap();
    let replay = replay_certificate(&back, s.shape());
    let again =
        serde_json::to_string(&greedy_shrinking_prefix(s.id(), &words, s.shape(), 6).unwrap())
            .unwrap();
    let ok = cert.complete && back == cert && replay.is_ok() && again == text;
    let depths: Vec<String> = cert
        .words
        .iter()
        .map(|w| w.shrink_depth.map_or("-".into(), |d| d.to_string()))
        .collect();
    outcome(
        ok,
        format!(
            "complete={} replay={} shrink depths [{}]",
            cert.complete,
            replay.is_ok(),
            depths.join(" ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let s = GammaScenario::new("n1", GroupChain::trivial(), 1, 4, None).unwrap();
    let r = verify_wreath_identities(&s, 1, 3, None).unwrap();
    let failed: Vec<&str> = r
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    outcome(
        r.passed && r.checks.len() == 8,
        format!("{} checks, failed {failed:?}", r.checks.len()),
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let chain = GroupChain::cyclic(2);
    let base = GammaScenario::new("c2", chain.clone(), 1, 7, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let words: Vec<FPWord> = (0..50)
        .map(|_| random_generator_word(&base, 1, 3, &mut rng).unwrap().1)
        .collect();
    let prefix = greedy_shrinking_prefix(base.id(), &words, base.shape(), 6).unwrap();
    let s = GammaScenario::new("c2", chain, 1, 7, Some(prefix.prefix.clone())).unwrap();
    let mut complete = 0usize;
    let mut verified = 0usize;
    let mut max_order = 0u128;
    for w in &words {
        let cert = certify_finite_order(w, &s, 6, 4).unwrap();
        if !cert.complete {
            continue;
        }
        complete += 1;
        let n = cert.order.unwrap();
        max_order = max_order.max(n);
        let power_trivial = evaluate(w, s.tree())
            .unwrap()
            .pow(n as i64)
            .is_identity_to_depth(4)
            .unwrap();
        let divides = cert.order_multiple.unwrap().is_multiple_of(n);
        verified += usize::from(cert.verified && power_trivial && divides);
    }
    let elapsed = start.elapsed();
    outcome(
        prefix.complete && complete == 50 && verified == 50 && within(elapsed, Duration::from_secs(600)),
        format!(
            "prefix complete={}, {complete}/50 certificates complete, {verified}/50 verified to depth 4, \
             largest order {max_order}, {elapsed:.2?}",
            prefix.complete
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "alternating generation by conjugates of Alt(5)",
            criterion_1,
        ),
        ("level data for n=1 and n=2", criterion_2),
        ("section calculus on random generator words", criterion_3),
        ("length decrease under sections", criterion_4),
        ("Z-set size bound", criterion_5),
        ("Landau function and factorial bound", criterion_6),
        ("counting-hypothesis ratio", criterion_7),
        ("shrinking search in a mixed scenario", criterion_8),
        ("wreath identities", criterion_9),
        ("torsion certificates for G = C2", criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        let result = check();
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("{tag} {id:>2} {name}: {}", result.detail);
        if !result.passed && !EXPECTED_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
