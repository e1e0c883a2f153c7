use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::ratio::HypothesisRatio;
use super::zset::ZSet;
use crate::error::{Error, Result};
use crate::fpwords::{parse_word, render_word, stabilized_section_word_with, FPWord, LenPair};
use crate::treeauto::TreeShape;

/// Spine prefix `(α_i, β_i)` for levels `start, start+1, ..`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prefix {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackedWord {
    pub dsl: String,
    pub length: LenPair,
    /// Number of levels after which every stabilized section has length at
    /// most `(1,0)`; absent if the budget ran out first.
    pub shrink_depth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZSetRecord {
    pub level: usize,
    pub word: String,
    pub size: usize,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveWord {
    pub word: String,
    pub length: LenPair,
}

/// What happened at one level of the search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub active: Vec<ActiveWord>,
    /// Pairs excluded by the union of the Z-sets.
    pub excluded: usize,
    pub total: usize,
    /// Whether the counting hypothesis alone guarantees a free pair, i.e.
    /// `|Y||Y'| > (Σ len_B) · m(|Y|+|Y'|)` over the active words.
    pub guaranteed: bool,
}

/// Output of the greedy search: a spine prefix together with everything
/// needed to re-derive it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrinkCertificate {
    pub scenario: String,
    pub start: usize,
    pub budget: usize,
    pub prefix: Prefix,
    pub words: Vec<TrackedWord>,
    pub zsets: Vec<ZSetRecord>,
    pub levels: Vec<LevelRecord>,
    /// Every tracked word shrank within the budget.
    pub complete: bool,
    /// Every choice was backed by the counting hypothesis.
    pub guaranteed: bool,
    pub surviving: Vec<String>,
}

/// Chooses `(α_j, β_j)` level by level: the lexicographically smallest pair
/// in `Y_j × Y_j'` outside the union of the Z-sets of all stabilized
/// sections still longer than `(1,0)`. Once every tracked word has shrunk,
/// the remaining levels of the budget get the smallest pair `(min Y, min Y')`.
///
/// Fails with `CannotGuaranteeChoice` only when the Z-sets cover every pair.
pub fn greedy_shrinking_prefix(
    scenario: &str,
    words: &[FPWord],
    shape: &TreeShape,
    budget: usize,
) -> Result<ShrinkCertificate> {
    let start = shape.start();
    if budget == 0 {
        return Err(Error::config("shrink budget must be at least 1"));
    }
    if let Some(w) = words.iter().find(|w| w.level() != start) {
        return Err(Error::domain(format!(
            "tracked word at level {} but the search starts at level {start}",
            w.level()
        )));
    }
    let mut tracked: Vec<TrackedWord> = words
        .iter()
        .map(|w| TrackedWord {
            dsl: render_word(w, shape),
            length: w.length(),
            shrink_depth: w.length().is_short().then_some(0),
        })
        .collect();
    let mut active: BTreeMap<FPWord, BTreeSet<usize>> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        if !w.length().is_short() {
            active.entry(w.clone()).or_default().insert(i);
        }
    }
    let mut prefix = Prefix {
        alpha: Vec::new(),
        beta: Vec::new(),
    };
    let mut zsets = Vec::new();
    let mut levels = Vec::new();
    let mut guaranteed = true;
    for step in 0..budget {
        let level = start + step;
        let data = shape.level(level)?;
        let (y, y_prime) = (data.y(), data.y_prime());
        if active.is_empty() {
            prefix.alpha.push(y[0]);
            prefix.beta.push(y_prime[0]);
            continue;
        }
        let mut union = FixedBitSet::with_capacity(y.len() * y_prime.len());
        let mut total_len_b = 0;
        for w in active.keys() {
            let z = ZSet::compute(w, shape)?;
            total_len_b += w.len_b();
            for &(s, t) in z.members().keys() {
                let si = y.binary_search(&s).expect("member in Y");
                let ti = y_prime.binary_search(&t).expect("member in Y'");
                union.insert(si * y_prime.len() + ti);
            }
            zsets.push(ZSetRecord {
                level,
                word: render_word(w, shape),
                size: z.len(),
                bound: z.bound() as u64,
            });
        }
        let level_guaranteed = HypothesisRatio::new(&data).supports(total_len_b);
        guaranteed &= level_guaranteed;
        let excluded = union.count_ones(..);
        let total = y.len() * y_prime.len();
        levels.push(LevelRecord {
            level,
            active: active
                .keys()
                .map(|w| ActiveWord {
                    word: render_word(w, shape),
                    length: w.length(),
                })
                .collect(),
            excluded,
            total,
            guaranteed: level_guaranteed,
        });
        let free = union.zeroes().next().ok_or(Error::CannotGuaranteeChoice {
            level,
            y: y.len(),
            y_prime: y_prime.len(),
            excluded,
            total,
        })?;
        let (s, t) = (y[free / y_prime.len()], y_prime[free % y_prime.len()]);
        prefix.alpha.push(s);
        prefix.beta.push(t);

        let mut next: BTreeMap<FPWord, BTreeSet<usize>> = BTreeMap::new();
        for (w, origins) in &active {
            for x in 0..data.x_size() as u32 {
                let sw = stabilized_section_word_with(w, x, (s, t), shape)?;
                if sw.len_b() > w.len_b() {
                    return Err(Error::Verification(format!(
                        "stabilized section at level {level} is longer than its word"
                    )));
                }
                if !sw.length().is_short() {
                    next.entry(sw).or_default().extend(origins.iter().copied());
                }
            }
        }
        let still: BTreeSet<usize> = next.values().flatten().copied().collect();
        for origins in active.values() {
            for &i in origins {
                if !still.contains(&i) {
                    tracked[i].shrink_depth = Some(step + 1);
                }
            }
        }
        active = next;
    }
    let complete = active.is_empty();
    Ok(ShrinkCertificate {
        scenario: scenario.to_string(),
        start,
        budget,
        prefix,
        words: tracked,
        zsets,
        levels,
        complete,
        guaranteed,
        surviving: active.keys().map(|w| render_word(w, shape)).collect(),
    })
}

/// Recomputes a certificate from its tracked words and compares the result
/// field by field, then checks the prefix against `Y_i`, `Y_i'` and the
/// recomputed Z-sets.
pub fn replay_certificate(cert: &ShrinkCertificate, shape: &TreeShape) -> Result<()> {
    let words = cert
        .words
        .iter()
        .map(|t| parse_word(&t.dsl, shape, cert.start))
        .collect::<Result<Vec<_>>>()?;
    let again = greedy_shrinking_prefix(&cert.scenario, &words, shape, cert.budget)?;
    let a = serde_json::to_string(cert)?;
    let b = serde_json::to_string(&again)?;
    if a != b {
        return Err(Error::Verification(
            "certificate does not match its replay".into(),
        ));
    }
    if cert.prefix.alpha.len() != cert.budget || cert.prefix.beta.len() != cert.budget {
        return Err(Error::Verification(
            "prefix length differs from the budget".into(),
        ));
    }
    for (i, (&s, &t)) in cert.prefix.alpha.iter().zip(&cert.prefix.beta).enumerate() {
        let level = cert.start + i;
        let data = shape.level(level)?;
        if data.y().binary_search(&s).is_err()
            || data.y_prime().binary_search(&t).is_err()
            || s == t
        {
            return Err(Error::Verification(format!(
                "prefix pair at level {level} is not admissible"
            )));
        }
    }
    for rec in &cert.zsets {
        let w = parse_word(&rec.word, shape, rec.level)?;
        let z = ZSet::compute(&w, shape)?;
        let i = rec.level - cert.start;
        if z.len() != rec.size || z.contains(cert.prefix.alpha[i], cert.prefix.beta[i]) {
            return Err(Error::Verification(format!(
                "prefix pair at level {} lies in a recorded Z-set",
                rec.level
            )));
        }
    }
    Ok(())
}
