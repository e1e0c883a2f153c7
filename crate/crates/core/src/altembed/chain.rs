use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::gword::GWord;
use crate::error::{Error, Result};
use crate::permcore::{PermGroup, Permutation, DEFAULT_ELEMENT_CAP};

/// File form of a quotient chain of `G`:
/// `{"generators": [..], "quotients": [{"degree": d, "images": {name: "(cycles)"}}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupChainSpec {
    pub generators: Vec<String>,
    pub quotients: Vec<QuotientSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSpec {
    pub degree: usize,
    pub images: BTreeMap<String, String>,
}

/// One finite quotient `G/N_i`, as permutation images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub degree: usize,
    pub images: Vec<Permutation>,
}

impl Quotient {
    pub fn eval(&self, word: &GWord) -> Permutation {
        let mut acc = Permutation::identity(self.degree);
        for &(g, e) in word.syllables() {
            acc = acc.compose(&self.images[g as usize].pow(e as i64));
        }
        acc
    }
}

/// Parsed quotient chain. Level `i` (1-based) uses quotient
/// `min(i, len)`; the last quotient repeats forever. A chain with a single
/// quotient describes a finite group `G` equal to that quotient.
///
/// Trivial intersection of the kernels is the caller's responsibility; it
/// cannot be decided from finitely many quotients.
///
/// For finite `G` every word has a canonical form: the shortlex-first word
/// reaching the same element in breadth-first order over `s, s⁻¹, t, ..`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupChain {
    names: Vec<String>,
    quotients: Vec<Quotient>,
    canonical: Option<HashMap<Permutation, GWord>>,
}

fn canonical_words(q: &Quotient) -> Result<HashMap<Permutation, GWord>> {
    let mut table = HashMap::from([(Permutation::identity(q.degree), GWord::identity())]);
    let mut queue = VecDeque::from([(Permutation::identity(q.degree), GWord::identity())]);
    while let Some((p, w)) = queue.pop_front() {
        for (i, img) in q.images.iter().enumerate() {
            for e in [1i32, -1] {
                let step = if e == 1 { img.clone() } else { img.inverse() };
                let next = p.compose(&step);
                if !table.contains_key(&next) {
                    let word = w.mul(&GWord::from_syllables([(i as u16, e)]));
                    table.insert(next.clone(), word.clone());
                    queue.push_back((next, word));
                    if table.len() > DEFAULT_ELEMENT_CAP {
                        return Err(Error::Resource {
                            what: "finite group G".into(),
                            required: table.len() as u128,
                            cap: DEFAULT_ELEMENT_CAP as u128,
                        });
                    }
                }
            }
        }
    }
    Ok(table)
}

impl GroupChain {
    pub fn from_spec(spec: &GroupChainSpec) -> Result<Self> {
        if spec.quotients.is_empty() {
            return Err(Error::config("quotient chain is empty"));
        }
        let mut seen = std::collections::HashSet::new();
        if spec
            .generators
            .iter()
            .any(|n| n.is_empty() || !seen.insert(n))
        {
            return Err(Error::config(
                "generator names must be non-empty and distinct",
            ));
        }
        let mut quotients = Vec::new();
        for (qi, q) in spec.quotients.iter().enumerate() {
            if q.degree == 0 {
                return Err(Error::config(format!("quotient {} has degree 0", qi + 1)));
            }
            if let Some(extra) = q.images.keys().find(|k| !spec.generators.contains(k)) {
                return Err(Error::config(format!(
                    "quotient {} has an image for unknown generator {extra:?}",
                    qi + 1
                )));
            }
            let mut images = Vec::new();
            for name in &spec.generators {
                let text = q.images.get(name).ok_or_else(|| {
                    Error::config(format!("quotient {} lacks an image for {name:?}", qi + 1))
                })?;
                images.push(Permutation::parse(text, q.degree)?);
            }
            let gens = if images.is_empty() {
                vec![Permutation::identity(q.degree)]
            } else {
                images.clone()
            };
            if !PermGroup::new(gens)?.is_transitive() {
                return Err(Error::config(format!(
                    "quotient {} images do not act transitively",
                    qi + 1
                )));
            }
            quotients.push(Quotient {
                degree: q.degree,
                images,
            });
        }
        let canonical = if quotients.len() == 1 {
            Some(canonical_words(&quotients[0])?)
        } else {
            None
        };
        Ok(GroupChain {
            names: spec.generators.clone(),
            quotients,
            canonical,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(text)?)
    }

    /// `G` trivial with one generator `s`.
    pub fn trivial() -> Self {
        Self::from_spec(&GroupChainSpec {
            generators: vec!["s".into()],
            quotients: vec![QuotientSpec {
                degree: 1,
                images: BTreeMap::from([("s".into(), "()".into())]),
            }],
        })
        .expect("valid")
    }

    /// Cyclic group `C_n` on generator `s`, as a single faithful quotient.
    pub fn cyclic(n: usize) -> Self {
        let cycle: String = if n == 1 {
            "()".into()
        } else {
            format!(
                "({})",
                (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
            )
        };
        Self::from_spec(&GroupChainSpec {
            generators: vec!["s".into()],
            quotients: vec![QuotientSpec {
                degree: n,
                images: BTreeMap::from([("s".into(), cycle)]),
            }],
        })
        .expect("valid")
    }

    pub fn to_spec(&self) -> GroupChainSpec {
        GroupChainSpec {
            generators: self.names.clone(),
            quotients: self
                .quotients
                .iter()
                .map(|q| QuotientSpec {
                    degree: q.degree,
                    images: self
                        .names
                        .iter()
                        .cloned()
                        .zip(q.images.iter().map(|p| p.to_string()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn quotients(&self) -> &[Quotient] {
        &self.quotients
    }

    pub fn is_finite(&self) -> bool {
        self.quotients.len() == 1
    }

    /// 1-based quotient index used at tree level `level` (1-based).
    pub fn quotient_index_for_level(&self, level: usize) -> usize {
        level.clamp(1, self.quotients.len())
    }

    pub fn quotient(&self, index: usize) -> &Quotient {
        &self.quotients[index - 1]
    }

    /// Canonical representative of `word` when `G` is finite; the freely
    /// reduced word itself otherwise.
    pub fn canonical(&self, word: &GWord) -> GWord {
        match &self.canonical {
            Some(table) => table[&self.quotients[0].eval(word)].clone(),
            None => word.clone(),
        }
    }

    /// `word^k`, canonical when `G` is finite.
    pub fn canonical_pow(&self, word: &GWord, k: i64) -> GWord {
        match &self.canonical {
            Some(table) => table[&self.quotients[0].eval(word).pow(k)].clone(),
            None => word.pow(k),
        }
    }

    /// Order of `word` in `G` when `G` is finite.
    pub fn order_in_g(&self, word: &GWord) -> Option<u64> {
        self.is_finite()
            .then(|| self.quotients[0].eval(word).order())
    }

    /// Order of `word` in every quotient, in chain order.
    pub fn orders_per_quotient(&self, word: &GWord) -> Vec<u64> {
        self.quotients
            .iter()
            .map(|q| q.eval(word).order())
            .collect()
    }
}
