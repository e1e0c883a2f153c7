use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpwords::{stabilized_section_word_with, Expansion, FPWord, LenPair};
use crate::treeauto::TreeShape;

/// Vertex of `X_j` witnessing membership of a pair, with the length of the
/// stabilized section there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: u32,
    pub length: LenPair,
}

/// `Z_j(w)`: the pairs `(s,t) ∈ Y_j × Y_j'` which, used as `(α_j, β_j)`,
/// fail to shrink `w` at some first-level vertex. For `len_B(w) > 1` this
/// means `len_B(w‖_x) = len_B(w)`; for `len_B(w) = 1` it means
/// `len(w‖_x) > (1,0)`. Each member carries the smallest witness `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSet {
    level: usize,
    word: FPWord,
    members: BTreeMap<(u32, u32), Witness>,
    bound: u128,
}

fn qualifies(len_b: usize, result: LenPair) -> bool {
    if len_b > 1 {
        result.b == len_b
    } else {
        !result.is_short()
    }
}

impl ZSet {
    fn check_word(w: &FPWord) -> Result<()> {
        if w.length().is_short() {
            return Err(Error::domain(format!(
                "Z-sets are defined for words longer than (1,0); got {}",
                w.length()
            )));
        }
        Ok(())
    }

    /// `len_B(w) · m_j · (|Y_j| + |Y_j'|)`.
    fn bound_for(w: &FPWord, shape: &TreeShape) -> Result<u128> {
        let data = shape.level(w.level())?;
        Ok(w.len_b() as u128
            * data.max_order() as u128
            * (data.y().len() + data.y_prime().len()) as u128)
    }

    fn finish(
        w: &FPWord,
        members: BTreeMap<(u32, u32), Witness>,
        shape: &TreeShape,
    ) -> Result<Self> {
        let bound = Self::bound_for(w, shape)?;
        if members.len() as u128 > bound {
            return Err(Error::Verification(format!(
                "|Z| = {} exceeds len_B·m·(|Y|+|Y'|) = {bound}",
                members.len()
            )));
        }
        Ok(ZSet {
            level: w.level(),
            word: w.clone(),
            members,
            bound,
        })
    }

    /// Exact `Z_j(w)`. Only pairs with `s` or `t` among the positions at
    /// which some `B`-letter is sectioned can change the stabilized section
    /// at `x`; all other pairs yield only `B`-letters from positions at `o`,
    /// which merge into length at most `(1,0)`. The enumeration therefore
    /// runs over those positions plus one representative "absent" value.
    pub fn compute(w: &FPWord, shape: &TreeShape) -> Result<Self> {
        Self::check_word(w)?;
        let data = shape.level(w.level())?;
        let y = data.y();
        let y_prime = data.y_prime();
        let size = data.x_size();
        let len_b = w.len_b();
        let mut seen = FixedBitSet::with_capacity(y.len() * y_prime.len());
        let mut members = BTreeMap::new();
        let y_index = |p: u32| y.binary_search(&p).ok();
        let yp_index = |p: u32| y_prime.binary_search(&p).ok();
        const ABSENT: u32 = u32::MAX;
        for x in 0..size as u32 {
            let (expansion, _) = Expansion::stabilized(w, x, shape)?;
            let mut positions: Vec<u32> = expansion.positions().collect();
            positions.sort_unstable();
            positions.dedup();
            let mut s_choices: Vec<u32> = positions
                .iter()
                .copied()
                .filter(|&p| y_index(p).is_some())
                .collect();
            let mut t_choices: Vec<u32> = positions
                .iter()
                .copied()
                .filter(|&p| yp_index(p).is_some())
                .collect();
            if s_choices.is_empty() && t_choices.is_empty() {
                continue;
            }
            s_choices.push(ABSENT);
            t_choices.push(ABSENT);
            for &s in &s_choices {
                for &t in &t_choices {
                    if s == ABSENT && t == ABSENT {
                        continue;
                    }
                    let result = expansion.realize(s, t, shape)?.length();
                    if !qualifies(len_b, result) {
                        continue;
                    }
                    let ss: Vec<usize> = if s == ABSENT {
                        (0..y.len())
                            .filter(|&i| positions.binary_search(&y[i]).is_err())
                            .collect()
                    } else {
                        vec![y_index(s).expect("s in Y")]
                    };
                    let ts: Vec<usize> = if t == ABSENT {
                        (0..y_prime.len())
                            .filter(|&i| positions.binary_search(&y_prime[i]).is_err())
                            .collect()
                    } else {
                        vec![yp_index(t).expect("t in Y'")]
                    };
                    for &si in &ss {
                        for &ti in &ts {
                            let bit = si * y_prime.len() + ti;
                            if !seen.put(bit) {
                                members.insert((y[si], y_prime[ti]), Witness { x, length: result });
                            }
                        }
                    }
                }
            }
        }
        Self::finish(w, members, shape)
    }

    /// Reference enumeration over every pair and every vertex.
    pub fn compute_exhaustive(w: &FPWord, shape: &TreeShape) -> Result<Self> {
        Self::check_word(w)?;
        let data = shape.level(w.level())?;
        let mut members = BTreeMap::new();
        for &s in data.y() {
            for &t in data.y_prime() {
                for x in 0..data.x_size() as u32 {
                    let result = stabilized_section_word_with(w, x, (s, t), shape)?.length();
                    if qualifies(w.len_b(), result) {
                        members.insert((s, t), Witness { x, length: result });
                        break;
                    }
                }
            }
        }
        Self::finish(w, members, shape)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn word(&self) -> &FPWord {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: u32, t: u32) -> bool {
        self.members.contains_key(&(s, t))
    }

    pub fn members(&self) -> &BTreeMap<(u32, u32), Witness> {
        &self.members
    }

    /// The upper bound `len_B(w) · m_j · (|Y_j| + |Y_j'|)`.
    pub fn bound(&self) -> u128 {
        self.bound
    }

    /// Re-derives every witness from scratch.
    pub fn check_witnesses(&self, shape: &TreeShape) -> Result<bool> {
        for (&(s, t), wit) in &self.members {
            let result = stabilized_section_word_with(&self.word, wit.x, (s, t), shape)?.length();
            if result != wit.length || !qualifies(self.word.len_b(), result) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
