use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A freely reduced word in the generators of `G`, stored as
/// `(generator index, nonzero exponent)` syllables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GWord(Vec<(u16, i32)>);

impl GWord {
    pub fn identity() -> Self {
        GWord(Vec::new())
    }

    pub fn generator(index: usize) -> Self {
        GWord(vec![(index as u16, 1)])
    }

    pub fn from_syllables(syllables: impl IntoIterator<Item = (u16, i32)>) -> Self {
        let mut w = GWord::identity();
        for (g, e) in syllables {
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, gen: u16, exp: i32) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == gen {
                last.1 += exp;
                if last.1 == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((gen, exp));
    }

    pub fn syllables(&self) -> &[(u16, i32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &GWord) -> GWord {
        let mut out = self.clone();
        for &(g, e) in &other.0 {
            out.push(g, e);
        }
        out
    }

    pub fn inverse(&self) -> GWord {
        GWord(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn pow(&self, k: i64) -> GWord {
        if let [(g, e)] = self.0.as_slice() {
            let exp = (*e as i64) * k;
            return match i32::try_from(exp) {
                Ok(exp) => GWord::from_syllables([(*g, exp)]),
                Err(_) => panic!("exponent {exp} overflows a G-word syllable"),
            };
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = GWord::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Parses whitespace-separated generator tokens with optional `^k`.
    /// `1` or an empty string is the identity.
    pub fn parse(text: &str, names: &[String]) -> Result<GWord> {
        let mut w = GWord::identity();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i32>()
                        .map_err(|_| Error::parse(format!("bad exponent in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            let idx = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::parse(format!("unknown G-generator {name:?}")))?;
            w.push(idx as u16, exp);
        }
        Ok(w)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut s = String::new();
        for (i, &(g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let name = names.get(g as usize).map(String::as_str).unwrap_or("?");
            s.push_str(name);
            if e != 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }
}
