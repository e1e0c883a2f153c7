use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation of `{0, .., degree-1}` stored by images.
///
/// Composition follows function notation: `p.compose(&q)` maps `x` to
/// `p(q(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::domain("permutation degree must be at least 1"));
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            let y = y as usize;
            if y >= n || seen[y] {
                return Err(Error::domain(format!(
                    "images {images:?} are not a bijection"
                )));
            }
            seen[y] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::domain("permutation degree must be at least 1"));
        }
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let xi = x as usize;
                if xi >= degree {
                    return Err(Error::domain(format!(
                        "point {} outside degree {degree}",
                        x + 1
                    )));
                }
                if used[xi] {
                    return Err(Error::domain(format!("point {} repeated in cycles", x + 1)));
                }
                used[xi] = true;
                images[xi] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses disjoint cycle notation with 1-based points, e.g. `(1 2 3)(4 5)`.
    /// The identity is `()`.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(Error::parse(
                "empty permutation text; write () for identity",
            ));
        }
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::parse(format!("expected '(' in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::parse(format!("unclosed cycle in {text:?}")))?;
            let mut cycle = Vec::new();
            for tok in body[..close].split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let p: u32 = tok
                    .parse()
                    .map_err(|_| Error::parse(format!("bad point {tok:?} in {text:?}")))?;
                if p == 0 {
                    return Err(Error::parse("points are 1-based"));
                }
                cycle.push(p - 1);
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i as u32 == y)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in compose");
        Permutation {
            images: other
                .images
                .iter()
                .map(|&y| self.images[y as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &y) in self.images.iter().enumerate() {
            inv[y as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        acc
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &Permutation) -> Permutation {
        self.compose(other).compose(&self.inverse())
    }

    /// Commutator `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse()
            .compose(&other.inverse())
            .compose(self)
            .compose(other)
    }

    /// Extends to a larger degree by fixing the new points.
    pub fn extend(&self, degree: usize) -> Result<Permutation> {
        if degree < self.degree() {
            return Err(Error::domain(format!(
                "cannot restrict degree {} permutation to {degree}",
                self.degree()
            )));
        }
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Ok(Permutation { images })
    }

    /// Nontrivial cycles, each starting at its smallest point, in ascending order.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u32];
            seen[start] = true;
            let mut x = self.images[start];
            while x as usize != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.images[x as usize];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Lengths of all cycles including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lens = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn is_even(&self) -> bool {
        let transpositions: usize = self.cycle_type().iter().map(|l| l - 1).sum();
        transpositions.is_multiple_of(2)
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, l| acc.lcm(&(l as u64)))
    }

    /// Smallest point moved, if any.
    pub fn first_moved(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &y)| *i as u32 != y)
            .map(|(i, _)| i as u32)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[deg {}]", self, self.degree())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<u32>::deserialize(d)?;
        Permutation::from_images(images).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display_roundtrip() {
        let p = Permutation::parse("(1 2 3)(4 5 6)", 7).unwrap();
        assert_eq!(p.to_string(), "(1 2 3)(4 5 6)");
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.apply(6), 6);
        assert!(Permutation::parse("()", 3).unwrap().is_identity());
        assert!(Permutation::parse("(1 1)", 3).is_err());
        assert!(Permutation::parse("(1 4)", 3).is_err());
        assert!(Permutation::parse("1 2", 3).is_err());
    }

    #[test]
    fn parity_and_order() {
        let c3 = Permutation::parse("(1 2 3)", 5).unwrap();
        let t = Permutation::parse("(1 2)", 5).unwrap();
        let dbl = Permutation::parse("(1 2)(3 4)", 5).unwrap();
        assert!(c3.is_even());
        assert!(!t.is_even());
        assert!(dbl.is_even());
        assert_eq!(c3.order(), 3);
        assert_eq!(Permutation::parse("(1 2 3)(4 5)", 5).unwrap().order(), 6);
        assert_eq!(c3.pow(3), Permutation::identity(5));
        assert_eq!(c3.pow(-1), c3.inverse());
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn compose_is_function_composition((p, q) in (1usize..12).prop_flat_map(|n| (arb_perm(n), arb_perm(n)))) {
            let pq = p.compose(&q);
            for x in 0..p.degree() as u32 {
                prop_assert_eq!(pq.apply(x), p.apply(q.apply(x)));
            }
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert_eq!(Permutation::parse(&p.to_string(), p.degree()).unwrap(), p);
        }
    }
}
