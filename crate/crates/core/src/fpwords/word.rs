use std::fmt;

use serde::{Deserialize, Serialize};

use crate::altembed::GWord;
use crate::error::{Error, Result};
use crate::permcore::Permutation;
use crate::treeauto::TreeShape;

/// A letter of `B = Q × G`: `q ∈ Alt(5)` and a word in the generators of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BLetter {
    pub q: Permutation,
    pub g: GWord,
}

impl BLetter {
    pub fn new(q: Permutation, g: GWord) -> Result<Self> {
        if q.degree() != 5 || !q.is_even() {
            return Err(Error::domain(format!("{q} is not an element of Alt(5)")));
        }
        Ok(BLetter { q, g })
    }

    pub fn is_trivial(&self) -> bool {
        self.q.is_identity() && self.g.is_empty()
    }

    /// Pure `G`-letter: trivial `q`-part.
    pub fn is_pure_g(&self) -> bool {
        self.q.is_identity()
    }
}

/// A letter of the free product `A_j * B`. `A`-letters are elements of
/// `A_j = Alt(2n_j+3)` in their natural degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A(Permutation),
    B(BLetter),
}

impl Letter {
    fn is_trivial(&self) -> bool {
        match self {
            Letter::A(a) => a.is_identity(),
            Letter::B(b) => b.is_trivial(),
        }
    }
}

/// Word length `(len_B, len_A)`, ordered lexicographically.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct LenPair {
    pub b: usize,
    pub a: usize,
}

impl LenPair {
    pub const ONE_B: LenPair = LenPair { b: 1, a: 0 };

    pub fn new(b: usize, a: usize) -> Self {
        LenPair { b, a }
    }

    /// At most `(1,0)`: a single `B`-letter, a single `A`-letter, or empty.
    pub fn is_short(self) -> bool {
        self <= LenPair::ONE_B
    }
}

impl fmt::Display for LenPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.b, self.a)
    }
}

/// An element of `F_j = A_j * (Q × G)` in normal form: nontrivial letters
/// alternating between `A_j` and `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FPWord {
    level: usize,
    letters: Vec<Letter>,
}

impl FPWord {
    pub fn empty(level: usize) -> Self {
        FPWord {
            level,
            letters: Vec::new(),
        }
    }

    /// Brings `letters` into normal form: adjacent letters of the same kind
    /// are multiplied, trivial letters dropped. `G`-parts are canonicalised
    /// when `G` is finite.
    pub fn normal_form(
        shape: &TreeShape,
        level: usize,
        letters: impl IntoIterator<Item = Letter>,
    ) -> Result<Self> {
        let data = shape.level(level)?;
        let chain = shape.chain();
        let mut out: Vec<Letter> = Vec::new();
        for letter in letters {
            let letter = match letter {
                Letter::A(a) => {
                    data.check_natural(&a)?;
                    Letter::A(a)
                }
                Letter::B(b) => {
                    if b.q.degree() != 5 || !b.q.is_even() {
                        return Err(Error::domain(format!(
                            "{} is not an element of Alt(5)",
                            b.q
                        )));
                    }
                    if b.g
                        .syllables()
                        .iter()
                        .any(|&(i, _)| i as usize >= chain.names().len())
                    {
                        return Err(Error::domain("G-word uses an unknown generator"));
                    }
                    Letter::B(BLetter {
                        q: b.q,
                        g: chain.canonical(&b.g),
                    })
                }
            };
            push_letter(&mut out, letter, |g| chain.canonical(g));
        }
        Ok(FPWord {
            level,
            letters: out,
        })
    }

    /// Wraps letters already known to be in normal form at `level`.
    pub(crate) fn from_normal(level: usize, letters: Vec<Letter>) -> Self {
        FPWord { level, letters }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len_b(&self) -> usize {
        self.letters
            .iter()
            .filter(|l| matches!(l, Letter::B(_)))
            .count()
    }

    pub fn len_a(&self) -> usize {
        self.letters.len() - self.len_b()
    }

    pub fn length(&self) -> LenPair {
        LenPair::new(self.len_b(), self.len_a())
    }

    fn same_level(&self, other: &FPWord) -> Result<()> {
        if self.level != other.level {
            return Err(Error::domain(format!(
                "words at levels {} and {} cannot be multiplied",
                self.level, other.level
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &FPWord, shape: &TreeShape) -> Result<FPWord> {
        self.same_level(other)?;
        let chain = shape.chain();
        let mut out = self.letters.clone();
        for l in &other.letters {
            push_letter(&mut out, l.clone(), |g| chain.canonical(g));
        }
        Ok(FPWord {
            level: self.level,
            letters: out,
        })
    }

    pub fn inverse(&self, shape: &TreeShape) -> FPWord {
        let chain = shape.chain();
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match l {
                Letter::A(a) => Letter::A(a.inverse()),
                Letter::B(b) => Letter::B(BLetter {
                    q: b.q.inverse(),
                    g: chain.canonical(&b.g.inverse()),
                }),
            })
            .collect();
        FPWord {
            level: self.level,
            letters,
        }
    }

    pub fn pow(&self, k: i64, shape: &TreeShape) -> Result<FPWord> {
        if let [letter] = self.letters.as_slice() {
            let chain = shape.chain();
            let l = match letter {
                Letter::A(a) => Letter::A(a.pow(k)),
                Letter::B(b) => Letter::B(BLetter {
                    q: b.q.pow(k),
                    g: chain.canonical_pow(&b.g, k),
                }),
            };
            let letters = if l.is_trivial() { Vec::new() } else { vec![l] };
            return Ok(FPWord::from_normal(self.level, letters));
        }
        let mut base = if k < 0 {
            self.inverse(shape)
        } else {
            self.clone()
        };
        let mut e = k.unsigned_abs();
        let mut acc = FPWord::empty(self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, shape)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, shape)?;
            }
        }
        Ok(acc)
    }

    /// Product of the `A`-letters, i.e. the action on the first letter.
    pub fn root_natural(&self, degree: usize) -> Permutation {
        let mut acc = Permutation::identity(degree);
        for l in &self.letters {
            if let Letter::A(a) = l {
                acc = acc.compose(a);
            }
        }
        acc
    }
}

fn push_letter(out: &mut Vec<Letter>, letter: Letter, canon: impl Fn(&GWord) -> GWord) {
    if letter.is_trivial() {
        return;
    }
    let merged = match (out.last(), &letter) {
        (Some(Letter::A(x)), Letter::A(y)) => Some(Letter::A(x.compose(y))),
        (Some(Letter::B(x)), Letter::B(y)) => Some(Letter::B(BLetter {
            q: x.q.compose(&y.q),
            g: canon(&x.g.mul(&y.g)),
        })),
        _ => None,
    };
    match merged {
        Some(m) => {
            out.pop();
            if !m.is_trivial() {
                out.push(m);
            }
        }
        None => out.push(letter),
    }
}
