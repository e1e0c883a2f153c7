use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::word::{BLetter, FPWord, Letter};
use crate::altembed::GWord;
use crate::error::Result;
use crate::permcore::Permutation;
use crate::treeauto::{Tree, TreeAut, TreeShape};

/// Image of `w` in `Aut(T_level)`: `A`-letters become rooted elements and
/// a `B`-letter `(q, g)` becomes `q̃^α · g̃^β`.
pub fn evaluate(w: &FPWord, tree: &Arc<Tree>) -> Result<TreeAut> {
    let level = w.level();
    let mut acc = TreeAut::identity(tree, level);
    for l in w.letters() {
        let piece = match l {
            Letter::A(a) => TreeAut::rooted(tree, level, a.clone())?,
            Letter::B(b) => TreeAut::directed_pair(tree, level, b.q.clone(), b.g.clone())?,
        };
        acc = acc.compose(&piece);
    }
    Ok(acc)
}

/// Image of the first letter `x` under `w`.
pub fn act_on_letter(w: &FPWord, x: u32, shape: &TreeShape) -> Result<u32> {
    let data = shape.level(w.level())?;
    let mut p = x;
    for l in w.letters().iter().rev() {
        if let Letter::A(a) = l {
            p = data.act(a, p);
        }
    }
    Ok(p)
}

/// The `B`-letters of a word, each paired with the first-level point at
/// which its section is taken, in left-to-right order of the resulting
/// section word. The next-level section letters depend on the spine pair
/// `(α_j, β_j)` only through which positions equal `α_j` or `β_j`.
#[derive(Clone, Debug)]
pub struct Expansion {
    level: usize,
    items: Vec<(usize, u32)>,
    letters: Vec<ExpandedB>,
}

#[derive(Clone, Debug)]
struct ExpandedB {
    letter: BLetter,
    q_next: Permutation,
    g_next: Permutation,
}

impl Expansion {
    fn new(w: &FPWord, shape: &TreeShape) -> Result<Self> {
        let next = shape.level(w.level() + 1)?;
        let letters = w
            .letters()
            .iter()
            .filter_map(|l| match l {
                Letter::B(b) => Some(b),
                Letter::A(_) => None,
            })
            .map(|b| ExpandedB {
                letter: b.clone(),
                q_next: next.q_to_natural(&b.q),
                g_next: next.g_to_natural(shape.chain(), &b.g),
            })
            .collect();
        Ok(Expansion {
            level: w.level(),
            items: Vec::new(),
            letters,
        })
    }

    /// Positions `(L_{i+1} ⋯ L_r)(x)` of the `B`-letters of `w`, appended
    /// in word order.
    fn push_section(&mut self, w: &FPWord, x: u32, shape: &TreeShape) -> Result<()> {
        let data = shape.level(w.level())?;
        let mut p = x;
        let mut b_index = w.len_b();
        let mut block = Vec::new();
        for l in w.letters().iter().rev() {
            match l {
                Letter::A(a) => p = data.act(a, p),
                Letter::B(_) => {
                    b_index -= 1;
                    block.push((b_index, p));
                }
            }
        }
        block.reverse();
        self.items.extend(block);
        Ok(())
    }

    /// Expansion of `w|_x`.
    pub fn section(w: &FPWord, x: u32, shape: &TreeShape) -> Result<Self> {
        let mut e = Expansion::new(w, shape)?;
        e.push_section(w, x, shape)?;
        Ok(e)
    }

    /// Expansion of `w‖_x = w^ℓ|_x = w|_{a^{ℓ-1}x} ⋯ w|_{ax} w|_x`, where
    /// `a` is the first-level action of `w` and `ℓ` the orbit length of `x`.
    pub fn stabilized(w: &FPWord, x: u32, shape: &TreeShape) -> Result<(Self, u64)> {
        let data = shape.level(w.level())?;
        let a = w.root_natural(data.alt_degree());
        let mut orbit = vec![x];
        let mut y = data.act(&a, x);
        while y != x {
            orbit.push(y);
            y = data.act(&a, y);
        }
        let mut e = Expansion::new(w, shape)?;
        for &y in orbit.iter().rev() {
            e.push_section(w, y, shape)?;
        }
        Ok((e, orbit.len() as u64))
    }

    /// All positions at which a `B`-letter is sectioned.
    pub fn positions(&self) -> impl Iterator<Item = u32> + '_ {
        self.items.iter().map(|&(_, p)| p)
    }

    /// Raw next-level letters for spine pair `(alpha, beta)`.
    pub fn raw_letters(&self, alpha: u32, beta: u32) -> Vec<Letter> {
        let mut out = Vec::new();
        for &(i, p) in &self.items {
            let b = &self.letters[i];
            if p == 0 {
                out.push(Letter::B(b.letter.clone()));
            } else if p == alpha {
                out.push(Letter::A(b.q_next.clone()));
            } else if p == beta {
                out.push(Letter::A(b.g_next.clone()));
            }
        }
        out
    }

    /// The next-level word for spine pair `(alpha, beta)`, in normal form.
    pub fn realize(&self, alpha: u32, beta: u32, shape: &TreeShape) -> Result<FPWord> {
        FPWord::normal_form(shape, self.level + 1, self.raw_letters(alpha, beta))
    }
}

/// Representative of `w|_x` for the spine pair `(alpha, beta)` at level `j`.
pub fn section_word_with(
    w: &FPWord,
    x: u32,
    (alpha, beta): (u32, u32),
    shape: &TreeShape,
) -> Result<FPWord> {
    check_letter(w, x, shape)?;
    Expansion::section(w, x, shape)?.realize(alpha, beta, shape)
}

/// Representative of `w‖_x` for the spine pair `(alpha, beta)` at level `j`.
pub fn stabilized_section_word_with(
    w: &FPWord,
    x: u32,
    (alpha, beta): (u32, u32),
    shape: &TreeShape,
) -> Result<FPWord> {
    check_letter(w, x, shape)?;
    Expansion::stabilized(w, x, shape)?
        .0
        .realize(alpha, beta, shape)
}

fn check_letter(w: &FPWord, x: u32, shape: &TreeShape) -> Result<()> {
    let size = shape.level(w.level())?.x_size();
    if x as usize >= size {
        return Err(crate::error::Error::domain(format!(
            "letter {x} outside X_{} of size {size}",
            w.level()
        )));
    }
    Ok(())
}

/// Representative of `w|_u` along the tree's spine.
pub fn section_word(w: &FPWord, u: &[u32], tree: &Tree) -> Result<FPWord> {
    let mut current = w.clone();
    for &x in u {
        let pair = tree.spine().at(current.level())?;
        current = section_word_with(&current, x, pair, tree.shape())?;
    }
    Ok(current)
}

/// Representative of `w‖_u` along the tree's spine, using
/// `w‖_{xv} = (w‖_x)‖_v`.
pub fn stabilized_section_word(w: &FPWord, u: &[u32], tree: &Tree) -> Result<FPWord> {
    let mut current = w.clone();
    for &x in u {
        let pair = tree.spine().at(current.level())?;
        current = stabilized_section_word_with(&current, x, pair, tree.shape())?;
    }
    Ok(current)
}

/// Uniformly random even permutation of the given degree.
pub fn random_even<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    images.shuffle(rng);
    let p = Permutation::from_images(images).expect("shuffle is a permutation");
    if p.is_even() {
        p
    } else {
        let t = Permutation::from_cycles(degree, &[vec![0, 1]]).expect("degree at least 2");
        p.compose(&t)
    }
}

fn random_b<R: Rng + ?Sized>(shape: &TreeShape, rng: &mut R) -> BLetter {
    let gens = shape.chain().names().len();
    loop {
        let q = if rng.gen_bool(0.8) {
            random_even(5, rng)
        } else {
            Permutation::identity(5)
        };
        let len = if gens == 0 { 0 } else { rng.gen_range(0..=2) };
        let g = GWord::from_syllables((0..len).map(|_| {
            (
                rng.gen_range(0..gens) as u16,
                if rng.gen_bool(0.5) { 1 } else { -1 },
            )
        }));
        let g = shape.chain().canonical(&g);
        let b = BLetter { q, g };
        if !b.is_trivial() {
            return b;
        }
    }
}

/// Random normal-form word at `level` with exactly `len_b` `B`-letters and
/// uniformly random nontrivial letters; the leading and trailing `A`-letters
/// are each present with probability one half.
pub fn random_word<R: Rng + ?Sized>(
    shape: &TreeShape,
    level: usize,
    len_b: usize,
    rng: &mut R,
) -> Result<FPWord> {
    let degree = shape.level(level)?.alt_degree();
    let random_a = |rng: &mut R| loop {
        let a = random_even(degree, rng);
        if !a.is_identity() {
            return a;
        }
    };
    let mut letters = Vec::new();
    if len_b == 0 {
        if rng.gen_bool(0.5) {
            letters.push(Letter::A(random_a(rng)));
        }
    } else {
        if rng.gen_bool(0.5) {
            letters.push(Letter::A(random_a(rng)));
        }
        for i in 0..len_b {
            letters.push(Letter::B(random_b(shape, rng)));
            if i + 1 < len_b || rng.gen_bool(0.5) {
                letters.push(Letter::A(random_a(rng)));
            }
        }
    }
    FPWord::normal_form(shape, level, letters)
}
