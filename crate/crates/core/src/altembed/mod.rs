//! Embedding a finite group `F` of order `n` into `Alt(2n+3)` so that the
//! `F`-conjugates of `Alt(5)` generate, and the per-level coset data built
//! on top of it.

mod chain;
mod gword;
mod level;
mod table;

pub use chain::{GroupChain, GroupChainSpec, Quotient, QuotientSpec};
pub use gword::GWord;
pub use level::{CosetSpace, LevelData, LevelExport, PointClass};
pub use table::FiniteGroupTable;

use crate::error::{Error, Result};
use crate::permcore::{alternating_generators, generates_alternating, Permutation};

/// Degree of the fixed perfect group `Q = Alt(5)`.
pub const Q_DEGREE: usize = 5;

/// Generators `q1 = (1 2 3)`, `q2 = (1 2 3 4 5)` of `Q = Alt(5)`.
pub fn q_generators() -> Vec<Permutation> {
    alternating_generators(Q_DEGREE)
}

pub fn q_generator_names() -> Vec<String> {
    vec!["q1".into(), "q2".into()]
}

/// 0-based point carrying element `k` in the first free `F`-set
/// `{3} ∪ {6, .., n+4}` (1-based).
fn first_set_point(k: usize) -> u32 {
    if k == 0 {
        2
    } else {
        (4 + k) as u32
    }
}

/// 0-based point carrying element `k` in the second free `F`-set
/// `{4} ∪ {n+5, .., 2n+3}` (1-based).
fn second_set_point(n: usize, k: usize) -> u32 {
    if k == 0 {
        3
    } else {
        (n + 3 + k) as u32
    }
}

/// Embeds `F` into `Alt(2n+3)`: `F` acts by its left-regular
/// representation on both free sets simultaneously and fixes points 1, 2, 5.
/// The result is indexed by element.
pub fn embed_finite_group(f: &FiniteGroupTable) -> Result<Vec<Permutation>> {
    let n = f.order();
    if n == 0 {
        return Err(Error::precondition("group order must be at least 1"));
    }
    let degree = 2 * n + 3;
    let mut images = Vec::with_capacity(n);
    for elem in 0..n {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        for k in 0..n {
            let target = f.mul(elem as u32, k as u32) as usize;
            img[first_set_point(k) as usize] = first_set_point(target);
            img[second_set_point(n, k) as usize] = second_set_point(n, target);
        }
        images.push(Permutation::from_images(img)?);
    }
    for a in 0..n {
        if !images[a].is_even() {
            return Err(Error::Verification(format!("image of element {a} is odd")));
        }
        for b in 0..n {
            let prod = f.mul(a as u32, b as u32) as usize;
            if images[a].compose(&images[b]) != images[prod] {
                return Err(Error::precondition(format!(
                    "table inconsistent: image({a})·image({b}) ≠ image({prod})"
                )));
            }
            if a != b && images[a] == images[b] {
                return Err(Error::precondition("embedding is not injective"));
            }
        }
    }
    Ok(images)
}

/// Whether the conjugates `f·Alt(5)·f⁻¹`, `f` ranging over `f_images`,
/// generate `Alt(2n+3)`. `Alt(5)` sits on the first five points.
pub fn verify_altalt(f_images: &[Permutation], n: usize) -> Result<bool> {
    let degree = 2 * n + 3;
    let q: Vec<Permutation> = q_generators()
        .iter()
        .map(|g| g.extend(degree))
        .collect::<Result<_>>()?;
    let mut gens = Vec::new();
    for f in f_images {
        if f.degree() != degree {
            return Err(Error::precondition(format!(
                "image of degree {} where {degree} was expected",
                f.degree()
            )));
        }
        for g in &q {
            let c = f.conjugate(g);
            if !gens.contains(&c) {
                gens.push(c);
            }
        }
    }
    generates_alternating(&gens, degree)
}
