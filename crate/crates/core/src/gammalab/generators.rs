use rand::Rng;

use super::scenario::GammaScenario;
use crate::altembed::{q_generator_names, q_generators, GWord};
use crate::error::{Error, Result};
use crate::fpwords::{BLetter, FPWord, Letter};
use crate::permcore::Permutation;
use crate::treeauto::{DirectedElem, SpineSide, TreeAut};

/// The kind of a named generator of `Γ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Rooted, by an element of `A_j` in natural degree.
    Rooted(Permutation),
    /// Directed along `α` by a generator of `Q`.
    DirectedQ(Permutation),
    /// Directed along `β` by a generator of `G`.
    DirectedG(GWord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaGenerator {
    pub name: String,
    pub kind: GeneratorKind,
}

/// Named generators of `Γ_j = ⟨A_j, Q̃^α, G̃^β⟩`: `a1, a2, ..` for the
/// generators of `A_j`, `q1, q2` for `Q`, and the generator names of `G`.
pub fn gamma_generator_list(s: &GammaScenario, level: usize) -> Result<Vec<GammaGenerator>> {
    let data = s.shape().level(level)?;
    let mut out = Vec::new();
    for (i, a) in data.a_generators().iter().enumerate() {
        out.push(GammaGenerator {
            name: format!("a{}", i + 1),
            kind: GeneratorKind::Rooted(a.clone()),
        });
    }
    for (name, q) in q_generator_names().into_iter().zip(q_generators()) {
        out.push(GammaGenerator {
            name,
            kind: GeneratorKind::DirectedQ(q),
        });
    }
    for (i, name) in s.chain().names().iter().enumerate() {
        out.push(GammaGenerator {
            name: name.clone(),
            kind: GeneratorKind::DirectedG(GWord::generator(i)),
        });
    }
    let mut seen = std::collections::HashSet::new();
    if out.iter().any(|g| !seen.insert(g.name.clone())) {
        return Err(Error::config("G-generator names clash with a1.., q1, q2"));
    }
    Ok(out)
}

/// The generators of `gamma_generator_list` as tree automorphisms.
pub fn gamma_generators(s: &GammaScenario, level: usize) -> Result<Vec<(String, TreeAut)>> {
    let tree = s.tree();
    gamma_generator_list(s, level)?
        .into_iter()
        .map(|g| {
            let aut = match g.kind {
                GeneratorKind::Rooted(a) => TreeAut::rooted(tree, level, a)?,
                GeneratorKind::DirectedQ(q) => {
                    TreeAut::directed(tree, level, SpineSide::Alpha, DirectedElem::Q(q))?
                }
                GeneratorKind::DirectedG(g) => {
                    TreeAut::directed(tree, level, SpineSide::Beta, DirectedElem::G(g))?
                }
            };
            Ok((g.name, aut))
        })
        .collect()
}

fn letter_of(kind: &GeneratorKind, exp: i64) -> Letter {
    match kind {
        GeneratorKind::Rooted(a) => Letter::A(a.pow(exp)),
        GeneratorKind::DirectedQ(q) => Letter::B(BLetter {
            q: q.pow(exp),
            g: GWord::identity(),
        }),
        GeneratorKind::DirectedG(g) => Letter::B(BLetter {
            q: Permutation::identity(5),
            g: g.pow(exp),
        }),
    }
}

/// Parses a word in the generator names, e.g. `a1 q2^-1 s a2^3`, into its
/// normal form in `F_level`.
pub fn parse_generator_word(s: &GammaScenario, level: usize, text: &str) -> Result<FPWord> {
    let gens = gamma_generator_list(s, level)?;
    let mut letters = Vec::new();
    for tok in text.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i64>()
                    .map_err(|_| Error::parse(format!("bad exponent in {tok:?}")))?,
            ),
            None => (tok, 1),
        };
        let g = gens
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::parse(format!("unknown generator {name:?}")))?;
        letters.push(letter_of(&g.kind, exp));
    }
    FPWord::normal_form(s.shape(), level, letters)
}

/// A random generator word with at most `max_len_b` blocks, each block one
/// or two `A`-generators followed by one or two `Q`/`G`-generators, all with
/// exponent `±1`. Returns the text and its normal form; the normal form has
/// `len_B ≤ max_len_b`.
pub fn random_generator_word<R: Rng + ?Sized>(
    s: &GammaScenario,
    level: usize,
    max_len_b: usize,
    rng: &mut R,
) -> Result<(String, FPWord)> {
    let gens = gamma_generator_list(s, level)?;
    let rooted: Vec<&GammaGenerator> = gens
        .iter()
        .filter(|g| matches!(g.kind, GeneratorKind::Rooted(_)))
        .collect();
    let directed: Vec<&GammaGenerator> = gens
        .iter()
        .filter(|g| !matches!(g.kind, GeneratorKind::Rooted(_)))
        .collect();
    let blocks = rng.gen_range(1..=max_len_b.max(1));
    let mut tokens = Vec::new();
    let token = |g: &GammaGenerator, rng: &mut R| {
        if rng.gen_bool(0.5) {
            g.name.clone()
        } else {
            format!("{}^-1", g.name)
        }
    };
    for _ in 0..blocks {
        for _ in 0..rng.gen_range(1..=2) {
            tokens.push(token(rooted[rng.gen_range(0..rooted.len())], rng));
        }
        for _ in 0..rng.gen_range(1..=2) {
            tokens.push(token(directed[rng.gen_range(0..directed.len())], rng));
        }
    }
    if rng.gen_bool(0.5) {
        tokens.push(token(rooted[rng.gen_range(0..rooted.len())], rng));
    }
    let text = tokens.join(" ");
    let word = parse_generator_word(s, level, &text)?;
    Ok((text, word))
}
