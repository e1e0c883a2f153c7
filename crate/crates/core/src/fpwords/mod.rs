//! Words in the free product `F_j = A_j * (Q × G)`: normal forms, length
//! bookkeeping, evaluation to tree automorphisms, and the word-level
//! section and stabilized-section calculus.
//!
//! Lengths are those of the carried representative after normal form, not
//! the minimum over all representatives of the group element.

mod calculus;
mod dsl;
mod word;

pub use calculus::{
    act_on_letter, evaluate, random_even, random_word, section_word, section_word_with,
    stabilized_section_word, stabilized_section_word_with, Expansion,
};
pub use dsl::{parse_word, render_word};
pub use word::{BLetter, FPWord, LenPair, Letter};
