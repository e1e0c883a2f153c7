use super::word::{BLetter, FPWord, Letter};
use crate::altembed::GWord;
use crate::error::{Error, Result};
use crate::permcore::Permutation;
use crate::treeauto::TreeShape;

/// Parses the word language: whitespace-separated tokens `A(<cycles>)` and
/// `B(q=<cycles on 5 points>, g=<G-word>)`, each optionally followed by
/// `^k` (`k` may be negative). Either part of a `B`-token may be omitted.
/// `A`-cycles refer to the natural points of `A_level`.
///
/// Example: `A((1 2 3)) B(q=(1 2 3 4 5), g=s t^-1)^2`.
pub fn parse_word(text: &str, shape: &TreeShape, level: usize) -> Result<FPWord> {
    let degree = shape.level(level)?.alt_degree();
    let names = shape.chain().names();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut letters = Vec::new();
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let kind = chars[i];
        if !(kind == 'A' || kind == 'B') || chars.get(i + 1) != Some(&'(') {
            return Err(Error::parse(format!(
                "expected A( or B( at offset {i} in {text:?}"
            )));
        }
        let open = i + 1;
        let mut depth = 0usize;
        let mut close = None;
        for (j, &c) in chars.iter().enumerate().skip(open) {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(j);
                        break;
                    }
                }
                _ => {}
            }
        }
        let close =
            close.ok_or_else(|| Error::parse(format!("unbalanced parentheses in {text:?}")))?;
        let body: String = chars[open + 1..close].iter().collect();
        i = close + 1;
        let mut exp = 1i64;
        if chars.get(i) == Some(&'^') {
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && (chars[end] == '-' || chars[end].is_ascii_digit()) {
                end += 1;
            }
            let s: String = chars[start..end].iter().collect();
            exp = s
                .parse()
                .map_err(|_| Error::parse(format!("bad exponent {s:?} in {text:?}")))?;
            i = end;
        }
        let letter = if kind == 'A' {
            Letter::A(Permutation::parse(&body, degree)?)
        } else {
            let mut q = Permutation::identity(5);
            let mut g = GWord::identity();
            for part in split_top_level(&body) {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                if let Some(rest) = part.strip_prefix("q=") {
                    q = Permutation::parse(rest, 5)?;
                } else if let Some(rest) = part.strip_prefix("g=") {
                    g = GWord::parse(rest, names)?;
                } else {
                    return Err(Error::parse(format!("expected q= or g= in B({body})")));
                }
            }
            Letter::B(BLetter::new(q, g)?)
        };
        let single = FPWord::normal_form(shape, level, [letter])?;
        letters.extend(single.pow(exp, shape)?.letters().iter().cloned());
    }
    FPWord::normal_form(shape, level, letters)
}

fn split_top_level(body: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (j, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&body[start..j]);
                start = j + 1;
            }
            _ => {}
        }
    }
    parts.push(&body[start..]);
    parts
}

/// Inverse of `parse_word`. The empty word renders as the empty string.
pub fn render_word(w: &FPWord, shape: &TreeShape) -> String {
    let names = shape.chain().names();
    w.letters()
        .iter()
        .map(|l| match l {
            Letter::A(a) => format!("A({a})"),
            Letter::B(b) => format!("B(q={}, g={})", b.q, b.g.render(names)),
        })
        .collect::<Vec<_>>()
        .join(" ")
}
