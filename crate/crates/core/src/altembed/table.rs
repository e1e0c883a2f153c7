use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::permcore::{PermGroup, Permutation, DEFAULT_ELEMENT_CAP};

/// A finite group given by its multiplication table. Element `0` is the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    labels: Vec<String>,
    table: Vec<Vec<u32>>,
    generators: Vec<u32>,
}

impl FiniteGroupTable {
    /// Checks closure, identity at index 0, associativity, inverses, and
    /// that the distinguished generators generate.
    pub fn new(labels: Vec<String>, table: Vec<Vec<u32>>, generators: Vec<u32>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::precondition("group table is empty"));
        }
        if labels.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::precondition("group table is not square"));
        }
        if table.iter().flatten().any(|&v| v as usize >= n) {
            return Err(Error::precondition("group table entry out of range"));
        }
        for (i, row) in table.iter().enumerate() {
            if table[0][i] != i as u32 || row[0] != i as u32 {
                return Err(Error::precondition("element 0 is not the identity"));
            }
            if !row.contains(&0) {
                return Err(Error::precondition(format!(
                    "element {} has no inverse",
                    labels[i]
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b] as usize;
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c] as usize] {
                        return Err(Error::precondition(format!(
                            "table is not associative at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        if generators.iter().any(|&g| g as usize >= n) {
            return Err(Error::precondition("generator index out of range"));
        }
        let t = FiniteGroupTable {
            labels,
            table,
            generators,
        };
        if t.generated_size() != n {
            return Err(Error::precondition(
                "distinguished generators do not generate the group",
            ));
        }
        Ok(t)
    }

    fn generated_size(&self) -> usize {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0u32];
        while let Some(x) = stack.pop() {
            for &g in &self.generators {
                let y = self.mul(g, x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().filter(|&&b| b).count()
    }

    /// Table of the group generated by `gens`, elements enumerated identity
    /// first then breadth-first in generator order. Returns the element list
    /// alongside.
    pub fn from_permutations(gens: &[Permutation]) -> Result<(Self, Vec<Permutation>)> {
        let group = PermGroup::new(gens.to_vec())?;
        let elements = group.elements(DEFAULT_ELEMENT_CAP)?;
        let index: HashMap<&Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p, i as u32))
            .collect();
        let table = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect())
            .collect();
        let generators = gens.iter().map(|g| index[g]).collect();
        let labels = elements.iter().map(|p| p.to_string()).collect();
        Ok((FiniteGroupTable::new(labels, table, generators)?, elements))
    }

    /// Cyclic group of order `n` on labels `0..n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let table = (0..n)
            .map(|a| (0..n).map(|b| ((a + b) % n) as u32).collect())
            .collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        FiniteGroupTable::new((0..n).map(|i| i.to_string()).collect(), table, gens)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_groups() {
        // not associative-free: row without inverse
        let bad = FiniteGroupTable::new(
            vec!["e".into(), "a".into()],
            vec![vec![0, 1], vec![1, 1]],
            vec![1],
        );
        assert!(bad.is_err());
        assert!(FiniteGroupTable::cyclic(4).is_ok());
        let not_generating = FiniteGroupTable::new(
            vec!["e".into(), "a".into()],
            vec![vec![0, 1], vec![1, 0]],
            vec![],
        );
        assert!(not_generating.is_err());
    }

    #[test]
    fn from_permutations_klein() {
        let a = Permutation::parse("(1 2)(3 4)", 4).unwrap();
        let b = Permutation::parse("(1 3)(2 4)", 4).unwrap();
        let (t, elems) = FiniteGroupTable::from_permutations(&[a, b]).unwrap();
        assert_eq!(t.order(), 4);
        assert!(elems[0].is_identity());
        for x in 0..4 {
            assert_eq!(t.mul(x, x), 0);
        }
    }
}
