use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::aut::TreeAut;
use crate::error::Result;

/// Finite portrait of an automorphism: the root permutation on `X` and the
/// nontrivial children, keyed by 0-based letter. Children at the frontier
/// that still act nontrivially below it are marked `"trunc"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Portrait {
    pub perm: Vec<u32>,
    pub children: BTreeMap<u32, PortraitChild>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PortraitChild {
    Node(Box<Portrait>),
    Trunc(Truncated),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncated {
    #[serde(rename = "trunc")]
    Trunc,
}

impl Portrait {
    fn is_identity(&self) -> bool {
        self.children.is_empty() && self.perm.iter().enumerate().all(|(i, &y)| i as u32 == y)
    }

    /// Indented text form: 1-based letters and cycle notation.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        let perm = crate::permcore::Permutation::from_images(self.perm.clone())
            .expect("portrait permutation");
        let _ = writeln!(out, "{}root {}", "  ".repeat(indent), perm);
        for (x, child) in &self.children {
            match child {
                PortraitChild::Node(p) => {
                    let _ = writeln!(out, "{}#{}:", "  ".repeat(indent + 1), x + 1);
                    p.render_into(out, indent + 2);
                }
                PortraitChild::Trunc(_) => {
                    let _ = writeln!(out, "{}#{}: ...", "  ".repeat(indent + 1), x + 1);
                }
            }
        }
    }
}

impl TreeAut {
    /// Portrait of the action on vertices of length at most `depth`.
    pub fn truncate(&self, depth: usize) -> Result<Portrait> {
        self.tree().shape().check_depth(self.level(), depth)?;
        if depth == 0 {
            return Err(crate::error::Error::config(
                "portrait depth must be at least 1",
            ));
        }
        self.portrait_rec(depth)
    }

    fn portrait_rec(&self, depth: usize) -> Result<Portrait> {
        let size = self.tree().level(self.level())?.x_size();
        let perm = match self.root()? {
            Some(p) => p.images().to_vec(),
            None => (0..size as u32).collect(),
        };
        let mut children = BTreeMap::new();
        for &x in self.support()?.iter() {
            let child = self.section(x)?;
            if depth > 1 {
                let sub = child.portrait_rec(depth - 1)?;
                if !sub.is_identity() {
                    children.insert(x, PortraitChild::Node(Box::new(sub)));
                }
            } else if !child.is_trivial() {
                children.insert(x, PortraitChild::Trunc(Truncated::Trunc));
            }
        }
        Ok(Portrait { perm, children })
    }
}
