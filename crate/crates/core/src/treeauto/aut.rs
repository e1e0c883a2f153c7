use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use super::shape::{SpinePair, TreeShape};
use crate::altembed::{GWord, LevelData};
use crate::error::{Error, Result};
use crate::permcore::Permutation;

/// A tree together with its spine, shared by every automorphism built on it.
#[derive(Debug)]
pub struct Tree {
    shape: Arc<TreeShape>,
    spine: SpinePair,
    memoize: bool,
}

impl Tree {
    /// Validates the spine against every level of the shape.
    pub fn new(shape: Arc<TreeShape>, spine: SpinePair) -> Result<Arc<Tree>> {
        spine.validate(&shape)?;
        Ok(Arc::new(Tree {
            shape,
            spine,
            memoize: true,
        }))
    }

    /// Same tree with section memoisation switched off.
    pub fn uncached(&self) -> Arc<Tree> {
        Arc::new(Tree {
            shape: self.shape.clone(),
            spine: self.spine.clone(),
            memoize: false,
        })
    }

    pub fn shape(&self) -> &Arc<TreeShape> {
        &self.shape
    }

    pub fn spine(&self) -> &SpinePair {
        &self.spine
    }

    pub fn level(&self, level: usize) -> Result<Arc<LevelData>> {
        self.shape.level(level)
    }
}

/// Which spine parameter a directed element is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpineSide {
    Alpha,
    Beta,
}

/// The element a directed automorphism places on its spine: either some
/// `q ∈ Q = Alt(5)` or some `g ∈ G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DirectedElem {
    Q(Permutation),
    G(GWord),
}

impl DirectedElem {
    fn is_trivial(&self) -> bool {
        match self {
            DirectedElem::Q(q) => q.is_identity(),
            DirectedElem::G(w) => w.is_empty(),
        }
    }
}

#[derive(Debug)]
enum RootSpec {
    Coset(Arc<Permutation>),
    Natural(Permutation),
    Q(Permutation),
    G(GWord),
}

#[derive(Debug)]
enum Kind {
    Identity,
    Rooted(RootSpec),
    Directed(SpineSide, DirectedElem),
    Embedded(u32, TreeAut),
    Product(TreeAut, TreeAut),
    Inverse(TreeAut),
}

struct Node {
    level: usize,
    tree: Arc<Tree>,
    kind: Kind,
    root: OnceLock<Option<Arc<Permutation>>>,
    support: OnceLock<Arc<Vec<u32>>>,
    sections: Mutex<HashMap<u32, TreeAut>>,
}

/// An automorphism of the subtree hanging below level `level`, acting on
/// words over `X_level, X_level+1, ..`. Composition is right to left:
/// `g.compose(h)` applies `h` first.
///
/// Elements are immutable expression trees with lazily computed root
/// permutations, supports and memoised sections.
#[derive(Clone)]
pub struct TreeAut(Arc<Node>);

impl fmt::Debug for TreeAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreeAut(level {}, {:?})", self.0.level, self.0.kind)
    }
}

impl TreeAut {
    fn make(tree: &Arc<Tree>, level: usize, kind: Kind) -> TreeAut {
        TreeAut(Arc::new(Node {
            level,
            tree: tree.clone(),
            kind,
            root: OnceLock::new(),
            support: OnceLock::new(),
            sections: Mutex::new(HashMap::new()),
        }))
    }

    pub fn identity(tree: &Arc<Tree>, level: usize) -> TreeAut {
        Self::make(tree, level, Kind::Identity)
    }

    /// Rooted automorphism acting by `a ∈ A_level` (natural degree) on the
    /// first letter only.
    pub fn rooted(tree: &Arc<Tree>, level: usize, a: Permutation) -> Result<TreeAut> {
        tree.level(level)?.check_natural(&a)?;
        if a.is_identity() {
            return Ok(Self::identity(tree, level));
        }
        Ok(Self::make(tree, level, Kind::Rooted(RootSpec::Natural(a))))
    }

    /// Rooted automorphism given directly by a permutation of `X_level`.
    pub fn rooted_coset(tree: &Arc<Tree>, level: usize, perm: Permutation) -> Result<TreeAut> {
        let data = tree.level(level)?;
        if perm.degree() != data.x_size() {
            return Err(Error::domain(format!(
                "permutation of degree {} is not a permutation of X_{level}",
                perm.degree()
            )));
        }
        if perm.is_identity() {
            return Ok(Self::identity(tree, level));
        }
        Ok(Self::make(
            tree,
            level,
            Kind::Rooted(RootSpec::Coset(Arc::new(perm))),
        ))
    }

    /// Rooted automorphism by the image of `q ∈ Alt(5)` in `A_level`.
    pub fn rooted_q(tree: &Arc<Tree>, level: usize, q: Permutation) -> Result<TreeAut> {
        check_q(&q)?;
        if q.is_identity() {
            return Ok(Self::identity(tree, level));
        }
        Ok(Self::make(tree, level, Kind::Rooted(RootSpec::Q(q))))
    }

    /// Rooted automorphism by the image of `g ∈ G` in `A_level`.
    pub fn rooted_g(tree: &Arc<Tree>, level: usize, g: GWord) -> Result<TreeAut> {
        check_gword(tree, &g)?;
        if g.is_empty() {
            return Ok(Self::identity(tree, level));
        }
        Ok(Self::make(tree, level, Kind::Rooted(RootSpec::G(g))))
    }

    /// Directed automorphism: its section at `o` is the same directed
    /// element one level down, its section at the chosen spine point is the
    /// rooted image of `elem` one level down, and all other sections are
    /// trivial. It fixes every first letter.
    pub fn directed(
        tree: &Arc<Tree>,
        level: usize,
        side: SpineSide,
        elem: DirectedElem,
    ) -> Result<TreeAut> {
        match &elem {
            DirectedElem::Q(q) => check_q(q)?,
            DirectedElem::G(g) => check_gword(tree, g)?,
        }
        tree.spine.at(level)?;
        if elem.is_trivial() {
            return Ok(Self::identity(tree, level));
        }
        Ok(Self::make(tree, level, Kind::Directed(side, elem)))
    }

    /// The `B`-type generator `(q, g)`: directed `q` along `α` composed with
    /// directed `g` along `β`.
    pub fn directed_pair(
        tree: &Arc<Tree>,
        level: usize,
        q: Permutation,
        g: GWord,
    ) -> Result<TreeAut> {
        let dq = Self::directed(tree, level, SpineSide::Alpha, DirectedElem::Q(q))?;
        let dg = Self::directed(tree, level, SpineSide::Beta, DirectedElem::G(g))?;
        Ok(dq.compose(&dg))
    }

    /// Automorphism fixing the first letter, with section `child` at
    /// `letter` and trivial sections elsewhere.
    pub fn embedded(letter: u32, child: &TreeAut) -> Result<TreeAut> {
        let level = child
            .level()
            .checked_sub(1)
            .ok_or_else(|| Error::domain("cannot embed above level 1"))?;
        let tree = child.tree().clone();
        let size = tree.level(level)?.x_size();
        if letter as usize >= size {
            return Err(Error::domain(format!("letter {letter} outside X_{level}")));
        }
        if child.is_trivial() {
            return Ok(Self::identity(&tree, level));
        }
        Ok(Self::make(
            &tree,
            level,
            Kind::Embedded(letter, child.clone()),
        ))
    }

    pub fn level(&self) -> usize {
        self.0.level
    }

    pub fn tree(&self) -> &Arc<Tree> {
        &self.0.tree
    }

    /// Structurally the identity. An element can act trivially on the
    /// horizon without this being true.
    pub fn is_trivial(&self) -> bool {
        matches!(self.0.kind, Kind::Identity)
    }

    pub fn ptr_eq(&self, other: &TreeAut) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn level_data(&self) -> Result<Arc<LevelData>> {
        self.0.tree.level(self.0.level)
    }

    fn same_context(&self, other: &TreeAut) -> Result<()> {
        if self.level() != other.level() {
            return Err(Error::domain(format!(
                "cannot combine automorphisms at levels {} and {}",
                self.level(),
                other.level()
            )));
        }
        if !Arc::ptr_eq(&self.0.tree.shape, &other.0.tree.shape)
            || self.0.tree.spine != other.0.tree.spine
        {
            return Err(Error::domain("automorphisms belong to different trees"));
        }
        Ok(())
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &TreeAut) -> TreeAut {
        debug_assert!(self.same_context(other).is_ok());
        if self.is_trivial() {
            return other.clone();
        }
        if other.is_trivial() {
            return self.clone();
        }
        if let Kind::Inverse(inner) = &self.0.kind {
            if inner.ptr_eq(other) {
                return Self::identity(&self.0.tree, self.0.level);
            }
        }
        if let Kind::Inverse(inner) = &other.0.kind {
            if inner.ptr_eq(self) {
                return Self::identity(&self.0.tree, self.0.level);
            }
        }
        Self::make(
            &self.0.tree,
            self.0.level,
            Kind::Product(self.clone(), other.clone()),
        )
    }

    /// Checked composition.
    pub fn try_compose(&self, other: &TreeAut) -> Result<TreeAut> {
        self.same_context(other)?;
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> TreeAut {
        match &self.0.kind {
            Kind::Identity => self.clone(),
            Kind::Inverse(inner) => inner.clone(),
            _ => Self::make(&self.0.tree, self.0.level, Kind::Inverse(self.clone())),
        }
    }

    pub fn pow(&self, k: i64) -> TreeAut {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(&self.0.tree, self.0.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    /// `self⁻¹ · other · self`.
    pub fn conjugate_by(&self, other: &TreeAut) -> TreeAut {
        self.inverse().compose(other).compose(self)
    }

    /// Root permutation on `X_level`; `None` stands for the identity.
    pub fn root(&self) -> Result<Option<Arc<Permutation>>> {
        if let Some(r) = self.0.root.get() {
            return Ok(r.clone());
        }
        let computed = self.compute_root()?;
        Ok(self.0.root.get_or_init(|| computed).clone())
    }

    fn compute_root(&self) -> Result<Option<Arc<Permutation>>> {
        let wrap = |p: Permutation| {
            if p.is_identity() {
                None
            } else {
                Some(Arc::new(p))
            }
        };
        Ok(match &self.0.kind {
            Kind::Identity | Kind::Directed(..) | Kind::Embedded(..) => None,
            Kind::Rooted(spec) => {
                let data = self.level_data()?;
                match spec {
                    RootSpec::Coset(p) => Some(p.clone()),
                    RootSpec::Natural(a) => wrap(data.coset_action(a)?),
                    RootSpec::Q(q) => wrap(data.coset_action(&data.q_to_natural(q))?),
                    RootSpec::G(w) => {
                        let a = data.g_to_natural(self.0.tree.shape.chain(), w);
                        wrap(data.coset_action(&a)?)
                    }
                }
            }
            Kind::Product(g, h) => match (g.root()?, h.root()?) {
                (None, r) | (r, None) => r,
                (Some(a), Some(b)) => wrap(a.compose(&b)),
            },
            Kind::Inverse(g) => g.root()?.map(|p| Arc::new(p.inverse())),
        })
    }

    fn check_letter(&self, x: u32) -> Result<Arc<LevelData>> {
        let data = self.level_data()?;
        if x as usize >= data.x_size() {
            return Err(Error::domain(format!(
                "letter {x} outside X_{} of size {}",
                self.level(),
                data.x_size()
            )));
        }
        Ok(data)
    }

    /// Image of the first letter `x`.
    pub fn apply_letter(&self, x: u32) -> Result<u32> {
        self.check_letter(x)?;
        Ok(match self.root()? {
            None => x,
            Some(p) => p.apply(x),
        })
    }

    fn apply_letter_unchecked(&self, x: u32) -> Result<u32> {
        Ok(match self.root()? {
            None => x,
            Some(p) => p.apply(x),
        })
    }

    /// Image of the vertex `word`, one letter per level starting at this
    /// element's level.
    pub fn apply(&self, word: &[u32]) -> Result<Vec<u32>> {
        let shape = &self.0.tree.shape;
        shape.check_depth(self.level(), word.len())?;
        let mut out = Vec::with_capacity(word.len());
        let mut current = self.clone();
        for (i, &x) in word.iter().enumerate() {
            out.push(current.apply_letter(x)?);
            if i + 1 < word.len() {
                current = current.section(x)?;
            }
        }
        Ok(out)
    }

    /// Section `g|_x`, an automorphism at the next level.
    pub fn section(&self, x: u32) -> Result<TreeAut> {
        self.check_letter(x)?;
        if self.0.tree.memoize {
            if let Some(s) = self.0.sections.lock().expect("section memo").get(&x) {
                return Ok(s.clone());
            }
        }
        let s = self.compute_section(x)?;
        if self.0.tree.memoize {
            self.0
                .sections
                .lock()
                .expect("section memo")
                .entry(x)
                .or_insert_with(|| s.clone());
        }
        Ok(s)
    }

    fn compute_section(&self, x: u32) -> Result<TreeAut> {
        let tree = &self.0.tree;
        let next = self.0.level + 1;
        Ok(match &self.0.kind {
            Kind::Identity | Kind::Rooted(_) => Self::identity(tree, next),
            Kind::Directed(side, elem) => {
                let (alpha, beta) = tree.spine.at(self.0.level)?;
                let spine_point = match side {
                    SpineSide::Alpha => alpha,
                    SpineSide::Beta => beta,
                };
                if x == 0 {
                    Self::make(tree, next, Kind::Directed(*side, elem.clone()))
                } else if x == spine_point {
                    let spec = match elem {
                        DirectedElem::Q(q) => RootSpec::Q(q.clone()),
                        DirectedElem::G(g) => RootSpec::G(g.clone()),
                    };
                    Self::make(tree, next, Kind::Rooted(spec))
                } else {
                    Self::identity(tree, next)
                }
            }
            Kind::Embedded(letter, child) => {
                if x == *letter {
                    child.clone()
                } else {
                    Self::identity(tree, next)
                }
            }
            Kind::Product(g, h) => {
                let y = h.apply_letter_unchecked(x)?;
                g.section(y)?.compose(&h.section(x)?)
            }
            Kind::Inverse(g) => {
                let y = match g.root()? {
                    None => x,
                    Some(p) => p.inverse().apply(x),
                };
                g.section(y)?.inverse()
            }
        })
    }

    /// Section at a vertex `u` (`g|_u`), an automorphism at level
    /// `level + |u|`.
    pub fn section_at(&self, word: &[u32]) -> Result<TreeAut> {
        self.0.tree.shape.check_depth(self.level(), word.len())?;
        let mut current = self.clone();
        for &x in word {
            current = current.section(x)?;
        }
        Ok(current)
    }

    /// First letters whose section may be nontrivial, ascending. Every
    /// letter outside the support has a structurally trivial section.
    pub fn support(&self) -> Result<Arc<Vec<u32>>> {
        if let Some(s) = self.0.support.get() {
            return Ok(s.clone());
        }
        let computed = Arc::new(self.compute_support()?);
        Ok(self.0.support.get_or_init(|| computed).clone())
    }

    fn compute_support(&self) -> Result<Vec<u32>> {
        Ok(match &self.0.kind {
            Kind::Identity | Kind::Rooted(_) => Vec::new(),
            Kind::Directed(side, _) => {
                let (alpha, beta) = self.0.tree.spine.at(self.0.level)?;
                let point = match side {
                    SpineSide::Alpha => alpha,
                    SpineSide::Beta => beta,
                };
                vec![0, point]
            }
            Kind::Embedded(letter, _) => vec![*letter],
            Kind::Product(g, h) => {
                let mut set: BTreeSet<u32> = h.support()?.iter().copied().collect();
                let g_support = g.support()?;
                if !g_support.is_empty() {
                    match h.root()? {
                        None => set.extend(g_support.iter().copied()),
                        Some(p) => {
                            let inv = p.inverse();
                            set.extend(g_support.iter().map(|&y| inv.apply(y)));
                        }
                    }
                }
                set.into_iter().collect()
            }
            Kind::Inverse(g) => {
                let mut out: Vec<u32> = match g.root()? {
                    None => g.support()?.to_vec(),
                    Some(p) => g.support()?.iter().map(|&y| p.apply(y)).collect(),
                };
                out.sort_unstable();
                out
            }
        })
    }

    /// Length of the orbit of the vertex `word` under `⟨self⟩`.
    pub fn orbit_length(&self, word: &[u32]) -> Result<u64> {
        let mut count = 1u64;
        let mut v = self.apply(word)?;
        while v != word {
            v = self.apply(&v)?;
            count += 1;
        }
        Ok(count)
    }

    /// Stabilised section `g‖_u = (g^ℓ)|_u` with `ℓ` the orbit length of `u`.
    pub fn stabilized_section(&self, word: &[u32]) -> Result<TreeAut> {
        let l = self.orbit_length(word)?;
        self.pow(l as i64).section_at(word)
    }

    /// Whether `self` and `other` act identically on all vertices of length
    /// at most `depth`.
    pub fn equal_up_to_depth(&self, other: &TreeAut, depth: usize) -> Result<bool> {
        self.same_context(other)?;
        self.0.tree.shape.check_depth(self.level(), depth)?;
        self.inverse().compose(other).is_identity_to_depth(depth)
    }

    /// Whether `self` acts trivially on all vertices of length at most
    /// `depth`.
    pub fn is_identity_to_depth(&self, depth: usize) -> Result<bool> {
        self.0.tree.shape.check_depth(self.level(), depth)?;
        self.identity_rec(depth)
    }

    fn identity_rec(&self, depth: usize) -> Result<bool> {
        if depth == 0 || self.is_trivial() {
            return Ok(true);
        }
        if self.root()?.is_some() {
            return Ok(false);
        }
        for &x in self.support()?.iter() {
            if !self.section(x)?.identity_rec(depth - 1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Order of the permutation induced on vertices of length at most
    /// `depth`.
    pub fn order_to_depth(&self, depth: usize) -> Result<u128> {
        self.0.tree.shape.check_depth(self.level(), depth)?;
        self.order_rec(depth)
    }

    fn order_rec(&self, depth: usize) -> Result<u128> {
        if depth == 0 || self.is_trivial() {
            return Ok(1);
        }
        let root = self.root()?;
        let mut order: u128 = 1;
        if let Some(p) = &root {
            for len in p.cycle_type() {
                order = order.lcm(&(len as u128));
            }
        }
        if depth == 1 {
            return Ok(order);
        }
        let mut done = BTreeSet::new();
        for &x in self.support()?.iter() {
            if done.contains(&x) {
                continue;
            }
            let mut len = 0u64;
            let mut y = x;
            loop {
                done.insert(y);
                len += 1;
                y = match &root {
                    None => y,
                    Some(p) => p.apply(y),
                };
                if y == x {
                    break;
                }
            }
            let sub = self.pow(len as i64).section(x)?.order_rec(depth - 1)?;
            let part = (len as u128)
                .checked_mul(sub)
                .ok_or_else(|| Error::domain("order overflows u128"))?;
            order = order.lcm(&part);
        }
        Ok(order)
    }
}

fn check_q(q: &Permutation) -> Result<()> {
    if q.degree() != 5 || !q.is_even() {
        return Err(Error::domain(format!("{q} is not an element of Alt(5)")));
    }
    Ok(())
}

fn check_gword(tree: &Tree, g: &GWord) -> Result<()> {
    let names = tree.shape.chain().names().len();
    if g.syllables().iter().any(|&(i, _)| i as usize >= names) {
        return Err(Error::domain("G-word uses an unknown generator"));
    }
    Ok(())
}
