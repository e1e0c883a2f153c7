use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::chain::GroupChain;
use super::gword::GWord;
use super::table::FiniteGroupTable;
use super::{embed_finite_group, q_generators, verify_altalt};
use crate::error::{Error, Result};
use crate::permcore::{generates_alternating, PermGroup, Permutation};

const BITS: u32 = 5;
const MAX_WIDTH: usize = 12;

/// Left cosets of `⟨σ⟩`, `σ = (1 2 3)`, in `Alt(m)`.
///
/// Since every coset `g⟨σ⟩` contains exactly the even permutations that
/// agree with `g` on the points `4, .., m`, a coset is stored as the image
/// tuple `(g(4), .., g(m))`, packed into a `u64`.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    alt_degree: usize,
    keys: Vec<u64>,
    index: HashMap<u64, u32>,
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

impl CosetSpace {
    fn width(&self) -> usize {
        self.alt_degree - 3
    }

    fn pack(images: impl Iterator<Item = u32>) -> u64 {
        images.enumerate().fold(0u64, |acc, (i, y)| {
            acc | ((y as u64) << (BITS as usize * i))
        })
    }

    fn unpack(&self, key: u64) -> impl Iterator<Item = u32> + '_ {
        (0..self.width()).map(move |i| ((key >> (BITS as usize * i)) & ((1 << BITS) - 1)) as u32)
    }

    /// Enumerates the cosets breadth-first from `⟨σ⟩` (index 0) using
    /// `gens` in order.
    fn build(alt_degree: usize, gens: &[Permutation], cap: usize) -> Result<Self> {
        if !(5..=MAX_WIDTH + 3).contains(&alt_degree) {
            return Err(Error::domain(format!(
                "coset space of Alt({alt_degree}) unsupported"
            )));
        }
        let expected = factorial(alt_degree) / 6u32;
        if expected > BigUint::from(cap) {
            return Err(Error::Resource {
                what: format!("coset space Alt({alt_degree})/<(1 2 3)>"),
                required: expected.to_u128().unwrap_or(u128::MAX),
                cap: cap as u128,
            });
        }
        let mut space = CosetSpace {
            alt_degree,
            keys: Vec::new(),
            index: HashMap::new(),
        };
        let origin = Self::pack(3..alt_degree as u32);
        space.keys.push(origin);
        space.index.insert(origin, 0);
        let mut i = 0;
        while i < space.keys.len() {
            let key = space.keys[i];
            for g in gens {
                let next = Self::pack(space.unpack(key).map(|y| g.apply(y)));
                if !space.index.contains_key(&next) {
                    space.index.insert(next, space.keys.len() as u32);
                    space.keys.push(next);
                }
            }
            i += 1;
        }
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Image of coset `x` under left multiplication by `g ∈ Alt(m)`.
    pub fn act(&self, g: &Permutation, x: u32) -> u32 {
        let key = Self::pack(self.unpack(self.keys[x as usize]).map(|y| g.apply(y)));
        self.index[&key]
    }

    /// The permutation of the cosets induced by `g`.
    pub fn action(&self, g: &Permutation) -> Permutation {
        let images = (0..self.len() as u32).map(|x| self.act(g, x)).collect();
        Permutation::from_images(images).expect("coset action is a bijection")
    }

    /// 0-based images `(g(4), .., g(m))` of a representative `g` of coset `x`.
    pub fn representative(&self, x: u32) -> Vec<u32> {
        self.unpack(self.keys[x as usize]).collect()
    }
}

/// Which part of the partition `X = {o} ⊔ Y ⊔ Y'` a point lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointClass {
    Origin,
    Y,
    YPrime,
}

/// One level of the tree: `X_j = A_j/⟨σ_j⟩` with `A_j = Alt(2n_j+3)`,
/// the designated point `o = ⟨σ_j⟩`, and the sets `Y_j`, `Y_j'`.
///
/// Elements of `A_j` are handled in their natural degree `2n_j+3` and
/// mapped to `X_j` on demand.
#[derive(Debug)]
pub struct LevelData {
    index: usize,
    n: usize,
    alt_degree: usize,
    sigma: Permutation,
    table: FiniteGroupTable,
    quotient_elements: HashMap<Permutation, u32>,
    f_images: Vec<Permutation>,
    q_natural: Vec<Permutation>,
    g_natural: Vec<Permutation>,
    a_natural: Vec<Permutation>,
    a_order: BigUint,
    cosets: CosetSpace,
    a_coset: Vec<Permutation>,
    q_image: Vec<Permutation>,
    g_image: Vec<Permutation>,
    sigma_coset: Permutation,
    classes: Vec<PointClass>,
    y: Vec<u32>,
    y_prime: Vec<u32>,
    max_order: u64,
    exponent: u64,
}

impl LevelData {
    /// Builds and verifies the data for quotient `index` (1-based) of `chain`.
    pub fn build(chain: &GroupChain, index: usize, degree_cap: usize) -> Result<LevelData> {
        if index == 0 || index > chain.quotients().len() {
            return Err(Error::config(format!("no quotient with index {index}")));
        }
        let quotient = chain.quotient(index);
        let gens = if quotient.images.is_empty() {
            vec![Permutation::identity(quotient.degree)]
        } else {
            quotient.images.clone()
        };
        let (table, elements) = FiniteGroupTable::from_permutations(&gens)?;
        let quotient_elements: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let n = table.order();
        let alt_degree = 2 * n + 3;
        let f_images = embed_finite_group(&table)?;
        let q_natural: Vec<Permutation> = q_generators()
            .iter()
            .map(|q| q.extend(alt_degree))
            .collect::<Result<_>>()?;
        let g_natural: Vec<Permutation> = quotient
            .images
            .iter()
            .map(|img| f_images[quotient_elements[img] as usize].clone())
            .collect();
        let mut a_natural = q_natural.clone();
        for g in &g_natural {
            if !g.is_identity() && !a_natural.contains(g) {
                a_natural.push(g.clone());
            }
        }

        if !verify_altalt(&f_images, n)? {
            return Err(Error::Verification(format!(
                "conjugates of Alt(5) do not generate Alt({alt_degree})"
            )));
        }
        if !generates_alternating(&a_natural, alt_degree)? {
            return Err(Error::Verification(format!(
                "G-conjugates of Q do not generate Alt({alt_degree})"
            )));
        }
        let a_order = PermGroup::new(a_natural.clone())?.order();

        let cosets = CosetSpace::build(alt_degree, &a_natural, degree_cap)?;
        let x_size = cosets.len();
        if BigUint::from(x_size) * 6u32 != factorial(alt_degree) {
            return Err(Error::Verification(format!(
                "coset enumeration found {x_size} cosets, expected {alt_degree}!/6"
            )));
        }
        let a_coset: Vec<Permutation> = a_natural.iter().map(|g| cosets.action(g)).collect();
        let q_image = q_natural.iter().map(|g| cosets.action(g)).collect();
        let g_image = g_natural.iter().map(|g| cosets.action(g)).collect();

        let sigma = Permutation::from_cycles(alt_degree, &[vec![0, 1, 2]])?;
        let sigma_coset = cosets.action(&sigma);
        // |Stab(o)| = |A|/|X| = 3 and σ fixes o, so Stab(o) = ⟨σ⟩. A point x
        // has Stab(x) = ⟨σ⟩ exactly when σ fixes x.
        if sigma_coset.apply(0) != 0
            || sigma_coset.order() != 3
            || a_order.clone() != BigUint::from(x_size) * 3u32
        {
            return Err(Error::Verification("stabilizer of o is not <σ>".into()));
        }
        let mut classes = vec![PointClass::Y; x_size];
        classes[0] = PointClass::Origin;
        let mut y = Vec::new();
        let mut y_prime = Vec::new();
        for x in 1..x_size as u32 {
            if sigma_coset.apply(x) == x {
                classes[x as usize] = PointClass::YPrime;
                y_prime.push(x);
            } else {
                y.push(x);
            }
        }
        let expected_y_prime = factorial(2 * n) - 1u32;
        if BigUint::from(y_prime.len()) != expected_y_prime {
            return Err(Error::Verification(format!(
                "|Y'| = {} but (2n)!-1 = {expected_y_prime}",
                y_prime.len()
            )));
        }
        if y.len() + y_prime.len() + 1 != x_size {
            return Err(Error::Verification("Y, Y', {o} do not partition X".into()));
        }

        let natural = PermGroup::new(a_natural.clone())?;
        let max_order = natural.max_element_order()?;
        let exponent = natural.exponent()?;

        Ok(LevelData {
            index,
            n,
            alt_degree,
            sigma,
            table,
            quotient_elements,
            f_images,
            q_natural,
            g_natural,
            a_natural,
            a_order,
            cosets,
            a_coset,
            q_image,
            g_image,
            sigma_coset,
            classes,
            y,
            y_prime,
            max_order,
            exponent,
        })
    }

    /// 1-based index of the quotient this level was built from.
    pub fn index(&self) -> usize {
        self.index
    }

    /// `n_j = |G/N_j|`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alt_degree(&self) -> usize {
        self.alt_degree
    }

    pub fn x_size(&self) -> usize {
        self.cosets.len()
    }

    pub fn origin(&self) -> u32 {
        0
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn sigma_coset(&self) -> &Permutation {
        &self.sigma_coset
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    pub fn group_table(&self) -> &FiniteGroupTable {
        &self.table
    }

    pub fn f_images(&self) -> &[Permutation] {
        &self.f_images
    }

    /// Generators of `A_j` in natural degree: the two `Q` generators
    /// followed by the nontrivial images of the `G` generators.
    pub fn a_generators(&self) -> &[Permutation] {
        &self.a_natural
    }

    /// `A_j` acting on `X_j`.
    pub fn a_group(&self) -> Result<PermGroup> {
        PermGroup::new(self.a_coset.clone())
    }

    pub fn a_order(&self) -> &BigUint {
        &self.a_order
    }

    pub fn q_natural(&self) -> &[Permutation] {
        &self.q_natural
    }

    pub fn g_natural(&self) -> &[Permutation] {
        &self.g_natural
    }

    pub fn q_image(&self) -> &[Permutation] {
        &self.q_image
    }

    pub fn g_image(&self) -> &[Permutation] {
        &self.g_image
    }

    pub fn y(&self) -> &[u32] {
        &self.y
    }

    pub fn y_prime(&self) -> &[u32] {
        &self.y_prime
    }

    pub fn class(&self, x: u32) -> PointClass {
        self.classes[x as usize]
    }

    /// `m_j`, the maximal element order in `A_j`.
    pub fn max_order(&self) -> u64 {
        self.max_order
    }

    /// Exponent of `A_j`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Action of `a ∈ A_j` (natural degree) on the point `x ∈ X_j`.
    pub fn act(&self, a: &Permutation, x: u32) -> u32 {
        self.cosets.act(a, x)
    }

    pub fn coset_action(&self, a: &Permutation) -> Result<Permutation> {
        self.check_natural(a)?;
        Ok(self.cosets.action(a))
    }

    pub fn check_natural(&self, a: &Permutation) -> Result<()> {
        if a.degree() != self.alt_degree {
            return Err(Error::domain(format!(
                "element of degree {} used at a level with A = Alt({})",
                a.degree(),
                self.alt_degree
            )));
        }
        if !a.is_even() {
            return Err(Error::domain(format!("{a} is odd, hence not in A")));
        }
        Ok(())
    }

    /// Image of `q ∈ Alt(5)` in `A_j`.
    pub fn q_to_natural(&self, q: &Permutation) -> Permutation {
        q.extend(self.alt_degree).expect("alt degree is at least 5")
    }

    /// Image of a `G`-word in `A_j`, through this level's quotient.
    pub fn g_to_natural(&self, chain: &GroupChain, word: &GWord) -> Permutation {
        let perm = chain.quotient(self.index).eval(word);
        let elem = self.quotient_elements[&perm];
        self.f_images[elem as usize].clone()
    }

    /// The value `(2n+3)!/3 - (2n)!` printed for `|Y|` in the source
    /// construction; it disagrees with the enumerated `|Y|`.
    pub fn printed_y_formula(&self) -> BigUint {
        factorial(self.alt_degree) / 3u32 - factorial(2 * self.n)
    }

    /// Order of `Stab(o)` computed directly with Schreier-Sims on the coset
    /// action. Intended for small levels.
    pub fn origin_stabilizer_order(&self) -> Result<BigUint> {
        Ok(self.a_group()?.stabilizer(0)?.order())
    }

    pub fn export(&self) -> LevelExport {
        LevelExport {
            index: self.index,
            n: self.n,
            alt_degree: self.alt_degree,
            sigma: self.sigma.to_string(),
            x_size: self.x_size(),
            o: 0,
            a_generators: self.a_natural.iter().map(|g| g.to_string()).collect(),
            cosets: (0..self.x_size() as u32)
                .map(|x| {
                    self.cosets
                        .representative(x)
                        .iter()
                        .map(|y| y + 1)
                        .collect()
                })
                .collect(),
            y: self.y.clone(),
            y_prime: self.y_prime.clone(),
            y_size: self.y.len(),
            y_prime_size: self.y_prime.len(),
            y_prime_formula: (factorial(2 * self.n) - 1u32).to_string(),
            printed_y_formula: self.printed_y_formula().to_string(),
            max_order: self.max_order,
            exponent: self.exponent,
        }
    }
}

/// Machine-readable dump of a level. Coset `x` is listed by the 1-based
/// images of points `4, .., m` under any representative; point indices in
/// `y`/`y_prime` are 0-based coset indices with `o = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelExport {
    pub index: usize,
    pub n: usize,
    pub alt_degree: usize,
    pub sigma: String,
    pub x_size: usize,
    pub o: u32,
    pub a_generators: Vec<String>,
    pub cosets: Vec<Vec<u32>>,
    pub y: Vec<u32>,
    pub y_prime: Vec<u32>,
    pub y_size: usize,
    pub y_prime_size: usize,
    pub y_prime_formula: String,
    pub printed_y_formula: String,
    pub max_order: u64,
    pub exponent: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::DEFAULT_DEGREE_CAP;

    #[test]
    fn trivial_quotient_level() {
        let lvl = LevelData::build(&GroupChain::trivial(), 1, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(lvl.x_size(), 20);
        assert_eq!(lvl.y_prime().len(), 1);
        assert_eq!(lvl.y().len(), 18);
        assert_eq!(lvl.max_order(), 5);
        assert_eq!(lvl.origin_stabilizer_order().unwrap(), BigUint::from(3u32));
        assert_eq!(lvl.printed_y_formula(), BigUint::from(38u32));
        assert!(lvl.a_group().unwrap().is_transitive());
    }

    #[test]
    fn stabilizers_by_enumeration_match_classes() {
        // Y' ∪ {o} are exactly the points whose stabilizer equals Stab(o).
        let lvl = LevelData::build(&GroupChain::trivial(), 1, DEFAULT_DEGREE_CAP).unwrap();
        let group = lvl.a_group().unwrap();
        let stab_o = group.stabilizer(0).unwrap();
        for x in 0..lvl.x_size() as u32 {
            let stab_x = group.stabilizer(x).unwrap();
            let same = stab_x.generators().iter().all(|g| stab_o.contains(g))
                && stab_o.generators().iter().all(|g| stab_x.contains(g));
            assert_eq!(same, lvl.class(x) != PointClass::Y, "point {x}");
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let err = LevelData::build(&GroupChain::cyclic(2), 1, 100).unwrap_err();
        assert!(matches!(err, Error::Resource { required: 840, .. }));
    }
}
