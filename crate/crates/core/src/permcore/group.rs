use std::collections::{HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::cycle_types;
use super::perm::Permutation;
use crate::error::{Error, Result};

/// Largest domain any group is allowed to act on.
pub const DEFAULT_DEGREE_CAP: usize = 200_000;

/// Largest group enumerated element by element.
pub const DEFAULT_ELEMENT_CAP: usize = 500_000;

/// A permutation group given by generators, with a lazily built
/// stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<Arc<StabChain>>,
}

/// Base and strong generating set produced by Schreier-Sims.
#[derive(Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<ChainLevel>,
}

#[derive(Debug)]
struct ChainLevel {
    base_point: u32,
    gens: Vec<Permutation>,
    inv_gens: Vec<Permutation>,
    orbit: Vec<u32>,
    // Schreier vector: generator index that first reached each point, or
    // NONE / ROOT.
    label: Vec<u32>,
}

const NONE: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

impl ChainLevel {
    fn new(base_point: u32, degree: usize, gens: Vec<Permutation>) -> Self {
        let inv_gens = gens.iter().map(Permutation::inverse).collect();
        let mut label = vec![NONE; degree];
        label[base_point as usize] = ROOT;
        let mut orbit = vec![base_point];
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit[i];
            for (k, g) in gens.iter().enumerate() {
                let x = g.apply(y);
                if label[x as usize] == NONE {
                    label[x as usize] = k as u32;
                    orbit.push(x);
                }
            }
            i += 1;
        }
        ChainLevel {
            base_point,
            gens,
            inv_gens,
            orbit,
            label,
        }
    }

    fn contains(&self, x: u32) -> bool {
        self.label[x as usize] != NONE
    }

    /// `u_x⁻¹ ∘ h`, where `u_x` maps the base point to `x`.
    fn strip(&self, x: u32, h: &Permutation) -> Permutation {
        let mut acc = h.clone();
        let mut y = x;
        loop {
            let k = self.label[y as usize];
            if k == ROOT {
                return acc;
            }
            acc = self.inv_gens[k as usize].compose(&acc);
            y = self.inv_gens[k as usize].apply(y);
        }
    }

    fn transversal(&self, x: u32) -> Permutation {
        self.strip(x, &Permutation::identity(self.label.len()))
            .inverse()
    }
}

impl StabChain {
    fn build(degree: usize, generators: &[Permutation], base_prefix: &[u32]) -> StabChain {
        let mut strong: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut base: Vec<u32> = base_prefix.to_vec();
        for g in &strong {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().expect("non-identity"));
            }
        }
        let level_gens = |strong: &[Permutation], base: &[u32], i: usize| -> Vec<Permutation> {
            strong
                .iter()
                .filter(|s| base[..i].iter().all(|&b| s.apply(b) == b))
                .cloned()
                .collect()
        };
        let mut levels: Vec<ChainLevel> = (0..base.len())
            .map(|i| ChainLevel::new(base[i], degree, level_gens(&strong, &base, i)))
            .collect();

        let mut i = levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            let mut restart = None;
            'scan: for idx in 0..levels[lvl].orbit.len() {
                let beta = levels[lvl].orbit[idx];
                let u_beta = levels[lvl].transversal(beta);
                for s in 0..levels[lvl].gens.len() {
                    let su = levels[lvl].gens[s].compose(&u_beta);
                    let image = su.apply(levels[lvl].base_point);
                    let h = levels[lvl].strip(image, &su);
                    if h.is_identity() {
                        continue;
                    }
                    let (residue, j) = sift_from(&levels, lvl + 1, h);
                    if residue.is_identity() {
                        continue;
                    }
                    if j == base.len() {
                        base.push(residue.first_moved().expect("non-identity residue"));
                    }
                    strong.push(residue);
                    for l in lvl + 1..=j {
                        let lg = level_gens(&strong, &base, l);
                        let rebuilt = ChainLevel::new(base[l], degree, lg);
                        if l < levels.len() {
                            levels[l] = rebuilt;
                        } else {
                            levels.push(rebuilt);
                        }
                    }
                    restart = Some(j);
                    break 'scan;
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        StabChain { degree, levels }
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        sift_from(&self.levels, 0, g.clone()).0.is_identity()
    }

    /// Strong generators that fix the first `depth` base points.
    fn strong_gens_at(&self, depth: usize) -> Vec<Permutation> {
        self.levels
            .get(depth)
            .map(|l| l.gens.clone())
            .unwrap_or_default()
    }
}

fn sift_from(levels: &[ChainLevel], start: usize, mut h: Permutation) -> (Permutation, usize) {
    for (j, level) in levels.iter().enumerate().skip(start) {
        let x = h.apply(level.base_point);
        if !level.contains(x) {
            return (h, j);
        }
        h = level.strip(x, &h);
    }
    (h, levels.len())
}

impl PermGroup {
    pub fn new(generators: Vec<Permutation>) -> Result<Self> {
        Self::with_cap(generators, DEFAULT_DEGREE_CAP)
    }

    pub fn with_cap(generators: Vec<Permutation>, degree_cap: usize) -> Result<Self> {
        let degree = generators
            .first()
            .ok_or_else(|| Error::domain("a permutation group needs at least one generator"))?
            .degree();
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::domain("generators have different degrees"));
        }
        if degree > degree_cap {
            return Err(Error::Resource {
                what: "permutation domain".into(),
                required: degree as u128,
                cap: degree_cap as u128,
            });
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: vec![Permutation::identity(degree)],
            chain: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| Arc::new(StabChain::build(self.degree, &self.generators, &[])))
    }

    pub fn has_cached_chain(&self) -> bool {
        self.chain.get().is_some()
    }

    fn check_point(&self, point: u32) -> Result<()> {
        if point as usize >= self.degree {
            return Err(Error::domain(format!(
                "point {} outside domain of degree {}",
                point, self.degree
            )));
        }
        Ok(())
    }

    /// Orbit of `point`, ascending.
    pub fn orbit(&self, point: u32) -> Result<Vec<u32>> {
        self.check_point(point)?;
        let mut seen = vec![false; self.degree];
        seen[point as usize] = true;
        let mut queue = VecDeque::from([point]);
        let mut out = vec![point];
        while let Some(y) = queue.pop_front() {
            for g in &self.generators {
                let x = g.apply(y);
                if !seen[x as usize] {
                    seen[x as usize] = true;
                    out.push(x);
                    queue.push_back(x);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0)
            .map(|o| o.len() == self.degree)
            .unwrap_or(false)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    /// Point stabilizer, generated by the reduced Schreier generators of a
    /// chain whose base starts at `point`.
    pub fn stabilizer(&self, point: u32) -> Result<PermGroup> {
        self.check_point(point)?;
        let chain = StabChain::build(self.degree, &self.generators, &[point]);
        let mut gens = chain.strong_gens_at(1);
        gens.dedup();
        if gens.is_empty() {
            gens.push(Permutation::identity(self.degree));
        }
        PermGroup::new(gens)
    }

    /// All elements, identity first and then in breadth-first discovery
    /// order over the generators.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
                let next = g.compose(&out[i]);
                if seen.insert(next.clone()) {
                    if out.len() >= cap {
                        return Err(Error::Resource {
                            what: "group element enumeration".into(),
                            required: cap as u128 + 1,
                            cap: cap as u128,
                        });
                    }
                    out.push(next);
                }
            }
            i += 1;
        }
        Ok(out)
    }

    fn factorial(n: usize) -> BigUint {
        (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
    }

    pub fn is_full_alternating(&self) -> bool {
        self.generators.iter().all(Permutation::is_even)
            && (self.degree < 2 || self.order() * 2u32 == Self::factorial(self.degree))
    }

    pub fn is_full_symmetric(&self) -> bool {
        self.order() == Self::factorial(self.degree)
    }

    /// Maximal element order. Alternating and symmetric groups are
    /// recognised and handled by cycle types; anything else is enumerated
    /// up to `DEFAULT_ELEMENT_CAP` elements.
    pub fn max_element_order(&self) -> Result<u64> {
        if self.degree >= 3 && self.is_full_alternating() {
            return Ok(cycle_types::max_order_alternating(self.degree));
        }
        if self.is_full_symmetric() {
            return Ok(cycle_types::max_order_symmetric(self.degree));
        }
        self.check_enumerable()?;
        Ok(self
            .elements(DEFAULT_ELEMENT_CAP)?
            .iter()
            .map(Permutation::order)
            .max()
            .unwrap_or(1))
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> Result<u64> {
        use num_integer::Integer;
        if self.degree >= 3 && self.is_full_alternating() {
            return Ok(cycle_types::exponent_alternating(self.degree));
        }
        if self.is_full_symmetric() {
            return Ok(cycle_types::exponent_symmetric(self.degree));
        }
        self.check_enumerable()?;
        Ok(self
            .elements(DEFAULT_ELEMENT_CAP)?
            .iter()
            .fold(1u64, |acc, g| acc.lcm(&g.order())))
    }

    fn check_enumerable(&self) -> Result<()> {
        let order = self.order();
        match order.to_usize() {
            Some(n) if n <= DEFAULT_ELEMENT_CAP => Ok(()),
            _ => Err(Error::Resource {
                what: "element enumeration of an unrecognised group".into(),
                required: order.to_u128().unwrap_or(u128::MAX),
                cap: DEFAULT_ELEMENT_CAP as u128,
            }),
        }
    }

    /// Normal closure of `gens` in this group.
    pub fn normal_closure(&self, gens: &[Permutation]) -> Result<PermGroup> {
        let mut current: Vec<Permutation> =
            gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if current.is_empty() {
            return Ok(PermGroup::trivial(self.degree));
        }
        loop {
            let sub = PermGroup::new(current.clone())?;
            let mut added = false;
            for h in sub.generators.clone() {
                for g in &self.generators {
                    let c = g.conjugate(&h);
                    if !sub.contains(&c) && !current.contains(&c) {
                        current.push(c);
                        added = true;
                    }
                }
            }
            if !added {
                return Ok(sub);
            }
        }
    }

    /// Normal closure of the commutators of the generators, which is the
    /// derived subgroup.
    pub fn derived_subgroup(&self) -> Result<PermGroup> {
        let mut comms = Vec::new();
        for a in &self.generators {
            for b in &self.generators {
                let c = a.commutator(b);
                if !c.is_identity() && !comms.contains(&c) {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    pub fn is_perfect(&self) -> Result<bool> {
        Ok(self.derived_subgroup()?.order() == self.order())
    }
}

/// Whether `gens` generate the full alternating group of `degree`.
pub fn generates_alternating(gens: &[Permutation], degree: usize) -> Result<bool> {
    if let Some((i, g)) = gens.iter().enumerate().find(|(_, g)| !g.is_even()) {
        return Err(Error::precondition(format!(
            "generator #{i} {g} is an odd permutation"
        )));
    }
    if gens.iter().any(|g| g.degree() != degree) {
        return Err(Error::precondition(format!(
            "generators must have degree {degree}"
        )));
    }
    let gens = if gens.is_empty() {
        vec![Permutation::identity(degree)]
    } else {
        gens.to_vec()
    };
    let group = PermGroup::new(gens)?;
    let half_factorial = PermGroup::factorial(degree) / 2u32;
    Ok(group.order() == half_factorial.max(BigUint::one()))
}

/// Standard generators `(1 2 3)` and `(1 2 .. n)` or `(2 .. n)` of `Alt(n)`.
pub fn alternating_generators(n: usize) -> Vec<Permutation> {
    if n < 3 {
        return vec![Permutation::identity(n.max(1))];
    }
    let c3 = Permutation::from_cycles(n, &[vec![0, 1, 2]]).expect("valid");
    let long: Vec<u32> = if n % 2 == 1 {
        (0..n as u32).collect()
    } else {
        (1..n as u32).collect()
    };
    let lc = Permutation::from_cycles(n, &[long]).expect("valid");
    vec![c3, lc]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn orbits() {
        let trivial = PermGroup::trivial(5);
        assert_eq!(trivial.orbit(0).unwrap(), vec![0]);
        let alt5 = PermGroup::new(alternating_generators(5)).unwrap();
        assert_eq!(alt5.orbit(0).unwrap(), vec![0, 1, 2, 3, 4]);
        let c3 = PermGroup::new(vec![p("(1 2 3)", 5)]).unwrap();
        assert_eq!(c3.orbit(3).unwrap(), vec![3]);
        assert!(c3.orbit(5).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(PermGroup::trivial(4).order(), BigUint::one());
        for n in 3..=9 {
            let g = PermGroup::new(alternating_generators(n)).unwrap();
            assert_eq!(g.order() * 2u32, PermGroup::factorial(n), "Alt({n})");
        }
    }

    #[test]
    fn transitivity() {
        assert!(PermGroup::new(alternating_generators(5))
            .unwrap()
            .is_transitive());
        assert!(!PermGroup::new(vec![p("(1 2)(3 4)", 4)])
            .unwrap()
            .is_transitive());
        assert!(PermGroup::trivial(1).is_transitive());
    }

    #[test]
    fn stabilizers() {
        let alt5 = PermGroup::new(alternating_generators(5)).unwrap();
        assert_eq!(alt5.stabilizer(4).unwrap().order(), BigUint::from(12u32));
        let c3 = PermGroup::new(vec![p("(1 2 3)", 5)]).unwrap();
        assert_eq!(c3.stabilizer(0).unwrap().order(), BigUint::one());
        assert_eq!(
            PermGroup::trivial(3).stabilizer(2).unwrap().order(),
            BigUint::one()
        );
    }

    #[test]
    fn alternating_generation() {
        let gens: Vec<_> = (3..=5).map(|y| p(&format!("(1 2 {y})"), 5)).collect();
        assert!(generates_alternating(&gens, 5).unwrap());
        assert!(!generates_alternating(&[p("(1 2 3)", 5)], 5).unwrap());
        let err = generates_alternating(&[p("(1 2)", 5)], 5).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn element_orders() {
        assert_eq!(PermGroup::trivial(3).max_element_order().unwrap(), 1);
        let alt5 = PermGroup::new(alternating_generators(5)).unwrap();
        assert_eq!(alt5.max_element_order().unwrap(), 5);
        let alt7 = PermGroup::new(alternating_generators(7)).unwrap();
        assert_eq!(alt7.max_element_order().unwrap(), 7);
        // generic path: dihedral group of order 8
        let d4 = PermGroup::new(vec![p("(1 2 3 4)", 4), p("(1 3)", 4)]).unwrap();
        assert!(!d4.is_full_symmetric());
        assert_eq!(d4.max_element_order().unwrap(), 4);
        assert_eq!(d4.exponent().unwrap(), 4);
    }

    #[test]
    fn perfectness() {
        let alt5 = PermGroup::new(alternating_generators(5)).unwrap();
        assert!(alt5.is_perfect().unwrap());
        let s4 = PermGroup::new(vec![p("(1 2 3 4)", 4), p("(1 2)", 4)]).unwrap();
        assert!(!s4.is_perfect().unwrap());
        assert_eq!(s4.derived_subgroup().unwrap().order(), BigUint::from(12u32));
    }

    #[test]
    fn cached_chain_is_stable() {
        let g = PermGroup::new(alternating_generators(6)).unwrap();
        assert!(!g.has_cached_chain());
        let first = g.order();
        assert!(g.has_cached_chain());
        let fresh = StabChain::build(6, g.generators(), &[]).order();
        assert_eq!(first, fresh);
    }
}
