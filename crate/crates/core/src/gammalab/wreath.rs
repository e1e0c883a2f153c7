use serde::{Deserialize, Serialize};

use super::scenario::GammaScenario;
use crate::altembed::{q_generator_names, q_generators, GWord};
use crate::error::{Error, Result};
use crate::permcore::{PermGroup, Permutation};
use crate::treeauto::{DirectedElem, SpineSide, TreeAut};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathReport {
    pub scenario: String,
    pub level: usize,
    pub depth: usize,
    pub alpha: u32,
    pub beta: u32,
    /// The element `a ∈ St_{A_j}(o)` moving `α_j`, in natural degree.
    pub witness: String,
    /// Set when a proposed `a` was rejected.
    pub rejected_candidate: Option<String>,
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
}

fn commutator(x: &TreeAut, y: &TreeAut) -> TreeAut {
    x.inverse().compose(&y.inverse()).compose(x).compose(y)
}

/// Finds `a ∈ St_{A_j}(o)` with `a·α_j ≠ α_j`, preferring `candidate`.
/// `St_{A_j}(o)` is the subgroup `⟨σ⟩` itself, so the search runs over its
/// nontrivial elements.
fn stabilizer_witness(
    s: &GammaScenario,
    level: usize,
    candidate: Option<&Permutation>,
) -> Result<(Permutation, Option<String>)> {
    let data = s.shape().level(level)?;
    let (alpha, _) = s.spine().at(level)?;
    let mut rejected = None;
    if let Some(a) = candidate {
        data.check_natural(a)?;
        if data.act(a, 0) == 0 && data.act(a, alpha) != alpha {
            return Ok((a.clone(), None));
        }
        rejected = Some(a.to_string());
    }
    let sigma = data.sigma();
    for k in 1..sigma.order() as i64 {
        let a = sigma.pow(k);
        debug_assert_eq!(data.act(&a, 0), 0);
        if data.act(&a, alpha) != alpha {
            return Ok((a, rejected));
        }
    }
    Err(Error::precondition(format!(
        "o and alpha_{level} have the same stabilizer in A_{level}"
    )))
}

/// Checks the identities behind the rigid-stabilizer argument at level `j`
/// on vertices of length at most `depth`:
///
/// 1. some `a ∈ St_{A_j}(o)` moves `α_j`;
/// 2. `[ᵃp̃^α_j, q̃^α_j]` equals `[p̃^α_{j+1}, q̃^α_{j+1}]` placed at `o`, for
///    all pairs of `Q`-generators;
/// 3. `q̃^α_j · (q̃^α_{j+1} at o)⁻¹` is `q_{j+1}` placed at `α_j`;
/// 4. with `k` the image of `g` in `A_{j+1}` placed at `β_j`,
///    `k⁻¹ g̃^β_j` equals `g̃^β_{j+1}` placed at `o`, for every generator
///    `g` of `G`.
pub fn verify_wreath_identities(
    s: &GammaScenario,
    level: usize,
    depth: usize,
    candidate: Option<&Permutation>,
) -> Result<WreathReport> {
    if depth == 0 {
        return Err(Error::config("depth must be at least 1"));
    }
    let tree = s.tree();
    tree.shape().check_depth(level, depth)?;
    let (alpha, beta) = s.spine().at(level)?;
    let (a, rejected) = stabilizer_witness(s, level, candidate)?;
    let data = s.shape().level(level)?;
    let mut checks = vec![IdentityCheck {
        name: "stabilizer of o moves alpha".into(),
        passed: true,
        detail: format!(
            "a = {a} fixes o and sends {alpha} to {}",
            data.act(&a, alpha)
        ),
    }];

    let a_rooted = TreeAut::rooted(tree, level, a.clone())?;
    let q_names = q_generator_names();
    let qs = q_generators();
    let directed_q = |lvl: usize, q: &Permutation| {
        TreeAut::directed(tree, lvl, SpineSide::Alpha, DirectedElem::Q(q.clone()))
    };
    for (pn, p) in q_names.iter().zip(&qs) {
        for (qn, q) in q_names.iter().zip(&qs) {
            let lhs = commutator(
                &a_rooted
                    .compose(&directed_q(level, p)?)
                    .compose(&a_rooted.inverse()),
                &directed_q(level, q)?,
            );
            let inner = commutator(&directed_q(level + 1, p)?, &directed_q(level + 1, q)?);
            let rhs = TreeAut::embedded(0, &inner)?;
            let passed = lhs.equal_up_to_depth(&rhs, depth)?;
            let trivial =
                p == q && lhs.is_identity_to_depth(depth)? && rhs.is_identity_to_depth(depth)?;
            checks.push(IdentityCheck {
                name: format!("commutator [a {pn}, {qn}] descends to o"),
                passed,
                detail: if trivial {
                    "both sides trivial".into()
                } else {
                    String::new()
                },
            });
        }
    }
    for (qn, q) in q_names.iter().zip(&qs) {
        let lhs = directed_q(level, q)?
            .compose(&TreeAut::embedded(0, &directed_q(level + 1, q)?)?.inverse());
        let rhs = TreeAut::embedded(alpha, &TreeAut::rooted_q(tree, level + 1, q.clone())?)?;
        let passed = lhs.equal_up_to_depth(&rhs, depth)?;
        let mut support = Vec::new();
        for &x in lhs.support()?.iter() {
            if !lhs.section(x)?.is_identity_to_depth(depth - 1)? {
                support.push(x);
            }
        }
        let rooted_trivial = lhs.root()?.is_none_or(|r| r.is_identity());
        checks.push(IdentityCheck {
            name: format!("{qn} times inverse of its copy at o lives at alpha"),
            passed: passed && rooted_trivial && support == [alpha],
            detail: format!("support {support:?}"),
        });
    }
    for (i, gn) in s.chain().names().iter().enumerate() {
        let g = GWord::generator(i);
        let k = TreeAut::embedded(beta, &TreeAut::rooted_g(tree, level + 1, g.clone())?)?;
        let g_here = TreeAut::directed(tree, level, SpineSide::Beta, DirectedElem::G(g.clone()))?;
        let g_next = TreeAut::directed(tree, level + 1, SpineSide::Beta, DirectedElem::G(g))?;
        let lhs = k.inverse().compose(&g_here);
        let rhs = TreeAut::embedded(0, &g_next)?;
        checks.push(IdentityCheck {
            name: format!("k^-1 {gn} descends to o"),
            passed: lhs.equal_up_to_depth(&rhs, depth)?,
            detail: format!(
                "k places the image of {gn} in A_{} at beta = {beta}",
                level + 1
            ),
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(WreathReport {
        scenario: s.id().to_string(),
        level,
        depth,
        alpha,
        beta,
        witness: a.to_string(),
        rejected_candidate: rejected,
        checks,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectnessReport {
    pub level: usize,
    pub order: String,
    pub derived_order: String,
    pub perfect: bool,
}

/// Compares `|A_j|` with the order of the normal closure of the
/// commutators of its generators.
pub fn perfectness(s: &GammaScenario, level: usize) -> Result<PerfectnessReport> {
    let data = s.shape().level(level)?;
    let group = PermGroup::new(data.a_generators().to_vec())?;
    let derived = group.derived_subgroup()?;
    Ok(PerfectnessReport {
        level,
        order: group.order().to_string(),
        derived_order: derived.order().to_string(),
        perfect: group.order() == derived.order(),
    })
}
