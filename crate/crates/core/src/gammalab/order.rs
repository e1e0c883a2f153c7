use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::scenario::GammaScenario;
use crate::altembed::GWord;
use crate::error::{Error, Result};
use crate::fpwords::{
    evaluate, parse_word, render_word, stabilized_section_word_with, FPWord, Letter,
};

/// Exponent of `Q = Alt(5)`.
const Q_EXPONENT: u64 = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualLetter {
    pub g: String,
    /// Order in each quotient of the chain.
    pub orders: Vec<u64>,
}

/// Finite-order certificate for a word `w`.
///
/// At the shrink depth `k` every stabilized section of `w` has length at
/// most `(1,0)`. With `m` the lcm of the orbit sizes of `w` on level `k`
/// and `e = lcm(exp Q, exp A_{start+k})`, every level-`k` section of
/// `w^(m·e)` is a pure `G`-letter (the residuals), so for finite `G` the
/// order divides `m·e·lcm(residual orders)`.
///
/// `order` is the exact order, obtained as the lcm over orbit
/// representatives `x` of `ℓ_x · ord(w‖_x)`, recursively until the
/// stabilized sections are short. `truncation_order` is the order of the
/// action on vertices of length at most `verification_depth`; it must
/// divide the claimed order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCertificate {
    pub scenario: String,
    pub word: String,
    pub level: usize,
    pub budget: usize,
    pub complete: bool,
    pub shrink_depth: Option<usize>,
    pub m: Option<u128>,
    pub e: Option<u64>,
    pub residual: Vec<ResidualLetter>,
    /// `m·e·lcm(residual orders)`, finite `G` only.
    pub order_multiple: Option<u128>,
    /// `m·e`; for infinite `G` the order divides `m·e` times the orders of
    /// the residual letters in `G`.
    pub n_prime: Option<u128>,
    pub order: Option<u128>,
    pub verification_depth: usize,
    pub truncation_order: Option<u128>,
    pub verified: bool,
}

#[derive(Clone)]
struct Info {
    order: u128,
    depth: usize,
    terminals: BTreeSet<(FPWord, u128)>,
}

struct Analyzer<'a> {
    scenario: &'a GammaScenario,
    last_level: usize,
    memo: HashMap<FPWord, Option<Info>>,
}

fn checked_lcm(a: u128, b: u128) -> Result<u128> {
    let g = a.gcd(&b);
    (a / g)
        .checked_mul(b)
        .ok_or_else(|| Error::domain("order exceeds u128"))
}

fn checked_mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b)
        .ok_or_else(|| Error::domain("order exceeds u128"))
}

impl Analyzer<'_> {
    /// Order of `g̃^β` at `level`: the lcm of the orders of `g` in the
    /// quotients used at all deeper levels.
    fn directed_g_order(&self, level: usize, g: &GWord) -> u64 {
        let chain = self.scenario.chain();
        let from = chain.quotient_index_for_level(level + 1);
        chain.quotients()[from - 1..]
            .iter()
            .map(|q| q.eval(g).order())
            .fold(1, |acc, o| acc.lcm(&o))
    }

    fn short_order(&self, w: &FPWord) -> u128 {
        match w.letters() {
            [] => 1,
            [Letter::A(a)] => a.order() as u128,
            [Letter::B(b)] => (b.q.order().lcm(&self.directed_g_order(w.level(), &b.g))) as u128,
            _ => unreachable!("short words have at most one letter"),
        }
    }

    fn analyze(&mut self, w: &FPWord) -> Result<Option<Info>> {
        if let Some(info) = self.memo.get(w) {
            return Ok(info.clone());
        }
        let info = self.compute(w)?;
        self.memo.insert(w.clone(), info.clone());
        Ok(info)
    }

    fn compute(&mut self, w: &FPWord) -> Result<Option<Info>> {
        if w.length().is_short() {
            let mut terminals = BTreeSet::new();
            if !w.is_empty() {
                terminals.insert((w.clone(), 1));
            }
            return Ok(Some(Info {
                order: self.short_order(w),
                depth: 0,
                terminals,
            }));
        }
        if w.level() >= self.last_level {
            return Ok(None);
        }
        let shape = self.scenario.shape().clone();
        let data = shape.level(w.level())?;
        let pair = self.scenario.spine().at(w.level())?;
        let a = w.root_natural(data.alt_degree());
        let mut visited = vec![false; data.x_size()];
        let mut info = Info {
            order: 1,
            depth: 0,
            terminals: BTreeSet::new(),
        };
        for x in 0..data.x_size() as u32 {
            if visited[x as usize] {
                continue;
            }
            let mut len = 0u128;
            let mut y = x;
            while !visited[y as usize] {
                visited[y as usize] = true;
                len += 1;
                y = data.act(&a, y);
            }
            let sw = stabilized_section_word_with(w, x, pair, &shape)?;
            let Some(child) = self.analyze(&sw)? else {
                return Ok(None);
            };
            info.order = checked_lcm(info.order, checked_mul(len, child.order)?)?;
            info.depth = info.depth.max(child.depth + 1);
            for (u, l) in child.terminals {
                info.terminals.insert((u, checked_mul(l, len)?));
            }
        }
        Ok(Some(info))
    }
}

/// Builds an order certificate for `w` (a word at the scenario's start
/// level), searching at most `budget` levels for the shrink depth and
/// checking the claim on vertices of length at most `depth`.
pub fn certify_finite_order(
    w: &FPWord,
    s: &GammaScenario,
    budget: usize,
    depth: usize,
) -> Result<OrderCertificate> {
    if w.level() != s.start() {
        return Err(Error::domain(
            "word must live at the scenario's start level",
        ));
    }
    if depth == 0 {
        return Err(Error::config("verification depth must be at least 1"));
    }
    let s = s.with_horizon(s.horizon().max(budget + 1).max(depth))?;
    let shape = s.shape().clone();
    let mut cert = OrderCertificate {
        scenario: s.id().to_string(),
        word: render_word(w, &shape),
        level: w.level(),
        budget,
        complete: false,
        shrink_depth: None,
        m: None,
        e: None,
        residual: Vec::new(),
        order_multiple: None,
        n_prime: None,
        order: None,
        verification_depth: depth,
        truncation_order: None,
        verified: false,
    };
    let mut analyzer = Analyzer {
        scenario: &s,
        last_level: s.start() + budget,
        memo: HashMap::new(),
    };
    let Some(info) = analyzer.analyze(w)? else {
        return Ok(cert);
    };
    let k = info.depth;
    let gamma = evaluate(w, s.tree())?;
    let m = if k == 0 { 1 } else { gamma.order_to_depth(k)? };
    let e = Q_EXPONENT.lcm(&shape.level(s.start() + k)?.exponent());
    let me = checked_mul(m, e as u128)?;
    let chain = s.chain();
    let mut residual: BTreeMap<GWord, ResidualLetter> = BTreeMap::new();
    for (u, l) in &info.terminals {
        if m % l != 0 {
            return Err(Error::Verification(format!(
                "orbit size {l} does not divide the level-{k} orbit lcm {m}"
            )));
        }
        let exp = i64::try_from(me / l).map_err(|_| Error::domain("exponent exceeds i64"))?;
        let p = u.pow(exp, &shape)?;
        match p.letters() {
            [] => {}
            [Letter::B(b)] if b.is_pure_g() => {
                residual
                    .entry(b.g.clone())
                    .or_insert_with(|| ResidualLetter {
                        g: b.g.render(chain.names()),
                        orders: chain.orders_per_quotient(&b.g),
                    });
            }
            _ => {
                return Err(Error::Verification(format!(
                    "section {} of w^(m·e) is not a pure G-letter",
                    render_word(&p, &shape)
                )))
            }
        }
    }
    let residual_lcm = residual
        .values()
        .flat_map(|r| r.orders.iter())
        .fold(1u128, |acc, &o| acc.lcm(&(o as u128)));
    let claimed = checked_mul(me, residual_lcm)?;
    cert.complete = true;
    cert.shrink_depth = Some(k);
    cert.m = Some(m);
    cert.e = Some(e);
    cert.residual = residual.into_values().collect();
    cert.n_prime = Some(me);
    if chain.is_finite() {
        cert.order_multiple = Some(claimed);
        cert.order = Some(info.order);
        if claimed % info.order != 0 {
            return Err(Error::Verification(format!(
                "exact order {} does not divide m·e·lcm = {claimed}",
                info.order
            )));
        }
    }
    let truncation = gamma.order_to_depth(depth)?;
    cert.truncation_order = Some(truncation);
    let target = cert.order.unwrap_or(claimed);
    cert.verified = target.is_multiple_of(truncation);
    Ok(cert)
}

/// Recomputes a certificate from its word and parameters and compares the
/// serialized forms.
pub fn replay_order_certificate(cert: &OrderCertificate, s: &GammaScenario) -> Result<()> {
    if cert.scenario != s.id() {
        return Err(Error::Verification(
            "certificate belongs to another scenario".into(),
        ));
    }
    let w = parse_word(&cert.word, s.shape(), cert.level)?;
    let again = certify_finite_order(&w, s, cert.budget, cert.verification_depth)?;
    if serde_json::to_string(cert)? != serde_json::to_string(&again)? {
        return Err(Error::Verification(
            "order certificate does not match its replay".into(),
        ));
    }
    if !again.verified {
        return Err(Error::Verification(
            "truncation order does not divide the claimed order".into(),
        ));
    }
    Ok(())
}
