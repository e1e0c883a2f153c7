use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest argument accepted by `landau`.
pub const LANDAU_LIMIT: usize = 30;

fn primes_up_to(n: usize) -> Vec<usize> {
    (2..=n)
        .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect()
}

/// Landau's function: the largest order of an element of `Sym(n)`, i.e.
/// the maximal lcm of a partition of `n`. Computed as the maximal product
/// of prime powers for distinct primes with sum at most `n`.
pub fn landau(n: usize) -> Result<BigUint> {
    if n == 0 || n > LANDAU_LIMIT {
        return Err(Error::domain(format!(
            "landau(n) needs 1 <= n <= {LANDAU_LIMIT}, got {n}"
        )));
    }
    let mut best: Vec<BigUint> = vec![BigUint::one(); n + 1];
    for p in primes_up_to(n) {
        let prev = best.clone();
        for s in 0..=n {
            let mut pk = p;
            while pk <= s {
                let cand = &prev[s - pk] * BigUint::from(pk);
                if cand > best[s] {
                    best[s] = cand;
                }
                pk *= p;
            }
        }
    }
    Ok(best[n].clone())
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// One row of the Landau table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandauRow {
    pub n: usize,
    pub g: String,
    /// `n!/2^(n-1)` as an exact fraction `numerator/denominator` in lowest
    /// terms, rendered as text.
    pub bound: String,
    pub holds: bool,
}

/// Whether `g(n) ≤ n!/2^(n-1)`, compared exactly as `g(n)·2^(n-1) ≤ n!`.
pub fn landau_bound_check(n: usize) -> Result<bool> {
    let g = landau(n)?;
    Ok(g << (n - 1) <= factorial(n))
}

pub fn landau_row(n: usize) -> Result<LandauRow> {
    let bound =
        num_rational::BigRational::new(factorial(n).into(), (BigUint::one() << (n - 1)).into());
    Ok(LandauRow {
        n,
        g: landau(n)?.to_string(),
        bound: bound.to_string(),
        holds: landau_bound_check(n)?,
    })
}

#[cfg(test)]
mod tests {
    use num_integer::Integer;

    use super::*;

    fn brute(n: usize) -> u64 {
        fn rec(rest: usize, max_part: usize, acc: u64, best: &mut u64) {
            if rest == 0 {
                *best = (*best).max(acc);
                return;
            }
            for part in (1..=max_part.min(rest)).rev() {
                rec(rest - part, part, acc.lcm(&(part as u64)), best);
            }
        }
        let mut best = 1;
        rec(n, n, 1, &mut best);
        best
    }

    #[test]
    fn small_values() {
        assert_eq!(landau(1).unwrap(), BigUint::from(1u32));
        assert_eq!(landau(5).unwrap(), BigUint::from(6u32));
        assert_eq!(landau(7).unwrap(), BigUint::from(12u32));
        assert!(landau(0).is_err());
        assert!(landau(LANDAU_LIMIT + 1).is_err());
    }

    #[test]
    fn agrees_with_partition_brute_force() {
        for n in 1..=20 {
            assert_eq!(landau(n).unwrap(), BigUint::from(brute(n)), "n = {n}");
        }
    }

    #[test]
    fn elementary_estimate_fails_for_two_to_four() {
        // g(2)=2 > 1, g(3)=3 > 3/2, g(4)=4 > 3
        for n in 1..=12 {
            assert_eq!(
                landau_bound_check(n).unwrap(),
                !(2..=4).contains(&n),
                "n = {n}"
            );
        }
        assert_eq!(landau_row(3).unwrap().bound, "3/2");
    }
}
