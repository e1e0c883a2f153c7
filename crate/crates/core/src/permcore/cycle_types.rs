//! Cycle-type enumeration for the symmetric and alternating groups.

use num_integer::Integer;

/// All partitions of `n` as non-increasing part lists.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// A cycle type is even iff the number of even-length cycles is even.
pub fn is_even_type(parts: &[usize]) -> bool {
    parts.iter().filter(|&&p| p % 2 == 0).count() % 2 == 0
}

fn lcm_of(parts: &[usize]) -> u64 {
    parts.iter().fold(1u64, |acc, &p| acc.lcm(&(p as u64)))
}

pub fn max_order_alternating(n: usize) -> u64 {
    partitions(n)
        .iter()
        .filter(|p| is_even_type(p))
        .map(|p| lcm_of(p))
        .max()
        .unwrap_or(1)
}

pub fn exponent_alternating(n: usize) -> u64 {
    partitions(n)
        .iter()
        .filter(|p| is_even_type(p))
        .fold(1u64, |acc, p| acc.lcm(&lcm_of(p)))
}

pub fn max_order_symmetric(n: usize) -> u64 {
    partitions(n).iter().map(|p| lcm_of(p)).max().unwrap_or(1)
}

pub fn exponent_symmetric(n: usize) -> u64 {
    (1..=n as u64).fold(1u64, |acc, k| acc.lcm(&k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn alternating_orders() {
        assert_eq!(max_order_alternating(5), 5);
        assert_eq!(max_order_alternating(7), 7);
        assert_eq!(max_order_alternating(9), 15);
        assert_eq!(exponent_alternating(5), 30);
        assert_eq!(exponent_alternating(7), 420);
        assert_eq!(max_order_symmetric(7), 12);
    }
}
