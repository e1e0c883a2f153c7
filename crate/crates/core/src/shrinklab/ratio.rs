use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::altembed::LevelData;

/// The counting ratio `|Y||Y'| / (m(|Y|+|Y'|))` of a level and the closed
/// form lower bound `19·2^(2n+1) / (20(2n+3)(2n+2)(2n+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisRatio {
    pub n: usize,
    pub ratio: BigRational,
    pub bound: BigRational,
}

impl HypothesisRatio {
    pub fn new(level: &LevelData) -> Self {
        let y = level.y().len() as u64;
        let yp = level.y_prime().len() as u64;
        let m = level.max_order();
        let ratio = BigRational::new(BigInt::from(y * yp), BigInt::from(m * (y + yp)));
        let n = level.n() as u64;
        let bound = BigRational::new(
            BigInt::from(19u32) * (BigInt::from(1u32) << (2 * n + 1)),
            BigInt::from(20 * (2 * n + 3) * (2 * n + 2) * (2 * n + 1)),
        );
        HypothesisRatio {
            n: level.n(),
            ratio,
            bound,
        }
    }

    /// `ratio ≥ bound`.
    pub fn bound_holds(&self) -> bool {
        self.ratio >= self.bound
    }

    /// Whether `|Y||Y'| > k·m(|Y|+|Y'|)`, the counting hypothesis needed to
    /// avoid Z-sets of total `B`-length `k`.
    pub fn supports(&self, k: usize) -> bool {
        self.ratio > BigRational::from_integer(BigInt::from(k))
    }

    pub fn report(&self) -> RatioReport {
        RatioReport {
            n: self.n,
            ratio: self.ratio.to_string(),
            bound: self.bound.to_string(),
            bound_holds: self.bound_holds(),
            largest_supported_len_b: largest_supported(&self.ratio),
        }
    }
}

fn largest_supported(ratio: &BigRational) -> String {
    // largest k with ratio > k
    let floor = ratio.floor().to_integer();
    let k = if BigRational::from_integer(floor.clone()) == *ratio {
        floor - 1
    } else {
        floor
    };
    let k: BigUint = k.to_biguint().unwrap_or_default();
    k.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReport {
    pub n: usize,
    pub ratio: String,
    pub bound: String,
    pub bound_holds: bool,
    pub largest_supported_len_b: String,
}
