use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::altembed::{GroupChain, LevelData, PointClass};
use crate::error::{Error, Result};
use crate::permcore::DEFAULT_DEGREE_CAP;

/// Levels `start, .., start + horizon - 1` of the spherically homogeneous
/// tree, one `LevelData` per level. Levels are built on first use and
/// shared between levels that use the same quotient.
#[derive(Debug)]
pub struct TreeShape {
    chain: GroupChain,
    start: usize,
    horizon: usize,
    degree_cap: usize,
    cache: Vec<OnceLock<Arc<LevelData>>>,
}

impl TreeShape {
    pub fn new(chain: GroupChain, start: usize, horizon: usize) -> Result<Self> {
        Self::with_cap(chain, start, horizon, DEFAULT_DEGREE_CAP)
    }

    pub fn with_cap(
        chain: GroupChain,
        start: usize,
        horizon: usize,
        degree_cap: usize,
    ) -> Result<Self> {
        if start == 0 {
            return Err(Error::config("levels are numbered from 1"));
        }
        if horizon == 0 {
            return Err(Error::config("horizon must be at least 1"));
        }
        let cache = (0..chain.quotients().len())
            .map(|_| OnceLock::new())
            .collect();
        Ok(TreeShape {
            chain,
            start,
            horizon,
            degree_cap,
            cache,
        })
    }

    pub fn chain(&self) -> &GroupChain {
        &self.chain
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// One past the last level with data.
    pub fn end(&self) -> usize {
        self.start + self.horizon
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn contains_level(&self, level: usize) -> bool {
        (self.start..self.end()).contains(&level)
    }

    pub fn level(&self, level: usize) -> Result<Arc<LevelData>> {
        if !self.contains_level(level) {
            return Err(Error::config(format!(
                "level {level} is outside the horizon {}..={}",
                self.start,
                self.end() - 1
            )));
        }
        let q = self.chain.quotient_index_for_level(level);
        let cell = &self.cache[q - 1];
        if let Some(data) = cell.get() {
            return Ok(data.clone());
        }
        let built = Arc::new(LevelData::build(&self.chain, q, self.degree_cap)?);
        Ok(cell.get_or_init(|| built).clone())
    }

    /// Fails with a configuration error unless `depth` levels below `level`
    /// have data.
    pub fn check_depth(&self, level: usize, depth: usize) -> Result<()> {
        if level < self.start || level + depth > self.end() {
            return Err(Error::config(format!(
                "depth {depth} below level {level} exceeds the horizon (last level {})",
                self.end() - 1
            )));
        }
        Ok(())
    }
}

/// Spine parameters `(α_i, β_i)` for levels `start, ..`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinePair {
    pub start: usize,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl SpinePair {
    pub fn new(start: usize, alpha: Vec<u32>, beta: Vec<u32>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::config("alpha and beta have different lengths"));
        }
        Ok(SpinePair { start, alpha, beta })
    }

    /// Smallest point of `Y_i` and of `Y_i'` at every level of the shape.
    pub fn canonical(shape: &TreeShape) -> Result<Self> {
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        for level in shape.start()..shape.end() {
            let data = shape.level(level)?;
            alpha.push(data.y()[0]);
            beta.push(data.y_prime()[0]);
        }
        SpinePair::new(shape.start(), alpha, beta)
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn at(&self, level: usize) -> Result<(u32, u32)> {
        level
            .checked_sub(self.start)
            .and_then(|i| Some((*self.alpha.get(i)?, *self.beta.get(i)?)))
            .ok_or_else(|| Error::config(format!("spine has no entry for level {level}")))
    }

    /// `α_i, β_i ≠ o`, in range, and `α_i ≠ β_i` for every level of the shape.
    pub fn validate(&self, shape: &TreeShape) -> Result<()> {
        for level in shape.start()..shape.end() {
            let (a, b) = self.at(level)?;
            let data = shape.level(level)?;
            let size = data.x_size() as u32;
            if a == 0 || b == 0 || a >= size || b >= size {
                return Err(Error::precondition(format!(
                    "spine entries at level {level} must be non-origin points of X"
                )));
            }
            if a == b {
                return Err(Error::precondition(format!(
                    "alpha = beta at level {level}"
                )));
            }
        }
        Ok(())
    }

    /// Additionally `α_i ∈ Y_i` and `β_i ∈ Y_i'`.
    pub fn validate_gamma(&self, shape: &TreeShape) -> Result<()> {
        self.validate(shape)?;
        for level in shape.start()..shape.end() {
            let (a, b) = self.at(level)?;
            let data = shape.level(level)?;
            if data.class(a) != PointClass::Y || data.class(b) != PointClass::YPrime {
                return Err(Error::precondition(format!(
                    "level {level}: alpha must lie in Y and beta in Y'"
                )));
            }
        }
        Ok(())
    }
}
