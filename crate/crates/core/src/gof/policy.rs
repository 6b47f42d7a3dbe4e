use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum class size used when none is given.
pub const DEFAULT_MIN_CLASS_SIZE: f64 = 10.0;

/// Which count is compared against the minimum class size while merging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MergeBasis {
    #[default]
    Expected,
    Observed,
}

/// Class construction rules of the chi-square comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergePolicy {
    pub min_class_size: f64,
    pub merge_basis: MergeBasis,
    /// Degree sets that always share a class.
    pub explicit_joins: Vec<BTreeSet<u32>>,
    /// Degrees left out of the comparison.
    pub exclude_degrees: BTreeSet<u32>,
    /// Words with more meanings than this are removed from the dictionary.
    pub exclude_above: Option<u32>,
}

impl Default for MergePolicy {
    fn default() -> Self {
        Self {
            min_class_size: DEFAULT_MIN_CLASS_SIZE,
            merge_basis: MergeBasis::Expected,
            explicit_joins: Vec::new(),
            exclude_degrees: BTreeSet::new(),
            exclude_above: None,
        }
    }
}

impl MergePolicy {
    pub fn with_min_class_size(mut self, size: f64) -> Self {
        self.min_class_size = size;
        self
    }

    pub fn with_basis(mut self, basis: MergeBasis) -> Self {
        self.merge_basis = basis;
        self
    }

    pub fn with_join<I: IntoIterator<Item = u32>>(mut self, degrees: I) -> Self {
        self.explicit_joins.push(degrees.into_iter().collect());
        self
    }

    pub fn excluding<I: IntoIterator<Item = u32>>(mut self, degrees: I) -> Self {
        self.exclude_degrees.extend(degrees);
        self
    }

    pub fn with_exclude_above(mut self, cutoff: u32) -> Self {
        self.exclude_above = Some(cutoff);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min_class_size > 0.0 && self.min_class_size.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "minimum class size must be positive, got {}",
                self.min_class_size
            )));
        }
        if self.exclude_above == Some(0) {
            return Err(Error::InvalidConfig("exclusion cutoff must be >= 1".into()));
        }
        if self.exclude_degrees.contains(&0) {
            return Err(Error::InvalidConfig("excluded degrees must be >= 1".into()));
        }
        let mut seen = BTreeSet::new();
        for join in &self.explicit_joins {
            if join.is_empty() {
                return Err(Error::InvalidConfig("empty class join".into()));
            }
            for &k in join {
                if k == 0 {
                    return Err(Error::InvalidConfig("joined degrees must be >= 1".into()));
                }
                if !seen.insert(k) {
                    return Err(Error::InvalidConfig(format!("degree {k} appears in two joins")));
                }
            }
        }
        Ok(())
    }

    /// Whether degree `k` takes part in the comparison.
    pub fn retains(&self, k: u32) -> bool {
        !self.exclude_degrees.contains(&k) && self.exclude_above.map_or(true, |c| k <= c)
    }
}
