use serde::Serialize;

use crate::error::{Error, Result};

/// The two observables of a dictionary: headword count `L` and meaning count `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DictionaryTotals {
    words: u64,
    meanings: f64,
}

impl DictionaryTotals {
    /// Requires `L >= 2` and `M > L`.
    pub fn new(words: u64, meanings: f64) -> Result<Self> {
        if words < 2 {
            return Err(Error::InvalidTotals(format!("word count must be at least 2, got {words}")));
        }
        if !meanings.is_finite() {
            return Err(Error::InvalidTotals(format!("meaning count must be finite, got {meanings}")));
        }
        if meanings <= words as f64 {
            return Err(Error::Infeasible { words, meanings });
        }
        Ok(Self { words, meanings })
    }

    /// Totals produced by forward evaluation of the model, where `M = L`
    /// is the limit of a zero exponent.
    pub(crate) fn forward(words: u64, meanings: f64) -> Self {
        Self { words, meanings }
    }

    pub fn words(&self) -> u64 {
        self.words
    }

    pub fn meanings(&self) -> f64 {
        self.meanings
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(DictionaryTotals::new(1000, 2500.0).is_ok());
        assert!(matches!(DictionaryTotals::new(1, 5.0), Err(Error::InvalidTotals(_))));
        assert!(matches!(DictionaryTotals::new(100, 100.0), Err(Error::Infeasible { .. })));
        assert!(matches!(DictionaryTotals::new(100, 90.0), Err(Error::Infeasible { .. })));
        assert!(matches!(DictionaryTotals::new(100, f64::NAN), Err(Error::InvalidTotals(_))));
    }
}
