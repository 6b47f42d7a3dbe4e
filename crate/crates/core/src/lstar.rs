//! One-parameter fallback: refit with a modified word count `L*`.
//!
//! The monosemous class of the dictionary is expanded or compressed to `L*`
//! words in total. Every added or removed word carries exactly one meaning,
//! so `M* − L* = M − L`. The comparison then runs with one fitted parameter.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gof::{run_test_with_fit, GofReport, MergePolicy};
use crate::model::{solve_parameters, DictionaryTotals, PolysemySpectrum, SpectrumKind, DEFAULT_TOL};

/// Upper bound on coarse grid points.
pub const COARSE_POINTS: u64 = 64;

const GOLDEN_FRACTION: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    MaxPValue,
    MinChiSquare,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LstarConfig {
    pub search_lo: u64,
    pub search_hi: u64,
    pub policy: MergePolicy,
    pub objective: Objective,
}

impl LstarConfig {
    /// Checks the range against the polysemous word count of `observed`
    /// (after the policy's upper exclusion).
    pub fn validate(&self, observed: &PolysemySpectrum) -> Result<()> {
        self.policy.validate()?;
        if self.search_lo >= self.search_hi {
            return Err(Error::InvalidConfig(format!(
                "empty L* search range [{}, {}]",
                self.search_lo, self.search_hi
            )));
        }
        let polysemous = (observed.total_words() - observed.count(1)).round() as u64;
        if self.search_lo <= polysemous {
            return Err(Error::InvalidConfig(format!(
                "L* search must start above the {polysemous} polysemous words, got {}",
                self.search_lo
            )));
        }
        if self.search_lo < 2 {
            return Err(Error::InvalidConfig("L* search must start at 2 or more".into()));
        }
        Ok(())
    }
}

/// One evaluated candidate; `objective` is `None` when the comparison failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub l_star: u64,
    pub objective: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LstarFit {
    pub l_star: u64,
    pub modified_totals: DictionaryTotals,
    pub report: GofReport,
    /// Every evaluated candidate in ascending `L*` order.
    pub objective_trace: Vec<TracePoint>,
    /// The optimum sits on an end of the search range.
    pub at_search_boundary: bool,
}

/// Drops every word with more than `cutoff` meanings.
pub fn apply_exclusion(observed: &PolysemySpectrum, cutoff: u32) -> Result<PolysemySpectrum> {
    observed.truncate_above(cutoff)
}

/// `L = L*`, `M = M_obs + (L* − L_obs)`.
pub fn modified_totals(observed: DictionaryTotals, l_star: u64) -> Result<DictionaryTotals> {
    let delta = l_star as f64 - observed.words() as f64;
    DictionaryTotals::new(l_star, observed.meanings() + delta)
}

/// Searches `L*` over integers: a coarse grid of at most 64 points (plus the
/// observed word count when it lies in range), then golden-section
/// refinement between the grid neighbours of the best point. Ties go to the
/// smaller `L*`.
pub fn fit_lstar(observed: &PolysemySpectrum, config: &LstarConfig) -> Result<LstarFit> {
    if observed.kind() != SpectrumKind::Empirical {
        return Err(Error::InvalidConfig("the observed spectrum must be empirical".into()));
    }
    let base = match config.policy.exclude_above {
        Some(cutoff) => apply_exclusion(observed, cutoff)?,
        None => observed.clone(),
    };
    config.validate(&base)?;
    let observed_totals = base.totals()?;

    let mut search = Search { base: &base, observed_totals, config, evaluated: BTreeMap::new() };

    let (lo, hi) = (config.search_lo, config.search_hi);
    let points = COARSE_POINTS.min(hi - lo + 1);
    let mut grid: Vec<u64> = (0..points)
        .map(|j| lo + ((hi - lo) as f64 * j as f64 / (points - 1) as f64).round() as u64)
        .collect();
    if (lo..=hi).contains(&observed_totals.words()) {
        grid.push(observed_totals.words());
    }
    grid.sort_unstable();
    grid.dedup();
    for &c in &grid {
        search.score(c);
    }

    let best = search.best().ok_or(Error::FitFailure)?;
    let pos = grid.binary_search(&best).unwrap_or_else(|p| p);
    let mut a = grid[pos.saturating_sub(1)];
    let mut b = grid[(pos + 1).min(grid.len() - 1)];
    while b - a > 2 {
        let step = (((b - a) as f64) * GOLDEN_FRACTION).round().max(1.0) as u64;
        let x1 = a + step;
        let x2 = (b - step).max(x1 + 1);
        if search.score(x1) >= search.score(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    for c in a..=b {
        search.score(c);
    }

    let l_star = search.best().ok_or(Error::FitFailure)?;
    let (modified, report) = search.evaluate(l_star)?;
    let objective_trace = search
        .evaluated
        .iter()
        .map(|(&l_star, &(_, objective))| TracePoint { l_star, objective })
        .collect();
    Ok(LstarFit {
        l_star,
        modified_totals: modified,
        report,
        objective_trace,
        at_search_boundary: l_star == lo || l_star == hi,
    })
}

struct Search<'a> {
    base: &'a PolysemySpectrum,
    observed_totals: DictionaryTotals,
    config: &'a LstarConfig,
    /// candidate → (score, raw objective); higher score is better
    evaluated: BTreeMap<u64, (f64, Option<f64>)>,
}

impl Search<'_> {
    fn evaluate(&self, l_star: u64) -> Result<(DictionaryTotals, GofReport)> {
        let modified = modified_totals(self.observed_totals, l_star)?;
        let delta = l_star as f64 - self.observed_totals.words() as f64;
        let adjusted = self.base.with_count(1, self.base.count(1) + delta);
        let fit = solve_parameters(modified, DEFAULT_TOL)?;
        let report = run_test_with_fit(&adjusted, &fit, &self.config.policy, 1)?;
        Ok((modified, report))
    }

    fn score(&mut self, l_star: u64) -> f64 {
        if let Some(&(score, _)) = self.evaluated.get(&l_star) {
            return score;
        }
        let objective = self.evaluate(l_star).ok().map(|(_, r)| match self.config.objective {
            Objective::MaxPValue => r.p_value,
            Objective::MinChiSquare => r.chi_square,
        });
        let score = match (objective, self.config.objective) {
            (Some(v), Objective::MaxPValue) if v.is_finite() => v,
            (Some(v), Objective::MinChiSquare) if v.is_finite() => -v,
            _ => f64::NEG_INFINITY,
        };
        self.evaluated.insert(l_star, (score, objective.filter(|v| v.is_finite())));
        score
    }

    /// Smallest candidate with the highest finite score.
    fn best(&self) -> Option<u64> {
        let mut best: Option<(u64, f64)> = None;
        for (&c, &(score, _)) in &self.evaluated {
            if score == f64::NEG_INFINITY {
                continue;
            }
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((c, score));
            }
        }
        best.map(|(c, _)| c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gof::run_test;
    use crate::model::{predicted_spectrum, KMax, ZipfFit};

    fn planted(words: u64, gamma: f64) -> PolysemySpectrum {
        let fit = ZipfFit::from_exponent(words, gamma).unwrap();
        let spectrum = predicted_spectrum(&fit, KMax::Auto).unwrap();
        PolysemySpectrum::empirical(spectrum.counts().iter().map(|(&k, &n)| (k, n.round() as u64))).unwrap()
    }

    #[test]
    fn exclusion_arithmetic() {
        let s = PolysemySpectrum::empirical([(1, 100), (2, 50), (15, 3)]).unwrap();
        let t = apply_exclusion(&s, 14).unwrap();
        assert_eq!(t.counts().len(), 2);
        let (before, after) = (s.totals().unwrap(), t.totals().unwrap());
        assert_eq!(before.words() - after.words(), 3);
        assert_eq!(before.meanings() - after.meanings(), 45.0);
        assert_eq!(apply_exclusion(&s, 15).unwrap(), s);
    }

    #[test]
    fn modified_totals_convention() {
        let t = DictionaryTotals::new(120_000, 300_000.0).unwrap();
        let m = modified_totals(t, 157_000).unwrap();
        assert_eq!(m.words(), 157_000);
        assert_eq!(m.meanings(), 337_000.0);
        assert_eq!(modified_totals(t, 120_000).unwrap(), t);
        assert!(modified_totals(t, 1).is_err());
    }

    #[test]
    fn config_validation() {
        let s = PolysemySpectrum::empirical([(1, 100), (2, 50), (3, 20)]).unwrap();
        let config = |lo, hi| LstarConfig { search_lo: lo, search_hi: hi, policy: MergePolicy::default(), objective: Objective::MaxPValue };
        assert!(config(100, 300).validate(&s).is_ok());
        assert!(matches!(config(300, 300).validate(&s), Err(Error::InvalidConfig(_))));
        assert!(matches!(config(70, 300).validate(&s), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn planted_recovery() {
        let l0 = 20_000;
        let s = planted(l0, 1.0);
        let deflated = s.with_count(1, s.count(1) - 2000.0);
        for objective in [Objective::MaxPValue, Objective::MinChiSquare] {
            let config = LstarConfig { search_lo: 12_000, search_hi: 40_000, policy: MergePolicy::default(), objective };
            let fit = fit_lstar(&deflated, &config).unwrap();
            let err = (fit.l_star as f64 - l0 as f64).abs() / l0 as f64;
            assert!(err < 0.05, "{objective:?}: L* = {}", fit.l_star);
            assert!(!fit.at_search_boundary);
            assert_eq!(fit.modified_totals.words(), fit.l_star);
            assert_eq!(fit.report.fitted_param_count, 1);
            assert!(fit.objective_trace.windows(2).all(|w| w[0].l_star < w[1].l_star));
        }
    }

    #[test]
    fn truncated_range_hits_boundary() {
        let s = planted(20_000, 1.0);
        let deflated = s.with_count(1, s.count(1) - 2000.0);
        let config = LstarConfig { search_lo: 12_000, search_hi: 16_000, policy: MergePolicy::default(), objective: Objective::MaxPValue };
        let fit = fit_lstar(&deflated, &config).unwrap();
        assert_eq!(fit.l_star, 16_000);
        assert!(fit.at_search_boundary);
    }

    #[test]
    fn observed_count_is_a_candidate() {
        let s = planted(5_000, 1.0);
        let policy = MergePolicy::default();
        let config = LstarConfig { search_lo: 3_001, search_hi: 9_999, policy: policy.clone(), objective: Objective::MaxPValue };
        let fit = fit_lstar(&s, &config).unwrap();
        let words = s.totals().unwrap().words();
        let at_observed = fit.objective_trace.iter().find(|t| t.l_star == words).unwrap();
        assert!(fit.report.p_value >= at_observed.objective.unwrap() - 1e-9);
        assert!((fit.l_star as f64 - words as f64).abs() / words as f64 <= 0.05);
        let free = run_test(&s, &policy, 1).unwrap();
        assert_eq!(free.p_value, at_observed.objective.unwrap());
    }
}
