use std::collections::BTreeMap;

use serde::Serialize;

use super::solve::ZipfFit;
use super::totals::DictionaryTotals;
use crate::error::{Error, Result};

/// Relative tail tolerance of the automatic truncation rule.
pub const TAIL_TOL: f64 = 1e-6;

/// Tail meanings are held to a tenth of [`TAIL_TOL`] so that the meaning
/// total survives truncation together with the solver residual.
const TAIL_MEANINGS_TOL: f64 = 1e-7;

const K_LIMIT: u32 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Empirical,
    Theoretical,
}

/// Where a theoretical spectrum was cut off and how much mass lies beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub k_max: u32,
    pub tail_words: f64,
    pub tail_meanings: f64,
}

/// Number of words per polysemy degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolysemySpectrum {
    kind: SpectrumKind,
    counts: BTreeMap<u32, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncation: Option<Truncation>,
}

impl PolysemySpectrum {
    /// Empirical spectrum from integer counts. Degrees must be `>= 1`.
    pub fn empirical<I>(counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u64)>,
    {
        let mut map = BTreeMap::new();
        for (k, n) in counts {
            if k == 0 {
                return Err(Error::Domain("polysemy degree must be >= 1".into()));
            }
            if map.insert(k, n as f64).is_some() {
                return Err(Error::Domain(format!("duplicate degree {k}")));
            }
        }
        Ok(Self { kind: SpectrumKind::Empirical, counts: map, truncation: None })
    }

    /// Theoretical spectrum with real-valued, non-negative counts.
    pub fn theoretical(counts: BTreeMap<u32, f64>, truncation: Option<Truncation>) -> Result<Self> {
        if counts.contains_key(&0) {
            return Err(Error::Domain("polysemy degree must be >= 1".into()));
        }
        if let Some((k, n)) = counts.iter().find(|(_, n)| !(**n >= 0.0 && n.is_finite())) {
            return Err(Error::Domain(format!("count at degree {k} must be finite and >= 0, got {n}")));
        }
        Ok(Self { kind: SpectrumKind::Theoretical, counts, truncation })
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn counts(&self) -> &BTreeMap<u32, f64> {
        &self.counts
    }

    /// Count at degree `k`, zero when absent.
    pub fn count(&self, k: u32) -> f64 {
        self.counts.get(&k).copied().unwrap_or(0.0)
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.counts.keys().next_back().copied()
    }

    pub fn total_words(&self) -> f64 {
        self.counts.values().sum()
    }

    pub fn total_meanings(&self) -> f64 {
        self.counts.iter().map(|(&k, &n)| k as f64 * n).sum()
    }

    /// `(L, M)` of an empirical spectrum.
    pub fn totals(&self) -> Result<DictionaryTotals> {
        DictionaryTotals::new(self.total_words().round() as u64, self.total_meanings())
    }

    /// Keeps only degrees `k <= cutoff`.
    pub fn truncate_above(&self, cutoff: u32) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::Domain("exclusion cutoff must be >= 1".into()));
        }
        let counts: BTreeMap<u32, f64> =
            self.counts.range(..=cutoff).map(|(&k, &n)| (k, n)).collect();
        if counts.values().all(|&n| n == 0.0) {
            return Err(Error::EmptySpectrum);
        }
        Ok(Self { kind: self.kind, counts, truncation: self.truncation })
    }

    /// Copy with the count at degree `k` replaced.
    pub(crate) fn with_count(&self, k: u32, n: f64) -> Self {
        let mut out = self.clone();
        out.counts.insert(k, n);
        out
    }
}

/// How far a predicted spectrum extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KMax {
    /// Extend until the truncated tail holds less than `1e-6 · L` words
    /// (and less than `1e-7 · M` meanings).
    Auto,
    /// Exactly degrees `1..=k`.
    Fixed(u32),
    /// The automatic rule, but never stopping below `k`.
    AutoAtLeast(u32),
}

/// `N_k = Σ_{i=1..L} p_k(m_i)` for `k = 1..k_max`, summed in ascending rank order.
///
/// The tail mass beyond the cut is computed in closed form: a geometric law
/// with ratio `r = (m − 1)/m` leaves `r^k` words and `r^k (k + m)` meanings
/// above degree `k`.
pub fn predicted_spectrum(fit: &ZipfFit, k_max: KMax) -> Result<PolysemySpectrum> {
    let (min_k, max_k) = match k_max {
        KMax::Auto => (1, K_LIMIT),
        KMax::Fixed(k) | KMax::AutoAtLeast(k) if k == 0 => {
            return Err(Error::Domain("k_max must be >= 1".into()));
        }
        KMax::Fixed(k) => (k, k),
        KMax::AutoAtLeast(k) => (k, K_LIMIT.max(k)),
    };
    let totals = fit.totals();
    let word_tol = TAIL_TOL * totals.words() as f64;
    let meaning_tol = TAIL_MEANINGS_TOL * totals.meanings();

    let meanings = fit.rank_meanings();
    let ratios: Vec<f64> = meanings.iter().map(|m| (m - 1.0) / m).collect();
    // r_i^(k−1) for the current degree
    let mut powers = vec![1.0; meanings.len()];

    let mut counts = BTreeMap::new();
    let mut k = 1u32;
    loop {
        let mut n_k = 0.0;
        let mut tail_words = 0.0;
        let mut tail_meanings = 0.0;
        for ((pw, &m), &r) in powers.iter_mut().zip(&meanings).zip(&ratios) {
            n_k += *pw / m;
            *pw *= r;
            tail_words += *pw;
            tail_meanings += *pw * (k as f64 + m);
        }
        counts.insert(k, n_k);

        let converged = tail_words < word_tol && tail_meanings < meaning_tol;
        if k >= max_k || (k >= min_k && converged && !matches!(k_max, KMax::Fixed(_))) {
            let truncation = Truncation { k_max: k, tail_words, tail_meanings };
            if !converged && !matches!(k_max, KMax::Fixed(_)) {
                return Err(Error::Convergence(k as usize));
            }
            return PolysemySpectrum::theoretical(counts, Some(truncation));
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::solve::{polysemy_pmf, solve_parameters, DEFAULT_TOL};

    #[test]
    fn totals_from_counts() {
        let s = PolysemySpectrum::empirical([(1, 100), (2, 40), (3, 10)]).unwrap();
        assert_eq!(s.total_words(), 150.0);
        assert_eq!(s.total_meanings(), 210.0);
        let t = s.totals().unwrap();
        assert_eq!(t.words(), 150);
        assert_eq!(t.meanings(), 210.0);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(PolysemySpectrum::empirical([(0, 1)]).is_err());
        assert!(PolysemySpectrum::empirical([(1, 1), (1, 2)]).is_err());
        assert!(PolysemySpectrum::theoretical(BTreeMap::from([(1, -1.0)]), None).is_err());
        assert!(PolysemySpectrum::theoretical(BTreeMap::from([(1, f64::NAN)]), None).is_err());
    }

    #[test]
    fn truncate_above() {
        let s = PolysemySpectrum::empirical([(1, 100), (2, 50), (15, 3)]).unwrap();
        let t = s.truncate_above(14).unwrap();
        assert_eq!(t.max_degree(), Some(2));
        assert_eq!(s.total_words() - t.total_words(), 3.0);
        assert_eq!(s.total_meanings() - t.total_meanings(), 45.0);
        assert_eq!(s.truncate_above(100).unwrap(), s);
        assert!(matches!(s.truncate_above(0), Err(Error::Domain(_))));
        let only_high = PolysemySpectrum::empirical([(20, 3)]).unwrap();
        assert!(matches!(only_high.truncate_above(14), Err(Error::EmptySpectrum)));
    }

    #[test]
    fn auto_truncation_conserves_totals() {
        let fit = ZipfFit::from_exponent(3000, 1.1).unwrap();
        let s = predicted_spectrum(&fit, KMax::Auto).unwrap();
        let t = fit.totals();
        let tr = s.truncation().unwrap();
        assert!(tr.tail_words < TAIL_TOL * t.words() as f64);
        assert_eq!(s.max_degree(), Some(tr.k_max));
        assert!((s.total_words() - t.words() as f64).abs() <= TAIL_TOL * t.words() as f64);
        assert!((s.total_meanings() - t.meanings()).abs() <= TAIL_TOL * t.meanings());
    }

    #[test]
    fn fixed_and_at_least() {
        let fit = ZipfFit::from_exponent(200, 1.0).unwrap();
        let auto = predicted_spectrum(&fit, KMax::Auto).unwrap();
        let auto_k = auto.max_degree().unwrap();
        let fixed = predicted_spectrum(&fit, KMax::Fixed(5)).unwrap();
        assert_eq!(fixed.max_degree(), Some(5));
        assert!(fixed.truncation().unwrap().tail_words > 0.0);
        let long = predicted_spectrum(&fit, KMax::AutoAtLeast(auto_k + 7)).unwrap();
        assert_eq!(long.max_degree(), Some(auto_k + 7));
        let short = predicted_spectrum(&fit, KMax::AutoAtLeast(2)).unwrap();
        assert_eq!(short, auto);
        for k in 1..=5 {
            assert_eq!(fixed.count(k), auto.count(k));
        }
        assert!(predicted_spectrum(&fit, KMax::Fixed(0)).is_err());
    }

    #[test]
    fn degenerate_fit_is_all_monosemous() {
        let fit = ZipfFit::from_exponent(50, 0.0).unwrap();
        let s = predicted_spectrum(&fit, KMax::Auto).unwrap();
        assert_eq!(s.max_degree(), Some(1));
        assert!((s.count(1) - 50.0).abs() < 1e-12);
    }

    #[test]
    fn strictly_decreasing_against_brute_force() {
        let target = crate::model::meaning_sum(100, 1.0);
        let fit = solve_parameters(DictionaryTotals::new(100, target).unwrap(), DEFAULT_TOL).unwrap();
        let s = predicted_spectrum(&fit, KMax::Fixed(25)).unwrap();
        let m = fit.rank_meanings();
        let mut prev = f64::INFINITY;
        for k in 1..=25u32 {
            let brute: f64 = m.iter().map(|&mi| polysemy_pmf(mi, k).unwrap()).sum();
            assert!((brute - s.count(k)).abs() <= 1e-12 * brute);
            assert!(s.count(k) < prev);
            prev = s.count(k);
        }
    }
}
