//! Monte Carlo sampling of synthetic dictionaries from a fitted model.
//!
//! Random numbers come from xoshiro256** seeded through SplitMix64; replicate
//! `r` of a run with seed `s` uses the stream seeded with `s + r`
//! (wrapping), so each replicate can be regenerated on its own.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gof::{run_test_with_fit, MergePolicy};
use crate::model::{PolysemySpectrum, ZipfFit};

/// SplitMix64: `z = (s += 0x9e3779b97f4a7c15)`, then two xor-shift-multiply
/// rounds and a final xor-shift.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

/// xoshiro256** (Blackman and Vigna).
#[derive(Debug, Clone)]
pub struct Xoshiro256 {
    s: [u64; 4],
}

impl Xoshiro256 {
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        Self { s: [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()] }
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform on `(0, 1]` with 53 random bits.
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)` by multiply-high.
    pub fn next_below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }
}

/// How a synthetic dictionary is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Every rank `1..=L` contributes one word.
    #[default]
    PerRank,
    /// `L` words drawn independently from the predicted spectrum, i.e. a
    /// uniformly random rank per word.
    Multinomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub seed: u64,
    pub replicates: u32,
    pub fit: ZipfFit,
    pub sampling: Sampling,
}

impl SimConfig {
    pub fn new(seed: u64, replicates: u32, fit: ZipfFit) -> Self {
        Self { seed, replicates, fit, sampling: Sampling::PerRank }
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }
}

/// Degree drawn by inverse CDF: `1 + floor(ln u / ln r)` with `r = (m − 1)/m`.
fn draw_degree(u: f64, ln_ratio: f64) -> u32 {
    if ln_ratio == f64::NEG_INFINITY {
        return 1;
    }
    let k = 1.0 + (u.ln() / ln_ratio).floor();
    if k >= u32::MAX as f64 {
        u32::MAX
    } else {
        k as u32
    }
}

/// One empirical spectrum per replicate.
pub fn sample_spectrum(config: &SimConfig) -> Result<Vec<PolysemySpectrum>> {
    if config.replicates == 0 {
        return Err(Error::InvalidConfig("at least one replicate is required".into()));
    }
    let ln_ratios: Vec<f64> = config
        .fit
        .rank_meanings()
        .into_iter()
        .map(|m| ((m - 1.0) / m).ln())
        .collect();
    let words = ln_ratios.len() as u64;

    (0..config.replicates)
        .map(|r| {
            let mut rng = Xoshiro256::seed_from_u64(config.seed.wrapping_add(r as u64));
            let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
            for i in 0..words {
                let rank = match config.sampling {
                    Sampling::PerRank => i,
                    Sampling::Multinomial => rng.next_below(words),
                };
                let k = draw_degree(rng.next_open01(), ln_ratios[rank as usize]);
                *counts.entry(k).or_default() += 1;
            }
            PolysemySpectrum::empirical(counts)
        })
        .collect()
}

/// p-values of the parameter-free test of every replicate against the
/// generating model.
pub fn calibrate_pvalues(config: &SimConfig, policy: &MergePolicy) -> Result<Vec<f64>> {
    sample_spectrum(config)?
        .iter()
        .map(|s| run_test_with_fit(s, &config.fit, policy, 0).map(|r| r.p_value))
        .collect()
}

/// Per-degree mean and standard error of the mean across replicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeSummary {
    pub k: u32,
    pub mean: f64,
    pub std_error: f64,
}

pub fn replicate_summary(spectra: &[PolysemySpectrum]) -> Vec<DegreeSummary> {
    let max_k = spectra.iter().filter_map(|s| s.max_degree()).max().unwrap_or(0);
    let n = spectra.len() as f64;
    (1..=max_k)
        .map(|k| {
            let mean = spectra.iter().map(|s| s.count(k)).sum::<f64>() / n;
            let var = if spectra.len() > 1 {
                spectra.iter().map(|s| (s.count(k) - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            DegreeSummary { k, mean, std_error: (var / n).sqrt() }
        })
        .collect()
}

/// Sup-norm distance between the empirical CDF of `values` and the uniform
/// CDF on `[0, 1]`.
pub fn uniform_sup_distance(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &p)| ((i as f64 + 1.0) / n - p).max(p - i as f64 / n))
        .fold(0.0, f64::max)
}
