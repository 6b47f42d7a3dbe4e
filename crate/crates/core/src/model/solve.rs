use serde::Serialize;

use super::totals::DictionaryTotals;
use crate::error::{Error, Result};
use crate::numerics::{find_root, psi, Bracket, EULER_MASCHERONI};

/// Default relative tolerance of the normalization solve: `|Σ m − M| <= tol · M`.
pub const DEFAULT_TOL: f64 = 1e-10;

const GAMMA_START_LO: f64 = 1e-6;
const GAMMA_START_HI: f64 = 4.0;
const GAMMA_CAP: f64 = 64.0;

/// Solved parameters of the rank-frequency law `F = K / i^γ` with `K = L^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZipfFit {
    gamma: f64,
    k_const: f64,
    totals: DictionaryTotals,
    residual: f64,
    iterations: usize,
}

impl ZipfFit {
    /// Builds the fit for a given exponent, deriving `M` by forward evaluation
    /// of the meaning sum. `gamma = 0` gives the degenerate dictionary where
    /// every word has exactly one meaning.
    pub fn from_exponent(words: u64, gamma: f64) -> Result<Self> {
        if words < 2 {
            return Err(Error::InvalidTotals(format!("word count must be at least 2, got {words}")));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("exponent must be finite and non-negative, got {gamma}")));
        }
        let meanings = meaning_sum(words, gamma);
        if !meanings.is_finite() {
            return Err(Error::Domain(format!("meaning sum overflows at exponent {gamma}")));
        }
        Ok(Self {
            gamma,
            k_const: (words as f64).powf(gamma),
            totals: DictionaryTotals::forward(words, meanings),
            residual: 0.0,
            iterations: 0,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn k_const(&self) -> f64 {
        self.k_const
    }

    pub fn totals(&self) -> DictionaryTotals {
        self.totals
    }

    /// `|Σ m_F − M|` at the solution.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Expected meaning count for every rank, ascending rank order.
    ///
    /// Frequencies are at least 1, so the values are clamped at 1 against
    /// rounding in the last place.
    pub fn rank_meanings(&self) -> Vec<f64> {
        let l = self.totals.words();
        (1..=l)
            .map(|i| {
                let f = self.k_const / (i as f64).powf(self.gamma);
                (psi(f + 1.0) + EULER_MASCHERONI).max(1.0)
            })
            .collect()
    }
}

/// `F = K / i^γ` for rank `1 <= i <= L`.
pub fn rank_frequency(fit: &ZipfFit, rank: u64) -> Result<f64> {
    let l = fit.totals.words();
    if rank == 0 || rank > l {
        return Err(Error::Domain(format!("rank must lie in [1, {l}], got {rank}")));
    }
    Ok(fit.k_const / (rank as f64).powf(fit.gamma))
}

/// Expected number of dictionary meanings `m = ψ(F + 1) + C` of a word with
/// corpus frequency `F`.
pub fn expected_meanings(frequency: f64) -> Result<f64> {
    if frequency.is_nan() || frequency < 0.0 {
        return Err(Error::Domain(format!("frequency must be non-negative, got {frequency}")));
    }
    Ok(psi(frequency + 1.0) + EULER_MASCHERONI)
}

/// Probability that a word with expected meaning count `m` has exactly `k`
/// meanings: `(m − 1)^(k−1) / m^k`.
pub fn polysemy_pmf(m: f64, k: u32) -> Result<f64> {
    if m.is_nan() || m < 1.0 {
        return Err(Error::Domain(format!("expected meaning count must be >= 1, got {m}")));
    }
    if k == 0 {
        return Err(Error::Domain("polysemy degree must be >= 1".into()));
    }
    let ratio = (m - 1.0) / m;
    Ok(ratio.powf((k - 1) as f64) / m)
}

/// `Σ_{i=1..L} [ψ((L/i)^γ + 1) + C]`, summed in ascending rank order.
pub fn meaning_sum(words: u64, gamma: f64) -> f64 {
    let l = words as f64;
    let mut sum = 0.0;
    for i in 1..=words {
        let f = (l / i as f64).powf(gamma);
        sum += psi(f + 1.0) + EULER_MASCHERONI;
    }
    sum
}

/// Solves the normalization system for `γ` and `K`.
///
/// With `K = L^γ` substituted the system reduces to the scalar equation
/// `g(γ) = Σ_i [ψ((L/i)^γ + 1) + C] − M = 0`. `g` increases strictly in `γ`
/// and `g(0) = L − M < 0`, so the root is unique. The bracket starts at
/// `[1e-6, 4]` and its upper end doubles until `g` changes sign, up to 64.
pub fn solve_parameters(totals: DictionaryTotals, tol: f64) -> Result<ZipfFit> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!("solver tolerance must be positive, got {tol}")));
    }
    let words = totals.words();
    let target = totals.meanings();
    if target <= words as f64 {
        return Err(Error::Infeasible { words, meanings: target });
    }
    let residual = |gamma: f64| meaning_sum(words, gamma) - target;

    // for M barely above L the root lies below the default lower end; g(0) = L − M
    let lo = if residual(GAMMA_START_LO) < 0.0 { GAMMA_START_LO } else { 0.0 };
    let mut hi = GAMMA_START_HI;
    while residual(hi) < 0.0 {
        hi *= 2.0;
        if hi > GAMMA_CAP {
            return Err(Error::NoSolution(GAMMA_CAP));
        }
    }

    let root = find_root(residual, Bracket::new(lo, hi)?, tol * target)?;
    let gamma = root.x;
    let abs_residual = root.fx.abs();
    if !(gamma > 0.0) || abs_residual > tol * target {
        return Err(Error::Convergence(root.iterations));
    }
    Ok(ZipfFit {
        gamma,
        k_const: (words as f64).powf(gamma),
        totals,
        residual: abs_residual,
        iterations: root.iterations,
    })
}
