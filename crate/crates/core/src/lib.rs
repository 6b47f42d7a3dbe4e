//! Rank polysemy distributions of explanatory dictionaries.
//!
//! Given the number of headwords `L` and the total number of meanings `M`
//! of a dictionary, the model assumes an underlying corpus with Zipfian
//! rank frequencies `F = K / i^γ`, maps every frequency to an expected
//! meaning count `m = ψ(F + 1) + C`, and distributes each word over
//! polysemy degrees with the geometric law `p_k = (m − 1)^(k−1) / m^k`.
//! `K` and `γ` are not fitted: they follow from `K / L^γ = 1` and
//! `Σ m = M`.
//!
//! Modules:
//! - [`numerics`]: digamma, regularized incomplete gamma, bracketed root finding
//! - [`model`]: totals, the normalization solve, the predicted spectrum
//! - [`gof`]: class merging and the chi-square test
//! - [`lstar`]: the one-parameter fallback with a modified word count `L*`
//! - [`simulate`]: Monte Carlo sampling of synthetic dictionaries
//! - [`cli`]: spectrum files, reports and the command implementations

pub mod cli;
pub mod error;
pub mod gof;
pub mod lstar;
pub mod model;
pub mod numerics;
pub mod simulate;

pub use error::{Error, Result};
pub use gof::{GofReport, MergeBasis, MergePolicy, MergedClasses};
pub use lstar::{LstarConfig, LstarFit, Objective};
pub use model::{DictionaryTotals, KMax, PolysemySpectrum, SpectrumKind, ZipfFit};
pub use simulate::{Sampling, SimConfig};
