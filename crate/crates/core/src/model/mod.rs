//! The rank-frequency law, the expected-meanings map, the normalization
//! solve, the geometric polysemy law and the predicted spectrum.

mod solve;
mod spectrum;
mod totals;

pub use solve::{
    expected_meanings, meaning_sum, polysemy_pmf, rank_frequency, solve_parameters, ZipfFit,
    DEFAULT_TOL,
};
pub use spectrum::{predicted_spectrum, KMax, PolysemySpectrum, SpectrumKind, Truncation, TAIL_TOL};
pub use totals::DictionaryTotals;
