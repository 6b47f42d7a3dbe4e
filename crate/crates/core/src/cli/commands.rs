use std::path::Path;

use crate::error::{Error, Result};
use crate::gof::{run_test, MergePolicy};
use crate::lstar::{apply_exclusion, fit_lstar, LstarConfig, Objective};
use crate::model::{predicted_spectrum, solve_parameters, DictionaryTotals, KMax, PolysemySpectrum, ZipfFit, DEFAULT_TOL};
use crate::simulate::{calibrate_pvalues, replicate_summary, sample_spectrum, uniform_sup_distance, Sampling, SimConfig};

use super::report::{Calibration, LstarReport, PredictReport, Report, SearchSummary, SimulateReport};
use super::spectrum_file::parse_spectrum;

/// Solve from `(L, M)` and predict the spectrum.
pub fn cmd_predict(words: u64, meanings: f64, k_max: Option<u32>, tol: f64) -> Result<Report> {
    let fit = solve_parameters(DictionaryTotals::new(words, meanings)?, tol)?;
    let k_max = k_max.map_or(KMax::Auto, KMax::Fixed);
    let spectrum = predicted_spectrum(&fit, k_max)?;
    Ok(Report::Predict(PredictReport::new(&fit, &spectrum)))
}

/// Parameter-free chi-square test of a spectrum file.
pub fn cmd_test(path: &Path, policy: &MergePolicy, fitted_param_count: u32) -> Result<Report> {
    let observed = parse_spectrum(path)?;
    let report = run_test(&observed, policy, fitted_param_count)?;
    Ok(Report::Test((&report).into()))
}

/// Default `L*` range: from one above the polysemous word count to twice
/// the observed word count.
pub fn default_search_range(observed: &PolysemySpectrum) -> (u64, u64) {
    let words = observed.total_words().round() as u64;
    let polysemous = words - observed.count(1).round() as u64;
    let lo = (polysemous + 1).max(2);
    (lo, (2 * words).max(lo + 1))
}

/// `L*` fit of a spectrum file. `search` defaults to [`default_search_range`].
pub fn cmd_fit_lstar(
    path: &Path,
    policy: &MergePolicy,
    search: (Option<u64>, Option<u64>),
    objective: Objective,
) -> Result<Report> {
    policy.validate()?;
    let observed = parse_spectrum(path)?;
    let base = match policy.exclude_above {
        Some(cutoff) => apply_exclusion(&observed, cutoff)?,
        None => observed,
    };
    let (default_lo, default_hi) = default_search_range(&base);
    let config = LstarConfig {
        search_lo: search.0.unwrap_or(default_lo),
        search_hi: search.1.unwrap_or(default_hi),
        policy: policy.clone(),
        objective,
    };
    let fit = fit_lstar(&base, &config)?;
    let summary = SearchSummary { lo: config.search_lo, hi: config.search_hi, objective };
    Ok(Report::FitLstar(LstarReport::new(base.totals()?, summary, &fit)))
}

/// The generating model of a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimulateModel {
    /// Solve for the exponent from the meanings total.
    Meanings(f64),
    /// Use this exponent directly.
    Gamma(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateArgs {
    pub words: u64,
    pub model: SimulateModel,
    pub seed: u64,
    pub replicates: u32,
    pub sampling: Sampling,
    /// Run the chi-square calibration with this policy.
    pub calibrate: Option<MergePolicy>,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Report> {
    if args.replicates == 0 {
        return Err(Error::InvalidConfig("--reps must be at least 1".into()));
    }
    let fit = match args.model {
        SimulateModel::Meanings(m) => solve_parameters(DictionaryTotals::new(args.words, m)?, DEFAULT_TOL)?,
        SimulateModel::Gamma(g) => ZipfFit::from_exponent(args.words, g)?,
    };
    let config = SimConfig::new(args.seed, args.replicates, fit).with_sampling(args.sampling);
    let spectra = sample_spectrum(&config)?;
    let predicted = predicted_spectrum(&fit, KMax::Auto)?;
    let degrees = SimulateReport::degrees(&replicate_summary(&spectra), &predicted);
    let calibration = match &args.calibrate {
        Some(policy) => {
            let p_values = calibrate_pvalues(&config, policy)?;
            Some(Calibration {
                policy: policy.clone(),
                uniform_sup_distance: uniform_sup_distance(&p_values),
                p_values,
            })
        }
        None => None,
    };
    Ok(Report::Simulate(SimulateReport {
        totals: fit.totals().into(),
        fit: (&fit).into(),
        seed: args.seed,
        replicates: args.replicates,
        sampling: args.sampling,
        degrees,
        calibration,
    }))
}
