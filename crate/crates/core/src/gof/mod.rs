//! Chi-square goodness of fit between an empirical spectrum and the model.
//!
//! Degrees are pooled into comparison classes of at least
//! [`DEFAULT_MIN_CLASS_SIZE`] words (tail first), optionally with forced
//! joins and exclusions; the statistic is referred to a chi-square law with
//! `classes − 1 − fitted_param_count` degrees of freedom.

mod merge;
mod policy;

use serde::Serialize;

pub use merge::{merge_classes, ComparisonClass, MergedClasses};
pub use policy::{MergeBasis, MergePolicy, DEFAULT_MIN_CLASS_SIZE};

use crate::error::{Error, Result};
use crate::model::{predicted_spectrum, solve_parameters, KMax, PolysemySpectrum, SpectrumKind, ZipfFit, DEFAULT_TOL};
use crate::numerics::regularized_gamma_q;

/// Outcome of one chi-square comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub chi_square: f64,
    pub dof: u32,
    pub p_value: f64,
    pub fitted_param_count: u32,
    pub classes: MergedClasses,
    pub policy: MergePolicy,
    pub fit: ZipfFit,
    pub observed: PolysemySpectrum,
    pub expected: PolysemySpectrum,
}

/// `Σ (observed − expected)² / expected` over the classes.
pub fn chi_square_statistic(classes: &MergedClasses) -> Result<f64> {
    let mut stat = 0.0;
    for class in classes.classes() {
        if !(class.expected > 0.0) {
            return Err(Error::DegenerateClass { degrees: class.degrees.clone() });
        }
        let diff = class.observed - class.expected;
        stat += diff * diff / class.expected;
    }
    Ok(stat)
}

/// Upper-tail chi-square probability `Q(dof/2, stat/2)`.
pub fn p_value(stat: f64, dof: u32) -> Result<f64> {
    if stat.is_nan() || stat < 0.0 {
        return Err(Error::Domain(format!("chi-square statistic must be >= 0, got {stat}")));
    }
    if dof == 0 {
        return Err(Error::Domain("degrees of freedom must be >= 1".into()));
    }
    regularized_gamma_q(dof as f64 / 2.0, stat / 2.0)
}

/// Parameter-free test: derives `(L, M)` from the observed spectrum, solves
/// the model and compares.
///
/// `policy.exclude_above` removes words from the dictionary before the
/// totals are taken; `policy.exclude_degrees` only drops classes from the
/// comparison.
pub fn run_test(observed: &PolysemySpectrum, policy: &MergePolicy, fitted_param_count: u32) -> Result<GofReport> {
    policy.validate()?;
    let retained = match policy.exclude_above {
        Some(cutoff) => observed.truncate_above(cutoff)?,
        None => observed.clone(),
    };
    let fit = solve_parameters(retained.totals()?, DEFAULT_TOL)?;
    run_test_with_fit(&retained, &fit, policy, fitted_param_count)
}

/// Compares `observed` against the spectrum predicted by an existing fit.
pub fn run_test_with_fit(
    observed: &PolysemySpectrum,
    fit: &ZipfFit,
    policy: &MergePolicy,
    fitted_param_count: u32,
) -> Result<GofReport> {
    if observed.kind() != SpectrumKind::Empirical {
        return Err(Error::InvalidConfig("the observed spectrum must be empirical".into()));
    }
    let observed_max = observed.max_degree().ok_or(Error::EmptySpectrum)?;
    let expected = predicted_spectrum(fit, KMax::AutoAtLeast(observed_max))?;
    let classes = merge_classes(observed, &expected, policy)?;
    let dof = classes.len() as i64 - 1 - fitted_param_count as i64;
    if dof < 1 {
        return Err(Error::InsufficientClasses { classes: classes.len(), dof });
    }
    let chi_square = chi_square_statistic(&classes)?;
    let p = p_value(chi_square, dof as u32)?;
    Ok(GofReport {
        chi_square,
        dof: dof as u32,
        p_value: p,
        fitted_param_count,
        classes,
        policy: policy.clone(),
        fit: *fit,
        observed: observed.clone(),
        expected,
    })
}
