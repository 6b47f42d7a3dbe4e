use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gof::{ComparisonClass, GofReport, MergePolicy};
use crate::lstar::{LstarFit, Objective, TracePoint};
use crate::model::{DictionaryTotals, PolysemySpectrum, ZipfFit};
use crate::simulate::{DegreeSummary, Sampling};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalsSummary {
    pub words: u64,
    pub meanings: f64,
}

impl From<DictionaryTotals> for TotalsSummary {
    fn from(t: DictionaryTotals) -> Self {
        Self { words: t.words(), meanings: t.meanings() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitSummary {
    pub gamma: f64,
    pub k_const: f64,
    pub residual: f64,
    pub iterations: usize,
}

impl From<&ZipfFit> for FitSummary {
    fn from(f: &ZipfFit) -> Self {
        Self { gamma: f.gamma(), k_const: f.k_const(), residual: f.residual(), iterations: f.iterations() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeRow {
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<f64>,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictReport {
    pub totals: TotalsSummary,
    pub fit: FitSummary,
    pub k_max: u32,
    pub tail_words: f64,
    pub tail_meanings: f64,
    pub spectrum: Vec<DegreeRow>,
}

impl PredictReport {
    pub fn new(fit: &ZipfFit, spectrum: &PolysemySpectrum) -> Self {
        let truncation = spectrum.truncation();
        Self {
            totals: fit.totals().into(),
            fit: fit.into(),
            k_max: spectrum.max_degree().unwrap_or(0),
            tail_words: truncation.map_or(0.0, |t| t.tail_words),
            tail_meanings: truncation.map_or(0.0, |t| t.tail_meanings),
            spectrum: spectrum
                .counts()
                .iter()
                .map(|(&k, &n)| DegreeRow { k, observed: None, expected: n })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub totals: TotalsSummary,
    pub fit: FitSummary,
    pub policy: MergePolicy,
    pub fitted_param_count: u32,
    pub degrees: Vec<DegreeRow>,
    pub classes: Vec<ComparisonClass>,
    pub chi_square: f64,
    pub dof: u32,
    pub p_value: f64,
}

impl From<&GofReport> for TestReport {
    fn from(r: &GofReport) -> Self {
        let max_k = r.observed.max_degree().unwrap_or(0).max(r.expected.max_degree().unwrap_or(0));
        Self {
            totals: r.fit.totals().into(),
            fit: (&r.fit).into(),
            policy: r.policy.clone(),
            fitted_param_count: r.fitted_param_count,
            degrees: (1..=max_k)
                .map(|k| DegreeRow { k, observed: Some(r.observed.count(k)), expected: r.expected.count(k) })
                .collect(),
            classes: r.classes.classes().to_vec(),
            chi_square: r.chi_square,
            dof: r.dof,
            p_value: r.p_value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchSummary {
    pub lo: u64,
    pub hi: u64,
    pub objective: Objective,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LstarReport {
    pub observed_totals: TotalsSummary,
    pub search: SearchSummary,
    pub l_star: u64,
    pub modified_totals: TotalsSummary,
    pub at_search_boundary: bool,
    pub objective_trace: Vec<TracePoint>,
    pub test: TestReport,
}

impl LstarReport {
    pub fn new(observed: DictionaryTotals, search: SearchSummary, fit: &LstarFit) -> Self {
        Self {
            observed_totals: observed.into(),
            search,
            l_star: fit.l_star,
            modified_totals: fit.modified_totals.into(),
            at_search_boundary: fit.at_search_boundary,
            objective_trace: fit.objective_trace.clone(),
            test: (&fit.report).into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulatedDegree {
    pub k: u32,
    pub predicted: f64,
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub policy: MergePolicy,
    pub p_values: Vec<f64>,
    pub uniform_sup_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    pub totals: TotalsSummary,
    pub fit: FitSummary,
    pub seed: u64,
    pub replicates: u32,
    pub sampling: Sampling,
    pub degrees: Vec<SimulatedDegree>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<Calibration>,
}

impl SimulateReport {
    pub(crate) fn degrees(summary: &[DegreeSummary], predicted: &PolysemySpectrum) -> Vec<SimulatedDegree> {
        let max_k = summary.len().max(predicted.max_degree().unwrap_or(0) as usize) as u32;
        (1..=max_k)
            .map(|k| {
                let s = summary.get(k as usize - 1);
                SimulatedDegree {
                    k,
                    predicted: predicted.count(k),
                    mean: s.map_or(0.0, |s| s.mean),
                    std_error: s.map_or(0.0, |s| s.std_error),
                }
            })
            .collect()
    }
}

/// Output of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Predict(PredictReport),
    Test(TestReport),
    FitLstar(LstarReport),
    Simulate(SimulateReport),
}

impl Report {
    /// Machine form. Floats use the shortest representation that parses
    /// back to the same bits.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers and strings")
    }

    /// Per-degree table as CSV.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        match self {
            Report::Predict(r) => {
                w.write_record(["k", "expected"]).map_err(csv_err)?;
                for row in &r.spectrum {
                    w.write_record([row.k.to_string(), row.expected.to_string()]).map_err(csv_err)?;
                }
            }
            Report::Test(r) | Report::FitLstar(LstarReport { test: r, .. }) => {
                w.write_record(["k", "observed", "expected"]).map_err(csv_err)?;
                for row in &r.degrees {
                    let observed = row.observed.unwrap_or(0.0);
                    w.write_record([row.k.to_string(), observed.to_string(), row.expected.to_string()])
                        .map_err(csv_err)?;
                }
            }
            Report::Simulate(r) => {
                w.write_record(["k", "predicted", "mean", "std_error"]).map_err(csv_err)?;
                for row in &r.degrees {
                    w.write_record([
                        row.k.to_string(),
                        row.predicted.to_string(),
                        row.mean.to_string(),
                        row.std_error.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    /// Human form: a few header lines and aligned tables.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Predict(r) => {
                header(&mut out, r.totals, &r.fit);
                let _ = writeln!(out, "k_max {}  (tail: {:.3e} words, {:.3e} meanings)\n", r.k_max, r.tail_words, r.tail_meanings);
                let _ = writeln!(out, "{:>6}  {:>16}", "k", "expected");
                let shown = visible_rows(r.spectrum.iter().map(|row| (0.0, row.expected)));
                for row in &r.spectrum[..shown] {
                    let _ = writeln!(out, "{:>6}  {:>16.4}", row.k, row.expected);
                }
                hidden_note(&mut out, r.spectrum.len() - shown);
            }
            Report::Test(r) => test_table(&mut out, r),
            Report::FitLstar(r) => {
                let _ = writeln!(
                    out,
                    "observed  L = {}  M = {}\nL*        {}{}  (search [{}, {}], {:?})\nmodified  L = {}  M = {}",
                    r.observed_totals.words,
                    r.observed_totals.meanings,
                    r.l_star,
                    if r.at_search_boundary { " (at search boundary)" } else { "" },
                    r.search.lo,
                    r.search.hi,
                    r.search.objective,
                    r.modified_totals.words,
                    r.modified_totals.meanings,
                );
                let _ = writeln!(out, "candidates evaluated: {}\n", r.objective_trace.len());
                test_table(&mut out, &r.test);
            }
            Report::Simulate(r) => {
                header(&mut out, r.totals, &r.fit);
                let _ = writeln!(out, "seed {}  replicates {}  sampling {:?}\n", r.seed, r.replicates, r.sampling);
                let _ = writeln!(out, "{:>6}  {:>14}  {:>14}  {:>12}", "k", "predicted", "mean", "std_error");
                let shown = visible_rows(r.degrees.iter().map(|row| (row.mean, row.predicted)));
                for row in &r.degrees[..shown] {
                    let _ = writeln!(
                        out,
                        "{:>6}  {:>14.4}  {:>14.4}  {:>12.4}",
                        row.k, row.predicted, row.mean, row.std_error
                    );
                }
                hidden_note(&mut out, r.degrees.len() - shown);
                if let Some(c) = &r.calibration {
                    let _ = writeln!(out, "\np-values ({}), sup distance to uniform {:.4}", c.p_values.len(), c.uniform_sup_distance);
                    for p in &c.p_values {
                        let _ = writeln!(out, "  {p:.6}");
                    }
                }
            }
        }
        out
    }
}

fn header(out: &mut String, totals: TotalsSummary, fit: &FitSummary) {
    let _ = writeln!(
        out,
        "L = {}  M = {}\ngamma = {:.10}  K = {:.6}  residual = {:.3e}  iterations = {}",
        totals.words, totals.meanings, fit.gamma, fit.k_const, fit.residual, fit.iterations
    );
}

fn test_table(out: &mut String, r: &TestReport) {
    header(out, r.totals, &r.fit);
    let _ = writeln!(out);
    let _ = writeln!(out, "{:>6}  {:>12}  {:>14}", "k", "observed", "expected");
    let shown = visible_rows(r.degrees.iter().map(|row| (row.observed.unwrap_or(0.0), row.expected)));
    for row in &r.degrees[..shown] {
        let _ = writeln!(out, "{:>6}  {:>12}  {:>14.4}", row.k, row.observed.unwrap_or(0.0), row.expected);
    }
    hidden_note(out, r.degrees.len() - shown);
    let _ = writeln!(out, "\n{:>16}  {:>12}  {:>14}", "class", "observed", "expected");
    for class in &r.classes {
        let degrees = degree_label(&class.degrees);
        let _ = writeln!(out, "{:>16}  {:>12}  {:>14.4}", degrees, class.observed, class.expected);
    }
    let _ = writeln!(
        out,
        "\nchi-square = {:.6}  dof = {}  P = {:.6}  (fitted parameters: {})",
        r.chi_square, r.dof, r.p_value, r.fitted_param_count
    );
}

/// Rows up to the last one with an observed count or an expected count that
/// shows at four decimals.
fn visible_rows(rows: impl Iterator<Item = (f64, f64)>) -> usize {
    rows.enumerate()
        .filter(|(_, (observed, expected))| *observed > 0.0 || *expected >= 5e-5)
        .last()
        .map_or(0, |(i, _)| i + 1)
}

fn hidden_note(out: &mut String, hidden: usize) {
    if hidden > 0 {
        let _ = writeln!(out, "{:>6}  ({hidden} further degrees below 0.0001)", "...");
    }
}

fn degree_label(degrees: &[u32]) -> String {
    let contiguous = degrees.windows(2).all(|w| w[1] == w[0] + 1);
    match degrees {
        [k] => k.to_string(),
        [first, .., last] if contiguous => format!("{first}-{last}"),
        _ => degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(degree_label(&[3]), "3");
        assert_eq!(degree_label(&[8, 9]), "8-9");
        assert_eq!(degree_label(&[10, 11, 12]), "10-12");
        assert_eq!(degree_label(&[2, 4]), "2,4");
    }
}
