//! Spectrum files, reports and the four command workflows behind the
//! `polysemy` binary.

mod commands;
mod report;
mod spectrum_file;

pub use commands::{
    cmd_fit_lstar, cmd_predict, cmd_simulate, cmd_test, default_search_range, SimulateArgs, SimulateModel,
};
pub use report::{
    DegreeRow, FitSummary, LstarReport, PredictReport, Report, SimulateReport, TestReport, TotalsSummary,
};
pub use spectrum_file::{parse_spectrum, parse_spectrum_str};

use crate::error::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;
pub const EXIT_NUMERICAL: i32 = 5;

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidConfig(_) | Error::Domain(_) => EXIT_USAGE,
        Error::Parse { .. }
        | Error::DuplicateDegree { .. }
        | Error::EmptySpectrum
        | Error::Io(_)
        | Error::InsufficientClasses { .. }
        | Error::DegenerateClass { .. } => EXIT_DATA,
        Error::Infeasible { .. } | Error::InvalidTotals(_) | Error::NoSolution(_) => EXIT_INFEASIBLE,
        Error::Bracketing { .. } | Error::Convergence(_) | Error::FitFailure => EXIT_NUMERICAL,
    }
}

/// Extra line printed after an error, when there is something to suggest.
pub fn remediation_hint(err: &Error) -> Option<&'static str> {
    match err {
        Error::Infeasible { .. } => Some("the meanings total M must exceed the word total L"),
        Error::NoSolution(_) => Some("M is too large for L: no Zipf exponent up to 64 reaches it"),
        Error::InsufficientClasses { .. } => Some("lower --merge-min or exclude fewer degrees"),
        _ => None,
    }
}
