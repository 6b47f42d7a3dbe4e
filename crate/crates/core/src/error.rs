use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the numerical kernel, the model and the test pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root is not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    Bracketing {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("no convergence after {0} iterations")]
    Convergence(usize),

    #[error("infeasible totals: meanings total must exceed word total (L = {words}, M = {meanings})")]
    Infeasible { words: u64, meanings: f64 },

    #[error("invalid totals: {0}")]
    InvalidTotals(String),

    #[error("no solution: residual does not change sign for exponent up to {0}")]
    NoSolution(f64),

    #[error("insufficient classes: {classes} comparison class(es) leave {dof} degrees of freedom")]
    InsufficientClasses { classes: usize, dof: i64 },

    #[error("degenerate class {degrees:?}: expected count is zero")]
    DegenerateClass { degrees: Vec<u32> },

    #[error("empty spectrum")]
    EmptySpectrum,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("L* fit failed: objective is not finite at any candidate")]
    FitFailure,

    /// `line` is 1-based; 0 when no line is known.
    #[error("{}{message}", location(.line))]
    Parse { line: usize, message: String },

    #[error("{}duplicate degree {degree}", location(.line))]
    DuplicateDegree { line: usize, degree: u32 },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

fn location(line: &usize) -> String {
    match line {
        0 => String::new(),
        n => format!("line {n}: "),
    }
}
