//! Special functions and scalar root finding.
//!
//! Everything here is a pure function of its arguments.

mod gamma;
mod psi;
mod root;

pub use gamma::{ln_gamma, regularized_gamma_q};
pub use psi::{digamma, euler_mascheroni, EULER_MASCHERONI};
pub use root::{find_root, Bracket, Root};

pub(crate) use psi::psi;
