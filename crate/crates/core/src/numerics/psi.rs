use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// Below this argument the recurrence `ψ(x) = ψ(x + 1) − 1/x` is applied
/// before the asymptotic series. At 10 the first omitted series term is
/// below 1e-15.
const ASYMPTOTIC_MIN: f64 = 10.0;

/// `B_{2k} / (2k)` for k = 1..6, i.e. the series through `x^-12`.
const ASYMPTOTIC_COEFFS: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
];

pub fn euler_mascheroni() -> f64 {
    EULER_MASCHERONI
}

/// Digamma function `ψ(x) = d/dx ln Γ(x)` for `x > 0`.
///
/// ```
/// use polysemy::numerics::{digamma, EULER_MASCHERONI};
/// assert!((digamma(1.0).unwrap() + EULER_MASCHERONI).abs() < 1e-14);
/// ```
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    Ok(psi(x))
}

/// Unchecked digamma; the caller guarantees `x > 0`.
pub(crate) fn psi(x: f64) -> f64 {
    if x == f64::INFINITY {
        return f64::INFINITY;
    }
    let mut shift = 0.0;
    let mut x = x;
    while x < ASYMPTOTIC_MIN {
        shift += 1.0 / x;
        x += 1.0;
    }

    // ψ(x) ≈ ln x − 1/(2x) − Σ B_{2k} / (2k x^{2k})
    let inv2 = 1.0 / (x * x);
    let mut series = 0.0;
    for &c in ASYMPTOTIC_COEFFS.iter().rev() {
        series = (series + c) * inv2;
    }
    x.ln() - 0.5 / x - series - shift
}
