//! Independent reference computations for the integration tests. Nothing
//! here calls into the library's numerical code.
#![allow(dead_code)]

pub const EULER: f64 = 0.577_215_664_901_532_9;

/// H_n summed from the small terms up.
pub fn harmonic(n: u64) -> f64 {
    (1..=n).rev().map(|j| 1.0 / j as f64).sum()
}

/// erf by its Maclaurin series; fine for |x| <= 3.
pub fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let x2 = x * x;
    let mut n = 0.0;
    while term.abs() > 1e-18 * sum.abs() {
        n += 1.0;
        term *= -x2 / n;
        sum += term / (2.0 * n + 1.0);
    }
    2.0 / std::f64::consts::PI.sqrt() * sum
}

/// Chi-square survival with one degree of freedom: 2(1 − Φ(√s)) = 1 − erf(√(s/2)).
pub fn chi2_sf_df1(stat: f64) -> f64 {
    1.0 - erf_series((stat / 2.0).sqrt())
}

/// Digamma by a deep upward shift (to at least 1000) and a short
/// asymptotic tail; a different route from the library's.
pub fn digamma_ref(x: f64) -> f64 {
    let mut x = x;
    let mut acc = 0.0;
    while x < 1000.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    acc + x.ln() - 0.5 / x - inv2 / 12.0 + inv2 * inv2 / 120.0
}

/// Σ_i [ψ((L/i)^γ + 1) + C] with the reference digamma.
pub fn forward_meanings(words: u64, gamma: f64) -> f64 {
    (1..=words)
        .map(|i| digamma_ref((words as f64 / i as f64).powf(gamma) + 1.0) + EULER)
        .sum()
}

/// N_k for k = 1..=k_max by direct summation of (m − 1)^(k−1) / m^k.
pub fn brute_spectrum(words: u64, gamma: f64, k_max: u32) -> Vec<f64> {
    let k_const = (words as f64).powf(gamma);
    let meanings: Vec<f64> = (1..=words)
        .map(|i| digamma_ref(k_const / (i as f64).powf(gamma) + 1.0) + EULER)
        .collect();
    (1..=k_max)
        .map(|k| {
            meanings
                .iter()
                .map(|&m| (m - 1.0).max(0.0).powi(k as i32 - 1) / m.powi(k as i32))
                .sum()
        })
        .collect()
}

/// Rounded copy of a predicted spectrum as `degree,count` rows.
pub fn spectrum_rows(counts: &[(u32, u64)]) -> String {
    counts.iter().map(|(k, n)| format!("{k},{n}\n")).collect()
}
