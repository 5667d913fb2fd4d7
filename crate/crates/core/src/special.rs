//! Factorials and gamma-function helpers.

use statrs::function::gamma::ln_gamma as statrs_ln_gamma;

/// `n!` as a float. Overflows to `+inf` for `n > 170`.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Falling factorial `a (a-1) ... (a-m+1)` for an integer `a` of either sign.
///
/// Equals zero when `0 <= a < m`.
pub fn falling_factorial(a: i64, m: usize) -> f64 {
    (0..m as i64).fold(1.0, |acc, s| acc * (a - s) as f64)
}

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs_ln_gamma(x)
}

/// `Γ(x)` for moderate positive arguments, exact for small integers.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 && x.fract() == 0.0 && x <= 171.0 {
        factorial(x as usize - 1)
    } else {
        ln_gamma(x).exp()
    }
}

/// `(n+3)(k+1) B(n+3, k+1) = (n+3)! (k+1)! / (n+k+3)!`, evaluated in log space.
pub fn beta_family(n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    (ln_gamma(n + 4.0) + ln_gamma(k + 2.0) - ln_gamma(n + k + 4.0)).exp()
}
