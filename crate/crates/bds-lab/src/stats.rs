//! Small statistical helpers used by the verification suites.

use anyhow::{ensure, Result};

/// Multiplicative lower-tail bound for a Bernoulli sum with mean `mu`:
/// `P[X <= (1 - delta_rel) mu] <= exp(-delta_rel^2 mu / 2)`.
pub fn chernoff_lower_tail(mu: f64, delta_rel: f64) -> Result<f64> {
    ensure!(mu > 0.0, "mean must be positive");
    ensure!(delta_rel > 0.0 && delta_rel < 1.0, "relative deviation must lie in (0, 1)");
    Ok((-delta_rel * delta_rel * mu / 2.0).exp())
}

/// Standard deviation of an empirical binomial frequency at `n` trials.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
