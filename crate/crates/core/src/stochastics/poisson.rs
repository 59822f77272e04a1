use super::special::ln_factorial;

/// Poisson probability `P{N = n}` for mean `lambda ≥ 0`, evaluated in log space.
pub fn poisson_pmf(lambda: f64, n: u64) -> f64 {
    assert!(lambda >= 0.0 && lambda.is_finite(), "poisson mean must be finite and >= 0");
    if lambda == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if n < 20 {
        return (n as f64 * lambda.ln() - lambda - ln_factorial(n)).exp();
    }
    // Stirling form keeps the large terms n ln λ and ln n! from cancelling.
    let nf = n as f64;
    let log_ratio = ((lambda - nf) / nf).ln_1p();
    let ln_p = nf * log_ratio + (nf - lambda)
        - 0.5 * (2.0 * std::f64::consts::PI * nf).ln()
        - stirling_correction(nf);
    ln_p.exp()
}

/// `ln n! - (n ln n - n + ½ ln 2πn)` for `n ≥ 20`, error below 1e-15.
fn stirling_correction(n: f64) -> f64 {
    let r = 1.0 / n;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)))
}

/// Rigorous upper bound on `P{N > m}` for `m + 2 > lambda`.
///
/// Successive pmf ratios beyond `m + 1` are at most `lambda / (m + 2)`, so
/// the tail is dominated by a geometric series.
pub fn poisson_tail_bound(lambda: f64, m: u64) -> f64 {
    let q = lambda / (m as f64 + 2.0);
    assert!(q < 1.0, "tail bound needs m + 2 > lambda");
    poisson_pmf(lambda, m + 1) / (1.0 - q)
}
