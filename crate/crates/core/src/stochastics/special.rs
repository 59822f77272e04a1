//! Special functions used by the heat-kernel providers.

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln n!`, exact summation for small `n`.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 32 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Argument at which `e^{-x} I₀(x)` switches from the power series to the
/// large-argument expansion.
const I0_SWITCH: f64 = 20.0;

/// Exponentially scaled modified Bessel function `e^{-x} I₀(x)` for `x ≥ 0`.
///
/// Power series `Σ (x/2)^{2k} / (k!)²` up to the switch point, asymptotic
/// expansion `(2πx)^{-1/2} Σ ((2k-1)!!)² / (k! (8x)^k)` beyond it, truncated
/// at its smallest term.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    assert!(x >= 0.0, "bessel_i0_scaled needs x >= 0");
    if x <= I0_SWITCH {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= q / (k * k);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            k += 1.0;
        }
        sum * (-x).exp()
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0_f64;
        loop {
            let ratio = (2.0 * k - 1.0).powi(2) / (k * 8.0 * x);
            if ratio >= 1.0 {
                break;
            }
            term *= ratio;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            k += 1.0;
        }
        sum / (2.0 * std::f64::consts::PI * x).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i0_known_values() {
        // e^{-1} I0(1), e^{-2} I0(2) to 16 digits.
        assert!((bessel_i0_scaled(1.0) - 0.465_759_607_593_640_4).abs() < 1e-15);
        assert!((bessel_i0_scaled(2.0) - 0.308_508_322_553_671_0).abs() < 1e-15);
        assert_eq!(bessel_i0_scaled(0.0), 1.0);
    }

    #[test]
    fn i0_branches_meet() {
        let lo = bessel_i0_scaled(I0_SWITCH);
        let hi = bessel_i0_scaled(I0_SWITCH * (1.0 + 1e-12));
        assert!(((lo - hi) / lo).abs() < 1e-12);
    }

    #[test]
    fn ln_factorial_small_and_large() {
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
        assert!((ln_factorial(40) - ln_gamma(41.0)).abs() < 1e-10);
        assert!((ln_binomial(10, 3) - 120f64.ln()).abs() < 1e-13);
    }
}
