use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::table::rational_to_f64;
use crate::error::{invalid, Result};

pub const CONFINED_MAX_RADIUS: u32 = 12;
pub const CONFINED_MAX_STEPS: u32 = 60;

/// Simple-walk bridge confined to `[-r, r]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfinedBridgeQuery {
    pub r: u32,
    pub n2: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfinedBridge {
    /// `P{|S_k| ≤ r for all k ≤ n2, S_{n2} = 0}`.
    pub exact: BigRational,
    /// `cos^{n2}(π / (2(r+1)))`.
    pub bound: f64,
    /// `exact ≤ bound` up to one part in 1e12 of rounding in the bound.
    pub holds: bool,
}

/// Exact confined-bridge probability by the transfer matrix on `{-r, …, r}`,
/// with the cosine bound from the top Dirichlet eigenfunction.
pub fn confined_bridge_exact_and_bound(q: ConfinedBridgeQuery) -> Result<ConfinedBridge> {
    if q.r == 0 || q.r > CONFINED_MAX_RADIUS {
        return Err(invalid(format!("confinement radius must lie in 1..={CONFINED_MAX_RADIUS}")));
    }
    if q.n2 == 0 || q.n2 % 2 == 1 || q.n2 > CONFINED_MAX_STEPS {
        return Err(invalid(format!("n2 must be even and in 2..={CONFINED_MAX_STEPS}")));
    }
    let r = q.r as usize;
    // Path counts stay below 2^60.
    let mut v = vec![0u64; 2 * r + 1];
    v[r] = 1;
    for _ in 0..q.n2 {
        let mut w = vec![0u64; 2 * r + 1];
        for i in 0..=2 * r {
            if i > 0 {
                w[i - 1] += v[i];
            }
            if i < 2 * r {
                w[i + 1] += v[i];
            }
        }
        v = w;
    }
    let exact = BigRational::new(BigInt::from(v[r]), BigInt::from(1) << q.n2 as usize);
    let bound = (std::f64::consts::PI / (2.0 * (q.r as f64 + 1.0))).cos().powi(q.n2 as i32);
    let holds = rational_to_f64(&exact) <= bound * (1.0 + 1e-12);
    Ok(ConfinedBridge { exact, bound, holds })
}

/// One row of the envelope optimization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub two_n: u64,
    /// Maximizing radius `r₀`.
    pub r0: u64,
    /// `ln M(2n)`.
    pub log_m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    /// Least-squares slope of `ln(-ln M)` against `ln 2n`.
    pub slope: f64,
    pub intercept: f64,
    pub points: Vec<EnvelopePoint>,
}

/// `ln M(2n)` with `M(2n) = max_{1 ≤ r ≤ 2n} 2^{-r} cos^{2n}(π/(2(r+1)))`,
/// by an integer scan of `r` in log space; returns `(ln M, argmax)`.
pub fn envelope_log_max(two_n: u64) -> (f64, u64) {
    let ln2 = std::f64::consts::LN_2;
    let m = two_n as f64;
    let mut best = (f64::NEG_INFINITY, 1);
    for r in 1..=two_n {
        let v = -(r as f64) * ln2 + m * (std::f64::consts::PI / (2.0 * (r as f64 + 1.0))).cos().ln();
        if v > best.0 {
            best = (v, r);
        }
    }
    best
}

/// Fits the exponent of `-ln M(2n) ≈ c (2n)^{slope}` over the given walk lengths.
pub fn envelope_exponent_fit(two_n: &[u64]) -> Result<EnvelopeFit> {
    if two_n.len() < 2 {
        return Err(invalid("envelope fit needs at least two walk lengths"));
    }
    for &n in two_n {
        if !(1_000..=1_000_000).contains(&n) || n % 2 == 1 {
            return Err(invalid(format!("walk length {n} must be even and in [1e3, 1e6]")));
        }
    }
    let points: Vec<EnvelopePoint> = two_n
        .iter()
        .map(|&n| {
            let (log_m, r0) = envelope_log_max(n);
            EnvelopePoint { two_n: n, r0, log_m }
        })
        .collect();
    let xs: Vec<f64> = points.iter().map(|p| (p.two_n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (-p.log_m).ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("envelope fit needs distinct walk lengths"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(EnvelopeFit { slope, intercept: my - slope * mx, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_one_two_steps_saturates() {
        let c = confined_bridge_exact_and_bound(ConfinedBridgeQuery { r: 1, n2: 2 }).unwrap();
        assert_eq!(c.exact, BigRational::new(1.into(), 2.into()));
        assert!((c.bound - 0.5).abs() < 1e-15 && c.holds);
    }

    #[test]
    fn radius_three_ten_steps_is_strict() {
        let c = confined_bridge_exact_and_bound(ConfinedBridgeQuery { r: 3, n2: 10 }).unwrap();
        assert!(rational_to_f64(&c.exact) < c.bound);
    }
}
