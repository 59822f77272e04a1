use super::dense::{sturm_count, Tridiagonal};
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Negative eigenvalue of `-y'' - A δ(x) y` on `[-1/2, 1/2]` with Dirichlet ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaWellEigenvalue {
    pub lambda: f64,
    /// `κ = √(-λ)`, the root of `tanh(κ/2) = 2κ/A`.
    pub kappa: f64,
}

/// Solves `tanh(κ/2) = 2κ/A` by bisection on `κ ∈ (0, A/2)`; requires `A > 4`.
pub fn delta_well_eigenvalue(a: f64) -> Result<DeltaWellEigenvalue> {
    if !a.is_finite() {
        return Err(invalid("delta strength must be finite"));
    }
    if a <= 4.0 {
        return Err(Error::NoBoundState(format!("no bound state for A = {a} <= 4")));
    }
    // f > 0 just right of 0 (slope 1/2 - 2/A > 0) and f < 0 at A/2.
    let f = |k: f64| (0.5 * k).tanh() - 2.0 * k / a;
    let mut lo = 0.0f64;
    let mut hi = 0.5 * a;
    // Lift lo off the trivial root at 0: from the cubic expansion the root exceeds √(12(1-4/A))/2.
    let guess = 0.5 * (12.0 * (1.0 - 4.0 / a)).sqrt();
    if guess < hi && f(guess) > 0.0 {
        lo = guess;
    }
    if lo == 0.0 {
        lo = 1e-300_f64.max(hi * 1e-12);
        while f(lo) <= 0.0 {
            lo *= 0.5;
        }
    }
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let kappa = 0.5 * (lo + hi);
    Ok(DeltaWellEigenvalue { lambda: -kappa * kappa, kappa })
}

/// Negative-eigenvalue counts of `-y'' - v` on a unit interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalCounts {
    /// `#{k ≥ 1 : (kπ)² < v}`.
    pub dirichlet: usize,
    /// `#{k ≥ 0 : (kπ)² < v}`.
    pub neumann: usize,
}

pub fn interval_counts_neumann_dirichlet(v: f64) -> Result<IntervalCounts> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid("interval potential must be positive and finite"));
    }
    let root = v.sqrt() / PI;
    let mut k = root.floor() as usize;
    // Exact secular check near the boundary.
    while k > 0 && ((k as f64) * PI).powi(2) >= v {
        k -= 1;
    }
    while (((k + 1) as f64) * PI).powi(2) < v {
        k += 1;
    }
    Ok(IntervalCounts { dirichlet: k, neumann: k + 1 })
}

/// Exact count of negative eigenvalues of `-y'' - v` on a chain of unit
/// edges carrying constants `v_e > 0`, with Kirchhoff conditions at interior
/// vertices and Neumann conditions at both ends.
///
/// Scaled Prüfer angle on edge `e`: `y = r sin θ`, `y'/ω_e = r cos θ`,
/// `ω_e = √v_e`, so `θ` advances by exactly `ω_e` along the edge. At a vertex
/// `y` and `y'` are continuous, so `tan θ` is rescaled by `ω_new/ω_old`
/// inside the same half-period. Starting from `θ = π/2`, the count is the
/// number of `n ≥ 0` with `θ(end) > π/2 + nπ`.
pub fn chain_count_neumann(edge_v: &[f64]) -> Result<usize> {
    if edge_v.is_empty() || edge_v.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(invalid("chain potentials must be positive and finite"));
    }
    let mut turns = 0.0_f64;
    let mut phi = 0.5 * PI;
    let mut omega_prev = edge_v[0].sqrt();
    for &v in edge_v {
        let omega = v.sqrt();
        // Same half-period: sin φ ≥ 0 keeps atan2 in [0, π].
        phi = (omega / omega_prev * phi.sin()).atan2(phi.cos());
        phi += omega;
        let k = (phi / PI).floor();
        turns += k;
        phi -= k * PI;
        omega_prev = omega;
    }
    let theta = turns * PI + phi;
    Ok(((theta - 0.5 * PI) / PI).ceil().max(0.0) as usize)
}

/// Finite-difference count of eigenvalues `< e` for the Dirichlet delta well
/// of strength `A` on `[-1/2, 1/2]` with `2n` cells; the delta becomes `-A/h`
/// at the center node.
pub fn delta_well_count_fd(a: f64, n: usize, e: f64) -> usize {
    let cells = 2 * n;
    let h = 1.0 / cells as f64;
    let inner = cells - 1;
    let mut diag = vec![2.0 / (h * h); inner];
    diag[n - 1] -= a / h;
    let off = vec![-1.0 / (h * h); inner - 1];
    sturm_count(&Tridiagonal { diag, off }, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_eight() {
        let r = delta_well_eigenvalue(8.0).unwrap();
        assert!((r.kappa - 3.8300).abs() < 1e-3, "{}", r.kappa);
        assert!((r.lambda + 14.669).abs() < 1e-2, "{}", r.lambda);
        assert!(((0.5 * r.kappa).tanh() - 2.0 * r.kappa / 8.0).abs() < 1e-13);
    }

    #[test]
    fn chain_of_equal_edges_is_one_long_interval() {
        // Length-k Neumann interval: #{j ≥ 0 : (jπ/k)² < v}.
        for (k, v) in [(1usize, 5.0), (1, 50.0), (2, 30.0), (3, 100.0), (5, 0.2)] {
            let expect = (0..).take_while(|&j| (j as f64 * PI / k as f64).powi(2) < v).count();
            assert_eq!(chain_count_neumann(&vec![v; k]).unwrap(), expect, "k = {k}, v = {v}");
        }
    }

    #[test]
    fn no_bound_state() {
        assert!(matches!(delta_well_eigenvalue(4.0), Err(Error::NoBoundState(_))));
        assert!(matches!(delta_well_eigenvalue(3.0), Err(Error::NoBoundState(_))));
    }

    #[test]
    fn interval_examples() {
        let c = interval_counts_neumann_dirichlet(PI * PI / 2.0).unwrap();
        assert_eq!((c.dirichlet, c.neumann), (0, 1));
        let c = interval_counts_neumann_dirichlet(4.5 * PI * PI).unwrap();
        assert_eq!((c.dirichlet, c.neumann), (2, 3));
    }

    #[test]
    fn fd_count_brackets_root() {
        let r = delta_well_eigenvalue(8.0).unwrap();
        assert_eq!(delta_well_count_fd(8.0, 2000, 0.0), 1);
        assert_eq!(delta_well_count_fd(8.0, 2000, r.lambda + 0.05), 1);
        assert_eq!(delta_well_count_fd(8.0, 2000, r.lambda - 0.05), 0);
    }
}
