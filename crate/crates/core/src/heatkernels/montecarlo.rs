use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::stochastics::{sample_brownian_bridge_into, RandomSource};

/// Number of blocks for the median-of-means summary.
pub const MOM_BLOCKS: usize = 16;

/// Monte-Carlo estimate of a heat-kernel diagonal value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// Median of the means of [`MOM_BLOCKS`] contiguous blocks of paths.
    pub median_of_means: f64,
    pub n_paths: usize,
    /// Paths discarded because of a non-positive covariance determinant.
    pub rejected: usize,
}

impl McEstimate {
    pub fn rejection_fraction(&self) -> f64 {
        self.rejected as f64 / (self.n_paths + self.rejected).max(1) as f64
    }
}

/// Runs `n_paths` samples; path `i` draws from substream `i` of the root
/// seed, so the result does not depend on scheduling. A `None` sample is a
/// rejected path.
pub(crate) fn run_paths(
    n_paths: usize,
    seed: u64,
    mut sample: impl FnMut(&mut RandomSource) -> Option<f64>,
) -> McEstimate {
    let root = RandomSource::new(seed);
    let mut accepted = Vec::with_capacity(n_paths);
    let mut rejected = 0;
    for i in 0..n_paths {
        let mut rng = root.substream(i as u64);
        match sample(&mut rng) {
            Some(v) => accepted.push(v),
            None => rejected += 1,
        }
    }
    summarize(&accepted, rejected)
}

pub(crate) fn summarize(values: &[f64], rejected: usize) -> McEstimate {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n.max(1) as f64;
    let var = if n > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    let blocks = MOM_BLOCKS.min(n.max(1));
    let mut means: Vec<f64> = (0..blocks)
        .map(|b| {
            let lo = b * n / blocks;
            let hi = (b + 1) * n / blocks;
            values[lo..hi].iter().sum::<f64>() / (hi - lo).max(1) as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let median_of_means = if means.is_empty() {
        f64::NAN
    } else if blocks % 2 == 1 {
        means[blocks / 2]
    } else {
        0.5 * (means[blocks / 2 - 1] + means[blocks / 2])
    };
    McEstimate { estimate: mean, stderr: (var / n.max(1) as f64).sqrt(), median_of_means, n_paths: n, rejected }
}

/// Trapezoid integral of `f(path_k)` over the uniform grid of the path.
fn trapezoid(values: &[f64], dt: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = values.len() - 1;
    let inner: f64 = values[1..n].iter().map(|&v| f(v)).sum();
    dt * (inner + 0.5 * (f(values[0]) + f(values[n])))
}

/// Affine-group integrand for one bridge path `ŵ` on `[0, t]`:
/// `(2πt)^{-1/2} (2π ∫_0^t e^{2ŵ_s} ds)^{-1/2}`.
pub fn affine_path_functional(t: f64, path: &[f64]) -> f64 {
    let dt = t / (path.len() - 1) as f64;
    let a = trapezoid(path, dt, |w| (2.0 * w).exp());
    (2.0 * PI * t).powf(-0.5) * (2.0 * PI * a).powf(-0.5)
}

/// Monte-Carlo estimate of the affine-group diagonal `π(t)` over `n_paths` bridges.
pub fn affine_pi_mc(t: f64, n_paths: usize, n_steps: usize, seed: u64) -> Result<McEstimate> {
    if !(t > 0.0) || !t.is_finite() || n_paths == 0 {
        return Err(invalid("affine_pi_mc needs t > 0 and n_paths >= 1"));
    }
    if n_steps < 64 {
        return Err(invalid("affine_pi_mc needs n_steps >= 64"));
    }
    let mut buf = vec![0.0; n_steps + 1];
    Ok(run_paths(n_paths, seed, |rng| {
        sample_brownian_bridge_into(t, &mut buf, rng);
        Some(affine_path_functional(t, &buf))
    }))
}

/// Determinant of the conditional covariance of `(v_t, z_t)` given the `u`-bridge:
/// `t(σ²t + ∫u²) - (∫u)²`.
pub fn heisenberg_covariance_det(sigma_h: f64, t: f64, path: &[f64]) -> f64 {
    let dt = t / (path.len() - 1) as f64;
    let m1 = trapezoid(path, dt, |u| u);
    let m2 = trapezoid(path, dt, |u| u * u);
    t * (sigma_h * sigma_h * t + m2) - m1 * m1
}

/// Heisenberg-group integrand for one `u`-bridge, or `None` if the
/// discretized determinant is not positive.
pub fn heisenberg_path_functional(sigma_h: f64, t: f64, path: &[f64]) -> Option<f64> {
    let det = heisenberg_covariance_det(sigma_h, t, path);
    (det > 0.0).then(|| (2.0 * PI * t).powf(-0.5) / (2.0 * PI * det.sqrt()))
}

/// Monte-Carlo estimate of `π_σ(t)` for the Heisenberg group.
pub fn heisenberg_pi_mc(sigma_h: f64, t: f64, n_paths: usize, n_steps: usize, seed: u64) -> Result<McEstimate> {
    if !(sigma_h >= 0.0) || !sigma_h.is_finite() || !(t > 0.0) || !t.is_finite() || n_paths == 0 {
        return Err(invalid("heisenberg_pi_mc needs sigma_h >= 0, t > 0 and n_paths >= 1"));
    }
    if n_steps < 2 || (sigma_h == 0.0 && n_steps < 256) {
        return Err(invalid("heisenberg_pi_mc needs n_steps >= 256 when sigma_h = 0"));
    }
    let mut buf = vec![0.0; n_steps + 1];
    Ok(run_paths(n_paths, seed, |rng| {
        sample_brownian_bridge_into(t, &mut buf, rng);
        heisenberg_path_functional(sigma_h, t, &buf)
    }))
}
