use rand::Rng;
use rand_distr::StandardNormal;

use super::RandomSource;

/// Discrete Brownian bridge on `[0, t]` sampled at `n_steps + 1` uniform times.
#[derive(Clone, Debug, PartialEq)]
pub struct BridgePath {
    pub horizon: f64,
    pub values: Vec<f64>,
}

impl BridgePath {
    pub fn n_steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps() as f64
    }

    /// Time of grid point `k`.
    pub fn time(&self, k: usize) -> f64 {
        self.horizon * k as f64 / self.n_steps() as f64
    }
}

/// Samples a bridge pinned at zero at both ends.
///
/// Panics if `n_steps < 2` or `t` is not positive and finite.
pub fn sample_brownian_bridge(t: f64, n_steps: usize, rng: &mut RandomSource) -> BridgePath {
    let mut values = vec![0.0; n_steps + 1];
    sample_brownian_bridge_into(t, &mut values, rng);
    BridgePath { horizon: t, values }
}

/// Fills `out` (length `n_steps + 1`) with a bridge on `[0, t]`.
///
/// A free Gaussian walk `W` is drawn and pinned by `B_k = W_k - (k/N) W_N`,
/// which is exact in law for the bridge at the grid points. `out[0]` and
/// `out[N]` are exactly zero.
pub fn sample_brownian_bridge_into(t: f64, out: &mut [f64], rng: &mut RandomSource) {
    assert!(t > 0.0 && t.is_finite(), "bridge horizon must be positive");
    let n = out.len().checked_sub(1).expect("empty bridge buffer");
    assert!(n >= 2, "bridge needs at least two steps");
    let sd = (t / n as f64).sqrt();
    out[0] = 0.0;
    let mut w = 0.0;
    for v in out.iter_mut().skip(1) {
        let z: f64 = rng.sample(StandardNormal);
        w += sd * z;
        *v = w;
    }
    let end = out[n];
    let inv_n = 1.0 / n as f64;
    for (k, v) in out.iter_mut().enumerate() {
        *v -= end * (k as f64 * inv_n);
    }
    out[n] = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_pinned() {
        let mut rng = RandomSource::new(1);
        for n in [2, 3, 17, 256] {
            let p = sample_brownian_bridge(3.5, n, &mut rng);
            assert_eq!(p.values[0], 0.0);
            assert_eq!(p.values[n], 0.0);
            assert_eq!(p.values.len(), n + 1);
        }
    }

    #[test]
    fn two_step_midpoint_variance() {
        let root = RandomSource::new(5);
        let t = 2.0;
        let n_paths = 200_000;
        let mut s2 = 0.0;
        let mut s4 = 0.0;
        for i in 0..n_paths {
            let mut rng = root.substream(i);
            let p = sample_brownian_bridge(t, 2, &mut rng);
            let x2 = p.values[1] * p.values[1];
            s2 += x2;
            s4 += x2 * x2;
        }
        let m = s2 / n_paths as f64;
        let se = ((s4 / n_paths as f64 - m * m) / n_paths as f64).sqrt();
        assert!((m - t / 4.0).abs() < 4.0 * se, "var {m} se {se}");
    }
}
