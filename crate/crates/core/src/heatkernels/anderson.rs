use rand::Rng;

use super::montecarlo::{summarize, McEstimate};
use crate::error::{invalid, Error, Result};
use crate::oracle::{heat_kernel_diagonal, LatticeBox, LatticeOperator};
use crate::stochastics::RandomSource;

/// Largest box accepted by the Anderson estimator.
pub const ANDERSON_MAX_SITES: usize = 2000;

/// Relative agreement required between successive Lanczos quadratures.
const LANCZOS_TOL: f64 = 1e-12;

/// Sample means of `p₀(t, 0, 0, ω)` for `H = -Δ + V(·, ω)` on the Dirichlet
/// box, `V` i.i.d. with `P{V = 0} = p`, `P{V = 1} = 1 - p`, at every `t`.
///
/// Sample `i` draws its potential from substream `i` of the seed, and the
/// same potentials are used for every `t`. `p = 1` gives the free box.
pub fn anderson_ep0_curve(
    d: usize,
    l: usize,
    p: f64,
    ts: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    if !(p > 0.0 && p <= 1.0) || n_samples == 0 || ts.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(invalid("anderson_ep0 needs p in (0, 1], t >= 0 and n_samples >= 1"));
    }
    let lat = LatticeBox::new(d, l)?;
    let n = lat.n_sites();
    if n > ANDERSON_MAX_SITES {
        return Err(Error::TooLarge(format!("box has {n} sites, at most {ANDERSON_MAX_SITES} allowed")));
    }
    let root = RandomSource::new(seed);
    let mut samples = vec![Vec::with_capacity(n_samples); ts.len()];
    let zeros = vec![0.0; n];
    for i in 0..n_samples {
        let mut rng = root.substream(i as u64);
        let v: Vec<f64> = (0..n).map(|_| if rng.random::<f64>() < p { 0.0 } else { 1.0 }).collect();
        let op = LatticeOperator::new(lat, &zeros, Some(&v))?;
        let vals = heat_kernel_diagonal(&|x, y| op.matvec(x, y), n, lat.center(), ts, LANCZOS_TOL);
        for (k, val) in vals.into_iter().enumerate() {
            samples[k].push(val);
        }
    }
    Ok(samples.iter().map(|s| summarize(s, 0)).collect())
}

/// `E p₀(t, 0, 0)` with its standard error over `n_samples` impurity configurations.
pub fn anderson_ep0(d: usize, l: usize, p: f64, t: f64, n_samples: usize, seed: u64) -> Result<McEstimate> {
    Ok(anderson_ep0_curve(d, l, p, &[t], n_samples, seed)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heatkernels::lattice_pi;

    #[test]
    fn time_zero_is_one() {
        let e = anderson_ep0(2, 4, 0.5, 0.0, 5, 3).unwrap();
        assert!((e.estimate - 1.0).abs() < 1e-14);
    }

    #[test]
    fn free_box_matches_lattice() {
        let ts = [0.5, 1.0, 2.0, 5.0];
        let e = anderson_ep0_curve(1, 12, 1.0, &ts, 1, 0).unwrap();
        for (est, t) in e.iter().zip(ts) {
            assert!((est.estimate - lattice_pi(1, t)).abs() < 1e-6, "t = {t}");
        }
    }

    #[test]
    fn oversized_box_rejected() {
        assert!(matches!(anderson_ep0(2, 30, 0.5, 1.0, 1, 0), Err(Error::TooLarge(_))));
    }
}
