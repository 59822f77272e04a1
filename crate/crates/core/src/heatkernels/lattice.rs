use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::stochastics::bessel_i0_scaled;

/// Diagonal heat kernel of the lattice Laplacian on `Z^d`: `(e^{-2t} I₀(2t))^d`.
pub fn lattice_pi(d: usize, t: f64) -> f64 {
    assert!(t >= 0.0, "lattice_pi needs t >= 0");
    bessel_i0_scaled(2.0 * t).powi(d as i32)
}

/// Certified majorant of [`lattice_pi`]:
/// `e^{-x} I₀(x) ≤ (2πx)^{-1/2} (1 + 1/(4x))` with `x = 2t`.
pub fn lattice_pi_majorant(d: usize, t: f64) -> f64 {
    let x = 2.0 * t;
    ((2.0 * PI * x).powf(-0.5) * (1.0 + 0.25 / x)).min(1.0).powi(d as i32)
}

/// Exact diagonal `p(t, x, x)` of the free Laplacian on the box `{-L, …, L}^d`
/// with Dirichlet truncation (diagonal `2d` kept).
///
/// The kernel factorizes over coordinates into chain kernels
/// `Σ_k φ_k(i)² e^{-t λ_k}`, `λ_k = 2 - 2cos(kπ/(n+1))`. Sites are indexed
/// with coordinate 0 varying fastest, as in the oracle's lattice boxes.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletBoxKernel {
    d: usize,
    side: usize,
    eigenvalues: Vec<f64>,
    /// `weights[i * side + k] = φ_k(i)²`.
    weights: Vec<f64>,
}

impl DirichletBoxKernel {
    pub fn new(d: usize, l: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("box kernel needs d >= 1"));
        }
        let side = 2 * l + 1;
        let np1 = (side + 1) as f64;
        let eigenvalues: Vec<f64> = (1..=side).map(|k| 2.0 - 2.0 * (k as f64 * PI / np1).cos()).collect();
        let mut weights = vec![0.0; side * side];
        for i in 0..side {
            for k in 0..side {
                let s = ((k + 1) as f64 * (i + 1) as f64 * PI / np1).sin();
                weights[i * side + k] = 2.0 / np1 * s * s;
            }
        }
        Ok(Self { d, side, eigenvalues, weights })
    }

    pub fn n_sites(&self) -> usize {
        self.side.pow(self.d as u32)
    }

    /// Bottom of the box spectrum; `p(t, x, x) ≤ e^{-t·gap}` for every site.
    pub fn spectral_gap(&self) -> f64 {
        self.d as f64 * self.eigenvalues[0]
    }

    fn chain(&self, i: usize, t: f64) -> f64 {
        let w = &self.weights[i * self.side..(i + 1) * self.side];
        w.iter().zip(&self.eigenvalues).map(|(w, l)| w * (-t * l).exp()).sum()
    }

    /// `p(t, x, x)` at site index `idx`.
    pub fn diagonal(&self, mut idx: usize, t: f64) -> f64 {
        assert!(idx < self.n_sites(), "site index outside the box");
        let mut p = 1.0;
        for _ in 0..self.d {
            p *= self.chain(idx % self.side, t);
            idx /= self.side;
        }
        p
    }
}

/// `∫_{-π}^{π} e^{iσz} / (2cos σ - c) dσ = -2π w^{|z|} / s` where `s² = c² - 4`
/// and `w = (c - s)/2` is the root with `|w| < 1`.
fn chain_resolvent(c: Complex64, z: i64) -> Complex64 {
    let s = (c * c - 4.0).sqrt();
    let (w, s) = if (c + s).norm() >= (c - s).norm() {
        (2.0 / (c + s), s)
    } else {
        (2.0 / (c - s), -s)
    };
    -2.0 * PI * w.powi(z.unsigned_abs() as i32) / s
}

fn band_distance(d: usize, mu: Complex64) -> f64 {
    let edge = 2.0 * d as f64;
    let re_gap = if mu.re > edge {
        mu.re - edge
    } else if mu.re < -edge {
        -edge - mu.re
    } else {
        0.0
    };
    re_gap.hypot(mu.im)
}

/// Largest number of torus nodes tried by [`lattice_resolvent`].
const RESOLVENT_MAX_NODES: usize = 1 << 22;

/// Lattice resolvent kernel
/// `R_μ(z) = ∫_{[-π,π]^d} e^{i(σ,z)} dσ / (Σ_j 2cos σ_j - μ)`.
///
/// The last coordinate is integrated in closed form; the remaining `d-1`
/// are handled by the periodic trapezoid rule with node doubling until two
/// successive estimates agree to 1e-12 relative.
pub fn lattice_resolvent(d: usize, mu: Complex64, z: &[i64]) -> Result<Complex64> {
    if d == 0 || z.len() != d {
        return Err(invalid("lattice_resolvent needs d >= 1 and a d-vector z"));
    }
    if !(band_distance(d, mu) > 1e-6) {
        return Err(Error::OnSpectrum(format!("mu = {mu} is within 1e-6 of the band [-{0}, {0}]", 2 * d)));
    }
    let last = z[d - 1];
    if d == 1 {
        return Ok(chain_resolvent(mu, last));
    }
    let outer = d - 1;
    let eval = |n: usize| -> Result<Complex64> {
        let total = n.checked_pow(outer as u32).filter(|&t| t <= RESOLVENT_MAX_NODES);
        let total = total.ok_or_else(|| Error::QuadratureNotConverged { estimate: f64::NAN, error: f64::NAN })?;
        let h = 2.0 * PI / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; outer];
        for _ in 0..total {
            let mut cos_sum = 0.0;
            let mut phase = 0.0;
            for j in 0..outer {
                let sigma = -PI + h * idx[j] as f64;
                cos_sum += 2.0 * sigma.cos();
                phase += sigma * z[j] as f64;
            }
            acc += Complex64::from_polar(1.0, phase) * chain_resolvent(mu - cos_sum, last);
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < n {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(acc * h.powi(outer as i32))
    };
    let mut n = 16;
    let mut prev = eval(n)?;
    loop {
        n *= 2;
        let cur = match eval(n) {
            Ok(v) => v,
            Err(_) => {
                return Err(Error::QuadratureNotConverged { estimate: prev.norm(), error: f64::NAN });
            }
        };
        if (cur - prev).norm() <= 1e-12 * cur.norm() {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// `R_μ(z)` by the tensor midpoint rule with `nodes` points per coordinate,
/// `σ_k = -π + (k + 1/2)·2π/nodes`.
///
/// With `nodes = 2(L+1)` and `z = 0` this is exact for the Dirichlet box
/// `{-L..L}^d`: the centre diagonal of `(-Δ_box - E)^{-1}` equals
/// `-(2π)^{-d} R_{2d-E}(0)` evaluated with this rule, because the box modes
/// that do not vanish at the centre are exactly the midpoint nodes.
pub fn lattice_resolvent_midpoint(d: usize, mu: Complex64, z: &[i64], nodes: usize) -> Result<Complex64> {
    if d == 0 || z.len() != d || nodes == 0 {
        return Err(invalid("lattice_resolvent_midpoint needs d >= 1, a d-vector z and nodes >= 1"));
    }
    let total = nodes
        .checked_pow(d as u32)
        .filter(|&t| t <= RESOLVENT_MAX_NODES)
        .ok_or_else(|| Error::TooLarge(format!("{nodes}^{d} midpoint nodes")))?;
    let h = 2.0 * PI / nodes as f64;
    let cosines: Vec<f64> = (0..nodes).map(|k| 2.0 * (-PI + h * (k as f64 + 0.5)).cos()).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        let mut cos_sum = 0.0;
        let mut phase = 0.0;
        for j in 0..d {
            cos_sum += cosines[idx[j]];
            phase += (-PI + h * (idx[j] as f64 + 0.5)) * z[j] as f64;
        }
        let denom = cos_sum - mu;
        if denom.norm() == 0.0 {
            return Err(Error::OnSpectrum(format!("mu = {mu} hits a midpoint node")));
        }
        acc += Complex64::from_polar(1.0, phase) / denom;
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < nodes {
                break;
            }
            *slot = 0;
        }
    }
    Ok(acc * h.powi(d as i32))
}

/// Centre diagonal of `(-Δ_box - E)^{-1}` on the Dirichlet box `{-L..L}^d`,
/// for `E` below the box spectrum.
pub fn box_center_green(d: usize, l: usize, e: f64) -> Result<f64> {
    let mu = Complex64::new(2.0 * d as f64 - e, 0.0);
    let r = lattice_resolvent_midpoint(d, mu, &vec![0; d], 2 * (l + 1))?;
    Ok(-r.re / (2.0 * PI).powi(d as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(lattice_pi(3, 0.0), 1.0);
        assert!((lattice_pi(1, 1.0) - 0.308_508_322_553_671_0).abs() < 1e-15);
        assert!((lattice_pi(2, 1.0) - lattice_pi(1, 1.0).powi(2)).abs() < 1e-16);
    }

    #[test]
    fn majorant_dominates_on_grid() {
        for k in 0..4000 {
            let t = 1e-3 * 1.005f64.powi(k);
            assert!(lattice_pi(1, t) <= lattice_pi_majorant(1, t), "t = {t}");
        }
    }

    #[test]
    fn one_dimensional_closed_form() {
        for mu in [2.5, 3.0, 10.0] {
            let r = lattice_resolvent(1, Complex64::new(mu, 0.0), &[0]).unwrap();
            let expect = -2.0 * PI / (mu * mu - 4.0f64).sqrt();
            assert!((r.re - expect).abs() < 1e-14 && r.im.abs() < 1e-14);
        }
    }

    #[test]
    fn band_is_rejected() {
        assert!(matches!(lattice_resolvent(2, Complex64::new(1.0, 0.0), &[0, 0]), Err(Error::OnSpectrum(_))));
    }

    #[test]
    fn two_dimensional_against_brute_midpoint() {
        let mu = Complex64::new(5.0, 0.3);
        let a = lattice_resolvent(2, mu, &[1, 2]).unwrap();
        let b = lattice_resolvent_midpoint(2, mu, &[1, 2], 512).unwrap();
        assert!((a - b).norm() < 1e-10 * a.norm());
    }
}
