use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::stochastics::{integrate, ln_gamma, QuadOptions};

/// Tail of an isotropic Lévy density for `|x| ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LevyTail {
    /// `b |x|^{-d-δ}`, `δ ∈ (0, 2)`.
    Power { delta: f64, b_amp: f64 },
    /// `c |x|^{-d} (1 + ln|x|)^{-σ}`, `σ > 1`.
    Log { sigma_log: f64, c_amp: f64 },
}

/// Isotropic Lévy density `ν(x) = a |x|^{-d-ρ}` for `|x| < 1` with the given
/// tail for `|x| ≥ 1`. Supported dimensions are 1 and 3, where the spherical
/// average of `cos(k·x)` is elementary (`cos` and `sin u / u`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevyMeasureSpec {
    pub d: usize,
    pub rho: f64,
    pub a_amp: f64,
    pub tail: LevyTail,
}

/// Surface area of the unit sphere in `R^d` for the supported dimensions.
fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        3 => 4.0 * PI,
        _ => unreachable!("validated dimension"),
    }
}

fn in_open_0_2(x: f64) -> bool {
    x > 0.0 && x < 2.0
}

impl LevyMeasureSpec {
    pub fn power(d: usize, rho: f64, a_amp: f64, delta: f64, b_amp: f64) -> Result<Self> {
        let s = Self { d, rho, a_amp, tail: LevyTail::Power { delta, b_amp } };
        s.validate()?;
        Ok(s)
    }

    pub fn log_tail(d: usize, rho: f64, a_amp: f64, sigma_log: f64, c_amp: f64) -> Result<Self> {
        let s = Self { d, rho, a_amp, tail: LevyTail::Log { sigma_log, c_amp } };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d != 1 && self.d != 3 {
            return Err(invalid(format!("Levy symbols are supported for d = 1 and d = 3, got {}", self.d)));
        }
        if !in_open_0_2(self.rho) || !(self.a_amp > 0.0) || !self.a_amp.is_finite() {
            return Err(invalid("Levy spec needs rho in (0, 2) and a_amp > 0"));
        }
        match self.tail {
            LevyTail::Power { delta, b_amp } => {
                if !in_open_0_2(delta) || !(b_amp > 0.0) || !b_amp.is_finite() {
                    return Err(invalid("power tail needs delta in (0, 2) and b_amp > 0"));
                }
            }
            LevyTail::Log { sigma_log, c_amp } => {
                if !(sigma_log > 1.0) || !sigma_log.is_finite() || !(c_amp > 0.0) || !c_amp.is_finite() {
                    return Err(invalid("log tail needs sigma_log > 1 and c_amp > 0"));
                }
            }
        }
        let (near, far) = self.integrability_integrals();
        if !near.is_finite() || !far.is_finite() {
            return Err(invalid("Levy measure violates the integrability condition"));
        }
        Ok(())
    }

    /// `(∫_{|x|<1} |x|² ν, ∫_{|x|>1} ν)`, both finite for admissible specs.
    pub fn integrability_integrals(&self) -> (f64, f64) {
        let w = sphere_area(self.d);
        let near = w * self.a_amp / (2.0 - self.rho);
        let far = match self.tail {
            LevyTail::Power { delta, b_amp } => w * b_amp / delta,
            LevyTail::Log { sigma_log, c_amp } => w * c_amp / (sigma_log - 1.0),
        };
        (near, far)
    }
}

/// `∫_0^∞ (1 - j(u)) u^{-1-s} du` for `j = cos` (`d = 1`) or `sin u / u` (`d = 3`).
fn kernel_total(d: usize, s: f64) -> f64 {
    let shift = if d == 1 { 1.0 } else { 2.0 };
    PI / (2.0 * (0.5 * PI * s).sin() * ln_gamma(shift + s).exp())
}

/// `1 - j(u)`, with a series near 0 to avoid cancellation.
fn one_minus_j(d: usize, u: f64) -> f64 {
    if u < 1e-2 {
        let u2 = u * u;
        if d == 1 {
            u2 / 2.0 * (1.0 - u2 / 12.0 * (1.0 - u2 / 30.0))
        } else {
            u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0))
        }
    } else if d == 1 {
        2.0 * (0.5 * u).sin().powi(2)
    } else {
        1.0 - u.sin() / u
    }
}

fn quad_opts() -> QuadOptions {
    QuadOptions { rel_tol: 1e-13, abs_tol: 1e-300, max_subdivisions: 2000 }
}

/// `∫_x^∞ e^{iu} f(u) du = i e^{ix} ∫_0^∞ e^{-y} f(x + iy) dy` for `f` analytic
/// and decaying in the first quadrant beyond `x`; `x` should be at least 1 so
/// the rotated integrand is smooth.
fn rotated_oscillatory(x: f64, f: impl Fn(Complex64) -> Complex64) -> Result<Complex64> {
    let g = |y: f64| (-y).exp() * f(Complex64::new(x, y));
    let re = integrate(|y| g(y).re, 0.0, 60.0, quad_opts())?;
    let im = integrate(|y| g(y).im, 0.0, 60.0, quad_opts())?;
    Ok(Complex64::i() * Complex64::from_polar(1.0, x) * Complex64::new(re.value, im.value))
}

/// `P_s(x) = ∫_0^x (1 - j(u)) u^{-1-s} du`.
fn partial_kernel(d: usize, s: f64, x: f64) -> Result<f64> {
    if x <= 4.0 {
        // Σ_{n≥1} (-1)^{n+1} x^{2n-s} / ((2n-s) m_n), m_n = (2n)! or (2n+1)!.
        let mut sum = 0.0;
        let mut fact = if d == 1 { 2.0 } else { 6.0 };
        let mut pow = x * x;
        for n in 1..80 {
            let nn = n as f64;
            let term = pow / ((2.0 * nn - s) * fact);
            sum += if n % 2 == 1 { term } else { -term };
            if term < 1e-18 * sum.abs() {
                break;
            }
            pow *= x * x;
            let base = if d == 1 { 2.0 * nn } else { 2.0 * nn + 1.0 };
            fact *= (base + 1.0) * (base + 2.0);
        }
        Ok(sum * x.powf(-s))
    } else {
        // Tail T_s(x) = x^{-s}/s - ∫_x^∞ j(u) u^{-1-s} du.
        let osc = if d == 1 {
            rotated_oscillatory(x, |u| u.powf(-1.0 - s))?.re
        } else {
            rotated_oscillatory(x, |u| u.powf(-2.0 - s))?.im
        };
        let tail = x.powf(-s) / s - osc;
        Ok(kernel_total(d, s) - tail)
    }
}

/// `∫_1^∞ (1 - j(κr)) r^{-1} (1 + ln r)^{-σ} dr`.
fn log_tail_integral(d: usize, sigma: f64, kappa: f64) -> Result<f64> {
    let lk = kappa.ln();
    // Oscillatory part from u0 = max(κ, 1): ∫_{u0}^∞ j(u) u^{-1} (1 + ln(u/κ))^{-σ} du.
    let u0 = kappa.max(1.0);
    let osc = if d == 1 {
        rotated_oscillatory(u0, |u| (1.0 + u.ln() - lk).powf(-sigma) / u)?.re
    } else {
        rotated_oscillatory(u0, |u| (1.0 + u.ln() - lk).powf(-sigma) / (u * u))?.im
    };
    if kappa >= 1.0 {
        return Ok(1.0 / (sigma - 1.0) - osc);
    }
    // κ < 1: smooth part on [κ, 1] in the variable v = ln(u/κ), plus the
    // closed non-oscillatory integral over [1, ∞).
    let lmax = -lk;
    let smooth = integrate(
        |v: f64| one_minus_j(d, kappa * v.exp()) * (1.0 + v).powf(-sigma),
        0.0,
        lmax,
        quad_opts(),
    )?;
    let flat = (1.0 + lmax).powf(1.0 - sigma) / (sigma - 1.0);
    Ok(smooth.value + flat - osc)
}

/// Radial symbol `Φ(κ)`, `κ = |k|`.
pub fn levy_symbol_radial(spec: &LevyMeasureSpec, kappa: f64) -> Result<f64> {
    spec.validate()?;
    if kappa == 0.0 {
        return Ok(0.0);
    }
    let d = spec.d;
    let w = sphere_area(d);
    let inner = w * spec.a_amp * kappa.powf(spec.rho) * partial_kernel(d, spec.rho, kappa)?;
    let outer = match spec.tail {
        LevyTail::Power { delta, b_amp } => {
            w * b_amp * kappa.powf(delta) * (kernel_total(d, delta) - partial_kernel(d, delta, kappa)?)
        }
        LevyTail::Log { sigma_log, c_amp } => w * c_amp * log_tail_integral(d, sigma_log, kappa)?,
    };
    Ok((inner + outer).max(0.0))
}

/// Lévy symbol `Φ(k) = ∫ (1 - cos(x, k)) ν(x) dx`.
pub fn levy_symbol(spec: &LevyMeasureSpec, k: &[f64]) -> Result<f64> {
    if k.len() != spec.d {
        return Err(invalid(format!("k has {} components, spec has d = {}", k.len(), spec.d)));
    }
    let kappa = k.iter().map(|x| x * x).sum::<f64>().sqrt();
    levy_symbol_radial(spec, kappa)
}

/// `π(t) = (2π)^{-d} ∫ e^{-tΦ(k)} dk`, computed as
/// `(2π)^{-d} ω_d ∫ exp(d·v - tΦ(e^v)) dv` over a window around the peak of
/// the log-integrand that leaves out less than `e^{-45}` of the peak mass.
pub fn levy_pi(spec: &LevyMeasureSpec, t: f64) -> Result<f64> {
    spec.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid("levy_pi needs t > 0"));
    }
    let d = spec.d as f64;
    let g = |v: f64| -> Result<f64> { Ok(d * v - t * levy_symbol_radial(spec, v.exp())?) };
    // Bracket the maximum of the concave log-integrand by an uphill walk.
    let mut x0 = -(t.ln()) / 2.0;
    let mut step = 2.0;
    let mut x1 = x0 + step;
    let g0 = g(x0)?;
    let mut g1 = g(x1)?;
    if g1 < g0 {
        std::mem::swap(&mut x0, &mut x1);
        g1 = g0;
        step = -step;
    }
    let (a, b) = loop {
        let x2 = x1 + step;
        if x2.abs() > 700.0 {
            return Err(Error::InvalidArgument("symbol does not grow: no cutoff found".into()));
        }
        let g2 = g(x2)?;
        if g2 < g1 {
            break (x0.min(x2), x0.max(x2));
        }
        x0 = x1;
        x1 = x2;
        g1 = g2;
        step *= 1.5;
    };
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut g1, mut g2) = (g(x1)?, g(x2)?);
    while hi - lo > 1e-3 {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + phi * (hi - lo);
            g2 = g(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - phi * (hi - lo);
            g1 = g(x1)?;
        }
    }
    let vstar = 0.5 * (lo + hi);
    let gstar = g(vstar)?;
    const DROP: f64 = 45.0;
    // Right edge: walk until the log-integrand has dropped by DROP.
    let mut vr = vstar;
    let mut gr = gstar;
    let mut slope_r = 0.0;
    let mut h = 0.5;
    while gr > gstar - DROP {
        let next = vr + h;
        if next > 700.0 {
            return Err(Error::InvalidArgument("symbol does not grow: no cutoff found".into()));
        }
        let gn = g(next)?;
        slope_r = (gn - gr) / h;
        vr = next;
        gr = gn;
        h *= 1.3;
    }
    if !(slope_r < 0.0) {
        return Err(Error::InvalidArgument("symbol does not grow: no cutoff found".into()));
    }
    // Left edge: the integrand behaves like e^{d v} there.
    let vl = vstar - (DROP + 5.0) / d;
    let scale = gstar;
    let f = |v: f64| match g(v) {
        Ok(x) => (x - scale).exp(),
        Err(_) => f64::NAN,
    };
    let opts = QuadOptions { rel_tol: 1e-11, abs_tol: 1e-300, max_subdivisions: 2000 };
    let core = integrate(f, vl, vr, opts)?;
    if !core.value.is_finite() {
        return Err(Error::QuadratureNotConverged { estimate: core.value, error: core.error });
    }
    // Tails: left ≤ e^{g(vl) - scale}/d (since tΦ ≥ 0), right ≤ e^{g(vr) - scale}/|slope| by concavity.
    let tails = ((g(vl)? - scale).exp() / d) + (gr - scale).exp() / slope_r.abs();
    let total = core.value + tails;
    let prefactor = sphere_area(spec.d) / (2.0 * PI).powf(d);
    Ok(prefactor * total * scale.exp())
}
