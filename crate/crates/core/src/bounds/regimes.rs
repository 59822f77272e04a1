//! Two-regime bounds with explicit constants.
//!
//! Both theorems start from the hinge form at a fixed σ and bound
//! `W ∫_{σ/W}^∞ π` separately on the low set `W ≤ 1/h` (large times only)
//! and the high set `W > 1/h` (small-time envelope up to `h`, tail beyond).
//! The constants below are the resulting suprema of the envelope, divided
//! by `c(σ)`.

use serde::{Deserialize, Serialize};

use super::field::PotentialField;
use super::report::{BoundReport, BoundValue};
use super::invariant_sum;
use crate::error::{invalid, Error, Result};
use crate::heatkernels::{upper_gamma_bound, HeatKernelModel};
use crate::weights::hinge_constant;

/// Hinge offset used by the power-law constants.
pub const TWO_REGIME_SIGMA: f64 = 1.0;
/// Largest hinge offset the exponential bound may select; bounds the admissible `A`.
pub const TWO_REGIME_SIGMA_MAX: f64 = 50.0;
/// Shell doublings tried before a radial sum is declared undecided (`+∞`).
pub const SHELL_MAX_DOUBLINGS: usize = 80;
const SHELL_DIVERGENCE_SUM: f64 = 1e12;
const CORE_RADIUS_MAX: u64 = 64;

#[derive(Clone, Copy, Debug)]
enum Large {
    Power { beta: f64, c: f64 },
    Exp { gamma: f64, a: f64, c: f64 },
}

/// `π(t) ≤ c_s t^{-α/2}` for `t ≤ h_e` and the large-time branch beyond.
#[derive(Clone, Copy, Debug)]
struct Envelope {
    alpha: f64,
    h_e: f64,
    c_s: f64,
    large: Large,
}

impl Envelope {
    fn from_model(m: &HeatKernelModel) -> Result<Self> {
        m.validate()?;
        match *m {
            HeatKernelModel::PowerEnvelope { alpha, beta, h, c_small, c_large } => {
                Ok(Self { alpha, h_e: h, c_s: c_small, large: Large::Power { beta, c: c_large } })
            }
            HeatKernelModel::ExpEnvelope { alpha, gamma_decay, a, h, c_small, c_exp } => {
                Ok(Self { alpha, h_e: h, c_s: c_small, large: Large::Exp { gamma: gamma_decay, a, c: c_exp } })
            }
            _ => Err(invalid("two-regime bounds need an envelope heat-kernel model")),
        }
    }

    fn large_at(&self, t: f64) -> f64 {
        match self.large {
            Large::Power { beta, c } => c * t.powf(-beta / 2.0),
            Large::Exp { gamma, a, c } => c * (-a * t.powf(gamma)).exp(),
        }
    }

    /// `sup_{0 < t ≤ h} π_env(t) t^{α/2}`.
    fn small_const(&self, h: f64) -> f64 {
        let mut k = self.c_s;
        if h > self.h_e {
            let f = |t: f64| self.large_at(t) * t.powf(self.alpha / 2.0);
            k = k.max(f(self.h_e)).max(f(h));
            // t^{α/2} e^{-a t^γ} peaks at t* = (α / (2aγ))^{1/γ}.
            if let Large::Exp { gamma, a, .. } = self.large {
                let ts = (self.alpha / (2.0 * a * gamma)).powf(1.0 / gamma);
                if ts > self.h_e && ts < h {
                    k = k.max(f(ts));
                }
            }
        }
        k
    }

    /// `sup_{t ≥ lo} π_env(t) t^{β/2}` (power branch).
    fn power_const(&self, lo: f64) -> f64 {
        let Large::Power { beta, c } = self.large else { unreachable!("power branch") };
        let mut k = c;
        if lo < self.h_e {
            let e = (beta - self.alpha) / 2.0;
            k = k.max(self.c_s * lo.powf(e)).max(self.c_s * self.h_e.powf(e));
        }
        k
    }

    /// `sup_{t ≥ lo} π_env(t) e^{a t^γ}` (exponential branch); the ratio
    /// `t^{-α/2} e^{a t^γ}` is quasi-convex, so endpoints suffice.
    fn exp_const(&self, lo: f64) -> f64 {
        let Large::Exp { gamma, a, c } = self.large else { unreachable!("exp branch") };
        let mut k = c;
        if lo < self.h_e {
            let f = |t: f64| self.c_s * t.powf(-self.alpha / 2.0) * (a * t.powf(gamma)).exp();
            k = k.max(f(lo)).max(f(self.h_e));
        }
        k
    }

    /// Upper bound on `∫_lo^∞ π_env`.
    fn tail(&self, lo: f64) -> f64 {
        let mut s = 0.0;
        let mut start = lo;
        if lo < self.h_e {
            let p = 1.0 - self.alpha / 2.0;
            s += if p == 0.0 {
                self.c_s * (self.h_e / lo).ln()
            } else {
                self.c_s * (self.h_e.powf(p) - lo.powf(p)) / p
            };
            start = self.h_e;
        }
        s + match self.large {
            Large::Power { beta, c } => c * start.powf(1.0 - beta / 2.0) / (beta / 2.0 - 1.0),
            Large::Exp { gamma, a, c } => {
                let g = upper_gamma_bound(1.0 / gamma, a * start.powf(gamma)).unwrap_or(f64::INFINITY);
                c * a.powf(-1.0 / gamma) * g / gamma
            }
        }
    }

    /// High-set coefficient before division by `c(σ)`, its power of `W`,
    /// and whether the `ln(1 + W)` factor applies.
    fn high_coef(&self, h: f64, sigma: f64) -> (f64, f64, bool) {
        let k0 = self.small_const(h);
        let th = self.tail(h);
        let a = self.alpha;
        if a < 2.0 {
            (k0 * h.powf(1.0 - a / 2.0) / (1.0 - a / 2.0) + th, 1.0, false)
        } else if a == 2.0 {
            // ln(hW/σ) ≤ ln(1+W) + ln(h/σ)₊, and ln(1+W) ≥ ln(1+1/h) on the high set.
            (k0 + (k0 * (h / sigma).ln().max(0.0) + th) / (1.0 + 1.0 / h).ln(), 1.0, true)
        } else {
            (k0 * sigma.powf(1.0 - a / 2.0) / (a / 2.0 - 1.0) + th * h.powf(a / 2.0 - 1.0), a / 2.0, false)
        }
    }
}

/// Derived constants of a two-regime bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoRegimeConstants {
    pub sigma: f64,
    pub c_sigma: f64,
    /// Multiplies `Σ_{W ≤ 1/h} W^{β/2}` or `Σ_{W ≤ 1/h} e^{-A W^{-γ}}`.
    pub low_coef: f64,
    /// Multiplies `Σ_{W > 1/h} b W^{high_power}`.
    pub high_coef: f64,
    pub high_power: f64,
    /// `b = ln(1 + W)` (local dimension 2) instead of `b = 1`.
    pub log_factor: bool,
}

impl TwoRegimeConstants {
    fn high_term(&self, w: f64) -> f64 {
        let b = if self.log_factor { w.ln_1p() } else { 1.0 };
        b * w.powf(self.high_power)
    }
}

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid("split parameter h must be finite and > 0"));
    }
    Ok(())
}

fn power_constants(env: &HeatKernelModel, h: f64) -> Result<(TwoRegimeConstants, f64)> {
    if let HeatKernelModel::PowerEnvelope { beta, .. } = env {
        if !(*beta > 2.0) {
            return Err(invalid("global dimension must exceed 2"));
        }
    }
    check_h(h)?;
    let e = Envelope::from_model(env)?;
    let Large::Power { beta, .. } = e.large else {
        return Err(invalid("two_regime_power needs a power-law envelope"));
    };
    let sigma = TWO_REGIME_SIGMA;
    let c = hinge_constant(sigma);
    let low = e.power_const(sigma * h) * sigma.powf(1.0 - beta / 2.0) / ((beta / 2.0 - 1.0) * c);
    let (hc, hp, log) = e.high_coef(h, sigma);
    Ok((TwoRegimeConstants { sigma, c_sigma: c, low_coef: low, high_coef: hc / c, high_power: hp, log_factor: log }, beta))
}

fn exp_constants(env: &HeatKernelModel, h: f64, big_a: f64) -> Result<(TwoRegimeConstants, f64)> {
    check_h(h)?;
    let e = Envelope::from_model(env)?;
    let Large::Exp { gamma, a, .. } = e.large else {
        return Err(invalid("two_regime_exp needs a stretched-exponential envelope"));
    };
    if !(big_a > 0.0 && big_a.is_finite()) {
        return Err(invalid("A must be finite and > 0"));
    }
    // The chain needs A ≤ (a/2) σ^γ.
    let sigma = (2.0 * big_a / a).powf(1.0 / gamma).max(1.0);
    if sigma > TWO_REGIME_SIGMA_MAX {
        let a_max = 0.5 * a * TWO_REGIME_SIGMA_MAX.powf(gamma);
        return Err(Error::Inadmissible(format!(
            "A = {big_a} needs sigma = {sigma:.3} > {TWO_REGIME_SIGMA_MAX}; maximal admissible A is {a_max:.6}"
        )));
    }
    let c = hinge_constant(sigma);
    let slack = (0.5 * a * sigma.powf(gamma) - big_a).max(0.0);
    let half = upper_gamma_bound(1.0 / gamma, 0.5 * a * (sigma * h).powf(gamma)).unwrap_or(f64::INFINITY)
        * (0.5 * a).powf(-1.0 / gamma)
        / gamma;
    // W e^{-slack W^{-γ}} is increasing, so its maximum on W ≤ 1/h sits at 1/h.
    let low = e.exp_const(sigma * h) * half * (-slack * h.powf(gamma)).exp() / (h * c);
    let (hc, hp, log) = e.high_coef(h, sigma);
    Ok((TwoRegimeConstants { sigma, c_sigma: c, low_coef: low, high_coef: hc / c, high_power: hp, log_factor: log }, gamma))
}

fn two_regime_report(
    name: &str,
    k: &TwoRegimeConstants,
    pot: &PotentialField,
    h: f64,
    low_term: impl Fn(f64) -> f64,
) -> BoundReport {
    let cut = 1.0 / h;
    let (mut lows, mut highs) = (Vec::new(), Vec::new());
    let mut n_high = 0;
    for s in pot.sites() {
        if s.w > cut {
            n_high += 1;
            highs.push(s.weight * k.high_term(s.w));
        } else if s.w > 0.0 {
            lows.push(s.weight * low_term(s.w));
        }
    }
    let low = k.low_coef * invariant_sum(lows);
    let high = k.high_coef * invariant_sum(highs);
    let mut r = BoundReport::new(name, low + high)
        .part("low", low)
        .part("high", high)
        .param("h", h)
        .param("sigma", k.sigma)
        .param("low_coef", k.low_coef)
        .param("high_coef", k.high_coef);
    r.n_high = Some(n_high);
    if let Some(n) = pot.note() {
        r.diagnostics.push(n);
    }
    r
}

/// Power-law two-regime bound
/// `C_low Σ_{W ≤ 1/h} W^{β/2} + C_high Σ_{W > 1/h} b W^{max(α/2, 1)}`
/// (exponent `α/2` when `α > 2`), with constants derived from a
/// [`HeatKernelModel::PowerEnvelope`].
pub fn two_regime_power(env: &HeatKernelModel, pot: &PotentialField, h: f64) -> Result<BoundReport> {
    let (k, beta) = power_constants(env, h)?;
    Ok(two_regime_report("two_regime_power", &k, pot, h, |w| w.powf(beta / 2.0)).param("beta", beta))
}

/// Stretched-exponential two-regime bound
/// `C_low Σ_{W ≤ 1/h} e^{-A W^{-γ}} + C_high Σ_{W > 1/h} b W^{max(α/2, 1)}`
/// from a [`HeatKernelModel::ExpEnvelope`]. σ is chosen so that
/// `A ≤ (a/2) σ^γ`; an `A` beyond the largest admissible value is rejected.
pub fn two_regime_exp(env: &HeatKernelModel, pot: &PotentialField, h: f64, big_a: f64) -> Result<BoundReport> {
    let (k, gamma) = exp_constants(env, h, big_a)?;
    Ok(two_regime_report("two_regime_exp", &k, pot, h, |w| (-big_a * w.powf(-gamma)).exp())
        .param("A", big_a)
        .param("gamma_decay", gamma))
}

/// Radially decreasing potentials `W(x)` on all of `Z³`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadialField {
    /// `|x|^{-s}` away from the origin, `0` at the origin.
    InversePower { s: f64 },
    /// `(ln(e + |x|))^{-σ}`.
    LogPower { sigma: f64 },
}

impl RadialField {
    fn validate(&self) -> Result<()> {
        let p = match self {
            Self::InversePower { s } => *s,
            Self::LogPower { sigma } => *sigma,
        };
        if !(p > 0.0 && p.is_finite()) {
            return Err(invalid("radial field exponent must be finite and > 0"));
        }
        Ok(())
    }

    /// `W` at Euclidean radius `r`.
    pub fn w(&self, r: f64) -> f64 {
        match self {
            Self::InversePower { s } => {
                if r == 0.0 {
                    0.0
                } else {
                    r.powf(-s)
                }
            }
            Self::LogPower { sigma } => (std::f64::consts::E + r).ln().powf(-sigma),
        }
    }
}

/// Partial-sum analysis of `Σ_{x ∈ Z³} φ(W(x))` over sup-norm shells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellOutcome {
    /// Upper estimate of the low-set sum, or `+∞` when divergence was detected.
    pub low_sum: BoundValue,
    /// Exact high-set sum (the high set lies inside the core box).
    pub high_sum: f64,
    pub core_radius: u64,
    pub doublings: usize,
    /// Shell upper sums `count · φ(W(R_lo))`, in order.
    pub shell_upper: Vec<f64>,
    pub diagnostics: Vec<String>,
}

/// Sums `low(W)` over the low set and `high(W)` over the high set `W > 1/h`
/// of a radial field on `Z³`.
///
/// Sites with `|x|_∞ < R₀` are summed exactly, where `R₀` is the first power
/// of two with `W(R₀) ≤ 1/h`. Beyond, shell `k` holds the sites with
/// `R₀2^k ≤ |x|_∞ < R₀2^{k+1}`; since `low ∘ W` decreases with `|x|`, the shell
/// sum lies between `count·low(W(√3(R_hi - 1)))` and `count·low(W(R_lo))`.
/// Convergence is declared once three successive upper ratios are below 1
/// and non-increasing (the tail is then summed geometrically at the last
/// ratio); divergence once three successive lower ratios are at least 1, or
/// the lower partial sum exceeds 1e12. Undecided after
/// [`SHELL_MAX_DOUBLINGS`] doublings reports `+∞`.
pub fn shell_sum(
    field: &RadialField,
    h: f64,
    low: &dyn Fn(f64) -> f64,
    high: &dyn Fn(f64) -> f64,
) -> Result<ShellOutcome> {
    field.validate()?;
    check_h(h)?;
    let cut = 1.0 / h;
    let mut r0: u64 = 2;
    while field.w(r0 as f64) > cut {
        r0 *= 2;
        if r0 > CORE_RADIUS_MAX {
            return Err(Error::TooLarge(format!("high set extends beyond |x| = {CORE_RADIUS_MAX}")));
        }
    }
    let m = r0 as i64 - 1;
    let (mut lows, mut highs) = (Vec::new(), Vec::new());
    for x in -m..=m {
        for y in -m..=m {
            for z in -m..=m {
                let w = field.w(((x * x + y * y + z * z) as f64).sqrt());
                if w > cut {
                    highs.push(high(w));
                } else if w > 0.0 {
                    lows.push(low(w));
                }
            }
        }
    }
    let core_low = invariant_sum(lows);
    let high_sum = invariant_sum(highs);
    let mut upper: Vec<f64> = Vec::new();
    let mut lower: Vec<f64> = Vec::new();
    let mut diagnostics = Vec::new();
    let mut result = None;
    for k in 0..SHELL_MAX_DOUBLINGS {
        let r_lo = r0 as f64 * 2f64.powi(k as i32);
        let r_hi = 2.0 * r_lo;
        let count = (2.0 * r_hi - 1.0).powi(3) - (2.0 * r_lo - 1.0).powi(3);
        let hi = count * low(field.w(r_lo));
        let lo = count * low(field.w(3f64.sqrt() * (r_hi - 1.0)));
        upper.push(hi);
        lower.push(lo);
        if hi == 0.0 {
            result = Some(BoundValue::from_f64(core_low + upper.iter().sum::<f64>()));
            diagnostics.push(format!("shell terms vanish from doubling {k}"));
            break;
        }
        if core_low + lower.iter().sum::<f64>() > SHELL_DIVERGENCE_SUM {
            diagnostics.push(format!("lower partial sum exceeds {SHELL_DIVERGENCE_SUM:e} at doubling {k}"));
            result = Some(BoundValue::Infinite);
            break;
        }
        if k >= 3 {
            let ru: Vec<f64> = (k - 2..=k).map(|j| upper[j] / upper[j - 1]).collect();
            let rl: Vec<f64> = (k - 2..=k).map(|j| lower[j] / lower[j - 1]).collect();
            if ru.iter().all(|&r| r < 1.0) && ru[0] >= ru[1] && ru[1] >= ru[2] {
                let r = ru[2];
                let tail = hi * r / (1.0 - r);
                diagnostics.push(format!("converged at doubling {k}: upper ratio {r:.6}, geometric tail {tail:.6e}"));
                result = Some(BoundValue::from_f64(core_low + upper.iter().sum::<f64>() + tail));
                break;
            }
            if rl.iter().all(|&r| r >= 1.0) {
                diagnostics.push(format!("diverging at doubling {k}: lower ratios {:.6}, {:.6}, {:.6}", rl[0], rl[1], rl[2]));
                result = Some(BoundValue::Infinite);
                break;
            }
        }
    }
    let low_sum = result.unwrap_or_else(|| {
        diagnostics.push(format!("undecided after {SHELL_MAX_DOUBLINGS} doublings"));
        BoundValue::Infinite
    });
    Ok(ShellOutcome { low_sum, high_sum, core_radius: r0, doublings: upper.len(), shell_upper: upper, diagnostics })
}

fn radial_report(name: &str, k: &TwoRegimeConstants, out: ShellOutcome, h: f64) -> BoundReport {
    let low = k.low_coef * out.low_sum.as_f64();
    let high = k.high_coef * out.high_sum;
    let mut r = BoundReport::new(name, low + high)
        .part("low", low)
        .part("high", high)
        .param("h", h)
        .param("sigma", k.sigma)
        .param("low_coef", k.low_coef)
        .param("high_coef", k.high_coef)
        .param("core_radius", out.core_radius as f64)
        .param("doublings", out.doublings as f64);
    // The shell tail rests on the observed ratio trend, not on a proof.
    r.certified = false;
    r.diagnostics = out.diagnostics;
    r
}

/// [`two_regime_power`] for a radial field on all of `Z³`.
pub fn two_regime_power_radial(env: &HeatKernelModel, field: &RadialField, h: f64) -> Result<BoundReport> {
    let (k, beta) = power_constants(env, h)?;
    let out = shell_sum(field, h, &|w| w.powf(beta / 2.0), &|w| k.high_term(w))?;
    Ok(radial_report("two_regime_power_radial", &k, out, h).param("beta", beta))
}

/// [`two_regime_exp`] for a radial field on all of `Z³`.
pub fn two_regime_exp_radial(env: &HeatKernelModel, field: &RadialField, h: f64, big_a: f64) -> Result<BoundReport> {
    let (k, gamma) = exp_constants(env, h, big_a)?;
    let out = shell_sum(field, h, &|w| (-big_a * w.powf(-gamma)).exp(), &|w| k.high_term(w))?;
    Ok(radial_report("two_regime_exp_radial", &k, out, h).param("A", big_a).param("gamma_decay", gamma))
}

/// Edge bracket for a quantum graph with edgewise constant `W`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumGraphBounds {
    /// `Σ_{v > 1/h} √(2v)/π`.
    pub lower: f64,
    pub upper: BoundReport,
}

/// Lower sum `Σ_{v > 1/h} √(2v)/π` and upper bound
/// `Σ_{v > 1/h} (√(2v)/π + 1) + C_low Σ_{v ≤ 1/h} v^{d/2}`, the latter from a
/// power envelope with local dimension 1 and global dimension `d`.
pub fn quantum_graph_edge_bounds(edge_w: &[f64], d: usize, h: f64, env: &HeatKernelModel) -> Result<QuantumGraphBounds> {
    if d < 3 {
        return Err(invalid("quantum graph bounds need d >= 3 (global dimension must exceed 2)"));
    }
    match env {
        HeatKernelModel::PowerEnvelope { alpha, beta, .. } if *alpha == 1.0 && *beta == d as f64 => {}
        _ => return Err(invalid("quantum graph bounds need a power envelope with alpha = 1 and beta = d")),
    }
    let (k, _) = power_constants(env, h)?;
    let cut = 1.0 / h;
    let (mut lower, mut upper_high, mut small) = (Vec::new(), Vec::new(), Vec::new());
    let mut n_high = 0;
    for (i, &v) in edge_w.iter().enumerate() {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(invalid(format!("edge {i}: W must be finite and >= 0")));
        }
        if v > cut {
            let s = (2.0 * v).sqrt() / std::f64::consts::PI;
            lower.push(s);
            upper_high.push(s + 1.0);
            n_high += 1;
        } else if v > 0.0 {
            small.push(v.powf(d as f64 / 2.0));
        }
    }
    let high = invariant_sum(upper_high);
    let low = k.low_coef * invariant_sum(small);
    let mut upper = BoundReport::new("quantum_graph_edge_upper", high + low)
        .part("high_edges", high)
        .part("low_edges", low)
        .param("h", h)
        .param("d", d as f64)
        .param("low_coef", k.low_coef);
    upper.n_high = Some(n_high);
    Ok(QuantumGraphBounds { lower: invariant_sum(lower), upper })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice3_env() -> HeatKernelModel {
        HeatKernelModel::PowerEnvelope { alpha: 0.0, beta: 3.0, h: 1.0, c_small: 1.0, c_large: 0.1 }
    }

    #[test]
    fn power_tail_envelope_integral() {
        let e = Envelope::from_model(&lattice3_env()).unwrap();
        // ∫_0.5^1 1 dt + ∫_1^∞ 0.1 t^{-3/2} dt = 0.5 + 0.2.
        assert!((e.tail(0.5) - 0.7).abs() < 1e-14);
        assert_eq!(e.small_const(0.5), 1.0);
        assert!((e.power_const(0.25) - 1.0f64.max(0.25f64.powf(1.5))).abs() < 1e-15);
    }

    #[test]
    fn log_factor_only_at_local_dimension_two() {
        let pot = PotentialField::discrete(&[5.0, 0.1]).unwrap();
        let with = HeatKernelModel::PowerEnvelope { alpha: 2.0, beta: 3.0, h: 1.0, c_small: 1.0, c_large: 1.0 };
        let r = two_regime_power(&with, &pot, 1.0).unwrap();
        let (k, _) = power_constants(&with, 1.0).unwrap();
        assert!(k.log_factor);
        let high = r.decomposition.iter().find(|p| p.label == "high").unwrap().value.as_f64();
        assert!((high - k.high_coef * 5.0 * 6f64.ln()).abs() < 1e-12 * high);
    }

    #[test]
    fn exp_admissibility_reports_maximal_a() {
        let env = HeatKernelModel::ExpEnvelope { alpha: 0.0, gamma_decay: 0.6, a: 1.0, h: 1.0, c_small: 1.0, c_exp: 1.0 };
        let err = two_regime_exp(&env, &PotentialField::discrete(&[0.5]).unwrap(), 1.0, 100.0).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Inadmissible(_)) && msg.contains("maximal admissible A"), "{msg}");
    }
}
