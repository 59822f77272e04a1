//! Providers of the heat-kernel diagonal `π(t) ≥ p₀(t, x, x)`.
//!
//! Closed forms (lattice), quadrature (Lévy, free group), Poisson
//! subordination of walk tables, Monte-Carlo estimators (affine and
//! Heisenberg groups, Anderson ensembles) and two-regime envelopes.

mod anderson;
mod freegroup;
mod lattice;
mod levy;
mod montecarlo;
mod subordination;

pub use anderson::{anderson_ep0, anderson_ep0_curve, ANDERSON_MAX_SITES};
pub use freegroup::{free_group_pi, free_group_resolvent, free_group_roots, FreeGroupModel};
pub use lattice::{
    box_center_green, lattice_pi, DirichletBoxKernel, lattice_pi_majorant, lattice_resolvent, lattice_resolvent_midpoint,
};
pub use levy::{levy_pi, levy_symbol, levy_symbol_radial, LevyMeasureSpec, LevyTail};
pub use montecarlo::{
    affine_path_functional, affine_pi_mc, heisenberg_covariance_det, heisenberg_path_functional,
    heisenberg_pi_mc, McEstimate, MOM_BLOCKS,
};
pub use subordination::{required_steps, subordinated_pi, subordinated_pi_with_tail, SubordinatedValue};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::groupwalks::WalkReturnTable;
use crate::stochastics::ln_gamma;

/// Largest allowed ratio between the two envelope branches at `t = h`.
pub const ENVELOPE_CONTINUITY_FACTOR: f64 = 10.0;

/// One row of a Monte-Carlo table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McPoint {
    pub t: f64,
    pub estimate: f64,
    pub stderr: f64,
}

/// A source of `π(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HeatKernelModel {
    /// `Z^d` with the lattice Laplacian.
    Lattice { d: usize },
    /// Symmetric Lévy generator with an isotropic density.
    Levy { spec: LevyMeasureSpec },
    /// Free group, for the shifted operator `H₀ = -Δ_Γ - γ`: `π(t) = e^{γt} π_Γ(t)`.
    FreeGroup { d: usize },
    /// Poisson subordination of a discrete walk table.
    Subordinated { table: WalkReturnTable, rate: f64 },
    /// `c_small t^{-α/2}` for `t ≤ h`, `c_large t^{-β/2}` beyond.
    PowerEnvelope { alpha: f64, beta: f64, h: f64, c_small: f64, c_large: f64 },
    /// `c_small t^{-α/2}` for `t ≤ h`, `c_exp e^{-a t^{γ}}` beyond.
    ExpEnvelope { alpha: f64, gamma_decay: f64, a: f64, h: f64, c_small: f64, c_exp: f64 },
    /// Estimates on a time grid, interpolated linearly in `(ln t, ln π)`.
    McTable { grid: Vec<McPoint> },
}

/// Upper bounds on `∫_T^∞ π` and `∫_T^∞ π/t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    pub integral: f64,
    pub integral_over_t: f64,
    /// True when both values are rigorous upper bounds.
    pub certified: bool,
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

impl HeatKernelModel {
    /// Quantum-graph envelope: local dimension 1, global dimension `d`.
    pub fn quantum_graph(d: usize, h: f64, c_small: f64, c_large: f64) -> Result<Self> {
        let m = Self::PowerEnvelope { alpha: 1.0, beta: d as f64, h, c_small, c_large };
        m.validate()?;
        Ok(m)
    }

    /// Lobachevsky plane: `c₁/t` for small `t`; for `t > h` the large-time
    /// shape `c₂ e^{-t/4} t^{-3/2}` is majorized by `c₂ h^{-3/2} e^{-t/4}`.
    pub fn lobachevsky(c1: f64, c2: f64, h: f64) -> Result<Self> {
        let m = Self::ExpEnvelope { alpha: 2.0, gamma_decay: 1.0, a: 0.25, h, c_small: c1, c_exp: c2 * h.powf(-1.5) };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Lattice { d } => {
                if *d == 0 {
                    return Err(invalid("lattice model needs d >= 1"));
                }
            }
            Self::Levy { spec } => spec.validate()?,
            Self::FreeGroup { d } => {
                FreeGroupModel::new(*d)?;
            }
            Self::Subordinated { rate, .. } => {
                if !positive(*rate) {
                    return Err(invalid("subordination rate must be positive"));
                }
            }
            Self::PowerEnvelope { alpha, beta, h, c_small, c_large } => {
                if !(*alpha >= 0.0) || !(*beta > 2.0) || !positive(*h) || !positive(*c_small) || !positive(*c_large) {
                    return Err(invalid("power envelope needs alpha >= 0, beta > 2 and positive h, c_small, c_large"));
                }
                check_continuity(c_small * h.powf(-alpha / 2.0), c_large * h.powf(-beta / 2.0))?;
            }
            Self::ExpEnvelope { alpha, gamma_decay, a, h, c_small, c_exp } => {
                if !(*alpha >= 0.0) || !positive(*gamma_decay) || !positive(*a) || !positive(*h) {
                    return Err(invalid("exp envelope needs alpha >= 0 and positive gamma_decay, a, h"));
                }
                if !positive(*c_small) || !positive(*c_exp) {
                    return Err(invalid("exp envelope needs positive constants"));
                }
                check_continuity(c_small * h.powf(-alpha / 2.0), c_exp * (-a * h.powf(*gamma_decay)).exp())?;
            }
            Self::McTable { grid } => {
                if grid.len() < 2 {
                    return Err(invalid("Monte-Carlo table needs at least two rows"));
                }
                for w in grid.windows(2) {
                    if !(w[1].t > w[0].t) {
                        return Err(invalid("Monte-Carlo table times must increase"));
                    }
                }
                if grid.iter().any(|p| !positive(p.t) || !positive(p.estimate) || !(p.stderr >= 0.0)) {
                    return Err(invalid("Monte-Carlo rows need t > 0, estimate > 0, stderr >= 0"));
                }
            }
        }
        Ok(())
    }

    pub fn is_envelope(&self) -> bool {
        matches!(self, Self::PowerEnvelope { .. } | Self::ExpEnvelope { .. })
    }

    /// Kinds whose values are diagonal heat kernels, hence non-increasing in `t`.
    pub fn is_monotone(&self) -> bool {
        matches!(self, Self::Lattice { .. } | Self::FreeGroup { .. } | Self::Subordinated { .. } | Self::Levy { .. })
    }

    /// `π(t)` for `t > 0` (also `t = 0` where finite).
    pub fn pi(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(invalid("pi(t) needs finite t >= 0"));
        }
        match self {
            Self::Lattice { d } => Ok(lattice_pi(*d, t)),
            Self::Levy { spec } => levy_pi(spec, t),
            Self::FreeGroup { d } => Ok(FreeGroupModel::new(*d)?.shifted_pi(t)),
            Self::Subordinated { table, rate } => subordinated_pi(table, *rate, t),
            Self::PowerEnvelope { .. } | Self::ExpEnvelope { .. } => envelope_pi(self, t),
            Self::McTable { grid } => Ok(mc_interpolate(grid, t)),
        }
    }

    /// Bounds on `∫_T^∞ π` and `∫_T^∞ π/t` for `T > 0`.
    ///
    /// Certified for lattice (via [`lattice_pi_majorant`]), free-group and
    /// envelope kinds; the other kinds extrapolate the local power law
    /// through `π(T/2)` and `π(T)` and report `certified = false`.
    pub fn tail_bound(&self, big_t: f64) -> Result<TailBound> {
        let inf = TailBound { integral: f64::INFINITY, integral_over_t: f64::INFINITY, certified: false };
        match self {
            Self::Lattice { d } => {
                let dd = *d as f64;
                let c = ((4.0 * std::f64::consts::PI).powf(-0.5) * (1.0 + 1.0 / (8.0 * big_t))).powf(dd);
                let integral = if *d > 2 { c * big_t.powf(1.0 - dd / 2.0) / (dd / 2.0 - 1.0) } else { f64::INFINITY };
                Ok(TailBound { integral, integral_over_t: c * (2.0 / dd) * big_t.powf(-dd / 2.0), certified: true })
            }
            Self::FreeGroup { d } => {
                let c = FreeGroupModel::new(*d)?.shifted_majorant_constant();
                Ok(TailBound {
                    integral: 2.0 * c * big_t.powf(-0.5),
                    integral_over_t: (2.0 / 3.0) * c * big_t.powf(-1.5),
                    certified: true,
                })
            }
            Self::PowerEnvelope { beta, h, c_large, .. } if big_t >= *h => {
                let p = beta / 2.0;
                Ok(TailBound {
                    integral: c_large * big_t.powf(1.0 - p) / (p - 1.0),
                    integral_over_t: c_large * big_t.powf(-p) / p,
                    certified: true,
                })
            }
            Self::ExpEnvelope { gamma_decay, a, h, c_exp, .. } if big_t >= *h => {
                // ∫_T^∞ e^{-a t^γ} dt = γ^{-1} a^{-1/γ} Γ(1/γ, a T^γ).
                let s = 1.0 / gamma_decay;
                let x = a * big_t.powf(*gamma_decay);
                let Some(g) = upper_gamma_bound(s, x) else { return Ok(inf) };
                let integral = c_exp * s * a.powf(-s) * g;
                Ok(TailBound { integral, integral_over_t: integral / big_t, certified: true })
            }
            Self::PowerEnvelope { .. } | Self::ExpEnvelope { .. } => Ok(inf),
            _ => {
                let p1 = self.pi(big_t)?;
                let p0 = self.pi(0.5 * big_t)?;
                let expo = (p0 / p1).log2();
                if !(expo > 1.0) || !expo.is_finite() {
                    return Ok(TailBound { integral: f64::INFINITY, integral_over_t: p1 / expo.max(1e-300), certified: false });
                }
                Ok(TailBound {
                    integral: p1 * big_t / (expo - 1.0),
                    integral_over_t: p1 / expo,
                    certified: false,
                })
            }
        }
    }
}

fn check_continuity(left: f64, right: f64) -> Result<()> {
    let ratio = left.max(right) / left.min(right);
    if !(ratio <= ENVELOPE_CONTINUITY_FACTOR) {
        return Err(invalid(format!(
            "envelope branches differ by a factor {ratio:.3e} at t = h (limit {ENVELOPE_CONTINUITY_FACTOR})"
        )));
    }
    Ok(())
}

/// Upper bound on `Γ(s, x)`: `x^{s-1} e^{-x}` for `s ≤ 1`, and
/// `x^{s-1} e^{-x} / (1 - (s-1)/x)` for `s > 1`, `x > s - 1`.
pub(crate) fn upper_gamma_bound(s: f64, x: f64) -> Option<f64> {
    let base = ((s - 1.0) * x.ln() - x).exp();
    if s <= 1.0 {
        Some(base)
    } else if x > s - 1.0 {
        Some(base / (1.0 - (s - 1.0) / x))
    } else {
        // Γ(s, x) ≤ Γ(s) always.
        Some(ln_gamma(s).exp())
    }
}

fn mc_interpolate(grid: &[McPoint], t: f64) -> f64 {
    let lt = t.max(f64::MIN_POSITIVE).ln();
    let idx = match grid.iter().position(|p| p.t >= t) {
        Some(0) => 1,
        Some(i) => i,
        None => grid.len() - 1,
    };
    let (a, b) = (&grid[idx - 1], &grid[idx]);
    let (la, lb) = (a.t.ln(), b.t.ln());
    let slope = (b.estimate.ln() - a.estimate.ln()) / (lb - la);
    (a.estimate.ln() + slope * (lt - la)).exp()
}

/// Envelope value: `c_small t^{-α/2}` for `t ≤ h`, the large-time branch beyond.
pub fn envelope_pi(model: &HeatKernelModel, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid("envelope_pi needs t > 0"));
    }
    match model {
        HeatKernelModel::PowerEnvelope { alpha, beta, h, c_small, c_large } => Ok(if t <= *h {
            c_small * t.powf(-alpha / 2.0)
        } else {
            c_large * t.powf(-beta / 2.0)
        }),
        HeatKernelModel::ExpEnvelope { alpha, gamma_decay, a, h, c_small, c_exp } => Ok(if t <= *h {
            c_small * t.powf(-alpha / 2.0)
        } else {
            c_exp * (-a * t.powf(*gamma_decay)).exp()
        }),
        _ => Err(invalid("envelope_pi needs an envelope model")),
    }
}

/// Writes Monte-Carlo rows as CSV with columns `t,estimate,stderr`.
pub fn write_mc_table_csv<W: std::io::Write>(grid: &[McPoint], w: W) -> std::io::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["t", "estimate", "stderr"])?;
    for p in grid {
        wr.write_record([format!("{:.17e}", p.t), format!("{:.17e}", p.estimate), format!("{:.17e}", p.stderr)])?;
    }
    wr.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_envelope_single_law() {
        let m = HeatKernelModel::PowerEnvelope { alpha: 3.0, beta: 3.0, h: 2.0, c_small: 1.5, c_large: 1.5 };
        m.validate().unwrap();
        for t in [0.5, 1.999, 2.0, 2.001, 9.0] {
            assert!((envelope_pi(&m, t).unwrap() - 1.5 * t.powf(-1.5)).abs() < 1e-15);
        }
    }

    #[test]
    fn discontinuous_envelope_rejected() {
        let m = HeatKernelModel::PowerEnvelope { alpha: 1.0, beta: 3.0, h: 1.0, c_small: 1.0, c_large: 100.0 };
        assert!(m.validate().is_err());
    }

    #[test]
    fn model_json_round_trip() {
        let m = HeatKernelModel::Levy { spec: LevyMeasureSpec::log_tail(1, 0.8, 1.0, 2.0, 1.0).unwrap() };
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"kind\":\"levy\""));
        let back: HeatKernelModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<HeatKernelModel>(r#"{"kind":"lattice","d":3,"extra":1}"#).is_err());
    }

    #[test]
    fn lattice_tail_is_an_upper_bound() {
        let m = HeatKernelModel::Lattice { d: 3 };
        let tb = m.tail_bound(50.0).unwrap();
        let direct = crate::stochastics::integrate(|u: f64| lattice_pi(3, 50.0 / (u * u)) * 100.0 / (u * u * u), 1e-9, 1.0, Default::default()).unwrap();
        assert!(tb.integral >= direct.value && tb.integral < 1.05 * direct.value);
    }

    #[test]
    fn mc_interpolation_hits_nodes() {
        let grid = vec![
            McPoint { t: 1.0, estimate: 0.5, stderr: 0.0 },
            McPoint { t: 4.0, estimate: 0.125, stderr: 0.0 },
        ];
        let m = HeatKernelModel::McTable { grid };
        assert!((m.pi(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((m.pi(2.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((m.pi(16.0).unwrap() - 0.125 / 4.0).abs() < 1e-15);
    }
}
