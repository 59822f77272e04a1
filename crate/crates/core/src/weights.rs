//! Convex weights `G`, their transform `g(1) = ∫ z⁻¹ G(z) e^{-z} dz`, and the
//! hinge constant `c(σ)`.
//!
//! Only weights that are linear at infinity are representable: the hinge
//! `(z - σ)₊` and continuous piecewise-linear convex functions with a finite
//! terminal slope.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::stochastics::{integrate, integrate_to_infinity, QuadOptions, Singularity, TailEnvelope};

const G1_REL_TOL: f64 = 1e-12;

/// Serialized form of a weight; validated into [`GWeight`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GWeightSpec {
    Hinge { sigma: f64 },
    Piecewise { knots: Vec<[f64; 2]>, slope: f64 },
}

/// One linear piece `G(z) = intercept + slope·z` on `[z_start, z_end)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearPiece {
    pub z_start: f64,
    pub z_end: f64,
    pub intercept: f64,
    pub slope: f64,
}

/// A validated convex weight with its cached transform value `g(1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GWeightSpec", into = "GWeightSpec")]
pub struct GWeight {
    spec: GWeightSpec,
    pieces: Vec<LinearPiece>,
    g1: f64,
}

impl TryFrom<GWeightSpec> for GWeight {
    type Error = Error;

    fn try_from(spec: GWeightSpec) -> Result<Self> {
        match spec {
            GWeightSpec::Hinge { sigma } => GWeight::hinge(sigma),
            GWeightSpec::Piecewise { knots, slope } => GWeight::piecewise(knots, slope),
        }
    }
}

impl From<GWeight> for GWeightSpec {
    fn from(g: GWeight) -> Self {
        g.spec
    }
}

impl GWeight {
    /// `G(z) = (z - σ)₊`.
    pub fn hinge(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(invalid(format!("hinge sigma must be finite and >= 0, got {sigma}")));
        }
        let pieces = vec![LinearPiece {
            z_start: sigma,
            z_end: f64::INFINITY,
            intercept: -sigma,
            slope: 1.0,
        }];
        Ok(Self { spec: GWeightSpec::Hinge { sigma }, pieces, g1: hinge_constant(sigma) })
    }

    /// Piecewise-linear weight through `knots`, continued with `slope` after the last knot.
    ///
    /// `G ≡ 0` before the first knot, which must carry `G = 0`. Slopes must be
    /// non-negative and non-decreasing, including the terminal slope.
    pub fn piecewise(knots: Vec<[f64; 2]>, slope: f64) -> Result<Self> {
        if knots.is_empty() {
            return Err(invalid("piecewise weight needs at least one knot"));
        }
        if !(slope > 0.0 && slope.is_finite()) {
            return Err(invalid(format!("terminal slope must be finite and > 0, got {slope}")));
        }
        for (i, k) in knots.iter().enumerate() {
            if !(k[0].is_finite() && k[1].is_finite()) || k[0] < 0.0 {
                return Err(invalid(format!("knot {i} is not a finite point with z >= 0")));
            }
            if i > 0 && k[0] <= knots[i - 1][0] {
                return Err(invalid(format!("knot {i} does not increase in z")));
            }
        }
        if knots[0][1] != 0.0 {
            return Err(Error::Divergent(format!(
                "knot 0 at z = {} has G = {} != 0, so G(z)/z is not integrable at 0",
                knots[0][0], knots[0][1]
            )));
        }
        let mut pieces = Vec::with_capacity(knots.len());
        let mut prev_slope = 0.0_f64;
        for i in 0..knots.len() {
            let [z0, g0] = knots[i];
            let (z1, s) = if i + 1 < knots.len() {
                let [z1, g1] = knots[i + 1];
                (z1, (g1 - g0) / (z1 - z0))
            } else {
                (f64::INFINITY, slope)
            };
            if s < prev_slope - 1e-12 * prev_slope.abs().max(1.0) {
                return Err(invalid(format!("weight is not convex at knot {i}")));
            }
            if s < 0.0 {
                return Err(invalid(format!("weight decreases after knot {i}")));
            }
            prev_slope = s;
            pieces.push(LinearPiece { z_start: z0, z_end: z1, intercept: g0 - s * z0, slope: s });
        }
        let g1 = piecewise_g1(&pieces)?;
        if !(g1 > 0.0 && g1.is_finite()) {
            return Err(invalid(format!("g(1) = {g1} is not positive and finite")));
        }
        Ok(Self { spec: GWeightSpec::Piecewise { knots, slope }, pieces, g1 })
    }

    pub fn spec(&self) -> &GWeightSpec {
        &self.spec
    }

    /// The cached transform value `g(1)`.
    pub fn g1(&self) -> f64 {
        self.g1
    }

    /// Hinge offset σ, if this is a hinge weight.
    pub fn hinge_sigma(&self) -> Option<f64> {
        match self.spec {
            GWeightSpec::Hinge { sigma } => Some(sigma),
            GWeightSpec::Piecewise { .. } => None,
        }
    }

    /// Linear pieces covering the support of `G`, in increasing `z`.
    pub fn pieces(&self) -> &[LinearPiece] {
        &self.pieces
    }

    pub fn eval(&self, z: f64) -> f64 {
        let first = &self.pieces[0];
        if z <= first.z_start {
            return 0.0;
        }
        let p = self
            .pieces
            .iter()
            .rev()
            .find(|p| z >= p.z_start)
            .expect("z above first knot");
        p.intercept + p.slope * z
    }
}

fn piecewise_g1(pieces: &[LinearPiece]) -> Result<f64> {
    let opts = QuadOptions { rel_tol: G1_REL_TOL, abs_tol: 1e-16, max_subdivisions: 4000 };
    let mut total = 0.0;
    for p in pieces {
        let f = |z: f64| (p.intercept / z + p.slope) * (-z).exp();
        let r = if p.z_end.is_finite() {
            let sing = if p.z_start == 0.0 { Singularity::Left } else { Singularity::None };
            if p.z_start == 0.0 && p.intercept != 0.0 {
                return Err(Error::Divergent("first piece has G(0) != 0".into()));
            }
            match sing {
                Singularity::Left => integrate(|z: f64| p.slope * (-z).exp(), 0.0, p.z_end, opts)?,
                _ => integrate(f, p.z_start, p.z_end, opts)?,
            }
        } else {
            let scale = if p.z_start > 0.0 {
                p.slope + p.intercept.abs() / p.z_start
            } else {
                p.slope
            };
            let env = TailEnvelope::Exponential { scale, rate: 1.0 };
            if p.z_start == 0.0 {
                integrate_to_infinity(
                    |z: f64| p.slope * (-z).exp(),
                    0.0,
                    &env,
                    Singularity::None,
                    opts,
                )?
            } else {
                integrate_to_infinity(f, p.z_start, &env, Singularity::None, opts)?
            }
        };
        total += r.value;
    }
    Ok(total)
}

/// `g(1) = ∫₀^∞ z⁻¹ G(z) e^{-z} dz` for a validated weight.
pub fn g_weight(g: &GWeight) -> f64 {
    g.g1()
}

/// `c(σ) = e^{-σ} ∫₀^∞ z e^{-z} / (z + σ) dz`; equals `g(1)` for the hinge at σ.
///
/// Panics on negative or non-finite σ.
pub fn hinge_constant(sigma: f64) -> f64 {
    assert!(sigma >= 0.0 && sigma.is_finite(), "hinge sigma must be finite and >= 0");
    if sigma == 0.0 {
        return 1.0;
    }
    let opts = QuadOptions { rel_tol: G1_REL_TOL, abs_tol: 0.0, max_subdivisions: 4000 };
    let env = TailEnvelope::Exponential { scale: 1.0, rate: 1.0 };
    let inner = integrate_to_infinity(
        |z: f64| z * (-z).exp() / (z + sigma),
        0.0,
        &env,
        Singularity::None,
        opts,
    )
    .expect("hinge integrand is smooth and exponentially decaying");
    (-sigma).exp() * inner.value
}
