use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::oracle::free_group_gamma;
use crate::stochastics::{integrate, QuadOptions};

/// Free group on `d ≥ 2` generators with `-Δ_Γ` of degree `2d`.
///
/// The spectrum of `-Δ_Γ` is `[γ, γ + 4√(2d-1)]`, `γ = 2d - 2√(2d-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeGroupModel {
    pub d: usize,
    pub gamma: f64,
    pub band_top: f64,
}

impl FreeGroupModel {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(invalid("free group model needs d >= 2"));
        }
        let gamma = free_group_gamma(d);
        let band_top = gamma + 4.0 * (2.0 * d as f64 - 1.0).sqrt();
        Ok(Self { d, gamma, band_top })
    }

    fn q(&self) -> f64 {
        2.0 * self.d as f64 - 1.0
    }

    /// Spectral density of `-Δ_Γ` at the identity in the angle variable:
    /// `s = γ + 2√q (1 - cos θ)` and
    /// `dμ = d·4q sin²θ / (π(4d² - 4q cos²θ)) dθ`, `q = 2d - 1`.
    ///
    /// This is `(1/π)|Im R_{-s∓i0}(e,e)|·ds/dθ`: on the cut the two roots are
    /// `ν_± = e^{±iθ}/√q`.
    pub fn spectral_density(&self, theta: f64) -> f64 {
        let d = self.d as f64;
        let q = self.q();
        let c = theta.cos();
        let s = theta.sin();
        d * 4.0 * q * s * s / (PI * (4.0 * d * d - 4.0 * q * c * c))
    }

    /// `π(t) = e^{γt} π_Γ(t)`, the diagonal heat kernel of `-Δ_Γ - γ`.
    pub fn shifted_pi(&self, t: f64) -> f64 {
        assert!(t >= 0.0);
        let rate = 2.0 * self.q().sqrt();
        let f = |th: f64| (-rate * (1.0 - th.cos()) * t).exp() * self.spectral_density(th);
        let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 1e-300, max_subdivisions: 4000 };
        // The mass concentrates in θ ≲ (rate·t)^{-1/2}; split there.
        let split = (4.0 / (rate * t).max(1e-300).sqrt()).min(PI);
        let mut v = integrate(f, 0.0, split, opts).map(|r| r.value).unwrap_or(f64::NAN);
        if split < PI {
            v += integrate(f, split, PI, opts).map(|r| r.value).unwrap_or(f64::NAN);
        }
        v
    }

    /// Constant `C` in the certified majorant `e^{γt} π_Γ(t) ≤ min(1, C t^{-3/2})`.
    ///
    /// Uses `sin²θ ≤ θ²`, `1 - cos θ ≥ 2θ²/π²` and `4d² - 4q cos²θ ≥ 4(d-1)²`.
    pub fn shifted_majorant_constant(&self) -> f64 {
        let d = self.d as f64;
        let q = self.q();
        let a = 4.0 * q.sqrt() / (PI * PI);
        d * q / (PI * (d - 1.0).powi(2)) * PI.sqrt() / (4.0 * a.powf(1.5))
    }

    pub fn shifted_majorant(&self, t: f64) -> f64 {
        (self.shifted_majorant_constant() * t.powf(-1.5)).min(1.0)
    }
}

/// Roots `(ν_+, ν_-)` of `ν^{-1} + (2d-1)ν - (2d+λ) = 0` with `|ν_-| ≤ |ν_+|`.
pub fn free_group_roots(model: &FreeGroupModel, lambda: Complex64) -> (Complex64, Complex64) {
    let q = model.q();
    let b = 2.0 * model.d as f64 + lambda;
    let disc = (b * b - 4.0 * q).sqrt();
    let (r1, r2) = ((b + disc) / (2.0 * q), (b - disc) / (2.0 * q));
    if r1.norm() >= r2.norm() {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

/// Resolvent diagonal `R_λ(e,e) = ((λ - Δ_Γ)^{-1})(e,e) = 1/((2d+λ) - 2dν_-)`.
pub fn free_group_resolvent(model: &FreeGroupModel, lambda: Complex64) -> Result<Complex64> {
    let scale = lambda.norm().max(1.0);
    let on_axis = lambda.im.abs() <= 1e-12 * scale;
    if on_axis && -lambda.re >= model.gamma - 1e-12 * scale && -lambda.re <= model.band_top + 1e-12 * scale {
        return Err(Error::OnSpectrum(format!(
            "lambda = {lambda} lies on the cut [-{}, -{}]",
            model.band_top, model.gamma
        )));
    }
    let (plus, minus) = free_group_roots(model, lambda);
    if (plus.norm() - minus.norm()).abs() <= 1e-12 * plus.norm() {
        return Err(Error::OnSpectrum(format!("root selection is ambiguous at lambda = {lambda}")));
    }
    let b = 2.0 * model.d as f64 + lambda;
    Ok(1.0 / (b - 2.0 * model.d as f64 * minus))
}

/// Diagonal heat kernel `π_Γ(t) = e^{tΔ_Γ}(e,e)`, by integrating the spectral
/// density obtained from the resolvent jump across the cut.
pub fn free_group_pi(model: &FreeGroupModel, t: f64) -> f64 {
    (-model.gamma * t).exp() * model.shifted_pi(t)
}
