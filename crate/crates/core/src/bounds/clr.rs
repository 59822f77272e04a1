use super::field::{FieldKind, PotentialField};
use super::report::BoundReport;
use super::tail::TimeIntegrals;
use super::invariant_sum;
use crate::error::{invalid, Result};
use crate::heatkernels::{DirichletBoxKernel, HeatKernelModel};
use crate::stochastics::{integrate, QuadOptions};
use crate::weights::{hinge_constant, GWeight};

/// Upper end of the σ search interval of [`clr_hinge_optimized`].
pub const SIGMA_SEARCH_MAX: f64 = 20.0;
const SIGMA_GRID: usize = 41;
const GOLDEN_TOL: f64 = 1e-4;
const SITE_REL_TOL: f64 = 1e-10;
/// Absolute budget for the truncated tail of each site-dependent integral.
const SITE_TAIL_ABS: f64 = 1e-13;

fn finish(mut r: BoundReport, terms: Vec<f64>, infinite: &[u64], ti: &TimeIntegrals, pot: &PotentialField) -> BoundReport {
    if !infinite.is_empty() {
        let shown: Vec<String> = infinite.iter().take(8).map(|id| id.to_string()).collect();
        r.diagnostics.push(format!(
            "time integral diverges at {} sites (ids {}{})",
            infinite.len(),
            shown.join(", "),
            if infinite.len() > 8 { ", …" } else { "" }
        ));
    }
    let total = if infinite.is_empty() { invariant_sum(terms) } else { f64::INFINITY };
    r.value = super::BoundValue::from_f64(total);
    r.certified = ti.certified();
    if !ti.certified() {
        r.diagnostics.push("tail of pi beyond the tabulated horizon is extrapolated, not certified".into());
    }
    if let Some(n) = pot.note() {
        r.diagnostics.push(n);
    }
    r.param("horizon", ti.horizon())
}

/// `∫₀^∞ π(t)/t · G(tW) dt` for one site, from the pieces of `G`.
fn site_integral(ti: &TimeIntegrals, g: &GWeight, w: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    for p in g.pieces() {
        let (t0, t1) = (p.z_start / w, p.z_end / w);
        if p.intercept != 0.0 {
            let dj = ti.j_at(t0) - if t1.is_finite() { ti.j_at(t1) } else { 0.0 };
            total += p.intercept * dj;
        }
        if p.slope != 0.0 {
            let i0 = ti.i_at(t0);
            if !i0.is_finite() {
                return f64::INFINITY;
            }
            let di = i0 - if t1.is_finite() { ti.i_at(t1) } else { 0.0 };
            total += p.slope * w * di;
        }
    }
    total.max(0.0)
}

fn weighted_sum(
    pot: &PotentialField,
    per_site: impl Fn(f64) -> f64,
    factor: impl Fn(f64) -> f64,
) -> (Vec<f64>, Vec<u64>) {
    let mut terms = Vec::with_capacity(pot.len());
    let mut infinite = Vec::new();
    for s in pot.sites() {
        if s.w == 0.0 {
            continue;
        }
        let v = per_site(s.w);
        if !v.is_finite() {
            infinite.push(s.id);
            continue;
        }
        terms.push(s.weight * factor(s.w) * v);
    }
    (terms, infinite)
}

/// General bound `(1/g(1)) ∫₀^∞ π(t)/t Σ_x G(tW(x)) weight(x) dt` with a
/// prepared table of time integrals (reusable across potentials).
pub fn clr_general_with(ti: &TimeIntegrals, g: &GWeight, pot: &PotentialField) -> BoundReport {
    let (terms, inf) = weighted_sum(pot, |w| site_integral(ti, g, w), |_| 1.0);
    let g1 = g.g1();
    let terms = terms.into_iter().map(|t| t / g1).collect();
    let r = BoundReport::new("clr_general", 0.0).param("g1", g1);
    let r = match g.hinge_sigma() {
        Some(s) => r.param("sigma", s),
        None => r,
    };
    finish(r, terms, &inf, ti, pot)
}

pub fn clr_general(hk: &HeatKernelModel, g: &GWeight, pot: &PotentialField) -> Result<BoundReport> {
    Ok(clr_general_with(&TimeIntegrals::new(hk)?, g, pot))
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("hinge sigma must be finite and >= 0, got {sigma}")));
    }
    Ok(())
}

/// Hinge form `(1/c(σ)) Σ_x W(x) ∫_{σ/W(x)}^∞ π(t) dt · weight(x)`.
pub fn clr_hinge_with(ti: &TimeIntegrals, sigma: f64, pot: &PotentialField) -> Result<BoundReport> {
    check_sigma(sigma)?;
    let c = hinge_constant(sigma);
    let (terms, inf) = weighted_sum(pot, |w| ti.i_at(sigma / w), |w| w / c);
    let r = BoundReport::new("clr_hinge", 0.0).param("sigma", sigma).param("c_sigma", c);
    Ok(finish(r, terms, &inf, ti, pot))
}

pub fn clr_hinge(hk: &HeatKernelModel, sigma: f64, pot: &PotentialField) -> Result<BoundReport> {
    clr_hinge_with(&TimeIntegrals::new(hk)?, sigma, pot)
}

/// Fast approximation of the hinge bound at σ (interpolated time integrals).
pub fn hinge_objective(ti: &TimeIntegrals, sigma: f64, pot: &PotentialField) -> f64 {
    let c = hinge_constant(sigma);
    let mut terms = Vec::with_capacity(pot.len());
    for s in pot.sites() {
        if s.w > 0.0 {
            terms.push(s.weight * s.w * ti.i_interp(sigma / s.w));
        }
    }
    invariant_sum(terms) / c
}

/// Outcome of the σ search.
#[derive(Clone, Debug, PartialEq)]
pub struct HingeOptimum {
    pub sigma: f64,
    /// Exact report at the selected σ.
    pub report: BoundReport,
    /// Objective evaluations spent by the search.
    pub evaluations: usize,
}

/// Minimizes the hinge bound over σ ∈ [0, [`SIGMA_SEARCH_MAX`]]: a 41-point
/// grid scan, then golden-section refinement around the best grid point.
/// Ties go to the smaller σ. The search uses [`hinge_objective`]; the
/// returned report is evaluated exactly at the chosen σ, so it is a valid
/// bound regardless of the search accuracy.
pub fn clr_hinge_optimized(ti: &TimeIntegrals, pot: &PotentialField) -> Result<HingeOptimum> {
    let step = SIGMA_SEARCH_MAX / (SIGMA_GRID - 1) as f64;
    let f = |s: f64| hinge_objective(ti, s, pot);
    let mut evaluations = 0;
    let mut best = (0.0, f64::INFINITY);
    for k in 0..SIGMA_GRID {
        let s = k as f64 * step;
        let v = f(s);
        evaluations += 1;
        if v < best.1 {
            best = (s, v);
        }
    }
    if best.1.is_finite() && best.1 > 0.0 {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = ((best.0 - step).max(0.0), (best.0 + step).min(SIGMA_SEARCH_MAX));
        let mut x1 = b - g * (b - a);
        let mut x2 = a + g * (b - a);
        let (mut f1, mut f2) = (f(x1), f(x2));
        evaluations += 2;
        while b - a > GOLDEN_TOL {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = f(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = f(x2);
            }
            evaluations += 1;
        }
        let (s, v) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
        if v < best.1 {
            best = (s, v);
        }
    }
    let mut report = clr_hinge_with(ti, best.0, pot)?;
    report.bound = "clr_hinge_optimized".into();
    report.parameters.insert("search_evaluations".into(), evaluations as f64);
    Ok(HingeOptimum { sigma: best.0, report, evaluations })
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid(format!("moment order must be finite and > 0, got {gamma}")));
    }
    Ok(())
}

/// Moment bound `(1/g(1)) ∫₀^∞ π(t)/t Σ_x G(tW) W^{γ} weight dt` for `Σ|E_i|^γ`.
pub fn lt_moment_with(ti: &TimeIntegrals, g: &GWeight, pot: &PotentialField, gamma: f64) -> Result<BoundReport> {
    check_gamma(gamma)?;
    let g1 = g.g1();
    let (terms, inf) = weighted_sum(pot, |w| site_integral(ti, g, w), |w| w.powf(gamma) / g1);
    let r = BoundReport::new("lt_moment", 0.0).param("g1", g1).param("gamma_moment", gamma);
    Ok(finish(r, terms, &inf, ti, pot))
}

pub fn lt_moment(hk: &HeatKernelModel, g: &GWeight, pot: &PotentialField, gamma: f64) -> Result<BoundReport> {
    lt_moment_with(&TimeIntegrals::new(hk)?, g, pot, gamma)
}

/// Hinge moment form `(1/c(σ)) Σ_x W^{γ+1} ∫_{σ/W}^∞ π dt · weight`.
pub fn lt_moment_hinge(ti: &TimeIntegrals, sigma: f64, pot: &PotentialField, gamma: f64) -> Result<BoundReport> {
    check_sigma(sigma)?;
    check_gamma(gamma)?;
    let c = hinge_constant(sigma);
    let (terms, inf) = weighted_sum(pot, |w| ti.i_at(sigma / w), |w| w.powf(gamma + 1.0) / c);
    let r = BoundReport::new("lt_moment_hinge", 0.0).param("sigma", sigma).param("gamma_moment", gamma);
    Ok(finish(r, terms, &inf, ti, pot))
}

/// General bound with the site-dependent diagonal `p(t, x, x)` under the
/// integral. `kernel(id, t)` must satisfy `kernel(id, t) ≤ e^{-rate·t}`,
/// which certifies the truncated tails.
pub fn clr_general_site_dependent(
    g: &GWeight,
    pot: &PotentialField,
    kernel: &dyn Fn(u64, f64) -> f64,
    rate: f64,
) -> Result<BoundReport> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(invalid("site-dependent bound needs a positive decay rate"));
    }
    let opts = QuadOptions::with_rel_tol(SITE_REL_TOL);
    let terminal = g.pieces().last().expect("weights have pieces").slope;
    let mut terms = Vec::with_capacity(pot.len());
    for s in pot.sites() {
        if s.w == 0.0 {
            continue;
        }
        let w = s.w;
        let mut total = 0.0;
        let mut err = 0.0;
        for p in g.pieces() {
            let t0 = p.z_start / w;
            let t1 = if p.z_end.is_finite() {
                p.z_end / w
            } else {
                // p ≤ e^{-rate t} and G(tW)/t ≤ terminal·W bound the remainder.
                let need = ((terminal * w / (rate * SITE_TAIL_ABS)).ln() / rate).max(0.0);
                total += terminal * w * (-rate * t0.max(need)).exp() / rate;
                t0.max(need)
            };
            if t1 <= t0 {
                continue;
            }
            let (a, b) = (p.intercept, p.slope * w);
            let r = if a == 0.0 {
                integrate(|t: f64| b * kernel(s.id, t), t0, t1, opts)?
            } else {
                integrate(|t: f64| kernel(s.id, t) * (a / t + b), t0, t1, opts)?
            };
            total += r.value;
            err += r.error;
        }
        terms.push(s.weight * (total + err).max(0.0) / g.g1());
    }
    let mut r = BoundReport::new("clr_general_site_dependent", invariant_sum(terms)).param("g1", g.g1()).param("decay_rate", rate);
    if let Some(n) = pot.note() {
        r.diagnostics.push(n);
    }
    Ok(r)
}

/// Site-dependent bound for a potential on the Dirichlet box `{-L, …, L}^d`;
/// site ids are box indices (coordinate 0 fastest).
pub fn clr_general_dirichlet_box(g: &GWeight, pot: &PotentialField, d: usize, l: usize) -> Result<BoundReport> {
    let k = DirichletBoxKernel::new(d, l)?;
    let n = k.n_sites() as u64;
    if let Some(s) = pot.sites().iter().find(|s| s.id >= n) {
        return Err(invalid(format!("site id {} lies outside the box of {n} sites", s.id)));
    }
    let kernel = |id: u64, t: f64| k.diagonal(id as usize, t);
    let mut r = clr_general_site_dependent(g, pot, &kernel, k.spectral_gap())?;
    r.bound = "clr_general_dirichlet_box".into();
    Ok(r)
}

/// Split bound for counting fields: `n(h) + (1/g(1)) ∫ π/t Σ_{W ≤ 1/h} G(tW) dt`,
/// where `n(h) = #{W > 1/h}`. The rank of the high part bounds its count
/// exactly, so the constant in front is 1.
pub fn discrete_split(ti: &TimeIntegrals, pot: &PotentialField, h: f64, g: &GWeight) -> Result<BoundReport> {
    if pot.kind() != FieldKind::DiscreteCounting {
        return Err(invalid("discrete_split needs a counting-measure field"));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid("split parameter h must be finite and > 0"));
    }
    let cut = 1.0 / h;
    let n_high = pot.sites().iter().filter(|s| s.w > cut).count() as u64;
    let low = clr_general_with(ti, g, &pot.filtered(|s| s.w <= cut));
    let value = n_high as f64 + low.value_f64();
    let mut r = BoundReport::new("discrete_split", value)
        .part("high_count", n_high as f64)
        .part("low_integral", low.value_f64())
        .param("h", h)
        .param("g1", g.g1());
    if let Some(s) = g.hinge_sigma() {
        r = r.param("sigma", s);
    }
    r.n_high = Some(n_high);
    r.certified = low.certified;
    r.diagnostics = low.diagnostics;
    Ok(r)
}
