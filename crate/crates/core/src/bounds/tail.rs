use crate::error::Result;
use crate::heatkernels::{HeatKernelModel, McPoint, TailBound};
use crate::stochastics::{integrate, QuadOptions};

/// Smallest tabulated time; shorter lower limits are integrated directly.
pub const TAU_MIN: f64 = 1e-6;
/// Tabulation stops once the tail bound is below this fraction of the partial integrals.
pub const TAIL_REL_TOL: f64 = 1e-10;
/// Hard cap on the tabulated horizon.
const T_CAP: f64 = 1e30;
/// Geometric panel ratio `2^{1/4}`.
const RATIO: f64 = 1.189_207_115_002_721;
const PANEL_REL_TOL: f64 = 1e-13;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Cumulative time integrals `I(τ) = ∫_τ^∞ π` and `J(τ) = ∫_τ^∞ π/t` of a
/// heat-kernel model, tabulated on a geometric grid.
///
/// Invariant: `cum_i[k]` and `cum_j[k]` include the model's tail bound at
/// the horizon, so they are upper bounds whenever that tail is certified.
/// `cum_i` is `+∞` throughout when `∫^∞ π` diverges.
#[derive(Clone, Debug)]
pub struct TimeIntegrals {
    model: HeatKernelModel,
    nodes: Vec<f64>,
    breaks: Vec<f64>,
    cum_i: Vec<f64>,
    cum_j: Vec<f64>,
    horizon: f64,
    tail: TailBound,
    quad_error: f64,
}

fn model_breaks(model: &HeatKernelModel) -> Vec<f64> {
    match model {
        HeatKernelModel::PowerEnvelope { h, .. } | HeatKernelModel::ExpEnvelope { h, .. } => vec![*h],
        HeatKernelModel::McTable { grid } => grid.iter().map(|p: &McPoint| p.t).collect(),
        _ => Vec::new(),
    }
}

impl TimeIntegrals {
    pub fn new(model: &HeatKernelModel) -> Result<Self> {
        model.validate()?;
        let breaks = model_breaks(model);
        let mut me = Self {
            model: model.clone(),
            nodes: vec![TAU_MIN],
            breaks,
            cum_i: Vec::new(),
            cum_j: Vec::new(),
            horizon: TAU_MIN,
            tail: TailBound { integral: f64::INFINITY, integral_over_t: f64::INFINITY, certified: false },
            quad_error: 0.0,
        };
        let mut panels = Vec::new();
        let (mut sum_i, mut sum_j) = (0.0, 0.0);
        let mut t = TAU_MIN;
        loop {
            for _ in 0..4 {
                let next = t * RATIO;
                let (pi, pj, err) = me.panel(t, next)?;
                sum_i += pi;
                sum_j += pj;
                me.quad_error += err;
                panels.push((pi, pj));
                me.nodes.push(next);
                t = next;
            }
            let tb = me.model.tail_bound(t)?;
            me.tail = tb;
            let done = tb.integral <= TAIL_REL_TOL * sum_i && tb.integral_over_t <= TAIL_REL_TOL * sum_j;
            if done || t >= T_CAP {
                break;
            }
        }
        me.horizon = t;
        let n = me.nodes.len();
        me.cum_i = vec![0.0; n];
        me.cum_j = vec![0.0; n];
        me.cum_i[n - 1] = me.tail.integral;
        me.cum_j[n - 1] = me.tail.integral_over_t;
        for k in (0..n - 1).rev() {
            me.cum_i[k] = me.cum_i[k + 1] + panels[k].0;
            me.cum_j[k] = me.cum_j[k + 1] + panels[k].1;
        }
        Ok(me)
    }

    pub fn model(&self) -> &HeatKernelModel {
        &self.model
    }

    /// True when the horizon tail bound is rigorous.
    pub fn certified(&self) -> bool {
        self.tail.certified
    }

    /// True when `∫^∞ π < ∞` (transience).
    pub fn transient(&self) -> bool {
        self.tail.integral.is_finite()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Sum of the Kronrod error estimates over the tabulated panels.
    pub fn quadrature_error(&self) -> f64 {
        self.quad_error
    }

    /// `(∫_a^b π, ∫_a^b π/t, error)`, split at model breakpoints and bisected
    /// until both Kronrod estimates meet the panel tolerance.
    fn panel(&self, a: f64, b: f64) -> Result<(f64, f64, f64)> {
        if let Some(&c) = self.breaks.iter().find(|&&c| c > a && c < b) {
            let l = self.panel(a, c)?;
            let r = self.panel(c, b)?;
            return Ok((l.0 + r.0, l.1 + r.1, l.2 + r.2));
        }
        self.panel_adaptive(a, b, 0)
    }

    fn panel_adaptive(&self, a: f64, b: f64, depth: usize) -> Result<(f64, f64, f64)> {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let eval = |t: f64| -> Result<(f64, f64)> {
            let p = self.model.pi(t)?;
            Ok((p, p / t))
        };
        let (fc, gc) = eval(c)?;
        let (mut ki, mut kj) = (WGK[7] * fc, WGK[7] * gc);
        let (mut gi, mut gj) = (WG[3] * fc, WG[3] * gc);
        for j in 0..7 {
            let dx = h * XGK[j];
            let (f1, g1) = eval(c - dx)?;
            let (f2, g2) = eval(c + dx)?;
            ki += WGK[j] * (f1 + f2);
            kj += WGK[j] * (g1 + g2);
            if j % 2 == 1 {
                gi += WG[j / 2] * (f1 + f2);
                gj += WG[j / 2] * (g1 + g2);
            }
        }
        let (vi, vj) = (ki * h, kj * h);
        let (ei, ej) = (((ki - gi) * h).abs(), ((kj - gj) * h).abs());
        let ok = ei <= PANEL_REL_TOL * vi.abs() + 1e-300 && ej <= PANEL_REL_TOL * vj.abs() + 1e-300;
        if ok || depth >= 30 {
            return Ok((vi, vj, ei + ej));
        }
        let l = self.panel_adaptive(a, c, depth + 1)?;
        let r = self.panel_adaptive(c, b, depth + 1)?;
        Ok((l.0 + r.0, l.1 + r.1, l.2 + r.2))
    }

    /// Index `k` of the tabulated panel `[nodes[k], nodes[k+1])` containing `τ`.
    fn locate(&self, tau: f64) -> usize {
        let k = self.nodes.partition_point(|&x| x <= tau);
        k.saturating_sub(1).min(self.nodes.len() - 2)
    }

    fn head_integral(&self, tau: f64, over_t: bool) -> f64 {
        if tau == 0.0 && over_t {
            return f64::INFINITY;
        }
        let opts = QuadOptions::with_rel_tol(1e-12);
        let r = if tau == 0.0 {
            // `u²` substitution tames integrable `t^{-α/2}` singularities.
            let w = TAU_MIN.sqrt();
            integrate(|u: f64| 2.0 * u * self.model.pi(u * u).unwrap_or(f64::NAN), 0.0, w, opts)
        } else if over_t {
            integrate(|t: f64| self.model.pi(t).unwrap_or(f64::NAN) / t, tau, TAU_MIN, opts)
        } else {
            integrate(|t: f64| self.model.pi(t).unwrap_or(f64::NAN), tau, TAU_MIN, opts)
        };
        match r {
            Ok(r) if r.value.is_finite() => r.value + r.error,
            _ => f64::INFINITY,
        }
    }

    /// Upper bound on `∫_τ^∞ π`.
    pub fn i_at(&self, tau: f64) -> f64 {
        self.at(tau, false)
    }

    /// Upper bound on `∫_τ^∞ π/t`.
    pub fn j_at(&self, tau: f64) -> f64 {
        self.at(tau, true)
    }

    fn at(&self, tau: f64, over_t: bool) -> f64 {
        assert!(tau >= 0.0, "time integrals need tau >= 0");
        let cum = if over_t { &self.cum_j } else { &self.cum_i };
        if !over_t && !self.transient() {
            return f64::INFINITY;
        }
        if tau >= self.horizon {
            return match self.model.tail_bound(tau) {
                Ok(tb) if over_t => tb.integral_over_t,
                Ok(tb) => tb.integral,
                Err(_) => f64::INFINITY,
            };
        }
        if tau < TAU_MIN {
            return self.head_integral(tau, over_t) + cum[0];
        }
        let k = self.locate(tau);
        let upper = self.nodes[k + 1];
        let piece = match self.panel(tau, upper) {
            Ok((pi, pj, _)) => if over_t { pj } else { pi },
            Err(_) => return f64::INFINITY,
        };
        piece + cum[k + 1]
    }

    /// Fast approximation of [`Self::i_at`]: linear in `(ln τ, ln I)` between
    /// grid nodes, exact outside the grid. Used only for parameter search.
    pub fn i_interp(&self, tau: f64) -> f64 {
        if !self.transient() {
            return f64::INFINITY;
        }
        if tau < TAU_MIN || tau >= self.horizon {
            return self.i_at(tau);
        }
        let k = self.locate(tau);
        let (a, b) = (self.nodes[k], self.nodes[k + 1]);
        let (ia, ib) = (self.cum_i[k], self.cum_i[k + 1]);
        if !(ia > 0.0 && ib > 0.0) {
            return ia;
        }
        let s = (tau / a).ln() / (b / a).ln();
        (ia.ln() + s * (ib.ln() - ia.ln())).exp()
    }
}
