use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::RunError;

/// One experiment invocation: a kind with its parameters, a root seed and
/// an optional output directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Stem of the output files; defaults to the kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub experiment: Experiment,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    BoundVsOracleLattice(BoundVsOracleLattice),
    SubordinationIdentity(SubordinationIdentity),
    FreeGroup(FreeGroup),
    LevyExponents(LevyExponents),
    AffineMc(AffineMc),
    HeisenbergMc(HeisenbergMc),
    GroupWalks(GroupWalks),
    Anderson(Anderson),
    QuantumGraphEdges(QuantumGraphEdges),
    OracleIntegrity(OracleIntegrity),
    DiscreteSplit(DiscreteSplit),
}

/// Random sparse potentials on a `Z^d` box: hinge bound against the exact count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundVsOracleLattice {
    pub d: usize,
    /// Box `{-l, …, l}^d`.
    pub l: usize,
    pub instances: usize,
    /// Nonzero entries of `W` are uniform on `[0, w_max]`.
    pub w_max: f64,
    /// Per-instance fraction of nonzero sites, uniform on this range.
    pub density: [f64; 2],
    /// Exponent of the reported moment bound.
    pub moment_gamma: f64,
}

impl Default for BoundVsOracleLattice {
    fn default() -> Self {
        Self { d: 3, l: 8, instances: 200, w_max: 5.0, density: [0.05, 0.5], moment_gamma: 1.0 }
    }
}

/// Poisson subordination of the `Z¹` walk against the closed form, plus the
/// Laplace transform of `π` against the lattice resolvent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SubordinationIdentity {
    pub times: Vec<f64>,
    pub rate: f64,
    pub table_steps: u64,
    pub tolerance: f64,
    pub laplace_dims: Vec<usize>,
    pub laplace_lambdas: Vec<f64>,
    pub laplace_tolerance: f64,
}

impl Default for SubordinationIdentity {
    fn default() -> Self {
        Self {
            times: vec![0.5, 1.0, 2.0, 5.0],
            rate: 2.0,
            table_steps: 200,
            tolerance: 1e-10,
            laplace_dims: vec![1, 3],
            laplace_lambdas: vec![0.5, 1.0, 4.0],
            laplace_tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FreeGroup {
    pub d: usize,
    /// Radius of the Dirichlet tree ball used as the matrix-exponential oracle.
    pub radius: usize,
    pub ball_times: Vec<f64>,
    pub ball_tolerance: f64,
    /// Times on which `π_Γ(t) e^{γt} t^{3/2}` must stay flat.
    pub plateau_times: Vec<f64>,
    /// All plateau values must lie within this relative distance of one constant.
    pub plateau_tolerance: f64,
    pub gamma_tolerance: f64,
    /// Spectral parameters for the root-product identity.
    pub resolvent_points: Vec<[f64; 2]>,
    pub root_tolerance: f64,
}

impl Default for FreeGroup {
    fn default() -> Self {
        Self {
            d: 2,
            radius: 6,
            ball_times: vec![0.25, 0.5, 1.0, 2.0, 3.0, 4.0],
            ball_tolerance: 1e-4,
            plateau_times: (0..=8).map(|i| 20.0 + 2.5 * i as f64).collect(),
            plateau_tolerance: 0.05,
            gamma_tolerance: 1e-12,
            resolvent_points: vec![[1.0, 0.0], [10.0, 0.0], [-0.2, 0.0], [-3.0, 1.0], [0.5, -7.0]],
            root_tolerance: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevyExponents {
    pub d: usize,
    pub rho: f64,
    pub delta: f64,
    pub a_amp: f64,
    pub b_amp: f64,
    /// Small time for the local-dimension ratio test.
    pub small_t: f64,
    /// Large time for the global-dimension ratio test.
    pub large_t: f64,
    /// Relative tolerance on the recovered dimensions.
    pub tolerance: f64,
    pub sigma_log: f64,
    pub c_amp: f64,
    /// Fit window `[t0, t1]` for the stretched-exponential decay.
    pub log_window: [f64; 2],
    pub log_points: usize,
    pub slope_tolerance: f64,
}

impl Default for LevyExponents {
    fn default() -> Self {
        Self {
            d: 1,
            rho: 0.8,
            delta: 1.2,
            a_amp: 1.0,
            b_amp: 1.0,
            small_t: 1e-8,
            large_t: 1e8,
            tolerance: 0.05,
            sigma_log: 2.0,
            c_amp: 1.0,
            log_window: [1e2, 1e4],
            log_points: 9,
            slope_tolerance: 0.1,
        }
    }
}

/// Monte-Carlo agreement of `π(t) t^{exponent}` across times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AffineMc {
    pub times: Vec<f64>,
    pub n_paths: usize,
    pub n_steps: usize,
    pub tolerance: f64,
    pub stderr_multiple: f64,
}

impl Default for AffineMc {
    fn default() -> Self {
        Self { times: vec![10.0, 20.0, 40.0], n_paths: 100_000, n_steps: 1024, tolerance: 0.15, stderr_multiple: 3.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeisenbergMc {
    pub sigma_h: Vec<f64>,
    pub times: Vec<f64>,
    pub n_paths: usize,
    pub n_steps: usize,
    pub tolerance: f64,
    pub stderr_multiple: f64,
}

impl Default for HeisenbergMc {
    fn default() -> Self {
        Self {
            sigma_h: vec![0.0, 1.0],
            times: vec![4.0, 8.0, 16.0],
            n_paths: 100_000,
            n_steps: 256,
            tolerance: 0.2,
            stderr_multiple: 3.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroupWalks {
    /// Brute force and bridge formula are compared for even `n2` up to this.
    pub brute_max: u32,
    pub bridge_max: u32,
    pub confinement_r_max: u32,
    pub confinement_n2_max: u32,
    pub envelope_two_n: Vec<u64>,
    pub slope_tolerance: f64,
    /// Allowed `max/min` of `r₀/(2n)^{1/3}`.
    pub r0_band: f64,
    pub heisenberg_n_max: usize,
    /// `π̃(2n)·n²` must lie within this relative distance of one constant on the window.
    pub heisenberg_window: [usize; 2],
    pub heisenberg_tolerance: f64,
}

impl Default for GroupWalks {
    fn default() -> Self {
        Self {
            brute_max: 10,
            bridge_max: 26,
            confinement_r_max: 8,
            confinement_n2_max: 40,
            envelope_two_n: vec![1_000, 10_000, 100_000, 1_000_000],
            slope_tolerance: 0.01,
            r0_band: 1.5,
            heisenberg_n_max: 60,
            heisenberg_window: [40, 60],
            heisenberg_tolerance: 0.25,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Anderson {
    pub d: usize,
    pub l: usize,
    /// `P{V = 0}`.
    pub p: f64,
    pub samples: usize,
    pub times: Vec<f64>,
    pub r2_min: f64,
    /// Stretched-exponential envelope `e^{-a t^γ}` for the radial bounds.
    pub envelope_gamma: f64,
    pub envelope_a: f64,
    pub big_a: f64,
    pub h: f64,
    /// `W = ln^{-σ}`: the first must give a finite bound, the second `+∞`.
    pub sigma_finite: f64,
    pub sigma_infinite: f64,
}

impl Default for Anderson {
    fn default() -> Self {
        Self {
            d: 2,
            l: 15,
            p: 0.5,
            samples: 200,
            times: vec![2.0, 5.0, 10.0, 20.0, 40.0],
            r2_min: 0.98,
            envelope_gamma: 0.6,
            envelope_a: 1.0,
            big_a: 3.0,
            h: 1.0,
            sigma_finite: 2.0,
            sigma_infinite: 0.4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuantumGraphEdges {
    pub edge_sets: usize,
    pub max_edges: usize,
    /// Edge potentials are uniform on this range.
    pub v_range: [f64; 2],
    /// Global dimension of the envelope.
    pub d: usize,
    pub h: f64,
    pub c_small: f64,
    pub c_large: f64,
    pub delta_strength: f64,
    pub delta_tolerance: f64,
    /// Numbers of unit cells, each carrying one delta well.
    pub wells: Vec<usize>,
    /// Half the number of finite-difference cells per unit interval.
    pub fd_half_cells: usize,
}

impl Default for QuantumGraphEdges {
    fn default() -> Self {
        Self {
            edge_sets: 50,
            max_edges: 12,
            v_range: [0.01, 200.0],
            d: 3,
            h: 1.0,
            c_small: 1.0,
            c_large: 1.0,
            delta_strength: 8.0,
            delta_tolerance: 1e-10,
            wells: vec![1, 2, 5, 10],
            fd_half_cells: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleIntegrity {
    pub matrices: usize,
    pub order: usize,
    pub thresholds: usize,
    pub dims: Vec<usize>,
    pub l_max: usize,
    pub eigenvalue_tolerance: f64,
}

impl Default for OracleIntegrity {
    fn default() -> Self {
        Self { matrices: 100, order: 50, thresholds: 20, dims: vec![1, 2], l_max: 20, eigenvalue_tolerance: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscreteSplit {
    pub l: usize,
    pub well: f64,
    pub h: f64,
    pub sigma: f64,
    /// Required `split / hinge` ceiling.
    pub ratio_max: f64,
}

impl Default for DiscreteSplit {
    fn default() -> Self {
        Self { l: 4, well: 1e6, h: 1.0, sigma: 1.0, ratio_max: 1e-4 }
    }
}

fn bad(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

fn positive(name: &str, x: f64) -> Result<(), RunError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} must be positive and finite, got {x}")))
    }
}

fn all_positive(name: &str, xs: &[f64]) -> Result<(), RunError> {
    if xs.is_empty() {
        return Err(bad(format!("{name} must not be empty")));
    }
    xs.iter().try_for_each(|&x| positive(name, x))
}

fn unit_fraction(name: &str, x: f64) -> Result<(), RunError> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(bad(format!("{name} must lie in [0, 1], got {x}")))
    }
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::BoundVsOracleLattice(_) => "bound-vs-oracle-lattice",
            Self::SubordinationIdentity(_) => "subordination-identity",
            Self::FreeGroup(_) => "free-group",
            Self::LevyExponents(_) => "levy-exponents",
            Self::AffineMc(_) => "affine-mc",
            Self::HeisenbergMc(_) => "heisenberg-mc",
            Self::GroupWalks(_) => "group-walks",
            Self::Anderson(_) => "anderson",
            Self::QuantumGraphEdges(_) => "quantum-graph-edges",
            Self::OracleIntegrity(_) => "oracle-integrity",
            Self::DiscreteSplit(_) => "discrete-split",
        }
    }

    /// Parameter checks done before any work, so a bad config leaves no artifacts.
    pub fn validate(&self) -> Result<(), RunError> {
        match self {
            Self::BoundVsOracleLattice(c) => {
                if !(1..=3).contains(&c.d) || c.l == 0 || (2 * c.l + 1).pow(c.d as u32) > 9261 {
                    return Err(bad("lattice box must have d in 1..=3, l >= 1 and at most 9261 sites"));
                }
                if c.instances == 0 {
                    return Err(bad("instances must be at least 1"));
                }
                positive("w_max", c.w_max)?;
                unit_fraction("density[0]", c.density[0])?;
                unit_fraction("density[1]", c.density[1])?;
                if c.density[0] > c.density[1] {
                    return Err(bad("density range is reversed"));
                }
                positive("moment_gamma", c.moment_gamma)
            }
            Self::SubordinationIdentity(c) => {
                positive("rate", c.rate)?;
                positive("tolerance", c.tolerance)?;
                positive("laplace_tolerance", c.laplace_tolerance)?;
                if c.times.is_empty() || c.times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
                    return Err(bad("times must be finite and >= 0"));
                }
                for &t in &c.times {
                    let need = clrlab::heatkernels::required_steps(c.rate * t);
                    if c.table_steps < need {
                        return Err(bad(format!("table_steps = {} is below the {need} needed at t = {t}", c.table_steps)));
                    }
                }
                if c.laplace_dims.iter().any(|&d| !(1..=3).contains(&d)) {
                    return Err(bad("laplace_dims must lie in 1..=3"));
                }
                c.laplace_lambdas.iter().try_for_each(|&x| positive("laplace_lambdas", x))
            }
            Self::FreeGroup(c) => {
                if c.d < 2 {
                    return Err(bad("free group needs d >= 2"));
                }
                match clrlab::oracle::FreeGroupBall::size(c.d, c.radius) {
                    Some(n) if n <= clrlab::oracle::DENSE_MAX_ORDER => {}
                    _ => return Err(bad("tree ball exceeds the dense oracle size")),
                }
                all_positive("ball_times", &c.ball_times)?;
                all_positive("plateau_times", &c.plateau_times)?;
                positive("ball_tolerance", c.ball_tolerance)?;
                positive("plateau_tolerance", c.plateau_tolerance)?;
                positive("gamma_tolerance", c.gamma_tolerance)?;
                positive("root_tolerance", c.root_tolerance)
            }
            Self::LevyExponents(c) => {
                clrlab::heatkernels::LevyMeasureSpec::power(c.d, c.rho, c.a_amp, c.delta, c.b_amp)
                    .map_err(|e| bad(e.to_string()))?;
                clrlab::heatkernels::LevyMeasureSpec::log_tail(c.d, c.rho, c.a_amp, c.sigma_log, c.c_amp)
                    .map_err(|e| bad(e.to_string()))?;
                positive("small_t", c.small_t)?;
                positive("large_t", c.large_t)?;
                positive("tolerance", c.tolerance)?;
                positive("slope_tolerance", c.slope_tolerance)?;
                positive("log_window[0]", c.log_window[0])?;
                if !(c.log_window[1] > c.log_window[0]) || c.log_points < 2 {
                    return Err(bad("log_window must be increasing with at least two points"));
                }
                Ok(())
            }
            Self::AffineMc(c) => {
                if c.times.len() < 2 || c.n_paths < 2 || c.n_steps < 64 {
                    return Err(bad("affine-mc needs two or more times, n_paths >= 2 and n_steps >= 64"));
                }
                all_positive("times", &c.times)?;
                positive("tolerance", c.tolerance)?;
                positive("stderr_multiple", c.stderr_multiple)
            }
            Self::HeisenbergMc(c) => {
                if c.times.len() < 2 || c.n_paths < 2 || c.sigma_h.is_empty() {
                    return Err(bad("heisenberg-mc needs sigma_h values, two or more times and n_paths >= 2"));
                }
                if c.sigma_h.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
                    return Err(bad("sigma_h must be finite and >= 0"));
                }
                if c.n_steps < 256 {
                    return Err(bad("n_steps must be at least 256"));
                }
                all_positive("times", &c.times)?;
                positive("tolerance", c.tolerance)?;
                positive("stderr_multiple", c.stderr_multiple)
            }
            Self::GroupWalks(c) => {
                use clrlab::groupwalks::*;
                if c.brute_max > AFFINE_BRUTE_MAX || c.bridge_max > AFFINE_BRIDGE_MAX {
                    return Err(bad("affine walk lengths exceed the exact-enumeration limits"));
                }
                if c.brute_max > c.bridge_max {
                    return Err(bad("brute_max must not exceed bridge_max"));
                }
                if c.confinement_r_max == 0
                    || c.confinement_r_max > CONFINED_MAX_RADIUS
                    || c.confinement_n2_max < 2
                    || c.confinement_n2_max > CONFINED_MAX_STEPS
                {
                    return Err(bad("confinement grid out of range"));
                }
                if c.envelope_two_n.len() < 2
                    || c.envelope_two_n.iter().any(|&n| !(1_000..=1_000_000).contains(&n) || n % 2 == 1)
                {
                    return Err(bad("envelope_two_n needs two or more even values in [1e3, 1e6]"));
                }
                if c.heisenberg_n_max % 2 == 1 || c.heisenberg_n_max > HEISENBERG_MAX_STEPS {
                    return Err(bad("heisenberg_n_max must be even and at most 60"));
                }
                let [a, b] = c.heisenberg_window;
                if a == 0 || a > b || b > c.heisenberg_n_max {
                    return Err(bad("heisenberg_window must be a nonempty range inside [2, heisenberg_n_max]"));
                }
                positive("slope_tolerance", c.slope_tolerance)?;
                positive("heisenberg_tolerance", c.heisenberg_tolerance)?;
                if !(c.r0_band >= 1.0) {
                    return Err(bad("r0_band must be at least 1"));
                }
                Ok(())
            }
            Self::Anderson(c) => {
                if !(1..=3).contains(&c.d) || c.l == 0 || (2 * c.l + 1).pow(c.d as u32) > clrlab::heatkernels::ANDERSON_MAX_SITES {
                    return Err(bad("Anderson box too large or empty"));
                }
                if !(c.p > 0.0 && c.p <= 1.0) || c.samples < 2 || c.times.len() < 3 {
                    return Err(bad("anderson needs p in (0, 1], samples >= 2 and three or more times"));
                }
                all_positive("times", &c.times)?;
                unit_fraction("r2_min", c.r2_min)?;
                for (n, x) in [
                    ("envelope_gamma", c.envelope_gamma),
                    ("envelope_a", c.envelope_a),
                    ("big_a", c.big_a),
                    ("h", c.h),
                    ("sigma_finite", c.sigma_finite),
                    ("sigma_infinite", c.sigma_infinite),
                ] {
                    positive(n, x)?;
                }
                Ok(())
            }
            Self::QuantumGraphEdges(c) => {
                if c.edge_sets == 0 || c.max_edges == 0 || c.d < 3 || c.fd_half_cells < 10 {
                    return Err(bad("quantum-graph-edges needs edge sets, d >= 3 and fd_half_cells >= 10"));
                }
                positive("v_range[0]", c.v_range[0])?;
                if !(c.v_range[1] >= c.v_range[0]) || !c.v_range[1].is_finite() {
                    return Err(bad("v_range must be increasing and finite"));
                }
                for (n, x) in [("h", c.h), ("c_small", c.c_small), ("c_large", c.c_large), ("delta_tolerance", c.delta_tolerance)] {
                    positive(n, x)?;
                }
                if !(c.delta_strength > 4.0) || !c.delta_strength.is_finite() {
                    return Err(bad("delta_strength must exceed 4 for a bound state"));
                }
                if c.wells.iter().any(|&m| m == 0) {
                    return Err(bad("well counts must be positive"));
                }
                Ok(())
            }
            Self::OracleIntegrity(c) => {
                if c.order == 0 || c.order > clrlab::oracle::DENSE_MAX_ORDER || c.thresholds == 0 {
                    return Err(bad("random matrices need 1 <= order <= 4000 and thresholds >= 1"));
                }
                if c.dims.iter().any(|&d| !(1..=2).contains(&d)) || c.l_max == 0 {
                    return Err(bad("closed-form spectra are checked for d in {1, 2} and l_max >= 1"));
                }
                if c.dims.contains(&2) && (2 * c.l_max + 1).pow(2) > clrlab::oracle::DENSE_MAX_ORDER {
                    return Err(bad("d = 2 box exceeds the dense oracle size"));
                }
                positive("eigenvalue_tolerance", c.eigenvalue_tolerance)
            }
            Self::DiscreteSplit(c) => {
                if c.l == 0 || (2 * c.l + 1).pow(3) > clrlab::oracle::DENSE_MAX_ORDER {
                    return Err(bad("discrete-split box must have 1 <= l and at most 4000 sites"));
                }
                for (n, x) in [("well", c.well), ("h", c.h), ("ratio_max", c.ratio_max)] {
                    positive(n, x)?;
                }
                if !(c.sigma >= 0.0) || !c.sigma.is_finite() {
                    return Err(bad("sigma must be finite and >= 0"));
                }
                Ok(())
            }
        }
    }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self { name: None, seed: 0, output: None, experiment }
    }

    pub fn from_json(text: &str) -> Result<Self, RunError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| bad(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if let Some(n) = &self.name {
            if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.') || n.starts_with('.') {
                return Err(bad(format!("name {n:?} must be a plain file stem")));
            }
        }
        self.experiment.validate()
    }

    /// Output file stem.
    pub fn stem(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.experiment.kind().to_string())
    }
}
