use std::f64::consts::PI;

use clrlab::bounds::*;
use clrlab::heatkernels::{lattice_pi, HeatKernelModel};
use clrlab::oracle::{count_eigs_below, interval_counts_neumann_dirichlet, LatticeBox, LatticeOperator};
use clrlab::stochastics::{integrate_to_infinity, QuadOptions, RandomSource, Singularity, TailEnvelope};
use clrlab::weights::GWeight;
use proptest::prelude::*;
use rand::Rng;

/// `c(1)`, frozen from a 30-digit mpmath quadrature.
const C_ONE: f64 = 0.148_495_506_775_922_05;
/// `∫₀^∞ (e^{-2t} I₀(2t))³ dt = u₃ / 6` with Watson's cubic-lattice integral `u₃ = 1.5163860591519780982`.
const LATTICE3_TOTAL: f64 = 0.252_731_009_858_663;

fn lattice3() -> TimeIntegrals {
    TimeIntegrals::new(&HeatKernelModel::Lattice { d: 3 }).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Independent oracle: adaptive quadrature of `∫_a^∞ f` with the `t^{-3/2}` envelope.
fn tail_quad(f: impl Fn(f64) -> f64, a: f64, scale: f64) -> f64 {
    let env = TailEnvelope::Power { scale, exponent: 1.5 };
    integrate_to_infinity(f, a, &env, Singularity::None, QuadOptions::with_rel_tol(1e-13)).unwrap().value
}

/// `π(t) ≤ 1` on `(0, 1]` and `π(t) ≤ 0.1 t^{-3/2}` beyond majorizes the `Z³` diagonal.
fn lattice3_envelope() -> HeatKernelModel {
    HeatKernelModel::PowerEnvelope { alpha: 0.0, beta: 3.0, h: 1.0, c_small: 1.0, c_large: 0.1 }
}

fn random_box_field(lb: LatticeBox, density: f64, wmax: f64, rng: &mut RandomSource) -> Vec<f64> {
    (0..lb.n_sites())
        .map(|_| if rng.random::<f64>() < density { rng.random_range(0.0..wmax) } else { 0.0 })
        .collect()
}

#[test]
fn zero_potential_gives_zero_everywhere() {
    let ti = lattice3();
    let pot = PotentialField::discrete(&[0.0; 7]).unwrap();
    let g = GWeight::piecewise(vec![[0.5, 0.0], [1.0, 0.25]], 2.0).unwrap();
    assert_eq!(clr_general_with(&ti, &g, &pot).value_f64(), 0.0);
    assert_eq!(clr_hinge_with(&ti, 1.0, &pot).unwrap().value_f64(), 0.0);
    assert_eq!(lt_moment_with(&ti, &g, &pot, 0.5).unwrap().value_f64(), 0.0);
    assert_eq!(discrete_split(&ti, &pot, 1.0, &g).unwrap().value_f64(), 0.0);
    assert_eq!(two_regime_power(&lattice3_envelope(), &pot, 1.0).unwrap().value_f64(), 0.0);
    let env = HeatKernelModel::ExpEnvelope { alpha: 0.0, gamma_decay: 0.6, a: 1.0, h: 1.0, c_small: 1.0, c_exp: 1.0 };
    assert_eq!(two_regime_exp(&env, &pot, 1.0, 0.5).unwrap().value_f64(), 0.0);
}

#[test]
fn single_site_hinge_matches_direct_quadrature() {
    let ti = lattice3();
    let pot = PotentialField::discrete(&[10.0]).unwrap();
    let direct = tail_quad(|t| lattice_pi(3, t), 0.1, 0.05);
    let expected = 10.0 * direct / C_ONE;
    let r = clr_hinge_with(&ti, 1.0, &pot).unwrap();
    assert!(r.certified);
    assert!(rel(r.value_f64(), expected) < 1e-8, "{} vs {expected}", r.value_f64());
}

#[test]
fn single_site_general_matches_direct_quadrature() {
    // G(tW)/t = (10 t - 1)/t on t > 0.1 for the hinge at σ = 1.
    let ti = lattice3();
    let pot = PotentialField::discrete(&[10.0]).unwrap();
    let g = GWeight::hinge(1.0).unwrap();
    let expected = tail_quad(|t| lattice_pi(3, t) * (10.0 - 1.0 / t), 0.1, 0.5) / C_ONE;
    let r = clr_general_with(&ti, &g, &pot);
    assert!(rel(r.value_f64(), expected) < 1e-8, "{} vs {expected}", r.value_f64());
}

#[test]
fn single_site_moment_matches_direct_quadrature() {
    let ti = lattice3();
    let pot = PotentialField::discrete(&[10.0]).unwrap();
    let g = GWeight::hinge(1.0).unwrap();
    let expected = 10f64.powf(0.5) * tail_quad(|t| lattice_pi(3, t) * (10.0 - 1.0 / t), 0.1, 0.5) / C_ONE;
    let r = lt_moment_with(&ti, &g, &pot, 0.5).unwrap();
    assert!(rel(r.value_f64(), expected) < 1e-8);
    let yy = lt_moment_hinge(&ti, 1.0, &pot, 0.5).unwrap();
    let expected_yy = 10f64.powf(1.5) * tail_quad(|t| lattice_pi(3, t), 0.1, 0.05) / C_ONE;
    assert!(rel(yy.value_f64(), expected_yy) < 1e-8);
}

#[test]
fn sigma_zero_uses_the_full_time_integral() {
    let ti = lattice3();
    let pot = PotentialField::discrete(&[2.0, 0.5, 3.0]).unwrap();
    let r = clr_hinge_with(&ti, 0.0, &pot).unwrap();
    assert!(r.is_finite());
    assert!(rel(r.value_f64(), 5.5 * LATTICE3_TOTAL) < 1e-8, "{}", r.value_f64());
}

#[test]
fn hinge_form_exceeds_general_form_by_the_dropped_term() {
    // (1/c) Σ W ∫_{σ/W}^∞ π = (1/c) Σ ∫_{σ/W}^∞ π(t)(W - σ/t) dt + (σ/c) Σ ∫_{σ/W}^∞ π/t.
    let ti = lattice3();
    let mut rng = RandomSource::new(99);
    for case in 0..20 {
        let n = rng.random_range(1..30);
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..8.0)).collect();
        let pot = PotentialField::discrete(&w).unwrap();
        let sigma = rng.random_range(0.0..4.0);
        let hinge = clr_hinge_with(&ti, sigma, &pot).unwrap().value_f64();
        let general = clr_general_with(&ti, &GWeight::hinge(sigma).unwrap(), &pot).value_f64();
        let c = clrlab::weights::hinge_constant(sigma);
        let dropped: f64 = w.iter().filter(|&&x| x > 0.0).map(|&x| sigma * ti.j_at(sigma / x)).sum::<f64>() / c;
        assert!(hinge >= general, "case {case}");
        assert!(rel(hinge, general + dropped) < 1e-8, "case {case}: {hinge} vs {}", general + dropped);
        let at_zero_h = clr_hinge_with(&ti, 0.0, &pot).unwrap().value_f64();
        let at_zero_g = clr_general_with(&ti, &GWeight::hinge(0.0).unwrap(), &pot).value_f64();
        assert!(rel(at_zero_h, at_zero_g) < 1e-8, "case {case} at sigma 0");
    }
}

#[test]
fn moment_bound_tends_to_counting_bound() {
    let ti = lattice3();
    let pot = PotentialField::discrete(&[0.3, 4.0, 2.2, 9.0]).unwrap();
    let g = GWeight::piecewise(vec![[0.2, 0.0], [2.0, 0.9]], 1.5).unwrap();
    let base = clr_general_with(&ti, &g, &pot).value_f64();
    let near = lt_moment_with(&ti, &g, &pot, 1e-9).unwrap().value_f64();
    assert!(rel(near, base) < 1e-7);
}

#[test]
fn recurrent_lattice_gives_explicit_infinity() {
    let ti = TimeIntegrals::new(&HeatKernelModel::Lattice { d: 2 }).unwrap();
    let pot = PotentialField::discrete(&[0.0, 1.0, 2.0]).unwrap();
    let r = clr_hinge_with(&ti, 1.0, &pot).unwrap();
    assert_eq!(r.value, BoundValue::Infinite);
    assert!(r.diagnostics.iter().any(|d| d.contains("2 sites")), "{:?}", r.diagnostics);
    let zero = PotentialField::discrete(&[0.0, 0.0]).unwrap();
    assert_eq!(clr_hinge_with(&ti, 1.0, &zero).unwrap().value_f64(), 0.0);
}

#[test]
fn hinge_bounds_dominate_box_counts() {
    let ti = lattice3();
    let lb = LatticeBox::new(3, 3).unwrap();
    let mut rng = RandomSource::new(5);
    for case in 0..12 {
        let density = rng.random_range(0.05..0.6);
        let w = random_box_field(lb, density, 5.0, &mut rng);
        let pot = PotentialField::discrete(&w).unwrap();
        let op = LatticeOperator::new(lb, &w, None).unwrap();
        let count = count_eigs_below(&op.to_dense().unwrap(), 0.0).unwrap().count_leq;
        let opt = clr_hinge_optimized(&ti, &pot).unwrap();
        assert!(count as f64 <= opt.report.value_f64(), "case {case}");
        // The optimized value is no worse than the grid points it scanned.
        for s in [0.0, 1.0, 5.0, 20.0] {
            assert!(opt.report.value_f64() <= clr_hinge_with(&ti, s, &pot).unwrap().value_f64() * (1.0 + 1e-3));
        }
    }
}

#[test]
fn site_dependent_diagonal_sits_between_count_and_uniform_bound() {
    let ti = lattice3();
    let lb = LatticeBox::new(3, 3).unwrap();
    let mut rng = RandomSource::new(17);
    for case in 0..6 {
        let w = random_box_field(lb, 0.3, 6.0, &mut rng);
        let pot = PotentialField::discrete(&w).unwrap();
        let op = LatticeOperator::new(lb, &w, None).unwrap();
        let count = count_eigs_below(&op.to_dense().unwrap(), 0.0).unwrap().count_leq;
        for g in [GWeight::hinge(0.5).unwrap(), GWeight::piecewise(vec![[0.0, 0.0], [1.0, 0.5]], 1.0).unwrap()] {
            let site = clr_general_dirichlet_box(&g, &pot, 3, 3).unwrap().value_f64();
            let uniform = clr_general_with(&ti, &g, &pot).value_f64();
            assert!(count as f64 <= site, "case {case}: count {count} > {site}");
            assert!(site <= uniform, "case {case}: {site} > {uniform}");
        }
    }
}

#[test]
fn lattice_envelope_majorizes_the_diagonal() {
    let env = lattice3_envelope();
    for k in 0..400 {
        let t = 1e-3 * 1.05f64.powi(k);
        assert!(lattice_pi(3, t) <= env.pi(t).unwrap(), "t = {t}");
    }
}

#[test]
fn two_regime_constants_dominate_the_hinge_form() {
    // The derived constants come from bounding the hinge form at σ = 1 with
    // the envelope itself, so the hinge form over the envelope is smaller.
    let mut rng = RandomSource::new(21);
    let envs = [
        lattice3_envelope(),
        HeatKernelModel::PowerEnvelope { alpha: 1.0, beta: 3.0, h: 2.0, c_small: 1.0, c_large: 1.5 },
        HeatKernelModel::PowerEnvelope { alpha: 2.0, beta: 4.0, h: 0.5, c_small: 0.7, c_large: 0.5 },
        HeatKernelModel::PowerEnvelope { alpha: 3.0, beta: 5.0, h: 1.0, c_small: 1.0, c_large: 1.0 },
    ];
    for env in &envs {
        let ti = TimeIntegrals::new(env).unwrap();
        for _ in 0..10 {
            let w: Vec<f64> = (0..20).map(|_| rng.random_range(0.0..6.0)).collect();
            let pot = PotentialField::discrete(&w).unwrap();
            for h in [0.3, 1.0, 4.0] {
                let two = two_regime_power(env, &pot, h).unwrap().value_f64();
                let hinge = clr_hinge_with(&ti, TWO_REGIME_SIGMA, &pot).unwrap().value_f64();
                assert!(hinge <= two * (1.0 + 1e-9), "{env:?} h {h}: {hinge} > {two}");
            }
        }
    }
    let env = HeatKernelModel::ExpEnvelope { alpha: 1.0, gamma_decay: 0.6, a: 1.0, h: 1.0, c_small: 1.0, c_exp: 2.0 };
    for big_a in [0.2, 1.0, 3.0] {
        for _ in 0..5 {
            let w: Vec<f64> = (0..20).map(|_| rng.random_range(0.0..3.0)).collect();
            let pot = PotentialField::discrete(&w).unwrap();
            let r = two_regime_exp(&env, &pot, 1.0, big_a).unwrap();
            let sigma = r.parameters["sigma"];
            let ti = TimeIntegrals::new(&env).unwrap();
            let hinge = clr_hinge_with(&ti, sigma, &pot).unwrap().value_f64();
            assert!(hinge <= r.value_f64() * (1.0 + 1e-9), "A {big_a}: {hinge} > {}", r.value_f64());
        }
    }
}

#[test]
fn two_regime_power_dominates_box_counts() {
    let lb = LatticeBox::new(3, 3).unwrap();
    let mut rng = RandomSource::new(8);
    for _ in 0..5 {
        let w = random_box_field(lb, 0.2, 4.0, &mut rng);
        let count = count_eigs_below(&LatticeOperator::new(lb, &w, None).unwrap().to_dense().unwrap(), 0.0).unwrap().count_leq;
        let r = two_regime_power(&lattice3_envelope(), &PotentialField::discrete(&w).unwrap(), 1.0).unwrap();
        assert!(count as f64 <= r.value_f64());
    }
}

#[test]
fn global_dimension_must_exceed_two() {
    let env = HeatKernelModel::PowerEnvelope { alpha: 0.0, beta: 2.0, h: 1.0, c_small: 1.0, c_large: 1.0 };
    let err = two_regime_power(&env, &PotentialField::discrete(&[1.0]).unwrap(), 1.0).unwrap_err();
    assert!(err.to_string().contains("global dimension must exceed 2"));
}

#[test]
fn inverse_power_tail_finite_iff_exponent_large() {
    let env = lattice3_envelope();
    let finite = two_regime_power_radial(&env, &RadialField::InversePower { s: 2.5 }, 1.0).unwrap();
    assert!(finite.is_finite(), "{:?}", finite.diagnostics);
    let infinite = two_regime_power_radial(&env, &RadialField::InversePower { s: 1.9 }, 1.0).unwrap();
    assert_eq!(infinite.value, BoundValue::Infinite, "{:?}", infinite.diagnostics);
}

#[test]
fn log_potential_tail_follows_the_dimension_threshold() {
    // π ≤ e^{-a t^{3/5}} on Z³-like spaces; W = ln^{-σ} is summable iff σ·3/5 > 1.
    let env = HeatKernelModel::ExpEnvelope { alpha: 0.0, gamma_decay: 0.6, a: 1.0, h: 1.0, c_small: 1.0, c_exp: 1.0 };
    let finite = two_regime_exp_radial(&env, &RadialField::LogPower { sigma: 2.0 }, 1.0, 3.0).unwrap();
    assert!(finite.is_finite(), "{:?}", finite.diagnostics);
    let infinite = two_regime_exp_radial(&env, &RadialField::LogPower { sigma: 0.4 }, 1.0, 3.0).unwrap();
    assert_eq!(infinite.value, BoundValue::Infinite);
}

#[test]
fn high_set_counts_only_their_number() {
    let ti = lattice3();
    let g = GWeight::hinge(1.0).unwrap();
    let small = discrete_split(&ti, &PotentialField::discrete(&[5.0, 7.0, 20.0]).unwrap(), 1.0, &g).unwrap();
    let large = discrete_split(&ti, &PotentialField::discrete(&[5e3, 7e5, 2e9]).unwrap(), 1.0, &g).unwrap();
    assert_eq!(small.value_f64(), 3.0);
    assert_eq!(large.value_f64(), 3.0);
    assert_eq!(small.n_high, Some(3));
}

#[test]
fn deep_well_split_beats_hinge() {
    let ti = lattice3();
    let lb = LatticeBox::new(3, 4).unwrap();
    let mut w = vec![0.0; lb.n_sites()];
    w[lb.center()] = 1e6;
    let pot = PotentialField::discrete(&w).unwrap();
    let split = discrete_split(&ti, &pot, 1.0, &GWeight::hinge(1.0).unwrap()).unwrap().value_f64();
    let hinge = clr_hinge_optimized(&ti, &pot).unwrap().report.value_f64();
    let count = count_eigs_below(&LatticeOperator::new(lb, &w, None).unwrap().to_dense().unwrap(), 0.0).unwrap().count_leq;
    assert_eq!(count, 1);
    assert!(count as f64 <= split);
    assert!(split <= 1e-4 * hinge, "{split} vs {hinge}");
}

fn quantum_envelope(d: usize) -> HeatKernelModel {
    HeatKernelModel::quantum_graph(d, 1.0, 1.0, 1.0).unwrap()
}

#[test]
fn quantum_graph_bracket() {
    let env = quantum_envelope(3);
    let none = quantum_graph_edge_bounds(&[0.1, 0.5, 1.0], 3, 1.0, &env).unwrap();
    assert_eq!(none.lower, 0.0);
    let one = quantum_graph_edge_bounds(&[8.0 * PI * PI], 3, 1.0, &env).unwrap();
    assert!((one.lower - 4.0).abs() < 1e-12);
    assert!(one.upper.value_f64() >= 5.0);
    assert!(quantum_graph_edge_bounds(&[1.0], 2, 1.0, &quantum_envelope(3)).is_err());

    let mut rng = RandomSource::new(404);
    for _ in 0..50 {
        let n = rng.random_range(1..12);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..200.0)).collect();
        let b = quantum_graph_edge_bounds(&v, 3, 1.0, &env).unwrap();
        let (mut dir, mut neu) = (0usize, 0usize);
        for &x in v.iter().filter(|&&x| x > 1.0) {
            let c = interval_counts_neumann_dirichlet(2.0 * x).unwrap();
            dir += c.dirichlet;
            neu += c.neumann;
        }
        assert!(dir as f64 <= b.lower + 1e-12);
        assert!(b.lower <= neu as f64 + 1e-12);
        assert!(neu as f64 <= b.upper.value_f64());
    }
}

fn small_field() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0..6.0f64], 1..25)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bounds_are_permutation_invariant(w in small_field(), seed in any::<u64>(), sigma in 0.0..5.0f64) {
        let ti = lattice3();
        let mut shuffled: Vec<(u64, f64)> = w.iter().copied().enumerate().map(|(i, x)| (i as u64, x)).collect();
        let mut rng = RandomSource::new(seed);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.random_range(0..=i));
        }
        let a = PotentialField::discrete(&w).unwrap();
        let b = PotentialField::from_w(FieldKind::DiscreteCounting, shuffled.into_iter().map(|(id, x)| (id, 1.0, x))).unwrap();
        let g = GWeight::piecewise(vec![[0.3, 0.0], [1.0, 0.2]], 1.1).unwrap();
        prop_assert_eq!(clr_hinge_with(&ti, sigma, &a).unwrap().value, clr_hinge_with(&ti, sigma, &b).unwrap().value);
        prop_assert_eq!(clr_general_with(&ti, &g, &a).value, clr_general_with(&ti, &g, &b).value);
        prop_assert_eq!(lt_moment_with(&ti, &g, &a, 0.7).unwrap().value, lt_moment_with(&ti, &g, &b, 0.7).unwrap().value);
        prop_assert_eq!(discrete_split(&ti, &a, 0.5, &g).unwrap().value, discrete_split(&ti, &b, 0.5, &g).unwrap().value);
        prop_assert_eq!(two_regime_power(&lattice3_envelope(), &a, 0.5).unwrap().value, two_regime_power(&lattice3_envelope(), &b, 0.5).unwrap().value);
        prop_assert_eq!(clr_hinge_optimized(&ti, &a).unwrap().report.value, clr_hinge_optimized(&ti, &b).unwrap().report.value);
    }

    #[test]
    fn bounds_grow_with_the_potential(w in small_field(), bumps in prop::collection::vec(0.0..3.0f64, 25), sigma in 0.0..5.0f64, scale in 1.0..4.0f64) {
        let ti = lattice3();
        let w2: Vec<f64> = w.iter().zip(&bumps).map(|(a, b)| a + b).collect();
        let a = PotentialField::discrete(&w).unwrap();
        let b = PotentialField::discrete(&w2).unwrap();
        let g = GWeight::piecewise(vec![[0.0, 0.0], [2.0, 0.5]], 2.0).unwrap();
        let tol = 1.0 + 1e-12;
        prop_assert!(clr_hinge_with(&ti, sigma, &a).unwrap().value_f64() <= tol * clr_hinge_with(&ti, sigma, &b).unwrap().value_f64());
        prop_assert!(clr_general_with(&ti, &g, &a).value_f64() <= tol * clr_general_with(&ti, &g, &b).value_f64());
        prop_assert!(two_regime_power(&lattice3_envelope(), &a, 1.0).unwrap().value_f64() <= tol * two_regime_power(&lattice3_envelope(), &b, 1.0).unwrap().value_f64());
        let scaled = a.scaled(scale).unwrap();
        prop_assert!(clr_hinge_with(&ti, sigma, &a).unwrap().value_f64() <= tol * clr_hinge_with(&ti, sigma, &scaled).unwrap().value_f64());
    }
}
