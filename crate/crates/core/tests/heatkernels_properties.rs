use clrlab::groupwalks::WalkReturnTable;
use clrlab::heatkernels::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn increasing_grid() -> Vec<f64> {
    (0..40).map(|k| 0.05 * 1.25f64.powi(k)).collect()
}

#[test]
fn providers_are_positive_and_non_increasing() {
    let fg = FreeGroupModel::new(2).unwrap();
    let z1 = WalkReturnTable::z1_simple_walk(400);
    let grid = increasing_grid();
    for (name, vals) in [
        ("lattice d=3", grid.iter().map(|&t| lattice_pi(3, t)).collect::<Vec<_>>()),
        ("free group d=2", grid.iter().map(|&t| free_group_pi(&fg, t)).collect()),
        ("subordinated Z1", grid.iter().filter(|&&t| t < 60.0).map(|&t| subordinated_pi(&z1, 2.0, t).unwrap()).collect()),
    ] {
        assert!(vals.iter().all(|&v| v > 0.0), "{name} not positive");
        assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{name} increases");
    }
}

#[test]
fn subordinated_z1_walk_reproduces_lattice() {
    let z1 = WalkReturnTable::z1_simple_walk(200);
    for t in [0.5, 1.0, 2.0, 5.0] {
        let diff = (subordinated_pi(&z1, 2.0, t).unwrap() - lattice_pi(1, t)).abs();
        assert!(diff < 1e-10, "t = {t}: {diff:e}");
    }
    assert_eq!(subordinated_pi(&z1, 2.0, 0.0).unwrap(), 1.0);
}

#[test]
fn lattice_known_values() {
    assert_eq!(lattice_pi(3, 0.0), 1.0);
    assert!((lattice_pi(1, 1.0) - 0.308_508_322_553_671).abs() < 1e-12);
}

#[test]
fn free_group_resolvent_examples() {
    let m = FreeGroupModel::new(2).unwrap();
    assert!((m.gamma - (4.0 - 2.0 * 3f64.sqrt())).abs() < 1e-12);
    let r = free_group_resolvent(&m, Complex64::new(1.0, 0.0)).unwrap();
    let nu = (5.0 - 13f64.sqrt()) / 6.0;
    assert!((r.re - 1.0 / (5.0 - 4.0 * nu)).abs() < 1e-12 && r.im.abs() < 1e-15);
    let big = free_group_resolvent(&m, Complex64::new(1e6, 0.0)).unwrap();
    assert!((big.re * 1e6 - 1.0).abs() < 1e-3);
    assert!(free_group_resolvent(&m, Complex64::new(-1.0, 0.0)).is_err());
}

#[test]
fn free_group_small_time_limit_is_flat() {
    let m = FreeGroupModel::new(2).unwrap();
    let (a, b) = (free_group_pi(&m, 1e-3), free_group_pi(&m, 1e-4));
    assert!((a / b - 1.0).abs() < 0.01);
}

#[test]
fn levy_symbol_vanishes_only_at_origin() {
    let spec = LevyMeasureSpec::power(1, 0.8, 1.0, 1.2, 1.0).unwrap();
    assert_eq!(levy_symbol(&spec, &[0.0]).unwrap(), 0.0);
    for k in (1..=30).map(|i| 0.01 * 1.5f64.powi(i)) {
        let v = levy_symbol(&spec, &[k]).unwrap();
        assert!(v > 0.0, "Φ({k}) = {v}");
    }
}

#[test]
fn power_envelope_is_continuous_single_law() {
    let m = HeatKernelModel::PowerEnvelope { alpha: 3.0, beta: 3.0, h: 2.0, c_small: 0.5, c_large: 0.5 };
    for t in [0.5, 1.9999, 2.0, 2.0001, 9.0] {
        assert!((m.pi(t).unwrap() - 0.5 * f64::powf(t, -1.5)).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_is_a_tensor_power(d in 1usize..6, t in 0.0f64..60.0) {
        let lhs = lattice_pi(d, t);
        let rhs = lattice_pi(1, t).powi(d as i32);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn resolvent_roots_multiply_to_inverse_degree(d in 2usize..8, re in -40.0f64..40.0, im in -40.0f64..40.0) {
        let m = FreeGroupModel::new(d).unwrap();
        let (p, q) = free_group_roots(&m, Complex64::new(re, im));
        let target = 1.0 / (2.0 * d as f64 - 1.0);
        prop_assert!((p * q - target).norm() <= 1e-12 * target.max((p * q).norm()));
    }

    #[test]
    fn selected_root_is_small_off_the_band(d in 2usize..8, lam in prop_oneof![-200.0f64..-0.0, 0.0f64..200.0]) {
        let m = FreeGroupModel::new(d).unwrap();
        prop_assume!(-lam < m.gamma - 1e-6 || -lam > m.band_top + 1e-6);
        let (_, minus) = free_group_roots(&m, Complex64::new(lam, 0.0));
        prop_assert!(minus.norm() < 1.0 / (2.0 * d as f64 - 1.0).sqrt());
        prop_assert!(free_group_resolvent(&m, Complex64::new(lam, 0.0)).is_ok());
    }

    #[test]
    fn levy_symbol_is_even(rho in 0.2f64..1.9, delta in 0.2f64..1.9, k in 0.01f64..50.0, three in any::<bool>()) {
        let d = if three { 3 } else { 1 };
        let spec = LevyMeasureSpec::power(d, rho, 1.0, delta, 1.0).unwrap();
        let kv: Vec<f64> = if three { vec![k, -0.5 * k, 0.25 * k] } else { vec![k] };
        let neg: Vec<f64> = kv.iter().map(|x| -x).collect();
        let (a, b) = (levy_symbol(&spec, &kv).unwrap(), levy_symbol(&spec, &neg).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
    }
}
