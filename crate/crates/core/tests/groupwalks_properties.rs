use clrlab::groupwalks::*;
use num_rational::BigRational;
use proptest::prelude::*;

#[test]
fn heisenberg_mass_is_conserved_and_decay_is_quadratic() {
    let dp = heisenberg_return_dp_detailed(60).unwrap();
    assert!(dp.max_mass_error < 1e-12, "mass error {}", dp.max_mass_error);
    let t = &dp.table;
    assert_eq!(t.method(), WalkMethod::Dp);
    assert!((t.probability(2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    let scaled: Vec<f64> =
        (20..=30).map(|n| t.probability(2 * n).unwrap() * (n as f64).powi(2)).collect();
    let (lo, hi) = scaled.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi / lo < 1.25, "π(2n)·n² ranges over [{lo}, {hi}]");
}

#[test]
fn affine_methods_agree_exactly() {
    for n2 in [2, 4, 6, 8, 10] {
        assert_eq!(affine_return_bruteforce(n2).unwrap(), affine_return_bridge(n2).unwrap(), "n2 = {n2}");
    }
}

#[test]
fn affine_returns_decrease() {
    let t = affine_return_table(26, WalkMethod::BridgeFormula).unwrap();
    let vals: Vec<f64> = t.entries().iter().map(|e| e.value).collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
    assert!(affine_return_table(10, WalkMethod::Dp).is_err());
}

#[test]
fn affine_return_is_below_bridge_prefactor() {
    // π̃(n2) averages products of factors ≤ 1 over ε-bridges.
    for k in 1..=13u32 {
        let p = rational_to_f64(&affine_return_bridge(2 * k).unwrap());
        let bridge = (1..=k).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / (2 * j) as f64);
        assert!(p > 0.0 && p <= bridge, "n2 = {}", 2 * k);
    }
}

#[test]
fn subordinated_affine_table_obeys_stretched_exponential() {
    let table = affine_return_table(26, WalkMethod::BridgeFormula).unwrap();
    let alpha = 1.0 / 3.0;
    // Largest c0 with π̃(2n) ≤ exp(-c0 (2n)^α) on the certified prefix.
    let c0 = table
        .entries()
        .iter()
        .filter(|e| e.steps > 0)
        .map(|e| -e.value.ln() / (e.steps as f64).powf(alpha))
        .fold(f64::INFINITY, f64::min);
    // Poisson smoothing of a convex envelope overshoots at small times, so
    // only the large-time end of the table's range is checked.
    for lt in [2.0, 2.5, 3.0] {
        let v = clrlab::heatkernels::subordinated_pi(&table, 1.0, lt).unwrap();
        assert!(v <= (-c0 * f64::powf(lt, alpha)).exp(), "rate·t = {lt}");
    }
}

#[test]
fn confined_bridge_bound_holds_on_grid() {
    for r in 1..=CONFINED_MAX_RADIUS {
        let mut prev: Option<BigRational> = None;
        for n2 in (2..=CONFINED_MAX_STEPS).step_by(2) {
            let c = confined_bridge_exact_and_bound(ConfinedBridgeQuery { r, n2 }).unwrap();
            assert!(c.holds, "r = {r}, n2 = {n2}");
            if let Some(p) = &prev {
                assert!(c.exact <= *p, "not monotone at r = {r}, n2 = {n2}");
            }
            prev = Some(c.exact);
        }
    }
}

#[test]
fn envelope_exponent_is_one_third() {
    let fit = envelope_exponent_fit(&[1_000, 10_000, 100_000, 1_000_000]).unwrap();
    assert!((0.323..=0.343).contains(&fit.slope), "slope {}", fit.slope);
    // The band is on the spread of r0 / (2n)^{1/3}, which tends to (π²/(4 ln 2))^{1/3}.
    let ratios: Vec<f64> = fit.points.iter().map(|p| p.r0 as f64 / (p.two_n as f64).cbrt()).collect();
    let (lo, hi) = ratios.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi / lo <= 1.5, "r0 ratios {ratios:?}");
    assert!(fit.points.windows(2).all(|w| w[1].log_m < w[0].log_m));
}

#[test]
fn envelope_rejects_bad_lengths() {
    assert!(envelope_exponent_fit(&[1_000]).is_err());
    assert!(envelope_exponent_fit(&[999, 2_000]).is_err());
    assert!(envelope_exponent_fit(&[2_000, 2_000]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn confined_exact_is_monotone_in_radius(r in 1u32..12, k in 1u32..30) {
        let a = confined_bridge_exact_and_bound(ConfinedBridgeQuery { r, n2: 2 * k }).unwrap();
        let b = confined_bridge_exact_and_bound(ConfinedBridgeQuery { r: r + 1, n2: 2 * k }).unwrap();
        prop_assert!(a.exact <= b.exact);
        prop_assert!(a.bound <= b.bound);
    }

    #[test]
    fn affine_return_is_a_probability(k in 0u32..=8) {
        let p = rational_to_f64(&affine_return_bridge(2 * k).unwrap());
        prop_assert!(p > 0.0 && p <= 1.0);
    }
}
