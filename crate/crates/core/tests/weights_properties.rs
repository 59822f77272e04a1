use clrlab::weights::*;
use proptest::prelude::*;

#[test]
fn hinge_constant_frozen_values() {
    assert_eq!(hinge_constant(0.0), 1.0);
    assert!((hinge_constant(1.0) - 0.148_495_506_775_922_05).abs() < 1e-10);
}

#[test]
fn g_weight_matches_hinge_constant() {
    for s in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let g = GWeight::hinge(s).unwrap();
        assert!((g_weight(&g) - hinge_constant(s)).abs() < 1e-10, "σ = {s}");
        let knots = GWeight::piecewise(vec![[s, 0.0]], 1.0).unwrap();
        assert!((g_weight(&knots) - hinge_constant(s)).abs() < 1e-10, "piecewise σ = {s}");
    }
}

#[test]
fn hinge_constant_strictly_decreases_on_grid() {
    let vals: Vec<f64> = (0..=200).map(|i| hinge_constant(0.05 * i as f64)).collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]));
    // c'(σ) = -E₁(σ), with E₁(σ) ≤ e^{-σ} ln(1 + 1/σ) and ∫₀^Δ E₁ ≤ Δ(1 - ln Δ).
    let step = 0.05f64;
    for (i, w) in vals.windows(2).enumerate() {
        let s = step * i as f64;
        let cap = if i == 0 { step * (1.0 - step.ln()) } else { step * (-s).exp() * (1.0 + 1.0 / s).ln() };
        assert!(w[0] - w[1] <= cap, "jump at σ = {s}");
    }
}

#[test]
fn non_integrable_start_is_rejected() {
    assert!(GWeight::piecewise(vec![[0.0, 1.0]], 1.0).is_err());
    assert!(GWeight::piecewise(vec![[0.0, 0.0], [1.0, 2.0]], 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn admissible_weights_have_positive_constant(
        z0 in 0.0f64..3.0,
        steps in proptest::collection::vec((0.1f64..2.0, 0.0f64..1.0), 0..4),
        extra in 0.0f64..2.0,
    ) {
        // Increasing slopes from a zero first knot give a convex weight.
        let mut knots = vec![[z0, 0.0]];
        let (mut z, mut g, mut s) = (z0, 0.0, 0.0);
        for (dz, ds) in steps {
            s += ds;
            z += dz;
            g += s * dz;
            knots.push([z, g]);
        }
        let w = GWeight::piecewise(knots, s + extra + 1e-3).unwrap();
        let c = g_weight(&w);
        prop_assert!(c > 0.0 && c.is_finite());
        prop_assert_eq!(w.eval(0.0), 0.0);
    }
}
