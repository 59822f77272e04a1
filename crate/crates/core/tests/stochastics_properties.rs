use clrlab::heatkernels::{affine_path_functional, affine_pi_mc};
use clrlab::stochastics::*;
use proptest::prelude::*;
use rand::RngCore;

#[test]
fn bridge_covariance_matches_at_probe_pairs() {
    let (t, n, paths) = (1.0, 8, 100_000);
    let root = RandomSource::new(7);
    let probes = [(2usize, 2usize), (2, 6), (4, 4)];
    let mut prods = vec![Vec::with_capacity(paths); probes.len()];
    for i in 0..paths {
        let p = sample_brownian_bridge(t, n, &mut root.substream(i as u64));
        assert!(p.values[0] == 0.0 && p.values[n] == 0.0);
        for (j, &(a, b)) in probes.iter().enumerate() {
            prods[j].push(p.values[a] * p.values[b]);
        }
    }
    for (j, &(a, b)) in probes.iter().enumerate() {
        let (s, r) = (a as f64 / n as f64, b as f64 / n as f64);
        let expect = s * (t - r) / t;
        let m = prods[j].iter().sum::<f64>() / paths as f64;
        let var = prods[j].iter().map(|x| (x - m).powi(2)).sum::<f64>() / (paths - 1) as f64;
        let se = (var / paths as f64).sqrt();
        assert!((m - expect).abs() <= 4.0 * se, "Cov({s}, {r}) = {m}, expected {expect} ± {se}");
    }
}

#[test]
fn sharded_estimates_equal_single_worker() {
    let (t, n_paths, n_steps, seed) = (5.0, 400, 64, 11);
    let single = affine_pi_mc(t, n_paths, n_steps, seed).unwrap();
    // Two workers take interleaved path indices from the same root.
    let root = RandomSource::new(seed);
    let mut vals = vec![0.0; n_paths];
    for worker in 0..2 {
        for i in (worker..n_paths).step_by(2) {
            let p = sample_brownian_bridge(t, n_steps, &mut root.substream(i as u64));
            vals[i] = affine_path_functional(t, &p.values);
        }
    }
    let mean = vals.iter().sum::<f64>() / n_paths as f64;
    assert_eq!(mean, single.estimate);
}

#[test]
fn quadrature_examples() {
    let exp = TailEnvelope::Exponential { scale: 1.0, rate: 1.0 };
    let r = quadrature(|z| (-z).exp(), 0.0, None, Singularity::None, Some(&exp), 1e-10).unwrap();
    assert!((r.value - 1.0).abs() < 1e-10);
    let r = quadrature(|z| z.powf(-0.5), 0.0, Some(1.0), Singularity::Left, None, 1e-10).unwrap();
    assert!((r.value - 2.0).abs() < 1e-10);
    let r = quadrature(|z| z * (-z).exp() / (z + 1.0), 0.0, None, Singularity::None, Some(&exp), 1e-10).unwrap();
    assert!((r.value - 0.403_652_637_676_805_6).abs() < 1e-9);
}

#[test]
fn poisson_examples() {
    assert_eq!(poisson_pmf(0.5, 0), (-0.5f64).exp());
    assert!((poisson_pmf(4.0, 4) - 0.195_366_814_813_165).abs() < 1e-12);
    // The λ + 12√λ cutoff leaves a tail above 1e-10 only for λ < 1 (about 1.7e-10 at λ = 0.5).
    for lambda in [1.0, 10.0, 1e3, 1e6] {
        assert!((poisson_pmf(lambda, 0) - (-lambda).exp()).abs() <= 1e-15);
        let top = (lambda + 12.0 * lambda.sqrt()).ceil() as u64;
        let (mut mass, mut mean) = (0.0, 0.0);
        for n in 0..=top + 40 {
            let p = poisson_pmf(lambda, n);
            assert!(p.is_finite());
            if n <= top {
                mass += p;
            }
            mean += n as f64 * p;
        }
        assert!(mass >= 1.0 - 1e-10, "λ = {lambda}: mass {mass}");
        assert!((mean - lambda).abs() <= 1e-9 * lambda.max(1.0), "λ = {lambda}: mean {mean}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn samplers_are_pure_functions_of_seed(seed in any::<u64>(), k in 0u64..100, t in 0.1f64..50.0) {
        let a = sample_brownian_bridge(t, 16, &mut RandomSource::new(seed).substream(k));
        let b = sample_brownian_bridge(t, 16, &mut RandomSource::new(seed).substream(k));
        prop_assert_eq!(a, b);
        let (mut x, mut y) = (RandomSource::new(seed), RandomSource::new(seed));
        prop_assert_eq!(x.next_u64(), y.next_u64());
    }
}
