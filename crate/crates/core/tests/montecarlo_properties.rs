use dmt_core::dmt_solver::{diversity_order, Cut, DiversityProgram};
use dmt_core::montecarlo::{
    diversity_slope, mutual_info_sample, outage_probability, spherical_integral_estimate, ChannelSample, OutageSpec,
    SphericalSpec,
};
use dmt_core::rand_matrix::{sample_complex_gaussian, RngStream};
use dmt_core::AntennaConfig;
use proptest::prelude::*;

fn cfg(p: usize, m: usize, n: usize) -> AntennaConfig {
    AntennaConfig::new(p, m, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn source_cut_dominates_at_full_listening(p in 1usize..4, m in 1usize..4, n in 1usize..4,
                                              snr in 0.1f64..1e4, seed in any::<u64>()) {
        let c = cfg(p, m, n);
        let mut rng = RngStream::new(seed, 0).rng();
        let g = sample_complex_gaussian(n, p, &mut rng);
        let h1 = sample_complex_gaussian(m, p, &mut rng);
        let h2 = sample_complex_gaussian(n, m, &mut rng);
        let src = mutual_info_sample(Cut::Source, c, 1.0, &ChannelSample { g: g.clone(), h: h1, snr }).unwrap();
        let dst = mutual_info_sample(Cut::Destination, c, 1.0, &ChannelSample { g, h: h2, snr }).unwrap();
        prop_assert!(src >= dst - 1e-9);
    }

    #[test]
    fn spherical_integrand_in_unit_interval(n in 1usize..4, a0 in 0.0f64..1.5, da in 0.0f64..1.0,
                                            b0 in 0.0f64..1.5, db in 0.0f64..1.0, seed in any::<u64>()) {
        let alphas: Vec<f64> = (0..n).map(|j| a0 + da * j as f64).collect();
        let betas: Vec<f64> = (0..n).map(|k| b0 + db * k as f64).collect();
        let spec = SphericalSpec::new(n, n, n, alphas, betas).unwrap();
        let e = spherical_integral_estimate(&spec, 10.0, 1_000, seed).unwrap();
        prop_assert!(e.max_integrand <= 1.0);
        prop_assert!(e.min_log_integrand.is_finite() && e.min_log_integrand <= 0.0);
        prop_assert!(e.mean > 0.0 && e.mean <= 1.0);
    }
}

fn scalar_spec(r: f64, snr_db: Vec<f64>, trials: usize) -> OutageSpec {
    OutageSpec {
        cfg: cfg(1, 1, 1),
        cut: Cut::Destination,
        t: 0.5,
        r,
        snr_db,
        trials_per_point: trials,
        seed: 2024,
        workers: 2,
    }
}

#[test]
fn outage_non_increasing_in_snr() {
    let s = outage_probability(&scalar_spec(0.5, vec![10.0, 15.0, 20.0, 25.0, 30.0, 35.0], 100_000)).unwrap();
    let pts = s.points();
    for w in pts.windows(2) {
        let sigma = |p: &dmt_core::montecarlo::EstimatePoint| (p.outage * (1.0 - p.outage) / p.trials as f64).sqrt();
        assert!(w[1].outage <= w[0].outage + 3.0 * (sigma(&w[0]) + sigma(&w[1])), "{w:?}");
    }
}

#[test]
fn outage_is_reproducible() {
    let spec = scalar_spec(0.5, vec![10.0, 20.0, 30.0], 30_000);
    let a = outage_probability(&spec).unwrap();
    let b = outage_probability(&OutageSpec { workers: 1, ..spec.clone() }).unwrap();
    assert_eq!(a, b);
    let c = outage_probability(&OutageSpec { seed: 7, ..spec }).unwrap();
    assert_ne!(a.count, c.count);
}

/// The slope of the scalar relay channel approaches the solver value with
/// a log correction, so each rate is fitted where its events are plentiful
/// but the SNR is as high as practical.
#[test]
fn outage_slopes_track_solver() {
    let cases = [
        (0.25, vec![30.0, 35.0, 40.0], 30_000_000),
        (0.5, vec![25.0, 30.0, 35.0, 40.0], 1_000_000),
        (0.75, vec![25.0, 30.0, 35.0, 40.0], 1_000_000),
    ];
    for (r, snr_db, trials) in cases {
        let reference = diversity_order(&DiversityProgram::new(cfg(1, 1, 1), Cut::Destination, 0.5, r).unwrap())
            .unwrap()
            .value;
        let series = outage_probability(&scalar_spec(r, snr_db.clone(), trials)).unwrap();
        let fit = diversity_slope(&series).unwrap();
        assert_eq!(fit.used.len(), snr_db.len());
        let tol = (0.2 * reference).max(0.3);
        assert!(
            (fit.diversity - reference).abs() <= tol,
            "r={r}: fitted {} vs {reference}",
            fit.diversity
        );
    }
}
