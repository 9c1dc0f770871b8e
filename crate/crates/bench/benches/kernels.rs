use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dmt_core::dmt_solver::{diversity_order, optimal_t};
use dmt_core::montecarlo::{outage_probability, spherical_integral_estimate, OutageSpec, SphericalSpec};
use dmt_core::rand_matrix::{hermitian_eigenvalues, log_det_shifted, sample_complex_gaussian, sample_haar_unitary};
use dmt_core::{AntennaConfig, Cut, DiversityProgram, RngStream};

fn lp(c: &mut Criterion) {
    let mut g = c.benchmark_group("diversity_order");
    for (n, m) in [(1, 1), (2, 3), (3, 7)] {
        let cfg = AntennaConfig::symmetric(n, m).unwrap();
        let prog = DiversityProgram::new(cfg, Cut::Destination, 0.5, n as f64 / 2.0).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(format!("n{n}m{m}")), &prog, |b, prog| {
            b.iter(|| diversity_order(black_box(prog)).unwrap())
        });
    }
    g.finish();

    let cfg = AntennaConfig::symmetric(3, 3).unwrap();
    c.bench_function("optimal_t/n3m3", |b| b.iter(|| optimal_t(cfg, black_box(1.5), 1e-4).unwrap()));
}

fn matrices(c: &mut Criterion) {
    let mut rng = RngStream::new(1, 0).rng();
    for n in [2, 4, 8] {
        let a = sample_complex_gaussian(n, n, &mut rng).gram();
        c.bench_with_input(BenchmarkId::new("jacobi_eigenvalues", n), &a, |b, a| {
            b.iter(|| hermitian_eigenvalues(black_box(a)).unwrap())
        });
        c.bench_with_input(BenchmarkId::new("log_det_shifted", n), &a, |b, a| {
            b.iter(|| log_det_shifted(black_box(a), 100.0))
        });
        c.bench_function(&format!("haar_unitary/{n}"), |b| {
            b.iter(|| sample_haar_unitary(n, &mut rng).unwrap())
        });
    }
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    let spec = OutageSpec {
        cfg: AntennaConfig::new(1, 1, 1).unwrap(),
        cut: Cut::Destination,
        t: 0.5,
        r: 0.5,
        snr_db: vec![10.0, 20.0, 30.0],
        trials_per_point: 100_000,
        seed: 42,
        workers: 1,
    };
    g.bench_function("outage_111_3x1e5", |b| b.iter(|| outage_probability(black_box(&spec)).unwrap()));
    let sph = SphericalSpec::new(2, 2, 2, vec![0.2, 1.0], vec![0.3, 0.9]).unwrap();
    g.bench_function("spherical_222_1e5", |b| {
        b.iter(|| spherical_integral_estimate(black_box(&sph), 1e4, 100_000, 42).unwrap())
    });
    g.finish();
}

criterion_group!(benches, lp, matrices, monte_carlo);
criterion_main!(benches);
