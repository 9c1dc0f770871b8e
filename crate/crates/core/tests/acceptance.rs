//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or exceeds its runtime cap.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dmt_core::dmt_analytic::{full_duplex_dmt, symmetric_half_duplex_dmt, symmetric_l0, Regime};
use dmt_core::dmt_solver::{
    diversity_order, grid_oracle, half_duplex_dmt, optimal_t, witness_check, Cut, DiversityProgram,
};
use dmt_core::montecarlo::{
    antidiagonal_min_check, combined_eigen_sanity, covariance_bound_check, diversity_slope, lemma1_check,
    outage_probability, spherical_exponent, spherical_series, superpoly_decay_check, Lemma1Status, OutageSpec,
    SphericalExponent, SphericalSpec, DEFAULT_SNR_DB,
};
use dmt_core::rand_matrix::{sample_haar_unitary, ComplexMatrix, RngStream};
use dmt_core::AntennaConfig;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cfg(p: usize, m: usize, n: usize) -> AntennaConfig {
    AntennaConfig::new(p, m, n).unwrap()
}

/// Corner points written out directly from the three regime formulas,
/// keyed by `2r` so coincident corners merge exactly.
fn formula_corners(n: usize, m: usize) -> Vec<(f64, f64)> {
    let n = n as i64;
    let m = m as i64;
    let l0 = n.min((m + 1) / 3);
    let mut pts: BTreeMap<i64, i64> = BTreeMap::new();
    let mut add = |twice_r: i64, d: i64| {
        let e = pts.entry(twice_r).or_insert(d);
        *e = (*e).min(d);
    };
    for l in 0..=l0 {
        add(l, n * n + (m - l) * (n - l));
    }
    for l in 0..=(n - l0) {
        add(l0 + 2 * l, l0 * l0 + (n + m - l) * (n - l0 - l));
    }
    for l in 0..=l0 {
        add(2 * n - l, l * l);
    }
    pts.into_iter().map(|(r2, d)| (r2 as f64 / 2.0, d as f64)).collect()
}

fn criterion_1() -> Check {
    for n in 1..=3 {
        for m in 1..=7 {
            let got = symmetric_half_duplex_dmt(n, m).map_err(|e| e.to_string())?;
            let want = formula_corners(n, m);
            ensure(got.corners() == want.as_slice(), || {
                format!("(n={n}, m={m}): {:?} != {want:?}", got.corners())
            })?;
        }
    }
    let c33 = symmetric_half_duplex_dmt(3, 3).unwrap();
    ensure(
        c33.corners() == [(0.0, 18.0), (0.5, 13.0), (1.5, 6.0), (2.5, 1.0), (3.0, 0.0)],
        || format!("(3,3): {:?}", c33.corners()),
    )?;
    let c37 = symmetric_half_duplex_dmt(3, 7).unwrap();
    ensure(
        c37.corners() == [(0.0, 30.0), (0.5, 21.0), (1.0, 14.0), (2.0, 4.0), (2.5, 1.0), (3.0, 0.0)],
        || format!("(3,7): {:?}", c37.corners()),
    )?;
    Ok("21 configurations, exact".into())
}

fn criterion_2() -> Check {
    let mut worst = 0.0f64;
    for n in 1..=3 {
        for m in 1..=7 {
            let solver = half_duplex_dmt(cfg(n, m, n), 0.25).map_err(|e| format!("({n},{m},{n}): {e}"))?;
            let closed = symmetric_half_duplex_dmt(n, m).unwrap();
            for i in 0..=(4 * n) {
                let r = i as f64 / 4.0;
                let err = (solver.eval(r).unwrap() - closed.eval(r).unwrap()).abs();
                worst = worst.max(err);
                ensure(err <= 1e-6, || format!("({n},{m},{n}) at r={r}: error {err:e}"))?;
            }
        }
    }
    Ok(format!("max deviation {worst:e}"))
}

fn criterion_3() -> Check {
    let mut worst = 0.0f64;
    for n in 1..=5 {
        let hd = symmetric_half_duplex_dmt(n, 1).unwrap();
        let fd = full_duplex_dmt(cfg(n, 1, n)).unwrap();
        ensure(hd.domain() == fd.domain(), || format!("n={n}: domains differ"))?;
        let mut rs: Vec<f64> = (0..=(8 * n)).map(|i| i as f64 / 8.0).collect();
        rs.extend(hd.corners().iter().chain(fd.corners()).map(|c| c.0));
        for r in rs {
            let err = (hd.eval(r).unwrap() - fd.eval(r).unwrap()).abs();
            worst = worst.max(err);
            ensure(err <= 1e-9, || format!("n={n} at r={r}: error {err:e}"))?;
        }
    }
    let hd = symmetric_half_duplex_dmt(3, 3).unwrap().eval(1.0).unwrap();
    let fd = full_duplex_dmt(cfg(3, 3, 3)).unwrap().eval(1.0).unwrap();
    ensure(hd == 9.5 && fd == 10.0 && hd < fd, || format!("(3,3) at r=1: HD={hd}, FD={fd}"))?;
    Ok(format!("max deviation {worst:e}; HD(1)=9.5 < FD(1)=10 at n=m=3"))
}

fn criterion_4() -> Check {
    let mut count = 0;
    let mut worst = 0.0f64;
    for n in 1..=3 {
        for m in [1, 3] {
            for i in 1..=(2 * n) {
                let r = i as f64 / 2.0;
                let opt = optimal_t(cfg(n, m, n), r, 1e-4).map_err(|e| e.to_string())?;
                let dev = (opt.t_star - 0.5).abs();
                worst = worst.max(dev);
                ensure(dev <= 1e-3, || format!("({n},{m},{n}) r={r}: t*={}", opt.t_star))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} cases, max |t* - 0.5| = {worst:e}"))
}

fn criterion_5() -> Check {
    let mut count = 0;
    let mut worst_ratio = 0.0f64;
    for p in 1..=4 {
        for m in 1..=4 {
            for n in 1..=4 {
                for cut in [Cut::Destination, Cut::Source] {
                    let rmax = p.min(n) as f64;
                    for ti in 0..5 {
                        for ri in 0..5 {
                            let t = ti as f64 / 4.0;
                            let r = rmax * ri as f64 / 4.0;
                            let prog = DiversityProgram::new(cfg(p, m, n), cut, t, r).unwrap();
                            let (jc, kc) = prog.dims();
                            if jc + kc > 4 {
                                continue;
                            }
                            let lp = diversity_order(&prog).map_err(|e| format!("{prog:?}: {e}"))?.value;
                            let oracle = grid_oracle(&prog, 64).map_err(|e| e.to_string())?;
                            let bound = prog.coefficient_l1() / 64.0;
                            let gap = (lp - oracle).abs();
                            ensure(gap <= bound, || format!("{prog:?}: LP {lp}, oracle {oracle}, bound {bound}"))?;
                            ensure(oracle >= lp - 1e-9, || format!("{prog:?}: oracle {oracle} below LP {lp}"))?;
                            worst_ratio = worst_ratio.max(gap / bound);
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{count} programs, max |LP - oracle| / (L/64) = {worst_ratio:.3}"))
}

fn criterion_6() -> Check {
    let mut count = 0;
    for n in 1..=3 {
        for m in 1..=7 {
            for regime in Regime::ALL {
                for l in 0..=regime.max_index(n, m) {
                    let w = witness_check(n, m, regime, l).map_err(|e| e.to_string())?;
                    let tag = format!("(n={n}, m={m}, {regime}, l={l})");
                    ensure(w.feasible(), || format!("{tag} infeasible: {:?}", w.report))?;
                    let l0 = symmetric_l0(n, m) as i64;
                    let (ni, mi, li) = (n as i64, m as i64, l as i64);
                    let formula = match regime {
                        Regime::A => ni * ni + (mi - li) * (ni - li),
                        Regime::B => l0 * l0 + (ni + mi - li) * (ni - l0 - li),
                        Regime::C => li * li,
                    } as f64;
                    ensure(w.value == formula, || format!("{tag}: objective {} != {formula}", w.value))?;
                    let d = diversity_order(&w.program).map_err(|e| e.to_string())?.value;
                    ensure((d - formula).abs() <= 1e-9, || format!("{tag}: solver {d} != {formula}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} witnesses"))
}

fn criterion_7() -> Check {
    let c = cfg(1, 1, 1);
    let reference = diversity_order(&DiversityProgram::new(c, Cut::Destination, 0.5, 0.5).unwrap())
        .map_err(|e| e.to_string())?
        .value;
    let spec = OutageSpec {
        cfg: c,
        cut: Cut::Destination,
        t: 0.5,
        r: 0.5,
        snr_db: DEFAULT_SNR_DB.to_vec(),
        trials_per_point: 1_000_000,
        seed: 42,
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let series = outage_probability(&spec).map_err(|e| e.to_string())?;
    let fit = diversity_slope(&series).map_err(|e| e.to_string())?;
    let detail = format!(
        "fitted {:.4} +/- {:.4} over {} points, solver {reference}",
        fit.diversity,
        fit.stderr,
        fit.used.len()
    );
    ensure((fit.diversity - reference).abs() <= 0.2 * reference, || detail.clone())?;
    Ok(detail)
}

fn criterion_8() -> Check {
    let spec = SphericalSpec::new(2, 2, 2, vec![0.2, 1.0], vec![0.3, 0.9]).map_err(|e| e.to_string())?;
    ensure(spherical_exponent(&spec) == SphericalExponent::Finite(-0.5), || {
        format!("predicted {:?}", spherical_exponent(&spec))
    })?;
    let fit = spherical_series(&spec, &[1e2, 1e3, 1e4, 1e5, 1e6], 1_000_000, 42).map_err(|e| e.to_string())?;
    let slope = fit.slope.ok_or("no slope fitted")?;
    ensure((slope + 0.5).abs() <= 0.1, || format!("fitted slope {slope}"))?;
    ensure(
        fit.estimates.iter().all(|e| e.min_log_integrand.is_finite() && e.max_integrand <= 1.0),
        || "integrand left (0, 1]".into(),
    )?;

    let zero = SphericalSpec::new(2, 2, 2, vec![0.0, 0.0], vec![0.0, 0.0]).map_err(|e| e.to_string())?;
    let sp = superpoly_decay_check(&zero, &[2.0, 5.0, 20.0], 100_000, 42).map_err(|e| e.to_string())?;
    ensure(sp.pass && sp.c == 1.0, || format!("super-polynomial check: {sp:?}"))?;
    Ok(format!("fitted slope {slope:.4}, super-polynomial bound holds with c = {}", sp.c))
}

fn criterion_9() -> Check {
    let a = ComplexMatrix::from_real_rows(&[&[4.0]]).unwrap();
    let rep = lemma1_check(&a, 1, 100_000, 42).map_err(|e| e.to_string())?;
    let z = (rep.estimate - 0.2).abs() / rep.stderr;
    ensure(z <= 3.0, || format!("estimate {} is {z:.2} sigma from 0.2", rep.estimate))?;
    ensure(rep.status == Lemma1Status::Pass, || format!("{rep:?}"))?;
    Ok(format!(
        "estimate {:.5} ({z:.2} sigma), det * P = {:.4} in [{:.4}, {:.4}]",
        rep.estimate, rep.det_product, rep.lower, rep.upper
    ))
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

fn criterion_10() -> Check {
    // Haar unitarity.
    let mut rng = RngStream::new(42, 1).rng();
    let mut worst = 0.0f64;
    for n in 1..=6 {
        for _ in 0..1000 {
            let u = sample_haar_unitary(n, &mut rng).map_err(|e| e.to_string())?;
            worst = worst.max((&(&u.adjoint() * &u) - &ComplexMatrix::identity(n)).max_abs());
        }
    }
    ensure(worst < 1e-12, || format!("unitarity defect {worst:e}"))?;

    // Haar invariance: |u_11|² is Beta(1, n-1) for U, WU and UW.
    let n = 3;
    let draws = 10_000;
    let w = sample_haar_unitary(n, &mut RngStream::new(7, 2).rng()).unwrap();
    let mut rng = RngStream::new(42, 3).rng();
    let (mut plain, mut left, mut right) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..draws {
        let u = sample_haar_unitary(n, &mut rng).unwrap();
        plain.push(u[(0, 0)].norm_sqr());
        left.push((&w * &u)[(0, 0)].norm_sqr());
        right.push((&u * &w)[(0, 0)].norm_sqr());
    }
    let cdf = |x: f64| 1.0 - (1.0 - x).powi(n as i32 - 1);
    // 0.1% critical value of the one-sample KS statistic.
    let critical = 1.95 / (draws as f64).sqrt();
    for (name, xs) in [("U", plain), ("WU", left), ("UW", right)] {
        let d = ks_distance(xs, cdf);
        ensure(d < critical, || format!("KS distance for {name}: {d} >= {critical}"))?;
    }

    let ad = antidiagonal_min_check(&[2.0, 1.0], &[3.0, 1.0], 2, 10_000, 42).map_err(|e| e.to_string())?;
    ensure(ad.pass() && ad.floor == 5.0, || format!("anti-diagonal: {ad:?}"))?;
    let ad4 = antidiagonal_min_check(&[4.0, 2.5, 1.0], &[3.0, 2.0, 0.5], 4, 10_000, 43).map_err(|e| e.to_string())?;
    ensure(ad4.pass(), || format!("anti-diagonal n=4: {ad4:?}"))?;

    let cov = covariance_bound_check(2, 2, 10.0, 10_000, 42).map_err(|e| e.to_string())?;
    ensure(cov.pass(), || format!("covariance removal: {cov:?}"))?;

    let ident = combined_eigen_sanity(cfg(2, 2, 2), 100.0, 1_000, 42).map_err(|e| e.to_string())?;
    ensure(ident.pass(), || format!("combined-eigen identity: {ident:?}"))?;

    for n in 1..=5 {
        for m in 1..=8 {
            let c = symmetric_half_duplex_dmt(n, m).unwrap();
            c.check_invariants().map_err(|e| format!("({n},{m}): {e}"))?;
            c.check_convex(0.0).map_err(|e| format!("({n},{m}): {e}"))?;
            let first = c.corners()[0];
            let last = c.corners()[c.corners().len() - 1];
            ensure(first == (0.0, (n * n + m * n) as f64), || format!("({n},{m}) starts at {first:?}"))?;
            ensure(last == (n as f64, 0.0), || format!("({n},{m}) ends at {last:?}"))?;
            let fd = full_duplex_dmt(cfg(n, m, n)).unwrap();
            fd.check_invariants().map_err(|e| format!("FD ({n},{m}): {e}"))?;
            ensure(fd.corners()[0].1 == first.1, || format!("({n},{m}) FD start differs"))?;
        }
    }

    Ok(format!(
        "unitarity {worst:.1e}, KS < {critical:.4}, anti-diagonal min {:.4} (floor 5), covariance worst margin {:.2e}, identity max error {:.1e}",
        ad.min_value, cov.worst_margin, ident.max_error
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("explicit-formula reproduction", 1, criterion_1),
        ("solver-formula agreement", 120, criterion_2),
        ("m = 1 full-duplex equivalence", 10, criterion_3),
        ("t-symmetry", 60, criterion_4),
        ("LP-oracle equivalence", 300, criterion_5),
        ("witness optimality", 60, criterion_6),
        ("Monte Carlo slope", 300, criterion_7),
        ("spherical asymptotics", 600, criterion_8),
        ("Lemma 1 bracket", 5, criterion_9),
        ("property suites", 300, criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, cap, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let cap = Duration::from_secs(*cap);
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= cap => (true, d),
            Ok(d) => (false, format!("{d}; runtime {elapsed:.2?} over cap {cap:?}")),
            Err(d) => (false, d),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {name} [{:.2} s]: {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
