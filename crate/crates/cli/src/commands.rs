use std::io::Write;

use dmt_core::dmt_analytic::{full_duplex_dmt, ptp_dmt, symmetric_corners, symmetric_half_duplex_dmt};
use dmt_core::dmt_solver::{
    diversity_order, grid_oracle, half_duplex_dmt, witness_check, Cut, DiversityProgram,
};
use dmt_core::montecarlo::{
    antidiagonal_min_check, combined_eigen_sanity, covariance_bound_check, diversity_slope, lemma1_check,
    outage_probability, spherical_series, superpoly_decay_check, Lemma1Status, OutageSpec, SphericalExponent,
    SphericalSpec,
};
use dmt_core::{AntennaConfig, ComplexMatrix, PiecewiseLinearCurve};
use serde::Serialize;
use serde_json::json;

use crate::output::{csv_writer, json_num, num, open, opt_num, write_json};
use crate::svg::{self, Series};
use crate::{
    CliError, CurveArgs, CurveMode, CutArg, Format, ReportFormat, Scope, SimulateArgs, SolveArgs, SphericalArgs,
    VerifyArgs, EXIT_INSUFFICIENT_DATA, EXIT_VERIFY_FAILED,
};

type CmdResult = Result<u8, CliError>;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::usage(e.to_string())
}

fn cut_of(c: CutArg) -> Cut {
    match c {
        CutArg::Source => Cut::Source,
        CutArg::Dest => Cut::Destination,
    }
}

fn config(p: usize, m: usize, n: usize) -> Result<AntennaConfig, CliError> {
    AntennaConfig::new(p, m, n).map_err(usage)
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::io(e)
}

fn build_curve(a: &CurveArgs, mode: CurveMode) -> Result<PiecewiseLinearCurve, CliError> {
    let need_m = || {
        a.m.ok_or_else(|| CliError::usage(format!("{} requires -m", mode.name())))
    };
    match mode {
        CurveMode::Ptp => ptp_dmt(a.p, a.n).map_err(usage),
        CurveMode::Fd => full_duplex_dmt(config(a.p, need_m()?, a.n)?).map_err(usage),
        CurveMode::HdAnalytic => {
            if a.p != a.n {
                return Err(CliError::usage("hd-analytic requires p == n"));
            }
            symmetric_half_duplex_dmt(a.n, need_m()?).map_err(usage)
        }
        CurveMode::HdSolver => half_duplex_dmt(config(a.p, need_m()?, a.n)?, a.r_step).map_err(usage),
    }
}

pub fn curve(a: &CurveArgs) -> CmdResult {
    let mut modes = a.modes.clone();
    modes.dedup();
    let curves = modes
        .iter()
        .map(|&mode| build_curve(a, mode).map(|c| (mode, c)))
        .collect::<Result<Vec<_>, _>>()?;
    let path = a.common.output.as_deref();
    match a.format {
        Format::Csv => {
            let mut w = csv_writer(path)?;
            let multi = curves.len() > 1;
            if multi {
                w.write_record(["mode", "r", "d"]).map_err(csv_err)?;
            } else {
                w.write_record(["r", "d"]).map_err(csv_err)?;
            }
            for (mode, c) in &curves {
                for &(r, d) in c.corners() {
                    if multi {
                        w.write_record([mode.name().to_string(), num(r), num(d)]).map_err(csv_err)?;
                    } else {
                        w.write_record([num(r), num(d)]).map_err(csv_err)?;
                    }
                }
            }
            w.flush().map_err(CliError::io)?;
        }
        Format::Json => {
            let list: Vec<_> = curves
                .iter()
                .map(|(mode, c)| json!({ "mode": mode.name(), "corners": c.corners() }))
                .collect();
            write_json(path, &json!({ "p": a.p, "m": a.m, "n": a.n, "curves": list }))?;
        }
        Format::Svg => {
            let series: Vec<Series<'_>> = curves
                .iter()
                .map(|(mode, c)| Series {
                    label: mode.name(),
                    points: c.corners(),
                })
                .collect();
            let mut w = open(path)?;
            w.write_all(svg::plot(&series).as_bytes()).map_err(CliError::io)?;
            w.flush().map_err(CliError::io)?;
        }
    }
    Ok(0)
}

pub fn solve(a: &SolveArgs) -> CmdResult {
    let prog = DiversityProgram::new(config(a.p, a.m, a.n)?, cut_of(a.cut), a.t, a.r).map_err(usage)?;
    let res = diversity_order(&prog).map_err(|e| CliError {
        code: EXIT_VERIFY_FAILED,
        message: e.to_string(),
    })?;
    let path = a.common.output.as_deref();
    match a.format {
        Format::Json => write_json(
            path,
            &json!({
                "p": a.p,
                "m": a.m,
                "n": a.n,
                "cut": prog.cut.to_string(),
                "t": a.t,
                "r": a.r,
                "value": res.value,
                "alphas": res.point.alphas,
                "betas": res.point.betas,
                "active_pattern": res.active_pattern,
            }),
        )?,
        Format::Csv => {
            let mut w = csv_writer(path)?;
            w.write_record(["variable", "value"]).map_err(csv_err)?;
            w.write_record(["value".to_string(), num(res.value)]).map_err(csv_err)?;
            for (i, x) in res.point.alphas.iter().enumerate() {
                w.write_record([format!("alpha_{}", i + 1), num(*x)]).map_err(csv_err)?;
            }
            for (i, x) in res.point.betas.iter().enumerate() {
                w.write_record([format!("beta_{}", i + 1), num(*x)]).map_err(csv_err)?;
            }
            w.flush().map_err(CliError::io)?;
        }
        Format::Svg => return Err(CliError::usage("solve supports --format csv or json")),
    }
    Ok(0)
}

pub fn simulate(a: &SimulateArgs) -> CmdResult {
    if a.format == Format::Svg {
        return Err(CliError::usage("simulate supports --format csv or json"));
    }
    let cfg = config(a.p, a.m, a.n)?;
    let cut = cut_of(a.cut);
    let workers = a
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let spec = OutageSpec {
        cfg,
        cut,
        t: a.t,
        r: a.r,
        snr_db: a.snr_db.clone(),
        trials_per_point: a.trials,
        seed: a.seed,
        workers,
    };
    spec.validate().map_err(usage)?;
    let series = outage_probability(&spec).map_err(usage)?;
    let fit = diversity_slope(&series).ok();
    // No reference above the largest multiplexing gain.
    let reference = DiversityProgram::new(cfg, cut, a.t, a.r)
        .ok()
        .and_then(|prog| diversity_order(&prog).ok())
        .map(|res| res.value);

    let path = a.common.output.as_deref();
    if a.format == Format::Json {
        let points: Vec<_> = series
            .points()
            .iter()
            .map(|pt| {
                json!({
                    "snr_db": pt.snr_db,
                    "p_linear": pt.p_linear,
                    "outage": pt.outage,
                    "ci_low": pt.ci_low,
                    "ci_high": pt.ci_high,
                    "events": pt.events,
                    "trials": pt.trials,
                })
            })
            .collect();
        write_json(
            path,
            &json!({
                "p": a.p,
                "m": a.m,
                "n": a.n,
                "cut": cut.to_string(),
                "t": a.t,
                "r": a.r,
                "seed": a.seed,
                "trials": a.trials,
                "points": points,
                "slope": fit.as_ref().map(|f| json_num(f.diversity)),
                "stderr": fit.as_ref().map(|f| json_num(f.stderr)),
                "solver_reference": reference,
            }),
        )?;
    } else {
        let mut w = csv_writer(path)?;
        w.write_record(["snr_db", "p_linear", "outage", "ci_low", "ci_high", "events"])
            .map_err(csv_err)?;
        for pt in series.points() {
            w.write_record([
                num(pt.snr_db),
                num(pt.p_linear),
                num(pt.outage),
                num(pt.ci_low),
                num(pt.ci_high),
                pt.events.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.write_record([
            "slope".to_string(),
            opt_num(fit.as_ref().map(|f| f.diversity)),
            "stderr".to_string(),
            opt_num(fit.as_ref().map(|f| f.stderr)),
            "solver_reference".to_string(),
            opt_num(reference),
        ])
        .map_err(csv_err)?;
        w.flush().map_err(CliError::io)?;
    }
    if fit.is_none() {
        eprintln!(
            "error: fewer than 3 SNR points with at least {} outage events; no slope fitted",
            dmt_core::montecarlo::MIN_EVENTS
        );
        return Ok(EXIT_INSUFFICIENT_DATA);
    }
    Ok(0)
}

pub fn spherical(a: &SphericalArgs) -> CmdResult {
    if a.format == Format::Svg {
        return Err(CliError::usage("spherical supports --format csv or json"));
    }
    let spec = SphericalSpec::new(a.n, a.p, a.m, a.alphas.clone(), a.betas.clone()).map_err(usage)?;
    if a.powers.is_empty() || a.powers.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
        return Err(CliError::usage("--power values must be positive"));
    }
    let fit = spherical_series(&spec, &a.powers, a.trials, a.seed).map_err(usage)?;
    let superpoly = match fit.predicted {
        SphericalExponent::MinusInfinity => {
            Some(superpoly_decay_check(&spec, &a.powers, a.trials, a.seed).map_err(usage)?)
        }
        SphericalExponent::Finite(_) => None,
    };
    let predicted = match fit.predicted {
        SphericalExponent::Finite(x) => num(x),
        SphericalExponent::MinusInfinity => "-inf".to_string(),
    };

    let path = a.common.output.as_deref();
    if a.format == Format::Json {
        let estimates: Vec<_> = fit
            .estimates
            .iter()
            .map(|e| json!({ "power": e.snr, "estimate": e.mean, "stderr": e.stderr }))
            .collect();
        let mut doc = json!({
            "n": a.n,
            "p": a.p,
            "m": a.m,
            "alphas": a.alphas,
            "betas": a.betas,
            "trials": a.trials,
            "seed": a.seed,
            "estimates": estimates,
            "predicted_exponent": predicted,
        });
        match &superpoly {
            Some(check) => doc["superpoly_check"] = serde_json::to_value(check).map_err(CliError::io)?,
            None => {
                doc["fitted_slope"] = json!(fit.slope);
                doc["slope_stderr"] = json!(fit.slope_stderr);
            }
        }
        write_json(path, &doc)?;
    } else {
        let mut w = csv_writer(path)?;
        match &superpoly {
            Some(check) => {
                w.write_record(["power", "estimate", "stderr", "bound", "pass"]).map_err(csv_err)?;
                for pt in &check.points {
                    w.write_record([num(pt.snr), num(pt.estimate), num(pt.stderr), num(pt.bound), pt.pass.to_string()])
                        .map_err(csv_err)?;
                }
                w.write_record(["predicted_exponent", &predicted, "c", &num(check.c), &check.pass.to_string()])
                    .map_err(csv_err)?;
            }
            None => {
                w.write_record(["power", "estimate", "stderr"]).map_err(csv_err)?;
                for e in &fit.estimates {
                    w.write_record([num(e.snr), num(e.mean), num(e.stderr)]).map_err(csv_err)?;
                }
                w.write_record(["predicted_exponent", &predicted, ""]).map_err(csv_err)?;
                w.write_record(["fitted_slope".to_string(), opt_num(fit.slope), opt_num(fit.slope_stderr)])
                    .map_err(csv_err)?;
            }
        }
        w.flush().map_err(CliError::io)?;
    }
    match superpoly {
        Some(check) if !check.pass => Ok(EXIT_VERIFY_FAILED),
        _ => Ok(0),
    }
}

#[derive(Debug, Serialize)]
struct CheckRow {
    check: &'static str,
    case: String,
    pass: bool,
    detail: String,
}

fn row(check: &'static str, case: String, pass: bool, detail: String) -> CheckRow {
    CheckRow {
        check,
        case,
        pass,
        detail,
    }
}

fn failure(check: &'static str, case: String, e: impl std::fmt::Display) -> CheckRow {
    row(check, case, false, format!("error: {e}"))
}

fn verify_witness(rows: &mut Vec<CheckRow>) {
    for n in 1..=3 {
        for m in 1..=7 {
            for c in symmetric_corners(n, m) {
                let case = format!("n={n} m={m} {} l={}", c.regime, c.l);
                let w = match witness_check(n, m, c.regime, c.l) {
                    Ok(w) => w,
                    Err(e) => {
                        rows.push(failure("witness", case, e));
                        continue;
                    }
                };
                let lp = match diversity_order(&w.program) {
                    Ok(res) => res.value,
                    Err(e) => {
                        rows.push(failure("witness", case, e));
                        continue;
                    }
                };
                let pass = w.feasible() && w.value == c.d && (lp - c.d).abs() <= 1e-9;
                let detail = format!("d={} witness={} lp={}", num(c.d), num(w.value), num(lp));
                rows.push(row("witness", case, pass, detail));
            }
        }
    }
}

fn verify_oracle(rows: &mut Vec<CheckRow>) {
    const RES: u32 = 32;
    for cut in [Cut::Destination, Cut::Source] {
        for p in 1..=2 {
            for m in 1..=2 {
                for n in 1..=2 {
                    let cfg = AntennaConfig { p, m, n };
                    let rmax = cfg.max_multiplexing() as f64;
                    for t in [0.0, 0.5, 1.0] {
                        for r in [0.0, 0.5 * rmax, rmax] {
                            let case = format!("p={p} m={m} n={n} {cut} t={t} r={r}");
                            let outcome = DiversityProgram::new(cfg, cut, t, r).and_then(|prog| {
                                let lp = diversity_order(&prog)?.value;
                                let oracle = grid_oracle(&prog, RES)?;
                                Ok((lp, oracle, prog.coefficient_l1() / RES as f64))
                            });
                            match outcome {
                                Ok((lp, oracle, bound)) => {
                                    let pass = (lp - oracle).abs() <= bound && oracle >= lp - 1e-9;
                                    let detail = format!("lp={} oracle={} bound={}", num(lp), num(oracle), num(bound));
                                    rows.push(row("oracle", case, pass, detail));
                                }
                                Err(e) => rows.push(failure("oracle", case, e)),
                            }
                        }
                    }
                }
            }
        }
    }
}

fn verify_haar(rows: &mut Vec<CheckRow>, seed: u64) {
    let case = "lambda=(2,1) mu=(3,1) 10000 draws".to_string();
    match antidiagonal_min_check(&[2.0, 1.0], &[3.0, 1.0], 2, 10_000, seed) {
        Ok(c) => {
            let detail = format!("floor={} min={} violations={}", num(c.floor), num(c.min_value), c.violations);
            rows.push(row("haar", case, c.pass(), detail));
        }
        Err(e) => rows.push(failure("haar", case, e)),
    }
}

fn verify_lemma1(rows: &mut Vec<CheckRow>, seed: u64) {
    let case = "A=[4] n=1 100000 draws".to_string();
    let a = ComplexMatrix::from_real_rows(&[&[4.0]]).expect("1x1 matrix");
    match lemma1_check(&a, 1, 100_000, seed) {
        Ok(rep) => {
            let z = (rep.estimate - 0.2).abs() / rep.stderr;
            let pass = z <= 3.0 && rep.status == Lemma1Status::Pass;
            let detail = format!(
                "estimate={:.6} ({z:.2} sigma from 0.2) det*P={:.4} in [{:.4}, {:.4}]",
                rep.estimate, rep.det_product, rep.lower, rep.upper
            );
            rows.push(row("lemma1", case, pass, detail));
        }
        Err(e) => rows.push(failure("lemma1", case, e)),
    }
}

fn verify_covariance(rows: &mut Vec<CheckRow>, seed: u64) {
    let case = "n=2 m=2 P=10 10000 draws".to_string();
    match covariance_bound_check(2, 2, 10.0, 10_000, seed) {
        Ok(c) => {
            let detail = format!("violations={} worst_margin={:.3e}", c.violations, c.worst_margin);
            rows.push(row("covariance", case, c.pass(), detail));
        }
        Err(e) => rows.push(failure("covariance", case, e)),
    }
}

fn verify_identity(rows: &mut Vec<CheckRow>, seed: u64) {
    let case = "p=m=n=2 P=100 1000 draws".to_string();
    match combined_eigen_sanity(AntennaConfig { p: 2, m: 2, n: 2 }, 100.0, 1_000, seed) {
        Ok(c) => {
            let detail = format!("violations={} max_error={:.3e}", c.violations, c.max_error);
            rows.push(row("identity", case, c.pass(), detail));
        }
        Err(e) => rows.push(failure("identity", case, e)),
    }
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let mut rows = Vec::new();
    let all = a.scope == Scope::All;
    if all || a.scope == Scope::Witness {
        verify_witness(&mut rows);
    }
    if all || a.scope == Scope::Oracle {
        verify_oracle(&mut rows);
    }
    if all || a.scope == Scope::Haar {
        verify_haar(&mut rows, a.seed);
    }
    if all || a.scope == Scope::Lemma1 {
        verify_lemma1(&mut rows, a.seed);
    }
    if all || a.scope == Scope::Covariance {
        verify_covariance(&mut rows, a.seed);
    }
    if all || a.scope == Scope::Identity {
        verify_identity(&mut rows, a.seed);
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let path = a.common.output.as_deref();
    match a.format {
        ReportFormat::Json => write_json(
            path,
            &json!({ "seed": a.seed, "checks": rows, "passed": rows.len() - failed, "failed": failed }),
        )?,
        ReportFormat::Text => {
            let mut w = open(path)?;
            let width = rows.iter().map(|r| r.case.len()).max().unwrap_or(0);
            for r in &rows {
                let status = if r.pass { "PASS" } else { "FAIL" };
                writeln!(w, "{status}  {:<10}  {:<width$}  {}", r.check, r.case, r.detail).map_err(CliError::io)?;
            }
            writeln!(w, "{} of {} checks passed", rows.len() - failed, rows.len()).map_err(CliError::io)?;
            w.flush().map_err(CliError::io)?;
        }
    }
    Ok(if failed == 0 { 0 } else { EXIT_VERIFY_FAILED })
}

