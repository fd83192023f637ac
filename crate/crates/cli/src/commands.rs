use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use spdp::io::{fmt_real, read_vector_csv, write_pgm, write_vector_csv};
use spdp::tomo::{
    build_ct_problem, paralleltomo, relative_error, shepp_logan, snr_db, TomoProblem,
};
use spdp::{solve, SolveOptions, SolveResult};

use crate::bundle::{self, ensure_dir, write_text};
use crate::config::{Angles, GeometryConfig, NoiseConfig, RunConfig};

pub fn phantom(n: usize, out: &Path) -> Result<()> {
    anyhow::ensure!(n >= 1, "phantom size n must be at least 1");
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    write_pgm(out, n, n, &shepp_logan(n))?;
    Ok(())
}

/// Noiseless problem from the config geometry with configured noise applied.
/// Returns the problem, the noise model used and the number of impulses.
pub fn simulate_problem(
    config: &RunConfig,
) -> Result<(TomoProblem, spdp::tomo::NoiseModel, usize)> {
    let g = config.geometry.geometry()?;
    let mut problem = paralleltomo(g.n, g.angles_deg, Some(g.p))?;
    let noise = config.noise.model(&problem.b);
    let (noisy, mask) = noise
        .apply(&problem.b, config.noise.seed)
        .context("invalid [noise] section")?;
    problem.b = noisy;
    Ok((problem, noise, mask.iter().filter(|&&m| m).count()))
}

pub fn simulate(config: &RunConfig, out: &Path) -> Result<()> {
    let (problem, noise, impulses) = simulate_problem(config)?;
    bundle::write_problem(out, &problem, &noise, config.noise.seed, impulses)?;
    write_text(&out.join(bundle::CONFIG_ECHO), &config.to_toml()?)?;
    let s = spdp::LinearOperator::shape(&*problem.a);
    println!(
        "wrote {} ({} rows, {} columns, {} nonzeros, {impulses} impulses)",
        out.display(),
        s.rows,
        s.cols,
        problem.a.nnz()
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct Summary {
    converged: bool,
    iterations: usize,
    final_rel_change: f64,
    objective: f64,
    snr: f64,
    snr_unit: &'static str,
    relative_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    operator_norm: Option<f64>,
}

pub struct SolveOutcome {
    pub result: SolveResult,
    pub snr: f64,
}

fn snr_value(literal: bool, truth: &[f64], rec: &[f64]) -> Result<f64> {
    let db = snr_db(truth, rec)?;
    Ok(if literal { db / 10.0 } else { db })
}

/// Runs one reconstruction and writes the result bundle to `out`.
pub fn solve_to(config: &RunConfig, out: &Path) -> Result<SolveOutcome> {
    let mut config = config.clone();
    let problem = match &config.io.bundle {
        Some(dir) => {
            let (problem, meta) = bundle::read_problem(dir)?;
            // the echo records what was solved, not the unused defaults
            config.geometry = GeometryConfig {
                n: meta.geometry.n,
                angles: Angles::List(meta.geometry.angles_deg),
                p: Some(meta.geometry.p),
            };
            config.noise = NoiseConfig {
                gaussian_sigma: Some(meta.noise.gaussian_sigma),
                impulse_fraction: meta.noise.impulse_fraction,
                impulse_scale: meta.noise.impulse_scale,
                seed: meta.noise.seed,
            };
            problem
        }
        None => simulate_problem(&config)?.0,
    };
    let config = &config;
    let spec = config.model.spec()?;
    let ct = build_ct_problem(&problem, &spec)?;
    let policy = config.solver.policy(&ct)?;
    let stop = config.solver.stop_rule()?;
    let opts = SolveOptions {
        log_every: config.solver.log_every,
        reference: Some(problem.x_true.clone()),
        seed: config.solver.power_seed,
        ..SolveOptions::default()
    };

    let started = Instant::now();
    let result = solve(&ct, &policy, &stop, &opts)?;
    let wall = started.elapsed();

    let literal = config.io.snr_literal;
    let snr = snr_value(literal, &problem.x_true, &result.x)?;
    let unit = if literal { "log10" } else { "dB" };

    ensure_dir(out)?;
    let n = problem.geometry.n;
    write_pgm(&out.join(bundle::RECON_FILE), n, n, &result.x)?;
    write_vector_csv(&out.join(bundle::SOLUTION_FILE), &result.x)?;

    let mut hist = String::from(if literal {
        "iter,rel_change,objective,snr_log10\n"
    } else {
        "iter,rel_change,objective,snr_db\n"
    });
    for h in &result.history {
        let s = h.snr_db.map(|v| if literal { v / 10.0 } else { v });
        writeln!(
            hist,
            "{},{},{},{}",
            h.iteration,
            fmt_real(h.rel_change),
            fmt_real(h.objective),
            s.map_or(String::new(), fmt_metric)
        )?;
    }
    write_text(&out.join(bundle::HISTORY_FILE), &hist)?;

    let last = result.history.last().copied();
    let summary = Summary {
        converged: result.converged,
        iterations: result.iterations,
        final_rel_change: last.map_or(f64::NAN, |h| h.rel_change),
        objective: last.map_or(f64::NAN, |h| h.objective),
        snr,
        snr_unit: unit,
        relative_error: relative_error(&problem.x_true, &result.x)?,
        operator_norm: result.operator_norm,
    };
    write_text(&out.join(bundle::SUMMARY_FILE), &toml::to_string(&summary)?)?;
    write_text(&out.join(bundle::CONFIG_ECHO), &config.to_toml()?)?;

    println!(
        "converged={} iterations={} snr={snr:.4} {unit} rel_change={:.3e} wall_time={:.3}s",
        result.converged,
        result.iterations,
        summary.final_rel_change,
        wall.as_secs_f64()
    );
    Ok(SolveOutcome { result, snr })
}

/// `inf` for a perfect match, otherwise 17 significant digits.
pub fn fmt_metric(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        fmt_real(v)
    }
}

pub struct EvalReport {
    pub snr: f64,
    pub relative_error: f64,
}

pub fn eval(truth: &Path, rec: &Path, literal: bool) -> Result<EvalReport> {
    let t = read_vector_csv(truth)?;
    let r = read_vector_csv(rec)?;
    anyhow::ensure!(
        t.len() == r.len(),
        "length mismatch: {} has {} values, {} has {}",
        truth.display(),
        t.len(),
        rec.display(),
        r.len()
    );
    let report = EvalReport {
        snr: snr_value(literal, &t, &r)?,
        relative_error: relative_error(&t, &r)?,
    };
    println!(
        "snr_{}={} relative_error={}",
        if literal { "log10" } else { "db" },
        fmt_metric(report.snr),
        fmt_real(report.relative_error)
    );
    Ok(report)
}
