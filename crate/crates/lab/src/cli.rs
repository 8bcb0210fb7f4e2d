//! Command-line surface. Every command emits one [`OutputRecord`].

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hermite_lab_core::cf::{cf_expand, convergents, reduce_theta};
use hermite_lab_core::dynamics::{mu_measure_v, mu_v_exact, orbit, DomainPoint};
use hermite_lab_core::hermite::{
    delta_scan, flags_via_criterion, flags_via_envelope, hermite_subsequence, HermiteFlags,
};
use hermite_lab_core::lattice::{complete_sequence, Lattice};
use hermite_lab_core::numeric::{parse_real, RealSpec};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::experiment::{
    default_precision_bits, experiment_convergence, run_experiment, ExperimentConfig, ThetaSource,
};
use crate::report::{csv_sibling, write_rows_csv, OutputRecord};
use crate::LabError;

pub const MAX_BITS_ENV: &str = "HERMITE_LAB_MAX_BITS";

#[derive(Debug, Parser)]
#[command(
    name = "hermite-lab",
    version,
    about = "Minimal vectors, Hermite flags and ergodic statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial quotients and convergents of the reduced input
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Hermite flags of X_0..X_{n-1}
    Flags {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        n: usize,
        /// Cross-check against the envelope and the delta scan
        #[arg(long)]
        verify: bool,
    },
    /// Orbit of (x, y) under the natural extension; negative n runs backwards
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Invariant measure of the region V
    Measure {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Sampled Hermite proportions, Levy rates and growth rates
    Experiment {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 5000)]
        depth: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Input precision of each sample (default 4*depth + 256)
        #[arg(long)]
        precision_bits: Option<u32>,
        /// Comma-separated depths for a mean convergence table
        #[arg(long, value_delimiter = ',')]
        checkpoints: Vec<usize>,
        /// Write JSON here and CSV next to it instead of printing
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse(text: &str) -> Result<RealSpec, LabError> {
    Ok(parse_real(text)?)
}

#[derive(Serialize)]
struct ConvergentOut {
    index: usize,
    p: String,
    q: String,
}

fn expand(theta: &str, n: usize, format: Format, out: &mut dyn Write) -> Result<(), LabError> {
    let spec = parse(theta)?;
    let reduced = reduce_theta(&spec)?;
    let pq = cf_expand(&reduced.x0, n)?;
    let conv = convergents(&pq);
    let quotients: Vec<String> = pq.quotients.iter().map(|a| a.to_string()).collect();
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "quotient", "p", "q"])?;
        for c in &conv {
            let a = if c.index == 0 {
                String::new()
            } else {
                quotients[c.index - 1].clone()
            };
            w.write_record([c.index.to_string(), a, c.p.to_string(), c.q.to_string()])?;
        }
        w.flush()?;
        return Ok(());
    }
    let results = json!({
        "nearest": reduced.nearest.to_string(),
        "sign": reduced.sign,
        "x0": reduced.x0.to_string(),
        "quotients": quotients,
        "terminated": pq.terminated,
        "convergents": conv
            .iter()
            .map(|c| ConvergentOut { index: c.index, p: c.p.to_string(), q: c.q.to_string() })
            .collect::<Vec<_>>(),
    });
    emit(
        out,
        OutputRecord::new("expand", json!({"theta": theta, "n": n}), results)?,
    )
}

#[derive(Serialize)]
struct Verification {
    envelope: Vec<Option<bool>>,
    delta_scan: Vec<Option<bool>>,
    delta_refined: bool,
    mismatches: Vec<usize>,
}

#[derive(Serialize)]
struct FlagsOut {
    method: &'static str,
    flags: Vec<Option<bool>>,
    decided: usize,
    hermite_count: usize,
    /// Second coordinates of flagged vectors with `q >= 1`.
    hermite_q: Vec<String>,
    includes_origin: bool,
    verification: Option<Verification>,
}

fn flags(theta: &str, n: usize, verify: bool, out: &mut dyn Write) -> Result<(), LabError> {
    let spec = parse(theta)?;
    let crit = flags_via_criterion(&spec, n)?;
    let (seq, _) = Lattice::new(spec.clone()).certified_sequence(n)?;
    let aligned = HermiteFlags {
        flags: crit.flags.iter().take(seq.len()).cloned().collect(),
        ..crit.clone()
    };
    let sub = hermite_subsequence(&aligned, &seq)?;
    let verification = if verify {
        let full = complete_sequence(&spec, n)?;
        let env = flags_via_envelope(&spec, &full)?;
        let scan = delta_scan(&spec, n, None).map_err(|e| match e {
            hermite_lab_core::Error::GridTooCoarse { .. } => LabError::Mismatch(e.to_string()),
            e => LabError::Core(e),
        })?;
        let mut mismatches = crit.mismatches(&env);
        mismatches.extend(crit.mismatches(&scan.flags));
        mismatches.extend(env.mismatches(&scan.flags));
        mismatches.sort_unstable();
        mismatches.dedup();
        Some(Verification {
            envelope: env.flags,
            delta_scan: scan.flags.flags,
            delta_refined: scan.refined,
            mismatches,
        })
    } else {
        None
    };
    let bad = verification
        .as_ref()
        .map_or(Vec::new(), |v| v.mismatches.clone());
    let results = FlagsOut {
        method: "criterion",
        decided: crit.decided(),
        hermite_count: crit.hermite_count(),
        flags: crit.flags,
        hermite_q: sub.entries.iter().map(|e| e.h.to_string()).collect(),
        includes_origin: sub.includes_origin,
        verification,
    };
    let inputs = json!({"theta": theta, "n": n, "verify": verify});
    emit(out, OutputRecord::new("flags", inputs, results)?)?;
    if !bad.is_empty() {
        return Err(LabError::Mismatch(format!(
            "methods disagree at indices {bad:?}"
        )));
    }
    Ok(())
}

fn exact_coordinate(spec: &RealSpec) -> Option<BigRational> {
    match spec {
        RealSpec::Rational(r) => Some(r.clone()),
        RealSpec::Decimal(d) => Some(d.value().clone()),
        RealSpec::Quadratic(_) => None,
    }
}

#[derive(Serialize)]
struct PointOut {
    step: i64,
    x: f64,
    y: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    x_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y_exact: Option<String>,
}

fn orbit_cmd(x: &str, y: &str, n: i64, out: &mut dyn Write) -> Result<(), LabError> {
    let (xs, ys) = (parse(x)?, parse(y)?);
    let dir = if n < 0 { -1 } else { 1 };
    let points: Vec<PointOut> = match (exact_coordinate(&xs), exact_coordinate(&ys)) {
        (Some(xr), Some(yr)) => orbit(&DomainPoint::new(xr, yr), n)?
            .iter()
            .zip(0..)
            .map(|(p, k)| {
                let f = p.to_f64();
                PointOut {
                    step: dir * k,
                    x: f.x,
                    y: f.y,
                    x_exact: Some(ratio_string(&p.x)),
                    y_exact: Some(ratio_string(&p.y)),
                }
            })
            .collect(),
        _ => orbit(&DomainPoint::new(xs.to_f64(), ys.to_f64()), n)?
            .iter()
            .zip(0..)
            .map(|(p, k)| PointOut {
                step: dir * k,
                x: p.x,
                y: p.y,
                x_exact: None,
                y_exact: None,
            })
            .collect(),
    };
    let inputs = json!({"x": x, "y": y, "n": n});
    emit(
        out,
        OutputRecord::new("orbit", inputs, json!({ "points": points }))?,
    )
}

fn measure(tol: f64, out: &mut dyn Write) -> Result<(), LabError> {
    let mu = mu_measure_v(tol)?;
    let exact = mu_v_exact();
    let results = json!({
        "mu_v": mu,
        "tolerance": tol,
        "closed_form": exact,
        "abs_error": (mu - exact).abs(),
    });
    emit(
        out,
        OutputRecord::new("measure", json!({ "tol": tol }), results)?,
    )
}

fn experiment(
    cfg: ExperimentConfig,
    checkpoints: &[usize],
    path: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<(), LabError> {
    let report = run_experiment(&cfg)?;
    let mut results = serde_json::to_value(&report)?;
    if !checkpoints.is_empty() {
        results["convergence"] = serde_json::to_value(experiment_convergence(&cfg, checkpoints)?)?;
    }
    let inputs = json!({
        "samples": cfg.sample_count,
        "depth": cfg.depth,
        "seed": cfg.seed,
        "precision_bits": cfg.precision_bits,
    });
    let record = OutputRecord::new("experiment", inputs, results)?;
    match path {
        None => emit(out, record),
        Some(p) => {
            std::fs::write(p, record.to_json()? + "\n")?;
            let csv_path = csv_sibling(p);
            write_rows_csv(BufWriter::new(File::create(&csv_path)?), &report.rows)?;
            writeln!(out, "wrote {} and {}", p.display(), csv_path.display())?;
            Ok(())
        }
    }
}

fn emit(out: &mut dyn Write, record: OutputRecord) -> Result<(), LabError> {
    writeln!(out, "{}", record.to_json()?)?;
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), LabError> {
    match cli.command {
        Command::Expand { theta, n, format } => expand(&theta, n, format, out),
        Command::Flags { theta, n, verify } => flags(&theta, n, verify, out),
        Command::Orbit { x, y, n } => orbit_cmd(&x, &y, n, out),
        Command::Measure { tol } => measure(tol, out),
        Command::Experiment {
            samples,
            depth,
            seed,
            precision_bits,
            checkpoints,
            out: path,
        } => {
            let cfg = ExperimentConfig {
                sample_count: samples,
                depth,
                seed,
                precision_bits: precision_bits.unwrap_or_else(|| default_precision_bits(depth)),
                theta_source: ThetaSource::Uniform01,
            };
            experiment(cfg, &checkpoints, path.as_ref(), out)
        }
    }
}

/// Reads the precision cap override, if set.
pub fn max_bits_from_env() -> Result<Option<u32>, LabError> {
    match std::env::var(MAX_BITS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|b| *b >= 64)
            .map(Some)
            .ok_or_else(|| LabError::Config(format!("{MAX_BITS_ENV} must be an integer >= 64"))),
        Err(_) => Ok(None),
    }
}
