//! Monte-Carlo runs of the per-theta statistics over many sampled theta.

use hermite_lab_core::ergodic::{
    analyze_theta, convergence_table, hermite_growth_target, levy_target, proportion_target,
    Summary, ThetaReport,
};
use hermite_lab_core::numeric::{DecimalReal, RealSpec};
use num_bigint::{BigInt, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::LabError;

pub const MIN_DEPTH: usize = 10;

/// Bits needed to certify `depth` flags: `ln q_k` grows by about 1.19 nats per step and the
/// last tail needs about `2 log2 q_k` bits, plus slack.
pub fn default_precision_bits(depth: usize) -> u32 {
    (4 * depth + 256).min(u32::MAX as usize) as u32
}

#[derive(Clone, Debug, PartialEq)]
pub enum ThetaSource {
    Uniform01,
    List(Vec<RealSpec>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub sample_count: usize,
    pub depth: usize,
    pub seed: u64,
    pub precision_bits: u32,
    pub theta_source: ThetaSource,
}

impl ExperimentConfig {
    pub fn uniform(sample_count: usize, depth: usize, seed: u64) -> Self {
        Self {
            sample_count,
            depth,
            seed,
            precision_bits: default_precision_bits(depth),
            theta_source: ThetaSource::Uniform01,
        }
    }

    fn validate(&self) -> Result<(), LabError> {
        if self.sample_count == 0 {
            return Err(LabError::Config("sample_count must be positive".into()));
        }
        if self.depth < MIN_DEPTH {
            return Err(LabError::Config(format!(
                "depth must be at least {MIN_DEPTH}"
            )));
        }
        if self.precision_bits < 64 {
            return Err(LabError::Config(
                "precision_bits must be at least 64".into(),
            ));
        }
        Ok(())
    }

    fn thetas(&self) -> Vec<RealSpec> {
        match &self.theta_source {
            ThetaSource::Uniform01 => {
                sample_thetas(self.seed, self.sample_count, self.precision_bits)
            }
            ThetaSource::List(list) => list.iter().take(self.sample_count).cloned().collect(),
        }
    }
}

/// Uniform dyadic decimals `k / 2^bits` in `(0, 1)`; sample `i` uses ChaCha20 stream `i`.
pub fn sample_thetas(seed: u64, count: usize, precision_bits: u32) -> Vec<RealSpec> {
    (0..count)
        .map(|i| sample_theta(seed, i as u64, precision_bits))
        .collect()
}

pub fn sample_theta(seed: u64, index: u64, precision_bits: u32) -> RealSpec {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let k: BigInt = rng.gen_biguint(u64::from(precision_bits)).into();
        if k.bits() > 0 {
            let dec = DecimalReal::from_dyadic(k, precision_bits, precision_bits.max(64))
                .expect("dyadic sample is a valid decimal");
            return RealSpec::Decimal(dec);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub stddev: f64,
    pub stderr: f64,
    pub target: f64,
    pub deviation: f64,
}

impl Stat {
    fn new(values: &[f64], target: f64) -> Self {
        let s = Summary::of(values);
        Self {
            mean: s.mean,
            stddev: s.stddev,
            stderr: s.stderr,
            target,
            deviation: s.mean - target,
        }
    }
}

/// One per-theta row; field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaRow {
    pub theta_id: usize,
    pub n: usize,
    pub decided: usize,
    pub hermite_count: usize,
    pub proportion: f64,
    pub levy_rate: f64,
    pub hermite_growth: f64,
    pub undecided: usize,
}

impl From<&ThetaReport> for ThetaRow {
    fn from(r: &ThetaReport) -> Self {
        Self {
            theta_id: r.theta_id,
            n: r.depth,
            decided: r.n_flags_decided,
            hermite_count: r.hermite_count,
            proportion: r.proportion,
            levy_rate: r.levy_rate,
            hermite_growth: r.hermite_growth,
            undecided: r.undecided_count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub theta_id: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateReport {
    pub sample_count: usize,
    pub depth: usize,
    pub seed: u64,
    pub precision_bits: u32,
    /// Rows entering the statistics.
    pub accepted: usize,
    pub proportion: Stat,
    pub levy_rate: Stat,
    pub hermite_growth: Stat,
    pub rows: Vec<ThetaRow>,
    /// Theta that errored or exceeded the undecided budget; excluded from the statistics.
    pub rejected: Vec<Failure>,
}

fn analyze(id: usize, spec: &RealSpec, depth: usize) -> Result<ThetaReport, Failure> {
    let mut report = analyze_theta(spec, depth).map_err(|e| Failure {
        theta_id: id,
        reason: e.to_string(),
    })?;
    report.theta_id = id;
    if !report.is_accepted() {
        return Err(Failure {
            theta_id: id,
            reason: format!("{} of {} flags undecided", report.undecided_count, depth),
        });
    }
    Ok(report)
}

/// Parallel over theta, reduced in sample order, so the result does not depend on the thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<AggregateReport, LabError> {
    cfg.validate()?;
    let thetas = cfg.thetas();
    let results: Vec<Result<ThetaReport, Failure>> = thetas
        .par_iter()
        .enumerate()
        .map(|(i, spec)| analyze(i, spec, cfg.depth))
        .collect();
    let mut rows = Vec::new();
    let mut rejected = Vec::new();
    for r in results {
        match r {
            Ok(rep) => rows.push(ThetaRow::from(&rep)),
            Err(f) => rejected.push(f),
        }
    }
    let column = |f: fn(&ThetaRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    Ok(AggregateReport {
        sample_count: thetas.len(),
        depth: cfg.depth,
        seed: cfg.seed,
        precision_bits: cfg.precision_bits,
        accepted: rows.len(),
        proportion: Stat::new(&column(|r| r.proportion), proportion_target()),
        levy_rate: Stat::new(&column(|r| r.levy_rate), levy_target()),
        hermite_growth: Stat::new(&column(|r| r.hermite_growth), hermite_growth_target()),
        rows,
        rejected,
    })
}

/// Mean proportion, Levy rate and growth over all samples at each checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub samples: usize,
    pub proportion: f64,
    pub levy_rate: f64,
    pub hermite_growth: f64,
}

pub fn experiment_convergence(
    cfg: &ExperimentConfig,
    checkpoints: &[usize],
) -> Result<Vec<ConvergenceRow>, LabError> {
    cfg.validate()?;
    let thetas = cfg.thetas();
    let tables: Vec<Vec<ThetaReport>> = thetas
        .par_iter()
        .map(|t| convergence_table(t, checkpoints))
        .collect::<Result<_, _>>()?;
    Ok(checkpoints
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let col = |f: fn(&ThetaReport) -> f64| {
                Summary::of(&tables.iter().map(|t| f(&t[j])).collect::<Vec<_>>()).mean
            };
            ConvergenceRow {
                n,
                samples: tables.len(),
                proportion: col(|r| r.proportion),
                levy_rate: col(|r| r.levy_rate),
                hermite_growth: col(|r| r.hermite_growth),
            }
        })
        .collect())
}
