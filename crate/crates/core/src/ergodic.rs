//! Birkhoff averages along a single expansion: Hermite proportion, Levy rate, Hermite growth.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};
use num_bigint::BigInt;
use num_traits::{Float, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hermite::CriterionRun;
use crate::numeric::dyadic::{bit_len, shift};
use crate::numeric::RealSpec;

/// `ln 3 / ln 4`, the almost-sure Hermite proportion.
pub fn proportion_target() -> f64 {
    Float::ln(3.0) / (2.0 * LN_2)
}

/// `pi^2 / (6 ln 3)`, the almost-sure growth rate of `ln h_k / k`.
pub fn hermite_growth_target() -> f64 {
    PI * PI / (6.0 * Float::ln(3.0))
}

/// `pi^2 / (12 ln 2)`, Levy's constant.
pub fn levy_target() -> f64 {
    PI * PI / (12.0 * LN_2)
}

/// Natural log of a positive integer of any size.
pub fn ln_big(n: &BigInt) -> f64 {
    let bits = bit_len(n);
    if bits <= 1000 {
        return Float::ln(n.to_f64().unwrap_or(f64::NAN));
    }
    let top = shift(n, 60 - bits).to_f64().unwrap_or(f64::NAN);
    Float::ln(top) + (bits - 60) as f64 * LN_2
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaReport {
    pub theta_id: usize,
    /// Requested depth: flags of `X_1..X_depth`.
    pub depth: usize,
    pub n_flags_decided: usize,
    pub hermite_count: usize,
    /// Hermite share among decided flags.
    pub proportion: f64,
    /// `ln q / (m - 1)` at the deepest certified index `m`.
    pub levy_rate: f64,
    /// `ln h_k / k` for the deepest Hermite vector with `h >= 1`.
    pub hermite_growth: f64,
    /// Indices up to `depth` left without a flag, including any lost to precision.
    pub undecided_count: usize,
}

impl ThetaReport {
    /// Within the 1% undecided budget.
    pub fn is_accepted(&self) -> bool {
        self.undecided_count * 100 <= self.depth
    }
}

/// Running totals over `X_1, X_2, ...`.
#[derive(Default)]
struct Tally {
    seen: usize,
    decided: usize,
    hermite: usize,
    last_q: Option<BigInt>,
    last_h: Option<BigInt>,
}

impl Tally {
    fn push(&mut self, flag: Option<bool>, q: BigInt) {
        self.seen += 1;
        if let Some(f) = flag {
            self.decided += 1;
            if f {
                self.hermite += 1;
                self.last_h = Some(q.clone());
            }
        }
        self.last_q = Some(q);
    }

    fn report(&self, depth: usize, ended: bool) -> ThetaReport {
        let levy_rate = match &self.last_q {
            Some(q) if self.seen >= 2 && !q.is_zero() => ln_big(q) / (self.seen - 1) as f64,
            _ => 0.0,
        };
        let hermite_growth = match &self.last_h {
            Some(h) if self.hermite > 0 => ln_big(h) / self.hermite as f64,
            _ => 0.0,
        };
        let lost = if ended { 0 } else { depth - self.seen };
        ThetaReport {
            theta_id: 0,
            depth,
            n_flags_decided: self.decided,
            hermite_count: self.hermite,
            proportion: if self.decided == 0 {
                0.0
            } else {
                self.hermite as f64 / self.decided as f64
            },
            levy_rate,
            hermite_growth,
            undecided_count: self.seen - self.decided + lost,
        }
    }
}

/// Walks the criterion to `depth` and calls `at` at each requested checkpoint.
fn walk(spec: &RealSpec, checkpoints: &[usize], mut at: impl FnMut(ThetaReport)) -> Result<()> {
    let mut run = CriterionRun::new(spec)?;
    let mut tally = Tally::default();
    // `Some(true)`: rational end reached; `Some(false)`: precision ran out
    let mut stop: Option<bool> = None;
    for &n in checkpoints {
        while stop.is_none() && tally.seen < n {
            match run.step() {
                Ok(Some(pair)) => tally.push(pair.flag, pair.q),
                Ok(None) => stop = Some(true),
                Err(e) if e.is_precision() => stop = Some(false),
                Err(e) => return Err(e),
            }
        }
        at(tally.report(n, stop == Some(true)));
    }
    Ok(())
}

pub fn analyze_theta(spec: &RealSpec, depth: usize) -> Result<ThetaReport> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be positive"));
    }
    let mut out = None;
    walk(spec, &[depth], |r| out = Some(r))?;
    Ok(out.expect("one checkpoint"))
}

/// Reports at each checkpoint depth along one expansion.
pub fn convergence_table(spec: &RealSpec, checkpoints: &[usize]) -> Result<Vec<ThetaReport>> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) || checkpoints.first() == Some(&0) {
        return Err(Error::InvalidArgument(
            "checkpoints must be positive and increasing",
        ));
    }
    let mut rows = Vec::with_capacity(checkpoints.len());
    walk(spec, checkpoints, |r| rows.push(r))?;
    Ok(rows)
}

/// Mean, sample standard deviation and standard error.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub stddev: f64,
    pub stderr: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self::default();
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stddev = if n < 2 {
            0.0
        } else {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            Float::sqrt(ss / (n - 1) as f64)
        };
        Self {
            mean,
            stddev,
            stderr: stddev / Float::sqrt(n as f64),
        }
    }
}
