use alloc::vec;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, Signed, ToPrimitive};

use super::envelope::envelope;
use super::{int, Envelope, HermiteFlags, Method, Squares};
use crate::error::{Error, Result};
use crate::lattice::complete_sequence;
use crate::numeric::{QuadraticReal, RealSpec};

/// Relative gap under which two candidate values are compared exactly.
const TIE_GAP: f64 = 1e-9;

const POINTS_PER_DECADE: f64 = 16.0;

/// Outcome of a grid scan of `Delta*A_k + B_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaScan {
    pub flags: HermiteFlags,
    /// Grid points actually evaluated, including any added by refinement.
    pub grid_len: usize,
    pub refined: bool,
}

fn ratio(x: f64) -> BigRational {
    BigRational::from_f64(x).unwrap_or_else(BigRational::one)
}

fn quad(r: &BigRational) -> QuadraticReal {
    QuadraticReal::from_ratio(r.numer().clone(), r.denom().clone())
}

/// Geometric grid over `[min/2, 2*max]` of the envelope breakpoints plus midpoints of consecutive ones.
pub fn default_delta_grid(env: &Envelope) -> Vec<BigRational> {
    let deltas: Vec<f64> = env
        .breakpoints
        .iter()
        .map(|b| b.delta)
        .filter(|d| d.is_finite() && *d > 0.0)
        .collect();
    let (Some(lo), Some(hi)) = (
        deltas.iter().copied().reduce(f64::min),
        deltas.iter().copied().reduce(f64::max),
    ) else {
        return vec![BigRational::one()];
    };
    let (lo, hi) = (lo / 2.0, hi * 2.0);
    let step = Float::powf(10.0, 1.0 / POINTS_PER_DECADE);
    let mut grid = Vec::new();
    let mut x = lo;
    while x <= hi {
        grid.push(ratio(x));
        x *= step;
    }
    grid.push(ratio(hi));
    grid.extend(deltas.windows(2).map(|w| ratio((w[0] + w[1]) / 2.0)));
    grid
}

/// Indices minimizing `Delta*A_k + B_k`, ties included.
fn minimizers(squares: &Squares, delta: &QuadraticReal, approx: f64) -> Result<Vec<usize>> {
    let values: Vec<f64> = (0..squares.len())
        .map(|k| approx * squares.approx(k) + squares.b(k).to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let cands: Vec<usize> = (0..values.len())
        .filter(|&k| values[k] <= min * (1.0 + TIE_GAP))
        .collect();
    if cands.len() == 1 {
        return Ok(cands);
    }
    let cmp = |i: usize, j: usize| {
        squares.sign(
            &[(i, delta.clone()), (j, -delta)],
            &int(squares.b(i) - squares.b(j)),
        )
    };
    let mut best = cands[0];
    for &c in &cands[1..] {
        if cmp(c, best)? < 0 {
            best = c;
        }
    }
    let mut out = Vec::new();
    for &c in &cands {
        if c == best || cmp(c, best)? == 0 {
            out.push(c);
        }
    }
    Ok(out)
}

fn witnesses(squares: &Squares, grid: &[(QuadraticReal, f64)], seen: &mut [bool]) -> Result<()> {
    for (delta, approx) in grid {
        for k in minimizers(squares, delta, *approx)? {
            seen[k] = true;
        }
    }
    Ok(())
}

/// Scans `X_0..X_n`; flags cover the same indices as the envelope of that sequence.
pub fn delta_scan(theta: &RealSpec, n: usize, grid: Option<&[BigRational]>) -> Result<DeltaScan> {
    let seq = complete_sequence(theta, n)?;
    let env = envelope(theta, &seq)?;
    let squares = Squares::new(theta, &seq);
    let base = match grid {
        Some(g) => g.to_vec(),
        None => default_delta_grid(&env),
    };
    if base.is_empty() || base.iter().any(|d| !d.is_positive()) {
        return Err(Error::InvalidArgument(
            "delta grid must be non-empty and positive",
        ));
    }
    let mut points: Vec<(QuadraticReal, f64)> = base
        .iter()
        .map(|d| (quad(d), d.to_f64().unwrap_or(f64::INFINITY)))
        .collect();
    let reported = env.reported();
    let mut seen = vec![false; seq.len()];
    witnesses(&squares, &points, &mut seen)?;
    let missing = |seen: &[bool]| (0..reported).find(|&k| env.flags[k] && !seen[k]);
    let mut refined = false;
    if missing(&seen).is_some() {
        refined = true;
        let mut extra = Vec::new();
        for (i, b) in env.breakpoints.iter().enumerate() {
            match Envelope::exact_delta(&squares, b.left_index, b.right_index) {
                Some(d) => extra.push((d, b.delta)),
                None => extra.push((quad(&ratio(b.delta)), b.delta)),
            }
            if let Some(next) = env.breakpoints.get(i + 1) {
                let mid = (b.delta + next.delta) / 2.0;
                extra.push((quad(&ratio(mid)), mid));
            }
        }
        witnesses(&squares, &extra, &mut seen)?;
        points.extend(extra);
        if let Some(index) = missing(&seen) {
            return Err(Error::GridTooCoarse { index });
        }
    }
    seen.truncate(reported);
    Ok(DeltaScan {
        flags: HermiteFlags {
            theta: theta.clone(),
            flags: seen.into_iter().map(Some).collect(),
            method: Method::DeltaScan,
        },
        grid_len: points.len(),
        refined,
    })
}

pub fn flags_via_delta_scan(
    theta: &RealSpec,
    n: usize,
    grid: Option<&[BigRational]>,
) -> Result<HermiteFlags> {
    delta_scan(theta, n, grid).map(|s| s.flags)
}
