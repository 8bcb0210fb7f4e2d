use alloc::vec;
use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

use super::{HermiteFlags, Method};
use crate::cf::{reduce_theta, GaussExpansion, Tail};
use crate::error::{Error, Result};
use crate::numeric::dyadic::ratio_to_f64;
use crate::numeric::RealSpec;

/// Margin above which the double-precision test of `x > (2y+1)/(y+2)` is trusted.
const FLOAT_MARGIN: f64 = 1e-9;

/// Outcome for one pair `(X_k, X_{k+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFlag {
    /// Hermite status of `X_{k+1}`, `None` if undecided.
    pub flag: Option<bool>,
    /// `q_k`, the second coordinate of `X_{k+1}`.
    pub q: BigInt,
}

/// Streaming evaluation of the region test along the pair orbit.
#[derive(Clone, Debug)]
pub struct CriterionRun {
    expansion: GaussExpansion,
    q_prev: BigInt,
    q: BigInt,
    y: f64,
    pending: Option<Error>,
    done: bool,
}

impl CriterionRun {
    pub fn new(theta: &RealSpec) -> Result<Self> {
        let reduced = reduce_theta(theta)?;
        Ok(Self {
            expansion: GaussExpansion::new(&reduced.x0)?,
            q_prev: BigInt::zero(),
            q: BigInt::from(1),
            y: 0.0,
            pending: None,
            done: false,
        })
    }

    /// Index `k` of the next pair.
    pub fn index(&self) -> usize {
        self.expansion.index()
    }

    /// Decides `X_{k+1}` and advances; `Ok(None)` after the last pair of a rational theta.
    pub fn step(&mut self) -> Result<Option<PairFlag>> {
        if let Some(e) = self.pending.take() {
            self.done = true;
            return Err(e);
        }
        if self.done {
            return Ok(None);
        }
        let in_v = region_test(&self.expansion, &self.q_prev, &self.q, self.y);
        let out = PairFlag {
            flag: in_v.map(|v| !v),
            q: self.q.clone(),
        };
        match self.expansion.next_quotient() {
            Ok(Some(a)) => {
                let a = BigInt::from_biguint(Sign::Plus, a);
                self.y = 1.0 / (a.to_f64().unwrap_or(f64::INFINITY) + self.y);
                let next = &a * &self.q + &self.q_prev;
                self.q_prev = core::mem::replace(&mut self.q, next);
            }
            Ok(None) => self.done = true,
            Err(e) => self.pending = Some(e),
        }
        Ok(Some(out))
    }
}

/// `x > (2y+1)/(y+2)` with `y = qa/qb`; `None` when the enclosure of `x` straddles the boundary.
fn region_test(expansion: &GaussExpansion, qa: &BigInt, qb: &BigInt, y: f64) -> Option<bool> {
    let l = qa + qb * 2u32;
    let r = qa * 2u32 + qb;
    let Some(ends) = expansion.tail_fractions() else {
        let Tail::Exact(x) = expansion.tail() else {
            return None;
        };
        return Some(x.mul_int(&l).add_int(&-&r).signum() > 0);
    };
    let side = |(num, den): (&BigInt, &BigInt)| {
        let margin = ratio_to_f64(num, den) * (y + 2.0) - (2.0 * y + 1.0);
        if margin.abs() > FLOAT_MARGIN {
            margin > 0.0
        } else {
            num * &l > &r * den
        }
    };
    let (a, b) = (side(ends[0]), side(ends[1]));
    (a == b).then_some(a)
}

/// Flags for `X_0..X_{n-1}` from the region test on each pair; shorter for rationals that
/// end earlier and for decimals whose precision runs out.
pub fn flags_via_criterion(theta: &RealSpec, n: usize) -> Result<HermiteFlags> {
    if n < 2 {
        return Err(Error::InvalidArgument("criterion needs n >= 2"));
    }
    let mut run = CriterionRun::new(theta)?;
    let mut flags = vec![Some(true)];
    while flags.len() < n {
        match run.step() {
            Ok(Some(pair)) => flags.push(pair.flag),
            Ok(None) => break,
            Err(e) if e.is_precision() => break,
            Err(e) => return Err(e),
        }
    }
    Ok(HermiteFlags {
        theta: theta.clone(),
        flags,
        method: Method::Criterion,
    })
}
