//! Which minimal vectors are Hermite vectors, decided three ways.

mod criterion;
mod envelope;
mod scan;

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::Zero;

pub use criterion::{flags_via_criterion, CriterionRun, PairFlag};
pub use envelope::{envelope, flags_via_envelope, Envelope, EnvelopeBreakpoint};
pub use scan::{default_delta_grid, delta_scan, flags_via_delta_scan, DeltaScan};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, MinimalVector, WORK_BITS};
use crate::numeric::precision::refine;
use crate::numeric::{IntervalReal, QuadraticReal, RealSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Criterion,
    Envelope,
    DeltaScan,
}

/// Per-index Hermite status of `X_0, X_1, ...`; `None` marks an undecided index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteFlags {
    pub theta: RealSpec,
    pub flags: Vec<Option<bool>>,
    pub method: Method,
}

impl HermiteFlags {
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn decided(&self) -> usize {
        self.flags.iter().filter(|f| f.is_some()).count()
    }

    pub fn hermite_count(&self) -> usize {
        self.flags.iter().filter(|f| **f == Some(true)).count()
    }

    /// Index of the first decided pair of consecutive non-Hermite vectors, if any.
    pub fn consecutive_false(&self) -> Option<usize> {
        self.flags
            .windows(2)
            .position(|w| w[0] == Some(false) && w[1] == Some(false))
    }

    /// Indices where both lists are decided and differ.
    pub fn mismatches(&self, other: &Self) -> Vec<usize> {
        self.flags
            .iter()
            .zip(&other.flags)
            .enumerate()
            .filter_map(|(i, (a, b))| match (a, b) {
                (Some(a), Some(b)) if a != b => Some(i),
                _ => None,
            })
            .collect()
    }
}

/// One entry `(g, h)` of the Hermite subsequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteEntry {
    pub g: BigInt,
    pub h: BigInt,
    pub source_index: usize,
}

/// Hermite vectors with `h >= 1`, in order; `X_0 = (1, 0)` is tracked separately.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HermiteSubsequence {
    pub entries: Vec<HermiteEntry>,
    pub includes_origin: bool,
}

impl HermiteSubsequence {
    /// Count including `X_0` when it is flagged.
    pub fn count_with_origin(&self) -> usize {
        self.entries.len() + usize::from(self.includes_origin)
    }
}

pub fn hermite_subsequence(
    flags: &HermiteFlags,
    seq: &[MinimalVector],
) -> Result<HermiteSubsequence> {
    if flags.len() > seq.len() {
        return Err(Error::MisalignedInput {
            flags: flags.len(),
            vectors: seq.len(),
        });
    }
    let mut out = HermiteSubsequence::default();
    for (v, flag) in seq.iter().zip(&flags.flags) {
        if *flag != Some(true) {
            continue;
        }
        if v.q.is_zero() {
            out.includes_origin = true;
        } else {
            out.entries.push(HermiteEntry {
                g: v.p.clone(),
                h: v.q.clone(),
                source_index: v.index,
            });
        }
    }
    Ok(out)
}

/// Squared first coordinates `A_k = v1_k^2` of a sequence, exact when theta is.
pub(crate) struct Squares {
    lattice: Lattice,
    pq: Vec<(BigInt, BigInt)>,
    exact: Option<Vec<QuadraticReal>>,
    approx: Vec<f64>,
}

impl Squares {
    pub(crate) fn new(theta: &RealSpec, seq: &[MinimalVector]) -> Self {
        let exact = seq
            .iter()
            .map(|v| v.exact.as_ref().map(|x| x * x))
            .collect::<Option<Vec<_>>>();
        let approx = seq
            .iter()
            .map(|v| {
                let x = v.v1.midpoint_f64();
                x * x
            })
            .collect();
        Self {
            lattice: Lattice::new(theta.clone()),
            pq: seq.iter().map(|v| (v.p.clone(), v.q.clone())).collect(),
            exact,
            approx,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.pq.len()
    }

    pub(crate) fn approx(&self, k: usize) -> f64 {
        self.approx[k]
    }

    pub(crate) fn b(&self, k: usize) -> BigInt {
        let q = &self.pq[k].1;
        q * q
    }

    pub(crate) fn exact(&self, k: usize) -> Option<&QuadraticReal> {
        self.exact.as_ref().map(|v| &v[k])
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.exact(self.len() - 1)
            .is_some_and(QuadraticReal::is_zero)
    }

    fn interval(&self, k: usize, bits: u32) -> IntervalReal {
        let (p, q) = &self.pq[k];
        let x = self.lattice.first_coordinate(p, q, bits);
        x.mul(&x)
    }

    /// Sign of `constant + sum c_i A_i`.
    pub(crate) fn sign(
        &self,
        terms: &[(usize, QuadraticReal)],
        constant: &QuadraticReal,
    ) -> Result<i8> {
        if let Some(exact) = &self.exact {
            let mut acc = constant.clone();
            for (k, c) in terms {
                acc = &acc + &(c * &exact[*k]);
            }
            return Ok(acc.signum());
        }
        refine(WORK_BITS, |bits| {
            let mut acc = constant.to_interval(bits);
            for (k, c) in terms {
                acc = acc.add(&c.to_interval(bits).mul(&self.interval(*k, bits)));
            }
            Ok(acc.signum())
        })
    }
}

pub(crate) fn int(n: BigInt) -> QuadraticReal {
    QuadraticReal::from_int(n)
}
