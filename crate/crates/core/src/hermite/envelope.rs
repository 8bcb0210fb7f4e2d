use alloc::vec;
use alloc::vec::Vec;
use num_traits::{Float, ToPrimitive};

use super::{int, HermiteFlags, Method, Squares};
use crate::error::{Error, Result};
use crate::lattice::MinimalVector;
use crate::numeric::{QuadraticReal, RealSpec};

/// Crossing of two consecutive envelope pieces at `s^2 = delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeBreakpoint {
    pub s_value: f64,
    pub delta: f64,
    pub left_index: usize,
    pub right_index: usize,
}

/// Lower envelope of `g_k(s) = s*A_k + B_k/s` over a finite sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    /// Indices owning an interval of the envelope, in order of increasing `s`.
    pub hull: Vec<usize>,
    pub breakpoints: Vec<EnvelopeBreakpoint>,
    /// Status of every index of the input; entries past the reported range are provisional.
    pub flags: Vec<bool>,
    /// The last vector has `v1 = 0`, so no successor can change the result.
    pub complete: bool,
}

impl Envelope {
    /// Number of trustworthy flags.
    pub fn reported(&self) -> usize {
        if self.complete {
            self.flags.len()
        } else {
            self.flags.len() - 1
        }
    }

    /// Exact crossing `delta` of the pieces `l` and `r`, when theta is exact.
    pub(crate) fn exact_delta(squares: &Squares, l: usize, r: usize) -> Option<QuadraticReal> {
        let (al, ar) = (squares.exact(l)?, squares.exact(r)?);
        int(squares.b(r) - squares.b(l)).checked_div(&(al - ar))
    }
}

/// Sign of `A_m (B_r - B_l) - A_l (B_r - B_m) - A_r (B_m - B_l)`; positive when `m` lies
/// strictly above the crossing of `l` and `r`.
fn excess(squares: &Squares, l: usize, m: usize, r: usize) -> Result<i8> {
    let (bl, bm, br) = (squares.b(l), squares.b(m), squares.b(r));
    let terms = [
        (m, int(&br - &bl)),
        (l, int(&bm - &br)),
        (r, int(&bl - &bm)),
    ];
    squares.sign(&terms, &int(0.into()))
}

pub fn envelope(theta: &RealSpec, seq: &[MinimalVector]) -> Result<Envelope> {
    if seq.len() < 3 {
        return Err(Error::InsufficientSequence { len: seq.len() });
    }
    let squares = Squares::new(theta, seq);
    let mut hull: Vec<usize> = Vec::with_capacity(seq.len());
    for k in 0..seq.len() {
        while hull.len() >= 2
            && excess(&squares, hull[hull.len() - 2], hull[hull.len() - 1], k)? >= 0
        {
            hull.pop();
        }
        hull.push(k);
    }
    let mut flags = vec![false; seq.len()];
    for w in hull.windows(2) {
        let (l, r) = (w[0], w[1]);
        flags[l] = true;
        flags[r] = true;
        // pieces that only touch the crossing point
        for (m, flag) in flags.iter_mut().enumerate().take(r).skip(l + 1) {
            *flag = excess(&squares, l, m, r)? == 0;
        }
    }
    let breakpoints = hull
        .windows(2)
        .map(|w| {
            let (l, r) = (w[0], w[1]);
            let delta = match Envelope::exact_delta(&squares, l, r) {
                Some(d) => d.to_f64(),
                None => {
                    let db = (squares.b(r) - squares.b(l))
                        .to_f64()
                        .unwrap_or(f64::INFINITY);
                    db / (squares.approx(l) - squares.approx(r))
                }
            };
            EnvelopeBreakpoint {
                s_value: Float::sqrt(delta),
                delta,
                left_index: l,
                right_index: r,
            }
        })
        .collect();
    Ok(Envelope {
        hull,
        breakpoints,
        flags,
        complete: squares.is_complete(),
    })
}

/// Flags for `X_0..X_{N-2}`, or all of `seq` when it ends in a vector with `v1 = 0`.
pub fn flags_via_envelope(theta: &RealSpec, seq: &[MinimalVector]) -> Result<HermiteFlags> {
    let env = envelope(theta, seq)?;
    let n = env.reported();
    let mut flags = env.flags;
    flags.truncate(n);
    Ok(HermiteFlags {
        theta: theta.clone(),
        flags: flags.into_iter().map(Some).collect(),
        method: Method::Envelope,
    })
}
