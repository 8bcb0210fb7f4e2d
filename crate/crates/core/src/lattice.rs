//! Minimal vectors of the lattice `{(p - q*theta, q)}`.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cf::reduce_theta;
use crate::error::{Error, Result};
use crate::numeric::precision::refine;
use crate::numeric::{Dyadic, IntervalReal, QuadraticReal, RealSpec};

/// Working precision of first coordinates along a sequence.
pub const WORK_BITS: u32 = 128;

/// First coordinates are recomputed from `(p, q)` once their relative precision drops below this.
const MIN_REL_BITS: i64 = 64;

/// Lattice point `(p - q*theta, q)` with its integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalVector {
    pub p: BigInt,
    pub q: BigInt,
    pub v1: IntervalReal,
    /// Exact first coordinate when theta is exact.
    pub exact: Option<QuadraticReal>,
    pub index: usize,
}

impl MinimalVector {
    pub fn v2(&self) -> &BigInt {
        &self.q
    }

    /// Certified sign of the first coordinate, if known.
    pub fn sign(&self) -> Option<i8> {
        match &self.exact {
            Some(x) => Some(x.signum()),
            None => self.v1.signum(),
        }
    }

    fn negated(&self) -> Self {
        Self {
            p: -&self.p,
            q: -&self.q,
            v1: self.v1.neg(),
            exact: self.exact.as_ref().map(|x| -x),
            index: self.index,
        }
    }
}

/// The lattice of a fixed `theta`.
#[derive(Clone, Debug)]
pub struct Lattice {
    theta: RealSpec,
    exact: Option<QuadraticReal>,
    bounds: Option<(Dyadic, Dyadic)>,
}

impl Lattice {
    pub fn new(theta: RealSpec) -> Self {
        let exact = theta.exact();
        let bounds = match &theta {
            RealSpec::Decimal(d) => Some(d.dyadic_bounds()),
            _ => None,
        };
        Self {
            theta,
            exact,
            bounds,
        }
    }

    pub fn theta(&self) -> &RealSpec {
        &self.theta
    }

    pub fn exact_first_coordinate(&self, p: &BigInt, q: &BigInt) -> Option<QuadraticReal> {
        self.exact.as_ref().map(|t| (-&t.mul_int(q)).add_int(p))
    }

    /// Enclosure of `p - q*theta`; for decimal theta the width never drops below `q` times
    /// the input uncertainty.
    pub fn first_coordinate(&self, p: &BigInt, q: &BigInt, bits: u32) -> IntervalReal {
        if let Some(x) = self.exact_first_coordinate(p, q) {
            return x.to_interval(bits);
        }
        let (lo, hi) = self.bounds.as_ref().expect("decimal bounds");
        let p = Dyadic::from_int(p.clone());
        let (a, b) = (p.sub(&hi.mul_int(q)), p.sub(&lo.mul_int(q)));
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        IntervalReal::new(a, b, bits).round(bits)
    }

    pub fn vector(&self, p: BigInt, q: BigInt, index: usize) -> MinimalVector {
        let exact = self.exact_first_coordinate(&p, &q);
        let v1 = match &exact {
            Some(x) => x.to_interval(WORK_BITS),
            None => self.first_coordinate(&p, &q, WORK_BITS),
        };
        MinimalVector {
            p,
            q,
            v1,
            exact,
            index,
        }
    }

    /// `X_0 = (1, 0)` and `X_1 = (m, 1)` with `m` the nearest integer to theta.
    pub fn initial_pair(&self) -> Result<(MinimalVector, MinimalVector)> {
        let reduced = reduce_theta(&self.theta)?;
        Ok((
            self.vector(BigInt::one(), BigInt::zero(), 0),
            self.vector(reduced.nearest, BigInt::one(), 1),
        ))
    }

    /// Successor `w = u + a*v`, `a = floor(|u1| / |v1|)`, of a consecutive pair.
    pub fn next_minimal(&self, u: &MinimalVector, v: &MinimalVector) -> Result<MinimalVector> {
        check_order(u, v)?;
        if let (Some(u1), Some(v1)) = (&u.exact, &v.exact) {
            if v1.is_zero() {
                return Err(Error::SequenceEnds);
            }
            let (su, sv) = (u1.signum(), v1.signum());
            let u = oriented(u, su, sv)?;
            let a = u1
                .abs()
                .checked_div(&v1.abs())
                .ok_or(Error::SequenceEnds)?
                .floor();
            return Ok(self.vector(&u.p + &a * &v.p, &u.q + &a * &v.q, v.index + 1));
        }
        refine(WORK_BITS, |bits| {
            let (u1, v1) = if bits <= WORK_BITS {
                (u.v1.clone(), v.v1.clone())
            } else {
                (
                    self.first_coordinate(&u.p, &u.q, bits),
                    self.first_coordinate(&v.p, &v.q, bits),
                )
            };
            let (Some(su), Some(sv)) = (u1.signum(), v1.signum()) else {
                return Ok(None);
            };
            if sv == 0 {
                return Err(Error::SequenceEnds);
            }
            let u = oriented(u, su, sv)?;
            let u1 = if u.q.is_zero() && su == sv {
                u1.neg()
            } else {
                u1
            };
            let Some(a) = u1.abs().div(&v1.abs(), bits).and_then(|r| r.floor()) else {
                return Ok(None);
            };
            let p = &u.p + &a * &v.p;
            let q = &u.q + &a * &v.q;
            let mut w1 = u1.add(&v1.mul_int(&a)).round(bits.max(WORK_BITS));
            if w1.relative_bits().is_none_or(|r| r < MIN_REL_BITS) {
                w1 = self.first_coordinate(&p, &q, bits.max(WORK_BITS));
            }
            Ok(Some(MinimalVector {
                p,
                q,
                v1: w1,
                exact: None,
                index: v.index + 1,
            }))
        })
    }

    /// `X_0..X_n`, shorter when a rational theta ends first.
    pub fn complete_sequence(&self, n: usize) -> Result<Vec<MinimalVector>> {
        let (seq, stop) = self.certified_sequence(n)?;
        match stop {
            Some(e) => Err(e),
            None => Ok(seq),
        }
    }

    /// Like [`Self::complete_sequence`] but returns the certified prefix together with the
    /// precision failure that stopped it.
    pub fn certified_sequence(&self, n: usize) -> Result<(Vec<MinimalVector>, Option<Error>)> {
        let (x0, x1) = self.initial_pair()?;
        let mut seq = Vec::with_capacity(n.saturating_add(1).min(1 << 16));
        seq.push(x0);
        if n >= 1 {
            seq.push(x1);
        }
        while seq.len() <= n {
            let k = seq.len();
            match self.next_minimal(&seq[k - 2], &seq[k - 1]) {
                Ok(w) => seq.push(w),
                Err(Error::SequenceEnds) => break,
                Err(e) if e.is_precision() => return Ok((seq, Some(e))),
                Err(e) => return Err(e),
            }
        }
        Ok((seq, None))
    }

    /// Direct test of the box condition for `(p, q)` against all `(a, b)` with `0 <= b <= q`.
    pub fn is_minimal_bruteforce(&self, p: &BigInt, q: &BigInt) -> Result<bool> {
        if q.is_negative() {
            return Err(Error::InvalidArgument("q must be non-negative"));
        }
        if q.is_zero() {
            return Ok(p.abs().is_one());
        }
        if let RealSpec::Rational(r) = &self.theta {
            if let Some(found) = bruteforce_small(r, p, q) {
                return Ok(found);
            }
        }
        self.bruteforce_generic(p, q)
    }

    fn bruteforce_generic(&self, p: &BigInt, q: &BigInt) -> Result<bool> {
        let qn = q
            .to_u64()
            .ok_or(Error::InvalidArgument("q too large for enumeration"))?;
        let e_own = self.distance(p, q)?;
        // |p - q theta| >= 1 loses against (1, 0)
        if self.compare_distances(&e_own, &self.distance(&BigInt::one(), &BigInt::zero())?)? >= 0 {
            return Ok(false);
        }
        for b in 1..=qn {
            let b = BigInt::from(b);
            let bt = self.first_coordinate(&BigInt::zero(), &b, WORK_BITS).neg();
            let (lo, hi) = (bt.lo().floor(), bt.hi().ceil());
            let mut a = lo;
            while a <= hi {
                if !(&b == q && &a == p) {
                    let e = self.distance(&a, &b)?;
                    let cmp = self.compare_distances(&e, &e_own)?;
                    if cmp < 0 || (cmp == 0 && &b < q) {
                        return Ok(false);
                    }
                }
                a += 1;
            }
        }
        Ok(true)
    }

    fn distance(&self, p: &BigInt, q: &BigInt) -> Result<Distance> {
        Ok(Distance {
            p: p.clone(),
            q: q.clone(),
            exact: self.exact_first_coordinate(p, q).map(|x| x.abs()),
        })
    }

    /// Sign of `|x| - |y|`.
    fn compare_distances(&self, x: &Distance, y: &Distance) -> Result<i8> {
        if let (Some(a), Some(b)) = (&x.exact, &y.exact) {
            let iv = |v: &QuadraticReal| v.to_interval(64);
            if let Some(s) = iv(a).sub(&iv(b)).signum() {
                if s != 0 {
                    return Ok(s);
                }
            }
            return Ok((a - b).signum());
        }
        refine(WORK_BITS, |bits| {
            let a = self.first_coordinate(&x.p, &x.q, bits).abs();
            let b = self.first_coordinate(&y.p, &y.q, bits).abs();
            Ok(a.sub(&b).signum().filter(|&s| s != 0))
        })
    }
}

struct Distance {
    p: BigInt,
    q: BigInt,
    exact: Option<QuadraticReal>,
}

/// Exact enumeration in machine integers for small rational theta.
fn bruteforce_small(theta: &BigRational, p: &BigInt, q: &BigInt) -> Option<bool> {
    let r = theta.numer().to_i128()?;
    let s = theta.denom().to_i128()?;
    let p = p.to_i128()?;
    let q = q.to_i64()? as i128;
    if r.abs() >= 1 << 60 || s >= 1 << 60 || q >= 1 << 40 || p.abs() >= 1 << 100 {
        return None;
    }
    // distances scaled by s
    let own = (p * s - q * r).abs();
    if own >= s {
        return Some(false);
    }
    for b in 1..=q {
        let a0 = (b * r).div_euclid(s);
        for a in [a0, a0 + 1] {
            if b == q && a == p {
                continue;
            }
            let e = (a * s - b * r).abs();
            if e < own || (e == own && b < q) {
                return Some(false);
            }
        }
    }
    Some(true)
}

fn check_order(u: &MinimalVector, v: &MinimalVector) -> Result<()> {
    if u.q.is_negative() || v.q <= u.q {
        return Err(Error::NotConsecutive);
    }
    Ok(())
}

/// Applies the flip of `u = (1, 0)` when `v1` has the same sign as `u1`.
fn oriented(u: &MinimalVector, su: i8, sv: i8) -> Result<MinimalVector> {
    if sv != 0 && su == sv {
        if u.q.is_zero() {
            return Ok(u.negated());
        }
        return Err(Error::NotConsecutive);
    }
    Ok(u.clone())
}

/// `(eps, x, y)` of a consecutive pair: `x = |v1|/|u1|`, `y = u2/v2`, `eps` the sign of `u1`
/// after the flip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntrinsicCoords {
    pub eps: i8,
    pub x: IntervalReal,
    pub x_exact: Option<QuadraticReal>,
    pub y: BigRational,
}

pub fn intrinsic_coords(u: &MinimalVector, v: &MinimalVector) -> Result<IntrinsicCoords> {
    check_order(u, v)?;
    let bits =
        u.v1.precision_bits()
            .min(v.v1.precision_bits())
            .min(WORK_BITS);
    let ambiguous = Error::AmbiguousComparison { bits };
    let su = u.sign().ok_or(ambiguous.clone())?;
    let sv = v.sign().ok_or(ambiguous.clone())?;
    if su == 0 {
        return Err(Error::NotConsecutive);
    }
    let flip = sv != 0 && sv == su;
    if flip && !u.q.is_zero() {
        return Err(Error::NotConsecutive);
    }
    let eps = if flip { -su } else { su };
    let y = BigRational::new(u.q.clone(), v.q.clone());
    let (x, x_exact) = match (&u.exact, &v.exact) {
        (Some(u1), Some(v1)) => {
            let x = v1
                .abs()
                .checked_div(&u1.abs())
                .ok_or(Error::NotConsecutive)?;
            if x.floor() != BigInt::zero() {
                return Err(Error::NotConsecutive);
            }
            (x.to_interval(WORK_BITS), Some(x))
        }
        _ => {
            let x = v.v1.abs().div(&u.v1.abs(), bits).ok_or(ambiguous.clone())?;
            if x.lo() >= &Dyadic::from_int(BigInt::one()) {
                return Err(Error::NotConsecutive);
            }
            (x, None)
        }
    };
    Ok(IntrinsicCoords { eps, x, x_exact, y })
}

/// `p_u q_v - p_v q_u = +-1`.
pub fn check_basis(u: &MinimalVector, v: &MinimalVector) -> bool {
    (&u.p * &v.q - &v.p * &u.q).abs().is_one()
}

pub fn complete_sequence(theta: &RealSpec, n: usize) -> Result<Vec<MinimalVector>> {
    Lattice::new(theta.clone()).complete_sequence(n)
}

pub fn is_minimal_bruteforce(theta: &RealSpec, p: &BigInt, q: &BigInt) -> Result<bool> {
    Lattice::new(theta.clone()).is_minimal_bruteforce(p, q)
}
