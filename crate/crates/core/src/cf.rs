//! Continued fractions of the reduced input `x0 = |theta - m|`.

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{IntervalReal, QuadraticReal, RealSpec};

/// `theta = nearest + sign * x0` with `0 < x0 <= 1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedTheta {
    pub sign: i8,
    pub x0: RealSpec,
    pub nearest: BigInt,
}

/// Nearest integer `m = ceil(theta - 1/2)`, so half-integers reduce to `x0 = +1/2`.
pub fn reduce_theta(spec: &RealSpec) -> Result<ReducedTheta> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let reduce_rational = |r: &BigRational| -> Result<(i8, BigRational, BigInt)> {
        let m = -(&half - r).floor().to_integer();
        let diff = r - BigRational::from_integer(m.clone());
        if diff.is_zero() {
            return Err(Error::IntegerInput);
        }
        let sign = if diff.is_negative() { -1 } else { 1 };
        Ok((sign, diff.abs(), m))
    };
    match spec {
        RealSpec::Rational(r) => {
            let (sign, x0, nearest) = reduce_rational(r)?;
            Ok(ReducedTheta {
                sign,
                x0: RealSpec::Rational(x0),
                nearest,
            })
        }
        RealSpec::Quadratic(q) => {
            let half = QuadraticReal::from_ratio(BigInt::one(), BigInt::from(2));
            let nearest = -(&half - q).floor();
            let diff = q.add_int(&-&nearest);
            Ok(ReducedTheta {
                sign: diff.signum(),
                x0: RealSpec::Quadratic(diff.abs()),
                nearest,
            })
        }
        RealSpec::Decimal(d) => {
            let (sign, x0, nearest) = reduce_rational(d.value())?;
            let int_bits = d.value().abs().floor().to_integer().bits() as u32;
            let bits = d.precision_bits().saturating_sub(int_bits);
            Ok(ReducedTheta {
                sign,
                x0: RealSpec::Decimal(d.with_value(x0, bits)),
                nearest,
            })
        }
    }
}

/// Partial quotients `a_1..a_N` of `x0 = [0; a_1, a_2, ...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialQuotients {
    pub quotients: Vec<BigUint>,
    /// The expansion of a rational `x0` is complete.
    pub terminated: bool,
}

impl PartialQuotients {
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }
}

/// The Gauss-map iterate `x_k = G^k(x0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    Exact(QuadraticReal),
    /// Rational endpoints, in either order, enclosing the true tail.
    Bounds(BigRational, BigRational),
}

impl Tail {
    pub fn to_interval(&self, bits: u32) -> IntervalReal {
        match self {
            Tail::Exact(q) => q.to_interval(bits),
            Tail::Bounds(a, b) => {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let lo = IntervalReal::from_ratio(lo.numer(), lo.denom(), bits);
                let hi = IntervalReal::from_ratio(hi.numer(), hi.denom(), bits);
                IntervalReal::new(lo.lo().clone(), hi.hi().clone(), bits)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_interval(64).midpoint_f64()
    }
}

#[derive(Clone, Debug)]
enum State {
    /// `num / den`.
    Rational { num: BigInt, den: BigInt },
    /// `(p + scale * sqrt(d)) / q` with `q | scale^2 d - p^2`.
    Surd {
        p: BigInt,
        q: BigInt,
        scale: BigInt,
        d: BigInt,
        disc: BigInt,
        root: BigInt,
    },
    /// Two rational endpoints `num / den`, both positive.
    Bounds([(BigInt, BigInt); 2]),
}

/// Streaming expansion that hands out partial quotients and keeps the current tail.
#[derive(Clone, Debug)]
pub struct GaussExpansion {
    state: State,
    emitted: usize,
}

impl GaussExpansion {
    /// `x0` must lie in `(0, 1)`.
    pub fn new(x0: &RealSpec) -> Result<Self> {
        let state = match x0 {
            RealSpec::Rational(r) => {
                if !r.is_positive() || r >= &BigRational::one() {
                    return Err(Error::InvalidArgument("expansion needs 0 < x0 < 1"));
                }
                State::Rational {
                    num: r.numer().clone(),
                    den: r.denom().clone(),
                }
            }
            RealSpec::Quadratic(x) => {
                if x.signum() <= 0 || x.floor() != BigInt::zero() {
                    return Err(Error::InvalidArgument("expansion needs 0 < x0 < 1"));
                }
                let (a, b, c, d) = (x.a(), x.b(), x.c(), x.d());
                let scale = b.abs() * c;
                let disc = &scale * &scale * d;
                let (p, q) = if b.is_positive() {
                    (a * c, c * c)
                } else {
                    (-(a * c), -(c * c))
                };
                State::Surd {
                    p,
                    q,
                    scale,
                    d: d.clone(),
                    root: disc.sqrt(),
                    disc,
                }
            }
            RealSpec::Decimal(dec) => {
                let (lo, hi) = dec.bounds();
                let ends = [lo, hi].map(|e| (e.numer().clone(), e.denom().clone()));
                State::Bounds(ends)
            }
        };
        Ok(Self { state, emitted: 0 })
    }

    /// Number of quotients produced so far; the current tail is `x_index`.
    pub fn index(&self) -> usize {
        self.emitted
    }

    pub fn tail(&self) -> Tail {
        match &self.state {
            State::Rational { num, den } => {
                Tail::Exact(QuadraticReal::from_ratio(num.clone(), den.clone()))
            }
            State::Surd { p, q, scale, d, .. } => Tail::Exact(QuadraticReal::from_parts(
                p.clone(),
                scale.clone(),
                q.clone(),
                d.clone(),
            )),
            State::Bounds([a, b]) => Tail::Bounds(
                BigRational::new(a.0.clone(), a.1.clone()),
                BigRational::new(b.0.clone(), b.1.clone()),
            ),
        }
    }

    /// Unreduced endpoint fractions `(num, den)` of the tail, equal for a rational; `None` for surds.
    pub(crate) fn tail_fractions(&self) -> Option<[(&BigInt, &BigInt); 2]> {
        match &self.state {
            State::Rational { num, den } => Some([(num, den), (num, den)]),
            State::Bounds([a, b]) => Some([(&a.0, &a.1), (&b.0, &b.1)]),
            State::Surd { .. } => None,
        }
    }

    /// Next partial quotient; `Ok(None)` once a rational expansion is complete and
    /// `TailUnavailable` when decimal bounds no longer agree.
    pub fn next_quotient(&mut self) -> Result<Option<BigUint>> {
        let a = match &mut self.state {
            State::Rational { num, den } => {
                if num.is_zero() {
                    return Ok(None);
                }
                let (a, r) = den.div_rem(num);
                *den = core::mem::replace(num, r);
                a
            }
            State::Surd {
                p, q, disc, root, ..
            } => {
                let p1 = -&*p;
                let q1 = (&*disc - &*p * &*p) / &*q;
                let a = if q1.is_positive() {
                    (&p1 + &*root).div_floor(&q1)
                } else {
                    -(&p1 + &*root).div_floor(&-&q1) - 1
                };
                *p = p1 - &a * &q1;
                *q = q1;
                a
            }
            State::Bounds(ends) => {
                let unavailable = Error::TailUnavailable {
                    index: self.emitted,
                };
                if ends.iter().any(|(n, _)| !n.is_positive()) {
                    return Err(unavailable);
                }
                let (a0, r0) = ends[0].1.div_rem(&ends[0].0);
                let (a1, r1) = ends[1].1.div_rem(&ends[1].0);
                if a0 != a1 {
                    return Err(unavailable);
                }
                for (end, r) in ends.iter_mut().zip([r0, r1]) {
                    end.1 = core::mem::replace(&mut end.0, r);
                }
                a0
            }
        };
        self.emitted += 1;
        debug_assert!(a.is_positive());
        Ok(Some(a.to_biguint().unwrap_or_default()))
    }
}

fn check_reduced(x0: &RealSpec) -> Result<()> {
    let ok = match x0 {
        RealSpec::Decimal(d) => {
            let v = d.value();
            v.is_positive() && v <= &BigRational::new(BigInt::one(), BigInt::from(2))
        }
        _ => {
            let x = x0.exact().expect("exact spec");
            let half = QuadraticReal::from_ratio(BigInt::one(), BigInt::from(2));
            x.signum() > 0 && x.cmp_value(&half).is_le()
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument("expected 0 < x0 <= 1/2"))
    }
}

/// First `n` partial quotients of `x0` (fewer if a rational expansion ends first).
pub fn cf_expand(x0: &RealSpec, n: usize) -> Result<PartialQuotients> {
    check_reduced(x0)?;
    let mut expansion = GaussExpansion::new(x0)?;
    let mut quotients = Vec::with_capacity(n.min(1 << 16));
    while quotients.len() < n {
        match expansion.next_quotient() {
            Ok(Some(a)) => quotients.push(a),
            Ok(None) => {
                return Ok(PartialQuotients {
                    quotients,
                    terminated: true,
                })
            }
            Err(Error::TailUnavailable { .. }) => {
                let bits = match x0 {
                    RealSpec::Decimal(d) => d.precision_bits(),
                    _ => 0,
                };
                return Err(Error::AmbiguousComparison { bits });
            }
            Err(e) => return Err(e),
        }
    }
    // a rational whose last quotient was just emitted is complete as well
    let terminated = matches!(expansion.state, State::Rational { ref num, .. } if num.is_zero());
    Ok(PartialQuotients {
        quotients,
        terminated,
    })
}

/// Convergent `p_k / q_k` of `x0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    pub index: usize,
}

/// Convergents with indices `0..=N`, starting from `(p_0, q_0) = (0, 1)`.
pub fn convergents(pq: &PartialQuotients) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(pq.len() + 1);
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    out.push(Convergent {
        p: p.clone(),
        q: q.clone(),
        index: 0,
    });
    for (i, a) in pq.quotients.iter().enumerate() {
        let a = BigInt::from_biguint(Sign::Plus, a.clone());
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = core::mem::replace(&mut p, p_next);
        q_prev = core::mem::replace(&mut q, q_next);
        out.push(Convergent {
            p: p.clone(),
            q: q.clone(),
            index: i + 1,
        });
    }
    out
}

/// `y_n = q_n / q_{n+1}`.
pub fn ratio_y(conv: &[Convergent], n: usize) -> Result<BigRational> {
    if n + 1 >= conv.len() {
        return Err(Error::IndexOutOfRange {
            index: n + 1,
            len: conv.len(),
        });
    }
    Ok(BigRational::new(conv[n].q.clone(), conv[n + 1].q.clone()))
}

/// Certified `[0; a_{n+2}, a_{n+3}, ...]`, i.e. the Gauss-map iterate `x_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailValue {
    pub index: usize,
    pub value: IntervalReal,
}

/// Decimal tails wider than this (relative) are withheld.
const DECIMAL_TAIL_BITS: i64 = 32;

/// Tail `x_{n+1}` of the reduced expansion of `spec`.
pub fn tail_value(
    spec: &RealSpec,
    pq: &PartialQuotients,
    n: usize,
    bits: u32,
) -> Result<TailValue> {
    if bits < 16 {
        return Err(Error::InvalidArgument("evaluation needs at least 16 bits"));
    }
    if pq.terminated && n + 1 > pq.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: pq.len(),
        });
    }
    let reduced = reduce_theta(spec)?;
    let mut expansion = GaussExpansion::new(&reduced.x0)?;
    for _ in 0..=n {
        match expansion.next_quotient() {
            Ok(Some(_)) => {}
            Ok(None) => {
                return Err(Error::IndexOutOfRange {
                    index: n,
                    len: expansion.index(),
                })
            }
            Err(Error::TailUnavailable { .. }) => return Err(Error::TailUnavailable { index: n }),
            Err(e) => return Err(e),
        }
    }
    let tail = expansion.tail();
    let value = tail.to_interval(bits);
    if let Tail::Bounds(..) = tail {
        let certified = value.relative_bits().unwrap_or(i64::MIN);
        if certified < DECIMAL_TAIL_BITS {
            return Err(Error::TailUnavailable { index: n });
        }
    }
    Ok(TailValue { index: n, value })
}
