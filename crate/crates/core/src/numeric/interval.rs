use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::{bit_len, shift, Dyadic};

/// Outcome of comparing two certified intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Less,
    Greater,
    Equal,
    /// The intervals overlap; the caller must refine.
    Undecided,
}

impl Comparison {
    pub fn reverse(self) -> Self {
        match self {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            other => other,
        }
    }

    pub fn to_ordering(self) -> Option<core::cmp::Ordering> {
        match self {
            Comparison::Less => Some(core::cmp::Ordering::Less),
            Comparison::Greater => Some(core::cmp::Ordering::Greater),
            Comparison::Equal => Some(core::cmp::Ordering::Equal),
            Comparison::Undecided => None,
        }
    }
}

/// A closed interval `[lo, hi]` with dyadic endpoints certified to contain a real value.
///
/// `precision_bits` records the precision the interval was produced at; endpoints
/// are rounded outward whenever an operation needs to round.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalReal {
    lo: Dyadic,
    hi: Dyadic,
    precision_bits: u32,
}

impl IntervalReal {
    pub fn new(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self {
            lo,
            hi,
            precision_bits,
        }
    }

    pub fn point(value: Dyadic) -> Self {
        Self {
            lo: value.clone(),
            hi: value,
            precision_bits: u32::MAX,
        }
    }

    pub fn from_int(n: BigInt) -> Self {
        Self::point(Dyadic::from_int(n))
    }

    /// Certified enclosure of `num / den` whose width is at most `2^(1 - bits) * |num / den|`.
    ///
    /// Endpoints are `floor` and `ceil` of `num/den * 2^s` on a grid `s` that only grows
    /// with `bits`, so enclosures at increasing precision are nested.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        if num.is_zero() {
            return Self::point(Dyadic::zero());
        }
        let s = bits as i64 + 1 + bit_len(&den) - bit_len(&num);
        let scaled_num = shift(&num, s.max(0));
        let scaled_den = shift(&den, (-s).max(0));
        let (q, r) = scaled_num.div_mod_floor(&scaled_den);
        if r.is_zero() {
            return Self::point(Dyadic::new(q, -s));
        }
        let lo = Dyadic::new(q.clone(), -s);
        Self::new(lo, Dyadic::new(q + 1, -s), bits)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    /// Sign of every point of the interval, if it is uniform.
    pub fn signum(&self) -> Option<i8> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Certified number of leading bits: `log2(min |x| / width)` rounded down,
    /// `None` when the interval touches zero.
    pub fn relative_bits(&self) -> Option<i64> {
        if self.is_point() {
            return Some(i64::MAX);
        }
        let smallest = match self.signum() {
            Some(1) => &self.lo,
            Some(-1) => &self.hi,
            _ => return None,
        };
        Some(smallest.magnitude() - 1 - self.width().magnitude())
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn abs(&self) -> Self {
        match self.signum() {
            Some(s) if s >= 0 => self.clone(),
            Some(_) => self.neg(),
            None => {
                let top = core::cmp::max(self.lo.abs(), self.hi.abs());
                Self::new(Dyadic::zero(), top, self.precision_bits)
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.add(&other.lo),
            hi: self.hi.add(&other.hi),
            precision_bits: self.precision_bits.min(other.precision_bits),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = products.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        Self {
            lo,
            hi,
            precision_bits: self.precision_bits.min(other.precision_bits),
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let a = self.lo.mul_int(n);
        let b = self.hi.mul_int(n);
        let (lo, hi) = if n.is_negative() { (b, a) } else { (a, b) };
        Self {
            lo,
            hi,
            precision_bits: self.precision_bits,
        }
    }

    pub fn add_int(&self, n: &BigInt) -> Self {
        self.add(&Self::from_int(n.clone()))
    }

    /// `self / other` rounded outward to `bits`; `None` if `other` touches zero.
    pub fn div(&self, other: &Self, bits: u32) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| Dyadic::div_round(a, b, bits, false))
            .min()?;
        let hi = pairs
            .iter()
            .map(|(a, b)| Dyadic::div_round(a, b, bits, true))
            .max()?;
        Some(Self {
            lo,
            hi,
            precision_bits: bits.min(self.precision_bits).min(other.precision_bits),
        })
    }

    pub fn recip(&self, bits: u32) -> Option<Self> {
        Self::from_int(BigInt::one()).div(self, bits)
    }

    /// Outward rounding of both endpoints to `bits` significant bits.
    pub fn round(&self, bits: u32) -> Self {
        Self {
            lo: self.lo.round_down(bits),
            hi: self.hi.round_up(bits),
            precision_bits: bits.min(self.precision_bits),
        }
    }

    /// `floor` of the enclosed value when it is the same for every point.
    pub fn floor(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    pub fn midpoint_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }
}

/// Certified comparison: `Equal` only for identical point intervals.
pub fn compare(a: &IntervalReal, b: &IntervalReal) -> Comparison {
    if a.hi < b.lo {
        Comparison::Less
    } else if a.lo > b.hi {
        Comparison::Greater
    } else if a.is_point() && b.is_point() && a.lo == b.lo {
        Comparison::Equal
    } else {
        Comparison::Undecided
    }
}

impl fmt::Display for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "[{}]", self.lo.to_f64())
        } else {
            write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
        }
    }
}
