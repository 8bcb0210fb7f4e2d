use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use alloc::format;
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dyadic::{bit_len, shift, Dyadic};
use super::interval::IntervalReal;
use crate::error::{Error, Result};

/// Exact real `(a + b*sqrt(d)) / c`.
///
/// Normalized so that `c > 0` and `gcd(a, b, c) = 1`. Values with `b = 0` are rationals and
/// carry `d = 1`; otherwise `d` is a non-square. Arithmetic between two irrational values
/// requires a common radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticReal {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// `floor(b * sqrt(d))`, exact for square and non-square `d`.
fn floor_scaled_root(b: &BigInt, d: &BigInt) -> BigInt {
    let n = b * b * d;
    let s = n.sqrt();
    if !b.is_negative() {
        s
    } else if &s * &s == n {
        -s
    } else {
        -s - 1
    }
}

/// Splits `d = s^2 * r` with `r` square-free. Complete for `d < 2^64`.
fn square_free(d: u64) -> (u64, u64) {
    let mut rest = d;
    let mut outside = 1u64;
    let mut radicand = 1u64;
    let mut p = 2u64;
    while (p as u128).pow(3) <= rest as u128 {
        let mut k = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        outside *= p.pow(k / 2);
        if k % 2 == 1 {
            radicand *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // the cofactor has at most two prime factors, both above the cube root
    let s = rest.sqrt();
    if s > 1 && s * s == rest {
        (outside * s, radicand)
    } else {
        (outside, radicand * rest)
    }
}

impl QuadraticReal {
    /// Checked constructor for a genuine quadratic irrational.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidQuadratic("zero denominator".into()));
        }
        if !d.is_positive() {
            return Err(Error::InvalidQuadratic(format!(
                "radicand {d} is not positive"
            )));
        }
        let small = d
            .to_u64()
            .ok_or_else(|| Error::InvalidQuadratic(format!("radicand {d} exceeds 2^64")))?;
        let (outside, radicand) = square_free(small);
        if radicand == 1 || b.is_zero() {
            return Err(Error::InvalidQuadratic(format!(
                "({a}+{b}*sqrt({d}))/{c} is rational"
            )));
        }
        Ok(Self::from_parts(
            a,
            b * BigInt::from(outside),
            c,
            BigInt::from(radicand),
        ))
    }

    /// Normalizing constructor without radicand checks.
    pub(crate) fn from_parts(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        debug_assert!(!c.is_zero());
        let (mut a, mut b, mut c) = if c.is_negative() {
            (-a, -b, -c)
        } else {
            (a, b, c)
        };
        let d = if b.is_zero() { BigInt::one() } else { d };
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Self { a, b, c, d }
    }

    pub fn from_int(n: BigInt) -> Self {
        Self::from_parts(n, BigInt::zero(), BigInt::one(), BigInt::one())
    }

    pub fn from_ratio(num: BigInt, den: BigInt) -> Self {
        Self::from_parts(num, BigInt::zero(), den, BigInt::one())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn radicand_with(&self, other: &Self) -> BigInt {
        if self.b.is_zero() {
            other.d.clone()
        } else {
            assert!(
                other.b.is_zero() || other.d == self.d,
                "mixing quadratic fields sqrt({}) and sqrt({})",
                self.d,
                other.d
            );
            self.d.clone()
        }
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.d)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn floor(&self) -> BigInt {
        (&self.a + floor_scaled_root(&self.b, &self.d)).div_floor(&self.c)
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Reciprocal; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        Some(Self::from_parts(
            &self.c * &self.a,
            -(&self.c * &self.b),
            norm,
            self.d.clone(),
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        Some(self * &other.recip()?)
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self::from_parts(&self.a * n, &self.b * n, self.c.clone(), self.d.clone())
    }

    pub fn add_int(&self, n: &BigInt) -> Self {
        Self::from_parts(
            &self.a + n * &self.c,
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
        )
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }

    /// `floor(self * 2^s)`.
    fn scaled_floor(&self, s: i64) -> BigInt {
        if s >= 0 {
            let a = shift(&self.a, s);
            let b = shift(&self.b, s);
            (a + floor_scaled_root(&b, &self.d)).div_floor(&self.c)
        } else {
            let c = shift(&self.c, -s);
            (&self.a + floor_scaled_root(&self.b, &self.d)).div_floor(&c)
        }
    }

    /// Certified enclosure with relative width at most `2^(1 - bits)`.
    ///
    /// The grid exponent depends only on the value and `bits` (monotonically), so
    /// enclosures at increasing precision are nested.
    pub fn to_interval(&self, bits: u32) -> IntervalReal {
        if self.is_rational() {
            return IntervalReal::from_ratio(&self.a, &self.c, bits);
        }
        // probe a lower bound on |value| on a coarse grid
        let mut s0: i64 = 16 + bit_len(&self.c) - bit_len(&self.a).max(bit_len(&self.b));
        let magnitude = loop {
            let lo = self.scaled_floor(s0);
            if lo.is_positive() {
                break bit_len(&lo) - 1 - s0;
            }
            let above: BigInt = &lo + 1;
            if above.is_negative() {
                break bit_len(&above) - 1 - s0;
            }
            s0 += 32.max(s0.abs());
        };
        let s = bits as i64 + 1 - magnitude;
        let lo = self.scaled_floor(s);
        IntervalReal::new(Dyadic::new(lo.clone(), -s), Dyadic::new(lo + 1, -s), bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_interval(64).midpoint_f64()
    }
}

fn sign_of(n: &BigInt) -> i8 {
    if n.is_positive() {
        1
    } else if n.is_negative() {
        -1
    } else {
        0
    }
}

impl<'a> Add<&'a QuadraticReal> for &'a QuadraticReal {
    type Output = QuadraticReal;

    fn add(self, rhs: &QuadraticReal) -> QuadraticReal {
        let d = self.radicand_with(rhs);
        QuadraticReal::from_parts(
            &self.a * &rhs.c + &rhs.a * &self.c,
            &self.b * &rhs.c + &rhs.b * &self.c,
            &self.c * &rhs.c,
            d,
        )
    }
}

impl<'a> Sub<&'a QuadraticReal> for &'a QuadraticReal {
    type Output = QuadraticReal;

    fn sub(self, rhs: &QuadraticReal) -> QuadraticReal {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QuadraticReal> for &'a QuadraticReal {
    type Output = QuadraticReal;

    fn mul(self, rhs: &QuadraticReal) -> QuadraticReal {
        let d = self.radicand_with(rhs);
        QuadraticReal::from_parts(
            &self.a * &rhs.a + &self.b * &rhs.b * &d,
            &self.a * &rhs.b + &self.b * &rhs.a,
            &self.c * &rhs.c,
            d,
        )
    }
}

impl Neg for &QuadraticReal {
    type Output = QuadraticReal;

    fn neg(self) -> QuadraticReal {
        QuadraticReal {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }
}

impl fmt::Display for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(
                f,
                "({}{}{}*sqrt({}))/{}",
                self.a,
                sign,
                self.b.abs(),
                self.d,
                self.c
            )
        }
    }
}
