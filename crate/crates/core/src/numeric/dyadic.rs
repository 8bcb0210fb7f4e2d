use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A dyadic rational `mantissa * 2^exponent`, kept with an odd mantissa (or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

/// Number of significant bits of `|n|` (0 for zero).
pub(crate) fn bit_len(n: &BigInt) -> i64 {
    n.bits() as i64
}

pub(crate) fn shift(n: &BigInt, by: i64) -> BigInt {
    if by >= 0 {
        n << (by as u64)
    } else {
        // arithmetic shift: rounds toward negative infinity
        n >> ((-by) as u64)
    }
}

fn shift_ceil(n: &BigInt, by: i64) -> BigInt {
    if by >= 0 {
        n << (by as u64)
    } else {
        -((-n) >> ((-by) as u64))
    }
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0) as i64;
        if tz == 0 {
            Self { mantissa, exponent }
        } else {
            Self {
                mantissa: mantissa >> (tz as u64),
                exponent: exponent + tz,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_int(n: BigInt) -> Self {
        Self::new(n, 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i8 {
        if self.mantissa.is_positive() {
            1
        } else if self.mantissa.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// `floor(log2 |x|) + 1`; meaningless for zero.
    pub fn magnitude(&self) -> i64 {
        bit_len(&self.mantissa) + self.exponent
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, i64) {
        if self.is_zero() {
            return (BigInt::zero(), other.mantissa.clone(), other.exponent);
        }
        if other.is_zero() {
            return (self.mantissa.clone(), BigInt::zero(), self.exponent);
        }
        let e = self.exponent.min(other.exponent);
        (
            shift(&self.mantissa, self.exponent - e),
            shift(&other.mantissa, other.exponent - e),
            e,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        Self::new(a - b, e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
        )
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self::new(&self.mantissa * n, self.exponent)
    }

    /// `floor(self * 2^by)`.
    pub fn scaled_floor(&self, by: i64) -> BigInt {
        shift(&self.mantissa, self.exponent + by)
    }

    /// `ceil(self * 2^by)`.
    pub fn scaled_ceil(&self, by: i64) -> BigInt {
        shift_ceil(&self.mantissa, self.exponent + by)
    }

    pub fn floor(&self) -> BigInt {
        self.scaled_floor(0)
    }

    pub fn ceil(&self) -> BigInt {
        self.scaled_ceil(0)
    }

    /// Largest dyadic with at most `bits` significant bits that is `<= self`.
    pub fn round_down(&self, bits: u32) -> Self {
        let excess = bit_len(&self.mantissa) - bits as i64;
        if excess <= 0 {
            return self.clone();
        }
        Self::new(shift(&self.mantissa, -excess), self.exponent + excess)
    }

    /// Smallest dyadic with at most `bits` significant bits that is `>= self`.
    pub fn round_up(&self, bits: u32) -> Self {
        self.neg().round_down(bits).neg()
    }

    /// `a / b` rounded toward `-inf` (or `+inf` when `up`) to about `bits` significant bits.
    pub fn div_round(a: &Self, b: &Self, bits: u32, up: bool) -> Self {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Self::zero();
        }
        // quotient of mantissas scaled so it carries bits + 2 significant bits
        let t = bits as i64 + 2 + bit_len(&b.mantissa) - bit_len(&a.mantissa);
        let num = shift(&a.mantissa, t.max(0));
        let den = shift(&b.mantissa, (-t).max(0));
        let q = if up {
            num.div_ceil(&den)
        } else {
            num.div_floor(&den)
        };
        Self::new(q, a.exponent - b.exponent - t)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let excess = (bit_len(&self.mantissa) - 64).max(0);
        let top = shift(&self.mantissa, -excess).to_f64().unwrap_or(0.0);
        ldexp(top, self.exponent + excess)
    }
}

/// Nearest-ish double to `num / den` (relative error about `2^-62`).
pub(crate) fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let sn = (bit_len(num) - 64).max(0);
    let sd = (bit_len(den) - 64).max(0);
    let n = shift(num, -sn).to_f64().unwrap_or(0.0);
    let d = shift(den, -sd).to_f64().unwrap_or(1.0);
    ldexp(n / d, sn - sd)
}

/// `x * 2^e` without overflowing intermediate powers.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    const STEP: i64 = 1000;
    let up = f64::from_bits(((1023 + STEP) as u64) << 52);
    let down = f64::from_bits(((1023 - STEP) as u64) << 52);
    while e > STEP {
        x *= up;
        e -= STEP;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -STEP {
        x *= down;
        e += STEP;
        if x == 0.0 {
            return x;
        }
    }
    x * f64::from_bits(((1023 + e) as u64) << 52)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes first to avoid shifting huge gaps
        let (ma, mb) = (self.magnitude(), other.magnitude());
        if ma != mb {
            let by_mag = ma.cmp(&mb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent >= 0 {
            write!(f, "{}", shift(&self.mantissa, self.exponent))
        } else {
            let den = BigInt::one() << ((-self.exponent) as u64);
            write!(f, "{}/{}", self.mantissa, den)
        }
    }
}
