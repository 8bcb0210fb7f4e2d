use core::fmt;

use alloc::format;
use alloc::string::{String, ToString};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use super::dyadic::{bit_len, Dyadic};
use super::interval::IntervalReal;
use super::quadratic::QuadraticReal;
use crate::error::{Error, Result};

/// Precision assumed for decimal literals without an `@bits` suffix.
pub const DEFAULT_DECIMAL_BITS: u32 = 256;

/// Smallest precision a decimal literal may declare.
pub const MIN_DECIMAL_BITS: u32 = 64;

/// A finite decimal `D` standing for an unknown real within `2^(e - P - 2)` of `D`,
/// where `P` is the declared precision and `e` the bit length of `floor |D|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecimalReal {
    value: BigRational,
    precision_bits: u32,
}

impl DecimalReal {
    /// `value` must be a terminating decimal.
    pub fn new(value: BigRational, precision_bits: u32) -> Result<Self> {
        let mut den = value.denom().clone();
        for p in [2u32, 5] {
            let p = BigInt::from(p);
            while den.is_multiple_of(&p) {
                den /= &p;
            }
        }
        if !den.is_one() {
            return Err(Error::Parse(format!(
                "{value} is not a terminating decimal"
            )));
        }
        if precision_bits < MIN_DECIMAL_BITS {
            return Err(Error::Parse(format!(
                "declared precision {precision_bits} is below {MIN_DECIMAL_BITS} bits"
            )));
        }
        Ok(Self {
            value,
            precision_bits,
        })
    }

    /// Dyadic `mantissa * 2^-shift`, precision in bits.
    pub fn from_dyadic(mantissa: BigInt, shift: u32, precision_bits: u32) -> Result<Self> {
        Self::new(
            BigRational::new(mantissa, BigInt::one() << shift),
            precision_bits,
        )
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    fn integer_bits(&self) -> i64 {
        bit_len(&self.value.abs().floor().to_integer())
    }

    /// Exponent of the uncertainty radius.
    fn radius_exponent(&self) -> i64 {
        self.integer_bits() - self.precision_bits as i64 - 2
    }

    pub fn radius(&self) -> BigRational {
        pow2(self.radius_exponent())
    }

    /// Exact rational bounds `D - r`, `D + r`.
    pub fn bounds(&self) -> (BigRational, BigRational) {
        let r = self.radius();
        (&self.value - &r, &self.value + &r)
    }

    /// Dyadic bounds enclosing [`Self::bounds`] on the grid `2^(e - P - 4)`.
    pub fn dyadic_bounds(&self) -> (Dyadic, Dyadic) {
        let s = -(self.radius_exponent() - 2);
        let (lo, hi) = self.bounds();
        let scale = pow2(s);
        let lo = (lo * &scale).floor().to_integer();
        let hi = (hi * &scale).ceil().to_integer();
        (Dyadic::new(lo, -s), Dyadic::new(hi, -s))
    }

    /// Same uncertainty model around a new value.
    pub(crate) fn with_value(&self, value: BigRational, precision_bits: u32) -> Self {
        Self {
            value,
            precision_bits,
        }
    }

    /// Exact decimal expansion of the value.
    pub fn to_decimal_string(&self) -> String {
        decimal_string(&self.value)
    }
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << (e as u64))
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << ((-e) as u64))
    }
}

fn decimal_string(value: &BigRational) -> String {
    let den = value.denom();
    let twos = den.trailing_zeros().unwrap_or(0);
    let mut rest = den >> twos;
    let mut fives = 0u64;
    let five = BigInt::from(5);
    while rest.is_multiple_of(&five) {
        rest /= &five;
        fives += 1;
    }
    debug_assert!(rest.is_one());
    let digits = twos.max(fives);
    let scaled = value.numer() * (BigInt::from(10).pow(digits) / den);
    let neg = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    let digits = digits as usize;
    if digits > 0 {
        if s.len() <= digits {
            let pad = digits + 1 - s.len();
            s.insert_str(0, &"0".repeat(pad));
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

/// The input number: exact rational, exact quadratic irrational, or a decimal of declared precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RealSpec {
    Rational(BigRational),
    Quadratic(QuadraticReal),
    Decimal(DecimalReal),
}

impl RealSpec {
    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        RealSpec::Rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(RealSpec::Rational(BigRational::new(num.into(), den)))
    }

    /// `(a + b*sqrt(d)) / c`, folding rational values into [`RealSpec::Rational`].
    pub fn quadratic(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() {
            return Err(Error::InvalidQuadratic("zero denominator".into()));
        }
        if !d.is_positive() {
            return Err(Error::InvalidQuadratic(format!(
                "radicand {d} is not positive"
            )));
        }
        let root = num_integer::Roots::sqrt(&d);
        if &root * &root == d {
            return Ok(RealSpec::Rational(BigRational::new(a + b * root, c)));
        }
        if b.is_zero() {
            return Ok(RealSpec::Rational(BigRational::new(a, c)));
        }
        QuadraticReal::new(a, b, c, d).map(RealSpec::Quadratic)
    }

    /// The value as an exact element of `Q(sqrt d)`, if it is exact.
    pub fn exact(&self) -> Option<QuadraticReal> {
        match self {
            RealSpec::Rational(r) => Some(QuadraticReal::from_ratio(
                r.numer().clone(),
                r.denom().clone(),
            )),
            RealSpec::Quadratic(q) => Some(q.clone()),
            RealSpec::Decimal(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, RealSpec::Decimal(_))
    }

    /// Certified enclosure of relative width at most `2^(1 - bits)` (absolute for decimals).
    pub fn eval_interval(&self, bits: u32) -> Result<IntervalReal> {
        if bits < 16 {
            return Err(Error::InvalidArgument("evaluation needs at least 16 bits"));
        }
        match self {
            RealSpec::Rational(r) => Ok(IntervalReal::from_ratio(r.numer(), r.denom(), bits)),
            RealSpec::Quadratic(q) => Ok(q.to_interval(bits)),
            RealSpec::Decimal(dec) => {
                if bits > dec.precision_bits {
                    return Err(Error::PrecisionExceedsInput {
                        requested: bits,
                        available: dec.precision_bits,
                    });
                }
                let (lo, hi) = dec.bounds();
                let lo = IntervalReal::from_ratio(lo.numer(), lo.denom(), bits);
                let hi = IntervalReal::from_ratio(hi.numer(), hi.denom(), bits);
                Ok(IntervalReal::new(lo.lo().clone(), hi.hi().clone(), bits))
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealSpec::Rational(r) => {
                IntervalReal::from_ratio(r.numer(), r.denom(), 64).midpoint_f64()
            }
            RealSpec::Quadratic(q) => q.to_f64(),
            RealSpec::Decimal(d) => {
                let v = d.value();
                IntervalReal::from_ratio(v.numer(), v.denom(), 64).midpoint_f64()
            }
        }
    }
}

impl fmt::Display for RealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealSpec::Rational(r) => write!(f, "{r}"),
            RealSpec::Quadratic(q) => write!(f, "{q}"),
            RealSpec::Decimal(d) => write!(f, "{}@{}", d.to_decimal_string(), d.precision_bits),
        }
    }
}

impl core::str::FromStr for RealSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_real(s)
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("'{s}' is not an integer")));
    }
    s.trim_start_matches('+')
        .parse()
        .map_err(|_| Error::Parse(format!("'{s}' is not an integer")))
}

/// Parses `p/q`, an integer, `(a+b*sqrt(d))/c` (with `b*` and `/c` optional) or a decimal
/// literal with an optional `@bits` suffix.
pub fn parse_real(text: &str) -> Result<RealSpec> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    if s.contains("sqrt") {
        return parse_quadratic(&s);
    }
    if s.contains(['.', '@', 'e', 'E']) {
        return parse_decimal(&s).map(RealSpec::Decimal);
    }
    match s.split_once('/') {
        Some((p, q)) => RealSpec::ratio(parse_int(p)?, parse_int(q)?),
        None => Ok(RealSpec::from_integer(parse_int(&s)?)),
    }
}

fn parse_decimal(s: &str) -> Result<DecimalReal> {
    let bad = || Error::Parse(format!("'{s}' is not a decimal literal"));
    let (body, bits) = match s.split_once('@') {
        Some((body, bits)) => (
            body,
            bits.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad precision suffix '{bits}'")))?,
        ),
        None => (s, DEFAULT_DECIMAL_BITS),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], parse_int(&body[i + 1..])?),
        None => (body, BigInt::zero()),
    };
    let exp: i32 = exp.try_into().map_err(|_| bad())?;
    let (neg, unsigned) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = unsigned.split_once('.').unwrap_or((unsigned, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let mut digits = String::from(int_part);
    digits.push_str(frac_part);
    let mut n: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(n * ten.pow(scale as u32))
    } else {
        BigRational::new(n, ten.pow((-scale) as u32))
    };
    DecimalReal::new(value, bits)
}

fn parse_quadratic(s: &str) -> Result<RealSpec> {
    let bad = || Error::Parse(format!("'{s}' does not match (a+b*sqrt(d))/c"));
    // split off an optional "/c" that follows the closing parenthesis of a leading group
    let (inner, c) = if let Some(rest) = s.strip_prefix('(') {
        let mut depth = 1;
        let close = rest
            .char_indices()
            .find(|&(_, ch)| {
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
                depth == 0
            })
            .map(|(i, _)| i)
            .ok_or_else(bad)?;
        let after = &rest[close + 1..];
        if after.is_empty() {
            (&rest[..close], BigInt::one())
        } else if let Some(c) = after.strip_prefix('/') {
            (&rest[..close], parse_int(c)?)
        } else {
            (s, BigInt::one())
        }
    } else {
        match s.rfind(")/") {
            Some(i) => (&s[..=i], parse_int(&s[i + 2..])?),
            None => (s, BigInt::one()),
        }
    };
    let at = inner.find("sqrt(").ok_or_else(bad)?;
    let d_text = inner[at + 5..].strip_suffix(')').ok_or_else(bad)?;
    let d = parse_int(d_text)?;
    let mut prefix = &inner[..at];
    let b_mag = match prefix.strip_suffix('*') {
        Some(p) => {
            let start = p
                .rfind(|ch: char| !ch.is_ascii_digit())
                .map_or(0, |i| i + 1);
            let b = &p[start..];
            if b.is_empty() {
                return Err(bad());
            }
            prefix = &p[..start];
            parse_int(b)?
        }
        None => BigInt::one(),
    };
    let (a, b) = match prefix.chars().last() {
        None => (BigInt::zero(), b_mag),
        Some(sign @ ('+' | '-')) => {
            let a_text = &prefix[..prefix.len() - 1];
            let a = if a_text.is_empty() {
                BigInt::zero()
            } else {
                parse_int(a_text)?
            };
            (a, if sign == '-' { -b_mag } else { b_mag })
        }
        Some(_) => return Err(bad()),
    };
    RealSpec::quadratic(a, b, c, d)
}
