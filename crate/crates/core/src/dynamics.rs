//! The natural extension `T(x, y) = ({1/x}, 1/(floor(1/x) + y))` of the Gauss map.

use core::f64::consts::LN_2;
use core::fmt::Debug;

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::float::{Float, FloatCore};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Scalar field the map can run over: exact rationals or doubles.
pub trait Coord: Clone + PartialOrd + Debug {
    fn from_ratio(num: i64, den: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `None` for division by zero.
    fn div(&self, other: &Self) -> Option<Self>;
    fn floor(&self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;

    fn zero() -> Self {
        Self::from_ratio(0, 1)
    }

    fn one() -> Self {
        Self::from_ratio(1, 1)
    }

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl Coord for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Option<Self> {
        (*other != 0.0).then(|| self / other)
    }

    fn floor(&self) -> Self {
        FloatCore::floor(*self)
    }

    fn abs(&self) -> Self {
        FloatCore::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Coord for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Option<Self> {
        (!Zero::is_zero(other)).then(|| self / other)
    }

    fn floor(&self) -> Self {
        BigRational::floor(self)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// A point `(x, y)` of the phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainPoint<C> {
    pub x: C,
    pub y: C,
}

impl<C: Coord> DomainPoint<C> {
    pub fn new(x: C, y: C) -> Self {
        Self { x, y }
    }

    /// Membership in `]0,1[^2`, `{0} x [0,1/2]` or `[0,1/2] x {0}`.
    pub fn in_domain(&self) -> bool {
        let (zero, one, half) = (C::zero(), C::one(), C::from_ratio(1, 2));
        let unit = |v: &C| *v >= zero && *v < one;
        if !unit(&self.x) || !unit(&self.y) {
            return false;
        }
        if self.x.is_zero() {
            return self.y <= half;
        }
        if self.y.is_zero() {
            return self.x <= half;
        }
        true
    }

    /// Coordinates swapped.
    pub fn swap(&self) -> Self {
        Self::new(self.y.clone(), self.x.clone())
    }
}

/// `1/v` split into integer part and fractional part.
fn gauss_split<C: Coord>(v: &C) -> Option<(C, C)> {
    let inv = C::one().div(v)?;
    let a = inv.floor();
    let frac = inv.sub(&a);
    Some((a, frac))
}

/// `T(x, y) = ({1/x}, 1/(floor(1/x) + y))` on `]0,1[^2 U ]0,1/2] x {0}`.
pub fn step_t<C: Coord>(p: &DomainPoint<C>) -> Result<DomainPoint<C>> {
    if p.x.is_zero() || !p.in_domain() {
        return Err(Error::DomainError);
    }
    let (a, x) = gauss_split(&p.x).ok_or(Error::DomainError)?;
    let y = C::one().div(&a.add(&p.y)).ok_or(Error::DomainError)?;
    Ok(DomainPoint::new(x, y))
}

/// `T^-1(x, y) = (1/(floor(1/y) + x), {1/y})`.
pub fn step_t_inv<C: Coord>(p: &DomainPoint<C>) -> Result<DomainPoint<C>> {
    if p.y.is_zero() || !p.in_domain() {
        return Err(Error::DomainError);
    }
    let (a, y) = gauss_split(&p.y).ok_or(Error::DomainError)?;
    let x = C::one().div(&a.add(&p.x)).ok_or(Error::DomainError)?;
    Ok(DomainPoint::new(x, y))
}

/// `p, T(p), ..., T^n(p)` (or backward iterates for negative `n`).
///
/// Stops with `OrbitTerminates` as soon as an iterate reaches the edge where the next
/// step is undefined (`x = 0` forward, `y = 0` backward).
pub fn orbit<C: Coord>(p: &DomainPoint<C>, n: i64) -> Result<Vec<DomainPoint<C>>> {
    let steps = n.unsigned_abs() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(p.clone());
    for step in 1..=steps {
        let last = &out[step - 1];
        let next = if n >= 0 {
            step_t(last)?
        } else {
            step_t_inv(last)?
        };
        let edge = if n >= 0 {
            next.x.is_zero()
        } else {
            next.y.is_zero()
        };
        if edge {
            return Err(Error::OrbitTerminates { step });
        }
        out.push(next);
    }
    Ok(out)
}

/// `x > (2y + 1)/(y + 2)`; the boundary itself is outside.
pub fn in_region_v<C: Coord>(p: &DomainPoint<C>) -> bool {
    let two = C::from_ratio(2, 1);
    let lhs = p.x.mul(&p.y.add(&two));
    let rhs = two.mul(&p.y).add(&C::one());
    lhs > rhs
}

/// Invariant density `1/(ln 2 (1 + xy)^2)`.
pub fn density_mu(x: f64, y: f64) -> f64 {
    let s = 1.0 + x * y;
    1.0 / (LN_2 * s * s)
}

fn g<C: Coord>(p: &DomainPoint<C>) -> C {
    let s = C::one().add(&p.x.mul(&p.y));
    C::one().div(&s.mul(&s)).expect("1 + xy > 0")
}

/// `|g(T p) |Jac T(p)| - g(p)|` with `g = 1/(1+xy)^2`; zero iff the density is invariant at `p`.
pub fn invariance_residual<C: Coord>(p: &DomainPoint<C>) -> Result<C> {
    let image = step_t(p)?;
    let (a, _) = gauss_split(&p.x).ok_or(Error::DomainError)?;
    let t = p.x.mul(&a.add(&p.y));
    let jac = C::one().div(&t.mul(&t)).ok_or(Error::DomainError)?;
    Ok(g(&image).mul(&jac).sub(&g(p)).abs())
}

/// `(|z' - y'|, |z'' - y''|)` for the orbits of `(x, y)` and `(x, z)`.
pub fn contraction_check<C: Coord>(x: &C, y: &C, z: &C) -> Result<(C, C)> {
    let a1 = step_t(&DomainPoint::new(x.clone(), y.clone()))?;
    let b1 = step_t(&DomainPoint::new(x.clone(), z.clone()))?;
    let a2 = step_t(&a1)?;
    let b2 = step_t(&b1)?;
    Ok((b1.y.sub(&a1.y).abs(), b2.y.sub(&a2.y).abs()))
}

/// `int_{x > (2y+1)/(y+2)} dx / (1+xy)^2` over `x < 1`.
pub fn mu_inner(y: f64) -> f64 {
    (1.0 - y) / (2.0 * (1.0 + y) * (1.0 + y + y * y))
}

/// Exact value of `mu(V)`.
pub fn mu_v_exact() -> f64 {
    (LN_2 - 0.5 * Float::ln(3.0f64)) / LN_2
}

/// `mu(V)` by adaptive Simpson on the inner closed form, accurate to `abs_tol`.
pub fn mu_measure_v(abs_tol: f64) -> Result<f64> {
    if abs_tol.is_nan() || abs_tol < 1e-12 {
        return Err(Error::InvalidArgument("tolerance must be at least 1e-12"));
    }
    let f = mu_inner;
    let (a, b) = (0.0, 1.0);
    let (fa, fm, fb) = (f(a), f(0.5), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // integral is divided by ln 2 afterwards, so tighten accordingly
    let raw = simpson(&f, a, b, fa, fm, fb, whole, abs_tol * LN_2 / 4.0, 50);
    Ok(raw / LN_2)
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || FloatCore::abs(delta) <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Exact rational point, convenience for tests and the CLI.
pub fn rational_point(x: (i64, i64), y: (i64, i64)) -> DomainPoint<BigRational> {
    DomainPoint::new(
        BigRational::from_ratio(x.0, x.1),
        BigRational::from_ratio(y.0, y.1),
    )
}

impl DomainPoint<BigRational> {
    pub fn to_f64(&self) -> DomainPoint<f64> {
        DomainPoint::new(Coord::to_f64(&self.x), Coord::to_f64(&self.y))
    }
}
