//! Outward-rounded intervals. Every native operation is performed in
//! round-to-nearest and the result endpoints are pushed one ulp outward,
//! which encloses the exact result without touching the FPU rounding mode.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

// A sum or difference that rounds to zero is exactly zero (results in the
// subnormal range are exact), so zero needs no widening.
#[inline]
fn down_sum(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.next_down()
    }
}

#[inline]
fn up_sum(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.next_up()
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Interval with the given endpoints; panics on NaN or reversed bounds.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(!lo.is_nan() && !hi.is_nan() && lo <= hi, "bad interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Degenerate interval `[x, x]`; exact because x is already a binary64.
    pub fn point(x: f64) -> Self {
        Interval::new(x, x)
    }

    /// Smallest interval around x widened by one ulp on each side, for
    /// constants that are only known to round-to-nearest accuracy.
    pub fn around(x: f64) -> Self {
        Interval::new(down(x), up(x))
    }

    pub fn hull(self, other: Interval) -> Self {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        if self.lo.is_infinite() || self.hi.is_infinite() {
            return if self.lo == self.hi { self.lo } else { 0.5 * self.lo + 0.5 * self.hi };
        }
        0.5 * (self.lo + self.hi)
    }

    /// Magnitude: max |x| over the interval.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn abs(self) -> Interval {
        iv_abs(self)
    }

    pub fn sqr(self) -> Interval {
        iv_sqr(self)
    }

    /// Enclosure of the square root; the lower end is clamped at 0.
    pub fn sqrt(self) -> Interval {
        let lo = if self.lo <= 0.0 { 0.0 } else { down(self.lo.sqrt()).max(0.0) };
        let hi = if self.hi <= 0.0 { 0.0 } else { up(self.hi.sqrt()) };
        Interval::new(lo, hi)
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    /// Scales by a power of two, which is exact barring overflow/underflow.
    pub fn scale_pow2(self, k: i32) -> Interval {
        let s = 2f64.powi(k);
        iv_mul(self, Interval::point(s))
    }
}

pub fn iv_add(a: Interval, b: Interval) -> Interval {
    Interval::new(down_sum(a.lo + b.lo), up_sum(a.hi + b.hi))
}

pub fn iv_sub(a: Interval, b: Interval) -> Interval {
    Interval::new(down_sum(a.lo - b.hi), up_sum(a.hi - b.lo))
}

pub fn iv_mul(a: Interval, b: Interval) -> Interval {
    if a == Interval::ZERO || b == Interval::ZERO {
        return Interval::ZERO;
    }
    let p = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi];
    // 0·∞ only arises from overflowed operands; treat it as 0.
    let p = p.map(|x| if x.is_nan() { 0.0 } else { x });
    let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Interval::new(down(lo), up(hi))
}

pub fn iv_div(a: Interval, b: Interval) -> Result<Interval> {
    if b.contains_zero() {
        return Err(Error::DivisionByZeroInterval);
    }
    let q = [a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi];
    let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Interval::new(down(lo), up(hi)))
}

/// |a| needs no rounding.
pub fn iv_abs(a: Interval) -> Interval {
    if a.lo >= 0.0 {
        a
    } else if a.hi <= 0.0 {
        Interval::new(-a.hi, -a.lo)
    } else {
        Interval::new(0.0, a.lo.abs().max(a.hi))
    }
}

/// a², tight at zero.
pub fn iv_sqr(a: Interval) -> Interval {
    let m = iv_abs(a);
    let lo = if m.lo == 0.0 { 0.0 } else { down(m.lo * m.lo).max(0.0) };
    Interval::new(lo, up(m.hi * m.hi))
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        iv_add(self, rhs)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        iv_sub(self, rhs)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        iv_mul(self, rhs)
    }
}

impl Div for Interval {
    type Output = Interval;
    /// Panics if the divisor contains zero; use [`iv_div`] to handle that.
    fn div(self, rhs: Interval) -> Interval {
        iv_div(self, rhs).expect("interval division by an interval containing zero")
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, iv_add)
    }
}
