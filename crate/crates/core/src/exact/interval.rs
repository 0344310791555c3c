use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{McfError, Result};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(McfError::input(format!("interval endpoints out of order: [{lo}, {hi}]")));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub(crate) fn new_unchecked(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RationalInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RationalInterval { lo: x.clone(), hi: x }
    }

    /// Smallest interval containing both endpoints, in either order.
    pub fn hull(a: BigRational, b: BigRational) -> Self {
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &RationalInterval) -> Option<RationalInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(RationalInterval { lo, hi })
    }

    pub fn neg(&self) -> Self {
        RationalInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Self) -> Self {
        RationalInterval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn add_scalar(&self, c: &BigRational) -> Self {
        RationalInterval { lo: &self.lo + c, hi: &self.hi + c }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::hull(&self.lo * c, &self.hi * c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_point() {
            return other.scale(&self.lo);
        }
        if other.is_point() {
            return self.scale(&other.lo);
        }
        let p = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        RationalInterval { lo, hi }
    }

    /// Reciprocal; fails when the interval contains zero.
    pub fn recip(&self) -> Result<Self> {
        if self.contains(&BigRational::zero()) {
            return Err(McfError::DivisionByZero);
        }
        Ok(RationalInterval { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            RationalInterval { lo: BigRational::zero(), hi: (-&self.lo).max(self.hi.clone()) }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return RationalInterval::point(BigRational::one());
        }
        // odd powers are monotone; even powers are monotone in |x|
        let base = if e % 2 == 0 { self.abs() } else { self.clone() };
        RationalInterval { lo: pow_q(&base.lo, e), hi: pow_q(&base.hi, e) }
    }

    /// Sign of every point of the interval, if they all agree.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// `⌊x⌋` for every `x` in the interval, when it is the same for all of them.
    pub fn common_floor(&self) -> Option<BigInt> {
        let a = floor_q(&self.lo);
        (a == floor_q(&self.hi)).then_some(a)
    }

    /// Widens the endpoints outward to multiples of `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let lo = floor_q(&(&self.lo * BigRational::from_integer(scale.clone())));
        let hi = ceil_q(&(&self.hi * BigRational::from_integer(scale.clone())));
        RationalInterval {
            lo: BigRational::new(lo, scale.clone()),
            hi: BigRational::new(hi, scale),
        }
    }

    /// Strictly below `q` (every point).
    pub fn lt(&self, q: &BigRational) -> bool {
        &self.hi < q
    }

    /// Strictly above `q` (every point).
    pub fn gt(&self, q: &BigRational) -> bool {
        &self.lo > q
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

pub fn floor_q(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil_q(x: &BigRational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

pub fn pow_q(x: &BigRational, e: u32) -> BigRational {
    BigRational::new_raw(num_traits::pow(x.numer().clone(), e as usize), num_traits::pow(x.denom().clone(), e as usize))
}

/// `2^-bits` as a rational.
pub fn dyadic_width(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// The rational with the smallest denominator in `[lo, hi]` (smallest
/// absolute numerator among those), found by the continued-fraction walk.
pub fn simplest_rational_in(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_rational_in(&-hi, &-lo);
    }
    let fl = floor_q(lo);
    if BigRational::from_integer(fl.clone()) == *lo {
        return lo.clone();
    }
    let next: BigInt = &fl + 1;
    if BigRational::from_integer(next.clone()) <= *hi {
        return BigRational::from_integer(next);
    }
    // lo and hi share the integer part; recurse on the reciprocals of the
    // fractional parts (order flips).
    let base = BigRational::from_integer(fl);
    let flo = lo - &base;
    let fhi = hi - &base;
    let inner = simplest_rational_in(&fhi.recip(), &flo.recip());
    base + inner.recip()
}
