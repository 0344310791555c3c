//! Certified natural logarithms with rational enclosures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{dyadic_width, floor_q, ceil_q, RationalInterval};
use crate::error::{McfError, Result};

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

/// Rounds `x` down (`up == false`) or up to a multiple of `2^-bits`.
fn round_dyadic(x: &BigRational, bits: u32, up: bool) -> BigRational {
    let scale = BigInt::one() << bits;
    let s = x * BigRational::from_integer(scale.clone());
    let n = if up { ceil_q(&s) } else { floor_q(&s) };
    BigRational::new(n, scale)
}

/// `atanh(z)` for `|z| <= 1/2`, enclosed to width about `2^-bits`.
fn atanh(z: &BigRational, bits: u32) -> RationalInterval {
    if z.is_zero() {
        return RationalInterval::point(BigRational::zero());
    }
    let z2 = z * z;
    let tol = dyadic_width(bits + 4);
    let guard = bits + 16;
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    let mut pw = z.clone();
    let mut j: u64 = 0;
    loop {
        let term = &pw / BigRational::from_integer(BigInt::from(2 * j + 1));
        lo += round_dyadic(&term, guard, false);
        hi += round_dyadic(&term, guard, true);
        pw = &pw * &z2;
        j += 1;
        // tail beyond the last term: |z|^{2j+1} / ((2j+1)(1 - z^2))
        let tail = pw.abs() / (BigRational::from_integer(BigInt::from(2 * j + 1)) * (BigRational::one() - &z2));
        if tail < tol {
            return RationalInterval::new_unchecked(lo - &tail, hi + tail);
        }
    }
}

/// `ln 2 = 2·atanh(1/3)`.
pub fn ln2(bits: u32) -> RationalInterval {
    atanh(&BigRational::new(BigInt::one(), BigInt::from(3)), bits + 1).scale(&two())
}

/// Certified enclosure of `ln x` for rational `x > 0`, of width roughly
/// `2^-bits` (wider for huge `x`, where `k·ln 2` dominates).
pub fn ln_q(x: &BigRational, bits: u32) -> Result<RationalInterval> {
    if !x.is_positive() {
        return Err(McfError::input("logarithm of a non-positive number"));
    }
    // x = 2^k · y with y in [1, 2)
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let pow2 = |e: i64| {
        if e >= 0 {
            BigRational::from_integer(BigInt::one() << e as u64)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-e) as u64)
        }
    };
    let mut y = x / pow2(k);
    if y < BigRational::one() {
        y *= two();
        k -= 1;
    }
    let extra = 64 - (k.unsigned_abs().max(1)).leading_zeros();
    let prec = bits + extra + 8;
    let y_lo = round_dyadic(&y, prec, false);
    let y_hi = round_dyadic(&y, prec, true);
    let ln_y_lo = ln_near_one(&y_lo, prec);
    let ln_y_hi = ln_near_one(&y_hi, prec);
    let ln_y = RationalInterval::new_unchecked(ln_y_lo.lo().clone(), ln_y_hi.hi().clone());
    let tail = ln2(prec).scale(&BigRational::from_integer(BigInt::from(k)));
    Ok(ln_y.add(&tail))
}

/// `ln y` for `y` in `[1, 2]`, via `z = (y - 1)/(y + 1)` with `|z| <= 1/3`.
fn ln_near_one(y: &BigRational, bits: u32) -> RationalInterval {
    let z = (y - BigRational::one()) / (y + BigRational::one());
    atanh(&z, bits + 1).scale(&two())
}

/// Enclosure of `ln` over a positive interval (monotone).
pub fn ln_interval(x: &RationalInterval, bits: u32) -> Result<RationalInterval> {
    let lo = ln_q(x.lo(), bits)?;
    if x.is_point() {
        return Ok(lo);
    }
    let hi = ln_q(x.hi(), bits)?;
    Ok(RationalInterval::new_unchecked(lo.lo().clone(), hi.hi().clone()))
}

/// `ln n` for a positive integer.
pub fn ln_int(n: &BigInt, bits: u32) -> Result<RationalInterval> {
    ln_q(&BigRational::from_integer(n.clone()), bits)
}
