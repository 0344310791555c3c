//! Dense univariate polynomials over ℚ and ℤ, constant term first.
//!
//! Only what the number-field and root-isolation code needs: Euclidean
//! division, gcd / extended gcd, Sturm sequences and exact evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::RationalInterval;

/// Polynomial with rational coefficients, `coeffs[i]` multiplies `x^i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: BigRational) -> Self {
        Self::new(vec![-r, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of the value at `x`, computed exactly.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        signum(&self.eval(x))
    }

    /// Horner evaluation in interval arithmetic.
    pub fn eval_interval(&self, x: &RationalInterval) -> RationalInterval {
        let mut acc = RationalInterval::point(BigRational::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add_scalar(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        Self::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] * &lead_inv;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = &q * d;
                rem[i - dd + j] -= t;
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::constant(BigRational::one()), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(BigRational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.lead().cloned() {
            Some(l) => {
                let inv = l.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Standard Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone()];
        if self.degree().unwrap_or(0) == 0 {
            return seq;
        }
        seq.push(self.derivative());
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        let va = sign_variations(&seq, lo);
        let vb = sign_variations(&seq, hi);
        va.saturating_sub(vb)
    }

    /// Cauchy bound: every real root lies in `(-bound, bound)`.
    pub fn root_bound(&self) -> BigRational {
        let Some(lead) = self.lead() else {
            return BigRational::one();
        };
        let lead = lead.abs();
        let max = self
            .coeffs
            .iter()
            .take(self.coeffs.len() - 1)
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        max + BigRational::one() + BigRational::one()
    }

    /// Disjoint isolating intervals `(lo, hi)` for all real roots, in increasing
    /// order. Endpoints are never roots; rational roots come back as point
    /// intervals.
    pub fn isolate_real_roots(&self) -> Vec<RationalInterval> {
        let sqf = {
            let g = self.gcd(&self.derivative());
            if g.degree().unwrap_or(0) == 0 {
                self.clone()
            } else {
                self.div_rem(&g).0
            }
        };
        if sqf.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let seq = sqf.sturm_sequence();
        let b = sqf.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = sign_variations(&seq, &lo).saturating_sub(sign_variations(&seq, &hi));
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push(RationalInterval::new_unchecked(lo, hi));
                continue;
            }
            let two = BigRational::from_integer(BigInt::from(2));
            let mid = (&lo + &hi) / &two;
            if sqf.eval(&mid).is_zero() {
                // Split around the rational root so that no child endpoint is a root.
                let mut e = (&hi - &lo) / BigRational::from_integer(BigInt::from(4));
                loop {
                    let l = &mid - &e;
                    let r = &mid + &e;
                    if !sqf.eval(&l).is_zero() && !sqf.eval(&r).is_zero() && sqf.count_roots(&l, &r) == 1 {
                        stack.push((r, hi));
                        stack.push((lo, l));
                        break;
                    }
                    e = e / &two;
                }
                out.push(RationalInterval::point(mid));
                continue;
            }
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|a, b| a.lo().cmp(b.lo()));
        out
    }
}

fn sign_variations(seq: &[QPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

pub fn signum(q: &BigRational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Content (gcd of coefficients, sign of the leading coefficient) and the
/// primitive part of an integer polynomial. The primitive part has a positive
/// leading coefficient.
pub fn primitive_part(coeffs: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut trimmed: Vec<BigInt> = coeffs.to_vec();
    while trimmed.last().is_some_and(Zero::is_zero) {
        trimmed.pop();
    }
    let Some(lead) = trimmed.last() else {
        return (BigInt::zero(), Vec::new());
    };
    let mut g = trimmed.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if lead.is_negative() {
        g = -g;
    }
    let prim = trimmed.iter().map(|c| c / &g).collect();
    (g, prim)
}

/// Clears denominators of a rational polynomial and returns its primitive
/// integer multiple.
pub fn to_primitive_integer(p: &QPoly) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    primitive_part(&ints).1
}

pub fn height(coeffs: &[BigInt]) -> BigInt {
    coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
}
