//! Real number fields `ℚ(θ)` given by a squarefree integer polynomial and an
//! isolating interval for the chosen real root θ, with elements stored in
//! the power basis `1, θ, …, θ^{d-1}`.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::{dyadic_width, floor_q, RationalInterval};
use super::poly::QPoly;
use crate::error::{McfError, Result};

static NEXT_FIELD_ID: AtomicU64 = AtomicU64::new(1);

pub const MAX_DEGREE: usize = 8;

struct RootCache {
    interval: RationalInterval,
    /// Sign of the defining polynomial at `interval.lo()`; zero once the root
    /// has been hit exactly.
    sign_lo: i8,
}

struct FieldInner {
    id: u64,
    min_poly: Vec<BigInt>,
    /// Monic rational version of `min_poly`, used as the reduction modulus.
    modulus: QPoly,
    root: Mutex<RootCache>,
}

/// Handle to a real number field; cheap to clone and shareable across threads.
#[derive(Clone)]
pub struct NumberField {
    inner: Arc<FieldInner>,
}

impl NumberField {
    /// Validates `min_poly` (degree 2..=8, squarefree) and checks with a
    /// Sturm sequence that `(lo, hi)` holds exactly one real root, with
    /// nonzero signs of opposite parity at both ends.
    pub fn new(min_poly: Vec<BigInt>, root_interval: RationalInterval) -> Result<Self> {
        let p = QPoly::from_ints(&min_poly);
        let d = p.degree().unwrap_or(0);
        if !(2..=MAX_DEGREE).contains(&d) {
            return Err(McfError::InvalidField(format!("degree {d} outside 2..={MAX_DEGREE}")));
        }
        if !p.is_squarefree() {
            return Err(McfError::InvalidField("defining polynomial is not squarefree".into()));
        }
        let (lo, hi) = (root_interval.lo(), root_interval.hi());
        let (sl, sh) = (p.sign_at(lo), p.sign_at(hi));
        if sl == 0 || sh == 0 || sl == sh {
            return Err(McfError::InvalidField(
                "polynomial must have nonzero values of opposite sign at the interval ends".into(),
            ));
        }
        if p.count_roots(lo, hi) != 1 {
            return Err(McfError::InvalidField("interval does not isolate exactly one real root".into()));
        }
        let mut min_poly = min_poly;
        while min_poly.last().is_some_and(Zero::is_zero) {
            min_poly.pop();
        }
        Ok(NumberField {
            inner: Arc::new(FieldInner {
                id: NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed),
                min_poly,
                modulus: p.monic(),
                root: Mutex::new(RootCache { interval: root_interval, sign_lo: sl }),
            }),
        })
    }

    pub fn degree(&self) -> usize {
        self.inner.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.inner.min_poly
    }

    pub(crate) fn modulus(&self) -> &QPoly {
        &self.inner.modulus
    }

    /// Current (cached) isolating interval of the root.
    pub fn root_interval(&self) -> RationalInterval {
        self.inner.root.lock().unwrap().interval.clone()
    }

    /// Same field when the handles coincide, or when the defining polynomials
    /// agree and the two isolating intervals share the root.
    pub fn same_as(&self, other: &NumberField) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) || self.inner.id == other.inner.id {
            return true;
        }
        if self.inner.min_poly != other.inner.min_poly {
            return false;
        }
        let a = self.root_interval();
        let b = other.root_interval();
        match a.intersect(&b) {
            None => false,
            Some(i) if i.is_point() => self.inner.modulus.eval(i.lo()).is_zero(),
            Some(i) => {
                let p = &self.inner.modulus;
                p.eval(i.hi()).is_zero() || p.count_roots(i.lo(), i.hi()) == 1 && !p.eval(i.lo()).is_zero()
            }
        }
    }

    /// Bisects the cached isolating interval until its width is at most
    /// `width`. Refinement is monotone and shared by every handle.
    pub fn refine_root(&self, width: &BigRational) -> RationalInterval {
        let mut cache = self.inner.root.lock().unwrap();
        let p = &self.inner.modulus;
        while cache.sign_lo != 0 && &cache.interval.width() > width {
            let w = cache.interval.width();
            // Dyadic split point in the middle half keeps denominators small.
            let bits = bits_for_width(&w) + 2;
            let scale = BigRational::from_integer(BigInt::one() << bits);
            let mid = BigRational::new(
                floor_q(&(cache.interval.midpoint() * &scale)),
                BigInt::one() << bits,
            );
            let mid = if &mid <= cache.interval.lo() { cache.interval.midpoint() } else { mid };
            let s = p.sign_at(&mid);
            if s == 0 {
                cache.interval = RationalInterval::point(mid);
                cache.sign_lo = 0;
            } else if s == cache.sign_lo {
                cache.interval = RationalInterval::new_unchecked(mid, cache.interval.hi().clone());
            } else {
                cache.interval = RationalInterval::new_unchecked(cache.interval.lo().clone(), mid);
            }
        }
        cache.interval.clone()
    }

    pub fn theta(&self) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[1] = BigRational::one();
        FieldElement { field: self.clone(), coords }
    }

    pub fn constant(&self, c: BigRational) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[0] = c;
        FieldElement { field: self.clone(), coords }
    }

    pub fn element(&self, coords: Vec<BigRational>) -> Result<FieldElement> {
        if coords.len() > self.degree() {
            return Err(McfError::input(format!(
                "{} coordinates given for a degree-{} field",
                coords.len(),
                self.degree()
            )));
        }
        Ok(self.from_poly(&QPoly::new(coords)))
    }

    pub(crate) fn from_poly(&self, p: &QPoly) -> FieldElement {
        let r = if p.degree().unwrap_or(0) >= self.degree() { p.rem(self.modulus()) } else { p.clone() };
        let mut coords = r.coeffs().to_vec();
        coords.resize(self.degree(), BigRational::zero());
        FieldElement { field: self.clone(), coords }
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("min_poly", &self.inner.min_poly)
            .field("root_interval", &self.root_interval())
            .finish()
    }
}

/// Smallest `b` with `2^-b <= w` (for `0 < w`), or 0 when `w >= 1`.
pub(crate) fn bits_for_width(w: &BigRational) -> u32 {
    if w >= &BigRational::one() {
        return 0;
    }
    let ratio = w.denom().bits() as i64 - w.numer().bits() as i64;
    let mut b = ratio.max(0) as u32;
    while &dyadic_width(b) > w {
        b += 1;
    }
    b
}

/// Element of a [`NumberField`] in power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: NumberField,
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    fn poly(&self) -> QPoly {
        QPoly::new(self.coords.clone())
    }

    fn check_field(&self, other: &FieldElement) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(McfError::FieldMismatch)
        }
    }

    /// Rational when every non-constant coordinate vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }

    pub fn is_integer(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_integer())
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        Ok(self.field.from_poly(&self.poly().mul(&other.poly())))
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn add_rational(&self, q: &BigRational) -> FieldElement {
        let mut coords = self.coords.clone();
        coords[0] += q;
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn scale(&self, q: &BigRational) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against the
    /// defining polynomial. When that polynomial is reducible the inverse is
    /// taken modulo the factor that vanishes at θ.
    pub fn inv(&self) -> Result<FieldElement> {
        let a = self.poly();
        if a.is_zero() {
            return Err(McfError::DivisionByZero);
        }
        let m = self.field.modulus();
        let (g, s, _) = a.ext_gcd(m);
        if g.degree() == Some(0) {
            return Ok(self.field.from_poly(&s));
        }
        if self.field.vanishes_at_root(&g) {
            return Err(McfError::DivisionByZero);
        }
        let cofactor = m.div_rem(&g).0;
        let (g2, s2, _) = a.ext_gcd(&cofactor);
        debug_assert_eq!(g2.degree(), Some(0));
        Ok(self.field.from_poly(&s2.rem(&cofactor)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.constant(BigRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Exact zero test: all coordinates vanish, or the coordinate polynomial
    /// shares with the defining polynomial a factor vanishing at θ.
    pub fn is_zero(&self) -> bool {
        let a = self.poly();
        if a.is_zero() {
            return true;
        }
        if a.degree() == Some(0) {
            return false;
        }
        let g = a.gcd(self.field.modulus());
        g.degree().unwrap_or(0) > 0 && self.field.vanishes_at_root(&g)
    }

    /// Interval containing the element, of width at most `width`.
    pub fn interval(&self, width: &BigRational) -> RationalInterval {
        if let Some(q) = self.as_rational() {
            return RationalInterval::point(q.clone());
        }
        let p = self.poly();
        let mut theta = self.field.root_interval();
        loop {
            let iv = p.eval_interval(&theta);
            if &iv.width() <= width || theta.is_point() {
                return iv;
            }
            // Aim for the θ-width that the observed amplification suggests.
            let tw = theta.width();
            let gain = iv.width() / &tw;
            let target = (width / gain) / BigRational::from_integer(BigInt::from(2));
            let target = if target >= tw { tw / BigRational::from_integer(BigInt::from(2)) } else { target };
            theta = self.field.refine_root(&target);
        }
    }

    /// Exact sign of the element.
    pub fn sign(&self) -> i8 {
        if let Some(q) = self.as_rational() {
            return super::poly::signum(q);
        }
        let mut w = BigRational::new(BigInt::one(), BigInt::from(1u32 << 16));
        let mut zero_checked = false;
        loop {
            if let Some(s) = self.interval(&w).sign() {
                return s;
            }
            // the gcd is costly; only pay for it once the interval straddles 0
            if !zero_checked {
                if self.is_zero() {
                    return 0;
                }
                zero_checked = true;
            }
            w = &w * &w;
        }
    }

    /// Exact floor of the element.
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return floor_q(q);
        }
        let mut w = BigRational::new(BigInt::one(), BigInt::from(1u32 << 8));
        let mut tested: Option<BigInt> = None;
        loop {
            let iv = self.interval(&w);
            if let Some(f) = iv.common_floor() {
                return f;
            }
            // Some integer k lies in (lo, hi]; if the element equals it the
            // enclosure can never exclude it, so settle that case exactly.
            let k = floor_q(iv.hi());
            if tested.as_ref() != Some(&k) {
                if self.add_rational(&-BigRational::from_integer(k.clone())).is_zero() {
                    return k;
                }
                tested = Some(k);
            }
            w = &w * &w;
        }
    }
}

impl NumberField {
    /// Does the polynomial `g` vanish at this field's root θ?
    fn vanishes_at_root(&self, g: &QPoly) -> bool {
        let iv = self.root_interval();
        if iv.is_point() {
            return g.eval(iv.lo()).is_zero();
        }
        // g divides the defining polynomial, whose only root in (lo, hi] is θ.
        g.count_roots(iv.lo(), iv.hi()) > 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldElement").field("coords", &self.coords).finish()
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.coords == other.coords
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cbrt2() -> NumberField {
        NumberField::new(
            vec![BigInt::from(-2), BigInt::from(0), BigInt::from(0), BigInt::from(1)],
            RationalInterval::new(q(1, 1), q(2, 1)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_of_theta() {
        let k = cbrt2();
        let inv = k.theta().inv().unwrap();
        assert_eq!(inv.coords(), &[q(0, 1), q(0, 1), q(1, 2)]);
    }

    #[test]
    fn theta_times_theta_squared() {
        let k = cbrt2();
        let t = k.theta();
        let t2 = t.mul(&t).unwrap();
        let p = t.mul(&t2).unwrap();
        assert_eq!(p.as_rational(), Some(&q(2, 1)));
    }

    #[test]
    fn floor_of_cube_roots() {
        let k = cbrt2();
        assert_eq!(k.theta().floor(), BigInt::from(1));
        assert_eq!(k.theta().pow(2).floor(), BigInt::from(1));
        assert_eq!(k.theta().scale(&q(10, 1)).floor(), BigInt::from(12));
        assert_eq!(k.theta().neg().floor(), BigInt::from(-2));
    }

    #[test]
    fn rejects_bad_isolation() {
        let p = vec![BigInt::from(6), BigInt::from(-7), BigInt::from(0), BigInt::from(1)];
        // roots 1, 2, -3: (0, 3) holds two of them
        let err = NumberField::new(p.clone(), RationalInterval::new(q(1, 2), q(3, 1)).unwrap());
        assert!(matches!(err, Err(McfError::InvalidField(_))));
        let ok = NumberField::new(p, RationalInterval::new(q(3, 2), q(5, 2)).unwrap());
        assert!(ok.is_ok());
        let sq = vec![BigInt::from(1), BigInt::from(-2), BigInt::from(1)];
        assert!(NumberField::new(sq, RationalInterval::new(q(0, 1), q(3, 2)).unwrap()).is_err());
    }

    #[test]
    fn zero_test_on_reducible_field() {
        // (x - 1)(x^2 - 2), θ = √2: θ^2 - 2 is zero although its coordinates are not.
        let p = vec![BigInt::from(2), BigInt::from(-2), BigInt::from(-1), BigInt::from(1)];
        let k = NumberField::new(p, RationalInterval::new(q(13, 10), q(3, 2)).unwrap()).unwrap();
        let t = k.theta();
        let e = t.mul(&t).unwrap().add_rational(&q(-2, 1));
        assert!(e.is_zero());
        assert!(!t.is_zero());
        // θ - 1 is invertible even though it divides the defining polynomial.
        let u = t.add_rational(&q(-1, 1));
        let inv = u.inv().unwrap();
        assert!(inv.mul(&u).unwrap().add_rational(&q(-1, 1)).is_zero());
        assert_eq!(t.mul(&t).unwrap().floor(), BigInt::from(2));
    }

    #[test]
    fn interval_width_is_respected() {
        let k = cbrt2();
        let w = q(1, 1000);
        let iv = k.theta().interval(&w);
        assert!(iv.width() <= w);
        assert!(iv.contains(&q(1259921, 1000000)));
    }
}
