//! Exact real inputs: rationals, real algebraic numbers, and refinable
//! interval oracles.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::FieldElement;
use super::interval::{dyadic_width, floor_q, RationalInterval};
use crate::error::{McfError, Result};

pub const DEFAULT_BUDGET: u32 = 64;
pub const BUDGET_ENV: &str = "MCF_PRECISION_BUDGET";

/// Number of refinement rounds (each at least doubling precision) allowed
/// before an oracle operation gives up with `NonTerminating`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionBudget {
    pub rounds: u32,
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        PrecisionBudget { rounds: DEFAULT_BUDGET }
    }
}

impl PrecisionBudget {
    pub fn new(rounds: u32) -> Result<Self> {
        if rounds == 0 {
            return Err(McfError::input("precision budget must be at least 1"));
        }
        Ok(PrecisionBudget { rounds })
    }

    /// Default budget, overridden by `MCF_PRECISION_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(s) => {
                let r = s
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| McfError::input(format!("{BUDGET_ENV} must be a positive integer, got {s:?}")))?;
                Self::new(r)
            }
            Err(_) => Ok(Self::default()),
        }
    }
}

/// A stream of nested enclosures of one real number.
pub trait IntervalSource: Send {
    /// The next, strictly narrower, enclosure; `None` once no more precision
    /// is available. A point interval is final and may be repeated.
    fn next_interval(&mut self) -> Option<RationalInterval>;
}

struct OracleState {
    source: Box<dyn IntervalSource>,
    current: RationalInterval,
    pulls: u64,
}

/// Shared handle to a refinable real. Clones refine the same state.
#[derive(Clone)]
pub struct Oracle {
    state: Arc<Mutex<OracleState>>,
}

impl Oracle {
    pub fn new(mut source: Box<dyn IntervalSource>) -> Result<Self> {
        let first = source.next_interval().ok_or(McfError::OracleExhausted)?;
        Ok(Oracle { state: Arc::new(Mutex::new(OracleState { source, current: first, pulls: 1 })) })
    }

    pub fn current(&self) -> RationalInterval {
        self.state.lock().unwrap().current.clone()
    }

    pub fn pulls(&self) -> u64 {
        self.state.lock().unwrap().pulls
    }

    pub fn same_as(&self, other: &Oracle) -> bool {
        Arc::ptr_eq(&self.state, &other.state)
    }

    /// Pulls one more enclosure. Panics if the source breaks nesting.
    pub fn refine(&self) -> Result<RationalInterval> {
        let mut st = self.state.lock().unwrap();
        if st.current.is_point() {
            return Ok(st.current.clone());
        }
        let next = st.source.next_interval().ok_or(McfError::OracleExhausted)?;
        assert!(
            st.current.contains_interval(&next),
            "oracle enclosure {next} is not nested in {}",
            st.current
        );
        assert!(next.width() < st.current.width(), "oracle enclosure did not shrink");
        st.current = next.clone();
        st.pulls += 1;
        Ok(next)
    }

    /// Refines until the width is at most `width` or the budget runs out.
    pub fn refine_to(&self, width: &BigRational, budget: PrecisionBudget) -> Result<RationalInterval> {
        let mut iv = self.current();
        let mut rounds = 0;
        while &iv.width() > width {
            if rounds == budget.rounds {
                return Err(McfError::NonTerminating { rounds });
            }
            iv = self.refine()?;
            rounds += 1;
        }
        Ok(iv)
    }

    /// Floor of the limit, with the width of the enclosure that certified it.
    /// Diverges (up to the budget) when the limit is an integer.
    pub fn floor(&self, budget: PrecisionBudget) -> Result<(BigInt, BigRational)> {
        let mut iv = self.current();
        let mut rounds = 0;
        loop {
            if let Some(f) = iv.common_floor() {
                return Ok((f, iv.width()));
            }
            if rounds == budget.rounds {
                return Err(McfError::NonTerminating { rounds });
            }
            iv = self.refine()?;
            rounds += 1;
        }
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oracle({})", self.current())
    }
}

/// Decimal literal read as a truncation of the true value: `1.259` stands
/// for some x in `[1.259, 1.260]`. Enclosures use 1, 2, 4, … digits.
pub struct DecimalSource {
    negative: bool,
    int_part: BigInt,
    frac_digits: Vec<u8>,
    next_digits: usize,
    done: bool,
}

impl DecimalSource {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        let ok = !ip.is_empty() && ip.bytes().all(|b| b.is_ascii_digit()) && fp.bytes().all(|b| b.is_ascii_digit());
        if !ok {
            return Err(McfError::input(format!("not a decimal literal: {s:?}")));
        }
        Ok(DecimalSource {
            negative,
            int_part: ip.parse().expect("digits"),
            frac_digits: fp.bytes().map(|b| b - b'0').collect(),
            next_digits: 0,
            done: false,
        })
    }

    fn truncation(&self, j: usize) -> BigRational {
        let mut num = self.int_part.clone();
        for &d in &self.frac_digits[..j] {
            num = num * 10 + d;
        }
        BigRational::new(num, num_traits::pow(BigInt::from(10), j))
    }
}

impl IntervalSource for DecimalSource {
    fn next_interval(&mut self) -> Option<RationalInterval> {
        if self.done {
            return None;
        }
        let j = self.next_digits.min(self.frac_digits.len());
        if j == self.frac_digits.len() {
            self.done = true;
        }
        self.next_digits = if self.next_digits == 0 { 1 } else { self.next_digits * 2 };
        let t = self.truncation(j);
        let ulp = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), j));
        let (lo, hi) = if self.negative { (-(&t + &ulp), -t) } else { (t.clone(), t + ulp) };
        Some(RationalInterval::new_unchecked(lo, hi))
    }
}

/// Enclosures of a field element at widths `2^-1, 2^-2, 2^-4, …`.
pub struct AlgebraicSource {
    elem: FieldElement,
    bits: u32,
    last: Option<RationalInterval>,
}

impl AlgebraicSource {
    pub fn new(elem: FieldElement) -> Self {
        AlgebraicSource { elem, bits: 1, last: None }
    }
}

impl IntervalSource for AlgebraicSource {
    fn next_interval(&mut self) -> Option<RationalInterval> {
        loop {
            let iv = self.elem.interval(&dyadic_width(self.bits));
            self.bits = self.bits.saturating_mul(2);
            let iv = match &self.last {
                Some(prev) => prev.intersect(&iv).expect("enclosures of one value intersect"),
                None => iv,
            };
            let progressed = match &self.last {
                None => true,
                Some(prev) => iv.width() < prev.width() || prev.is_point(),
            };
            if progressed {
                self.last = Some(iv.clone());
                return Some(iv);
            }
        }
    }
}

/// `(Σ num_j x_j + num_0) / (Σ den_j x_j + den_0)` over shared oracles: the
/// shape every complete quotient of an oracle expansion takes.
pub struct ProjectiveSource {
    inputs: Vec<Oracle>,
    num: Vec<BigInt>,
    den: Vec<BigInt>,
    last: Option<RationalInterval>,
}

impl ProjectiveSource {
    /// `num` and `den` hold one coefficient per input followed by the constant.
    pub fn new(inputs: Vec<Oracle>, num: Vec<BigInt>, den: Vec<BigInt>) -> Self {
        assert_eq!(num.len(), inputs.len() + 1);
        assert_eq!(den.len(), inputs.len() + 1);
        ProjectiveSource { inputs, num, den, last: None }
    }

    fn form(&self, coeffs: &[BigInt], ivs: &[RationalInterval]) -> RationalInterval {
        let k = coeffs.len() - 1;
        let mut acc = RationalInterval::point(BigRational::from_integer(coeffs[k].clone()));
        for (c, iv) in coeffs[..k].iter().zip(ivs) {
            if !c.is_zero() {
                acc = acc.add(&iv.scale(&BigRational::from_integer(c.clone())));
            }
        }
        acc
    }

    fn evaluate(&self) -> Option<RationalInterval> {
        let ivs: Vec<_> = self.inputs.iter().map(Oracle::current).collect();
        let n = self.form(&self.num, &ivs);
        let d = self.form(&self.den, &ivs);
        n.div(&d).ok()
    }
}

impl IntervalSource for ProjectiveSource {
    fn next_interval(&mut self) -> Option<RationalInterval> {
        // Use whatever precision the shared inputs already carry before
        // pulling more.
        loop {
            if let Some(iv) = self.evaluate() {
                let iv = match &self.last {
                    Some(prev) => prev.intersect(&iv).expect("enclosures of one value intersect"),
                    None => iv,
                };
                let progressed = match &self.last {
                    None => true,
                    Some(prev) => iv.width() < prev.width() || prev.is_point(),
                };
                if progressed {
                    self.last = Some(iv.clone());
                    return Some(iv);
                }
            }
            let mut any = false;
            for o in &self.inputs {
                if !o.current().is_point() {
                    o.refine().ok()?;
                    any = true;
                }
            }
            if !any {
                return None;
            }
        }
    }
}

/// Fixed list of nested enclosures, mostly for tests and precomputed data.
pub struct ListSource {
    items: std::vec::IntoIter<RationalInterval>,
}

impl ListSource {
    pub fn new(items: Vec<RationalInterval>) -> Self {
        ListSource { items: items.into_iter() }
    }
}

impl IntervalSource for ListSource {
    fn next_interval(&mut self) -> Option<RationalInterval> {
        self.items.next()
    }
}

/// An exact real input.
#[derive(Clone, Debug)]
pub enum RealValue {
    Rational(BigRational),
    Algebraic(FieldElement),
    Oracle(Oracle),
}

impl From<BigRational> for RealValue {
    fn from(q: BigRational) -> Self {
        RealValue::Rational(q)
    }
}

impl From<FieldElement> for RealValue {
    fn from(e: FieldElement) -> Self {
        match e.as_rational() {
            Some(q) => RealValue::Rational(q.clone()),
            None => RealValue::Algebraic(e),
        }
    }
}

impl RealValue {
    pub fn rational(num: i64, den: i64) -> Self {
        RealValue::Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn decimal(digits: &str) -> Result<Self> {
        Ok(RealValue::Oracle(Oracle::new(Box::new(DecimalSource::parse(digits)?))?))
    }

    pub fn is_oracle(&self) -> bool {
        matches!(self, RealValue::Oracle(_))
    }

    /// An oracle view of the value (exact values become exact sources).
    pub fn to_oracle(&self) -> Result<Oracle> {
        match self {
            RealValue::Oracle(o) => Ok(o.clone()),
            RealValue::Rational(q) => Oracle::new(Box::new(ListSource::new(vec![RationalInterval::point(q.clone())]))),
            RealValue::Algebraic(e) => Oracle::new(Box::new(AlgebraicSource::new(e.clone()))),
        }
    }

    /// Floor plus, for oracles, the width of the certifying enclosure.
    pub fn floor_certified(&self, budget: PrecisionBudget) -> Result<(BigInt, Option<BigRational>)> {
        match self {
            RealValue::Rational(q) => Ok((floor_q(q), None)),
            RealValue::Algebraic(e) => Ok((e.floor(), None)),
            RealValue::Oracle(o) => o.floor(budget).map(|(f, w)| (f, Some(w))),
        }
    }

    /// Enclosure of width at most `width`.
    pub fn enclosure(&self, width: &BigRational, budget: PrecisionBudget) -> Result<RationalInterval> {
        match self {
            RealValue::Rational(q) => Ok(RationalInterval::point(q.clone())),
            RealValue::Algebraic(e) => Ok(e.interval(width)),
            RealValue::Oracle(o) => o.refine_to(width, budget),
        }
    }

    /// Exact comparison with a rational. Oracles refine until the enclosure
    /// excludes `q`, so a tie exhausts the budget.
    pub fn cmp_rational(&self, q: &BigRational, budget: PrecisionBudget) -> Result<Ordering> {
        match self {
            RealValue::Rational(x) => Ok(x.cmp(q)),
            RealValue::Algebraic(e) => {
                let s = e.add_rational(&-q).sign();
                Ok(s.cmp(&0))
            }
            RealValue::Oracle(o) => {
                let mut iv = o.current();
                let mut rounds = 0;
                loop {
                    if iv.lt(q) {
                        return Ok(Ordering::Less);
                    }
                    if iv.gt(q) {
                        return Ok(Ordering::Greater);
                    }
                    if iv.is_point() {
                        return Ok(Ordering::Equal);
                    }
                    if rounds == budget.rounds {
                        return Err(McfError::NonTerminating { rounds });
                    }
                    iv = o.refine()?;
                    rounds += 1;
                }
            }
        }
    }
}

/// `⌊x⌋`, exact for rational and algebraic values; oracles refine under the
/// default budget.
pub fn floor_exact(x: &RealValue) -> Result<BigInt> {
    x.floor_certified(PrecisionBudget::from_env()?).map(|(f, _)| f)
}

/// Exact integrality test; oracle values are rejected.
pub fn is_integer(x: &RealValue) -> Result<bool> {
    match x {
        RealValue::Rational(q) => Ok(q.is_integer()),
        RealValue::Algebraic(e) => Ok(e.is_integer()),
        RealValue::Oracle(_) => Err(McfError::UndecidableForOracle),
    }
}
