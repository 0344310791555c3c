use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::ConvergentState;
use crate::engine::PartialQuotients;
use crate::error::{McfError, Result};
use crate::exact::analytic::{ln_int, ln_interval, ln_q};
use crate::exact::interval::dyadic_width;
use crate::exact::{FieldElement, NumberField, RationalInterval};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `ψ`, the real root of `x³ - x² - 1`.
pub fn psi() -> FieldElement {
    NumberField::new(
        vec![(-1).into(), 0.into(), (-1).into(), 1.into()],
        RationalInterval::new(q(146, 100), q(147, 100)).unwrap(),
    )
    .expect("valid field")
    .theta()
}

/// `η(M)`, the positive root of `x³ - M x² - M x - 1`; it lies in `(M, M + 1)`.
pub fn eta(m_bound: &BigInt) -> Result<FieldElement> {
    if m_bound < &BigInt::one() {
        return Err(McfError::input("the quotient bound M must be at least 1"));
    }
    let mq = BigRational::from_integer(m_bound.clone());
    let field = NumberField::new(
        vec![(-1).into(), -m_bound, -m_bound, 1.into()],
        RationalInterval::new(mq.clone(), mq + BigRational::one())?,
    )?;
    Ok(field.theta())
}

/// `K(d, m) = ln(d + 1) + ln(1 + 1/d) + ln ln(m + 1)`, enclosed to width
/// below `2^-bits`.
pub fn k_constant(d: u32, m: usize, bits: u32) -> Result<RationalInterval> {
    if d == 0 || m == 0 {
        return Err(McfError::input("K(d, m) needs d >= 1 and m >= 1"));
    }
    let mut prec = bits + 4;
    loop {
        let a = ln_q(&BigRational::from_integer(BigInt::from(d + 1)), prec)?;
        let b = ln_q(&q(d as i64 + 1, d as i64), prec)?;
        let l = ln_q(&BigRational::from_integer(BigInt::from(m + 1)), prec)?;
        let c = ln_interval(&l, prec)?;
        let k = a.add(&b).add(&c);
        if k.width() < dyadic_width(bits) {
            return Ok(k);
        }
        prec += 8;
    }
}

/// The constants used by [`growth_check`].
#[derive(Clone, Debug)]
pub struct GrowthBounds {
    pub psi: FieldElement,
    pub eta: Option<FieldElement>,
    pub k: Option<RationalInterval>,
}

#[derive(Clone, Debug, Default)]
pub struct GrowthOptions {
    /// Bound `M` on the quotients, enabling `C_n <= η(M)^n`.
    pub eta_bound: Option<BigInt>,
    /// Exponent `d`, enabling `ln ln C_{n+1} < K(d, m)·n`.
    pub d: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthViolation {
    pub bound: String,
    pub index: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub checked_through: usize,
    pub psi_checked: bool,
    pub eta_checked: bool,
    pub k_checked: bool,
    /// Enclosure of `K(d, m)` when checked, as `[lo, hi]`.
    pub k_interval: Option<String>,
    pub violations: Vec<GrowthViolation>,
}

impl GrowthReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Sign of `c - e` for an integer `c` and field element `e`, exactly.
fn cmp_int_elem(c: &BigInt, e: &FieldElement) -> i8 {
    e.neg().add_rational(&BigRational::from_integer(c.clone())).sign()
}

/// `ln ln c < bound` with `bound` an interval, certified. `c <= 1` holds
/// trivially (the left side is `-∞` or undefined-small).
fn loglog_below(c: &BigInt, bound: &RationalInterval) -> Result<bool> {
    if c <= &BigInt::one() {
        return Ok(true);
    }
    let mut bits = 32;
    loop {
        let l = ln_int(c, bits)?;
        let ll = ln_interval(&l, bits)?;
        if ll.hi() < bound.lo() {
            return Ok(true);
        }
        if ll.lo() >= bound.hi() {
            return Ok(false);
        }
        if bits > 1 << 14 {
            return Err(McfError::NonTerminating { rounds: 10 });
        }
        bits *= 2;
    }
}

/// Checks, for `0 <= n <= n_max`: `C_n > ψ^{n-2}` (`m = 2`); with a quotient
/// bound `M`, `C_n <= η(M)^n`; with an exponent `d`, `ln ln C_{n+1} < K·n`
/// for `1 <= n <= n_max`.
///
/// The `d`-hypothesis `a^{(1)}_{n+1} < C_n^d` is required for `n >= 1`,
/// together with `C_1 <= m + 1` (the base the estimate rests on; the `n = 0`
/// instance `a_1 < C_0^d = 1` cannot hold for an admissible sequence).
pub fn growth_check(pq: &PartialQuotients, n_max: usize, opts: &GrowthOptions) -> Result<GrowthReport> {
    let m = pq.m();
    let need = if opts.d.is_some() { n_max + 2 } else { n_max + 1 };
    if pq.depth() < need {
        return Err(McfError::input(format!("need {need} columns, have {}", pq.depth())));
    }
    let mut rep = GrowthReport { checked_through: n_max, ..Default::default() };

    if let Some(mb) = &opts.eta_bound {
        if m != 2 {
            return Err(McfError::input("the η bound is stated for m = 2"));
        }
        for n in 1..=n_max {
            for j in 0..2 {
                if &pq.seq(j)[n] > mb {
                    return Err(McfError::HypothesisViolated { hypothesis: format!("a_n <= {mb}"), index: n });
                }
            }
        }
    }
    let k = match opts.d {
        None => None,
        Some(d) => {
            let c1 = &pq.seq(0)[1];
            if c1 > &BigInt::from(m + 1) {
                return Err(McfError::HypothesisViolated { hypothesis: format!("C_1 <= {}", m + 1), index: 1 });
            }
            let k = k_constant(d, m, 24)?;
            rep.k_interval = Some(k.to_string());
            Some((d, k))
        }
    };

    let psi_e = (m == 2).then(psi);
    let eta_e = match &opts.eta_bound {
        Some(mb) => Some(eta(mb)?),
        None => None,
    };
    rep.psi_checked = psi_e.is_some();
    rep.eta_checked = eta_e.is_some();
    rep.k_checked = k.is_some();

    // ψ^{n-2}, starting from ψ^{-2}
    let mut psi_pow = psi_e.as_ref().map(|p| p.inv().expect("unit").pow(2));
    let mut eta_pow = eta_e.as_ref().map(|e| e.field().constant(BigRational::one()));
    let mut st = ConvergentState::new(m);
    let mut c_prev = BigInt::zero();
    for n in 0..=n_max + usize::from(k.is_some()) {
        let c = st.push(&pq.column(n).unwrap())[m].clone();
        if n <= n_max {
            if let (Some(pp), Some(p)) = (psi_pow.as_mut(), psi_e.as_ref()) {
                if cmp_int_elem(&c, pp) <= 0 {
                    rep.violations.push(GrowthViolation { bound: "C_n > psi^(n-2)".into(), index: n });
                }
                *pp = pp.mul(p)?;
            }
            if let (Some(ep), Some(e)) = (eta_pow.as_mut(), eta_e.as_ref()) {
                if cmp_int_elem(&c, ep) > 0 {
                    rep.violations.push(GrowthViolation { bound: "C_n <= eta^n".into(), index: n });
                }
                *ep = ep.mul(e)?;
            }
        }
        if let Some((d, kk)) = &k {
            // at this point c = C_n and c_prev = C_{n-1}; check index n - 1
            if n >= 2 {
                let i = n - 1;
                let a_next = &pq.seq(0)[n];
                if a_next >= &num_traits::pow(c_prev.clone(), *d as usize) {
                    return Err(McfError::HypothesisViolated {
                        hypothesis: format!("a_(n+1) < C_n^{d}"),
                        index: i,
                    });
                }
                let bound = kk.scale(&BigRational::from_integer(BigInt::from(i)));
                if !loglog_below(&c, &bound)? {
                    rep.violations.push(GrowthViolation { bound: "ln ln C_(n+1) < K n".into(), index: i });
                }
            }
        }
        c_prev = c;
    }
    Ok(rep)
}
