use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::ConvergentTable;
use crate::engine::PartialQuotients;
use crate::error::{McfError, Result};
use crate::exact::real::{ListSource, Oracle, PrecisionBudget, RealValue};
use crate::exact::RationalInterval;

/// Hull of `A^{(i)}_k / C_k` for `k = n - m, …, n`. For an admissible
/// sequence it contains coordinate `i` of the limit of every admissible
/// extension of the prefix (positive mediant of the last `m + 1` columns).
pub fn window(t: &ConvergentTable, i: usize, n: usize) -> RationalInterval {
    let m = t.m();
    assert!(n >= m, "window needs m + 1 columns of non-negative index");
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for k in n - m..=n {
        let r = BigRational::new(t.a(i, k as i64).clone(), t.c(k as i64).clone());
        if lo.as_ref().is_none_or(|l| &r < l) {
            lo = Some(r.clone());
        }
        if hi.as_ref().is_none_or(|h| &r > h) {
            hi = Some(r);
        }
    }
    RationalInterval::new(lo.unwrap(), hi.unwrap()).expect("ordered")
}

/// One oracle per coordinate enclosing the limit of the admissible prefix
/// `pq` by its nested convergent windows. Exhausted after the prefix.
pub fn limit_oracles(pq: &PartialQuotients) -> Result<Vec<Oracle>> {
    let m = pq.m();
    let depth = pq.depth();
    if depth <= m {
        return Err(McfError::input(format!("need more than {m} columns to enclose the limit")));
    }
    let t = ConvergentTable::new(pq, depth);
    (0..m)
        .map(|i| {
            let mut items: Vec<RationalInterval> = Vec::new();
            for n in m..depth {
                let w = window(&t, i, n);
                let w = match items.last() {
                    Some(prev) => match prev.intersect(&w) {
                        Some(x) => x,
                        None => {
                            return Err(McfError::Admissibility {
                                index: n,
                                condition: "convergent windows are not nested".into(),
                            })
                        }
                    },
                    None => w,
                };
                if items.last().is_none_or(|prev| w.width() < prev.width()) {
                    items.push(w);
                }
            }
            Oracle::new(Box::new(ListSource::new(items)))
        })
        .collect()
}

pub fn limit_values(pq: &PartialQuotients) -> Result<Vec<RealValue>> {
    Ok(limit_oracles(pq)?.into_iter().map(RealValue::Oracle).collect())
}

/// Certified comparison of `|x·c - a|^q · k` against `t` (with `k, t >= 0`).
/// Exact for rational and algebraic `x`; oracles are refined until the
/// comparison is decided. `Ok(None)` means the oracle ran out of precision.
pub fn cmp_scaled_gap(
    x: &RealValue,
    c: &BigInt,
    a: &BigInt,
    q: u32,
    k: &BigInt,
    t: &BigInt,
    budget: PrecisionBudget,
) -> Result<Option<Ordering>> {
    let cq = BigRational::from_integer(c.clone());
    let aq = BigRational::from_integer(a.clone());
    let kq = BigRational::from_integer(k.clone());
    let tq = BigRational::from_integer(t.clone());
    match x {
        RealValue::Rational(v) => {
            let g = num_traits::pow(num_traits::Signed::abs(&(v * &cq - &aq)), q as usize) * &kq;
            Ok(Some(g.cmp(&tq)))
        }
        RealValue::Algebraic(e) => {
            let g = e.scale(&cq).add_rational(&-aq);
            let g = if g.sign() < 0 { g.neg() } else { g };
            let lhs = g.pow(q as u64).scale(&kq);
            Ok(Some(lhs.add_rational(&-tq).sign().cmp(&0)))
        }
        RealValue::Oracle(o) => {
            let mut iv = o.current();
            let mut rounds = 0;
            loop {
                let g = iv.scale(&cq).add_scalar(&-&aq).abs().pow(q).scale(&kq);
                if g.lt(&tq) {
                    return Ok(Some(Ordering::Less));
                }
                if g.gt(&tq) {
                    return Ok(Some(Ordering::Greater));
                }
                if g.is_point() {
                    return Ok(Some(Ordering::Equal));
                }
                if rounds == budget.rounds {
                    return Err(McfError::NonTerminating { rounds });
                }
                iv = match o.refine() {
                    Ok(iv) => iv,
                    Err(McfError::OracleExhausted) => return Ok(None),
                    Err(e) => return Err(e),
                };
                rounds += 1;
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    /// Witness indices for each coordinate.
    pub per_coordinate: Vec<Vec<usize>>,
    /// Indices that are witnesses for every coordinate at once.
    pub simultaneous: Vec<usize>,
    /// `(coordinate, index)` pairs the available precision could not decide.
    pub undecided: Vec<(usize, usize)>,
    pub depth: usize,
}

impl WitnessReport {
    pub fn count(&self, i: usize) -> usize {
        self.per_coordinate[i].len()
    }
}

/// Indices `n <= n_max` with `|x_i - A^{(i)}_n / C_n| < |Ã^{(i)}_{n+1}| / (C_{n+1} C_n)`,
/// certified per coordinate.
pub fn approx_witnesses(
    x: &[RealValue],
    pq: &PartialQuotients,
    n_max: usize,
    budget: PrecisionBudget,
) -> Result<WitnessReport> {
    let m = pq.m();
    if x.len() != m {
        return Err(McfError::input(format!("{} inputs for an m = {m} expansion", x.len())));
    }
    if pq.depth() < n_max + 2 {
        return Err(McfError::input(format!(
            "witnesses up to index {n_max} need {} columns, have {}",
            n_max + 2,
            pq.depth()
        )));
    }
    let t = ConvergentTable::new(pq, n_max + 2);
    let mut report = WitnessReport { per_coordinate: vec![Vec::new(); m], depth: n_max, ..Default::default() };
    for n in 0..=n_max {
        let mut all = true;
        for (i, xi) in x.iter().enumerate() {
            let n1 = n as i64 + 1;
            let tilde = t.tilde(i, n1);
            let is_witness = if tilde.is_zero() {
                Some(false)
            } else {
                // |x C_n - A_n| · C_{n+1} < |Ã_{n+1}|
                cmp_scaled_gap(xi, t.c(n as i64), t.a(i, n as i64), 1, t.c(n1), &num_traits::Signed::abs(&tilde), budget)?
                    .map(|o| o == Ordering::Less)
            };
            match is_witness {
                Some(true) => report.per_coordinate[i].push(n),
                Some(false) => all = false,
                None => {
                    all = false;
                    report.undecided.push((i, n));
                }
            }
        }
        if all {
            report.simultaneous.push(n);
        }
    }
    Ok(report)
}
