use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::ConvergentTable;
use crate::engine::PartialQuotients;
use crate::error::{McfError, Result};
use crate::exact::interval::dyadic_width;
use crate::exact::real::{PrecisionBudget, RealValue};
use crate::exact::RationalInterval;

#[derive(Clone, Debug, Default)]
pub struct BoundOptions {
    /// Integer box `(N, M)` with `N < α₀ < N + 1`, `M < β₀ < M + 1`.
    pub box_nm: Option<(BigInt, BigInt)>,
    /// The inputs themselves, when known, to verify the box exactly.
    pub inputs: Option<Vec<RealValue>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub bound: String,
    pub index: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub checked_through: usize,
    /// Numerators against the denominator, applied when `a₀ = b₀ = 0`.
    pub unit_box_applied: bool,
    pub box_applied: bool,
    /// Indices where a box upper bound is attained with equality.
    pub box_upper_ties: Vec<usize>,
    /// Indices `n` with `a_{n+1} < C_n` at which the tilde bound was checked.
    pub tilde_bound_indices: usize,
    /// Largest `A^{(i)}_n / C_n` seen, as `num/den`.
    pub empirical_k: String,
    pub violations: Vec<BoundViolation>,
}

impl BoundReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for every `n <= n_max`, the numerator bounds `A^{(i)}_n <= C_n`
/// (when `a₀ = b₀ = 0`, `m = 2`), the box bounds `N C_n <= A_n <= (N+1) C_n`
/// when a box is supplied, and `|Ã_{n+1}|, |B̃_{n+1}| < 3 C_n²` wherever
/// `a_{n+1} < C_n`.
pub fn bound_checks(pq: &PartialQuotients, n_max: usize, opts: &BoundOptions) -> Result<BoundReport> {
    let m = pq.m();
    if pq.depth() < n_max + 1 {
        return Err(McfError::input(format!("need {} columns, have {}", n_max + 1, pq.depth())));
    }
    let depth = (n_max + 2).min(pq.depth());
    let t = ConvergentTable::new(pq, depth);
    let mut rep = BoundReport { checked_through: n_max, ..Default::default() };

    let zero_start = (0..m).all(|j| pq.get(j, 0).is_some_and(Zero::is_zero));
    rep.unit_box_applied = m == 2 && zero_start;

    let boxes: Option<Vec<BigInt>> = match &opts.box_nm {
        None => None,
        Some((nb, mb)) => {
            if m != 2 {
                return Err(McfError::PreconditionViolated("the box bounds are stated for m = 2".into()));
            }
            let b = vec![nb.clone(), mb.clone()];
            for (j, bj) in b.iter().enumerate() {
                if bj.is_negative() || pq.get(j, 0) != Some(bj) {
                    return Err(McfError::PreconditionViolated(format!(
                        "box value {bj} does not match the integer part of coordinate {}",
                        j + 1
                    )));
                }
            }
            if let Some(x) = &opts.inputs {
                let budget = PrecisionBudget::from_env()?;
                for (xj, bj) in x.iter().zip(&b) {
                    let lo = BigRational::from_integer(bj.clone());
                    let hi = BigRational::from_integer(bj + 1);
                    if xj.cmp_rational(&lo, budget)? != Ordering::Greater || xj.cmp_rational(&hi, budget)? != Ordering::Less {
                        return Err(McfError::PreconditionViolated(format!("input outside the open box ({lo}, {hi})")));
                    }
                }
            }
            rep.box_applied = true;
            Some(b)
        }
    };

    let mut kmax = BigRational::zero();
    for n in 0..=n_max {
        let ni = n as i64;
        let c = t.c(ni);
        for i in 0..m {
            let a = t.a(i, ni);
            let r = BigRational::new(a.clone(), c.clone());
            if r > kmax {
                kmax = r;
            }
            if rep.unit_box_applied && a > c {
                rep.violations.push(BoundViolation { bound: format!("A^({})_n <= C_n", i + 1), index: n });
            }
            if let Some(b) = &boxes {
                let low = &b[i] * c;
                let high = (&b[i] + 1) * c;
                if a < &low || a > &high {
                    rep.violations.push(BoundViolation { bound: format!("box bound on A^({})_n", i + 1), index: n });
                } else if a == &high && !rep.box_upper_ties.contains(&n) {
                    rep.box_upper_ties.push(n);
                }
            }
        }
        if m == 2 && n + 1 < depth {
            let a_next = &pq.seq(0)[n + 1];
            if a_next < c {
                rep.tilde_bound_indices += 1;
                let cap = c * c * 3;
                for i in 0..2 {
                    if t.tilde(i, ni + 1).abs() >= cap {
                        rep.violations.push(BoundViolation { bound: format!("tilde {} < 3 C_n^2", i + 1), index: n });
                    }
                }
            }
        }
    }
    rep.empirical_k = kmax.to_string();
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProximityReport {
    pub n: usize,
    /// Upper enclosure of `|x_i - x'_i|` per coordinate, as `num/den`.
    pub gap_upper: Vec<String>,
    /// `1/C_{n-2}`.
    pub bound_far: String,
    /// `2/C_n`.
    pub bound_near: String,
    pub far_holds: bool,
    pub near_holds: bool,
    /// Which of the two bounds is smaller.
    pub tighter: String,
}

fn gap_enclosure(x: &RealValue, y: &RealValue, width: &BigRational, budget: PrecisionBudget) -> Result<RationalInterval> {
    if let (RealValue::Algebraic(a), RealValue::Algebraic(b)) = (x, y) {
        if a.field().same_as(b.field()) {
            return Ok(a.sub(b)?.interval(width).abs());
        }
    }
    if let (RealValue::Rational(a), RealValue::Rational(b)) = (x, y) {
        return Ok(RationalInterval::point((a - b).abs()));
    }
    let half = width / BigRational::from_integer(BigInt::from(2));
    let ex = x.enclosure(&half, budget)?;
    let ey = y.enclosure(&half, budget)?;
    Ok(ex.sub(&ey).abs())
}

/// For two `m = 2` inputs whose expansions agree through index `n`,
/// certifies `|x - x'| < 1/C_{n-2}` and `|x - x'| < 2/C_n` coordinatewise.
pub fn proximity_check(
    x: &[RealValue],
    pq: &PartialQuotients,
    y: &[RealValue],
    pq2: &PartialQuotients,
    n: usize,
) -> Result<ProximityReport> {
    if pq.m() != 2 || pq2.m() != 2 || x.len() != 2 || y.len() != 2 {
        return Err(McfError::input("proximity bounds are stated for m = 2"));
    }
    if n < 2 {
        return Err(McfError::input("the proximity bounds need n >= 2"));
    }
    for k in 0..=n {
        if pq.column(k).is_none() || pq.column(k) != pq2.column(k) {
            return Err(McfError::PrefixMismatch(k));
        }
    }
    let t = ConvergentTable::new(pq, n + 1);
    let far = BigRational::new(BigInt::one(), t.c(n as i64 - 2).clone());
    let near = BigRational::new(BigInt::from(2), t.c(n as i64).clone());
    let budget = PrecisionBudget::from_env()?;
    let target = (&far).min(&near).clone();

    let mut far_holds = true;
    let mut near_holds = true;
    let mut gap_upper = Vec::new();
    for (xi, yi) in x.iter().zip(y) {
        let mut bits = 16;
        loop {
            let w = &target * dyadic_width(bits);
            let g = gap_enclosure(xi, yi, &w, budget)?;
            let f = if g.lt(&far) { Some(true) } else if !g.lo().lt(&far) { Some(false) } else { None };
            let nr = if g.lt(&near) { Some(true) } else if !g.lo().lt(&near) { Some(false) } else { None };
            if let (Some(f), Some(nr)) = (f, nr) {
                far_holds &= f;
                near_holds &= nr;
                gap_upper.push(g.hi().to_string());
                break;
            }
            if bits > 4096 {
                return Err(McfError::NonTerminating { rounds: 9 });
            }
            bits *= 2;
        }
    }
    Ok(ProximityReport {
        n,
        gap_upper,
        tighter: if near < far { "2/C_n".into() } else { "1/C_{n-2}".into() },
        bound_far: far.to_string(),
        bound_near: near.to_string(),
        far_holds,
        near_holds,
    })
}
