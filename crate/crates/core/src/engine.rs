//! Jacobi (m = 2) and Jacobi–Perron (general m) expansion with interruption
//! handling, plus admissibility checking of integer sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{McfError, Result};
use crate::exact::real::{Oracle, PrecisionBudget, ProjectiveSource, RealValue};
use crate::exact::FieldElement;

/// `m` integer sequences `a^{(1)}, …, a^{(m)}`, indexed from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialQuotients {
    seqs: Vec<Vec<BigInt>>,
}

impl PartialQuotients {
    pub fn new(seqs: Vec<Vec<BigInt>>) -> Result<Self> {
        if seqs.is_empty() {
            return Err(McfError::input("dimension m must be at least 1"));
        }
        Ok(PartialQuotients { seqs })
    }

    pub fn from_i64(seqs: &[&[i64]]) -> Self {
        Self::new(seqs.iter().map(|s| s.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("nonempty")
    }

    pub fn m(&self) -> usize {
        self.seqs.len()
    }

    pub fn seqs(&self) -> &[Vec<BigInt>] {
        &self.seqs
    }

    pub fn seq(&self, j: usize) -> &[BigInt] {
        &self.seqs[j]
    }

    pub fn get(&self, j: usize, n: usize) -> Option<&BigInt> {
        self.seqs[j].get(n)
    }

    /// Number of indices with an entry in every sequence.
    pub fn depth(&self) -> usize {
        self.seqs.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Column `(a_n^{(1)}, …, a_n^{(m)})`, when complete.
    pub fn column(&self, n: usize) -> Option<Vec<BigInt>> {
        self.seqs.iter().map(|s| s.get(n).cloned()).collect()
    }

    pub fn push_column(&mut self, col: Vec<BigInt>) {
        assert_eq!(col.len(), self.m());
        for (s, x) in self.seqs.iter_mut().zip(col) {
            s.push(x);
        }
    }

    /// Keeps the first `n` entries of every sequence.
    pub fn truncated(&self, n: usize) -> Self {
        PartialQuotients { seqs: self.seqs.iter().map(|s| s[..n.min(s.len())].to_vec()).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.depth() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interruption {
    pub index: usize,
    pub dim_after: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExpansionEvent {
    /// Quotients emitted at index `n` by the active coordinates, and the
    /// width of the oracle enclosure that certified the floors.
    Step { n: usize, a: Vec<BigInt>, width: Option<BigRational> },
    /// The last active coordinate was the integer `value`; the expansion
    /// continues in dimension `dim_after` at the same index.
    Interruption { n: usize, value: BigInt, dim_after: usize },
}

#[derive(Clone, Debug)]
pub struct ExpansionRecord {
    pub pq: PartialQuotients,
    pub interruptions: Vec<Interruption>,
    pub events: Vec<ExpansionEvent>,
    pub trace: Option<Vec<Vec<RealValue>>>,
    pub steps_requested: usize,
    /// True when the input was exhausted (dimension dropped to 0).
    pub terminated: bool,
}

fn sub_int(x: &RealValue, k: &BigInt) -> Result<RealValue> {
    let kq = BigRational::from_integer(k.clone());
    match x {
        RealValue::Rational(q) => Ok(RealValue::Rational(q - kq)),
        RealValue::Algebraic(e) => Ok(e.add_rational(&-kq).into()),
        RealValue::Oracle(_) => Err(McfError::UndecidableForOracle),
    }
}

fn div(x: &RealValue, y: &RealValue) -> Result<RealValue> {
    match (x, y) {
        (RealValue::Rational(p), RealValue::Rational(q)) => {
            if q.is_zero() {
                Err(McfError::DivisionByZero)
            } else {
                Ok(RealValue::Rational(p / q))
            }
        }
        (RealValue::Algebraic(e), RealValue::Rational(q)) => {
            if q.is_zero() {
                Err(McfError::DivisionByZero)
            } else {
                Ok(e.scale(&q.recip()).into())
            }
        }
        (RealValue::Rational(p), RealValue::Algebraic(f)) => Ok(f.inv()?.scale(p).into()),
        (RealValue::Algebraic(e), RealValue::Algebraic(f)) => Ok(e.div(f)?.into()),
        _ => Err(McfError::UndecidableForOracle),
    }
}

fn is_integral(x: &RealValue) -> bool {
    match x {
        RealValue::Rational(q) => q.is_integer(),
        RealValue::Algebraic(e) => e.is_integer(),
        RealValue::Oracle(_) => false,
    }
}

/// One step of Jacobi's algorithm on exact `(α_n, β_n)`:
/// `(a_n, b_n, α_{n+1}, β_{n+1})`.
pub fn jacobi_step(alpha: &RealValue, beta: &RealValue) -> Result<(BigInt, BigInt, RealValue, RealValue)> {
    let (cols, next) = perron_step(&[alpha.clone(), beta.clone()])?;
    let mut it = next.into_iter();
    let (a1, a2) = (it.next().unwrap(), it.next().unwrap());
    let mut c = cols.into_iter();
    Ok((c.next().unwrap(), c.next().unwrap(), a1, a2))
}

/// One Jacobi–Perron step on exact complete quotients. Fails with
/// `Interruption` when the last coordinate is an integer.
pub fn perron_step(state: &[RealValue]) -> Result<(Vec<BigInt>, Vec<RealValue>)> {
    let d = state.len();
    let last = &state[d - 1];
    if last.is_oracle() {
        return Err(McfError::UndecidableForOracle);
    }
    if is_integral(last) {
        return Err(McfError::Interruption { index: 0 });
    }
    let budget = PrecisionBudget::default();
    let floors: Vec<BigInt> = state.iter().map(|x| x.floor_certified(budget).map(|(f, _)| f)).collect::<Result<_>>()?;
    let den = sub_int(last, &floors[d - 1])?;
    let mut next = Vec::with_capacity(d);
    next.push(div(&RealValue::Rational(BigRational::one()), &den)?);
    for i in 1..d {
        next.push(div(&sub_int(&state[i - 1], &floors[i - 1])?, &den)?);
    }
    Ok((floors, next))
}

enum State {
    Exact(Vec<RealValue>),
    /// Row `i` holds the integer linear form (coefficients of the inputs,
    /// then the constant) whose ratio to the last row is `α^{(i+1)}_n`.
    Projective { inputs: Vec<Oracle>, rows: Vec<Vec<BigInt>> },
}

/// Incremental expansion; each call to [`Expander::advance`] processes one index.
pub struct Expander {
    state: State,
    dim: usize,
    n: usize,
    budget: PrecisionBudget,
    pq: PartialQuotients,
    interruptions: Vec<Interruption>,
}

impl Expander {
    pub fn new(inputs: &[RealValue], budget: PrecisionBudget) -> Result<Self> {
        let m = inputs.len();
        if m == 0 {
            return Err(McfError::input("dimension m must be at least 1"));
        }
        let state = if inputs.iter().any(RealValue::is_oracle) {
            let oracles = inputs.iter().map(RealValue::to_oracle).collect::<Result<Vec<_>>>()?;
            let rows = (0..=m)
                .map(|i| (0..=m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
                .collect();
            State::Projective { inputs: oracles, rows }
        } else {
            let mut field: Option<&FieldElement> = None;
            for x in inputs {
                if let RealValue::Algebraic(e) = x {
                    match field {
                        Some(f) if !f.field().same_as(e.field()) => return Err(McfError::FieldMismatch),
                        _ => field = Some(e),
                    }
                }
            }
            State::Exact(inputs.to_vec())
        };
        Ok(Expander {
            state,
            dim: m,
            n: 0,
            budget,
            pq: PartialQuotients { seqs: vec![Vec::new(); m] },
            interruptions: Vec::new(),
        })
    }

    pub fn index(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pq(&self) -> &PartialQuotients {
        &self.pq
    }

    /// Current complete quotients `(α_n^{(1)}, …, α_n^{(d)})`.
    pub fn complete_quotients(&self) -> Result<Vec<RealValue>> {
        match &self.state {
            State::Exact(v) => Ok(v.clone()),
            State::Projective { inputs, rows } => {
                let d = rows.len() - 1;
                (0..d)
                    .map(|i| {
                        let src = ProjectiveSource::new(inputs.clone(), rows[i].clone(), rows[d].clone());
                        Ok(RealValue::Oracle(Oracle::new(Box::new(src))?))
                    })
                    .collect()
            }
        }
    }

    /// Processes index `n`; returns the events, or `None` once terminated.
    pub fn advance(&mut self) -> Result<Option<Vec<ExpansionEvent>>> {
        let mut events = Vec::new();
        loop {
            if self.dim == 0 {
                return Ok(if events.is_empty() { None } else { Some(events) });
            }
            let interrupted = match &self.state {
                State::Exact(v) => is_integral(&v[self.dim - 1]),
                State::Projective { .. } => false,
            };
            if !interrupted {
                break;
            }
            let State::Exact(v) = &mut self.state else { unreachable!() };
            let value = v.pop().unwrap().floor_certified(self.budget)?.0;
            self.pq.seqs[self.dim - 1].push(value.clone());
            self.dim -= 1;
            if self.dim == 0 {
                events.push(ExpansionEvent::Step { n: self.n, a: vec![value], width: None });
                self.n += 1;
                return Ok(Some(events));
            }
            self.interruptions.push(Interruption { index: self.n, dim_after: self.dim });
            events.push(ExpansionEvent::Interruption { n: self.n, value, dim_after: self.dim });
        }
        let (floors, width) = match &mut self.state {
            State::Exact(v) => {
                let (floors, next) = perron_step(v)?;
                *v = next;
                (floors, None)
            }
            State::Projective { inputs, rows } => {
                let d = rows.len() - 1;
                let mut floors = Vec::with_capacity(d);
                let mut width: Option<BigRational> = None;
                for i in 0..d {
                    let src = ProjectiveSource::new(inputs.clone(), rows[i].clone(), rows[d].clone());
                    let o = Oracle::new(Box::new(src))?;
                    let (f, w) = o.floor(self.budget)?;
                    width = Some(width.map_or(w.clone(), |x| x.max(w)));
                    floors.push(f);
                }
                // x_1 = y_{d+1}; x_i = y_{i-1} - a^{(i-1)} y_{d+1}
                let mut new_rows = Vec::with_capacity(d + 1);
                new_rows.push(rows[d].clone());
                for i in 1..=d {
                    let r: Vec<BigInt> =
                        rows[i - 1].iter().zip(&rows[d]).map(|(y, z)| y - &floors[i - 1] * z).collect();
                    new_rows.push(r);
                }
                *rows = new_rows;
                (floors, width)
            }
        };
        for (j, f) in floors.iter().enumerate() {
            self.pq.seqs[j].push(f.clone());
        }
        events.push(ExpansionEvent::Step { n: self.n, a: floors, width });
        self.n += 1;
        Ok(Some(events))
    }

    pub fn into_record(self, events: Vec<ExpansionEvent>, trace: Option<Vec<Vec<RealValue>>>, steps: usize) -> ExpansionRecord {
        ExpansionRecord {
            pq: self.pq,
            interruptions: self.interruptions,
            events,
            trace,
            steps_requested: steps,
            terminated: self.dim == 0,
        }
    }
}

/// Expands `inputs` for up to `steps` indices.
pub fn expand(inputs: &[RealValue], steps: usize, keep_trace: bool) -> Result<ExpansionRecord> {
    expand_with_budget(inputs, steps, keep_trace, PrecisionBudget::from_env()?)
}

pub fn expand_with_budget(
    inputs: &[RealValue],
    steps: usize,
    keep_trace: bool,
    budget: PrecisionBudget,
) -> Result<ExpansionRecord> {
    let mut ex = Expander::new(inputs, budget)?;
    let mut events = Vec::new();
    let mut trace = keep_trace.then(Vec::new);
    while ex.index() < steps {
        if let Some(t) = trace.as_mut() {
            if ex.dim() > 0 {
                t.push(ex.complete_quotients()?);
            }
        }
        match ex.advance()? {
            Some(ev) => events.extend(ev),
            None => break,
        }
    }
    Ok(ex.into_record(events, trace, steps))
}

/// One violated admissibility condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub condition: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub violations: Vec<Violation>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.iter().min_by_key(|v| v.index)
    }
}

fn describe(m: usize, i: usize) -> String {
    match (m, i) {
        (_, 0) => "a_n >= 1".to_string(),
        (2, 1) => "a_n >= b_n, and b_{n+1} >= 1 when a_n = b_n".to_string(),
        _ => {
            let left: Vec<String> = (0..=i).map(|t| format!("a_{{n+{t}}}^({})", t + 1)).collect();
            let mut right: Vec<String> = (0..i).map(|t| format!("a_{{n+{t}}}^({})", m - i + 1 + t)).collect();
            right.push("1".into());
            format!("({}) >=lex ({})", left.join(", "), right.join(", "))
        }
    }
}

/// Checks the admissibility conditions for `n >= 1`. A lexicographic
/// comparison that would need an entry beyond the available prefix is skipped;
/// violations are reported at the index where the comparison is decided.
pub fn check_admissible(pq: &PartialQuotients) -> AdmissibilityReport {
    let m = pq.m();
    let mut violations = Vec::new();
    let max_len = pq.seqs.iter().map(Vec::len).max().unwrap_or(0);
    for n in 1..max_len {
        for j in 0..m {
            if pq.get(j, n).is_some_and(Signed::is_negative) {
                violations.push(Violation { index: n, condition: format!("a_n^({}) >= 0", j + 1) });
            }
        }
        for i in 0..m {
            // left_t = a_{n+t}^{(t+1)}; right_t = a_{n+t}^{(m-i+1+t)}, right_i = 1
            let one = BigInt::one();
            for t in 0..=i {
                let Some(l) = pq.get(t, n + t) else { break };
                let r = if t == i {
                    &one
                } else {
                    match pq.get(m - i + t, n + t) {
                        Some(r) => r,
                        None => break,
                    }
                };
                if l > r {
                    break;
                }
                if l < r {
                    violations.push(Violation { index: n + t, condition: describe(m, i) });
                    break;
                }
            }
        }
    }
    violations.sort_by_key(|v| v.index);
    violations.dedup();
    AdmissibilityReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{NumberField, RationalInterval};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn jacobi_step_rational() {
        let (a, b, al, be) = jacobi_step(&RealValue::rational(7, 5), &RealValue::rational(3, 5)).unwrap();
        assert_eq!((a, b), (BigInt::from(1), BigInt::from(0)));
        assert!(matches!(al, RealValue::Rational(ref x) if *x == q(5, 3)));
        assert!(matches!(be, RealValue::Rational(ref x) if *x == q(2, 3)));
        let (a, b, al, be) = jacobi_step(&al, &be).unwrap();
        assert_eq!((a, b), (BigInt::from(1), BigInt::from(0)));
        assert!(matches!(al, RealValue::Rational(ref x) if *x == q(3, 2)));
        assert!(matches!(be, RealValue::Rational(ref x) if *x == q(1, 1)));
        assert!(matches!(jacobi_step(&al, &be), Err(McfError::Interruption { .. })));
    }

    #[test]
    fn jacobi_step_cube_root() {
        let k = NumberField::new(ints(&[-2, 0, 0, 1]), RationalInterval::new(q(1, 1), q(2, 1)).unwrap()).unwrap();
        let t = k.theta();
        let t2 = t.mul(&t).unwrap();
        let (a, b, al, be) = jacobi_step(&RealValue::Algebraic(t.clone()), &RealValue::Algebraic(t2.clone())).unwrap();
        assert_eq!((a, b), (BigInt::from(1), BigInt::from(1)));
        // α₁ = 1/(θ² - 1), β₁ = (θ - 1)/(θ² - 1)
        let RealValue::Algebraic(al) = al else { panic!() };
        let RealValue::Algebraic(be) = be else { panic!() };
        let den = t2.add_rational(&q(-1, 1));
        assert!(al.mul(&den).unwrap().add_rational(&q(-1, 1)).is_zero());
        assert!(be.mul(&den).unwrap().sub(&t.add_rational(&q(-1, 1))).unwrap().is_zero());
    }

    #[test]
    fn interruption_trace() {
        let rec = expand(&[RealValue::rational(7, 5), RealValue::rational(3, 5)], 4, true).unwrap();
        assert_eq!(rec.pq.seq(0), ints(&[1, 1, 1, 2]).as_slice());
        assert_eq!(rec.pq.seq(1), ints(&[0, 0, 1]).as_slice());
        assert_eq!(rec.interruptions, vec![Interruption { index: 2, dim_after: 1 }]);
        assert!(rec.terminated);
    }

    #[test]
    fn classical_m1() {
        let rec = expand(&[RealValue::rational(10, 7)], 4, false).unwrap();
        assert_eq!(rec.pq.seq(0), ints(&[1, 2, 3]).as_slice());
        assert!(rec.interruptions.is_empty());
    }

    #[test]
    fn admissibility_examples() {
        let pq = PartialQuotients::from_i64(&[&[3, 2, 2, 2, 2, 2, 2], &[1, 1, 1, 1, 1, 1, 1]]);
        assert!(check_admissible(&pq).is_admissible());

        let pq = PartialQuotients::from_i64(&[&[0, 3, 3, 3, 3, 2, 3, 3], &[0, 1, 1, 1, 1, 2, 0, 1]]);
        let r = check_admissible(&pq);
        assert_eq!(r.first().unwrap().index, 6);
        assert_eq!(r.violations.len(), 1);

        let pq = PartialQuotients::from_i64(&[&[0, 3, 3, 1, 3], &[0, 1, 1, 2, 1]]);
        let r = check_admissible(&pq);
        assert_eq!(r.first().unwrap().index, 3);
    }

    #[test]
    fn boundary_comparison_is_lazy() {
        // a_n = b_n at the last index: the follow-up entry is missing, no report
        let pq = PartialQuotients::from_i64(&[&[0, 2, 2], &[0, 1, 2]]);
        assert!(check_admissible(&pq).is_admissible());
        // b_n > a_n at the last index is decided without the missing entry
        let pq = PartialQuotients::from_i64(&[&[0, 2, 1], &[0, 1, 2]]);
        assert_eq!(check_admissible(&pq).first().unwrap().index, 2);
    }
}
