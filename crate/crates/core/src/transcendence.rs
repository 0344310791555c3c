//! Constructions meeting the Liouville-type and quasi-periodic transcendence
//! criteria, and finite-depth checkers for their hypotheses.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::convergents::{cmp_scaled_gap, eta, psi, ConvergentState, ConvergentTable};
use crate::engine::{check_admissible, PartialQuotients};
use crate::error::{McfError, Result};
use crate::exact::analytic::{ln_int, ln_interval};
use crate::exact::interval::dyadic_width;
use crate::exact::real::{PrecisionBudget, RealValue};
use crate::exact::{FieldElement, RationalInterval};

/// Rule producing one integer sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryRule {
    Const(BigInt),
    Cycle(Vec<BigInt>),
    /// Finite list; asking past its end is an error.
    Explicit(Vec<BigInt>),
    /// Uniform in `lo..=hi` from a ChaCha8 stream.
    Random { seed: u64, lo: i64, hi: i64 },
}

impl EntryRule {
    /// The first `len` values.
    pub fn take(&self, len: usize) -> Result<Vec<BigInt>> {
        match self {
            EntryRule::Const(v) => Ok(vec![v.clone(); len]),
            EntryRule::Cycle(c) => Ok((0..len).map(|n| c[n % c.len()].clone()).collect()),
            EntryRule::Explicit(v) => {
                if v.len() < len {
                    return Err(McfError::input(format!("explicit rule has {} entries, {len} needed", v.len())));
                }
                Ok(v[..len].to_vec())
            }
            EntryRule::Random { seed, lo, hi } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..len).map(|_| BigInt::from(rng.gen_range(*lo..=*hi))).collect())
            }
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<BigInt>> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| McfError::input(format!("bad integer `{t}`"))))
        .collect()
}

impl FromStr for EntryRule {
    type Err = McfError;

    /// `const:V`, `cycle:V,V,…`, `explicit:V,V,…`, `random:SEED:LO:HI`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| McfError::input(format!("bad rule `{s}`")))?;
        match kind {
            "const" => Ok(EntryRule::Const(
                rest.trim().parse().map_err(|_| McfError::input(format!("bad integer `{rest}`")))?,
            )),
            "cycle" | "explicit" => {
                let v = parse_list(rest)?;
                if v.is_empty() {
                    return Err(McfError::input("empty rule list"));
                }
                Ok(if kind == "cycle" { EntryRule::Cycle(v) } else { EntryRule::Explicit(v) })
            }
            "random" => {
                let p: Vec<&str> = rest.split(':').collect();
                let bad = || McfError::input(format!("bad random rule `{s}`, expected random:SEED:LO:HI"));
                if p.len() != 3 {
                    return Err(bad());
                }
                let seed = p[0].parse().map_err(|_| bad())?;
                let lo: i64 = p[1].parse().map_err(|_| bad())?;
                let hi: i64 = p[2].parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                Ok(EntryRule::Random { seed, lo, hi })
            }
            _ => Err(McfError::input(format!("unknown rule kind `{kind}`"))),
        }
    }
}

impl fmt::Display for EntryRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            EntryRule::Const(v) => write!(f, "const:{v}"),
            EntryRule::Cycle(v) => write!(f, "cycle:{}", j(v)),
            EntryRule::Explicit(v) => write!(f, "explicit:{}", j(v)),
            EntryRule::Random { seed, lo, hi } => write!(f, "random:{seed}:{lo}:{hi}"),
        }
    }
}

// ---------------------------------------------------------------------------
// reports

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    HypothesesHoldToDepth,
    ViolatedAt(usize),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::HypothesesHoldToDepth => write!(f, "hypotheses-hold-to-depth"),
            Verdict::ViolatedAt(n) => write!(f, "violated-at({n})"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    /// Number of instances checked.
    pub checked: usize,
    pub holds: bool,
    pub first_failure: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub coordinate: usize,
    pub index: usize,
    /// Certified exponent `w` in `|x - A/C| < C^-w`, as `num/den`.
    pub exponent: String,
}

/// One entry of a finite ratio sequence, enclosed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioEntry {
    pub k: usize,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub n_k: BigInt,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub lambda_k: BigInt,
    pub lo: String,
    pub hi: String,
    pub approx: f64,
    /// Certified comparison against the threshold, when there is one.
    pub exceeds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub depth: usize,
    pub hypotheses: Vec<HypothesisCheck>,
    pub witnesses: Vec<WitnessEntry>,
    pub ratios: Vec<RatioEntry>,
    /// Free-form finite-depth observations, in a fixed order.
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl CriterionReport {
    fn new(criterion: &str, depth: usize) -> Self {
        CriterionReport {
            criterion: criterion.into(),
            depth,
            hypotheses: Vec::new(),
            witnesses: Vec::new(),
            ratios: Vec::new(),
            notes: Vec::new(),
            verdict: Verdict::HypothesesHoldToDepth,
        }
    }

    fn finish(mut self) -> Self {
        self.verdict = match self.hypotheses.iter().filter_map(|h| h.first_failure).min() {
            Some(n) => Verdict::ViolatedAt(n),
            None => Verdict::HypothesesHoldToDepth,
        };
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HypothesesHoldToDepth
    }

    pub fn hypothesis(&self, name: &str) -> Option<&HypothesisCheck> {
        self.hypotheses.iter().find(|h| h.name == name)
    }
}

/// Accumulates one hypothesis over its instances.
struct Tally {
    name: String,
    checked: usize,
    first_failure: Option<usize>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally { name: name.into(), checked: 0, first_failure: None }
    }

    fn record(&mut self, index: usize, ok: bool) {
        self.checked += 1;
        if !ok && self.first_failure.is_none_or(|f| index < f) {
            self.first_failure = Some(index);
        }
    }

    fn done(self) -> HypothesisCheck {
        HypothesisCheck { name: self.name, checked: self.checked, holds: self.first_failure.is_none(), first_failure: self.first_failure }
    }
}

// ---------------------------------------------------------------------------
// Liouville-type constructions

fn positive_rational(delta: &BigRational) -> Result<(u32, u32)> {
    if !delta.is_positive() {
        return Err(McfError::input("delta must be positive"));
    }
    let p = delta.numer().to_u32().ok_or_else(|| McfError::input("delta numerator too large"))?;
    let q = delta.denom().to_u32().ok_or_else(|| McfError::input("delta denominator too large"))?;
    Ok((p, q))
}

/// `⌈c^{p/q}⌉` for `c >= 0`.
fn ceil_pow(c: &BigInt, p: u32, q: u32) -> BigInt {
    let cp = num_traits::pow(c.clone(), p as usize);
    let r = cp.nth_root(q);
    if num_traits::pow(r.clone(), q as usize) == cp {
        r
    } else {
        r + 1
    }
}

#[derive(Clone, Debug)]
pub struct LiouvilleSpec {
    pub m: usize,
    pub delta: BigRational,
    /// `a^{(1)}_0`.
    pub a0: BigInt,
    /// Rules for coordinates `2..=m`, every index including 0.
    pub rules: Vec<EntryRule>,
    /// Last index constructed.
    pub depth: usize,
}

/// Fixes `a^{(1)}_n` for `1 <= n <= depth` one step at a time as
/// `max(max_i |Ã^{(i)}_n|·⌈C_{n-1}^δ⌉, max_j a^{(j)}_n) + 1`; the tilde values
/// at `n` do not involve `a^{(1)}_n`.
pub fn construct_liouville(spec: &LiouvilleSpec) -> Result<PartialQuotients> {
    let m = spec.m;
    if m == 0 || spec.rules.len() != m - 1 {
        return Err(McfError::input(format!("m = {m} needs {} free rules", m.saturating_sub(1))));
    }
    let (p, q) = positive_rational(&spec.delta)?;
    let len = spec.depth + 1;
    let mut seqs: Vec<Vec<BigInt>> = vec![Vec::with_capacity(len)];
    for r in &spec.rules {
        seqs.push(r.take(len)?);
    }
    for (j, s) in seqs.iter().enumerate().skip(1) {
        if let Some(n) = (1..len).find(|&n| s[n].is_negative()) {
            return Err(McfError::AdmissibilityConflict { index: n, condition: format!("a_n^({}) >= 0", j + 1) });
        }
    }
    seqs[0].push(spec.a0.clone());
    let mut st = ConvergentState::new(m);
    st.push(&(0..m).map(|j| seqs[j][0].clone()).collect::<Vec<_>>());
    for n in 1..len {
        let prev = st.latest().to_vec();
        let c_prev = &prev[m];
        // with a^{(1)}_n = 0 the column is V_n - a^{(1)}_n V_{n-1}, which has
        // the same tilde values
        let mut trial = st.clone();
        let mut col: Vec<BigInt> = (0..m).map(|j| if j == 0 { BigInt::zero() } else { seqs[j][n].clone() }).collect();
        let v = trial.push(&col).to_vec();
        let tmax: BigInt = (0..m).map(|i| (&v[i] * c_prev - &prev[i] * &v[m]).abs()).max().unwrap();
        let floor = (1..m).map(|j| seqs[j][n].clone()).max().unwrap_or_else(BigInt::zero);
        let a: BigInt = (tmax * ceil_pow(c_prev, p, q)).max(floor) + 1;
        col[0] = a.clone();
        seqs[0].push(a);
        st.push(&col);
    }
    PartialQuotients::new(seqs)
}

/// Checks `a^{(1)}_n > |Ã^{(i)}_n|·C_{n-1}^δ` for `1 <= n <= n_max`, all `i`,
/// as `a^q > |Ã|^q C^p` for `δ = p/q`. Witnesses are the indices where the
/// second link `|Ã_{n+1}|/(C_{n+1}C_n) < C_n^{-2-δ}` of the approximation
/// chain holds for a coordinate.
pub fn verify_liouville(pq: &PartialQuotients, delta: &BigRational, n_max: usize) -> Result<CriterionReport> {
    let (p, q) = positive_rational(delta)?;
    if pq.depth() < n_max + 1 {
        return Err(McfError::input(format!("need {} columns, have {}", n_max + 1, pq.depth())));
    }
    let m = pq.m();
    let t = ConvergentTable::new(pq, pq.depth());
    let mut rep = CriterionReport::new("liouville", n_max);
    let mut adm = Tally::new("admissible");
    if let Some(v) = check_admissible(&pq.truncated(n_max + 1)).first() {
        adm.record(v.index, false);
    } else {
        adm.record(0, true);
    }
    let mut dom = Tally::new(format!("a_n > max_i |tilde_n^(i)| C_(n-1)^({delta})"));
    let exponent = (BigRational::from_integer(BigInt::from(2)) + delta).to_string();
    for n in 1..=n_max {
        let ni = n as i64;
        let lhs = num_traits::pow(pq.seq(0)[n].clone(), q as usize);
        let cp = num_traits::pow(t.c(ni - 1).clone(), p as usize);
        let ok = (0..m).all(|i| lhs > num_traits::pow(t.tilde(i, ni).abs(), q as usize) * &cp);
        dom.record(n, ok);
        if n < pq.depth() - 1 || n < n_max {
            // |Ã_{n+1}|^q C_n^{q+p} < C_{n+1}^q
            let c = t.c(ni);
            let right = num_traits::pow(t.c(ni + 1).clone(), q as usize);
            let cpow = num_traits::pow(c.clone(), (q + p) as usize);
            for i in 0..m {
                let l = num_traits::pow(t.tilde(i, ni + 1).abs(), q as usize) * &cpow;
                if l < right {
                    rep.witnesses.push(WitnessEntry { coordinate: i, index: n, exponent: exponent.clone() });
                }
            }
        }
    }
    rep.hypotheses.push(adm.done());
    rep.hypotheses.push(dom.done());
    Ok(rep.finish())
}

/// Lists `n <= n_max` with `|x_i - A^{(i)}_n/C_n| < 1/C_n^{2+ε}`, certified.
/// Undecided comparisons (oracle out of precision) are reported separately.
pub fn roth_scan(
    x: &[RealValue],
    pq: &PartialQuotients,
    epsilon: &BigRational,
    n_max: usize,
    budget: PrecisionBudget,
) -> Result<RothScan> {
    if epsilon.is_zero() {
        return Err(McfError::input("epsilon = 0 is the critical exponent 2 itself; the scan needs epsilon > 0"));
    }
    let (p, q) = positive_rational(epsilon)?;
    let m = pq.m();
    if x.len() != m {
        return Err(McfError::input(format!("{} inputs for an m = {m} expansion", x.len())));
    }
    if pq.depth() < n_max + 1 {
        return Err(McfError::input(format!("need {} columns, have {}", n_max + 1, pq.depth())));
    }
    let t = ConvergentTable::new(pq, n_max + 1);
    let exponent = (BigRational::from_integer(BigInt::from(2)) + epsilon).to_string();
    let mut out = RothScan { epsilon: epsilon.to_string(), n_max, witnesses: Vec::new(), undecided: Vec::new() };
    for n in 0..=n_max {
        let ni = n as i64;
        let c = t.c(ni);
        // |x C - A|^q · C^{q+p} < 1
        let k = num_traits::pow(c.clone(), (q + p) as usize);
        for (i, xi) in x.iter().enumerate() {
            match cmp_scaled_gap(xi, c, t.a(i, ni), q, &k, &BigInt::one(), budget)? {
                Some(Ordering::Less) => {
                    out.witnesses.push(WitnessEntry { coordinate: i, index: n, exponent: exponent.clone() })
                }
                Some(_) => {}
                None => out.undecided.push((i, n)),
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RothScan {
    pub epsilon: String,
    pub n_max: usize,
    pub witnesses: Vec<WitnessEntry>,
    pub undecided: Vec<(usize, usize)>,
}

impl RothScan {
    pub fn indices(&self, coordinate: usize) -> Vec<usize> {
        self.witnesses.iter().filter(|w| w.coordinate == coordinate).map(|w| w.index).collect()
    }
}

// ---------------------------------------------------------------------------
// quasi-periodic sequences

/// Block of `r` entries starting at `n`, present `lambda` times in a row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub n: usize,
    pub r: usize,
    pub lambda: BigInt,
}

impl ScheduleEntry {
    pub fn new(n: usize, r: usize, lambda: impl Into<BigInt>) -> Self {
        ScheduleEntry { n, r, lambda: lambda.into() }
    }

    /// One past the last index of the repetition window, if it fits `usize`.
    pub fn end(&self) -> Option<usize> {
        (&self.lambda * BigInt::from(self.r)).to_usize().and_then(|w| w.checked_add(self.n))
    }
}

#[derive(Clone, Debug)]
pub struct QuasiPeriodicSpec {
    pub m: usize,
    pub schedule: Vec<ScheduleEntry>,
    /// One rule per coordinate.
    pub base: Vec<EntryRule>,
}

impl QuasiPeriodicSpec {
    pub fn validate_schedule(&self) -> Result<()> {
        for (k, e) in self.schedule.iter().enumerate() {
            if e.n == 0 || e.r == 0 || !e.lambda.is_positive() {
                return Err(McfError::input(format!("schedule entry {k} must have positive n, r, lambda")));
            }
            if k > 0 {
                let prev = &self.schedule[k - 1];
                if e.n <= prev.n {
                    return Err(McfError::input("schedule start indices must increase strictly"));
                }
                if prev.end().is_none_or(|end| e.n < end) {
                    return Err(McfError::ScheduleOverlap(k));
                }
            }
        }
        Ok(())
    }
}

/// Base entries everywhere, then each scheduled block copied forward so that
/// `a_{t + r_k} = a_t` for `n_k <= t <= n_k + (λ_k - 1) r_k - 1`. Returns
/// indices `0..depth`.
pub fn build_quasiperiodic(spec: &QuasiPeriodicSpec, depth: usize) -> Result<PartialQuotients> {
    if spec.base.len() != spec.m || spec.m == 0 {
        return Err(McfError::input(format!("m = {} needs one base rule per coordinate", spec.m)));
    }
    spec.validate_schedule()?;
    let mut seqs: Vec<Vec<BigInt>> = spec.base.iter().map(|r| r.take(depth)).collect::<Result<_>>()?;
    for e in &spec.schedule {
        let end = e.end().unwrap_or(usize::MAX).min(depth);
        for s in seqs.iter_mut() {
            for t in e.n + e.r..end {
                s[t] = s[t - e.r].clone();
            }
        }
    }
    let pq = PartialQuotients::new(seqs)?;
    if let Some(v) = check_admissible(&pq).first() {
        return Err(McfError::Admissibility { index: v.index, condition: v.condition.clone() });
    }
    Ok(pq)
}

/// Independent re-scan of the repetition identities; returns the first
/// index `t` (within `pq`) where `a_{t + r_k} != a_t`.
pub fn scan_repetitions(pq: &PartialQuotients, schedule: &[ScheduleEntry]) -> Option<usize> {
    for e in schedule {
        let Some(last) = e.end().map(|end| end - e.r) else { continue };
        for t in e.n..last {
            if t + e.r >= pq.depth() {
                break;
            }
            if (0..pq.m()).any(|j| pq.seq(j)[t + e.r] != pq.seq(j)[t]) {
                return Some(t);
            }
        }
    }
    None
}

fn ratio_entry(k: usize, e: &ScheduleEntry, iv: &RationalInterval, exceeds: Option<bool>) -> RatioEntry {
    let iv = iv.round_outward(48);
    RatioEntry {
        k,
        n_k: BigInt::from(e.n),
        lambda_k: e.lambda.clone(),
        lo: iv.lo().to_string(),
        hi: iv.hi().to_string(),
        approx: iv.midpoint().to_f64().unwrap_or(f64::NAN),
        exceeds,
    }
}

/// Quasi-periodic transcendence hypotheses at finite depth: `C_1 <= 3` and
/// `a_{i+1} < C_i^d` for `1 <= i <= depth`, `r_k < c·n_k` for every scheduled
/// block. The sequence `ln λ_k / n_k` is reported with its trend.
pub fn main1_check(spec: &QuasiPeriodicSpec, d: u32, c: &BigRational, depth: usize) -> Result<CriterionReport> {
    if spec.m != 2 {
        return Err(McfError::input("the quasi-periodic criteria are stated for m = 2"));
    }
    if d == 0 {
        return Err(McfError::input("d must be at least 1"));
    }
    let pq = build_quasiperiodic(spec, depth + 2)?;
    let t = ConvergentTable::new(&pq, depth + 2);
    let mut rep = CriterionReport::new("main1", depth);

    let mut base = Tally::new("C_1 <= 3");
    base.record(1, t.c(1) <= &BigInt::from(3));
    let mut growth = Tally::new(format!("a_(i+1) < C_i^{d}"));
    for i in 1..=depth {
        growth.record(i, pq.seq(0)[i + 1] < num_traits::pow(t.c(i as i64).clone(), d as usize));
    }
    let mut blocks = Tally::new(format!("r_k < {c} n_k"));
    for e in &spec.schedule {
        blocks.record(e.n, BigRational::from_integer(BigInt::from(e.r)) < c * BigRational::from_integer(BigInt::from(e.n)));
    }
    rep.hypotheses.extend([base.done(), growth.done(), blocks.done()]);

    let bits = 48;
    let mut prev: Option<RationalInterval> = None;
    let mut trend = Some(true);
    for (k, e) in spec.schedule.iter().enumerate() {
        let iv = ln_int(&e.lambda, bits)?.scale(&BigRational::new(BigInt::one(), BigInt::from(e.n)));
        if let Some(p) = &prev {
            if iv.lo() <= p.hi() {
                // not certified increasing: decreasing if separated, otherwise unknown
                trend = match trend {
                    Some(true) if iv.hi() < p.lo() => Some(false),
                    Some(true) => None,
                    other => other,
                };
            }
        }
        rep.ratios.push(ratio_entry(k, e, &iv, None));
        prev = Some(iv);
    }
    rep.notes.push(format!(
        "ln(lambda_k)/n_k over {} blocks: {}",
        spec.schedule.len(),
        match trend {
            Some(true) => "strictly increasing",
            Some(false) => "not increasing",
            None => "not certified monotone",
        }
    ));
    Ok(rep.finish())
}

/// Which `B` to use in the bounded-quotient criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BVariant {
    /// `2 ln η / ln ψ - 1`, `ψ` the real root of `x³ - x² - x - 1`.
    Tribonacci,
    /// Same formula, `ψ` the real root of `x³ - x² - 1`.
    Psi,
    /// Factor 18 instead of 2, `ψ` from `x³ - x² - 1`.
    Psi18,
}

impl FromStr for BVariant {
    type Err = McfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tribonacci" => Ok(BVariant::Tribonacci),
            "psi" => Ok(BVariant::Psi),
            "psi18" => Ok(BVariant::Psi18),
            _ => Err(McfError::input(format!("unknown variant `{s}` (tribonacci, psi, psi18)"))),
        }
    }
}

fn ln_elem(e: &FieldElement, bits: u32) -> Result<RationalInterval> {
    ln_interval(&e.interval(&dyadic_width(bits + 4)), bits)
}

/// Certified enclosure of `B`, width below `2^-bits`.
pub fn main2_constant(m_bound: &BigInt, variant: BVariant, bits: u32) -> Result<RationalInterval> {
    let eta_e = eta(m_bound)?;
    let psi_e = match variant {
        BVariant::Tribonacci => eta(&BigInt::one())?,
        BVariant::Psi | BVariant::Psi18 => psi(),
    };
    let factor = BigRational::from_integer(BigInt::from(if variant == BVariant::Psi18 { 18 } else { 2 }));
    if eta_e.field().min_poly() == psi_e.field().min_poly() {
        // both are the unique positive root of the same polynomial
        return Ok(RationalInterval::point(factor - BigRational::one()));
    }
    let mut prec = bits + 8;
    loop {
        let r = ln_elem(&eta_e, prec)?.div(&ln_elem(&psi_e, prec)?)?;
        let b = r.scale(&factor).add_scalar(&-BigRational::one());
        if b.width() < dyadic_width(bits) {
            return Ok(b);
        }
        prec += 16;
    }
}

/// `v > b` decided with `b` enclosed ever more tightly.
fn exceeds_constant(v: &BigRational, m_bound: &BigInt, variant: BVariant) -> Result<bool> {
    let mut bits = 32;
    loop {
        let b = main2_constant(m_bound, variant, bits)?;
        if b.is_point() {
            return Ok(v > b.lo());
        }
        if b.lt(v) {
            return Ok(true);
        }
        if b.lo() >= v {
            return Ok(false);
        }
        if bits > 4096 {
            return Err(McfError::NonTerminating { rounds: 8 });
        }
        bits *= 2;
    }
}

/// Bounded-quotient hypotheses (`a_k, b_k <= M` through `depth`, `r_k <= N`)
/// and the proxy `max_k λ_k/n_k > B` over the schedule.
pub fn main2_check(
    spec: &QuasiPeriodicSpec,
    m_bound: &BigInt,
    n_bound: usize,
    variant: BVariant,
    depth: usize,
) -> Result<CriterionReport> {
    if spec.m != 2 {
        return Err(McfError::input("the quasi-periodic criteria are stated for m = 2"));
    }
    let pq = build_quasiperiodic(spec, depth + 1)?;
    let mut rep = CriterionReport::new("main2", depth);
    let mut bounded = Tally::new(format!("a_n, b_n <= {m_bound}"));
    for n in 0..=depth {
        bounded.record(n, (0..2).all(|j| &pq.seq(j)[n] <= m_bound));
    }
    let mut blocks = Tally::new(format!("r_k <= {n_bound}"));
    for e in &spec.schedule {
        blocks.record(e.n, e.r <= n_bound);
    }
    let b = main2_constant(m_bound, variant, 48)?;
    rep.notes.push(format!("B ({variant:?}) in {}", b.round_outward(48)));
    let mut proxy = Tally::new("max_k lambda_k/n_k > B");
    let mut best: Option<BigRational> = None;
    for (k, e) in spec.schedule.iter().enumerate() {
        let v = BigRational::new(e.lambda.clone(), BigInt::from(e.n));
        let ex = exceeds_constant(&v, m_bound, variant)?;
        rep.ratios.push(ratio_entry(k, e, &RationalInterval::point(v.clone()), Some(ex)));
        if best.as_ref().is_none_or(|b| &v > b) {
            best = Some(v);
        }
    }
    let last = spec.schedule.last().map_or(0, |e| e.n);
    match best {
        Some(v) => proxy.record(last, exceeds_constant(&v, m_bound, variant)?),
        None => proxy.record(0, false),
    }
    rep.hypotheses.extend([bounded.done(), blocks.done(), proxy.done()]);
    Ok(rep.finish())
}
