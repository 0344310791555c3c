//! Eventually periodic Jacobi expansions (`m = 2`) and the cubic irrationals
//! they converge to.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::convergents::{mat_mul, step_matrix, ConvergentTable};
use crate::engine::{check_admissible, expand, PartialQuotients};
use crate::error::{McfError, Result};
use crate::exact::interval::simplest_rational_in;
use crate::exact::poly::{height, primitive_part};
use crate::exact::real::RealValue;
use crate::exact::{FieldElement, NumberField, QPoly, RationalInterval};

/// `a_0 … a_{k-1} (a_k … a_{k+h-1})` and the same shape for `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSpec {
    pub pre_a: Vec<BigInt>,
    pub pre_b: Vec<BigInt>,
    pub per_a: Vec<BigInt>,
    pub per_b: Vec<BigInt>,
}

impl PeriodicSpec {
    /// Checks the shape and the admissibility of the infinite unrolled
    /// sequences, wrap-around included.
    pub fn new(pre_a: Vec<BigInt>, pre_b: Vec<BigInt>, per_a: Vec<BigInt>, per_b: Vec<BigInt>) -> Result<Self> {
        if pre_a.len() != pre_b.len() {
            return Err(McfError::input("pre-period blocks have different lengths"));
        }
        if per_a.len() != per_b.len() {
            return Err(McfError::input("period blocks have different lengths"));
        }
        if per_a.is_empty() {
            return Err(McfError::input("the period must be non-empty"));
        }
        let s = PeriodicSpec { pre_a, pre_b, per_a, per_b };
        s.validate()?;
        Ok(s)
    }

    pub fn from_i64(pre_a: &[i64], pre_b: &[i64], per_a: &[i64], per_b: &[i64]) -> Result<Self> {
        let v = |s: &[i64]| s.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(v(pre_a), v(pre_b), v(per_a), v(per_b))
    }

    /// Pre-period length.
    pub fn k(&self) -> usize {
        self.pre_a.len()
    }

    /// Period length.
    pub fn h(&self) -> usize {
        self.per_a.len()
    }

    pub fn entry(&self, n: usize) -> (BigInt, BigInt) {
        if n < self.k() {
            (self.pre_a[n].clone(), self.pre_b[n].clone())
        } else {
            let i = (n - self.k()) % self.h();
            (self.per_a[i].clone(), self.per_b[i].clone())
        }
    }

    /// The first `len` columns of the unrolled sequences.
    pub fn unrolled(&self, len: usize) -> PartialQuotients {
        let (a, b): (Vec<_>, Vec<_>) = (0..len).map(|n| self.entry(n)).unzip();
        PartialQuotients::new(vec![a, b]).expect("two sequences")
    }

    /// Every admissibility condition of the infinite sequence already occurs
    /// at some index `<= k + h + 1`; the extra period covers the look-ahead.
    pub fn validate(&self) -> Result<()> {
        let len = self.k() + 2 * self.h() + 2;
        match check_admissible(&self.unrolled(len)).first() {
            None => Ok(()),
            Some(v) => Err(McfError::Admissibility { index: v.index, condition: v.condition.clone() }),
        }
    }

    /// The purely periodic spec with the same period.
    pub fn purely_periodic(&self) -> Result<PeriodicSpec> {
        PeriodicSpec::new(Vec::new(), Vec::new(), self.per_a.clone(), self.per_b.clone())
    }
}

impl fmt::Display for PeriodicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "a=[{}]({}) b=[{}]({})", j(&self.pre_a), j(&self.per_a), j(&self.pre_b), j(&self.per_b))
    }
}

/// `X = M_0 ⋯ M_{k+h-1} (M_0 ⋯ M_{k-1})^{-1}`; `(α₀, β₀, 1)` is projectively
/// fixed by it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XMatrix {
    #[serde(serialize_with = "crate::io::ser_bigint_matrix")]
    pub x: [[BigInt; 3]; 3],
}

impl XMatrix {
    /// 1-based access, `X_{i,j}`.
    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.x[i - 1][j - 1]
    }

    pub fn max_abs(&self) -> BigInt {
        self.x.iter().flatten().map(Signed::abs).max().unwrap()
    }
}

/// Inverse of `M_0 ⋯ M_{k-1}` (determinant one) written with the tilde
/// sequences at `k - 2` and `k - 1`.
fn prefix_inverse(t: &ConvergentTable, k: i64) -> [[BigInt; 3]; 3] {
    let (a, b, c) = (|n| t.a(0, n), |n| t.a(1, n), |n| t.c(n));
    let at = |n: i64| a(n) * c(n - 1) - c(n) * a(n - 1);
    let bt = |n: i64| b(n) * c(n - 1) - b(n - 1) * c(n);
    let ut = |n: i64| a(n) * b(n - 1) - a(n - 1) * b(n);
    let att = |n: i64| a(n) * c(n - 2) - c(n) * a(n - 2);
    let btt = |n: i64| b(n) * c(n - 2) - b(n - 2) * c(n);
    let utt = |n: i64| a(n) * b(n - 2) - a(n - 2) * b(n);
    [
        [bt(k - 2), -at(k - 2), ut(k - 2)],
        [-btt(k - 1), att(k - 1), -utt(k - 1)],
        [bt(k - 1), -at(k - 1), ut(k - 1)],
    ]
}

pub fn x_matrix(spec: &PeriodicSpec) -> Result<XMatrix> {
    spec.validate()?;
    let (k, h) = (spec.k(), spec.h());
    let last = (k + h - 1) as i64;
    let t = ConvergentTable::new(&spec.unrolled(k + h), k + h);
    let p: Vec<Vec<BigInt>> = (0..3).map(|r| (0..3).map(|j| t.get(last - j as i64)[r].clone()).collect()).collect();
    let inv = prefix_inverse(&t, k as i64);
    let inv: Vec<Vec<BigInt>> = inv.iter().map(|r| r.to_vec()).collect();
    let prod = mat_mul(&p, &inv);
    let x = std::array::from_fn(|i| std::array::from_fn(|j| prod[i][j].clone()));
    Ok(XMatrix { x })
}

/// The same matrix by brute force: the period's product conjugated by the
/// pre-period's product, inverted through the adjugate.
pub fn x_matrix_direct(spec: &PeriodicSpec) -> XMatrix {
    let (k, h) = (spec.k(), spec.h());
    let col = |n: usize| {
        let (a, b) = spec.entry(n);
        vec![a, b]
    };
    let ident = || (0..3).map(|i| (0..3).map(|j| BigInt::from(u8::from(i == j))).collect()).collect::<Vec<Vec<BigInt>>>();
    let mut pre = ident();
    for n in 0..k {
        pre = mat_mul(&pre, &step_matrix(&col(n)));
    }
    let mut per = ident();
    for n in k..k + h {
        per = mat_mul(&per, &step_matrix(&col(n)));
    }
    let adj = adjugate(&pre);
    let det = crate::convergents::int_det(&pre);
    let prod = mat_mul(&mat_mul(&pre, &per), &adj);
    let x = std::array::from_fn(|i| std::array::from_fn(|j| &prod[i][j] / &det));
    XMatrix { x }
}

fn adjugate(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let minor = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        &m[rows[0]][cols[0]] * &m[rows[1]][cols[1]] - &m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]
    };
    (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let v = minor(j, i);
                    if (i + j) % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Alpha,
    Beta,
}

/// `(A, B, C, D)` with `A x³ + B x² + C x + D`, from the closed forms.
pub fn cubic_coeffs(x: &XMatrix, target: Target) -> Result<[BigInt; 4]> {
    let g = |i: usize, j: usize| x.at(i, j).clone();
    let (x11, x12, x13) = (g(1, 1), g(1, 2), g(1, 3));
    let (x21, x22, x23) = (g(2, 1), g(2, 2), g(2, 3));
    let (x31, x32, x33) = (g(3, 1), g(3, 2), g(3, 3));
    let two = BigInt::from(2);
    let q = match target {
        Target::Beta => [
            -&x12 * &x31 * &x31 + &x11 * &x31 * &x32 - &x22 * &x31 * &x32 + &x21 * &x32 * &x32,
            &two * &x12 * &x21 * &x31 - &x11 * &x22 * &x31 + &x22 * &x22 * &x31 - &x13 * &x31 * &x31
                - &x11 * &x21 * &x32
                - &x21 * &x22 * &x32
                - &x23 * &x31 * &x32
                + &x11 * &x31 * &x33
                - &x22 * &x31 * &x33
                + &two * &x21 * &x32 * &x33,
            -&x12 * &x21 * &x21 + &x11 * &x21 * &x22 + &two * &x13 * &x21 * &x31 - &x11 * &x23 * &x31
                + &two * &x22 * &x23 * &x31
                - &x21 * &x23 * &x32
                - &x11 * &x21 * &x33
                - &x21 * &x22 * &x33
                - &x23 * &x31 * &x33
                + &x21 * &x33 * &x33,
            -&x13 * &x21 * &x21 + &x11 * &x21 * &x23 + &x23 * &x23 * &x31 - &x21 * &x23 * &x33,
        ],
        Target::Alpha => [
            &x12 * &x31 * &x31 - &x11 * &x31 * &x32 + &x22 * &x31 * &x32 - &x21 * &x32 * &x32,
            -&x11 * &x12 * &x31 - &x12 * &x22 * &x31 + &x11 * &x11 * &x32 + &two * &x12 * &x21 * &x32
                - &x11 * &x22 * &x32
                - &x13 * &x31 * &x32
                - &x23 * &x32 * &x32
                + &two * &x12 * &x31 * &x33
                - &x11 * &x32 * &x33
                + &x22 * &x32 * &x33,
            -&x12 * &x12 * &x21 + &x11 * &x12 * &x22 - &x12 * &x13 * &x31 + &two * &x11 * &x13 * &x32
                - &x13 * &x22 * &x32
                + &two * &x12 * &x23 * &x32
                - &x11 * &x12 * &x33
                - &x12 * &x22 * &x33
                - &x13 * &x32 * &x33
                + &x12 * &x33 * &x33,
            &x12 * &x13 * &x22 - &x12 * &x12 * &x23 + &x13 * &x13 * &x32 - &x12 * &x13 * &x33,
        ],
    };
    let elim = eliminate(x, target);
    if !elim[4].is_zero() {
        return Err(McfError::DegenerateCubic { reason: "quartic terms do not cancel".into(), poly: elim });
    }
    let closed: Vec<BigInt> = q.iter().rev().cloned().collect();
    let agrees = (0..4).all(|i| closed[i] == elim[i]) || (0..4).all(|i| closed[i] == -&elim[i]);
    assert!(agrees, "closed form disagrees with elimination for {:?}", x.x);
    if q[0].is_zero() {
        return Err(McfError::DegenerateCubic { reason: "leading coefficient vanishes".into(), poly: closed });
    }
    Ok(q)
}

type IPoly = Vec<BigInt>;

fn padd(p: &[BigInt], q: &[BigInt]) -> IPoly {
    (0..p.len().max(q.len()))
        .map(|i| p.get(i).cloned().unwrap_or_default() + q.get(i).cloned().unwrap_or_default())
        .collect()
}

fn pmul(p: &[BigInt], q: &[BigInt]) -> IPoly {
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn pneg(p: &[BigInt]) -> IPoly {
    p.iter().map(|c| -c).collect()
}

/// Substitutes the first fixed-point equation into the second and returns
/// the resulting quartic, constant term first (five entries).
fn eliminate(x: &XMatrix, target: Target) -> IPoly {
    let g = |i: usize, j: usize| x.at(i, j).clone();
    // After swapping roles the α case is the β case with indices 1 <-> 2.
    let (s1, s2) = match target {
        Target::Beta => (1, 2),
        Target::Alpha => (2, 1),
    };
    let x_ = |i: usize, j: usize| {
        let m = |t: usize| if t == 3 { 3 } else if t == 1 { s1 } else { s2 };
        g(m(i), m(j))
    };
    // The eliminated coordinate u = n(v) / d(v), v the target.
    // n = X32 v² + (X33 - X22) v - X23, d = X21 - X31 v
    let n: IPoly = vec![-x_(2, 3), x_(3, 3) - x_(2, 2), x_(3, 2)];
    let d: IPoly = vec![x_(2, 1), -x_(3, 1)];
    // X31 n² - (X12 v + X13) d² + (X32 v + X33 - X11) n d
    let t1 = pmul(&[x_(3, 1)], &pmul(&n, &n));
    let t2 = pneg(&pmul(&[x_(1, 3), x_(1, 2)], &pmul(&d, &d)));
    let t3 = pmul(&[x_(3, 3) - x_(1, 1), x_(3, 2)], &pmul(&n, &d));
    let mut out = padd(&padd(&t1, &t2), &t3);
    out.resize(5, BigInt::zero());
    out
}

/// Certified exact description of `(α₀, β₀)`.
#[derive(Clone, Debug)]
pub struct CubicCertificate {
    pub spec: PeriodicSpec,
    pub x: XMatrix,
    /// Primitive `(A, B, C, D)`, positive leading coefficient.
    pub poly_alpha: [BigInt; 4],
    pub poly_beta: [BigInt; 4],
    pub height_alpha: BigInt,
    pub height_beta: BigInt,
    /// `C_{h+k-1}`.
    pub c_last: BigInt,
    /// `None` when `a₀` or `b₀` is negative (no box applies).
    pub bound: Option<BigInt>,
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub alpha_interval: RationalInterval,
    pub beta_interval: RationalInterval,
    /// Number of quotients the selected root reproduced.
    pub matched: usize,
    pub residual_ok: bool,
}

impl CubicCertificate {
    pub fn bound_holds(&self) -> Option<bool> {
        self.bound.as_ref().map(|b| &self.height_alpha <= b && &self.height_beta <= b)
    }
}

fn to_quartet(coeffs_const_first: &[BigInt]) -> [BigInt; 4] {
    std::array::from_fn(|i| coeffs_const_first.get(3 - i).cloned().unwrap_or_default())
}

fn const_first(q: &[BigInt; 4]) -> Vec<BigInt> {
    q.iter().rev().cloned().collect()
}

/// Primitive part, with a rational root reported as degenerate.
fn primitive_irreducible(q: &[BigInt; 4]) -> Result<[BigInt; 4]> {
    let (_, prim) = primitive_part(&const_first(q));
    let prim = to_quartet(&prim);
    let p = QPoly::from_ints(&const_first(&prim));
    if let Some(r) = rational_root(&p, &prim[0]) {
        return Err(McfError::DegenerateCubic {
            reason: format!("rational root {r}"),
            poly: const_first(&prim),
        });
    }
    Ok(prim)
}

/// A rational root `u/v` of an integer polynomial has `v | lead`, so two
/// candidates differ by at least `1/lead²`; on an isolating interval that
/// narrow the simplest rational is the only possible one.
fn rational_root(p: &QPoly, lead: &BigInt) -> Option<BigRational> {
    let l2 = BigRational::from_integer(lead * lead);
    let target = l2.recip() / BigRational::from_integer(BigInt::from(2));
    for iv in p.isolate_real_roots() {
        if iv.is_point() {
            return Some(iv.lo().clone());
        }
        let mut iv = iv;
        while iv.width() >= target {
            let mid = iv.midpoint();
            if p.eval(&mid).is_zero() {
                return Some(mid);
            }
            iv = if p.count_roots(iv.lo(), &mid) == 1 {
                RationalInterval::new_unchecked(iv.lo().clone(), mid)
            } else {
                RationalInterval::new_unchecked(mid, iv.hi().clone())
            };
        }
        let s = simplest_rational_in(iv.lo(), iv.hi());
        if p.eval(&s).is_zero() {
            return Some(s);
        }
    }
    None
}

fn eval_in_field(q: &[BigInt; 4], e: &FieldElement) -> Result<FieldElement> {
    let mut acc = e.field().constant(BigRational::zero());
    for c in q {
        acc = acc.mul(e)?.add_rational(&BigRational::from_integer(c.clone()));
    }
    Ok(acc)
}

fn residual_width() -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 50))
}

/// Refines `iv` (containing a root of `p`) until `p(iv)` lies within
/// `±10⁻⁵⁰`; returns the refined interval.
fn certify_residual(p: &QPoly, elem: &FieldElement) -> (RationalInterval, bool) {
    let tol = residual_width();
    let mut w = BigRational::new(BigInt::one(), BigInt::from(1u64 << 32));
    for _ in 0..16 {
        let iv = elem.interval(&w);
        let v = p.eval_interval(&iv);
        if v.lo() > &-&tol && v.hi() < &tol {
            return (iv, true);
        }
        w = &w * &w;
    }
    (elem.interval(&w), false)
}

/// Narrows `elem`'s enclosure until it isolates a single root of `p`.
fn isolating_interval(p: &QPoly, elem: &FieldElement) -> RationalInterval {
    let mut w = BigRational::new(BigInt::one(), BigInt::from(1024));
    loop {
        let iv = elem.interval(&w);
        if iv.is_point() {
            return iv;
        }
        if p.sign_at(iv.lo()) != 0 && p.sign_at(iv.hi()) != 0 && p.count_roots(iv.lo(), iv.hi()) == 1 {
            return iv;
        }
        w = &w * &w;
    }
}

/// Number of leading columns on which `x` reproduces `target`.
fn matching_prefix(x: &[RealValue], target: &PartialQuotients) -> usize {
    let Ok(rec) = expand(x, target.depth(), false) else { return 0 };
    (0..target.depth()).take_while(|&n| rec.pq.column(n).is_some() && rec.pq.column(n) == target.column(n)).count()
}

pub fn solve_periodic(spec: &PeriodicSpec) -> Result<CubicCertificate> {
    let x = x_matrix(spec)?;
    let pa = primitive_irreducible(&cubic_coeffs(&x, Target::Alpha)?)?;
    let pb = primitive_irreducible(&cubic_coeffs(&x, Target::Beta)?)?;
    let (k, h) = (spec.k(), spec.h());
    let t = ConvergentTable::new(&spec.unrolled(k + h), k + h);
    let c_last = t.c((k + h - 1) as i64).clone();

    let (a0, b0) = spec.entry(0);
    let c9 = num_traits::pow(c_last.clone(), 9) * 3024;
    let bound = if a0.is_zero() && b0.is_zero() {
        Some(c9)
    } else if a0.is_negative() || b0.is_negative() {
        None
    } else {
        let n5 = num_traits::pow(&a0 + 1, 5);
        let m5 = num_traits::pow(&b0 + 1, 5);
        Some(c9 * n5 * m5)
    };

    let poly_a = QPoly::from_ints(&const_first(&pa));
    let poly_b = QPoly::from_ints(&const_first(&pb));
    let x12 = BigRational::from_integer(x.at(1, 2).clone());
    let x32 = BigRational::from_integer(x.at(3, 2).clone());
    let x31 = BigRational::from_integer(x.at(3, 1).clone());
    let x33_11 = BigRational::from_integer(x.at(3, 3) - x.at(1, 1));
    let x13 = BigRational::from_integer(x.at(1, 3).clone());

    let mut candidates = Vec::new();
    for iv in poly_a.isolate_real_roots() {
        let field = NumberField::new(const_first(&pa), iv)?;
        let alpha = field.theta();
        // β₀ = (X31 α² + (X33 - X11) α - X13) / (X12 - X32 α)
        let num = alpha.mul(&alpha)?.scale(&x31).add(&alpha.scale(&x33_11))?.add_rational(&-&x13);
        let den = alpha.scale(&-&x32).add_rational(&x12);
        let Ok(beta) = num.div(&den) else { continue };
        candidates.push((alpha, beta));
    }

    let mut len = (2 * (k + h)).max(20);
    let chosen = loop {
        let target = spec.unrolled(len);
        let matching: Vec<_> = candidates
            .iter()
            .filter(|(a, b)| matching_prefix(&[a.clone().into(), b.clone().into()], &target) == len)
            .collect();
        match matching.len() {
            0 => {
                return Err(McfError::DegenerateCubic {
                    reason: "no real root reproduces the expansion".into(),
                    poly: const_first(&pa),
                })
            }
            1 => break matching[0].clone(),
            _ if len >= 400 => return Err(McfError::RootSelectionAmbiguous),
            _ => len *= 2,
        }
    };
    let (alpha, beta) = chosen;

    let exact_ok = eval_in_field(&pa, &alpha)?.is_zero() && eval_in_field(&pb, &beta)?.is_zero();
    let (_, res_a) = certify_residual(&poly_a, &alpha);
    let (_, res_b) = certify_residual(&poly_b, &beta);
    let alpha_interval = alpha.field().root_interval();
    let beta_interval = isolating_interval(&poly_b, &beta);

    Ok(CubicCertificate {
        spec: spec.clone(),
        x,
        height_alpha: height(&pa),
        height_beta: height(&pb),
        poly_alpha: pa,
        poly_beta: pb,
        c_last,
        bound,
        alpha,
        beta,
        alpha_interval,
        beta_interval,
        matched: len,
        residual_ok: exact_ok && res_a && res_b,
    })
}

/// `(y_1 P_1 + y_2 P_2 + P_3) / (y_1 R_1 + y_2 R_2 + R_3)` over the convergent
/// columns `k-1, k-2, k-3`, with `P` the row `row` and `R` the `C` row.
fn mobius(t: &ConvergentTable, k: i64, row: usize, y1: &FieldElement, y2: &FieldElement) -> Result<FieldElement> {
    let lin = |r: usize| -> Result<FieldElement> {
        let c = |n: i64| BigRational::from_integer(t.get(n)[r].clone());
        Ok(y1.scale(&c(k - 1)).add(&y2.scale(&c(k - 2)))?.add_rational(&c(k - 3)))
    };
    lin(row)?.div(&lin(2)?)
}

/// Shows that both specs' `(α₀, β₀)` lie in `ℚ(α̃)`, `α̃` the purely
/// periodic point of the shared period, by writing each as a fractional
/// linear expression in `(α̃, β̃)` and checking it is the certified root.
pub fn same_field_check(spec1: &PeriodicSpec, spec2: &PeriodicSpec) -> Result<bool> {
    if spec1.per_a != spec2.per_a || spec1.per_b != spec2.per_b {
        return Err(McfError::PeriodMismatch);
    }
    let pure = solve_periodic(&spec1.purely_periodic()?)?;
    for spec in [spec1, spec2] {
        let cert = solve_periodic(spec)?;
        let k = spec.k();
        let t = ConvergentTable::new(&spec.unrolled(k), k);
        let k = k as i64;
        let pairs = [
            (mobius(&t, k, 0, &pure.alpha, &pure.beta)?, &cert.poly_alpha, &cert.alpha_interval),
            (mobius(&t, k, 1, &pure.alpha, &pure.beta)?, &cert.poly_beta, &cert.beta_interval),
        ];
        for (v, poly, iv) in pairs {
            if !eval_in_field(poly, &v)?.is_zero() {
                return Ok(false);
            }
            if v.interval(&iv.width()).intersect(iv).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
