//! Convergents `A^{(i)}_n / C_n` of a multidimensional continued fraction,
//! their matrix form, the auxiliary tilde sequences, and checkers for the
//! approximation, bound and growth properties.

mod bounds;
mod growth;
mod witness;

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::engine::PartialQuotients;
use crate::error::{McfError, Result};

pub use bounds::{bound_checks, proximity_check, BoundOptions, BoundReport, ProximityReport};
pub use growth::{eta, growth_check, k_constant, psi, GrowthBounds, GrowthOptions, GrowthReport};
pub use witness::{approx_witnesses, cmp_scaled_gap, limit_oracles, limit_values, window, WitnessReport};

/// Rolling window of the last `m + 1` convergent columns
/// `(A^{(1)}_n, …, A^{(m)}_n, C_n)`.
#[derive(Clone, Debug)]
pub struct ConvergentState {
    m: usize,
    /// Oldest first: `window[m]` is column `n`, `window[0]` is column `n - m`.
    window: VecDeque<Vec<BigInt>>,
    n: i64,
}

impl ConvergentState {
    /// Columns `-m-1, …, -1`: `A^{(i)}_{-k} = δ_{ik}`, `C_{-m-1} = 1`,
    /// `C_{-k} = 0` otherwise. The window then holds columns `-m-1 … -1`.
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        let mut window = VecDeque::with_capacity(m + 2);
        for k in (1..=m + 1).rev() {
            let mut col = vec![BigInt::zero(); m + 1];
            if k <= m {
                col[k - 1] = BigInt::one();
            } else {
                col[m] = BigInt::one();
            }
            window.push_back(col);
        }
        ConvergentState { m, window, n: -1 }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Index of the newest column.
    pub fn index(&self) -> i64 {
        self.n
    }

    /// Column `n - back`, for `back <= m`.
    pub fn back(&self, back: usize) -> &[BigInt] {
        &self.window[self.m - back]
    }

    pub fn latest(&self) -> &[BigInt] {
        self.back(0)
    }

    /// Advances with the quotients `(a^{(1)}_{n+1}, …, a^{(m)}_{n+1})`.
    pub fn push(&mut self, q: &[BigInt]) -> &[BigInt] {
        assert_eq!(q.len(), self.m);
        let m = self.m;
        let mut next = self.window[0].clone();
        for (j, a) in q.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // term a^{(j+1)} · column (n + 1) - (j + 1) = window[m - j]
            for (x, y) in next.iter_mut().zip(&self.window[m - j]) {
                *x += a * y;
            }
        }
        self.window.pop_front();
        self.window.push_back(next);
        self.n += 1;
        self.latest()
    }
}

/// One convergent column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Column {
    pub n: usize,
    /// Numerators `A^{(1)}_n, …, A^{(m)}_n`.
    pub a: Vec<BigInt>,
    pub c: BigInt,
}

/// Streaming convergents over the complete columns of `pq`.
pub fn conv_stream(pq: &PartialQuotients) -> impl Iterator<Item = Column> + '_ {
    let mut st = ConvergentState::new(pq.m());
    (0..pq.depth()).map(move |n| {
        let col = st.push(&pq.column(n).expect("complete column"));
        let (a, c) = col.split_at(pq.m());
        Column { n, a: a.to_vec(), c: c[0].clone() }
    })
}

/// Full convergent history, including the `m + 1` initial columns, so that
/// `get(n)` works for `-m-1 <= n < depth`.
#[derive(Clone, Debug)]
pub struct ConvergentTable {
    m: usize,
    cols: Vec<Vec<BigInt>>,
}

impl ConvergentTable {
    pub fn new(pq: &PartialQuotients, depth: usize) -> Self {
        let m = pq.m();
        let mut st = ConvergentState::new(m);
        let mut cols: Vec<Vec<BigInt>> = (0..=m).rev().map(|b| st.back(b).to_vec()).collect();
        for n in 0..depth.min(pq.depth()) {
            cols.push(st.push(&pq.column(n).expect("complete column")).to_vec());
        }
        ConvergentTable { m, cols }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of non-negative indices available.
    pub fn len(&self) -> usize {
        self.cols.len() - self.m - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: i64) -> &[BigInt] {
        &self.cols[(n + self.m as i64 + 1) as usize]
    }

    /// `A^{(i)}_n` for `i` in `0..m`.
    pub fn a(&self, i: usize, n: i64) -> &BigInt {
        &self.get(n)[i]
    }

    pub fn c(&self, n: i64) -> &BigInt {
        &self.get(n)[self.m]
    }

    /// `Ã^{(i)}_n = A^{(i)}_n C_{n-1} - A^{(i)}_{n-1} C_n`.
    pub fn tilde(&self, i: usize, n: i64) -> BigInt {
        self.a(i, n) * self.c(n - 1) - self.a(i, n - 1) * self.c(n)
    }
}

/// The factor `M_n`: first column `(a^{(1)}_n, …, a^{(m)}_n, 1)`, ones on the
/// superdiagonal.
pub fn step_matrix(q: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = q.len();
    let mut mat = vec![vec![BigInt::zero(); m + 1]; m + 1];
    for i in 0..m {
        mat[i][0] = q[i].clone();
        mat[i][i + 1] = BigInt::one();
    }
    mat[m][0] = BigInt::one();
    mat
}

pub fn mat_mul(x: &[Vec<BigInt>], y: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = x.len();
    let k = y[0].len();
    let mut out = vec![vec![BigInt::zero(); k]; n];
    for i in 0..n {
        for (l, yl) in y.iter().enumerate() {
            if x[i][l].is_zero() {
                continue;
            }
            for j in 0..k {
                out[i][j] += &x[i][l] * &yl[j];
            }
        }
    }
    out
}

/// `M_0 M_1 ⋯ M_n`. Column `j` is the convergent column `n - j`.
pub fn matrix_form(pq: &PartialQuotients, n: usize) -> Result<Vec<Vec<BigInt>>> {
    if n >= pq.depth() {
        return Err(McfError::input(format!("index {n} beyond the {} available columns", pq.depth())));
    }
    let mut p = step_matrix(&pq.column(0).unwrap());
    for k in 1..=n {
        p = mat_mul(&p, &step_matrix(&pq.column(k).unwrap()));
    }
    Ok(p)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn int_det(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    let mut a: Vec<Vec<BigInt>> = mat.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Tilde values of Jacobi's algorithm at one index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Aux2 {
    pub n: i64,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub a_t: BigInt,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub b_t: BigInt,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub u_t: BigInt,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub a_tt: BigInt,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub b_tt: BigInt,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub u_tt: BigInt,
}

fn aux_at(t: &ConvergentTable, n: i64) -> Aux2 {
    let (a, b, c) = (|k| t.a(0, k), |k| t.a(1, k), |k| t.c(k));
    Aux2 {
        n,
        a_t: a(n) * c(n - 1) - c(n) * a(n - 1),
        b_t: b(n) * c(n - 1) - b(n - 1) * c(n),
        u_t: a(n) * b(n - 1) - a(n - 1) * b(n),
        a_tt: a(n) * c(n - 2) - c(n) * a(n - 2),
        b_tt: b(n) * c(n - 2) - b(n - 2) * c(n),
        u_tt: a(n) * b(n - 2) - a(n - 2) * b(n),
    }
}

/// Tilde sequences for `m = 2` at indices `0..depth`, each computed from the
/// definition and cross-checked against the three-term recursion
/// `X_n = -b_n X_{n-1} - a_{n-1} X_{n-2} + X_{n-3}` for `Ã` and `B̃`.
pub fn aux_stream(pq: &PartialQuotients) -> Result<Vec<Aux2>> {
    if pq.m() != 2 {
        return Err(McfError::input("the six tilde sequences are defined for m = 2"));
    }
    let depth = pq.depth();
    let table = ConvergentTable::new(pq, depth);
    // Ã and B̃ at n = -2, -1 (the double tildes need n >= -1)
    let t = |n: i64| (table.tilde(0, n), table.tilde(1, n));
    let mut hist: Vec<(BigInt, BigInt)> = vec![t(-2), t(-1)];
    let mut out = Vec::with_capacity(depth);
    for n in 0..depth as i64 {
        let aux = aux_at(&table, n);
        if n >= 1 {
            let a_n = &pq.seq(0)[n as usize - 1];
            let b_n = &pq.seq(1)[n as usize];
            let k = hist.len();
            let rec = |sel: fn(&(BigInt, BigInt)) -> &BigInt| {
                -(b_n * sel(&hist[k - 1])) - a_n * sel(&hist[k - 2]) + sel(&hist[k - 3])
            };
            if rec(|p| &p.0) != aux.a_t || rec(|p| &p.1) != aux.b_t {
                return Err(McfError::RecursionMismatch(n));
            }
        }
        hist.push((aux.a_t.clone(), aux.b_t.clone()));
        out.push(aux);
    }
    Ok(out)
}

/// `Ã^{(i)}_n` for every coordinate and `n` in `0..depth`, any `m`.
pub fn tilde_general(pq: &PartialQuotients) -> Vec<Vec<BigInt>> {
    let table = ConvergentTable::new(pq, pq.depth());
    (0..table.len() as i64).map(|n| (0..pq.m()).map(|i| table.tilde(i, n)).collect()).collect()
}
