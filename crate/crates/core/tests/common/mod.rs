//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use mcf_core::engine::{check_admissible, PartialQuotients};
use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random admissible quotients with `depth` columns, entries in `0..=cap`
/// apart from the first coordinate. Ties are drawn on purpose and repaired
/// until the sequence is admissible.
pub fn admissible(r: &mut impl Rng, m: usize, depth: usize, cap: i64, zero_start: bool) -> PartialQuotients {
    let mut seqs = vec![vec![BigInt::zero(); depth]; m];
    for n in 0..depth {
        if n == 0 {
            for s in seqs.iter_mut() {
                s[0] = if zero_start { BigInt::zero() } else { BigInt::from(r.gen_range(-3..=3)) };
            }
            continue;
        }
        let mut top = 0;
        for s in seqs.iter_mut().skip(1) {
            let v = r.gen_range(0..=cap);
            top = top.max(v);
            s[n] = BigInt::from(v);
        }
        let a = if r.gen_bool(0.3) { top.max(1) } else { top + r.gen_range(1..=cap.max(1)) };
        seqs[0][n] = BigInt::from(a);
    }
    loop {
        let pq = PartialQuotients::new(seqs.clone()).unwrap();
        let rep = check_admissible(&pq);
        let Some(v) = rep.first() else { return pq };
        // a violation decided at index v is repaired by making the first
        // coordinate strictly dominant in the columns leading up to it
        let lo = v.index.saturating_sub(m).max(1);
        for n in lo..=v.index {
            let top = (1..m).map(|j| seqs[j][n].clone()).max().unwrap_or_default();
            if seqs[0][n] <= top || seqs[0][n].is_zero() {
                seqs[0][n] = top + 1;
            }
        }
    }
}

/// Bounded admissible quotients for dimension 2: every entry in `0..=bound`,
/// `a_n >= 1`.
pub fn admissible_bounded(r: &mut impl Rng, depth: usize, bound: i64) -> PartialQuotients {
    loop {
        let mut a = vec![BigInt::zero()];
        let mut b = vec![BigInt::zero()];
        for _ in 1..depth {
            let x = r.gen_range(1..=bound);
            a.push(BigInt::from(x));
            b.push(BigInt::from(r.gen_range(0..=x)));
        }
        // repair ties a_n = b_n followed by b_{n+1} = 0
        for n in 1..depth - 1 {
            if a[n] == b[n] && b[n + 1].is_zero() {
                b[n + 1] = BigInt::one();
            }
        }
        let pq = PartialQuotients::new(vec![a, b]).unwrap();
        if check_admissible(&pq).is_admissible() {
            return pq;
        }
    }
}

/// Convergent columns by the textbook recurrence, written out directly:
/// `V_n = Σ_j a^{(j)}_n V_{n-j} + V_{n-m-1}`, `V_{-k} = e_k` for
/// `1 <= k <= m`, `V_{-m-1} = e_{m+1}`.
pub fn oracle_columns(pq: &PartialQuotients, depth: usize) -> Vec<Vec<BigInt>> {
    let m = pq.m();
    let mut hist: Vec<Vec<BigInt>> = (0..=m)
        .rev()
        .map(|k| {
            // V_{-(k+1)}
            let mut v = vec![BigInt::zero(); m + 1];
            v[k] = BigInt::one();
            v
        })
        .collect();
    let mut out = Vec::new();
    for n in 0..depth {
        let len = hist.len();
        let mut v = hist[len - m - 1].clone();
        for j in 0..m {
            let a = &pq.seq(j)[n];
            for (x, y) in v.iter_mut().zip(&hist[len - 1 - j]) {
                *x += a * y;
            }
        }
        hist.push(v.clone());
        out.push(v);
    }
    out
}

/// Plain `(m+1)×(m+1)` product.
pub fn mat_mul(x: &[Vec<BigInt>], y: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = x.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(BigInt::zero(), |s, k| s + &x[i][k] * &y[k][j])).collect())
        .collect()
}

/// Determinant by cofactor expansion (sizes up to 5 only).
pub fn det(x: &[Vec<BigInt>]) -> BigInt {
    let n = x.len();
    if n == 1 {
        return x[0][0].clone();
    }
    let mut s = BigInt::zero();
    for c in 0..n {
        let minor: Vec<Vec<BigInt>> =
            x[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect()).collect();
        let t = &x[0][c] * det(&minor);
        if c % 2 == 0 {
            s += t
        } else {
            s -= t
        }
    }
    s
}

/// The factor matrix at one index: first column `(a^{(1)}, …, a^{(m)}, 1)`,
/// identity shifted one place to the right.
pub fn factor(col: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = col.len();
    let mut f = vec![vec![BigInt::zero(); m + 1]; m + 1];
    for i in 0..m {
        f[i][0] = col[i].clone();
        f[i][i + 1] = BigInt::one();
    }
    f[m][0] = BigInt::one();
    f
}

/// Root of the cubic with coefficients `coeffs` (constant first) in `(lo, hi)`,
/// as `N` with the root strictly inside `(N/2^bits, (N+1)/2^bits)`.
pub fn bisect_root(coeffs: [i64; 4], lo: i64, hi: i64, bits: u32) -> BigInt {
    // sign of 2^{3k} f(n / 2^k)
    let sign = |n: &BigInt, k: u32| {
        let mut acc = BigInt::zero();
        for (i, c) in coeffs.iter().enumerate().rev() {
            acc = acc * n + (BigInt::from(*c) << (k as usize * (3 - i)));
        }
        acc.sign()
    };
    let lo_sign = sign(&BigInt::from(lo), 0);
    assert!(lo_sign != Sign::NoSign && lo_sign != sign(&BigInt::from(hi), 0), "no sign change");
    assert_eq!(hi - lo, 1, "bracket must have unit width");
    let mut n = BigInt::from(lo);
    for k in 1..=bits {
        let mid = (&n << 1usize) + 1u32;
        match sign(&mid, k) {
            Sign::NoSign => panic!("rational root"),
            s if s == lo_sign => n = mid,
            _ => n <<= 1usize,
        }
    }
    n
}

/// Powers of a root `t` of `x^3 = p x^2 + q x + r` as integer coordinates
/// `(u, v, w)` with `t^k = u t^2 + v t + w`.
pub struct CubicPowers {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    pub coords: [BigInt; 3],
}

impl CubicPowers {
    pub fn new(p: i64, q: i64, r: i64) -> Self {
        CubicPowers { p: p.into(), q: q.into(), r: r.into(), coords: [BigInt::zero(), BigInt::zero(), BigInt::one()] }
    }

    /// Multiply by `t`.
    pub fn step(&mut self) {
        let [u, v, w] = self.coords.clone();
        // t·(u t² + v t + w) = u(p t² + q t + r) + v t² + w t
        self.coords = [&u * &self.p + v, &u * &self.q + w, u * &self.r];
    }

    /// Sign of `c - t^k` given `t` in `(n/2^bits, (n+1)/2^bits)`, `t > 0`, or
    /// `None` if the enclosure is too wide to decide.
    pub fn cmp_int(&self, c: &BigInt, n: &BigInt, bits: u32) -> Option<std::cmp::Ordering> {
        let k = bits as usize;
        let ends = [n.clone(), n + 1u32];
        // 2^{2k} (u t^2 + v t + w), each term monotone in t
        let term = |coef: &BigInt, pow: u32| {
            let vals: Vec<BigInt> = ends.iter().map(|e| coef * num_traits::pow(e.clone(), pow as usize) << (k * (2 - pow as usize))).collect();
            (vals[0].clone().min(vals[1].clone()), vals[0].clone().max(vals[1].clone()))
        };
        let [u, v, w] = &self.coords;
        let (a2, b2) = term(u, 2);
        let (a1, b1) = term(v, 1);
        let w = w << (2 * k);
        let (mn, mx) = (a2 + a1 + &w, b2 + b1 + &w);
        let cs = c << (2 * k);
        if cs > mx {
            Some(std::cmp::Ordering::Greater)
        } else if cs < mn {
            Some(std::cmp::Ordering::Less)
        } else {
            None
        }
    }
}
