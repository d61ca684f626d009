//! Exact integer linear algebra: determinants, gcd, Hermite and Smith normal
//! forms with unimodular transformation witnesses.
//!
//! The Hermite convention is frozen as: left action (U·A = H), H
//! lower-triangular with positive pivots, and every entry below a pivot
//! reduced into [0, pivot). A single frozen convention keeps the canonical
//! forms built on top of it deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Dense row-major matrix over arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be positive");
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        assert!(cols > 0 && rows.iter().all(|r| r.len() == cols));
        IntMatrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flat_map(|r| r.iter().cloned()).collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let owned: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        IntMatrix::from_rows(&owned)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[target] += c * row[source]
    pub fn add_multiple_of_row(&mut self, target: usize, source: usize, c: &BigInt) {
        assert_ne!(target, source);
        for j in 0..self.cols {
            let delta = c * self.get(source, j);
            let v = self.get(target, j) + delta;
            self.set(target, j, v);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col[target] += c * col[source]
    fn add_multiple_of_col(&mut self, target: usize, source: usize, c: &BigInt) {
        assert_ne!(target, source);
        for i in 0..self.rows {
            let delta = c * self.get(i, source);
            let v = self.get(i, target) + delta;
            self.set(i, target, v);
        }
    }

    /// Both row and column order reversed (conjugation by the exchange
    /// permutation on each side).
    fn reversed(&self) -> Self {
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(self.rows - 1 - i, self.cols - 1 - j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, Error> {
        if self.rows != self.cols {
            return Err(Error::NonSquareMatrix {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.entries.clone();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot_row = (k..n).find(|&r| !m[r * n + k].is_zero());
            let p = match pivot_row {
                Some(p) => p,
                None => return Ok(BigInt::zero()),
            };
            if p != k {
                for j in 0..n {
                    m.swap(p * n + j, k * n + j);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                    m[i * n + j] = t / &prev;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = m[k * n + k].clone();
        }
        let d = m[(n - 1) * n + (n - 1)].clone();
        Ok(if negate { -d } else { d })
    }

    /// Adjugate matrix: adj(A) · A = det(A) · I.
    pub fn adjugate(&self) -> Result<IntMatrix, Error> {
        if self.rows != self.cols {
            return Err(Error::NonSquareMatrix {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 1 {
            return Ok(IntMatrix::identity(1));
        }
        let mut adj = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor_matrix(i, j).det()?;
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                adj.set(j, i, BigInt::from(sign) * minor);
            }
        }
        Ok(adj)
    }

    fn minor_matrix(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let mut rows = Vec::with_capacity(self.rows - 1);
        for i in 0..self.rows {
            if i == skip_row {
                continue;
            }
            let mut row = Vec::with_capacity(self.cols - 1);
            for j in 0..self.cols {
                if j == skip_col {
                    continue;
                }
                row.push(self.get(i, j).clone());
            }
            rows.push(row);
        }
        IntMatrix::from_rows(&rows)
    }

    /// Exact inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, Error> {
        let d = self.det()?;
        if !d.abs().is_one() {
            return Err(Error::NonUnimodular { det: d });
        }
        let mut adj = self.adjugate()?;
        if d < BigInt::zero() {
            for e in adj.entries.iter_mut() {
                *e = -std::mem::take(e);
            }
        }
        Ok(adj)
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), Ok(d) if d.abs().is_one())
    }
}

/// Hermite normal form with its left unimodular witness: U·A = H.
#[derive(Debug, Clone)]
pub struct HNFResult {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

/// Row-echelon Hermite form with pivots positive and entries *above* each
/// pivot reduced into [0, pivot). Internal building block; the public
/// convention is the reversed (lower-triangular) one.
fn hnf_upper(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        // Euclidean elimination below the pivot slot.
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if !h.get(i, c).is_zero()
                    && best.map_or(true, |b| h.get(i, c).abs() < h.get(b, c).abs())
                {
                    best = Some(i);
                }
            }
            let p = match best {
                Some(p) => p,
                None => break,
            };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                if !q.is_zero() {
                    let neg_q = -q;
                    h.add_multiple_of_row(i, r, &neg_q);
                    u.add_multiple_of_row(i, r, &neg_q);
                }
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h.get(i, c).div_floor(h.get(r, c));
            if !q.is_zero() {
                let neg_q = -q;
                h.add_multiple_of_row(i, r, &neg_q);
                u.add_multiple_of_row(i, r, &neg_q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Left Hermite normal form in the frozen convention: U·A = H with H
/// lower-triangular (pivots run up the anti-diagonal of the echelon form),
/// positive pivots, below-pivot entries reduced into [0, pivot).
///
/// Computed by reversing rows and columns, running the classical upper
/// echelon form, and reversing back: if U'·(JAJ') = H' then (JU'J)·A = JH'J'.
pub fn hnf_left(a: &IntMatrix) -> HNFResult {
    let flipped = a.reversed();
    let (hf, uf) = hnf_upper(&flipped);
    HNFResult {
        h: hf.reversed(),
        u: uf.reversed(),
    }
}

/// Smith normal form with witnesses: U·A·V = D, diagonal, d₁ | d₂ | …,
/// all entries nonnegative.
#[derive(Debug, Clone)]
pub struct SNFResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SNFResult {
    /// Diagonal entries, in divisibility order (trailing zeros included).
    pub fn divisors(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }
}

pub fn snf(a: &IntMatrix) -> SNFResult {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let k = m.min(n);
    for t in 0..k {
        'pivot: loop {
            // Move a minimal-magnitude nonzero entry of the trailing block
            // to position (t,t).
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d.get(i, j).is_zero()
                        && best.map_or(true, |(bi, bj)| d.get(i, j).abs() < d.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match best {
                Some(p) => p,
                None => break 'pivot, // trailing block is zero: done
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                if !q.is_zero() {
                    let neg_q = -q;
                    d.add_multiple_of_row(i, t, &neg_q);
                    u.add_multiple_of_row(i, t, &neg_q);
                }
                if !d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                if !q.is_zero() {
                    let neg_q = -q;
                    d.add_multiple_of_col(j, t, &neg_q);
                    v.add_multiple_of_col(j, t, &neg_q);
                }
                if !d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Row and column are clear; enforce divisibility of the rest.
            for i in t + 1..m {
                for j in t + 1..n {
                    if !d.get(i, j).mod_floor(d.get(t, t)).is_zero() {
                        let one = BigInt::one();
                        d.add_multiple_of_row(t, i, &one);
                        u.add_multiple_of_row(t, i, &one);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SNFResult { d, u, v }
}

/// gcd of absolute values; gcd_all of an all-zero sequence is 0.
pub fn gcd_all<'a, I>(xs: I) -> Result<BigInt, Error>
where
    I: IntoIterator<Item = &'a BigInt>,
{
    let mut acc: Option<BigInt> = None;
    for x in xs {
        acc = Some(match acc {
            None => x.abs(),
            Some(a) => a.gcd(x),
        });
    }
    acc.ok_or(Error::EmptyInput)
}
