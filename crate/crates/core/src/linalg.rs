//! Dense linear algebra over a [`Scalar`], plus exact integer determinants and
//! modular ranks for the combinatorial checks.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: S) {
        let k = i * self.cols + j;
        self.data[k] = self.data[k].clone() + v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        if S::EXACT {
            (from..self.rows).find(|&i| !self.get(i, col).is_zero())
        } else {
            let best = (from..self.rows).max_by(|&a, &b| {
                self.get(a, col).to_f64().abs().total_cmp(&self.get(b, col).to_f64().abs())
            })?;
            if self.get(best, col).to_f64() == 0.0 {
                None
            } else {
                Some(best)
            }
        }
    }

    /// Determinant by Gaussian elimination (first nonzero pivot when exact,
    /// partial pivoting otherwise).
    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let Some(p) = m.pivot_row(col, col) else {
                return S::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m.get(col, col).clone();
            det = det * piv.clone();
            for i in col + 1..n {
                let a = m.get(i, col).clone();
                if a.is_zero() && S::EXACT {
                    continue;
                }
                let f = a / piv.clone();
                for j in col..n {
                    let v = m.get(i, j).clone() - f.clone() * m.get(col, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Solves `self · X = rhs` for a square, nonsingular `self`; `None` if singular.
    pub fn solve(&self, rhs: &Matrix<S>) -> Option<Matrix<S>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.rows, self.rows);
        let n = self.rows;
        let k = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let p = a.pivot_row(col, col)?;
            if !S::EXACT && Scalar::is_zero(a.get(p, col)) {
                let scale = (0..n).map(|j| a.get(p, j).to_f64().abs()).fold(0.0, f64::max);
                if a.get(p, col).to_f64().abs() <= 1e-14 * scale.max(1e-300) {
                    return None;
                }
            }
            a.swap_rows(p, col);
            b.swap_rows(p, col);
            let piv = a.get(col, col).clone();
            for i in 0..n {
                if i == col {
                    continue;
                }
                let e = a.get(i, col).clone();
                if e.is_zero() && S::EXACT {
                    continue;
                }
                let f = e / piv.clone();
                for j in col..n {
                    let v = a.get(i, j).clone() - f.clone() * a.get(col, j).clone();
                    a.set(i, j, v);
                }
                for j in 0..k {
                    let v = b.get(i, j).clone() - f.clone() * b.get(col, j).clone();
                    b.set(i, j, v);
                }
            }
        }
        let mut x = Matrix::zeros(n, k);
        for i in 0..n {
            let piv = a.get(i, i).clone();
            for j in 0..k {
                x.set(i, j, b.get(i, j).clone() / piv.clone());
            }
        }
        Some(x)
    }
}

const MERSENNE61: u64 = (1 << 61) - 1;

#[inline]
fn mulmod61(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & MERSENNE61;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MERSENNE61 {
        s - MERSENNE61
    } else {
        s
    }
}

#[inline]
fn submod61(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MERSENNE61 - b
    }
}

#[inline]
fn reduce61(v: i64) -> u64 {
    let r = v.rem_euclid(MERSENNE61 as i64);
    r as u64
}

fn powmod61(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod61(acc, base);
        }
        base = mulmod61(base, base);
        e >>= 1;
    }
    acc
}

/// Determinant of a square integer matrix (row-major), computed exactly.
///
/// Fraction-free elimination in machine integers whenever the Hadamard bound
/// is below 2^62, since every intermediate is then a minor that fits in
/// `i64`; otherwise the computation falls back to big rationals.
pub fn det_i64(entries: &[i64], n: usize) -> BigInt {
    det_i64_in_place(&mut entries.to_vec(), n)
}

/// [`det_i64`] using `entries` as scratch space.
pub fn det_i64_in_place(entries: &mut [i64], n: usize) -> BigInt {
    assert_eq!(entries.len(), n * n);
    if n == 0 {
        return BigInt::from(1);
    }
    let mut bound = 1f64;
    for j in 0..n {
        let norm: f64 = (0..n).map(|i| (entries[i * n + j] as f64).powi(2)).sum::<f64>().sqrt();
        bound *= norm;
    }
    if bound == 0.0 {
        return BigInt::zero();
    }
    if bound >= (1u64 << 62) as f64 {
        let m = Matrix::from_rows(
            (0..n).map(|i| (0..n).map(|j| Rational::from_integer(entries[i * n + j])).collect()).collect(),
        );
        return m.determinant().numer();
    }
    BigInt::from(bareiss(entries, n))
}

/// Inverse of an odd number modulo 2^64.
fn inverse_mod_2_64(o: u64) -> u64 {
    let mut inv = o;
    for _ in 0..5 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(o.wrapping_mul(inv)));
    }
    inv
}

/// Bareiss elimination in place. Each division by the previous pivot is
/// exact, so it is done by shifting out its power of two and multiplying by
/// the inverse of its odd part modulo 2^64.
fn bareiss(m: &mut [i64], n: usize) -> i64 {
    let mut sign = 1i64;
    let (mut shift, mut inv) = (0u32, 1u64);
    for k in 0..n.saturating_sub(1) {
        if m[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i * n + k] != 0) else {
                return 0;
            };
            for j in 0..n {
                m.swap(p * n + j, k * n + j);
            }
            sign = -sign;
        }
        let (top, rest) = m.split_at_mut((k + 1) * n);
        let pivot_row = &top[k * n + k..];
        let piv = pivot_row[0] as i128;
        for row in rest.chunks_exact_mut(n) {
            let row = &mut row[k..];
            let a = row[0] as i128;
            for (x, &p) in row[1..].iter_mut().zip(&pivot_row[1..]) {
                let v = piv * *x as i128 - a * p as i128;
                *x = ((v >> shift) as u64).wrapping_mul(inv) as i64;
            }
        }
        let p = m[k * n + k];
        shift = p.trailing_zeros();
        inv = inverse_mod_2_64((p >> shift) as u64);
    }
    sign * m[n * n - 1]
}

/// Rank of a matrix with small integer entries, modulo the prime 2^61−1.
///
/// The modular rank never exceeds the rational rank and agrees with it unless
/// the prime divides every maximal nonvanishing minor.
pub fn rank_mod61(rows: &[Vec<i64>], cols: usize) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&v| reduce61(v)).collect()).collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = powmod61(m[rank][col], MERSENNE61 - 2);
        for j in col..cols {
            m[rank][j] = mulmod61(m[rank][j], inv);
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for j in col..cols {
                row[j] = submod61(row[j], mulmod61(f, pivot_row[j]));
            }
        }
        rank += 1;
    }
    rank
}

/// Converts a small exact integer to `i64`, if it fits.
pub fn big_to_i64(b: &BigInt) -> Option<i64> {
    b.to_i64()
}
