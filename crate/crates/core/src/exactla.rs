//! Exact linear algebra over prime fields, plus arbitrary-precision
//! integer/rational helpers.
//!
//! Matrices are stored sparsely row by row; Gaussian elimination starts on the
//! sparse representation and switches to a dense one once fill-in exceeds 30%.
//! Pivoting is deterministic (first row with a nonzero entry in column order)
//! so that ranks, kernels and everything built on them are reproducible.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational numbers used for all symbolic coefficients.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact binomial coefficient; zero whenever `k < 0`, `n < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactlaError {
    #[error("{0} is not prime or lies outside [3, 2^31)")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A verified odd prime `3 <= p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, ExactlaError> {
        if !(3..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(ExactlaError::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.0), "inverse of zero");
        self.pow(a, self.0 - 2)
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn reduce(self, a: i64) -> u64 {
        let p = self.0 as i64;
        (((a % p) + p) % p) as u64
    }

    /// Legendre symbol test: is `a` a nonzero quadratic residue?
    pub fn is_square(self, a: u64) -> bool {
        a != 0 && self.pow(a, (self.0 - 1) / 2) == 1
    }

    /// A square root of a residue, by exhaustive-free Tonelli–Shanks.
    pub fn sqrt(self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let p = self.0;
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        // Tonelli–Shanks for p = 1 mod 4.
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.is_square(z) {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A matrix over `F_p`, stored sparsely by row. Dimensions are fixed at
/// construction; entries are always reduced mod p.
#[derive(Debug, Clone)]
pub struct FieldMatrix {
    prime: Prime,
    rows: usize,
    cols: usize,
    /// Per row, the nonzero entries as `(col, value)` sorted by column.
    data: Vec<Vec<(u32, u64)>>,
}

impl FieldMatrix {
    pub fn zero(prime: Prime, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            prime,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        let mut m = Self::zero(prime, n, n);
        for i in 0..n {
            m.data[i].push((i as u32, 1));
        }
        m
    }

    /// Build from dense rows; entries are reduced mod p.
    pub fn from_rows(prime: Prime, rows: Vec<Vec<u64>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows);
        for r in &rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            let mut s = Vec::new();
            for (j, &v) in r.iter().enumerate() {
                let v = v % prime.get();
                if v != 0 {
                    s.push((j as u32, v));
                }
            }
            data.push(s);
        }
        FieldMatrix {
            prime,
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    /// Build from (row, col, value) triplets; repeated positions accumulate.
    pub fn from_triplets(
        prime: Prime,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Self {
        let mut m = Self::zero(prime, rows, cols);
        let mut buckets: Vec<Vec<(u32, u64)>> = vec![Vec::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet out of bounds");
            let v = v % prime.get();
            if v != 0 {
                buckets[i].push((j as u32, v));
            }
        }
        for (i, mut b) in buckets.into_iter().enumerate() {
            b.sort_by_key(|e| e.0);
            let mut merged: Vec<(u32, u64)> = Vec::with_capacity(b.len());
            for (j, v) in b {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 = prime.add(last.1, v),
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            m.data[i] = merged;
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i]
            .binary_search_by_key(&(j as u32), |e| e.0)
            .map(|k| self.data[i][k].1)
            .unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.prime, self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for &(j, v) in row {
                t.data[j as usize].push((i as u32, v));
            }
        }
        // rows were visited in order, so each transposed row is sorted
        t
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, ExactlaError> {
        if self.cols != rhs.rows {
            return Err(ExactlaError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.prime;
        let mut out = Self::zero(p, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for &(k, v) in &self.data[i] {
                for &(j, w) in &rhs.data[k as usize] {
                    let j = j as usize;
                    acc[j] = p.add(acc[j], p.mul(v, w));
                }
            }
            out.data[i] = acc
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(j, &v)| (j as u32, v))
                .collect();
        }
        Ok(out)
    }

    /// Apply the matrix to a dense vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let p = self.prime;
        self.data
            .iter()
            .map(|row| {
                let mut acc = 0u64;
                for &(j, w) in row {
                    acc = p.add(acc, p.mul(w, v[j as usize]));
                }
                acc
            })
            .collect()
    }

    /// Row rank, by deterministic Gaussian elimination.
    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// A basis of the right kernel; every vector `v` satisfies `m v = 0` and
    /// the basis has size `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let p = self.prime;
        let ech = self.echelon();
        // Back-substitute to reduced echelon form.
        let mut rows = ech.rows;
        let pivots = ech.pivots;
        for k in (0..pivots.len()).rev() {
            let (_, pc) = pivots[k];
            // normalize pivot row
            let inv = p.inv(rows[k].iter().find(|e| e.0 == pc as u32).unwrap().1);
            if inv != 1 {
                for e in rows[k].iter_mut() {
                    e.1 = p.mul(e.1, inv);
                }
            }
            let pivot_row = rows[k].clone();
            for r in rows.iter_mut().take(k) {
                let c = r
                    .binary_search_by_key(&(pc as u32), |e| e.0)
                    .map(|idx| r[idx].1)
                    .unwrap_or(0);
                if c != 0 {
                    *r = sparse_axpy(p, r, &pivot_row, p.neg(c));
                }
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let is_pivot = {
            let mut v = vec![false; self.cols];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (k, &pc) in pivot_cols.iter().enumerate() {
                let c = rows[k]
                    .binary_search_by_key(&(free as u32), |e| e.0)
                    .map(|idx| rows[k][idx].1)
                    .unwrap_or(0);
                v[pc] = p.neg(c);
            }
            basis.push(v);
        }
        basis
    }

    /// Forward elimination to row echelon form. Works on the sparse rows and
    /// densifies once fill-in crosses 30% of the matrix area.
    fn echelon(&self) -> Echelon {
        let p = self.prime;
        let mut rows: Vec<Vec<(u32, u64)>> =
            self.data.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut done: Vec<Vec<(u32, u64)>> = Vec::new();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let area = (self.rows.max(1)) * (self.cols.max(1));
        let mut dense: Option<Vec<Vec<u64>>> = None;

        for col in 0..self.cols {
            if let Some(d) = dense.as_mut() {
                // dense path
                let pos = d.iter().position(|r| r[col] != 0);
                let Some(pos) = pos else { continue };
                let pivot_row = d.swap_remove(pos);
                let pv_inv = p.inv(pivot_row[col]);
                for r in d.iter_mut() {
                    if r[col] != 0 {
                        let factor = p.mul(r[col], pv_inv);
                        for j in col..self.cols {
                            if pivot_row[j] != 0 {
                                r[j] = p.sub(r[j], p.mul(factor, pivot_row[j]));
                            }
                        }
                    }
                }
                d.retain(|r| r.iter().any(|&x| x != 0));
                done.push(
                    pivot_row
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| v != 0)
                        .map(|(j, &v)| (j as u32, v))
                        .collect(),
                );
                pivots.push((done.len() - 1, col));
                continue;
            }
            // sparse path: first row (in current order) whose leading entry is col
            let pos = rows.iter().position(|r| r[0].0 as usize == col);
            let Some(pos) = pos else { continue };
            let pivot_row = rows.swap_remove(pos);
            let pv = pivot_row[0].1;
            let pv_inv = p.inv(pv);
            let mut fill = 0usize;
            for r in rows.iter_mut() {
                if r[0].0 as usize == col {
                    let factor = p.mul(r[0].1, pv_inv);
                    *r = sparse_axpy(p, r, &pivot_row, p.neg(factor));
                }
                fill += r.len();
            }
            rows.retain(|r| !r.is_empty());
            done.push(pivot_row);
            pivots.push((done.len() - 1, col));
            if fill * 10 > area * 3 {
                // fill-in exceeded 30%: densify the remaining rows
                let mut d = Vec::with_capacity(rows.len());
                for r in rows.drain(..) {
                    let mut v = vec![0u64; self.cols];
                    for (j, x) in r {
                        v[j as usize] = x;
                    }
                    d.push(v);
                }
                dense = Some(d);
            }
        }
        Echelon { rows: done, pivots }
    }
}

struct Echelon {
    /// Echelon rows in pivot order (sparse, sorted by column).
    rows: Vec<Vec<(u32, u64)>>,
    /// (index into `rows`, pivot column), in increasing column order.
    pivots: Vec<(usize, usize)>,
}

/// r + c * s for sparse rows sorted by column.
fn sparse_axpy(p: Prime, r: &[(u32, u64)], s: &[(u32, u64)], c: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(r.len() + s.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < s.len() {
        if j >= s.len() || (i < r.len() && r[i].0 < s[j].0) {
            out.push(r[i]);
            i += 1;
        } else if i >= r.len() || s[j].0 < r[i].0 {
            let v = p.mul(c, s[j].1);
            if v != 0 {
                out.push((s[j].0, v));
            }
            j += 1;
        } else {
            let v = p.add(r[i].1, p.mul(c, s[j].1));
            if v != 0 {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn p1009() -> Prime {
        Prime::new(1009).unwrap()
    }

    fn random_matrix(p: Prime, rows: usize, cols: usize, rng: &mut ChaCha20Rng) -> FieldMatrix {
        FieldMatrix::from_rows(
            p,
            (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(0..p.get())).collect())
                .collect(),
        )
    }

    /// Plain dense row reduction, kept separate from the library path so it
    /// can serve as an oracle.
    fn dense_rank_oracle(p: Prime, mut m: Vec<Vec<u64>>) -> usize {
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut rank = 0;
        for col in 0..cols {
            let Some(pos) = (rank..rows).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(rank, pos);
            let inv = p.inv(m[rank][col]);
            for i in 0..rows {
                if i != rank && m[i][col] != 0 {
                    let f = p.mul(m[i][col], inv);
                    for j in 0..cols {
                        let s = p.mul(f, m[rank][j]);
                        m[i][j] = p.sub(m[i][j], s);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(1009).is_ok());
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(1 << 31).is_err());
    }

    #[test]
    fn sqrt_roundtrip() {
        let p = p1009();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = rng.gen_range(1..p.get());
            let sq = p.mul(a, a);
            let r = p.sqrt(sq).unwrap();
            assert_eq!(p.mul(r, r), sq);
        }
        // p = 13 hits the Tonelli-Shanks branch (13 = 1 mod 4)
        let p13 = Prime::new(13).unwrap();
        for a in 1..13 {
            let sq = p13.mul(a, a);
            let r = p13.sqrt(sq).unwrap();
            assert_eq!(p13.mul(r, r), sq);
        }
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(FieldMatrix::identity(p5(), 3).rank(), 3);
        assert_eq!(FieldMatrix::zero(p5(), 4, 7).rank(), 0);
    }

    #[test]
    fn rank_of_product_bounded_by_inner_dimension() {
        // A (50x20) and B (20x50) with full-rank factors: rank(AB) = 20.
        let p = p1009();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let (a, b) = loop {
            let a = random_matrix(p, 50, 20, &mut rng);
            let b = random_matrix(p, 20, 50, &mut rng);
            let a_dense: Vec<Vec<u64>> =
                (0..50).map(|i| (0..20).map(|j| a.get(i, j)).collect()).collect();
            let b_dense: Vec<Vec<u64>> =
                (0..20).map(|i| (0..50).map(|j| b.get(i, j)).collect()).collect();
            if dense_rank_oracle(p, a_dense) == 20 && dense_rank_oracle(p, b_dense) == 20 {
                break (a, b);
            }
        };
        assert_eq!(a.matmul(&b).unwrap().rank(), 20);
    }

    #[test]
    fn kernel_of_row_vector() {
        let p = p5();
        let m = FieldMatrix::from_rows(p, vec![vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // kernel vector is proportional to (1, 4)
        let v = &k[0];
        assert_eq!(p.mul(v[0], 4), p.mul(v[1], 1));
        assert!(m.apply(v).iter().all(|&x| x == 0));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(FieldMatrix::identity(p5(), 4).kernel_basis().is_empty());
    }

    #[test]
    fn conic_through_five_points_has_one_equation() {
        // Degree-2 monomials in (x, y, z) evaluated at 5 points of the conic
        // zy = x^2: the kernel is 1-dimensional, spanned by the conic itself.
        let p = p1009();
        let monomials = |x: u64, y: u64, z: u64| -> Vec<u64> {
            vec![
                p.mul(x, x),
                p.mul(x, y),
                p.mul(x, z),
                p.mul(y, y),
                p.mul(y, z),
                p.mul(z, z),
            ]
        };
        let rows: Vec<Vec<u64>> = [2u64, 3, 5, 7, 11]
            .iter()
            .map(|&t| monomials(t, p.mul(t, t), 1))
            .collect();
        let m = FieldMatrix::from_rows(p, rows);
        assert_eq!(m.rank(), 5);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // the kernel vector is proportional to x^2 - yz
        let v = &k[0];
        assert_eq!(v[1], 0);
        assert_eq!(v[2], 0);
        assert_eq!(v[3], 0);
        assert_eq!(v[5], 0);
        assert_eq!(v[0], p.neg(v[4]));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(10, 4), BigInt::from(210));
        assert_eq!(binomial(10, 3), BigInt::from(120)); // (2i+4 choose p+1) at i=3, p=2
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(3, 7), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn rank_matches_dense_oracle_and_transpose() {
        let p = p1009();
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        for _ in 0..25 {
            let rows = rng.gen_range(1..12);
            let cols = rng.gen_range(1..12);
            let m = random_matrix(p, rows, cols, &mut rng);
            let dense: Vec<Vec<u64>> = (0..rows)
                .map(|i| (0..cols).map(|j| m.get(i, j)).collect())
                .collect();
            let r = m.rank();
            assert_eq!(r, dense_rank_oracle(p, dense));
            assert_eq!(r, m.transpose().rank());
            assert_eq!(cols, r + m.kernel_basis().len());
        }
    }

    #[test]
    fn kernel_vectors_annihilated() {
        let p = p1009();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..20 {
            let m = random_matrix(p, rng.gen_range(1..10), rng.gen_range(1..14), &mut rng);
            for v in m.kernel_basis() {
                assert!(m.apply(&v).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn sparse_dense_fallback_agrees() {
        // A structured sparse matrix whose elimination densifies.
        let p = p1009();
        let n = 60;
        let mut triplets = Vec::new();
        for i in 0..n {
            triplets.push((i, i, 1u64));
            triplets.push((i, (i * 7 + 1) % n, 3));
            triplets.push((i, (i * 13 + 5) % n, 9));
        }
        let m = FieldMatrix::from_triplets(p, n, n, triplets);
        let dense: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
        assert_eq!(m.rank(), dense_rank_oracle(p, dense));
    }

    proptest! {
        #[test]
        fn rank_invariant_under_row_and_col_scaling(seed in 0u64..1000) {
            let p = p1009();
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let rows = rng.gen_range(2..9);
            let cols = rng.gen_range(2..9);
            let m = random_matrix(p, rows, cols, &mut rng);
            // random invertible diagonal scalings and a row swap preserve rank
            let mut scaled: Vec<Vec<u64>> = (0..rows)
                .map(|i| {
                    let c = rng.gen_range(1..p.get());
                    (0..cols).map(|j| p.mul(c, m.get(i, j))).collect()
                })
                .collect();
            scaled.swap(0, rows - 1);
            let m2 = FieldMatrix::from_rows(p, scaled);
            prop_assert_eq!(m.rank(), m2.rank());
        }
    }
}
