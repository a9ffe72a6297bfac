//! Dense univariate polynomials and truncated power series over `F_p`.
//!
//! Polynomials are coefficient vectors in increasing degree with no trailing
//! zeros (the zero polynomial is the empty vector). Series are fixed-precision
//! coefficient vectors used for local expansions at curve points.

use crate::exactla::Prime;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub prime: Prime,
    /// coefficients, c[i] is the coefficient of x^i; no trailing zeros
    pub coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(prime: Prime, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= prime.get();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { prime, coeffs }
    }

    pub fn zero(prime: Prime) -> Self {
        Poly {
            prime,
            coeffs: Vec::new(),
        }
    }

    pub fn one(prime: Prime) -> Self {
        Poly {
            prime,
            coeffs: vec![1],
        }
    }

    /// The monomial `c x^k`.
    pub fn monomial(prime: Prime, c: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c % prime.get();
        Poly::new(prime, coeffs)
    }

    /// `x - a`.
    pub fn linear_root(prime: Prime, a: u64) -> Self {
        Poly::new(prime, vec![prime.neg(a % prime.get()), 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports -1.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prime;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| p.add(self.coeff(k), other.coeff(k)))
            .collect();
        Poly::new(p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prime;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| p.sub(self.coeff(k), other.coeff(k)))
            .collect();
        Poly::new(p, coeffs)
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.prime;
        Poly::new(p, self.coeffs.iter().map(|&a| p.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prime;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(p);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = p.add(coeffs[i + j], p.mul(a, b));
            }
        }
        Poly::new(p, coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Poly::one(self.prime);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.prime;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = p.add(p.mul(acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let p = self.prime;
        if self.coeffs.len() <= 1 {
            return Poly::zero(p);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, &c)| p.mul(c, (k as u64 + 1) % p.get()))
            .collect();
        Poly::new(p, coeffs)
    }

    /// Euclidean division, returning (quotient, remainder).
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let p = self.prime;
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.degree() as usize;
        if rem.len() <= dd {
            return (Poly::zero(p), self.clone());
        }
        let lead_inv = p.inv(*d.coeffs.last().unwrap());
        let mut quo = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = p.mul(rem[k], lead_inv);
            if c == 0 {
                continue;
            }
            quo[k - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] = p.sub(rem[k - dd + j], p.mul(c, dc));
            }
        }
        (Poly::new(p, quo), Poly::new(p, rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            // monic normalization
            let inv = a.prime.inv(*a.coeffs.last().unwrap());
            a.scale(inv)
        }
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == 0
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: u64) -> usize {
        let mut f = self.clone();
        let lin = Poly::linear_root(self.prime, a);
        let mut m = 0;
        loop {
            if f.is_zero() || f.eval(a) != 0 {
                return m;
            }
            let (q, r) = f.divrem(&lin);
            debug_assert!(r.is_zero());
            f = q;
            m += 1;
        }
    }

    /// All roots in `F_p` with multiplicity, by exhaustive scan. Intended for
    /// the default desk-scale prime; refuses large fields.
    pub fn rational_roots(&self) -> Option<Vec<(u64, usize)>> {
        let p = self.prime;
        if p.get() > 1_000_000 {
            return None;
        }
        if self.is_zero() {
            return Some(Vec::new());
        }
        let mut out = Vec::new();
        let mut f = self.clone();
        for a in 0..p.get() {
            if f.degree() <= 0 {
                break;
            }
            if f.eval(a) == 0 {
                let m = f.root_multiplicity(a);
                out.push((a, m));
                for _ in 0..m {
                    let (q, _) = f.divrem(&Poly::linear_root(p, a));
                    f = q;
                }
            }
        }
        Some(out)
    }
}

/// A truncated power series `c_0 + c_1 t + ... + c_{prec-1} t^{prec-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub prime: Prime,
    pub prec: usize,
    /// exactly `prec` coefficients
    pub coeffs: Vec<u64>,
}

impl Series {
    pub fn new(prime: Prime, prec: usize, mut coeffs: Vec<u64>) -> Self {
        coeffs.resize(prec, 0);
        for c in coeffs.iter_mut() {
            *c %= prime.get();
        }
        Series {
            prime,
            prec,
            coeffs,
        }
    }

    pub fn constant(prime: Prime, c: u64, prec: usize) -> Self {
        let mut coeffs = vec![0; prec];
        if prec > 0 {
            coeffs[0] = c % prime.get();
        }
        Series {
            prime,
            prec,
            coeffs,
        }
    }

    /// The series `t`.
    pub fn parameter(prime: Prime, prec: usize) -> Self {
        let mut coeffs = vec![0; prec];
        if prec > 1 {
            coeffs[1] = 1;
        }
        Series {
            prime,
            prec,
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prime;
        let prec = self.prec.min(other.prec);
        Series::new(
            p,
            prec,
            (0..prec)
                .map(|k| p.add(self.coeffs[k], other.coeffs[k]))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prime;
        let prec = self.prec.min(other.prec);
        Series::new(
            p,
            prec,
            (0..prec)
                .map(|k| p.sub(self.coeffs[k], other.coeffs[k]))
                .collect(),
        )
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.prime;
        Series::new(
            p,
            self.prec,
            self.coeffs.iter().map(|&a| p.mul(a, c)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prime;
        let prec = self.prec.min(other.prec);
        let mut coeffs = vec![0u64; prec];
        for i in 0..prec {
            if self.coeffs[i] == 0 {
                continue;
            }
            for j in 0..prec - i {
                coeffs[i + j] = p.add(coeffs[i + j], p.mul(self.coeffs[i], other.coeffs[j]));
            }
        }
        Series::new(p, prec, coeffs)
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn inverse(&self) -> Self {
        let p = self.prime;
        assert!(self.coeffs[0] != 0, "series not invertible");
        let mut inv = vec![0u64; self.prec];
        let c0_inv = p.inv(self.coeffs[0]);
        inv[0] = c0_inv;
        for k in 1..self.prec {
            let mut acc = 0u64;
            for j in 0..k {
                acc = p.add(acc, p.mul(inv[j], self.coeffs[k - j]));
            }
            inv[k] = p.mul(p.neg(acc), c0_inv);
        }
        Series::new(p, self.prec, inv)
    }

    /// Square root with prescribed constant-term root `r0` (`r0^2 = c_0`),
    /// by Newton iteration; needs `c_0 != 0` and odd characteristic.
    pub fn sqrt_with(&self, r0: u64) -> Self {
        let p = self.prime;
        debug_assert_eq!(p.mul(r0, r0), self.coeffs[0]);
        let half = p.inv(2);
        let mut r = Series::constant(p, r0, self.prec);
        // Newton: r <- (r + f/r) / 2, doubling precision each step
        let mut prec = 1usize;
        while prec < self.prec {
            prec = (2 * prec).min(self.prec);
            let quot = self.mul(&r.inverse());
            r = r.add(&quot).scale(half);
        }
        r
    }

    /// Evaluate a polynomial at this series.
    pub fn eval_poly(poly: &Poly, at: &Series) -> Series {
        let p = at.prime;
        let mut acc = Series::constant(p, 0, at.prec);
        for &c in poly.coeffs.iter().rev() {
            acc = acc.mul(at).add(&Series::constant(p, c, at.prec));
        }
        acc
    }

    /// Order of vanishing (index of first nonzero coefficient), or `prec` if
    /// identically zero to the working precision.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|&c| c != 0)
            .unwrap_or(self.prec)
    }
}
