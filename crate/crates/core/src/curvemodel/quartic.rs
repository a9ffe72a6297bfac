//! Smooth plane quartics over a prime field: the desk-scale model for
//! genus 3 with maximal Clifford index.
//!
//! A quartic is stored by its 15 degree-4 monomial coefficients. Smoothness
//! is checked exhaustively over the rational points of the plane (the curve
//! is resampled when a rational singular point shows up), and all rational
//! curve points are collected during the same scan. Section spaces of
//! twisted bundles `O(n)(-Z)` are realised as spaces of degree-n forms with
//! vanishing conditions along the curve, imposed through local power-series
//! expansions.

use super::hyperelliptic::CurveError;
use super::poly::Series;
use crate::exactla::{FieldMatrix, Prime};
use rand::Rng;

/// Exponent triples of the degree-d monomials in x, y, z, lex order.
pub fn monomials(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

pub fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Evaluate the form with the given coefficients (in `monomials(d)` order).
pub fn eval_form(p: Prime, coeffs: &[u64], d: usize, pt: [u64; 3]) -> u64 {
    let mons = monomials(d);
    debug_assert_eq!(coeffs.len(), mons.len());
    let mut acc = 0u64;
    for (c, m) in coeffs.iter().zip(&mons) {
        if *c == 0 {
            continue;
        }
        let term = p.mul(
            p.mul(p.pow(pt[0], m[0] as u64), p.pow(pt[1], m[1] as u64)),
            p.pow(pt[2], m[2] as u64),
        );
        acc = p.add(acc, p.mul(*c, term));
    }
    acc
}

/// Partial derivative of a form, as coefficients of degree d-1.
fn partial(p: Prime, coeffs: &[u64], d: usize, var: usize) -> Vec<u64> {
    let mons = monomials(d);
    let lower = monomials(d - 1);
    let mut out = vec![0u64; lower.len()];
    for (c, m) in coeffs.iter().zip(&mons) {
        if *c == 0 || m[var] == 0 {
            continue;
        }
        let mut m2 = *m;
        m2[var] -= 1;
        let idx = lower.iter().position(|x| *x == m2).unwrap();
        out[idx] = p.add(out[idx], p.mul(*c, m[var] as u64 % p.get()));
    }
    out
}

/// A smooth plane quartic with its rational points.
#[derive(Debug, Clone)]
pub struct PlaneQuartic {
    pub prime: Prime,
    /// Degree-4 coefficients in `monomials(4)` order.
    pub coeffs: Vec<u64>,
    /// All rational points, as normalized projective triples.
    pub points: Vec<[u64; 3]>,
}

impl PlaneQuartic {
    /// Sample a quartic with no rational singular point; candidates failing
    /// the check are resampled, up to a fixed budget.
    pub fn sample(prime: Prime, rng: &mut impl Rng) -> Result<Self, CurveError> {
        for _ in 0..100 {
            let coeffs: Vec<u64> = (0..15).map(|_| rng.gen_range(0..prime.get())).collect();
            if let Some(points) = smoothness_scan(prime, &coeffs) {
                if points.len() >= 30 {
                    return Ok(PlaneQuartic {
                        prime,
                        coeffs,
                        points,
                    });
                }
            }
        }
        Err(CurveError::SamplingExhausted("no smooth quartic found".into()))
    }

    pub fn genus(&self) -> i64 {
        3
    }

    pub fn eval(&self, pt: [u64; 3]) -> u64 {
        eval_form(self.prime, &self.coeffs, 4, pt)
    }

    /// A random rational point in the affine chart z = 1 at which y can serve
    /// as the dependent local coordinate (F_y != 0).
    pub fn random_chart_point(&self, rng: &mut impl Rng) -> [u64; 3] {
        let p = self.prime;
        let fy = partial(p, &self.coeffs, 4, 1);
        loop {
            let pt = self.points[rng.gen_range(0..self.points.len())];
            if pt[2] == 1 && eval_form(p, &fy, 3, pt) != 0 {
                return pt;
            }
        }
    }

    /// Local expansion `(x(t), y(t))` of the curve at a chart point, with
    /// t = x - x0 and y solved by Newton from F(x, y, 1) = 0.
    pub fn local_expansion(&self, pt: [u64; 3], prec: usize) -> (Series, Series) {
        let p = self.prime;
        assert_eq!(pt[2], 1, "expansion requires the affine chart");
        let mut xs = Series::constant(p, pt[0], prec);
        if prec > 1 {
            xs.coeffs[1] = 1;
        }
        let fy = partial(p, &self.coeffs, 4, 1);
        let mut ys = Series::constant(p, pt[1], prec);
        let steps = (usize::BITS - prec.leading_zeros()) as usize + 2;
        for _ in 0..steps {
            let val = self.eval_series(&self.coeffs, 4, &xs, &ys);
            let dval = self.eval_series(&fy, 3, &xs, &ys);
            ys = ys.sub(&val.mul(&dval.inverse()));
        }
        debug_assert_eq!(
            self.eval_series(&self.coeffs, 4, &xs, &ys).valuation(),
            prec
        );
        (xs, ys)
    }

    fn eval_series(&self, coeffs: &[u64], d: usize, xs: &Series, ys: &Series) -> Series {
        let p = self.prime;
        let prec = xs.prec;
        let mons = monomials(d);
        // z = 1 in this chart
        let mut acc = Series::constant(p, 0, prec);
        let mut xpow = vec![Series::constant(p, 1, prec)];
        let mut ypow = vec![Series::constant(p, 1, prec)];
        for k in 1..=d {
            let nx = xpow[k - 1].mul(xs);
            xpow.push(nx);
            let ny = ypow[k - 1].mul(ys);
            ypow.push(ny);
        }
        for (c, m) in coeffs.iter().zip(&mons) {
            if *c == 0 {
                continue;
            }
            acc = acc.add(&xpow[m[0]].mul(&ypow[m[1]]).scale(*c));
        }
        acc
    }

    /// Order of vanishing of a degree-d form along the curve at a chart point.
    pub fn form_ord_at(&self, coeffs: &[u64], d: usize, pt: [u64; 3], bound: usize) -> usize {
        let (xs, ys) = self.local_expansion(pt, bound + 1);
        self.eval_series(coeffs, d, &xs, &ys).valuation()
    }

    /// Basis (as coefficient vectors) of degree-d forms vanishing to the
    /// prescribed orders along the curve at the given chart points.
    pub fn form_space(&self, d: usize, conditions: &[([u64; 3], usize)]) -> Vec<Vec<u64>> {
        let p = self.prime;
        let mons = monomials(d);
        let n = mons.len();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for &(pt, ord) in conditions {
            if ord == 0 {
                continue;
            }
            let (xs, ys) = self.local_expansion(pt, ord);
            let mut xpow = vec![Series::constant(p, 1, ord)];
            let mut ypow = vec![Series::constant(p, 1, ord)];
            for k in 1..=d {
                let nx = xpow[k - 1].mul(&xs);
                xpow.push(nx);
                let ny = ypow[k - 1].mul(&ys);
                ypow.push(ny);
            }
            let expansions: Vec<Series> = mons
                .iter()
                .map(|m| xpow[m[0]].mul(&ypow[m[1]]))
                .collect();
            for k in 0..ord {
                rows.push(expansions.iter().map(|s| s.coeffs[k]).collect());
            }
        }
        if rows.is_empty() {
            let mut basis = Vec::with_capacity(n);
            for i in 0..n {
                let mut v = vec![0u64; n];
                v[i] = 1;
                basis.push(v);
            }
            return basis;
        }
        FieldMatrix::from_rows(p, rows).kernel_basis()
    }

    /// The intersection divisor of a degree-d form with the curve, as
    /// `(point, multiplicity)` pairs over rational chart points; `None` when
    /// part of the intersection is irrational or in a bad chart (total
    /// multiplicity must reach 4d).
    pub fn form_curve_divisor(&self, coeffs: &[u64], d: usize) -> Option<Vec<([u64; 3], usize)>> {
        let p = self.prime;
        let fy = partial(p, &self.coeffs, 4, 1);
        let mut total = 0usize;
        let mut out = Vec::new();
        for &pt in &self.points {
            if eval_form(p, coeffs, d, pt) != 0 {
                continue;
            }
            if pt[2] != 1 || eval_form(p, &fy, 3, pt) == 0 {
                return None; // zero in an uncovered chart
            }
            let ord = self.form_ord_at(coeffs, d, pt, 4 * d + 1);
            debug_assert!(ord >= 1);
            out.push((pt, ord));
            total += ord;
        }
        if total == 4 * d {
            Some(out)
        } else {
            None
        }
    }
}

/// Exhaustive smoothness check; returns the rational points when no rational
/// singular point exists.
fn smoothness_scan(p: Prime, coeffs: &[u64]) -> Option<Vec<[u64; 3]>> {
    let fx = partial(p, coeffs, 4, 0);
    let fy = partial(p, coeffs, 4, 1);
    let fz = partial(p, coeffs, 4, 2);
    let mut points = Vec::new();
    let mut check = |pt: [u64; 3]| -> bool {
        if eval_form(p, coeffs, 4, pt) != 0 {
            return true;
        }
        if eval_form(p, &fx, 3, pt) == 0
            && eval_form(p, &fy, 3, pt) == 0
            && eval_form(p, &fz, 3, pt) == 0
        {
            return false;
        }
        points.push(pt);
        true
    };
    for x in 0..p.get() {
        for y in 0..p.get() {
            if !check([x, y, 1]) {
                return None;
            }
        }
    }
    for x in 0..p.get() {
        if !check([x, 1, 0]) {
            return None;
        }
    }
    if !check([1, 0, 0]) {
        return None;
    }
    Some(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn prime() -> Prime {
        Prime::new(1009).unwrap()
    }

    #[test]
    fn monomial_bookkeeping() {
        assert_eq!(monomials(4).len(), 15);
        assert_eq!(monomial_count(4), 15);
        assert_eq!(monomials(2).len(), 6);
    }

    #[test]
    fn fermat_type_quartic_is_smooth_with_weil_count() {
        // x^4 + y^4 + z^4 over F_1009: smooth, and the point count lies
        // within the Weil bound |N - (p+1)| <= 6 sqrt(p)
        let p = prime();
        let mons = monomials(4);
        let mut coeffs = vec![0u64; 15];
        for (i, m) in mons.iter().enumerate() {
            if m.contains(&4) {
                coeffs[i] = 1;
            }
        }
        let points = smoothness_scan(p, &coeffs).expect("fermat quartic is smooth");
        let n = points.len() as f64;
        let bound = 6.0 * (p.get() as f64).sqrt();
        assert!((n - (p.get() as f64 + 1.0)).abs() <= bound, "N = {n}");
    }

    #[test]
    fn singular_candidate_rejected() {
        // a product of four lines through the origin is singular at (0,0,1)
        let p = prime();
        let mons = monomials(4);
        let mut coeffs = vec![0u64; 15];
        // x^2 y^2 = product of coordinate lines doubled
        let idx = mons.iter().position(|m| *m == [2, 2, 0]).unwrap();
        coeffs[idx] = 1;
        assert!(smoothness_scan(p, &coeffs).is_none());
    }

    #[test]
    fn sampled_quartic_has_expected_section_dimensions() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let q = PlaneQuartic::sample(prime(), &mut rng).unwrap();
        // h0(O(1)) = 3, h0(O(2)) = 6 on the plane; conditions at k general
        // curve points drop the dimension by k
        let z1 = q.random_chart_point(&mut rng);
        let mut z2 = q.random_chart_point(&mut rng);
        while z2 == z1 {
            z2 = q.random_chart_point(&mut rng);
        }
        let conics = q.form_space(2, &[(z1, 1), (z2, 1)]);
        assert_eq!(conics.len(), 4);
        // order-2 vanishing at both points: 6 - 4 = 2
        let tangent_conics = q.form_space(2, &[(z1, 2), (z2, 2)]);
        assert_eq!(tangent_conics.len(), 2);
    }

    #[test]
    fn line_meets_quartic_in_four_points_with_multiplicity() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let q = PlaneQuartic::sample(prime(), &mut rng).unwrap();
        let mut found = 0;
        for _ in 0..40 {
            let a = q.random_chart_point(&mut rng);
            let mut b = q.random_chart_point(&mut rng);
            while b == a {
                b = q.random_chart_point(&mut rng);
            }
            // the line through a and b
            let lines = q.form_space(1, &[(a, 1), (b, 1)]);
            assert_eq!(lines.len(), 1);
            if let Some(div) = q.form_curve_divisor(&lines[0], 1) {
                let total: usize = div.iter().map(|&(_, m)| m).sum();
                assert_eq!(total, 4);
                assert!(div.iter().any(|&(pt, _)| pt == a));
                assert!(div.iter().any(|&(pt, _)| pt == b));
                found += 1;
            }
        }
        // most random secant lines split completely
        assert!(found >= 5, "only {found} split lines (expected several)");
    }
}
