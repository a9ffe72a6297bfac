//! Genus-4 canonical curves as bidegree-(3,3) curves on the split quadric
//! surface, i.e. on P^1 x P^1 with affine coordinates (s, t).
//!
//! The canonical embedding into P^3 is the Segre embedding; the two rulings
//! cut the two trigonal pencils. The fiber `{t = t0}` has class A and the
//! fiber `{s = s0}` has class A', with K = A + A'. Section spaces of twisted
//! bundles are computed as bidegree forms with vanishing conditions along the
//! curve, modulo multiples of the defining equation; divisors are supported
//! on affine rational points, with whole split fibers as the building blocks
//! for pole clearing.

use super::hyperelliptic::CurveError;
use super::poly::Series;
use crate::exactla::{FieldMatrix, Prime};
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Bidegree-(3,3) coefficients: `coeffs[i][j]` multiplies `s^i t^j`.
pub type BiCubic = [[u64; 4]; 4];

/// A divisor on the genus-4 model, written as integer combinations of whole
/// ruling fibers and individual affine points.
#[derive(Debug, Clone, Default)]
pub struct G4Divisor {
    /// Multiples of fibers `{t = t0}` (class A).
    pub t_fibers: Vec<(u64, i64)>,
    /// Multiples of fibers `{s = s0}` (class A').
    pub s_fibers: Vec<(u64, i64)>,
    /// Individual affine points with multiplicity.
    pub points: Vec<((u64, u64), i64)>,
}

impl G4Divisor {
    pub fn degree(&self) -> i64 {
        3 * self.t_fibers.iter().map(|&(_, m)| m).sum::<i64>()
            + 3 * self.s_fibers.iter().map(|&(_, m)| m).sum::<i64>()
            + self.points.iter().map(|&(_, m)| m).sum::<i64>()
    }
}

#[derive(Debug, Clone)]
pub struct Genus4Curve {
    pub prime: Prime,
    pub coeffs: BiCubic,
    /// All affine rational points.
    pub points: Vec<(u64, u64)>,
    /// t-values whose fiber splits into three distinct affine rational points.
    pub split_t_fibers: Vec<u64>,
    /// s-values whose fiber splits into three distinct affine rational points.
    pub split_s_fibers: Vec<u64>,
    /// Rational points on the two infinity fibers (for the Weil count only).
    pub infinity_points: usize,
}

impl Genus4Curve {
    /// Sample a curve that is smooth at every rational point, has reduced
    /// infinity fibers, passes the Weil point-count bound (which screens out
    /// reducible candidates), and has the expected section-space ranks.
    pub fn sample(prime: Prime, rng: &mut impl Rng) -> Result<Self, CurveError> {
        'outer: for _ in 0..100 {
            let mut coeffs = [[0u64; 4]; 4];
            for row in coeffs.iter_mut() {
                for c in row.iter_mut() {
                    *c = rng.gen_range(0..prime.get());
                }
            }
            if coeffs[3][3] == 0 {
                continue;
            }
            // infinity fibers must be honest squarefree cubics
            let c_inf: Vec<u64> = (0..4).map(|j| coeffs[3][j]).collect();
            let d_inf: Vec<u64> = (0..4).map(|i| coeffs[i][3]).collect();
            let pc = super::poly::Poly::new(prime, c_inf);
            let pd = super::poly::Poly::new(prime, d_inf);
            if pc.degree() != 3 || pd.degree() != 3 || !pc.is_squarefree() || !pd.is_squarefree() {
                continue;
            }
            let infinity_points = pc.rational_roots().unwrap().len()
                + pd.rational_roots().unwrap().len();

            // scan all affine points, checking rational smoothness and
            // collecting fiber structure
            let p = prime;
            let mut points = Vec::new();
            let mut per_t: BTreeMap<u64, Vec<(u64, bool)>> = BTreeMap::new();
            let mut per_s: BTreeMap<u64, Vec<(u64, bool)>> = BTreeMap::new();
            for s in 0..p.get() {
                // E(s, t) as a cubic in t
                let spow = [1, s, p.mul(s, s), p.mul(p.mul(s, s), s)];
                let mut ct = [0u64; 4];
                for (i, &sp) in spow.iter().enumerate() {
                    for j in 0..4 {
                        ct[j] = p.add(ct[j], p.mul(coeffs[i][j], sp));
                    }
                }
                for t in 0..p.get() {
                    let tpow = [1, t, p.mul(t, t), p.mul(p.mul(t, t), t)];
                    let mut val = 0u64;
                    for j in 0..4 {
                        val = p.add(val, p.mul(ct[j], tpow[j]));
                    }
                    if val != 0 {
                        continue;
                    }
                    let es = eval_bicubic(p, &partial_s(p, &coeffs), s, t);
                    let et = eval_bicubic(p, &partial_t(p, &coeffs), s, t);
                    if es == 0 && et == 0 {
                        continue 'outer; // rational singular point
                    }
                    points.push((s, t));
                    // simple root in the t-fiber (cubic in s) iff E_s != 0
                    per_t.entry(t).or_default().push((s, es != 0));
                    per_s.entry(s).or_default().push((t, et != 0));
                }
            }
            // Weil bound with genus 4 screens out reducible candidates
            let n = (points.len() + infinity_points) as f64;
            if (n - (p.get() as f64 + 1.0)).abs() > 8.0 * (p.get() as f64).sqrt() {
                continue;
            }
            let lead_t = |t0: u64| -> u64 {
                // leading s-coefficient of the cubic E(., t0)
                let tp = [1, t0, p.mul(t0, t0), p.mul(p.mul(t0, t0), t0)];
                (0..4).fold(0, |acc, j| p.add(acc, p.mul(coeffs[3][j], tp[j])))
            };
            let lead_s = |s0: u64| -> u64 {
                let sp = [1, s0, p.mul(s0, s0), p.mul(p.mul(s0, s0), s0)];
                (0..4).fold(0, |acc, i| p.add(acc, p.mul(coeffs[i][3], sp[i])))
            };
            let split_t_fibers: Vec<u64> = per_t
                .iter()
                .filter(|(&t0, v)| v.len() == 3 && v.iter().all(|&(_, simple)| simple) && lead_t(t0) != 0)
                .map(|(&t0, _)| t0)
                .collect();
            let split_s_fibers: Vec<u64> = per_s
                .iter()
                .filter(|(&s0, v)| v.len() == 3 && v.iter().all(|&(_, simple)| simple) && lead_s(s0) != 0)
                .map(|(&s0, _)| s0)
                .collect();
            if split_t_fibers.len() < 20 || split_s_fibers.len() < 20 {
                continue;
            }
            let curve = Genus4Curve {
                prime,
                coeffs,
                points,
                split_t_fibers,
                split_s_fibers,
                infinity_points,
            };
            // canonical and bicanonical ranks: h0(O(1)) = 4, h0(O(2)) = 9
            if curve.section_rank(1) != 4 || curve.section_rank(2) != 9 {
                continue;
            }
            return Ok(curve);
        }
        Err(CurveError::SamplingExhausted("no smooth genus-4 model found".into()))
    }

    pub fn genus(&self) -> i64 {
        4
    }

    pub fn eval(&self, s: u64, t: u64) -> u64 {
        eval_bicubic(self.prime, &self.coeffs, s, t)
    }

    /// Rank of the evaluation matrix of the (q, q)-monomials at the rational
    /// points; equals h0 of the q-th power of the canonical bundle.
    pub fn section_rank(&self, q: usize) -> usize {
        let sample: Vec<(u64, u64)> = self.points.iter().copied().take(3 * (q + 1) * (q + 1)).collect();
        let rows = self.monomial_values(q, &sample);
        FieldMatrix::from_rows(self.prime, rows).transpose().rank()
    }

    /// Value vectors of the monomials s^i t^j (i, j <= q) at the points:
    /// one row per monomial, in (i, j) lex order.
    pub fn monomial_values(&self, q: usize, pts: &[(u64, u64)]) -> Vec<Vec<u64>> {
        let p = self.prime;
        let mut rows = Vec::with_capacity((q + 1) * (q + 1));
        for i in 0..=q {
            for j in 0..=q {
                rows.push(
                    pts.iter()
                        .map(|&(s, t)| p.mul(p.pow(s, i as u64), p.pow(t, j as u64)))
                        .collect(),
                );
            }
        }
        rows
    }

    /// The three points of a split fiber.
    pub fn t_fiber_points(&self, t0: u64) -> Vec<(u64, u64)> {
        self.points.iter().copied().filter(|&(_, t)| t == t0).collect()
    }

    pub fn s_fiber_points(&self, s0: u64) -> Vec<(u64, u64)> {
        self.points.iter().copied().filter(|&(s, _)| s == s0).collect()
    }

    /// Local expansion `(s(u), t(u))` at an affine point, using whichever
    /// coordinate is transverse as the parameter.
    pub fn local_expansion(&self, pt: (u64, u64), prec: usize) -> (Series, Series) {
        let p = self.prime;
        let (s0, t0) = pt;
        debug_assert_eq!(self.eval(s0, t0), 0);
        let et = eval_bicubic(p, &partial_t(p, &self.coeffs), s0, t0);
        let newton = |fixed_is_s: bool| -> (Series, Series) {
            let mut known = Series::constant(p, if fixed_is_s { s0 } else { t0 }, prec);
            if prec > 1 {
                known.coeffs[1] = 1;
            }
            let mut unknown = Series::constant(p, if fixed_is_s { t0 } else { s0 }, prec);
            let d = if fixed_is_s {
                partial_t(p, &self.coeffs)
            } else {
                partial_s(p, &self.coeffs)
            };
            let steps = (usize::BITS - prec.leading_zeros()) as usize + 2;
            for _ in 0..steps {
                let (ss, ts) = if fixed_is_s {
                    (&known, &unknown)
                } else {
                    (&unknown, &known)
                };
                let val = eval_bicubic_series(p, &self.coeffs, ss, ts);
                let dval = eval_bicubic_series(p, &d, ss, ts);
                unknown = unknown.sub(&val.mul(&dval.inverse()));
            }
            if fixed_is_s {
                (known, unknown)
            } else {
                (unknown, known)
            }
        };
        if et != 0 {
            newton(true) // parameter u = s - s0, solve t(u)
        } else {
            newton(false) // parameter u = t - t0, solve s(u)
        }
    }

    /// Dimension of `L(D)` for a divisor built from split fibers and affine
    /// points. Pole clearing uses ruling factors, so every individual point
    /// carrying a pole must sit on a split `{s = const}` fiber.
    pub fn h0(&self, d: &G4Divisor) -> Result<usize, CurveError> {
        let p = self.prime;
        // clearing denominator exponents per fiber
        let mut g_s: BTreeMap<u64, i64> = BTreeMap::new();
        let mut g_t: BTreeMap<u64, i64> = BTreeMap::new();
        for &(t0, m) in &d.t_fibers {
            if m > 0 {
                if !self.split_t_fibers.contains(&t0) {
                    return Err(CurveError::IrrationalSupport);
                }
                *g_t.entry(t0).or_insert(0) += m;
            }
        }
        for &(s0, m) in &d.s_fibers {
            if m > 0 {
                if !self.split_s_fibers.contains(&s0) {
                    return Err(CurveError::IrrationalSupport);
                }
                *g_s.entry(s0).or_insert(0) += m;
            }
        }
        for &((s0, t0), m) in &d.points {
            if m > 0 {
                // clear the pole through whichever ruling fiber splits
                if self.split_s_fibers.contains(&s0) {
                    *g_s.entry(s0).or_insert(0) += m;
                } else if self.split_t_fibers.contains(&t0) {
                    *g_t.entry(t0).or_insert(0) += m;
                } else {
                    return Err(CurveError::IrrationalSupport);
                }
            }
        }
        // balance the bidegree with fresh split fibers disjoint from the
        // existing supports, and ensure it is at least 2
        let used_t: Vec<u64> = d.t_fibers.iter().map(|&(t, _)| t).collect();
        let used_s: Vec<u64> = d.s_fibers.iter().map(|&(s, _)| s).collect();
        let pt_t: Vec<u64> = d.points.iter().map(|&((_, t), _)| t).collect();
        let pt_s: Vec<u64> = d.points.iter().map(|&((s, _), _)| s).collect();
        let mut ds: i64 = g_s.values().sum();
        let mut dt: i64 = g_t.values().sum();
        let target = ds.max(dt).max(2);
        let fresh_s: Vec<u64> = self
            .split_s_fibers
            .iter()
            .copied()
            .filter(|s0| !g_s.contains_key(s0) && !used_s.contains(s0) && !pt_s.contains(s0))
            .take((target - ds).max(0) as usize)
            .collect();
        if (fresh_s.len() as i64) < target - ds {
            return Err(CurveError::SamplingExhausted("no fresh split fiber".into()));
        }
        for s0 in fresh_s {
            g_s.insert(s0, 1);
            ds += 1;
        }
        let fresh_t: Vec<u64> = self
            .split_t_fibers
            .iter()
            .copied()
            .filter(|t0| !g_t.contains_key(t0) && !used_t.contains(t0) && !pt_t.contains(t0))
            .take((target - dt).max(0) as usize)
            .collect();
        if (fresh_t.len() as i64) < target - dt {
            return Err(CurveError::SamplingExhausted("no fresh split fiber".into()));
        }
        for t0 in fresh_t {
            g_t.insert(t0, 1);
            dt += 1;
        }
        debug_assert_eq!(ds, dt);
        let big_d = target as usize;

        // required vanishing order per affine point:
        // ord_Q(G|_C) - D_Q, over every point of every involved fiber
        let mut required: BTreeMap<(u64, u64), i64> = BTreeMap::new();
        let mut add_req = |pt: (u64, u64), v: i64| {
            *required.entry(pt).or_insert(0) += v;
        };
        for (&s0, &e) in &g_s {
            for q in self.s_fiber_points(s0) {
                add_req(q, e);
            }
        }
        for (&t0, &e) in &g_t {
            for q in self.t_fiber_points(t0) {
                add_req(q, e);
            }
        }
        for &(t0, m) in &d.t_fibers {
            for q in self.t_fiber_points(t0) {
                add_req(q, -m);
            }
            if m < 0 && self.t_fiber_points(t0).len() != 3 {
                return Err(CurveError::IrrationalSupport);
            }
        }
        for &(s0, m) in &d.s_fibers {
            for q in self.s_fiber_points(s0) {
                add_req(q, -m);
            }
            if m < 0 && self.s_fiber_points(s0).len() != 3 {
                return Err(CurveError::IrrationalSupport);
            }
        }
        for &(q, m) in &d.points {
            add_req(q, -m);
        }
        required.retain(|_, &mut v| v > 0);

        // condition matrix over the (D+1)^2 monomials
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (&q, &r) in &required {
            let prec = r as usize;
            let (ss, ts) = self.local_expansion(q, prec);
            let mut spow = vec![Series::constant(p, 1, prec)];
            let mut tpow = vec![Series::constant(p, 1, prec)];
            for k in 1..=big_d {
                let ns = spow[k - 1].mul(&ss);
                spow.push(ns);
                let nt = tpow[k - 1].mul(&ts);
                tpow.push(nt);
            }
            let mut expansions = Vec::with_capacity((big_d + 1) * (big_d + 1));
            for i in 0..=big_d {
                for j in 0..=big_d {
                    expansions.push(spow[i].mul(&tpow[j]));
                }
            }
            for k in 0..prec {
                rows.push(expansions.iter().map(|s| s.coeffs[k]).collect());
            }
        }
        let ncols = (big_d + 1) * (big_d + 1);
        let kernel_dim = if rows.is_empty() {
            ncols
        } else {
            let m = FieldMatrix::from_rows(p, rows);
            m.cols() - m.rank()
        };
        // subtract the multiples of the defining cubic, which satisfy every
        // condition identically
        let e_mult = if big_d >= 3 {
            (big_d - 2) * (big_d - 2)
        } else {
            0
        };
        Ok(kernel_dim - e_mult)
    }
}

fn eval_bicubic(p: Prime, c: &BiCubic, s: u64, t: u64) -> u64 {
    let sp = [1, s, p.mul(s, s), p.mul(p.mul(s, s), s)];
    let tp = [1, t, p.mul(t, t), p.mul(p.mul(t, t), t)];
    let mut acc = 0u64;
    for i in 0..4 {
        for j in 0..4 {
            if c[i][j] != 0 {
                acc = p.add(acc, p.mul(c[i][j], p.mul(sp[i], tp[j])));
            }
        }
    }
    acc
}

fn eval_bicubic_series(p: Prime, c: &BiCubic, ss: &Series, ts: &Series) -> Series {
    let prec = ss.prec;
    let mut spow = vec![Series::constant(p, 1, prec)];
    let mut tpow = vec![Series::constant(p, 1, prec)];
    for k in 1..4 {
        let ns = spow[k - 1].mul(ss);
        spow.push(ns);
        let nt = tpow[k - 1].mul(ts);
        tpow.push(nt);
    }
    let mut acc = Series::constant(p, 0, prec);
    for i in 0..4 {
        for j in 0..4 {
            if c[i][j] != 0 {
                acc = acc.add(&spow[i].mul(&tpow[j]).scale(c[i][j]));
            }
        }
    }
    acc
}

fn partial_s(p: Prime, c: &BiCubic) -> BiCubic {
    let mut out = [[0u64; 4]; 4];
    for i in 1..4 {
        for j in 0..4 {
            out[i - 1][j] = p.mul(c[i][j], i as u64);
        }
    }
    out
}

fn partial_t(p: Prime, c: &BiCubic) -> BiCubic {
    let mut out = [[0u64; 4]; 4];
    for i in 0..4 {
        for j in 1..4 {
            out[i][j - 1] = p.mul(c[i][j], j as u64);
        }
    }
    out
}

/// Result of the residual-cycle check on a genus-4 curve: with `A`, `A'` the
/// two trigonal pencils and `L = K - 2A = A' - A`, the class `L + x` lies in
/// `C_2 - C_1` for every sampled x (with the fiber companion as witness),
/// while `L + y` has no sections for sampled y, so `L` stays outside
/// `C_1 - C_1`.
#[derive(Debug, Clone, Serialize)]
pub struct DiffconReport {
    pub samples: usize,
    pub membership_failures: usize,
    pub nonmembership_violations: usize,
    /// h0 values observed for the mixed-pencil class K - A - A' + x + y
    /// (reported as data; this class is trivial, so sections appear exactly
    /// when x + y is special in degree 2, which never happens at genus 4).
    pub mixed_pencil_sections: Vec<usize>,
    pub degenerate_quadric: bool,
}

pub fn diffcon_g4_check(
    curve: &Genus4Curve,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<DiffconReport, CurveError> {
    let mut membership_failures = 0;
    let mut nonmembership_violations = 0;
    let mut mixed = Vec::new();
    // fixed fiber representatives for A and A'
    let t_rep = curve.split_t_fibers[0];
    let s_rep = curve.split_s_fibers[0];
    let mut tested = 0;
    for &t0 in curve.split_t_fibers.iter().skip(1) {
        if tested >= samples {
            break;
        }
        let fiber = curve.t_fiber_points(t0);
        if fiber.len() != 3 || fiber.iter().any(|&(s, _)| s == s_rep) {
            continue;
        }
        let x = fiber[0];
        let y = fiber[1];
        tested += 1;
        // (a) L + x + y' with y' the fiber companion: h0 >= 1
        let m = G4Divisor {
            t_fibers: vec![(t_rep, -1)],
            s_fibers: vec![(s_rep, 1)],
            points: vec![(x, 1), (y, 1)],
        };
        debug_assert_eq!(m.degree(), 2);
        if curve.h0(&m)? == 0 {
            membership_failures += 1;
        }
        // (b) L + x alone: no sections, for every sampled x
        let m1 = G4Divisor {
            t_fibers: vec![(t_rep, -1)],
            s_fibers: vec![(s_rep, 1)],
            points: vec![(x, 1)],
        };
        if curve.h0(&m1)? != 0 {
            nonmembership_violations += 1;
        }
        // mixed-pencil class K - A - A' + x + y ~ x + y: report its h0
        let m2 = G4Divisor {
            t_fibers: vec![],
            s_fibers: vec![],
            points: vec![(x, 1), (y, 1)],
        };
        mixed.push(curve.h0(&m2)?);
        let _ = rng;
    }
    Ok(DiffconReport {
        samples: tested,
        membership_failures,
        nonmembership_violations,
        mixed_pencil_sections: mixed,
        degenerate_quadric: false,
    })
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
    fn sampled_curve_has_canonical_ranks() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let c = Genus4Curve::sample(prime(), &mut rng).unwrap();
        assert_eq!(c.section_rank(1), 4); // h0(K) = g = 4
        assert_eq!(c.section_rank(2), 9); // h0(2K) = 3g - 3, one quadric relation
        assert_eq!(c.section_rank(3), 15); // h0(3K) = 5g - 5
        assert!(c.points.len() > 800); // Weil window around p+1
    }

    #[test]
    fn fiber_arithmetic_h0() {
        let mut rng = ChaCha20Rng::seed_from_u64(18);
        let c = Genus4Curve::sample(prime(), &mut rng).unwrap();
        // a full fiber (degree-3 pencil): h0(A) = 2
        let a = G4Divisor {
            t_fibers: vec![(c.split_t_fibers[0], 1)],
            s_fibers: vec![],
            points: vec![],
        };
        assert_eq!(c.h0(&a).unwrap(), 2);
        // canonical class A + A': h0 = 4
        let k = G4Divisor {
            t_fibers: vec![(c.split_t_fibers[0], 1)],
            s_fibers: vec![(c.split_s_fibers[0], 1)],
            points: vec![],
        };
        assert_eq!(c.h0(&k).unwrap(), 4);
        // L = A' - A: h0 = 0 (degree 0, nontrivial: the pencils differ)
        let l = G4Divisor {
            t_fibers: vec![(c.split_t_fibers[0], -1)],
            s_fibers: vec![(c.split_s_fibers[0], 1)],
            points: vec![],
        };
        assert_eq!(c.h0(&l).unwrap(), 0);
        // single point: h0 = 1 (genus > 0)
        let (s0, t0) = c
            .points
            .iter()
            .copied()
            .find(|&(s, _)| c.split_s_fibers.contains(&s))
            .unwrap();
        let pt = G4Divisor {
            t_fibers: vec![],
            s_fibers: vec![],
            points: vec![((s0, t0), 1)],
        };
        assert_eq!(c.h0(&pt).unwrap(), 1);
    }

    #[test]
    fn riemann_roch_on_fiber_combinations() {
        let mut rng = ChaCha20Rng::seed_from_u64(19);
        let c = Genus4Curve::sample(prime(), &mut rng).unwrap();
        // h0(qK) = q(2g-2) - g + 1 = 6q - 3 for q >= 2
        for q in 2..=3i64 {
            let d = G4Divisor {
                t_fibers: vec![(c.split_t_fibers[0], q)],
                s_fibers: vec![(c.split_s_fibers[0], q)],
                points: vec![],
            };
            assert_eq!(c.h0(&d).unwrap() as i64, 6 * q - 3, "q = {q}");
        }
        // 2A has h0 = 3 (the pencil's quadratic envelope on the trigonal map)
        let d = G4Divisor {
            t_fibers: vec![(c.split_t_fibers[0], 1), (c.split_t_fibers[1], 1)],
            s_fibers: vec![],
            points: vec![],
        };
        assert_eq!(c.h0(&d).unwrap(), 3);
    }

    #[test]
    fn diffcon_assertions_hold_on_samples() {
        let mut rng = ChaCha20Rng::seed_from_u64(20);
        let c = Genus4Curve::sample(prime(), &mut rng).unwrap();
        let report = diffcon_g4_check(&c, 50, &mut rng).unwrap();
        assert!(report.samples >= 50, "only {} samples", report.samples);
        assert_eq!(report.membership_failures, 0);
        assert_eq!(report.nonmembership_violations, 0);
        // the mixed-pencil class is trivial: x + y effective of degree two,
        // so one section each
        assert!(report.mixed_pencil_sections.iter().all(|&h| h == 1));
        assert!(!report.degenerate_quadric);
    }
}
