//! Hyperelliptic curves `y^2 = f(x)` over a prime field, with exact divisor
//! arithmetic and Riemann-Roch section bases.
//!
//! The working model is the odd-degree one (`deg f = 2g+1`), which has a
//! single rational point at infinity where the pole orders of `x^i` (even)
//! and `x^j y` (odd) never collide. Sections of `L(D)` are computed by
//! clearing affine poles with a polynomial `h(x)`, restricting the pole order
//! at infinity through the ambient monomial basis, and imposing vanishing
//! conditions at affine places via local power-series expansions; the kernel
//! of the resulting condition matrix is the section space.

use super::poly::{Poly, Series};
use crate::exactla::{FieldMatrix, Prime};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("defining polynomial must be squarefree of degree >= 3, got degree {0}")]
    BadModel(i64),
    #[error("operation requires the odd-degree model")]
    OddModelRequired,
    #[error("place does not lie on the curve: {0}")]
    PlaceOffCurve(String),
    #[error("divisor degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: i64, got: i64 },
    #[error("{0}")]
    BadArgument(String),
    #[error("class is not effective")]
    NotEffective,
    #[error("line bundle is special (h^1 != 0)")]
    SpecialBundle,
    #[error("support leaves the rational points of the curve")]
    IrrationalSupport,
    #[error("sampling budget exhausted: {0}")]
    SamplingExhausted(String),
}

/// A rational place of the function field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    /// Affine non-Weierstrass point `(x0, y0)` with `y0 != 0`.
    Affine { x: u64, y: u64 },
    /// Affine Weierstrass point `(x0, 0)`.
    Weierstrass { x: u64 },
    /// Point at infinity (index 0 in the odd-degree model).
    Infinity { index: u8 },
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Affine { x, y } => write!(f, "({x},{y})"),
            Place::Weierstrass { x } => write!(f, "w({x})"),
            Place::Infinity { index } => write!(f, "inf{index}"),
        }
    }
}

impl Place {
    /// Image under the hyperelliptic involution.
    pub fn conjugate(self, prime: Prime) -> Place {
        match self {
            Place::Affine { x, y } => Place::Affine {
                x,
                y: prime.neg(y),
            },
            other => other,
        }
    }
}

/// A divisor with finite support on rational places.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    pub support: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor::default()
    }

    pub fn of(place: Place, mult: i64) -> Self {
        let mut d = Divisor::zero();
        d.add_place(place, mult);
        d
    }

    pub fn add_place(&mut self, place: Place, mult: i64) {
        let entry = self.support.entry(place).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.support.remove(&place);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&pl, &m) in &other.support {
            out.add_place(pl, m);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Divisor::zero();
        }
        Divisor {
            support: self.support.iter().map(|(&pl, &m)| (pl, m * c)).collect(),
        }
    }

    pub fn degree(&self) -> i64 {
        self.support.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.support.values().all(|&m| m >= 0)
    }

    pub fn conjugate(&self, prime: Prime) -> Self {
        Divisor {
            support: self
                .support
                .iter()
                .map(|(&pl, &m)| (pl.conjugate(prime), m))
                .collect(),
        }
    }

    /// The first `n` points (with multiplicity, in place order) of an
    /// effective divisor.
    pub fn leading_part(&self, n: i64) -> Divisor {
        let mut out = Divisor::zero();
        let mut left = n;
        for (&pl, &m) in &self.support {
            if left == 0 {
                break;
            }
            let take = m.min(left);
            out.add_place(pl, take);
            left -= take;
        }
        out
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (pl, m) in &self.support {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *m == 1 {
                write!(f, "{pl}")?;
            } else {
                write!(f, "{m}.{pl}")?;
            }
        }
        Ok(())
    }
}

/// A basis of a Riemann-Roch space: functions `(a_k(x) + b_k(x) y) / den(x)`.
#[derive(Debug, Clone)]
pub struct RRBasis {
    pub functions: Vec<(Poly, Poly)>,
    pub den: Poly,
}

impl RRBasis {
    pub fn dim(&self) -> usize {
        self.functions.len()
    }
}

/// `y^2 = f(x)` over `F_p` with `f` squarefree of degree `2g+1` or `2g+2`.
#[derive(Debug, Clone)]
pub struct HyperellipticCurve {
    pub prime: Prime,
    pub f: Poly,
    pub genus: i64,
    /// Rational roots of f, in increasing order: the affine Weierstrass x's.
    pub weierstrass_x: Vec<u64>,
}

impl HyperellipticCurve {
    pub fn new(prime: Prime, f: Poly) -> Result<Self, CurveError> {
        let deg = f.degree();
        if deg < 3 || !f.is_squarefree() {
            return Err(CurveError::BadModel(deg));
        }
        let genus = (deg - 1) / 2;
        let weierstrass_x = f
            .rational_roots()
            .ok_or_else(|| CurveError::BadArgument("prime too large for root scan".into()))?
            .into_iter()
            .map(|(r, _)| r)
            .collect();
        Ok(HyperellipticCurve {
            prime,
            f,
            genus,
            weierstrass_x,
        })
    }

    /// Monic split model: `f = (x - r_1)...(x - r_{2g+1})` with distinct
    /// random roots, so every Weierstrass point is rational.
    pub fn split_model(prime: Prime, genus: i64, rng: &mut impl Rng) -> Result<Self, CurveError> {
        let need = (2 * genus + 1) as usize;
        if (need as u64) > prime.get() {
            return Err(CurveError::SamplingExhausted("field too small".into()));
        }
        let mut roots = Vec::with_capacity(need);
        while roots.len() < need {
            let r = rng.gen_range(0..prime.get());
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let mut f = Poly::one(prime);
        for r in roots {
            f = f.mul(&Poly::linear_root(prime, r));
        }
        HyperellipticCurve::new(prime, f)
    }

    pub fn is_odd_model(&self) -> bool {
        self.f.degree() % 2 == 1
    }

    fn require_odd(&self) -> Result<(), CurveError> {
        if self.is_odd_model() {
            Ok(())
        } else {
            Err(CurveError::OddModelRequired)
        }
    }

    pub fn infinity(&self) -> Place {
        Place::Infinity { index: 0 }
    }

    /// The hyperelliptic pencil class, `2 * infinity` in the odd model.
    pub fn pencil(&self) -> Divisor {
        Divisor::of(self.infinity(), 2)
    }

    /// Canonical class `(2g-2) * infinity = (g-1) A`.
    pub fn canonical(&self) -> Divisor {
        Divisor::of(self.infinity(), 2 * self.genus - 2)
    }

    pub fn weierstrass_place(&self, idx: usize) -> Place {
        Place::Weierstrass {
            x: self.weierstrass_x[idx],
        }
    }

    /// Check a place lies on this curve.
    pub fn validate_place(&self, place: Place) -> Result<(), CurveError> {
        let p = self.prime;
        let ok = match place {
            Place::Affine { x, y } => y != 0 && p.mul(y, y) == self.f.eval(x),
            Place::Weierstrass { x } => self.f.eval(x) == 0,
            Place::Infinity { index } => index == 0 && self.is_odd_model(),
        };
        if ok {
            Ok(())
        } else {
            Err(CurveError::PlaceOffCurve(place.to_string()))
        }
    }

    pub fn validate_divisor(&self, d: &Divisor) -> Result<(), CurveError> {
        for &pl in d.support.keys() {
            self.validate_place(pl)?;
        }
        Ok(())
    }

    /// All affine rational places plus infinity.
    pub fn rational_places(&self) -> Vec<Place> {
        let p = self.prime;
        let mut out = Vec::new();
        for x in 0..p.get() {
            let fx = self.f.eval(x);
            if fx == 0 {
                out.push(Place::Weierstrass { x });
            } else if let Some(y) = p.sqrt(fx) {
                out.push(Place::Affine { x, y });
                out.push(Place::Affine { x, y: p.neg(y) });
            }
        }
        if self.is_odd_model() {
            out.push(self.infinity());
        }
        out
    }

    /// A uniformly random affine non-Weierstrass place.
    pub fn random_affine_place(&self, rng: &mut impl Rng) -> Place {
        let p = self.prime;
        loop {
            let x = rng.gen_range(0..p.get());
            let fx = self.f.eval(x);
            if fx == 0 {
                continue;
            }
            if let Some(y) = p.sqrt(fx) {
                let y = if rng.gen::<bool>() { y } else { p.neg(y) };
                return Place::Affine { x, y };
            }
        }
    }

    /// Local expansion `(x(t), y(t))` at an affine place, to `prec` terms.
    fn local_expansion(&self, place: Place, prec: usize) -> (Series, Series) {
        let p = self.prime;
        match place {
            Place::Affine { x, y } => {
                // t = x - x0
                let mut xs = Series::constant(p, x, prec);
                if prec > 1 {
                    xs.coeffs[1] = 1;
                }
                let fx = Series::eval_poly(&self.f, &xs);
                let ys = fx.sqrt_with(y);
                (xs, ys)
            }
            Place::Weierstrass { x } => {
                // t = y; solve f(x(t)) = t^2 by Newton from x(0) = x0
                let t2 = {
                    let mut c = vec![0u64; prec];
                    if prec > 2 {
                        c[2] = 1;
                    }
                    Series::new(p, prec, c)
                };
                let mut xs = Series::constant(p, x, prec);
                let steps = (usize::BITS - prec.leading_zeros()) as usize + 2;
                for _ in 0..steps {
                    let fx = Series::eval_poly(&self.f, &xs);
                    let dfx = Series::eval_poly(&self.f.derivative(), &xs);
                    let delta = t2.sub(&fx).mul(&dfx.inverse());
                    xs = xs.add(&delta);
                }
                debug_assert_eq!(Series::eval_poly(&self.f, &xs), t2);
                (xs, Series::parameter(p, prec))
            }
            Place::Infinity { .. } => unreachable!("no series expansion at infinity"),
        }
    }

    /// Order of vanishing of `a(x) + b(x) y` at an affine place. `bound` must
    /// exceed the true order.
    pub(crate) fn ord_affine(&self, a: &Poly, b: &Poly, place: Place, bound: usize) -> usize {
        let prec = bound + 1;
        let (xs, ys) = self.local_expansion(place, prec);
        let s = Series::eval_poly(a, &xs).add(&Series::eval_poly(b, &xs).mul(&ys));
        s.valuation()
    }

    /// Pole order at infinity of `a(x) + b(x) y` in the odd model; the two
    /// monomial families have distinct parities so no cancellation occurs.
    pub(crate) fn infinity_pole_order(&self, a: &Poly, b: &Poly) -> i64 {
        let mut pole = i64::MIN;
        if !a.is_zero() {
            pole = pole.max(2 * a.degree());
        }
        if !b.is_zero() {
            pole = pole.max(2 * b.degree() + 2 * self.genus + 1);
        }
        if pole == i64::MIN {
            0
        } else {
            pole
        }
    }

    /// Basis of `L(D) = { f : div(f) + D >= 0 }`.
    pub fn rr_basis(&self, d: &Divisor) -> Result<RRBasis, CurveError> {
        self.require_odd()?;
        self.validate_divisor(d)?;
        let p = self.prime;
        if d.degree() < 0 {
            return Ok(RRBasis {
                functions: Vec::new(),
                den: Poly::one(p),
            });
        }
        let m_inf = d
            .support
            .get(&self.infinity())
            .copied()
            .unwrap_or(0);

        // Clearing denominator: one factor (x - x0) per unit of pole demanded
        // at an affine place (halved at Weierstrass places, where x - x0
        // vanishes to order two).
        let mut h = Poly::one(p);
        let mut h_exponents: BTreeMap<u64, i64> = BTreeMap::new();
        for (&pl, &mult) in &d.support {
            if mult <= 0 {
                continue;
            }
            match pl {
                Place::Affine { x, .. } => {
                    *h_exponents.entry(x).or_insert(0) += mult;
                }
                Place::Weierstrass { x } => {
                    *h_exponents.entry(x).or_insert(0) += (mult + 1) / 2;
                }
                Place::Infinity { .. } => {}
            }
        }
        for (&x0, &e) in &h_exponents {
            h = h.mul(&Poly::linear_root(p, x0).pow(e as u32));
        }
        let mut cap = m_inf + 2 * h.degree();
        if cap < 0 {
            // demand zeros at infinity beyond what clearing provides: enlarge
            // the denominator with a fresh split x-fibre
            let mut u = 0u64;
            let extra = ((-cap + 1) / 2) as u32;
            loop {
                let fu = self.f.eval(u);
                if fu != 0
                    && p.is_square(fu)
                    && !h_exponents.contains_key(&u)
                    && !d.support.keys().any(|pl| matches!(pl, Place::Affine { x, .. } if *x == u))
                {
                    break;
                }
                u += 1;
                if u >= p.get() {
                    return Err(CurveError::SamplingExhausted(
                        "no split fibre available for pole clearing".into(),
                    ));
                }
            }
            h_exponents.insert(u, extra as i64);
            h = h.mul(&Poly::linear_root(p, u).pow(extra));
            cap = m_inf + 2 * h.degree();
        }

        // Ambient basis: monomials with infinity pole order at most cap.
        let mut ambient: Vec<(usize, bool)> = Vec::new(); // (exponent, is y part)
        for i in 0..=(cap / 2).max(0) {
            if 2 * i <= cap {
                ambient.push((i as usize, false));
            }
        }
        let y_pole = 2 * self.genus + 1;
        if cap >= y_pole {
            for j in 0..=((cap - y_pole) / 2) {
                ambient.push((j as usize, true));
            }
        }
        if ambient.is_empty() {
            return Ok(RRBasis {
                functions: Vec::new(),
                den: h,
            });
        }

        // Vanishing conditions: at every affine place over the support of h
        // and every affine place where D demands zeros, the numerator must
        // vanish to order ord_P(h) - D_P.
        let mut required: BTreeMap<Place, i64> = BTreeMap::new();
        for (&x0, &e) in &h_exponents {
            let fx = self.f.eval(x0);
            if fx == 0 {
                required.insert(Place::Weierstrass { x: x0 }, 2 * e);
            } else {
                let y0 = p.sqrt(fx).expect("h-support must split");
                required.insert(Place::Affine { x: x0, y: y0 }, e);
                required.insert(
                    Place::Affine {
                        x: x0,
                        y: p.neg(y0),
                    },
                    e,
                );
            }
        }
        for (&pl, &mult) in &d.support {
            if matches!(pl, Place::Infinity { .. }) {
                continue;
            }
            let entry = required.entry(pl).or_insert(0);
            *entry -= mult;
        }
        required.retain(|_, &mut r| r > 0);

        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (&pl, &r) in &required {
            let prec = r as usize;
            let (xs, ys) = self.local_expansion(pl, prec);
            // powers of x(t), reused across the ambient elements
            let max_pow = ambient.iter().map(|&(e, _)| e).max().unwrap_or(0);
            let mut xpow: Vec<Series> = Vec::with_capacity(max_pow + 1);
            xpow.push(Series::constant(p, 1, prec));
            for k in 1..=max_pow {
                let next = xpow[k - 1].mul(&xs);
                xpow.push(next);
            }
            let expansions: Vec<Series> = ambient
                .iter()
                .map(|&(e, is_y)| {
                    if is_y {
                        xpow[e].mul(&ys)
                    } else {
                        xpow[e].clone()
                    }
                })
                .collect();
            for k in 0..prec {
                rows.push(expansions.iter().map(|s| s.coeffs[k]).collect());
            }
        }

        let functions: Vec<(Poly, Poly)> = if rows.is_empty() {
            ambient
                .iter()
                .map(|&(e, is_y)| monomial_pair(p, e, is_y))
                .collect()
        } else {
            let m = FieldMatrix::from_rows(p, rows);
            m.kernel_basis()
                .into_iter()
                .map(|v| {
                    let mut a = Poly::zero(p);
                    let mut b = Poly::zero(p);
                    for (coeff, &(e, is_y)) in v.iter().zip(&ambient) {
                        if *coeff == 0 {
                            continue;
                        }
                        let mono = Poly::monomial(p, *coeff, e);
                        if is_y {
                            b = b.add(&mono);
                        } else {
                            a = a.add(&mono);
                        }
                    }
                    (a, b)
                })
                .collect()
        };
        Ok(RRBasis { functions, den: h })
    }

    /// Dimension of the Riemann-Roch space.
    pub fn h0(&self, d: &Divisor) -> Result<usize, CurveError> {
        Ok(self.rr_basis(d)?.dim())
    }

    /// `h^1(D) = h^0(K - D)` by duality.
    pub fn h1(&self, d: &Divisor) -> Result<usize, CurveError> {
        self.h0(&self.canonical().sub(d))
    }

    /// A degree-zero class is trivial iff it has a section.
    pub fn is_trivial_class(&self, d: &Divisor) -> Result<bool, CurveError> {
        if d.degree() != 0 {
            return Ok(false);
        }
        Ok(self.h0(d)? == 1)
    }

    /// Exact divisor of the function `(a + b y) / den`, or `None` when a zero
    /// or pole lives over an irrational point of the x-line.
    pub fn divisor_of_function(
        &self,
        a: &Poly,
        b: &Poly,
        den: &Poly,
    ) -> Result<Option<Divisor>, CurveError> {
        let (div, missing) = self.divisor_of_function_rational_part(a, b, den)?;
        Ok(if missing == 0 { Some(div) } else { None })
    }

    /// The rational-support part of the divisor of `(a + b y) / den`,
    /// together with the degree of the effective zero locus living over
    /// irrational points of the x-line. The rational part is effective
    /// wherever the function is regular.
    pub fn divisor_of_function_rational_part(
        &self,
        a: &Poly,
        b: &Poly,
        den: &Poly,
    ) -> Result<(Divisor, i64), CurveError> {
        self.require_odd()?;
        let p = self.prime;
        assert!(!(a.is_zero() && b.is_zero()), "zero function");
        let mut div = Divisor::zero();
        let mut missing: i64 = 0;
        // numerator: zeros read off the norm a^2 - f b^2
        let norm = a.mul(a).sub(&self.f.mul(&b.mul(b)));
        debug_assert!(!norm.is_zero(), "a + b y vanishes identically");
        let roots = norm
            .rational_roots()
            .ok_or_else(|| CurveError::BadArgument("prime too large for root scan".into()))?;
        let found: i64 = roots.iter().map(|&(_, m)| m as i64).sum();
        missing += norm.degree() - found; // zeros over irrational x-values
        for (x0, m) in roots {
            let fx = self.f.eval(x0);
            if fx == 0 {
                // conjugation fixes the place, so a+by and a-by vanish to the
                // same order there: half the norm order 2m
                div.add_place(Place::Weierstrass { x: x0 }, m as i64);
            } else if let Some(y0) = p.sqrt(fx) {
                let plus = Place::Affine { x: x0, y: y0 };
                let minus = Place::Affine {
                    x: x0,
                    y: p.neg(y0),
                };
                let ord_plus = self.ord_affine(a, b, plus, m) as i64;
                div.add_place(plus, ord_plus);
                div.add_place(minus, m as i64 - ord_plus);
            } else {
                missing += m as i64; // conjugate quadratic pair over x0
            }
        }
        // numerator pole at infinity
        div.add_place(self.infinity(), -self.infinity_pole_order(a, b));
        // denominator: its support is always constructed from rational
        // places, so irrational factors are rejected outright
        let den_roots = den
            .rational_roots()
            .ok_or_else(|| CurveError::BadArgument("prime too large for root scan".into()))?;
        let den_found: i64 = den_roots.iter().map(|&(_, m)| m as i64).sum();
        if den_found < den.degree() {
            return Err(CurveError::IrrationalSupport);
        }
        for (x0, m) in den_roots {
            let fx = self.f.eval(x0);
            if fx == 0 {
                div.add_place(Place::Weierstrass { x: x0 }, -2 * m as i64);
            } else if let Some(y0) = p.sqrt(fx) {
                div.add_place(Place::Affine { x: x0, y: y0 }, -(m as i64));
                div.add_place(
                    Place::Affine {
                        x: x0,
                        y: p.neg(y0),
                    },
                    -(m as i64),
                );
            } else {
                return Err(CurveError::IrrationalSupport);
            }
        }
        div.add_place(self.infinity(), 2 * den.degree());
        debug_assert_eq!(
            div.degree() + missing,
            0,
            "principal divisor has degree zero"
        );
        Ok((div, missing))
    }
}

fn monomial_pair(p: Prime, e: usize, is_y: bool) -> (Poly, Poly) {
    if is_y {
        (Poly::zero(p), Poly::monomial(p, 1, e))
    } else {
        (Poly::monomial(p, 1, e), Poly::zero(p))
    }
}
