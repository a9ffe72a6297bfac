//! Picard lattices of the special K3 surfaces used in the syzygy arguments,
//! as explicit Gram matrices with exact pairing arithmetic.
//!
//! Six lattice families are in the catalog: the rank-2/3 lattices attached to
//! odd-genus secant arguments (`Theta`, `ThetaHat`), their even-genus
//! analogues (`Xi`, `XiHat`), and the Nikulin-type lattices (`NikulinLambda`
//! of rank 9, `NikulinTHat` of rank 10). The Nikulin block is stored in the
//! integral basis `{N_1, ..., N_7, e}` where `e` is the half-sum of the eight
//! exceptional classes; the half-integer coefficient view is a derived
//! coordinate change (see [`NikulinView`]).
//!
//! Every catalog entry has signature `(1, rank-1)`, verified at construction
//! by an exact congruence diagonalization.

pub mod certify;
mod enumerate;

pub use certify::{certify, Certificate, Verdict, LEMMA_IDS};
pub use enumerate::{enumerate_classes, enumerate_nikulin_views, BoxBounds, Cmp, LinearConstraint};

use crate::exactla::Rat;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("parameters out of range for {kind}: {reason}")]
    BadParams { kind: String, reason: String },
    #[error("coordinate length {got} does not match lattice rank {rank}")]
    DimensionMismatch { got: usize, rank: usize },
    #[error("search space too large or unbounded: {0}")]
    Unbounded(String),
    #[error("unknown lemma id {0}")]
    UnknownLemma(String),
    #[error("hodge index bound requires (ample)^2 > 0, got {0}")]
    NotAmple(i64),
    #[error("catalog lattice failed its signature check: {0}")]
    BadSignature(String),
    #[error("half-integer coefficients 2c_j must all have the same parity")]
    ParityViolation,
}

/// The lattice families in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Theta,
    ThetaHat,
    Xi,
    XiHat,
    NikulinLambda,
    NikulinTHat,
}

/// An integral quadratic form with a named basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramLattice {
    pub name: String,
    pub kind: LatticeKind,
    /// Genus parameter of the family.
    pub g: i64,
    /// Secant parameter; zero for the Nikulin kinds.
    pub p: i64,
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub basis_labels: Vec<String>,
}

/// An integer coordinate vector in the basis of a [`GramLattice`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeClass {
    pub coords: Vec<i64>,
}

impl LatticeClass {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeClass { coords }
    }

    pub fn zero(rank: usize) -> Self {
        LatticeClass {
            coords: vec![0; rank],
        }
    }

    pub fn basis_vector(rank: usize, idx: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[idx] = 1;
        LatticeClass { coords }
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeClass {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        LatticeClass {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }
}

/// Construct a catalog lattice, rejecting parameters outside the standing
/// hypotheses of the corresponding family.
pub fn make_lattice(kind: LatticeKind, g: i64, p: i64) -> Result<GramLattice, LatticeError> {
    let bad = |reason: &str| LatticeError::BadParams {
        kind: format!("{kind:?}"),
        reason: reason.to_string(),
    };
    let lat = match kind {
        LatticeKind::Theta | LatticeKind::ThetaHat => {
            if g < 3 || g % 2 == 0 {
                return Err(bad("requires odd g >= 3 (g = 2i+1, i >= 1)"));
            }
            let i = (g - 1) / 2;
            if p < i - 1 || p < 1 {
                return Err(bad("requires p >= i-1 and p >= 1"));
            }
            let h_eta = 2 * p - 2 * i;
            if kind == LatticeKind::Theta {
                GramLattice {
                    name: format!("theta(g={g},p={p})"),
                    kind,
                    g,
                    p,
                    rank: 2,
                    gram: vec![vec![4 * p + 4, h_eta], vec![h_eta, -4]],
                    basis_labels: vec!["H".into(), "eta".into()],
                }
            } else {
                GramLattice {
                    name: format!("theta_hat(g={g},p={p})"),
                    kind,
                    g,
                    p,
                    rank: 3,
                    gram: vec![
                        vec![4 * p + 4, h_eta, 2],
                        vec![h_eta, -4, 0],
                        vec![2, 0, 0],
                    ],
                    basis_labels: vec!["H".into(), "eta".into(), "E".into()],
                }
            }
        }
        LatticeKind::Xi | LatticeKind::XiHat => {
            if g < 4 || g % 2 != 0 {
                return Err(bad("requires even g >= 4 (g = 2i, i >= 2)"));
            }
            let i = g / 2;
            if p < i - 1 {
                return Err(bad("requires p >= i-1"));
            }
            let h_eta = 2 * p - 2 * i + 1;
            if kind == LatticeKind::Xi {
                GramLattice {
                    name: format!("xi(g={g},p={p})"),
                    kind,
                    g,
                    p,
                    rank: 2,
                    gram: vec![vec![4 * p + 4, h_eta], vec![h_eta, -4]],
                    basis_labels: vec!["H".into(), "eta".into()],
                }
            } else {
                GramLattice {
                    name: format!("xi_hat(g={g},p={p})"),
                    kind,
                    g,
                    p,
                    rank: 3,
                    gram: vec![
                        vec![4 * p + 4, h_eta, 2],
                        vec![h_eta, -4, 0],
                        vec![2, 0, 0],
                    ],
                    basis_labels: vec!["H".into(), "eta".into(), "E".into()],
                }
            }
        }
        LatticeKind::NikulinLambda => {
            if g < 3 || g % 2 == 0 {
                return Err(bad("requires odd g >= 3"));
            }
            let mut gram = vec![vec![0i64; 9]; 9];
            gram[0][0] = 2 * g - 2;
            fill_nikulin_block(&mut gram, 1);
            GramLattice {
                name: format!("nikulin_lambda(g={g})"),
                kind,
                g,
                p: 0,
                rank: 9,
                gram,
                basis_labels: nikulin_labels(&["L"]),
            }
        }
        LatticeKind::NikulinTHat => {
            if g < 3 || g % 2 == 0 {
                return Err(bad("requires odd g >= 3"));
            }
            let mut gram = vec![vec![0i64; 10]; 10];
            gram[0][0] = 2 * g - 2;
            gram[0][1] = 2;
            gram[1][0] = 2;
            fill_nikulin_block(&mut gram, 2);
            GramLattice {
                name: format!("nikulin_t_hat(g={g})"),
                kind,
                g,
                p: 0,
                rank: 10,
                gram,
                basis_labels: nikulin_labels(&["L", "E"]),
            }
        }
    };
    let (plus, minus, zero) = signature(&lat.gram);
    if plus != 1 || zero != 0 || minus != lat.rank - 1 {
        return Err(LatticeError::BadSignature(format!(
            "{}: got ({plus},{minus},{zero})",
            lat.name
        )));
    }
    Ok(lat)
}

/// Nikulin block in the integral basis {N_1..N_7, e} with e = (N_1+...+N_8)/2:
/// N_j.N_k = -2 delta_jk, N_j.e = -1, e.e = -4.
fn fill_nikulin_block(gram: &mut [Vec<i64>], offset: usize) {
    for j in 0..7 {
        gram[offset + j][offset + j] = -2;
        gram[offset + j][offset + 7] = -1;
        gram[offset + 7][offset + j] = -1;
    }
    gram[offset + 7][offset + 7] = -4;
}

fn nikulin_labels(prefix: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
    for j in 1..=7 {
        v.push(format!("N{j}"));
    }
    v.push("e".into());
    v
}

/// Exact intersection pairing `x^T . gram . y`.
pub fn pairing(lat: &GramLattice, x: &LatticeClass, y: &LatticeClass) -> Result<i64, LatticeError> {
    if x.coords.len() != lat.rank {
        return Err(LatticeError::DimensionMismatch {
            got: x.coords.len(),
            rank: lat.rank,
        });
    }
    if y.coords.len() != lat.rank {
        return Err(LatticeError::DimensionMismatch {
            got: y.coords.len(),
            rank: lat.rank,
        });
    }
    let mut acc: i128 = 0;
    for (i, &xi) in x.coords.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.coords.iter().enumerate() {
            acc += xi as i128 * lat.gram[i][j] as i128 * yj as i128;
        }
    }
    Ok(i64::try_from(acc).expect("pairing overflow"))
}

pub fn self_intersection(lat: &GramLattice, x: &LatticeClass) -> Result<i64, LatticeError> {
    pairing(lat, x, x)
}

/// True iff every diagonal Gram entry is divisible by 4 and every
/// off-diagonal entry is even. In that case `(alpha)^2 = 0 mod 4` for every
/// class `alpha`, so the lattice contains no (-2)-classes.
pub fn div4_criterion(lat: &GramLattice) -> bool {
    for i in 0..lat.rank {
        if lat.gram[i][i].rem_euclid(4) != 0 {
            return false;
        }
        for j in 0..lat.rank {
            if i != j && lat.gram[i][j] % 2 != 0 {
                return false;
            }
        }
    }
    true
}

/// Exact signature `(n_plus, n_minus, n_zero)` of a symmetric integer matrix,
/// by congruence diagonalization over the rationals.
pub fn signature(gram: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = gram.len();
    let mut m: Vec<Vec<Rat>> = gram
        .iter()
        .map(|row| row.iter().map(|&v| Rat::from(BigInt::from(v))).collect())
        .collect();
    let (mut plus, mut minus, mut zero) = (0, 0, 0);
    for k in 0..n {
        if m[k][k].is_zero() {
            // try a congruence swap with a later index with nonzero diagonal
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(k, j);
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // add row/col j to k: new diagonal is 2 m[k][j] since m[j][j] = 0
                for c in 0..n {
                    let v = m[j][c].clone();
                    m[k][c] += v;
                }
                for r in 0..n {
                    let v = m[r][j].clone();
                    m[r][k] += v;
                }
            }
        }
        if m[k][k].is_zero() {
            zero += 1;
            continue;
        }
        if m[k][k].is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        let pivot = m[k][k].clone();
        for r in k + 1..n {
            if m[r][k].is_zero() {
                continue;
            }
            let f = &m[r][k] / &pivot;
            for c in 0..n {
                let v = &f * &m[k][c];
                m[r][c] -= v;
            }
            for rr in 0..n {
                let v = &f * &m[rr][k];
                m[rr][r] -= v;
            }
        }
    }
    (plus, minus, zero)
}

/// The two sides of the Hodge-index inequality
/// `(ample)^2 (target)^2 <= (ample . target)^2` on a signature-(1, rank-1)
/// lattice, used by the certifiers to justify search truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeBound {
    pub lhs: i128,
    pub rhs: i128,
    pub holds: bool,
    pub strict: bool,
}

pub fn hodge_index_bound(
    lat: &GramLattice,
    ample: &LatticeClass,
    target: &LatticeClass,
) -> Result<HodgeBound, LatticeError> {
    let a2 = self_intersection(lat, ample)?;
    if a2 <= 0 {
        return Err(LatticeError::NotAmple(a2));
    }
    let t2 = self_intersection(lat, target)?;
    let at = pairing(lat, ample, target)?;
    let lhs = a2 as i128 * t2 as i128;
    let rhs = at as i128 * at as i128;
    Ok(HodgeBound {
        lhs,
        rhs,
        holds: lhs <= rhs,
        strict: lhs < rhs,
    })
}

/// A class in a Nikulin-type lattice written as `a L + b E + sum_j c_j N_j`
/// with half-integer `c_j`. The doubled coefficients `2 c_j` are stored and
/// must all share the same parity; this is exactly the integrality condition
/// for membership in the lattice generated by `N_1..N_8` and the half-sum `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NikulinView {
    pub a: i64,
    /// Coefficient of E; must be zero on `NikulinLambda`.
    pub b: i64,
    /// Doubled half-integer coefficients `2 c_j`, j = 1..8.
    pub c2: [i64; 8],
}

impl NikulinView {
    pub fn new(a: i64, b: i64, c2: [i64; 8]) -> Result<Self, LatticeError> {
        let parity = c2[0].rem_euclid(2);
        if c2.iter().any(|v| v.rem_euclid(2) != parity) {
            return Err(LatticeError::ParityViolation);
        }
        Ok(NikulinView { a, b, c2 })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LatticeError> {
        let mut c2 = [0i64; 8];
        for j in 0..8 {
            c2[j] = self.c2[j] + other.c2[j];
        }
        NikulinView::new(self.a + other.a, self.b + other.b, c2)
    }

    /// Pairing of two views on the lattice with `L^2 = 2g-2`, `L.E = 2`,
    /// `E^2 = 0`, the N-block orthogonal to both.
    pub fn pair(&self, other: &Self, g: i64) -> i64 {
        let mut acc: i128 = (2 * g - 2) as i128 * self.a as i128 * other.a as i128
            + 2 * (self.a as i128 * other.b as i128 + self.b as i128 * other.a as i128);
        let mut nsum: i128 = 0;
        for j in 0..8 {
            nsum += self.c2[j] as i128 * other.c2[j] as i128;
        }
        // N_j^2 = -2 and c_j = c2_j / 2, so the N-contribution is -nsum/2;
        // the shared-parity invariant makes this an integer.
        debug_assert!(nsum % 2 == 0);
        acc -= nsum / 2;
        i64::try_from(acc).expect("pairing overflow")
    }

    pub fn self_int(&self, g: i64) -> i64 {
        self.pair(self, g)
    }

    /// Sum of the squared doubled coefficients, the quantity bounded by the
    /// Hodge-index truncation in the Nikulin lemmas.
    pub fn c2_norm(&self) -> i64 {
        self.c2.iter().map(|v| v * v).sum()
    }

    /// Coordinates in the integral basis. For `NikulinTHat` the order is
    /// `{L, E, N_1..N_7, e}`; for `NikulinLambda` (requires `b = 0`) it is
    /// `{L, N_1..N_7, e}`.
    pub fn to_class(&self, kind: LatticeKind) -> Result<LatticeClass, LatticeError> {
        let m = self.c2[7];
        let mut coords = vec![self.a];
        match kind {
            LatticeKind::NikulinTHat => coords.push(self.b),
            LatticeKind::NikulinLambda => {
                if self.b != 0 {
                    return Err(LatticeError::BadParams {
                        kind: "NikulinLambda".into(),
                        reason: "has no E class".into(),
                    });
                }
            }
            _ => {
                return Err(LatticeError::BadParams {
                    kind: format!("{kind:?}"),
                    reason: "not a Nikulin kind".into(),
                })
            }
        }
        for j in 0..7 {
            // N_j-coefficient c_j - c_8 = (c2_j - c2_8)/2, integral by parity
            coords.push((self.c2[j] - m) / 2);
        }
        coords.push(m); // e-coefficient 2 c_8
        Ok(LatticeClass::new(coords))
    }

    pub fn from_class(class: &LatticeClass, kind: LatticeKind) -> Result<Self, LatticeError> {
        let (a, b, rest) = match kind {
            LatticeKind::NikulinLambda => (class.coords[0], 0, &class.coords[1..]),
            LatticeKind::NikulinTHat => (class.coords[0], class.coords[1], &class.coords[2..]),
            _ => {
                return Err(LatticeError::BadParams {
                    kind: format!("{kind:?}"),
                    reason: "not a Nikulin kind".into(),
                })
            }
        };
        let m = rest[7];
        let mut c2 = [0i64; 8];
        for j in 0..7 {
            c2[j] = 2 * rest[j] + m;
        }
        c2[7] = m;
        NikulinView::new(a, b, c2)
    }
}
