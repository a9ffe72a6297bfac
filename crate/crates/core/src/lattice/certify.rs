//! Certifiers that replay the finite case analysis of each lattice lemma.
//!
//! Each certifier enumerates exactly the candidate set that the corresponding
//! proof reduces to (a coordinate box, or the Hodge-index-truncated set of
//! Nikulin coefficient patterns), re-verifies the truncation inequality for
//! the given parameters, and returns a [`Certificate`] whose verdict is
//! `Pass` only when every candidate is excluded by the argument's arithmetic.
//! A surviving candidate is returned as a counterexample, never swallowed.

use super::enumerate::enumerate_nikulin_views;
use super::{
    div4_criterion, make_lattice, pairing, self_intersection, GramLattice, LatticeClass,
    LatticeError, LatticeKind, NikulinView,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// All lemma identifiers known to [`certify`].
pub const LEMMA_IDS: [&str; 15] = [
    "theta.div4",
    "theta.bn_decomposition",
    "theta.hypvanodd_arith",
    "xi.E_nef",
    "xi.H_bpf",
    "xi.lattice1",
    "xi.A_nef",
    "xi.h1cor",
    "xi.L_bpf",
    "xi.B_not_effective",
    "nikulin.H_nef",
    "nikulin.H_bpf",
    "nikulin.E_elliptic",
    "nikulin.L_half_bpf",
    "nikulin.cE_minus_e",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Counterexample { coords: Vec<i64>, reason: String },
}

/// Machine-checkable record of one lemma verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub lemma_id: String,
    pub params: BTreeMap<String, i64>,
    /// Description of the finite candidate set and the inequality that
    /// truncates it.
    pub search_bounds: String,
    pub candidates_checked: u64,
    pub verdict: Verdict,
}

struct Run {
    bounds: String,
    checked: u64,
    verdict: Verdict,
}

impl Run {
    fn new(bounds: String) -> Self {
        Run {
            bounds,
            checked: 0,
            verdict: Verdict::Pass,
        }
    }

    fn check(&mut self, ok: bool, coords: &[i64], reason: &str) {
        self.checked += 1;
        if !ok && matches!(self.verdict, Verdict::Pass) {
            self.verdict = Verdict::Counterexample {
                coords: coords.to_vec(),
                reason: reason.to_string(),
            };
        }
    }

    fn into_certificate(self, lemma_id: &str, params: BTreeMap<String, i64>) -> Certificate {
        Certificate {
            lemma_id: lemma_id.to_string(),
            params,
            search_bounds: self.bounds,
            candidates_checked: self.checked,
            verdict: self.verdict,
        }
    }
}

/// Verify one lemma for the given parameters. `params` must contain `g` and,
/// for the theta/xi families, `p`; `nikulin.cE_minus_e` accepts optional
/// `c_lo`/`c_hi` (defaults -5..5).
pub fn certify(lemma_id: &str, params: &BTreeMap<String, i64>) -> Result<Certificate, LatticeError> {
    let g = *params.get("g").ok_or_else(|| LatticeError::BadParams {
        kind: lemma_id.into(),
        reason: "missing g".into(),
    })?;
    let get_p = || {
        params.get("p").copied().ok_or_else(|| LatticeError::BadParams {
            kind: lemma_id.into(),
            reason: "missing p".into(),
        })
    };
    let run = match lemma_id {
        "theta.div4" => theta_div4(g, get_p()?)?,
        "theta.bn_decomposition" => theta_bn(g, get_p()?)?,
        "theta.hypvanodd_arith" => theta_hypvanodd(g, get_p()?)?,
        "xi.E_nef" => xi_e_nef(g, get_p()?)?,
        "xi.H_bpf" => xi_h_bpf(g, get_p()?)?,
        "xi.lattice1" => xi_lattice1(g, get_p()?)?,
        "xi.A_nef" => xi_a_nef(g, get_p()?)?,
        "xi.h1cor" => xi_h1cor(g, get_p()?)?,
        "xi.L_bpf" => xi_l_bpf(g, get_p()?)?,
        "xi.B_not_effective" => xi_b_not_effective(g, get_p()?)?,
        "nikulin.H_nef" => nikulin_h_nef(g)?,
        "nikulin.H_bpf" => nikulin_h_bpf(g)?,
        "nikulin.E_elliptic" => nikulin_e_elliptic(g)?,
        "nikulin.L_half_bpf" => nikulin_l_half_bpf(g)?,
        "nikulin.cE_minus_e" => {
            let lo = params.get("c_lo").copied().unwrap_or(-5);
            let hi = params.get("c_hi").copied().unwrap_or(5);
            nikulin_ce_minus_e(g, lo, hi)?
        }
        other => return Err(LatticeError::UnknownLemma(other.to_string())),
    };
    Ok(run.into_certificate(lemma_id, params.clone()))
}

/// Default parameter grids for the full certification sweep: theta lemmas
/// over odd 3 <= g <= 41 with max(i-1, 1) <= p <= 20, xi lemmas over even
/// 4 <= g <= 40 with i-1 <= p <= 20, Nikulin lemmas over odd 11 <= g <= 41.
pub fn default_grid(lemma_id: &str) -> Vec<BTreeMap<String, i64>> {
    let mut grids = Vec::new();
    let with_gp = |g: i64, p: i64| {
        let mut m = BTreeMap::new();
        m.insert("g".to_string(), g);
        m.insert("p".to_string(), p);
        m
    };
    if lemma_id.starts_with("theta.") {
        for g in (3..=41).step_by(2) {
            let i = (g - 1) / 2;
            for p in (i - 1).max(1)..=20 {
                grids.push(with_gp(g, p));
            }
        }
    } else if lemma_id.starts_with("xi.") {
        for g in (4..=40).step_by(2) {
            let i = g / 2;
            for p in (i - 1)..=20 {
                grids.push(with_gp(g, p));
            }
        }
    } else {
        for g in (11..=41).step_by(2) {
            let mut m = BTreeMap::new();
            m.insert("g".to_string(), g);
            grids.push(m);
        }
    }
    grids
}

fn theta_params(g: i64, p: i64) -> Result<(GramLattice, i64), LatticeError> {
    if g > 41 || p > 20 {
        return Err(LatticeError::BadParams {
            kind: "theta".into(),
            reason: "certified range is odd g <= 41, p <= 20".into(),
        });
    }
    let lat = make_lattice(LatticeKind::ThetaHat, g, p)?;
    Ok((lat, (g - 1) / 2))
}

fn xi_params(g: i64, p: i64) -> Result<(GramLattice, i64), LatticeError> {
    if g > 40 || p > 20 {
        return Err(LatticeError::BadParams {
            kind: "xi".into(),
            reason: "certified range is even g <= 40, p <= 20".into(),
        });
    }
    let lat = make_lattice(LatticeKind::XiHat, g, p)?;
    Ok((lat, g / 2))
}

fn nikulin_g(g: i64) -> Result<i64, LatticeError> {
    if !(11..=41).contains(&g) || g % 2 == 0 {
        return Err(LatticeError::BadParams {
            kind: "nikulin".into(),
            reason: "certified range is odd 11 <= g <= 41".into(),
        });
    }
    Ok(g)
}

// In the hat lattices the basis order is {H, eta, E}.
fn hat_class(a_h: i64, b_eta: i64, c_e: i64) -> LatticeClass {
    LatticeClass::new(vec![a_h, b_eta, c_e])
}

/// Every pairing even and every square divisible by four, with the explicit
/// quadratic form 4a^2(p+1) - 4b^2 + 4ab(p-i) + 4ac cross-checked on a box.
fn theta_div4(g: i64, p: i64) -> Result<Run, LatticeError> {
    let (lat, i) = theta_params(g, p)?;
    let mut run = Run::new(format!(
        "structural Gram check plus coordinate box |a|,|b|,|c| <= 5 on {}",
        lat.name
    ));
    run.check(div4_criterion(&lat), &[], "divisibility criterion fails");
    for a in -5..=5i64 {
        for b in -5..=5i64 {
            for c in -5..=5i64 {
                let alpha = hat_class(a, b, c);
                let sq = self_intersection(&lat, &alpha)?;
                let closed = 4 * a * a * (p + 1) - 4 * b * b + 4 * a * b * (p - i) + 4 * a * c;
                run.check(
                    sq == closed && sq.rem_euclid(4) == 0,
                    &alpha.coords,
                    "square not of the form 4(a^2(p+1) - b^2 + ab(p-i) + ac)",
                );
                for idx in 0..3 {
                    let beta = LatticeClass::basis_vector(3, idx);
                    run.check(
                        pairing(&lat, &alpha, &beta)? % 2 == 0,
                        &alpha.coords,
                        "odd pairing",
                    );
                }
            }
        }
    }
    Ok(run)
}

/// No decomposition H = A_1 + A_2 with both pieces moving: after reducing to
/// A_1 = b.eta, effectiveness would force (A_1)^2 = -4b^2 >= 0, so b = 0.
fn theta_bn(g: i64, p: i64) -> Result<Run, LatticeError> {
    let (lat, _) = theta_params(g, p)?;
    let mut run = Run::new(format!(
        "A_1 = b.eta for |b| <= 20 (negative square excludes effectiveness since \
         the lattice has no classes of negative even square not divisible by 4); \
         classes aH + b.eta with -5 <= a <= -1 excluded by intersecting with E; on {}",
        lat.name
    ));
    for b in -20..=20i64 {
        if b == 0 {
            continue;
        }
        let a1 = hat_class(0, b, 0);
        let sq = self_intersection(&lat, &a1)?;
        run.check(sq == -4 * b * b && sq < 0, &a1.coords, "b.eta not excluded");
    }
    let e = hat_class(0, 0, 1);
    for a in -5..=-1i64 {
        for b in -5..=5i64 {
            let cl = hat_class(a, b, 0);
            run.check(
                pairing(&lat, &cl, &e)? == 2 * a && 2 * a < 0,
                &cl.coords,
                "negative-H-coefficient class not excluded by E",
            );
        }
    }
    Ok(run)
}

/// ((2p+2-j)E + eta)^2 = -4 and ((2p+2-j)E + eta - H)^2 = 4(i+j) - 8p - 8 <= -4
/// for all j <= p.
fn theta_hypvanodd(g: i64, p: i64) -> Result<Run, LatticeError> {
    let (lat, i) = theta_params(g, p)?;
    let mut run = Run::new(format!(
        "j = 0..{p}; second square bounded by 4(i-p) - 8 <= -4 using p >= i-1; on {}",
        lat.name
    ));
    for j in 0..=p {
        let m = 2 * p + 2 - j;
        let alpha = hat_class(0, 1, m);
        run.check(
            self_intersection(&lat, &alpha)? == -4,
            &alpha.coords,
            "((2p+2-j)E + eta)^2 != -4",
        );
        let beta = hat_class(-1, 1, m);
        let sq = self_intersection(&lat, &beta)?;
        run.check(
            sq == 4 * (i + j) - 8 * p - 8 && sq <= -4,
            &beta.coords,
            "((2p+2-j)E + eta - H)^2 not <= -4",
        );
    }
    Ok(run)
}

/// E is nef: a rational curve R = aH + bE + c.eta with (R.E) < 0 forces a < 0,
/// but then (bE + c.eta)^2 = -4c^2 <= 0 contradicts
/// (R - aH)^2 = -2 + a^2(4p+4) - 2a(R.H) >= 4p+2 > 0.
fn xi_e_nef(g: i64, p: i64) -> Result<Run, LatticeError> {
    let (lat, i) = xi_params(g, p)?;
    let mut run = Run::new(format!(
        "a in -5..-1, c in -12..12, b solved from R^2 = -2; truncation valid for all \
         a < 0 since -2 + a^2(4p+4) - 2a(R.H) >= 4p+2 = {} > 0 whenever R.H >= 0; on {}",
        4 * p + 2,
        lat.name
    ));
    run.check(4 * p + 2 > 0, &[], "truncation inequality 4p+2 > 0 fails");
    let d = 2 * p - 2 * i + 1;
    for a in -5..=-1i64 {
        for c in -12..=12i64 {
            run.checked += 1;
            // R^2 = a^2(4p+4) + 4ab + 2ac d - 4c^2 = -2
            let num = -2 - a * a * (4 * p + 4) - 2 * a * c * d + 4 * c * c;
            if num % (4 * a) != 0 {
                continue;
            }
            let b = num / (4 * a);
            let r = hat_class(a, c, b);
            debug_assert_eq!(self_intersection(&lat, &r)?, -2);
            let rh = pairing(&lat, &r, &hat_class(1, 0, 0))?;
            run.check(
                rh < 0,
                &r.coords,
                "(-2)-class with R.E < 0 compatible with H nef",
            );
        }
    }
    Ok(run)
}

/// H is base point free: no elliptic class F with (F.H) = 1.
fn xi_h_bpf(g: i64, p: i64) -> Result<Run, LatticeError> {
    let (lat, i) = xi_params(g, p)?;
    let mut run = Run::new(format!(
        "a in 0..5 (F.E = 2a >= 0 by E nef), c in -12..12, b solved from F.H = 1; \
         for a >= 1 the identity -4c^2 = a(a(4p+4) - 2) > 0 is contradictory, \
         for a = 0 the intersection (bE . H) = 2b is even; on {}",
        lat.name
    ));
    let d = 2 * p - 2 * i + 1;
    for a in 0..=5i64 {
        for c in -12..=12i64 {
            run.checked += 1;
            // F.H = a(4p+4) + c d + 2b = 1
            let num = 1 - a * (4 * p + 4) - c * d;
            if num % 2 != 0 {
                continue;
            }
            let b = num / 2;
            let f = hat_class(a, c, b);
            debug_assert_eq!(pairing(&lat, &f, &hat_class(1, 0, 0))?, 1);
            let sq = self_intersection(&lat, &f)?;
            run.check(sq != 0, &f.coords, "elliptic class with F.H = 1 found");
        }
    }
    Ok(run)
}

/// No class aE + b.eta with b != 0 is effective: an integral component R
/// orthogonal to E would have R = xE + y.eta with (R)^2 = -4y^2, never -2.
fn xi_lattice1(g: i64, p: i64) -> Result<Run, LatticeError> {
    let (lat, _) = xi_params(g, p)?;
    let mut run = Run::new(format!(
        "y in -20..20 for the component square -4y^2 != -2; \
         x,b in -8..8 for (xE + b.eta)^2 = -4b^2 < 0; on {}",
        lat.name
    ));
    for y in -20..=20i64 {
        run.check(-4 * y * y != -2, &[0, y, 0], "-4y^2 = -2");
    }
    for x in -8..=8i64 {
        for b in -8..=8i64 {
            if b == 0 {
                continue;
            }
            let cl = hat_class(0, b, x);
            let sq = self_intersection(&lat, &cl)?;
            run.check(sq == -4 * b * b && sq < 0, &cl.coords, "square mismatch");
        }
    }
    Ok(run)
}

/// A = H + c.eta with (A)^2 >= 0 is nef: a base component would be
/// R = A + yE with y <= -1, but R^2 = -2 forces R.A = (A^2 - 2)/2 >= 0.
fn xi_a_nef(g: i64, p: i64) -> Result<Run, LatticeError> {
    let (lat, _) = xi_params(g, p)?;
    let mut run = Run::new(format!(
        "c in -12..12 with (H + c.eta)^2 >= 0; y solved from (A + yE)^2 = -2; on {}",
        lat.name
    ));
    for c in -12..=12i64 {
        let a_cl = hat_class(1, c, 0);
        let a2 = self_intersection(&lat, &a_cl)?;
        run.checked += 1;
        if a2 < 0 {
            continue; // outside the lemma's hypothesis
        }
        // (A + yE)^2 = A^2 + 4y = -2
        if (-2 - a2) % 4 != 0 {
            continue;
        }
        let y = (-2 - a2) / 4;
        if y >= 0 {
            continue; // y = 0 would force R = A, contradicting A^2 >= 0
        }
        let r = hat_class(1, c, y);
        debug_assert_eq!(self_intersection(&lat, &r)?, -2);
        let ra = pairing(&lat, &r, &a_cl)?;
        run.check(
            ra >= 0,
            &r.coords,
            "base component with R.A < 0 survives (R.A + 2y = -2 chain)",
        );
    }
    Ok(run)
}

/// H^1(qH - L) = 0 for q >= 0, via (L)^2 = 2g-2 > 0, eta not effective,
/// and (H + eta)^2 = 4p + 2(2(p-i)+1) > 0.
fn xi_h1cor(g: i64, p: i64) -> Result<Run, LatticeError> {
    let (lat, i) = xi_params(g, p)?;
    let mut run = Run::new(format!(
        "three arithmetic checks (q = 0, q = 1, q >= 2 cases); on {}",
        lat.name
    ));
    let l = hat_class(1, -1, 0);
    run.check(
        self_intersection(&lat, &l)? == 2 * g - 2 && 2 * g - 2 > 0,
        &l.coords,
        "(L)^2 != 2g-2 > 0",
    );
    let eta = hat_class(0, 1, 0);
    // +-eta have the aE + b.eta shape with b != 0, so they are not effective
    run.check(
        self_intersection(&lat, &eta)? == -4,
        &eta.coords,
        "(eta)^2 != -4",
    );
    let h_plus_eta = hat_class(1, 1, 0);
    let sq = self_intersection(&lat, &h_plus_eta)?;
    run.check(
        sq == 4 * p + 2 * (2 * (p - i) + 1) && sq > 0,
        &h_plus_eta.coords,
        "(H + eta)^2 not positive",
    );
    Ok(run)
}

/// L = H - eta is base point free: no elliptic class F with (F.L) = 1.
fn xi_l_bpf(g: i64, p: i64) -> Result<Run, LatticeError> {
    let (lat, i) = xi_params(g, p)?;
    let mut run = Run::new(format!(
        "a in 0..5 (F.E >= 0 gives a >= 0; F^2 = 0 with a = 0 forces F = bE of even \
         degree on L), c in -12..12, b solved from F.L = 1; for a >= 1 the identity \
         -4(c+a)^2 = a(a(2g-2) - 2) > 0 is contradictory; on {}",
        lat.name
    ));
    let l = hat_class(1, -1, 0);
    let d = 2 * p - 2 * i + 1;
    for a in 0..=5i64 {
        for c in -12..=12i64 {
            run.checked += 1;
            // F.L = a(4p+4) + c d + 2b - (a d - 4c) = 1
            let num = 1 - a * (4 * p + 4) - c * d + a * d - 4 * c;
            if num % 2 != 0 {
                continue;
            }
            let b = num / 2;
            let f = hat_class(a, c, b);
            debug_assert_eq!(pairing(&lat, &f, &l)?, 1);
            run.check(
                self_intersection(&lat, &f)? != 0,
                &f.coords,
                "elliptic class with F.L = 1 found",
            );
        }
    }
    Ok(run)
}

/// B = H - (2p+2-j)E - eta is not effective for j <= p: (B)^2 <= -6, and the
/// forced base component R = H + bE - eta with b <= -(p+2) has
/// (R)^2 = 4(b+i) - 2 <= -6 != -2.
fn xi_b_not_effective(g: i64, p: i64) -> Result<Run, LatticeError> {
    let (lat, i) = xi_params(g, p)?;
    let mut run = Run::new(format!(
        "j = 0..{p}; residual components H + bE - eta for b in -(p+10)..-(p+2), \
         square decreasing in b so the window bound 4(i-p-2) - 2 <= -6 covers all \
         smaller b; on {}",
        lat.name
    ));
    run.check(
        4 * (i - p - 2) - 2 <= -6,
        &[],
        "window bound 4(i-p-2)-2 <= -6 fails",
    );
    for j in 0..=p {
        let b_cl = hat_class(1, -1, -(2 * p + 2 - j));
        let sq = self_intersection(&lat, &b_cl)?;
        run.check(
            sq == 4 * (i + j) - 8 * p - 10 && sq <= -6,
            &b_cl.coords,
            "(B)^2 not <= -6",
        );
    }
    for b in -(p + 10)..=-(p + 2) {
        let r = hat_class(1, -1, b);
        let sq = self_intersection(&lat, &r)?;
        run.check(
            sq == 4 * (b + i) - 2 && sq != -2,
            &r.coords,
            "residual component is a (-2)-class",
        );
    }
    Ok(run)
}

fn view_coords(v: &NikulinView) -> Vec<i64> {
    let mut c = vec![v.a, v.b];
    c.extend_from_slice(&v.c2);
    c
}

/// Integer solutions of x^2 A - 2 x k + c = 0; empty when A = 0 is not hit.
fn integer_quadratic_roots(a_coef: i64, k: i64, c: i64) -> Vec<i64> {
    debug_assert!(a_coef > 0);
    let disc = (k as i128) * (k as i128) - (a_coef as i128) * (c as i128);
    if disc < 0 {
        return Vec::new();
    }
    let sq = (disc as f64).sqrt() as i128;
    let root = (sq - 2..=sq + 2).find(|r| r >= &0 && r * r == disc);
    let Some(root) = root else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for r in [root, -root] {
        let num = k as i128 + r;
        if num % a_coef as i128 == 0 {
            let x = num / a_coef as i128;
            if let Ok(x) = i64::try_from(x) {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        if root == 0 {
            break;
        }
    }
    out.sort_unstable();
    out
}

/// H = L - e is nef on the hyperelliptic Nikulin lattice: a rational curve
/// with (R.H) < 0 is truncated by Cauchy-Schwarz and the Hodge index theorem
/// to sum (2c_j)^2 <= 4, and both surviving coefficient patterns die.
fn nikulin_h_nef(g: i64) -> Result<Run, LatticeError> {
    let g = nikulin_g(g)?;
    let lat = make_lattice(LatticeKind::NikulinTHat, g, 0)?;
    let h = NikulinView::new(1, 0, [-1; 8])?;
    let mut run = Run::new(format!(
        "coefficient patterns with sum (2c_j)^2 <= 4, c_j <= 0, shared parity; \
         k = (R.L) in 0..sum|c_j|-1; a from the Hodge quadratic, b from k; \
         truncation: k^2 < 8 sum c_j^2 and (2g-2)(2 sum c_j^2 - 2) <= k^2 give \
         sum (2c_j)^2 < 4(g-1)/(g-3) <= 5 for g >= 11; on {}",
        lat.name
    ));
    // truncation inequality for these params: 4(g-1) <= 5(g-3) iff g >= 11
    run.check(4 * (g - 1) <= 5 * (g - 3), &[], "truncation needs g >= 11");
    run.check(h.self_int(g) == 2 * g - 6 && 2 * g - 6 > 0, &view_coords(&h), "(H)^2 <= 0");
    for pat in enumerate_nikulin_views((0, 0), (0, 0), 4, true) {
        let abs_c_sum = pat.c2.iter().map(|v| v.abs()).sum::<i64>() / 2;
        let sum_c_sq_times2 = pat.c2_norm() / 2; // = 2 sum c_j^2
        for k in 0..abs_c_sum {
            run.checked += 1;
            if (k % 2) != 0 {
                // k = a(2g-2) + 2b is even
                continue;
            }
            // a^2 (2g-2) - 2ak + (2 sum c^2 - 2) = 0
            for a in integer_quadratic_roots(2 * g - 2, k, sum_c_sq_times2 - 2) {
                let b = (k - a * (2 * g - 2)) / 2;
                let gamma = NikulinView::new(a, b, pat.c2)?;
                debug_assert_eq!(gamma.self_int(g), -2);
                debug_assert_eq!(gamma.pair(&NikulinView::new(1, 0, [0; 8])?, g), k);
                // the only solution chain ends at Gamma = -N_l, which is not
                // an effective curve class
                let minus_exceptional = gamma.a == 0
                    && gamma.b == 0
                    && gamma.c2_norm() == 4
                    && gamma.c2.iter().all(|&v| v <= 0);
                run.check(
                    minus_exceptional,
                    &view_coords(&gamma),
                    "candidate (-2)-curve with R.H < 0 survives",
                );
            }
        }
    }
    Ok(run)
}

/// H is base point free: an elliptic F with (F.H) = 1 is truncated to
/// c = 0 and k = 1, which contradicts the parity of k = a(2g-2) + 2b.
fn nikulin_h_bpf(g: i64) -> Result<Run, LatticeError> {
    let g = nikulin_g(g)?;
    let lat = make_lattice(LatticeKind::NikulinTHat, g, 0)?;
    let mut run = Run::new(format!(
        "patterns with sum (2c_j)^2 <= 4; k = 1 + sum|c_j|; nonzero patterns are \
         killed by (2g-2)(2 sum c_j^2) <= k^2 <= 1 + 12 sum c_j^2 \
         (i.e. (4g-16) sum c_j^2 <= 1), the zero pattern by parity; on {}",
        lat.name
    ));
    run.check(4 * g - 16 > 4, &[], "exclusion bound (4g-16) > 4 fails");
    for pat in enumerate_nikulin_views((0, 0), (0, 0), 4, true) {
        let abs_c_sum = pat.c2.iter().map(|v| v.abs()).sum::<i64>() / 2;
        let k = 1 + abs_c_sum;
        run.checked += 1;
        if pat.c2_norm() > 0 {
            // Hodge bound: (2g-2) * 2 sum c^2 <= k^2 must fail
            let lhs = (2 * g - 2) * (pat.c2_norm() / 2);
            run.check(lhs > k * k, &view_coords(&pat), "nonzero pattern not excluded");
            continue;
        }
        // zero pattern: solve F^2 = 0, F.L = k = 1
        let mut found = false;
        for a in integer_quadratic_roots(2 * g - 2, k, 0) {
            if (k - a * (2 * g - 2)) % 2 == 0 {
                found = true;
            }
        }
        run.check(!found, &view_coords(&pat), "elliptic F with F.H = 1 exists");
    }
    Ok(run)
}

/// E is the class of an irreducible elliptic curve: a rational R with
/// (R.E) < 0 has a < 0, b in {-a(g-1), 1-a(g-1)}, and each case is
/// arithmetically impossible.
fn nikulin_e_elliptic(g: i64) -> Result<Run, LatticeError> {
    let g = nikulin_g(g)?;
    let lat = make_lattice(LatticeKind::NikulinTHat, g, 0)?;
    let mut run = Run::new(format!(
        "patterns with sum (2c_j)^2 <= 4 (from (2g-2)(2 sum c_j^2 - 2) <= (R.L)^2 <= 4), \
         b in {{-a(g-1), 1-a(g-1)}}, a solved exactly over all a <= -1; on {}",
        lat.name
    ));
    // sum (2c)^2 <= 4 + 4/(g-1) < 5 for g > 5
    run.check(4 * (g - 1) + 4 < 5 * (g - 1), &[], "truncation needs g > 5");
    for pat in enumerate_nikulin_views((0, 0), (0, 0), 4, true) {
        let two_sum_c_sq = pat.c2_norm() / 2;
        run.checked += 1;
        // case b = -a(g-1): R^2 = -a^2(2g-2) - 2 sum c^2 = -2
        // => a^2 (2g-2) = 2 - 2 sum c^2
        let rhs = 2 - two_sum_c_sq;
        if rhs >= 0 && rhs % (2 * g - 2) == 0 {
            let a2 = rhs / (2 * g - 2);
            let a_int = (0..=2).find(|a| a * a == a2);
            if let Some(a) = a_int {
                let a = -a; // need a <= -1
                run.check(
                    a == 0,
                    &view_coords(&NikulinView::new(a, -a * (g - 1), pat.c2)?),
                    "case b = -a(g-1) yields a rational curve",
                );
            }
        }
        // case b = 1 - a(g-1): a^2(2g-2) - 4a + (2 sum c^2 - 2) = 0
        let roots = small_quadratic_roots(2 * g - 2, -4, two_sum_c_sq - 2);
        for a in roots {
            run.check(
                a >= 0,
                &view_coords(&NikulinView::new(a, 1 - a * (g - 1), pat.c2)?),
                "case b = 1-a(g-1) yields a rational curve with a < 0",
            );
        }
    }
    Ok(run)
}

/// Integer roots of A x^2 + B x + C = 0 with A > 0.
fn small_quadratic_roots(a: i64, b: i64, c: i64) -> Vec<i64> {
    let disc = (b as i128) * (b as i128) - 4 * (a as i128) * (c as i128);
    if disc < 0 {
        return Vec::new();
    }
    let sq = (disc as f64).sqrt() as i128;
    let Some(root) = (sq.max(2) - 2..=sq + 2).find(|r| r * r == disc) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for r in [root, -root] {
        let num = -(b as i128) + r;
        if num % (2 * a as i128) == 0 {
            if let Ok(x) = i64::try_from(num / (2 * a as i128)) {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        if root == 0 {
            break;
        }
    }
    out
}

/// L - (g-1)/2 E is base point free for odd g: the forced component is
/// either L + bE with 2(g-1) + 4b = -2 (impossible mod 4 for odd g) or
/// M - N_l, which meets M trivially.
fn nikulin_l_half_bpf(g: i64) -> Result<Run, LatticeError> {
    let g = nikulin_g(g)?;
    let lat = make_lattice(LatticeKind::NikulinTHat, g, 0)?;
    let m = NikulinView::new(1, -(g - 1) / 2, [0; 8])?;
    let mut run = Run::new(format!(
        "patterns with sum (2c_j)^2 <= 4 (from (L + bE)^2 <= 0 and R^2 = -2), a = 1 \
         forced, b <= -(g-1)/2; zero pattern killed mod 4, unit pattern meets M \
         trivially; on {}",
        lat.name
    ));
    run.check(m.self_int(g) == 0, &view_coords(&m), "M^2 != 0");
    run.check(
        m.pair(&NikulinView::new(1, 0, [0; 8])?, g) == g - 1 && g - 1 > 0,
        &view_coords(&m),
        "M.L != g-1",
    );
    for pat in enumerate_nikulin_views((0, 0), (0, 0), 4, true) {
        run.checked += 1;
        if pat.c2_norm() == 0 {
            // R = L + bE: R^2 = 2g-2+4b = -2 iff 4 | 2g, impossible for odd g
            run.check((2 * g) % 4 != 0, &view_coords(&pat), "2g = 0 mod 4");
            continue;
        }
        // single unit pattern: R = L + bE - N_l with 2g-2+4b-2 = -2 forces
        // b = (1-g)/2 and R = M - N_l
        if (2 - 2 * g) % 4 != 0 {
            // b = (2 - 2g)/4 must be integral for a candidate to exist at all
            continue;
        }
        let b = (2 - 2 * g) / 4;
        let r = NikulinView::new(1, b, pat.c2)?;
        if r.self_int(g) != -2 {
            continue;
        }
        run.check(
            r.pair(&m, g) == 0,
            &view_coords(&r),
            "component meets M negatively",
        );
    }
    Ok(run)
}

/// cE - e is not effective for any integer c: negative c has negative degree
/// against L; nonnegative c descends to a smaller counterexample.
fn nikulin_ce_minus_e(g: i64, c_lo: i64, c_hi: i64) -> Result<Run, LatticeError> {
    let g = nikulin_g(g)?;
    if c_lo > c_hi || c_hi - c_lo > 1000 {
        return Err(LatticeError::BadParams {
            kind: "nikulin.cE_minus_e".into(),
            reason: "bad c range".into(),
        });
    }
    let lat = make_lattice(LatticeKind::NikulinTHat, g, 0)?;
    let l = NikulinView::new(1, 0, [0; 8])?;
    let mut run = Run::new(format!(
        "c in {c_lo}..{c_hi}; c < 0 killed by (cE - e).L = 2c < 0; for c >= 0 every \
         component candidate R = bE - N_l (b >= 1, from R^2 = -2 and parity) descends \
         to (c-b)E - e with c-b < c, so a minimal counterexample cannot exist; on {}",
        lat.name
    ));
    for c in c_lo..=c_hi {
        let d = NikulinView::new(0, c, [-1; 8])?;
        run.check(d.self_int(g) == -4, &view_coords(&d), "(cE-e)^2 != -4");
        if c < 0 {
            run.check(d.pair(&l, g) == 2 * c && 2 * c < 0, &view_coords(&d), "degree");
            continue;
        }
        // component candidates: a = 0 forced (intersections with E),
        // sum c_j^2 = 1 forced by R^2 = -2 and parity
        for pat in enumerate_nikulin_views((0, 0), (0, 0), 4, true) {
            if pat.c2_norm() != 4 {
                continue;
            }
            for b in 0..=(c_hi + 1) {
                run.checked += 1;
                let r = NikulinView::new(0, b, pat.c2)?;
                if r.self_int(g) != -2 {
                    run.check(false, &view_coords(&r), "pattern square mismatch");
                    continue;
                }
                if b == 0 {
                    // R = -N_l is not effective
                    continue;
                }
                // residual (cE - e) - R = (c-b)E - e + N_l meets N_l in -1,
                // so N_l splits off and (c-b)E - e is effective with c-b < c
                let residual_against_nl = {
                    // N_l has doubled coefficients +2 at the slot where pat has -2
                    let slot = pat.c2.iter().position(|&v| v == -2).unwrap();
                    let mut nl = [0i64; 8];
                    nl[slot] = 2;
                    let nl = NikulinView::new(0, 0, nl)?;
                    let mut res_c2 = [-1i64; 8];
                    res_c2[slot] = 1;
                    let res = NikulinView::new(0, c - b, res_c2)?;
                    res.pair(&nl, g)
                };
                run.check(
                    residual_against_nl == -1 && c - b < c,
                    &view_coords(&r),
                    "descent step fails",
                );
            }
        }
    }
    Ok(run)
}
