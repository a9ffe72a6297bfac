//! Bounded enumeration of lattice classes, the engine behind the finite case
//! analyses in the certifiers.

use super::{pairing, GramLattice, LatticeClass, LatticeError, NikulinView};

/// Inclusive per-coordinate bounds defining a finite search box.
#[derive(Debug, Clone)]
pub struct BoxBounds(pub Vec<(i64, i64)>);

impl BoxBounds {
    /// A symmetric box `|x_i| <= radius` in every coordinate.
    pub fn symmetric(rank: usize, radius: i64) -> Self {
        BoxBounds(vec![(-radius, radius); rank])
    }

    fn volume(&self) -> Option<u64> {
        let mut vol: u64 = 1;
        for &(lo, hi) in &self.0 {
            if hi < lo {
                return Some(0);
            }
            let width = u64::try_from(hi - lo).ok()?.checked_add(1)?;
            vol = vol.checked_mul(width)?;
        }
        Some(vol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// A linear constraint `pairing(x, class) cmp bound`.
#[derive(Debug, Clone)]
pub struct LinearConstraint {
    pub class: LatticeClass,
    pub cmp: Cmp,
    pub bound: i64,
}

impl LinearConstraint {
    fn satisfied(&self, lat: &GramLattice, x: &LatticeClass) -> Result<bool, LatticeError> {
        let v = pairing(lat, x, &self.class)?;
        Ok(match self.cmp {
            Cmp::Le => v <= self.bound,
            Cmp::Ge => v >= self.bound,
            Cmp::Eq => v == self.bound,
        })
    }
}

const MAX_BOX_VOLUME: u64 = 200_000_000;

/// Complete list of integer vectors in the box with the requested
/// self-intersection (when given) and satisfying all linear constraints.
/// Refuses boxes whose volume exceeds an explicit cap, which is how an
/// accidentally unbounded search manifests.
pub fn enumerate_classes(
    lat: &GramLattice,
    self_int: Option<i64>,
    bounds: &BoxBounds,
    constraints: &[LinearConstraint],
) -> Result<Vec<LatticeClass>, LatticeError> {
    if bounds.0.len() != lat.rank {
        return Err(LatticeError::DimensionMismatch {
            got: bounds.0.len(),
            rank: lat.rank,
        });
    }
    match bounds.volume() {
        Some(v) if v <= MAX_BOX_VOLUME => {}
        _ => {
            return Err(LatticeError::Unbounded(format!(
                "box volume exceeds {MAX_BOX_VOLUME}"
            )))
        }
    }
    let mut out = Vec::new();
    let mut coords = vec![0i64; lat.rank];
    enumerate_rec(lat, self_int, bounds, constraints, &mut coords, 0, &mut out)?;
    Ok(out)
}

fn enumerate_rec(
    lat: &GramLattice,
    self_int: Option<i64>,
    bounds: &BoxBounds,
    constraints: &[LinearConstraint],
    coords: &mut Vec<i64>,
    depth: usize,
    out: &mut Vec<LatticeClass>,
) -> Result<(), LatticeError> {
    if depth == lat.rank {
        let x = LatticeClass::new(coords.clone());
        if let Some(s) = self_int {
            if super::self_intersection(lat, &x)? != s {
                return Ok(());
            }
        }
        for c in constraints {
            if !c.satisfied(lat, &x)? {
                return Ok(());
            }
        }
        out.push(x);
        return Ok(());
    }
    let (lo, hi) = bounds.0[depth];
    for v in lo..=hi {
        coords[depth] = v;
        enumerate_rec(lat, self_int, bounds, constraints, coords, depth + 1, out)?;
    }
    Ok(())
}

/// All Nikulin coefficient views `a L + b E + sum c_j N_j` with
/// `sum (2c_j)^2 <= c2_bound`, the doubled coefficients sharing a parity,
/// and `(a, b)` in the given ranges. `b_range` must be `(0, 0)` on the
/// rank-9 lattice.
pub fn enumerate_nikulin_views(
    a_range: (i64, i64),
    b_range: (i64, i64),
    c2_bound: i64,
    require_nonpositive_c: bool,
) -> Vec<NikulinView> {
    let mut views = Vec::new();
    let mut c2 = [0i64; 8];
    for parity in 0..2i64 {
        collect_c2(&mut c2, 0, parity, c2_bound, require_nonpositive_c, &mut |c2| {
            for a in a_range.0..=a_range.1 {
                for b in b_range.0..=b_range.1 {
                    views.push(NikulinView { a, b, c2: *c2 });
                }
            }
        });
    }
    views
}

fn collect_c2(
    c2: &mut [i64; 8],
    idx: usize,
    parity: i64,
    budget: i64,
    nonpositive: bool,
    f: &mut impl FnMut(&[i64; 8]),
) {
    if idx == 8 {
        // in the odd-parity pass every entry is odd, so the zero vector is
        // visited exactly once (in the even pass)
        f(c2);
        return;
    }
    let mut v = parity;
    while v * v <= budget {
        let signs: &[i64] = if v == 0 { &[0] } else { &[v, -v] };
        for &s in signs {
            if nonpositive && s > 0 {
                continue;
            }
            c2[idx] = s;
            collect_c2(c2, idx + 1, parity, budget - v * v, nonpositive, f);
        }
        v += 2;
    }
    c2[idx] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{make_lattice, LatticeKind};

    #[test]
    fn theta_hat_has_no_minus_two_classes() {
        // implied by the divisibility criterion; cross-checked by brute force
        for (g, p) in [(9, 3), (11, 6), (21, 12)] {
            let lat = make_lattice(LatticeKind::ThetaHat, g, p).unwrap();
            let found =
                enumerate_classes(&lat, Some(-2), &BoxBounds::symmetric(3, 12), &[]).unwrap();
            assert!(found.is_empty(), "(-2)-class found in {}", lat.name);
        }
    }

    #[test]
    fn contradictory_constraints_give_empty_list() {
        let lat = make_lattice(LatticeKind::Theta, 9, 4).unwrap();
        let h = LatticeClass::new(vec![1, 0]);
        let cs = [
            LinearConstraint {
                class: h.clone(),
                cmp: Cmp::Ge,
                bound: 1,
            },
            LinearConstraint {
                class: h,
                cmp: Cmp::Le,
                bound: 0,
            },
        ];
        let found = enumerate_classes(&lat, None, &BoxBounds::symmetric(2, 4), &cs).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn oversized_box_is_refused() {
        let lat = make_lattice(LatticeKind::NikulinTHat, 11, 0).unwrap();
        let err = enumerate_classes(&lat, None, &BoxBounds::symmetric(10, 100), &[]);
        assert!(matches!(err, Err(LatticeError::Unbounded(_))));
    }

    #[test]
    fn nikulin_c_vector_count_matches_direct_count() {
        // With sum (2c_j)^2 <= 4 and a shared parity the admissible c-vectors
        // are the zero vector and the 16 signed unit patterns (one |2c_j| = 2):
        // odd parity needs sum >= 8. Direct count: 1 + 8*2 = 17.
        let views = enumerate_nikulin_views((0, 0), (0, 0), 4, false);
        assert_eq!(views.len(), 17);
        let zero = views.iter().filter(|v| v.c2 == [0; 8]).count();
        assert_eq!(zero, 1);
        let units = views
            .iter()
            .filter(|v| v.c2_norm() == 4 && v.c2.iter().filter(|&&x| x != 0).count() == 1)
            .count();
        assert_eq!(units, 16);

        // Raising the budget to 8 adds the C(8,2)*4 = 112 two-unit patterns
        // and the 2^8 = 256 all-half odd-parity vectors: 17 + 112 + 256 = 385.
        let views = enumerate_nikulin_views((0, 0), (0, 0), 8, false);
        assert_eq!(views.len(), 385);

        // with the nonpositive restriction: zero, 8 single (-2)s, C(8,2) = 28
        // double (-2)s, and 1 all-(-1): 38
        let views = enumerate_nikulin_views((0, 0), (0, 0), 8, true);
        assert_eq!(views.len(), 38);
    }
}
