//! Point-evaluation models of embedded curves. The section ring of the
//! bundle is represented by the value vectors of section bases at a fixed
//! list of rational points: multiplication of sections is literal pointwise
//! multiplication of vectors, and each graded piece is a subspace of F_p^N
//! in reduced row-echelon form.
//!
//! Faithfulness needs enough points (a section of `L^q` vanishing at more
//! than `deg L^q` points is zero); the constructors take three times the top
//! graded dimension and verify every graded dimension against the expected
//! count before the model is used.

use super::KoszulError;
use crate::curvemodel::genus4::Genus4Curve;
use crate::curvemodel::hyperelliptic::{Divisor, HyperellipticCurve, Place};
use crate::curvemodel::quartic::PlaneQuartic;
use crate::exactla::Prime;
use rand::seq::SliceRandom;
use rand::Rng;

/// A subspace of `F_p^N` held as reduced row-echelon basis rows.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub prime: Prime,
    pub ambient: usize,
    pub basis: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn empty(prime: Prime, ambient: usize) -> Self {
        Subspace {
            prime,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows(prime: Prime, rows: Vec<Vec<u64>>, ambient: usize) -> Self {
        let mut s = Subspace::empty(prime, ambient);
        for row in rows {
            s.insert(row);
        }
        s
    }

    /// Reduce a vector into the echelon basis and insert it if independent;
    /// returns whether the dimension grew. Rows stay sorted by pivot.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        let p = self.prime;
        debug_assert_eq!(row.len(), self.ambient);
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = row[pc];
            if c != 0 {
                for (r, &bv) in row.iter_mut().zip(b) {
                    *r = p.sub(*r, p.mul(c, bv));
                }
            }
        }
        let Some(pc) = row.iter().position(|&v| v != 0) else {
            return false;
        };
        let inv = p.inv(row[pc]);
        for v in row.iter_mut() {
            *v = p.mul(*v, inv);
        }
        // back-substitute into the existing rows
        for b in self.basis.iter_mut() {
            let c = b[pc];
            if c != 0 {
                for (bv, &rv) in b.iter_mut().zip(&row) {
                    *bv = p.sub(*bv, p.mul(c, rv));
                }
            }
        }
        let at = self.pivots.partition_point(|&x| x < pc);
        self.basis.insert(at, row);
        self.pivots.insert(at, pc);
        true
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a vector in the echelon basis; `None` when the vector
    /// is outside the subspace.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        let p = self.prime;
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = residual[pc];
            coords.push(c);
            if c != 0 {
                for (r, &bv) in residual.iter_mut().zip(b) {
                    *r = p.sub(*r, p.mul(c, bv));
                }
            }
        }
        if residual.iter().all(|&x| x == 0) {
            Some(coords)
        } else {
            None
        }
    }
}

/// Identification data carried into every table built from the model.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ModelMeta {
    pub id: String,
    pub genus: i64,
    pub degree: i64,
    pub prime: u64,
    pub seed: u64,
}

/// A curve embedded by the sections of a bundle, with graded pieces
/// `R_0, ..., R_qmax` of the section ring as value subspaces.
#[derive(Debug, Clone)]
pub struct PointModel {
    pub prime: Prime,
    pub meta: ModelMeta,
    pub npoints: usize,
    pub graded: Vec<Subspace>,
}

impl PointModel {
    pub fn qmax(&self) -> usize {
        self.graded.len() - 1
    }

    /// dim R_q, zero outside the stored range below zero.
    pub fn dim_r(&self, q: i64) -> Option<usize> {
        if q < 0 {
            return Some(0);
        }
        self.graded.get(q as usize).map(|s| s.dim())
    }

    /// Number of independent linear sections, i.e. `r + 1`.
    pub fn embedding_dim(&self) -> usize {
        self.graded[1].dim()
    }

    fn verify_dims(&self, expected: &[usize]) -> Result<(), KoszulError> {
        for (q, (&exp, sub)) in expected.iter().zip(&self.graded).enumerate() {
            if sub.dim() != exp {
                return Err(KoszulError::DegenerateModel(format!(
                    "{}: dim R_{q} = {} but expected {exp}",
                    self.meta.id,
                    sub.dim()
                )));
            }
        }
        Ok(())
    }

    fn from_value_rows(
        prime: Prime,
        meta: ModelMeta,
        npoints: usize,
        rows_per_degree: Vec<Vec<Vec<u64>>>,
        expected: &[usize],
    ) -> Result<Self, KoszulError> {
        let graded = rows_per_degree
            .into_iter()
            .map(|rows| Subspace::from_rows(prime, rows, npoints))
            .collect();
        let model = PointModel {
            prime,
            meta,
            npoints,
            graded,
        };
        model.verify_dims(expected)?;
        Ok(model)
    }

    /// Rational normal curve of the given degree: the section ring of
    /// `O(deg)` on the projective line, evaluated at distinct parameters.
    pub fn rational_normal_curve(
        prime: Prime,
        deg: usize,
        qmax: usize,
        seed: u64,
    ) -> Result<Self, KoszulError> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let n = 3 * (deg * qmax + 1);
        if n as u64 > prime.get() {
            return Err(KoszulError::DegenerateModel("field too small".into()));
        }
        let mut params: Vec<u64> = (0..prime.get()).collect();
        params.shuffle(&mut rng);
        params.truncate(n);
        let mut rows_per_degree = Vec::with_capacity(qmax + 1);
        let mut expected = Vec::with_capacity(qmax + 1);
        for q in 0..=qmax {
            let top = deg * q;
            let rows: Vec<Vec<u64>> = (0..=top)
                .map(|k| params.iter().map(|&t| prime.pow(t, k as u64)).collect())
                .collect();
            rows_per_degree.push(rows);
            expected.push(top + 1);
        }
        let meta = ModelMeta {
            id: format!("rnc d={deg} seed={seed}"),
            genus: 0,
            degree: deg as i64,
            prime: prime.get(),
            seed,
        };
        Self::from_value_rows(prime, meta, n, rows_per_degree, &expected)
    }

    /// Embedded hyperelliptic curve: the section ring of `O(D)` with bases
    /// from the Riemann-Roch machinery, evaluated away from the support and
    /// the clearing denominators. `expected[q]` must give `h^0(qD)`.
    pub fn from_hyperelliptic(
        curve: &HyperellipticCurve,
        d: &Divisor,
        qmax: usize,
        expected: &[usize],
        id: String,
        seed: u64,
        rng: &mut impl Rng,
    ) -> Result<Self, KoszulError> {
        let p = curve.prime;
        let mut bases = Vec::with_capacity(qmax + 1);
        for q in 0..=qmax {
            let dq = d.scale(q as i64);
            bases.push(curve.rr_basis(&dq).map_err(KoszulError::Curve)?);
        }
        // evaluation points: affine, away from supports, denominators and
        // Weierstrass points
        let forbidden_x: Vec<u64> = d
            .support
            .keys()
            .filter_map(|pl| match pl {
                Place::Affine { x, .. } => Some(*x),
                Place::Weierstrass { x } => Some(*x),
                Place::Infinity { .. } => None,
            })
            .chain(curve.weierstrass_x.iter().copied())
            .chain(bases.iter().flat_map(|b| {
                b.den
                    .rational_roots()
                    .unwrap_or_default()
                    .into_iter()
                    .map(|(r, _)| r)
            }))
            .collect();
        let top = *expected.last().unwrap_or(&1);
        let n = 3 * top.max(4);
        let mut points = Vec::with_capacity(n);
        let mut x = 0u64;
        while points.len() < n && x < p.get() {
            if !forbidden_x.contains(&x) {
                let fx = curve.f.eval(x);
                if let Some(y) = p.sqrt(fx) {
                    points.push((x, y));
                    if points.len() < n {
                        points.push((x, p.neg(y)));
                    }
                }
            }
            x += 1;
        }
        if points.len() < n {
            return Err(KoszulError::DegenerateModel(
                "not enough rational points off the support".into(),
            ));
        }
        points.shuffle(rng);
        let rows_per_degree: Vec<Vec<Vec<u64>>> = bases
            .iter()
            .map(|basis| {
                basis
                    .functions
                    .iter()
                    .map(|(a, b)| {
                        points
                            .iter()
                            .map(|&(x, y)| {
                                let num = p.add(a.eval(x), p.mul(b.eval(x), y));
                                p.mul(num, p.inv(basis.den.eval(x)))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let meta = ModelMeta {
            id,
            genus: curve.genus,
            degree: d.degree(),
            prime: p.get(),
            seed,
        };
        Self::from_value_rows(p, meta, n, rows_per_degree, expected)
    }

    /// Plane quartic with `L = O(n)(-Z)`: graded pieces are degree `nq` forms
    /// vanishing to order `q m_z` along the curve at each point of Z.
    pub fn from_quartic(
        quartic: &PlaneQuartic,
        n: usize,
        z: &[([u64; 3], usize)],
        qmax: usize,
        id: String,
        seed: u64,
        rng: &mut impl Rng,
    ) -> Result<Self, KoszulError> {
        let p = quartic.prime;
        let degree = 4 * n as i64 - z.iter().map(|&(_, m)| m as i64).sum::<i64>();
        let g = 3i64;
        let mut expected = vec![1usize];
        for q in 1..=qmax {
            let deg_q = degree * q as i64;
            let h0 = if deg_q >= 2 * g - 1 {
                (deg_q - g + 1) as usize
            } else if n == 1 && z.is_empty() && q == 1 {
                g as usize // the canonical bundle itself
            } else {
                return Err(KoszulError::DegenerateModel(
                    "unsupported special twist".into(),
                ));
            };
            expected.push(h0);
        }
        // sample curve points away from Z
        let top = *expected.last().unwrap();
        let npts = 3 * top.max(4);
        let mut pts: Vec<[u64; 3]> = quartic
            .points
            .iter()
            .copied()
            .filter(|pt| pt[2] == 1 && !z.iter().any(|&(zp, _)| zp == *pt))
            .collect();
        pts.shuffle(rng);
        pts.truncate(npts);
        if pts.len() < npts {
            return Err(KoszulError::DegenerateModel("too few points".into()));
        }
        let mut rows_per_degree = vec![vec![vec![1u64; npts]]];
        for q in 1..=qmax {
            let conditions: Vec<([u64; 3], usize)> =
                z.iter().map(|&(zp, m)| (zp, m * q)).collect();
            let forms = quartic.form_space(n * q, &conditions);
            let rows: Vec<Vec<u64>> = forms
                .iter()
                .map(|coeffs| {
                    pts.iter()
                        .map(|&pt| crate::curvemodel::quartic::eval_form(p, coeffs, n * q, pt))
                        .collect()
                })
                .collect();
            rows_per_degree.push(rows);
        }
        let meta = ModelMeta {
            id,
            genus: 3,
            degree,
            prime: p.get(),
            seed,
        };
        Self::from_value_rows(p, meta, npts, rows_per_degree, &expected)
    }

    /// Genus-4 canonical model: graded pieces are the bidegree (q, q)
    /// monomial values on the curve in the two ruling parameters.
    pub fn from_genus4(
        curve: &Genus4Curve,
        qmax: usize,
        id: String,
        seed: u64,
        rng: &mut impl Rng,
    ) -> Result<Self, KoszulError> {
        let p = curve.prime;
        let mut expected = vec![1usize, 4];
        for q in 2..=qmax {
            expected.push(6 * q - 3);
        }
        expected.truncate(qmax + 1);
        let top = *expected.last().unwrap();
        let npts = 3 * top.max(4);
        let mut pts = curve.points.clone();
        pts.shuffle(rng);
        pts.truncate(npts);
        let mut rows_per_degree = Vec::with_capacity(qmax + 1);
        for q in 0..=qmax {
            rows_per_degree.push(curve.monomial_values(q, &pts));
        }
        let meta = ModelMeta {
            id,
            genus: 4,
            degree: 6,
            prime: p.get(),
            seed,
        };
        Self::from_value_rows(p, meta, npts, rows_per_degree, &expected)
    }
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
    fn subspace_echelon_and_coordinates() {
        let p = prime();
        let s = Subspace::from_rows(
            p,
            vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]],
            4,
        );
        assert_eq!(s.dim(), 2);
        // member vector: 3 * row1 + 5 * row3
        let v: Vec<u64> = (0..4)
            .map(|k| p.add(p.mul(3, [1, 2, 3, 4][k]), p.mul(5, [0, 1, 1, 0][k])))
            .collect();
        let coords = s.coordinates(&v).unwrap();
        let mut rebuilt = vec![0u64; 4];
        for (c, b) in coords.iter().zip(&s.basis) {
            for k in 0..4 {
                rebuilt[k] = p.add(rebuilt[k], p.mul(*c, b[k]));
            }
        }
        assert_eq!(rebuilt, v);
        // non-member
        assert!(s.coordinates(&[1, 0, 0, 0]).is_none());
    }

    #[test]
    fn rnc_model_dimensions() {
        let m = PointModel::rational_normal_curve(prime(), 3, 3, 1).unwrap();
        assert_eq!(m.embedding_dim(), 4);
        assert_eq!(m.dim_r(2), Some(7));
        assert_eq!(m.dim_r(3), Some(10));
        assert_eq!(m.dim_r(-1), Some(0));
    }

    #[test]
    fn hyperelliptic_model_dimensions() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let c = HyperellipticCurve::split_model(prime(), 2, &mut rng).unwrap();
        // L of degree 2g = 4: nonspecial, h0(qL) = 4q - 1
        let mut l = Divisor::zero();
        for _ in 0..4 {
            l.add_place(c.random_affine_place(&mut rng), 1);
        }
        let expected = [1usize, 3, 7, 11];
        let m = PointModel::from_hyperelliptic(&c, &l, 3, &expected, "hyp g=2".into(), 5, &mut rng)
            .unwrap();
        assert_eq!(m.embedding_dim(), 3);
        // products of linear sections stay inside the ring
        let v = &m.graded[1].basis[0];
        let w = &m.graded[1].basis[1];
        let prod: Vec<u64> = v
            .iter()
            .zip(w)
            .map(|(&a, &b)| m.prime.mul(a, b))
            .collect();
        assert!(m.graded[2].coordinates(&prod).is_some());
    }
}
