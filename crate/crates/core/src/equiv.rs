//! Unimodular-equivalence machinery: canonical forms, isomorphism testing,
//! and explicit witness maps p ↦ A·p + t with |det A| = 1.

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;

use crate::geom::{det3, hull, point, LatticePolytope3, Point3};
use crate::intlin::{hnf_left, IntMatrix};
use crate::Error;

/// An affine lattice automorphism of ℤ³: p ↦ A·p + t with |det A| = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineUnimodularMap {
    a: IntMatrix,
    t: Point3,
}

impl AffineUnimodularMap {
    pub fn new(a: IntMatrix, t: Point3) -> Result<Self, Error> {
        if a.rows() != 3 || a.cols() != 3 {
            return Err(Error::NonSquareMatrix {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let d = a.det()?;
        if !d.magnitude().is_one() {
            return Err(Error::NonUnimodular { det: d });
        }
        Ok(AffineUnimodularMap { a, t })
    }

    /// Build from machine-integer rows of A and the translation t.
    pub fn from_rows(rows: [[i64; 3]; 3], t: (i64, i64, i64)) -> Result<Self, Error> {
        let a = IntMatrix::from_i64_rows(&[&rows[0], &rows[1], &rows[2]]);
        AffineUnimodularMap::new(a, point(t.0, t.1, t.2))
    }

    pub fn identity() -> Self {
        AffineUnimodularMap {
            a: IntMatrix::identity(3),
            t: Point3::origin(),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn translation(&self) -> &Point3 {
        &self.t
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        let row = |i: usize| {
            self.a.get(i, 0) * &p.x + self.a.get(i, 1) * &p.y + self.a.get(i, 2) * &p.z
        };
        Point3::new(row(0) + &self.t.x, row(1) + &self.t.y, row(2) + &self.t.z)
    }

    /// The inverse map: p ↦ A⁻¹·(p − t).
    pub fn inverse(&self) -> AffineUnimodularMap {
        let ainv = self
            .a
            .inverse_unimodular()
            .expect("type invariant: |det A| = 1");
        let mt = AffineUnimodularMap {
            a: ainv.clone(),
            t: Point3::origin(),
        }
        .apply(&self.t)
        .neg();
        AffineUnimodularMap { a: ainv, t: mt }
    }

    /// self ∘ inner: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &AffineUnimodularMap) -> AffineUnimodularMap {
        AffineUnimodularMap {
            a: self.a.mul(&inner.a),
            t: self.apply(&inner.t),
        }
    }
}

/// Canonical representative of a polytope's unimodular-equivalence class:
/// the lexicographically least sorted image of the lattice points over all
/// vertex frames. Two polytopes are equivalent iff their forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub points: Vec<Point3>,
    pub size: usize,
}

/// Canonical form together with a map φ realizing it: φ(P)'s sorted lattice
/// points are exactly `form.points`.
pub fn canonical_form_with_witness(p: &LatticePolytope3) -> (CanonicalForm, AffineUnimodularMap) {
    let verts = p.vertices();
    let mut best: Option<(Vec<Point3>, AffineUnimodularMap)> = None;
    for v0 in verts {
        let diffs: Vec<Point3> = verts
            .iter()
            .filter(|v| *v != v0)
            .map(|v| v.sub(v0))
            .collect();
        for (i, d1) in diffs.iter().enumerate() {
            for (j, d2) in diffs.iter().enumerate() {
                if j == i || d1.cross(d2).is_zero() {
                    continue;
                }
                for (k, d3) in diffs.iter().enumerate() {
                    if k == i || k == j || det3(d1, d2, d3) == BigInt::from(0) {
                        continue;
                    }
                    let frame = IntMatrix::from_rows(&[
                        vec![d1.x.clone(), d2.x.clone(), d3.x.clone()],
                        vec![d1.y.clone(), d2.y.clone(), d3.y.clone()],
                        vec![d1.z.clone(), d2.z.clone(), d3.z.clone()],
                    ]);
                    let u = hnf_left(&frame).u;
                    let phi = AffineUnimodularMap {
                        t: AffineUnimodularMap {
                            a: u.clone(),
                            t: Point3::origin(),
                        }
                        .apply(v0)
                        .neg(),
                        a: u,
                    };
                    let mut image: Vec<Point3> =
                        p.lattice_points().iter().map(|q| phi.apply(q)).collect();
                    image.sort();
                    let better = match &best {
                        None => true,
                        Some((b, _)) => image < *b,
                    };
                    if better {
                        best = Some((image, phi));
                    }
                }
            }
        }
    }
    let (points, phi) = best.expect("full-dimensional polytope has a vertex frame");
    let size = points.len();
    (CanonicalForm { points, size }, phi)
}

pub fn canonical_form(p: &LatticePolytope3) -> CanonicalForm {
    canonical_form_with_witness(p).0
}

pub fn are_isomorphic(p: &LatticePolytope3, q: &LatticePolytope3) -> bool {
    if p.size() != q.size() || p.vertices().len() != q.vertices().len() {
        return false;
    }
    canonical_form(p) == canonical_form(q)
}

/// A unimodular map sending P ∩ ℤ³ onto Q ∩ ℤ³, when one exists; recovered
/// by replaying the canonical frames of both sides and composing.
pub fn find_isomorphism(
    p: &LatticePolytope3,
    q: &LatticePolytope3,
) -> Option<AffineUnimodularMap> {
    let (cf_p, phi_p) = canonical_form_with_witness(p);
    let (cf_q, phi_q) = canonical_form_with_witness(q);
    if cf_p != cf_q {
        return None;
    }
    let phi = phi_q.inverse().compose(&phi_p);
    let mut image: Vec<Point3> = p.lattice_points().iter().map(|x| phi.apply(x)).collect();
    image.sort();
    assert_eq!(
        image,
        q.lattice_points(),
        "canonical frames must replay to an exact lattice-point bijection"
    );
    Some(phi)
}

/// Hull of the image of P under φ. Lattice-point sets map bijectively, so
/// size, volume and all lattice invariants are preserved.
pub fn apply_map(phi: &AffineUnimodularMap, p: &LatticePolytope3) -> LatticePolytope3 {
    let mapped: Vec<Point3> = p.vertices().iter().map(|v| phi.apply(v)).collect();
    let image = hull(&mapped).expect("unimodular image of a 3-polytope is a 3-polytope");
    debug_assert_eq!(image.size(), p.size());
    image
}

/// A pseudorandom map with small entries: a few shear steps, a coordinate
/// permutation, sign flips, and a bounded translation. Suitable for
/// invariance testing (entry growth is kept modest so that re-enumeration
/// of lattice points in the image stays cheap).
pub fn random_unimodular_map<R: Rng + ?Sized>(rng: &mut R) -> AffineUnimodularMap {
    let mut a = IntMatrix::identity(3);
    for _ in 0..6 {
        let i = rng.gen_range(0..3);
        let mut j = rng.gen_range(0..2);
        if j >= i {
            j += 1;
        }
        let c = if rng.gen::<bool>() { 1 } else { -1 };
        a.add_multiple_of_row(i, j, &BigInt::from(c));
    }
    // Random coordinate permutation.
    let perm = rng.gen_range(0..6);
    let swaps: &[(usize, usize)] = match perm {
        0 => &[],
        1 => &[(0, 1)],
        2 => &[(0, 2)],
        3 => &[(1, 2)],
        4 => &[(0, 1), (1, 2)],
        _ => &[(0, 2), (1, 2)],
    };
    for &(x, y) in swaps {
        a.swap_rows(x, y);
    }
    for i in 0..3 {
        if rng.gen::<bool>() {
            a.negate_row(i);
        }
    }
    let t = point(
        rng.gen_range(-4..=4),
        rng.gen_range(-4..=4),
        rng.gen_range(-4..=4),
    );
    AffineUnimodularMap::new(a, t).expect("construction preserves |det| = 1")
}
