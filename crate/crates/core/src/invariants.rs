//! Lattice invariants: sublattice index, certified width, h*-vector with an
//! Ehrhart-series cross-check, empty tetrahedra, the volume-partition
//! certificate, unimodular-tetrahedron search, and the h* laws.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::geom::{det3, Facet, LatticePolytope3, Point3};
use crate::intlin::{hnf_left, snf, IntMatrix};
use crate::Error;

/// Numerator coefficients of the Ehrhart series: (h₀*, …, h_s*) with h₀* = 1
/// and the trailing coefficient nonzero (s ≤ 3 in dimension 3).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HStarVector {
    coefficients: Vec<BigInt>,
}

impl HStarVector {
    fn from_full(mut coeffs: Vec<BigInt>) -> Result<Self, Error> {
        if coeffs.iter().any(|c| c.is_negative()) {
            return Err(Error::InternalInconsistency(format!(
                "negative h* coefficient in {coeffs:?}"
            )));
        }
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(HStarVector {
            coefficients: coeffs,
        })
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Degree s (index of the last nonzero coefficient).
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// h_i*, zero beyond the degree.
    pub fn get(&self, i: usize) -> BigInt {
        self.coefficients.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Σ h_i* (equals the normalized volume).
    pub fn sum(&self) -> BigInt {
        self.coefficients.iter().sum()
    }

    /// Positions 1 ≤ i < s with h_i* = 0.
    pub fn gaps(&self) -> Vec<usize> {
        (1..self.degree())
            .filter(|&i| self.coefficients[i].is_zero())
            .collect()
    }
}

impl fmt::Display for HStarVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coefficients.iter().join(", "))
    }
}

/// The invariants the classification is phrased in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProfile {
    /// Size: number of lattice points.
    pub n: usize,
    /// Number of interior lattice points.
    pub n0: usize,
    /// Normalized volume.
    pub volume: BigInt,
    /// Sublattice index q (1 = lattice-spanning).
    pub index: BigInt,
    /// Lattice width.
    pub width: BigInt,
    /// A primitive functional certifying the width.
    pub width_functional: Point3,
    pub hstar: HStarVector,
}

/// A lattice tetrahedron whose only lattice points are its four vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyTetrahedron {
    pub vertices: [Point3; 4],
    pub volume: BigInt,
}

/// Outcome of the h*-law checks: the index inequality and the gap positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HStarLawReport {
    pub index: BigInt,
    pub hstar: HStarVector,
    /// h₂* ≥ (q−1)(1 + h₁*): None when q = 1 (vacuous), else whether it holds.
    pub inequality: Option<bool>,
    /// Zero coefficients strictly below the degree.
    pub gaps: Vec<usize>,
}

/// Index in ℤ³ of the affine lattice generated by the lattice points of P
/// (the product of the elementary divisors of the difference matrix).
pub fn sublattice_index(p: &LatticePolytope3) -> BigInt {
    let pts = p.lattice_points();
    let base = &pts[0];
    let rows: Vec<Vec<BigInt>> = pts[1..]
        .iter()
        .map(|q| {
            let d = q.sub(base);
            vec![d.x, d.y, d.z]
        })
        .collect();
    snf(&IntMatrix::from_rows(&rows)).divisors().iter().product()
}

fn spread(vertices: &[Point3], f: &Point3) -> BigInt {
    let values = vertices.iter().map(|v| f.dot(v));
    let (mut lo, mut hi) = (None::<BigInt>, None::<BigInt>);
    for v in values {
        if lo.as_ref().map_or(true, |l| &v < l) {
            lo = Some(v.clone());
        }
        if hi.as_ref().map_or(true, |h| &v > h) {
            hi = Some(v);
        }
    }
    hi.unwrap() - lo.unwrap()
}

fn lex_normalize(f: &Point3) -> Point3 {
    for c in [&f.x, &f.y, &f.z] {
        if !c.is_zero() {
            return if c.is_negative() { f.neg() } else { f.clone() };
        }
    }
    f.clone()
}

/// Three linearly independent vertex differences, chosen greedily to
/// maximize the determinant (the certification box shrinks with it).
fn greedy_difference_basis(vertices: &[Point3]) -> [Point3; 3] {
    let mut pool: Vec<Point3> = Vec::new();
    for (i, u) in vertices.iter().enumerate() {
        for w in &vertices[i + 1..] {
            pool.push(u.sub(w));
        }
    }
    let v1 = pool
        .iter()
        .max_by_key(|v| (v.dot(v), lex_normalize(v)))
        .unwrap()
        .clone();
    let v2 = pool
        .iter()
        .max_by_key(|v| {
            let c = v1.cross(v);
            (c.dot(&c), lex_normalize(v))
        })
        .unwrap()
        .clone();
    let v3 = pool
        .iter()
        .max_by_key(|v| (det3(&v1, &v2, v).abs(), lex_normalize(v)))
        .unwrap()
        .clone();
    debug_assert!(!det3(&v1, &v2, &v3).is_zero());
    [v1, v2, v3]
}

/// Lattice width with a certifying functional: the minimum over nonzero
/// integer functionals f of max⟨f,·⟩ − min⟨f,·⟩ over the vertices.
///
/// Certified search: every f with spread ≤ s satisfies |⟨f, vⱼ⟩| ≤ s for the
/// three independent vertex differences vⱼ, so all candidates beating the
/// prepass upper bound live in a finite g-box (g = Bᵀf). Enumerating the box
/// by increasing ‖g‖∞ allows stopping as soon as the shell radius exceeds
/// the best spread found.
pub fn width(p: &LatticePolytope3) -> (BigInt, Point3) {
    let verts = p.vertices();
    let [v1, v2, v3] = greedy_difference_basis(verts);

    // Upper-bound prepass: coordinate functionals, facet normals, and the
    // rows of the HNF witness of the difference basis.
    let b = IntMatrix::from_rows(&[
        vec![v1.x.clone(), v2.x.clone(), v3.x.clone()],
        vec![v1.y.clone(), v2.y.clone(), v3.y.clone()],
        vec![v1.z.clone(), v2.z.clone(), v3.z.clone()],
    ]);
    let u = hnf_left(&b).u;
    let mut candidates: Vec<Point3> = vec![
        crate::geom::point(1, 0, 0),
        crate::geom::point(0, 1, 0),
        crate::geom::point(0, 0, 1),
    ];
    for i in 0..3 {
        candidates.push(Point3::new(
            u.get(i, 0).clone(),
            u.get(i, 1).clone(),
            u.get(i, 2).clone(),
        ));
    }
    candidates.extend(p.facets().iter().map(|f| f.normal.clone()));

    let mut best: Option<(BigInt, Point3)> = None;
    let consider = |f: &Point3, best: &mut Option<(BigInt, Point3)>| {
        if f.is_zero() {
            return;
        }
        let nf = lex_normalize(f);
        let s = spread(verts, &nf);
        if best
            .as_ref()
            .map_or(true, |(bs, bf)| (&s, &nf) < (bs, bf))
        {
            *best = Some((s, nf));
        }
    };
    for f in &candidates {
        consider(f, &mut best);
    }

    // Exact search over the g-box, by shells of increasing ‖g‖∞.
    let bt = b.transpose();
    let adj = bt.adjugate().expect("3x3");
    let d = bt.det().expect("3x3");
    let mut r = BigInt::one();
    while r <= best.as_ref().unwrap().0 {
        let ri = r.to_i64().expect("width shells stay small");
        for gx in -ri..=ri {
            for gy in -ri..=ri {
                for gz in -ri..=ri {
                    if gx.abs().max(gy.abs()).max(gz.abs()) != ri {
                        continue;
                    }
                    if let Some(f) = solve_functional(&adj, &d, gx, gy, gz) {
                        consider(&f, &mut best);
                    }
                }
            }
        }
        r += 1;
    }
    let (w, f) = best.unwrap();
    (w, f)
}

/// All primitive functionals (up to sign, lex-normalized) of spread exactly
/// `w` on P, sorted. Complete: any such functional has ‖Bᵀf‖∞ ≤ w.
pub fn functionals_of_width(p: &LatticePolytope3, w: u64) -> Result<Vec<Point3>, Error> {
    if w > 64 {
        return Err(Error::ResourceLimit(format!(
            "functional enumeration box for width {w}"
        )));
    }
    let verts = p.vertices();
    let [v1, v2, v3] = greedy_difference_basis(verts);
    let bt = IntMatrix::from_rows(&[
        vec![v1.x.clone(), v1.y.clone(), v1.z.clone()],
        vec![v2.x.clone(), v2.y.clone(), v2.z.clone()],
        vec![v3.x.clone(), v3.y.clone(), v3.z.clone()],
    ]);
    let adj = bt.adjugate().expect("3x3");
    let d = bt.det().expect("3x3");
    let wi = w as i64;
    let target = BigInt::from(w);
    let mut out: Vec<Point3> = Vec::new();
    for gx in -wi..=wi {
        for gy in -wi..=wi {
            for gz in -wi..=wi {
                let Some(f) = solve_functional(&adj, &d, gx, gy, gz) else {
                    continue;
                };
                if f.is_zero() {
                    continue;
                }
                let nf = lex_normalize(&f);
                if spread(verts, &nf) == target {
                    out.push(nf);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// f with Bᵀf = g when it is integral: f = adj(Bᵀ)·g / det(Bᵀ).
fn solve_functional(adj: &IntMatrix, det: &BigInt, gx: i64, gy: i64, gz: i64) -> Option<Point3> {
    let g = [BigInt::from(gx), BigInt::from(gy), BigInt::from(gz)];
    let mut coords = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (i, c) in coords.iter_mut().enumerate() {
        let num: BigInt = (0..3).map(|j| adj.get(i, j) * &g[j]).sum();
        let (q, rem) = num.div_rem(det);
        if !rem.is_zero() {
            return None;
        }
        *c = q;
    }
    let [x, y, z] = coords;
    Some(Point3::new(x, y, z))
}

/// h*-vector from the closed form in (n, n₀, V):
/// (1, n−4, V+3−n₀−n, n₀), trailing zeros trimmed.
pub fn hstar(p: &LatticePolytope3) -> Result<HStarVector, Error> {
    let n = BigInt::from(p.size());
    let n0 = BigInt::from(p.interior_lattice_points().len());
    let v = p.normalized_volume();
    HStarVector::from_full(vec![
        BigInt::one(),
        &n - 4,
        &v + 3 - &n0 - &n,
        n0,
    ])
}

/// Independent Ehrhart cross-check: count lattice points of tP for
/// t = 0..tmax, verify that (1−z)⁴·Σ size(tP)·zᵗ reproduces hstar(P) and
/// vanishes beyond degree 3, and that the interpolating cubic predicts the
/// higher counts.
pub fn ehrhart_check(p: &LatticePolytope3, tmax: u32) -> Result<bool, Error> {
    if tmax < 3 {
        return Err(Error::InvalidArgument(format!(
            "ehrhart check needs tmax >= 3, got {tmax}"
        )));
    }
    let counts: Vec<BigInt> = (0..=tmax as u64)
        .map(|t| p.dilated_point_count(t))
        .collect::<Result<_, _>>()?;
    let h = hstar(p)?;

    // Series numerator coefficients.
    for i in 0..=tmax as usize {
        let mut acc = BigInt::zero();
        for j in 0..=i.min(4) {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let c = binomial(BigInt::from(4), BigInt::from(j));
            acc += BigInt::from(sign) * c * &counts[i - j];
        }
        let expected = if i <= 3 { h.get(i) } else { BigInt::zero() };
        if acc != expected {
            return Ok(false);
        }
    }

    // Newton interpolation from t = 0..3, checked against t = 4..tmax.
    let mut diffs: Vec<Vec<BigInt>> = vec![counts[..4.min(counts.len())].to_vec()];
    while diffs.last().unwrap().len() > 1 {
        let prev = diffs.last().unwrap();
        let next: Vec<BigInt> = prev.windows(2).map(|w| &w[1] - &w[0]).collect();
        diffs.push(next);
    }
    for t in 4..=tmax as usize {
        let mut val = BigInt::zero();
        for (j, row) in diffs.iter().enumerate() {
            val += &row[0] * binomial(BigInt::from(t), BigInt::from(j));
        }
        if val != counts[t] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All empty tetrahedra spanned by lattice points of P, in lexicographic
/// vertex order. Emptiness is checked against the tetrahedron's own lattice
/// points (bounding box + facet signs), independent of P's cache.
pub fn empty_tetrahedra(p: &LatticePolytope3) -> Vec<EmptyTetrahedron> {
    let pts = p.lattice_points();
    let mut out = Vec::new();
    for combo in (0..pts.len()).combinations(4) {
        let [a, b, c, d] = [&pts[combo[0]], &pts[combo[1]], &pts[combo[2]], &pts[combo[3]]];
        let vol = det3(&b.sub(a), &c.sub(a), &d.sub(a)).abs();
        if vol.is_zero() {
            continue;
        }
        if tetrahedron_is_empty([a, b, c, d]) {
            out.push(EmptyTetrahedron {
                vertices: [a.clone(), b.clone(), c.clone(), d.clone()],
                volume: vol,
            });
        }
    }
    out
}

/// True iff the only lattice points of conv{vertices} are the vertices.
fn tetrahedron_is_empty(vs: [&Point3; 4]) -> bool {
    // Inward facet normals of the tetrahedron.
    let mut facets: Vec<Facet> = Vec::with_capacity(4);
    for skip in 0..4 {
        let kept: Vec<&Point3> = (0..4).filter(|&i| i != skip).map(|i| vs[i]).collect();
        let n = kept[1].sub(kept[0]).cross(&kept[2].sub(kept[0]));
        // Orient inward: positive on the skipped vertex.
        let n = if n.dot(&vs[skip].sub(kept[0])).is_negative() {
            n.neg()
        } else {
            n
        };
        let offset = -n.dot(kept[0]);
        facets.push(Facet { normal: n, offset });
    }
    let mut count = 0usize;
    let (mut lo, mut hi) = (vs[0].clone(), vs[0].clone());
    for v in &vs[1..] {
        lo.x = lo.x.min(v.x.clone());
        lo.y = lo.y.min(v.y.clone());
        lo.z = lo.z.min(v.z.clone());
        hi.x = hi.x.max(v.x.clone());
        hi.y = hi.y.max(v.y.clone());
        hi.z = hi.z.max(v.z.clone());
    }
    let mut x = lo.x.clone();
    while x <= hi.x {
        let mut y = lo.y.clone();
        while y <= hi.y {
            let mut z = lo.z.clone();
            while z <= hi.z {
                let q = Point3::new(x.clone(), y.clone(), z.clone());
                if facets.iter().all(|f| !f.eval(&q).is_negative()) {
                    count += 1;
                    if count > 4 {
                        return false;
                    }
                }
                z += 1;
            }
            y += 1;
        }
        x += 1;
    }
    count == 4
}

/// The volume-partition certificate: every empty tetrahedron has volume
/// equal to the sublattice index, and the volumes sum to the normalized
/// volume. By exact additivity this certifies that the empty tetrahedra
/// partition P up to measure zero.
pub fn verify_partition(p: &LatticePolytope3) -> bool {
    let q = sublattice_index(p);
    let tets = empty_tetrahedra(p);
    if tets.is_empty() {
        return false;
    }
    let mut total = BigInt::zero();
    for t in &tets {
        if t.volume != q {
            return false;
        }
        total += &t.volume;
    }
    total == p.normalized_volume()
}

/// First 4-subset of lattice points (in lexicographic order) spanning a
/// tetrahedron of volume 1, if any.
pub fn has_unimodular_tetrahedron(p: &LatticePolytope3) -> Option<EmptyTetrahedron> {
    let pts = p.lattice_points();
    for combo in (0..pts.len()).combinations(4) {
        let [a, b, c, d] = [&pts[combo[0]], &pts[combo[1]], &pts[combo[2]], &pts[combo[3]]];
        let vol = det3(&b.sub(a), &c.sub(a), &d.sub(a)).abs();
        if vol.is_one() {
            return Some(EmptyTetrahedron {
                vertices: [a.clone(), b.clone(), c.clone(), d.clone()],
                volume: vol,
            });
        }
    }
    None
}

/// h*-vector laws for non-spanning polytopes: the inequality
/// h₂* ≥ (q−1)(1 + h₁*) for q > 1, and the gap positions.
pub fn check_hstar_laws(p: &LatticePolytope3) -> Result<HStarLawReport, Error> {
    let q = sublattice_index(p);
    let h = hstar(p)?;
    let inequality = if q.is_one() {
        None
    } else {
        Some(h.get(2) >= (&q - 1) * (BigInt::one() + h.get(1)))
    };
    let gaps = h.gaps();
    Ok(HStarLawReport {
        index: q,
        hstar: h,
        inequality,
        gaps,
    })
}

/// All invariants at once.
pub fn profile(p: &LatticePolytope3) -> Result<InvariantProfile, Error> {
    let (w, f) = width(p);
    Ok(InvariantProfile {
        n: p.size(),
        n0: p.interior_lattice_points().len(),
        volume: p.normalized_volume(),
        index: sublattice_index(p),
        width: w,
        width_functional: f,
        hstar: hstar(p)?,
    })
}
