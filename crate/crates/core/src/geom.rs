//! Exact geometry of lattice 3-polytopes: convex hulls with integer
//! orientation predicates, facet descriptions, lattice-point enumeration,
//! normalized volume, projections along a direction, and spike detection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::intlin::{hnf_left, snf, IntMatrix};
use crate::Error;

/// A point of ℤ³. Ordering is lexicographic on (x, y, z); this order is
/// frozen for every sorted output in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point3 {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Point3 {
    pub fn new(x: BigInt, y: BigInt, z: BigInt) -> Self {
        Point3 { x, y, z }
    }

    pub fn origin() -> Self {
        point(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn add(&self, o: &Point3) -> Point3 {
        Point3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }

    pub fn sub(&self, o: &Point3) -> Point3 {
        Point3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn neg(&self) -> Point3 {
        Point3::new(-&self.x, -&self.y, -&self.z)
    }

    pub fn dot(&self, o: &Point3) -> BigInt {
        &self.x * &o.x + &self.y * &o.y + &self.z * &o.z
    }

    pub fn cross(&self, o: &Point3) -> Point3 {
        Point3::new(
            &self.y * &o.z - &self.z * &o.y,
            &self.z * &o.x - &self.x * &o.z,
            &self.x * &o.y - &self.y * &o.x,
        )
    }

    /// Divide out the gcd of the coordinates; errors on the zero vector.
    pub fn primitivize(&self) -> Result<Point3, Error> {
        let g = self.x.gcd(&self.y).gcd(&self.z);
        if g.is_zero() {
            return Err(Error::NonPrimitiveDirection {
                dir: self.to_string(),
            });
        }
        Ok(Point3::new(&self.x / &g, &self.y / &g, &self.z / &g))
    }

    pub fn is_primitive(&self) -> bool {
        self.x.gcd(&self.y).gcd(&self.z) == BigInt::from(1)
    }

    /// The column vector as a 3×1 matrix.
    pub fn as_column(&self) -> IntMatrix {
        IntMatrix::from_rows(&[
            vec![self.x.clone()],
            vec![self.y.clone()],
            vec![self.z.clone()],
        ])
    }
}

/// Convenience constructor from machine integers.
pub fn point(x: i64, y: i64, z: i64) -> Point3 {
    Point3::new(BigInt::from(x), BigInt::from(y), BigInt::from(z))
}

/// Determinant of the 3×3 matrix with rows a, b, c (scalar triple product).
pub fn det3(a: &Point3, b: &Point3, c: &Point3) -> BigInt {
    a.dot(&b.cross(c))
}

/// Closed half-space ⟨normal, p⟩ + offset ≥ 0 supporting the polytope, with
/// equality exactly on the facet. The normal is primitive and points inward.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: Point3,
    pub offset: BigInt,
}

impl Facet {
    /// ⟨normal, p⟩ + offset: zero on the facet, positive strictly inside.
    pub fn eval(&self, p: &Point3) -> BigInt {
        self.normal.dot(p) + &self.offset
    }
}

/// A full-dimensional lattice 3-polytope with its facet description and the
/// cached, lexicographically sorted list of lattice points.
#[derive(Debug, Clone)]
pub struct LatticePolytope3 {
    vertices: Vec<Point3>,
    facets: Vec<Facet>,
    lattice_points: Vec<Point3>,
    /// Boundary triangulation, outward-oriented; used for the volume fan.
    tris: Vec<[Point3; 3]>,
}

/// A maximal chain of collinear lattice points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpikeDescriptor {
    /// Primitive step, sign-normalized so the first nonzero coordinate is
    /// positive.
    pub direction: Point3,
    /// The chain, ascending along `direction` (consecutive points differ by
    /// exactly `direction`).
    pub chain: Vec<Point3>,
    /// Number of unit lattice steps: |chain| − 1.
    pub length: usize,
}

/// Image of a polytope's lattice points in ℤ² = ℤ³/ℤ·direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration2 {
    /// Distinct projected points, sorted lexicographically.
    pub points: Vec<(BigInt, BigInt)>,
    /// How many lattice points of the polytope map to each projected point.
    pub fiber_counts: BTreeMap<(BigInt, BigInt), usize>,
}

impl PointConfiguration2 {
    /// Index in ℤ² of the affine lattice generated by the configuration.
    pub fn sublattice_index(&self) -> BigInt {
        let base = &self.points[0];
        let rows: Vec<Vec<BigInt>> = self.points[1..]
            .iter()
            .map(|p| vec![&p.0 - &base.0, &p.1 - &base.1])
            .collect();
        if rows.is_empty() {
            return BigInt::zero();
        }
        let d = snf(&IntMatrix::from_rows(&rows)).divisors();
        d.iter().product()
    }
}

/// Convex hull of a set of lattice points.
///
/// Incremental insertion with exact sign-of-determinant visibility tests.
/// Errors with `DimensionDeficient` (carrying the actual affine dimension)
/// when the points do not span ℝ³.
pub fn hull(pts: &[Point3]) -> Result<LatticePolytope3, Error> {
    if pts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut points: Vec<Point3> = pts.to_vec();
    points.sort();
    points.dedup();

    let seed = affine_seed(&points)?;
    let faces = incremental_hull(&points, seed);

    // Group coplanar hull triangles into facets keyed by the primitive
    // inward normal and its offset.
    let mut facet_set: BTreeSet<Facet> = BTreeSet::new();
    let mut tris: Vec<[Point3; 3]> = Vec::with_capacity(faces.len());
    for &[i, j, k] in &faces {
        let (a, b, c) = (&points[i], &points[j], &points[k]);
        let outward = b.sub(a).cross(&c.sub(a));
        debug_assert!(!outward.is_zero(), "degenerate hull triangle");
        let normal = outward.neg().primitivize()?;
        let offset = -normal.dot(a);
        facet_set.insert(Facet { normal, offset });
        tris.push([a.clone(), b.clone(), c.clone()]);
    }
    let facets: Vec<Facet> = facet_set.into_iter().collect();

    // A point is a vertex iff its active facet normals span rank 3.
    let vertices: Vec<Point3> = points
        .iter()
        .filter(|p| {
            let active: Vec<&Point3> = facets
                .iter()
                .filter(|f| f.eval(p).is_zero())
                .map(|f| &f.normal)
                .collect();
            normal_rank(&active) == 3
        })
        .cloned()
        .collect();

    let lattice_points = enumerate_lattice_points(&facets, &vertices)?;
    debug_assert!(vertices.iter().all(|v| lattice_points.contains(v)));

    Ok(LatticePolytope3 {
        vertices,
        facets,
        lattice_points,
        tris,
    })
}

/// Indices of four affinely independent points, or the affine dimension.
fn affine_seed(points: &[Point3]) -> Result<[usize; 4], Error> {
    let p0 = &points[0];
    let Some(i1) = points.iter().position(|p| p != p0) else {
        return Err(Error::DimensionDeficient { dim: 0 });
    };
    let d1 = points[i1].sub(p0);
    let Some(i2) = points.iter().position(|p| !d1.cross(&p.sub(p0)).is_zero()) else {
        return Err(Error::DimensionDeficient { dim: 1 });
    };
    let d2 = points[i2].sub(p0);
    let Some(i3) = points
        .iter()
        .position(|p| !det3(&d1, &d2, &p.sub(p0)).is_zero())
    else {
        return Err(Error::DimensionDeficient { dim: 2 });
    };
    Ok([0, i1, i2, i3])
}

fn incremental_hull(points: &[Point3], seed: [usize; 4]) -> Vec<[usize; 3]> {
    let [s0, s1, mut s2, mut s3] = seed;
    let d = det3(
        &points[s1].sub(&points[s0]),
        &points[s2].sub(&points[s0]),
        &points[s3].sub(&points[s0]),
    );
    if d.is_negative() {
        std::mem::swap(&mut s2, &mut s3);
    }
    // Outward-oriented faces of the positively oriented seed tetrahedron.
    let mut faces: Vec<[usize; 3]> = vec![[s0, s2, s1], [s0, s1, s3], [s0, s3, s2], [s1, s2, s3]];

    for idx in 0..points.len() {
        if idx == s0 || idx == s1 || idx == s2 || idx == s3 {
            continue;
        }
        let p = &points[idx];
        let visible: Vec<bool> = faces
            .iter()
            .map(|&[i, j, k]| {
                let a = &points[i];
                let n = points[j].sub(a).cross(&points[k].sub(a));
                n.dot(&p.sub(a)).is_positive()
            })
            .collect();
        if !visible.iter().any(|&v| v) {
            continue; // inside or on the boundary of the current hull
        }
        let mut visible_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (f, &[i, j, k]) in faces.iter().enumerate() {
            if visible[f] {
                visible_edges.insert((i, j));
                visible_edges.insert((j, k));
                visible_edges.insert((k, i));
            }
        }
        let mut next: Vec<[usize; 3]> = faces
            .iter()
            .zip(&visible)
            .filter(|&(_, &v)| !v)
            .map(|(f, _)| *f)
            .collect();
        // Horizon: directed edges of visible faces whose reverse edge lies
        // on a kept face; each spawns a cone face through p.
        for &(u, v) in &visible_edges {
            if !visible_edges.contains(&(v, u)) {
                next.push([u, v, idx]);
            }
        }
        faces = next;
    }
    faces
}

/// Rank of a set of integer vectors (greedy: any maximal independent chain
/// extends to full rank or certifies the deficiency).
fn normal_rank(normals: &[&Point3]) -> usize {
    let Some(n1) = normals.iter().find(|n| !n.is_zero()) else {
        return 0;
    };
    let Some(n2) = normals.iter().find(|n| !n1.cross(n).is_zero()) else {
        return 1;
    };
    if normals.iter().any(|n| !det3(n1, n2, n).is_zero()) {
        3
    } else {
        2
    }
}

impl LatticePolytope3 {
    /// Extreme points, sorted lexicographically.
    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    /// Supporting half-spaces with primitive inward normals, sorted.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// All lattice points of the polytope, sorted lexicographically.
    pub fn lattice_points(&self) -> &[Point3] {
        &self.lattice_points
    }

    /// Number of lattice points (the size n of the polytope).
    pub fn size(&self) -> usize {
        self.lattice_points.len()
    }

    pub fn contains(&self, p: &Point3) -> bool {
        self.facets.iter().all(|f| !f.eval(p).is_negative())
    }

    pub fn contains_strictly(&self, p: &Point3) -> bool {
        self.facets.iter().all(|f| f.eval(p).is_positive())
    }

    /// Lattice points with every facet inequality strictly positive.
    pub fn interior_lattice_points(&self) -> Vec<Point3> {
        self.lattice_points
            .iter()
            .filter(|p| self.contains_strictly(p))
            .cloned()
            .collect()
    }

    /// Lattice points lying on at least one facet.
    pub fn boundary_lattice_points(&self) -> Vec<Point3> {
        self.lattice_points
            .iter()
            .filter(|p| !self.contains_strictly(p))
            .cloned()
            .collect()
    }

    /// Normalized volume (3! × euclidean): the fan from vertex 0 over the
    /// boundary triangulation, summing |det| of the edge vectors.
    pub fn normalized_volume(&self) -> BigInt {
        let v0 = &self.vertices[0];
        self.tris
            .iter()
            .map(|[a, b, c]| det3(&a.sub(v0), &b.sub(v0), &c.sub(v0)).abs())
            .sum()
    }

    /// Number of lattice points of the dilation t·P.
    pub fn dilated_point_count(&self, t: u64) -> Result<BigInt, Error> {
        let t = BigInt::from(t);
        let scaled: Vec<Facet> = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: f.normal.clone(),
                offset: &f.offset * &t,
            })
            .collect();
        let (lo, hi) = self.bounding_box();
        let lo = Point3::new(&lo.x * &t, &lo.y * &t, &lo.z * &t);
        let hi = Point3::new(&hi.x * &t, &hi.y * &t, &hi.z * &t);
        let mut count = BigInt::zero();
        scan_box(&scaled, &lo, &hi, &mut |_, _, zlo, zhi| {
            count += zhi - zlo + 1;
        })?;
        Ok(count)
    }

    pub fn bounding_box(&self) -> (Point3, Point3) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            lo.x = lo.x.min(v.x.clone());
            lo.y = lo.y.min(v.y.clone());
            lo.z = lo.z.min(v.z.clone());
            hi.x = hi.x.max(v.x.clone());
            hi.y = hi.y.max(v.y.clone());
            hi.z = hi.z.max(v.z.clone());
        }
        (lo, hi)
    }

    /// Hull of the lattice points other than v (written P^v when v is a
    /// vertex). Errors if v is not a lattice point of P, or with
    /// `DimensionDeficient` when the remainder is not full-dimensional.
    pub fn remove_lattice_point(&self, v: &Point3) -> Result<LatticePolytope3, Error> {
        if self.lattice_points.binary_search(v).is_err() {
            return Err(Error::NotALatticePoint {
                point: v.to_string(),
            });
        }
        let rest: Vec<Point3> = self
            .lattice_points
            .iter()
            .filter(|p| *p != v)
            .cloned()
            .collect();
        hull(&rest)
    }

    /// Project the lattice points along a primitive direction: complete the
    /// direction to a lattice basis (left-HNF convention) and drop the
    /// direction coordinate.
    pub fn project_along(&self, dir: &Point3) -> Result<PointConfiguration2, Error> {
        if dir.is_zero() || !dir.is_primitive() {
            return Err(Error::NonPrimitiveDirection {
                dir: dir.to_string(),
            });
        }
        let u = hnf_left(&dir.as_column()).u;
        debug_assert_eq!(u.mul(&dir.as_column()), point(0, 0, 1).as_column());
        let mut fiber_counts: BTreeMap<(BigInt, BigInt), usize> = BTreeMap::new();
        for p in &self.lattice_points {
            let row = |i: usize| {
                u.get(i, 0) * &p.x + u.get(i, 1) * &p.y + u.get(i, 2) * &p.z
            };
            *fiber_counts.entry((row(0), row(1))).or_insert(0) += 1;
        }
        let points: Vec<(BigInt, BigInt)> = fiber_counts.keys().cloned().collect();
        Ok(PointConfiguration2 {
            points,
            fiber_counts,
        })
    }

    /// A maximum-cardinality collinear chain of lattice points; ties broken
    /// lexicographically by (direction, first point).
    pub fn find_spike(&self) -> SpikeDescriptor {
        let set: BTreeSet<&Point3> = self.lattice_points.iter().collect();
        let pts = &self.lattice_points;
        let mut best: Option<(usize, Point3, Vec<Point3>)> = None;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let mut d = pts[j].sub(&pts[i]).primitivize().expect("distinct points");
                if lex_negative(&d) {
                    d = d.neg();
                }
                // Walk to the low end of the chain, then collect forward.
                let mut a = pts[i].clone();
                loop {
                    let prev = a.sub(&d);
                    if set.contains(&prev) {
                        a = prev;
                    } else {
                        break;
                    }
                }
                let mut chain = vec![a.clone()];
                loop {
                    let nxt = chain.last().unwrap().add(&d);
                    if set.contains(&nxt) {
                        chain.push(nxt);
                    } else {
                        break;
                    }
                }
                let better = match &best {
                    None => true,
                    Some((len, bd, bchain)) => {
                        chain.len() > *len
                            || (chain.len() == *len && (&d, &chain[0]) < (bd, &bchain[0]))
                    }
                };
                if better {
                    best = Some((chain.len(), d, chain));
                }
            }
        }
        let (len, direction, chain) = best.expect("a 3-polytope has at least two points");
        SpikeDescriptor {
            direction,
            chain,
            length: len - 1,
        }
    }
}

/// True when the first nonzero coordinate is negative (p precedes −p
/// lexicographically).
fn lex_negative(p: &Point3) -> bool {
    for c in [&p.x, &p.y, &p.z] {
        if !c.is_zero() {
            return c.is_negative();
        }
    }
    false
}

fn enumerate_lattice_points(facets: &[Facet], vertices: &[Point3]) -> Result<Vec<Point3>, Error> {
    let mut lo = vertices[0].clone();
    let mut hi = vertices[0].clone();
    for v in vertices {
        lo.x = lo.x.min(v.x.clone());
        lo.y = lo.y.min(v.y.clone());
        lo.z = lo.z.min(v.z.clone());
        hi.x = hi.x.max(v.x.clone());
        hi.y = hi.y.max(v.y.clone());
        hi.z = hi.z.max(v.z.clone());
    }
    let mut out: Vec<Point3> = Vec::new();
    scan_box(facets, &lo, &hi, &mut |x, y, zlo, zhi| {
        let mut z = zlo.clone();
        while &z <= zhi {
            out.push(Point3::new(x.clone(), y.clone(), z.clone()));
            z += 1;
        }
    })?;
    out.sort();
    Ok(out)
}

const MAX_SCAN_COLUMNS: u128 = 1 << 26;

/// Scan the integer box [lo, hi], reporting for every column (x, y) the
/// z-interval satisfying all facet inequalities. Uses i128 arithmetic when
/// everything fits comfortably, exact BigInt otherwise.
fn scan_box(
    facets: &[Facet],
    lo: &Point3,
    hi: &Point3,
    visit: &mut dyn FnMut(&BigInt, &BigInt, &BigInt, &BigInt),
) -> Result<(), Error> {
    if lo.x > hi.x || lo.y > hi.y || lo.z > hi.z {
        return Ok(());
    }
    let columns = ((&hi.x - &lo.x) + 1u8) * ((&hi.y - &lo.y) + 1u8);
    if columns > BigInt::from(MAX_SCAN_COLUMNS) {
        return Err(Error::ResourceLimit(format!(
            "bounding box has {columns} columns"
        )));
    }

    // Fast path: all quantities small enough that every intermediate
    // product fits in i128 with room to spare.
    let fits = |v: &BigInt| v.abs() < BigInt::from(1i128 << 40);
    if [&lo.x, &lo.y, &lo.z, &hi.x, &hi.y, &hi.z].iter().all(|v| fits(v))
        && facets.iter().all(|f| {
            fits(&f.normal.x) && fits(&f.normal.y) && fits(&f.normal.z) && fits(&f.offset)
        })
    {
        return scan_box_i128(facets, lo, hi, visit);
    }
    scan_box_big(facets, lo, hi, visit)
}

fn scan_box_i128(
    facets: &[Facet],
    lo: &Point3,
    hi: &Point3,
    visit: &mut dyn FnMut(&BigInt, &BigInt, &BigInt, &BigInt),
) -> Result<(), Error> {
    let c = |v: &BigInt| v.to_i128().expect("guarded by scan_box");
    let fs: Vec<[i128; 4]> = facets
        .iter()
        .map(|f| [c(&f.normal.x), c(&f.normal.y), c(&f.normal.z), c(&f.offset)])
        .collect();
    let (xlo, xhi) = (c(&lo.x), c(&hi.x));
    let (ylo, yhi) = (c(&lo.y), c(&hi.y));
    let (zlo, zhi) = (c(&lo.z), c(&hi.z));
    for x in xlo..=xhi {
        for y in ylo..=yhi {
            let mut a = zlo;
            let mut b = zhi;
            let mut feasible = true;
            for f in &fs {
                let r = f[0] * x + f[1] * y + f[3];
                // need f[2]·z + r ≥ 0
                if f[2] > 0 {
                    a = a.max(ceil_div_i128(-r, f[2]));
                } else if f[2] < 0 {
                    b = b.min(floor_div_i128(-r, f[2]));
                } else if r < 0 {
                    feasible = false;
                    break;
                }
            }
            if feasible && a <= b {
                visit(
                    &BigInt::from(x),
                    &BigInt::from(y),
                    &BigInt::from(a),
                    &BigInt::from(b),
                );
            }
        }
    }
    Ok(())
}

fn floor_div_i128(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div_i128(a: i128, b: i128) -> i128 {
    -floor_div_i128(-a, b)
}

fn scan_box_big(
    facets: &[Facet],
    lo: &Point3,
    hi: &Point3,
    visit: &mut dyn FnMut(&BigInt, &BigInt, &BigInt, &BigInt),
) -> Result<(), Error> {
    let mut x = lo.x.clone();
    while x <= hi.x {
        let mut y = lo.y.clone();
        while y <= hi.y {
            let mut a = lo.z.clone();
            let mut b = hi.z.clone();
            let mut feasible = true;
            for f in facets {
                let r = &f.normal.x * &x + &f.normal.y * &y + &f.offset;
                if f.normal.z.is_positive() {
                    a = a.max((-&r).div_ceil(&f.normal.z));
                } else if f.normal.z.is_negative() {
                    b = b.min((-&r).div_floor(&f.normal.z));
                } else if r.is_negative() {
                    feasible = false;
                    break;
                }
            }
            if feasible && a <= b {
                visit(&x, &y, &a, &b);
            }
            y += 1;
        }
        x += 1;
    }
    Ok(())
}
