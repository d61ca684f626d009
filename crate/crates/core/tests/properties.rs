//! Cross-module property suites: witness reconstruction for the normal
//! forms, oracle agreement, invariance under random unimodular maps, and
//! the index lemmas on subconfigurations and projections.

use itertools::Itertools;
use nonspan_core::catalog::{
    enumerate_nonspanning, enumerate_width_one, make, CatalogEntry, CatalogTag,
};
use nonspan_core::equiv::{apply_map, are_isomorphic, canonical_form, random_unimodular_map};
use nonspan_core::geom::{det3, point, LatticePolytope3, Point3};
use nonspan_core::intlin::{gcd_all, hnf_left, snf, IntMatrix};
use nonspan_core::invariants::{
    ehrhart_check, has_unimodular_tetrahedron, hstar, profile, sublattice_index, verify_partition,
};
use nonspan_core::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Every width > 1 catalog entry up to size `max_n`, the width-one
/// generators for small q up to size 8, and the two spanning circuit
/// tetrahedra. The label travels along for failure messages.
fn corpus(max_n: usize) -> Vec<(String, LatticePolytope3)> {
    let mut out = Vec::new();
    for n in 4..=max_n {
        for (e, _) in enumerate_nonspanning(n) {
            out.push((e.to_string(), make(&e).expect("catalog entry")));
        }
    }
    for q in [1, 2, 3, 5] {
        for n in 4..=max_n.min(8) {
            for e in enumerate_width_one(n, q).expect("positive q") {
                out.push((e.to_string(), make(&e).expect("width-one entry")));
            }
        }
    }
    for tag in [CatalogTag::E511, CatalogTag::E512] {
        let e = CatalogEntry::exception(tag);
        out.push((e.to_string(), make(&e).expect("exception")));
    }
    out
}

fn strategy_matrix(rows: usize, cols: usize, bound: i64) -> BoxedStrategy<IntMatrix> {
    prop::collection::vec(-bound..=bound, rows * cols)
        .prop_map(move |v| {
            let rows: Vec<Vec<BigInt>> = v
                .chunks(cols)
                .map(|c| c.iter().map(|&x| big(x)).collect())
                .collect();
            IntMatrix::from_rows(&rows)
        })
        .boxed()
}

fn any_small_matrix() -> BoxedStrategy<IntMatrix> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(m, n)| strategy_matrix(m, n, 30))
        .boxed()
}

/// gcd of all i x i minors of a, zero when every minor vanishes.
fn minor_gcd(a: &IntMatrix, i: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in (0..a.rows()).combinations(i) {
        for cols in (0..a.cols()).combinations(i) {
            let sub: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| a.get(r, c).clone()).collect())
                .collect();
            let d = IntMatrix::from_rows(&sub).det().expect("square minor");
            g = g.gcd(&d);
        }
    }
    g
}

proptest! {
    #[test]
    fn hnf_witness_reconstructs(a in any_small_matrix()) {
        let r = hnf_left(&a);
        prop_assert_eq!(r.u.mul(&a), r.h);
        prop_assert!(r.u.det().unwrap().abs().is_one());
    }

    #[test]
    fn snf_witnesses_reconstruct(a in any_small_matrix()) {
        let r = snf(&a);
        prop_assert_eq!(&r.u.mul(&a).mul(&r.v), &r.d);
        prop_assert!(r.u.det().unwrap().abs().is_one());
        prop_assert!(r.v.det().unwrap().abs().is_one());
        let d = r.divisors();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative() && !w[1].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn snf_divisor_products_match_minor_gcds(
        a in (2usize..=3, 2usize..=3).prop_flat_map(|(m, n)| strategy_matrix(m, n, 12)),
    ) {
        let d = snf(&a).divisors();
        let mut product = BigInt::one();
        for i in 1..=d.len() {
            product *= &d[i - 1];
            prop_assert_eq!(&product, &minor_gcd(&a, i), "rank-{} minors of {:?}", i, a);
        }
    }

    #[test]
    fn det_flips_sign_on_row_swap(
        a in strategy_matrix(3, 3, 40),
        i in 0usize..3,
        j in 0usize..3,
    ) {
        prop_assume!(i != j);
        let mut b = a.clone();
        b.swap_rows(i, j);
        prop_assert_eq!(b.det().unwrap(), -a.det().unwrap());
    }
}

#[test]
fn profiles_are_invariant_under_unimodular_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (label, p) in corpus(8) {
        let base = profile(&p).expect("profile");
        for _ in 0..50 {
            let phi = random_unimodular_map(&mut rng);
            let q = apply_map(&phi, &p);
            let got = profile(&q).expect("profile of image");
            assert_eq!(got.n, base.n, "{label}: point count moved");
            assert_eq!(got.n0, base.n0, "{label}: interior count moved");
            assert_eq!(got.volume, base.volume, "{label}: volume moved");
            assert_eq!(got.index, base.index, "{label}: index moved");
            assert_eq!(got.width, base.width, "{label}: width moved");
            assert_eq!(
                got.hstar.coefficients(),
                base.hstar.coefficients(),
                "{label}: h* moved"
            );
        }
    }
}

#[test]
fn canonical_form_is_invariant_under_scrambles() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (label, p) in corpus(10) {
        let base = canonical_form(&p);
        for _ in 0..100 {
            let phi = random_unimodular_map(&mut rng);
            assert_eq!(
                canonical_form(&apply_map(&phi, &p)),
                base,
                "{label}: canonical form moved"
            );
        }
    }
}

#[test]
fn index_matches_the_determinant_gcd_oracle() {
    for (label, p) in corpus(10) {
        let pts = p.lattice_points();
        let dets = pts
            .iter()
            .combinations(4)
            .map(|t| det3(&t[1].sub(t[0]), &t[2].sub(t[0]), &t[3].sub(t[0])));
        let oracle = gcd_all(dets.collect::<Vec<_>>().iter()).expect("nonempty");
        assert_eq!(sublattice_index(&p), oracle, "{label}");
    }
}

/// Removing a vertex keeps the remaining points inside the original point
/// lattice, so the index can only grow by an integer factor; for
/// non-spanning polytopes it does not grow at all.
#[test]
fn vertex_deletion_respects_the_index_lemmas() {
    for (label, p) in corpus(9) {
        let q = sublattice_index(&p);
        for v in p.vertices() {
            let pv = match p.remove_lattice_point(v) {
                Ok(pv) => pv,
                Err(Error::DimensionDeficient { .. }) => continue,
                Err(e) => panic!("{label}: removing {v:?}: {e}"),
            };
            let qv = sublattice_index(&pv);
            assert!(
                qv.is_multiple_of(&q),
                "{label}: index {q} of the whole does not divide index {qv} of P^v"
            );
            if !q.is_one() {
                assert_eq!(qv, q, "{label}: non-spanning index changed at {v:?}");
            }
        }
    }
}

#[test]
fn projected_configurations_have_dividing_index() {
    for (label, p) in corpus(9) {
        let q = sublattice_index(&p);
        let mut dirs = vec![point(1, 0, 0), point(0, 1, 0), point(0, 0, 1)];
        dirs.push(p.find_spike().direction);
        for d in dirs {
            let q2 = p.project_along(&d).expect("primitive direction").sublattice_index();
            assert!(
                q.is_multiple_of(&q2),
                "{label}: projected index {q2} along {d:?} does not divide {q}"
            );
        }
    }
}

#[test]
fn boundary_and_interior_partition_the_lattice_points() {
    for (label, p) in corpus(10) {
        let interior = p.interior_lattice_points();
        let boundary = p.boundary_lattice_points();
        assert_eq!(interior.len() + boundary.len(), p.size(), "{label}");
        for b in &boundary {
            assert!(
                p.facets().iter().any(|f| f.eval(b).is_zero()),
                "{label}: {b:?} claimed on boundary but on no facet"
            );
        }
    }
}

/// Projecting a family member along its spike merges the spike into a
/// single fiber and keeps the outer points separate: fiber multiset
/// {k,1,1,1} for the three-point families and {k,1,1,1,1} for the
/// four-point ones. Restricted to members whose spike is the unique
/// longest chain (three or more collinear points).
#[test]
fn family_spike_projections_have_the_expected_fibers() {
    let mut seen = 0;
    for n in 7..=10 {
        for (e, _) in enumerate_nonspanning(n) {
            if !e.tag.is_family() {
                continue;
            }
            let outer = match e.tag {
                CatalogTag::F1 | CatalogTag::F2 => 3,
                _ => 4,
            };
            let spike_points = n - outer;
            if spike_points < 3 {
                continue;
            }
            let p = make(&e).expect("family member");
            let spike = p.find_spike();
            assert_eq!(spike.direction, point(0, 0, 1), "{e}: unexpected spike");
            assert_eq!(spike.chain.len(), spike_points, "{e}: spike length");
            let cfg = p.project_along(&spike.direction).expect("primitive");
            let mut fibers: Vec<usize> = cfg.fiber_counts.values().copied().collect();
            fibers.sort_unstable_by(|a, b| b.cmp(a));
            let mut expected = vec![spike_points];
            expected.extend(std::iter::repeat(1).take(outer));
            assert_eq!(fibers, expected, "{e}");
            seen += 1;
        }
    }
    assert!(seen > 20, "sweep too small: {seen}");
}

#[test]
fn hstar_agrees_with_dilated_point_counts() {
    for (label, p) in corpus(12) {
        assert!(
            ehrhart_check(&p, 4).expect("dilation fits"),
            "{label}: h* does not reproduce the Ehrhart counts"
        );
    }
}

#[test]
fn every_nonspanning_entry_has_a_volume_partition() {
    let mut checked = 0;
    for (label, p) in corpus(12) {
        if sublattice_index(&p).is_one() {
            continue;
        }
        assert!(verify_partition(&p), "{label}: no partition certificate");
        checked += 1;
    }
    assert!(checked > 100, "sweep too small: {checked}");
}

#[test]
fn the_two_spanning_circuits_have_no_unimodular_tetrahedron() {
    for tag in [CatalogTag::E511, CatalogTag::E512] {
        let p = make(&CatalogEntry::exception(tag)).expect("exception");
        assert!(sublattice_index(&p).is_one(), "{tag}: expected index 1");
        assert!(
            has_unimodular_tetrahedron(&p).is_none(),
            "{tag}: found a unimodular tetrahedron"
        );
        assert_eq!(hstar(&p).expect("hstar").get(0), BigInt::one(), "{tag}");
    }
}

/// Parameter-level oracle for family isomorphism: reflect each label into
/// its lexicographically smaller mirror, then identify the three cross-tag
/// coincidences. Two family members are isomorphic exactly when their keys
/// agree.
fn family_key(e: &CatalogEntry) -> (CatalogTag, Vec<i64>) {
    let p = &e.params;
    let (tag, params) = match e.tag {
        CatalogTag::F1 | CatalogTag::F2 | CatalogTag::F4 => {
            let mirror = vec![-p[1], -p[0]];
            (e.tag, std::cmp::min(p.clone(), mirror))
        }
        CatalogTag::F3 => {
            let k = p[2];
            let mirror = vec![k - p[1], k - p[0], k];
            (CatalogTag::F3, std::cmp::min(p.clone(), mirror))
        }
        _ => panic!("family tags only"),
    };
    match (tag, params.as_slice()) {
        (CatalogTag::F4, [-1, 0]) => (CatalogTag::F2, vec![-2, 0]),
        (CatalogTag::F3, [-1, 0, 0]) => (CatalogTag::F2, vec![-1, 1]),
        (CatalogTag::F4, [-1, 1]) => (CatalogTag::F3, vec![-1, 1, 1]),
        _ => (tag, params),
    }
}

/// All domain-valid family labels of a given size, including redundant
/// ones, reconstructed from the size bookkeeping.
fn family_labels(n: usize) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for tag in [CatalogTag::F1, CatalogTag::F2] {
        let delta = n as i64 - 4;
        for j in 0..delta {
            out.push(CatalogEntry::family(tag, -j, delta - j));
        }
    }
    let delta = n as i64 - 5;
    for j in 0..delta {
        let (a, b) = (-j, delta - j);
        out.push(CatalogEntry::family(CatalogTag::F4, a, b));
        for k in 0..=b {
            out.push(CatalogEntry::f3(a, b, k));
        }
    }
    out.retain(|e| make(e).is_ok());
    out
}

#[test]
fn isomorphism_matches_the_parameter_oracle_on_families() {
    let mut pairs = 0;
    let mut coincidences = 0;
    for n in 5..=9 {
        let labels = family_labels(n);
        let polys: Vec<LatticePolytope3> =
            labels.iter().map(|e| make(e).expect("domain-valid")).collect();
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                let expected = family_key(&labels[i]) == family_key(&labels[j]);
                assert_eq!(
                    are_isomorphic(&polys[i], &polys[j]),
                    expected,
                    "{} vs {}",
                    labels[i],
                    labels[j]
                );
                pairs += 1;
                if expected {
                    coincidences += 1;
                }
            }
        }
    }
    assert!(pairs > 500, "sweep too small: {pairs}");
    assert!(coincidences > 10, "oracle never fired: {coincidences}");
}

#[test]
fn spike_chains_step_by_the_primitive_direction() {
    for (label, p) in corpus(8) {
        let s = p.find_spike();
        assert_eq!(s.length + 1, s.chain.len(), "{label}");
        for w in s.chain.windows(2) {
            assert_eq!(w[1].sub(&w[0]), s.direction, "{label}: uneven chain");
        }
        let below = s.chain[0].sub(&s.direction);
        let above = s.chain[s.chain.len() - 1].add(&s.direction);
        let pts: std::collections::BTreeSet<&Point3> = p.lattice_points().iter().collect();
        assert!(
            !pts.contains(&below) && !pts.contains(&above),
            "{label}: chain not maximal"
        );
    }
}
