use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nonspan_core::catalog::{enumerate_width_one, make, CatalogEntry, CatalogTag};
use nonspan_core::classify::{
    classify, extract_width1_params, verify_classification_suite,
    verify_classification_suite_seeded, Verdict,
};
use nonspan_core::equiv::{apply_map, random_unimodular_map};
use nonspan_core::geom::{hull, point, LatticePolytope3, Point3};
use nonspan_core::Error;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn poly(coords: &[(i64, i64, i64)]) -> LatticePolytope3 {
    let pts: Vec<Point3> = coords.iter().map(|&(x, y, z)| point(x, y, z)).collect();
    hull(&pts).unwrap()
}

fn unit_tetrahedron() -> LatticePolytope3 {
    poly(&[(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
}

fn scrambled(p: &LatticePolytope3, seed: u64) -> LatticePolytope3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    apply_map(&random_unimodular_map(&mut rng), p)
}

fn catalog(entry: &CatalogEntry) -> LatticePolytope3 {
    make(entry).unwrap()
}

#[test]
fn unit_tetrahedron_spans_with_witness() {
    let r = classify(&unit_tetrahedron()).unwrap();
    assert_eq!(r.profile.index, big(1));
    match r.verdict {
        Verdict::Spanning {
            has_unimodular_tetra,
            witness,
            e51_match,
        } => {
            assert!(has_unimodular_tetra);
            assert_eq!(witness.unwrap().volume, big(1));
            assert_eq!(e51_match, None);
        }
        v => panic!("expected spanning, got {v:?}"),
    }
}

#[test]
fn scrambled_width_one_recovers_parameters() {
    let t = catalog(&CatalogEntry::t(3, 5, 2, 2));
    for seed in 0..5 {
        let r = classify(&scrambled(&t, seed)).unwrap();
        match r.verdict {
            Verdict::WidthOne { p, q, a, b } => {
                assert_eq!((p, q, a, b), (big(3), big(5), big(2), big(2)));
            }
            v => panic!("expected width one, got {v:?}"),
        }
        assert_eq!(r.profile.width, big(1));
        assert_eq!(r.profile.index, big(5));
    }
}

#[test]
fn extraction_canonicalizes_the_shear() {
    // 2 and 3 describe the same tetrahedron for q = 5; the larger wins.
    let t = catalog(&CatalogEntry::t(2, 5, 3, 1));
    assert_eq!(
        extract_width1_params(&t).unwrap(),
        (big(3), big(5), big(3), big(1))
    );
    // For a = b the inverses join the orbit: {3, 4, 5, 2} for q = 7.
    let t = catalog(&CatalogEntry::t(3, 7, 2, 2));
    assert_eq!(
        extract_width1_params(&t).unwrap(),
        (big(5), big(7), big(2), big(2))
    );
    // Composite index.
    let t = catalog(&CatalogEntry::t(7, 12, 2, 1));
    assert_eq!(
        extract_width1_params(&t).unwrap(),
        (big(7), big(12), big(2), big(1))
    );
}

#[test]
fn extraction_matches_enumeration_labels() {
    // Every canonical width-one label extracts back to itself, scrambled.
    for q in [2, 3, 5] {
        for n in 4..=8 {
            for entry in enumerate_width_one(n, q).unwrap() {
                let p = scrambled(&catalog(&entry), (n as u64) << 8 | q as u64);
                let want: Vec<BigInt> = entry.params.iter().map(|x| big(*x)).collect();
                let (sp, sq, sa, sb) = extract_width1_params(&p).unwrap();
                assert_eq!(vec![sp, sq, sa, sb], want, "{entry}");
            }
        }
    }
}

#[test]
fn extraction_rejects_bad_inputs() {
    assert!(matches!(
        extract_width1_params(&unit_tetrahedron()),
        Err(Error::SpanningInput)
    ));
    let wide = catalog(&CatalogEntry::family(CatalogTag::F2, 0, 2));
    match extract_width1_params(&wide) {
        Err(Error::NotWidthOne { width }) => assert_eq!(width, big(2)),
        other => panic!("expected NotWidthOne, got {other:?}"),
    }
}

#[test]
fn scrambled_exception_is_recognized() {
    let e = catalog(&CatalogEntry::exception(CatalogTag::E823));
    let p = scrambled(&e, 17);
    let r = classify(&p).unwrap();
    match r.verdict {
        Verdict::Exception { tag, isomorphism } => {
            assert_eq!(tag, CatalogTag::E823);
            let image = apply_map(&isomorphism, &p);
            assert_eq!(image.lattice_points(), e.lattice_points());
        }
        v => panic!("expected exception, got {v:?}"),
    }
}

#[test]
fn scrambled_family_member_is_recognized_with_witness() {
    let entry = CatalogEntry::f3(-1, 2, 1);
    let base = catalog(&entry);
    let p = scrambled(&base, 23);
    let r = classify(&p).unwrap();
    match r.verdict {
        Verdict::Family {
            tag,
            params,
            isomorphism,
        } => {
            assert_eq!(tag, CatalogTag::F3);
            assert_eq!((params.a, params.b, params.k), (-1, 2, Some(1)));
            let image = apply_map(&isomorphism, &p);
            assert_eq!(image.lattice_points(), base.lattice_points());
        }
        v => panic!("expected family, got {v:?}"),
    }
}

#[test]
fn coincident_members_report_the_canonical_label() {
    // F4(0,1) = F2(0,2), F3(0,1,0) = F2(-1,1), F4(-1,1) = F3(0,2,1):
    // the smallest tag labels the class.
    let cases = [
        (CatalogEntry::family(CatalogTag::F4, 0, 1), CatalogTag::F2, (0, 2, None)),
        (CatalogEntry::f3(0, 1, 0), CatalogTag::F2, (-1, 1, None)),
        (CatalogEntry::family(CatalogTag::F4, -1, 1), CatalogTag::F3, (0, 2, Some(1))),
    ];
    for (input, want_tag, (wa, wb, wk)) in cases {
        let r = classify(&catalog(&input)).unwrap();
        match r.verdict {
            Verdict::Family { tag, params, .. } => {
                assert_eq!(tag, want_tag, "input {input}");
                assert_eq!((params.a, params.b, params.k), (wa, wb, wk), "input {input}");
            }
            v => panic!("expected family for {input}, got {v:?}"),
        }
    }
}

#[test]
fn spanning_exceptions_match_by_form() {
    for tag in [CatalogTag::E511, CatalogTag::E512] {
        let base = catalog(&CatalogEntry::exception(tag));
        let p = scrambled(&base, 99 + tag as u64);
        let r = classify(&p).unwrap();
        match r.verdict {
            Verdict::Spanning {
                has_unimodular_tetra,
                witness,
                e51_match,
            } => {
                assert!(!has_unimodular_tetra);
                assert!(witness.is_none());
                assert_eq!(e51_match, Some(tag));
            }
            v => panic!("expected spanning for {tag}, got {v:?}"),
        }
    }
}

#[test]
fn verdicts_respect_profile_invariants() {
    let samples = [
        CatalogEntry::t(1, 2, 1, 1),
        CatalogEntry::t(4, 5, 3, 2),
        CatalogEntry::family(CatalogTag::F1, -1, 2),
        CatalogEntry::family(CatalogTag::F2, 0, 3),
        CatalogEntry::f3(0, 2, 2),
        CatalogEntry::family(CatalogTag::F4, 0, 2),
        CatalogEntry::exception(CatalogTag::E55),
        CatalogEntry::exception(CatalogTag::E63),
        CatalogEntry::exception(CatalogTag::E72),
        CatalogEntry::exception(CatalogTag::E821),
    ];
    for (i, entry) in samples.iter().enumerate() {
        let r = classify(&scrambled(&catalog(entry), i as u64)).unwrap();
        match &r.verdict {
            Verdict::Spanning { .. } => assert_eq!(r.profile.index, big(1)),
            Verdict::WidthOne { q, .. } => {
                assert_eq!(r.profile.width, big(1));
                assert_eq!(&r.profile.index, q);
                assert!(*q > big(1));
            }
            Verdict::Family { .. } | Verdict::Exception { .. } => {
                assert!(r.profile.width >= big(2));
                assert!(
                    [big(2), big(3), big(5)].contains(&r.profile.index),
                    "index {}",
                    r.profile.index
                );
            }
            Verdict::ContradictsClassification { reason } => {
                panic!("contradiction on {entry}: {reason}")
            }
        }
    }
}

#[test]
fn suite_passes_and_validates_nmax() {
    let report = verify_classification_suite(8).unwrap();
    assert!(report.passed(), "failures: {:?}", report.failures);
    assert!(report.checked > 100);
    assert!(matches!(
        verify_classification_suite(7),
        Err(Error::InvalidArgument(_))
    ));
    // Seeds change the scrambles, not the outcome.
    let other = verify_classification_suite_seeded(8, 12345).unwrap();
    assert!(other.passed(), "failures: {:?}", other.failures);
    assert_eq!(other.checked, report.checked);
}
