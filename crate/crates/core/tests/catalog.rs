use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use nonspan_core::catalog::{
    canonical_shear, count_closed_form, dim4_example, enumerate_nonspanning, enumerate_width_one,
    family_counts_table, make, CatalogEntry, CatalogTag,
};
use nonspan_core::equiv::canonical_form;
use nonspan_core::invariants::{sublattice_index, width};
use nonspan_core::Error;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn index_of(entry: &CatalogEntry) -> BigInt {
    sublattice_index(&make(entry).unwrap())
}

#[test]
fn make_width_one_tetrahedron() {
    let p = make(&CatalogEntry::t(1, 2, 1, 1)).unwrap();
    assert_eq!(p.vertices().len(), 4);
    assert_eq!(p.size(), 4);
    assert_eq!(sublattice_index(&p), big(2));
    assert_eq!(width(&p).0, big(1));
}

#[test]
fn make_exceptions() {
    let e55 = make(&CatalogEntry::exception(CatalogTag::E55)).unwrap();
    assert_eq!(e55.size(), 5);
    assert_eq!(sublattice_index(&e55), big(5));

    for tag in [
        CatalogTag::E63,
        CatalogTag::E72,
        CatalogTag::E821,
        CatalogTag::E822,
        CatalogTag::E823,
        CatalogTag::E511,
        CatalogTag::E512,
    ] {
        let entry = CatalogEntry::exception(tag);
        let p = make(&entry).unwrap();
        assert_eq!(p.size(), entry.size(), "size of {tag}");
        assert_eq!(
            sublattice_index(&p),
            big(tag.stated_index().unwrap() as i64),
            "index of {tag}"
        );
    }
}

#[test]
fn make_rejects_out_of_domain_parameters() {
    let cases = [
        CatalogEntry::family(CatalogTag::F2, 0, 1),
        CatalogEntry::f3(0, 1, 1),
        CatalogEntry::family(CatalogTag::F1, 1, 2),
        CatalogEntry::family(CatalogTag::F4, -1, 0),
        CatalogEntry::f3(0, 2, 3),
        CatalogEntry::f3(0, 2, -1),
        CatalogEntry::t(2, 4, 1, 1),
        CatalogEntry::t(3, 3, 1, 1),
        CatalogEntry::t(-1, 2, 1, 1),
        CatalogEntry::t(1, 2, 0, 1),
        CatalogEntry::new(CatalogTag::E55, vec![1]),
        CatalogEntry::new(CatalogTag::F1, vec![0]),
    ];
    for entry in cases {
        assert!(
            matches!(make(&entry), Err(Error::ParamDomain(_))),
            "expected domain error for {entry}"
        );
    }
}

#[test]
fn size_bookkeeping_matches_construction() {
    let entries = [
        CatalogEntry::family(CatalogTag::F1, -2, 3),
        CatalogEntry::family(CatalogTag::F2, 0, 2),
        CatalogEntry::f3(-1, 2, 0),
        CatalogEntry::family(CatalogTag::F4, -1, 2),
        CatalogEntry::t(1, 3, 4, 2),
        CatalogEntry::t(0, 1, 1, 1),
        CatalogEntry::exception(CatalogTag::E821),
    ];
    for entry in entries {
        assert_eq!(make(&entry).unwrap().size(), entry.size(), "{entry}");
    }
}

#[test]
fn family_members_have_stated_width_and_index() {
    for (tag, expected_index) in [
        (CatalogTag::F1, 3),
        (CatalogTag::F2, 2),
        (CatalogTag::F3, 2),
        (CatalogTag::F4, 2),
    ] {
        for n in 5..=9 {
            for entry in enumerate_nonspanning(n)
                .into_iter()
                .map(|(e, _)| e)
                .filter(|e| e.tag == tag)
            {
                let p = make(&entry).unwrap();
                assert_eq!(sublattice_index(&p), big(expected_index), "{entry}");
                assert!(width(&p).0 >= big(2), "{entry} must have width > 1");
            }
        }
    }
}

#[test]
fn enumeration_counts_match_census() {
    // Non-spanning polytopes of width > 1, by size and index.
    let expected: [(usize, &[(i64, usize)]); 8] = [
        (4, &[]),
        (5, &[(3, 1), (5, 1)]),
        (6, &[(2, 2), (3, 3)]),
        (7, &[(2, 8), (3, 2)]),
        (8, &[(2, 14), (3, 3)]),
        (9, &[(2, 15), (3, 3)]),
        (10, &[(2, 19), (3, 4)]),
        (11, &[(2, 24), (3, 4)]),
    ];
    for (n, rows) in expected {
        let mut by_index: BTreeMap<BigInt, usize> = BTreeMap::new();
        for (entry, _) in enumerate_nonspanning(n) {
            *by_index.entry(index_of(&entry)).or_insert(0) += 1;
        }
        let want: BTreeMap<BigInt, usize> =
            rows.iter().map(|(q, c)| (big(*q), *c)).collect();
        assert_eq!(by_index, want, "size {n}");
    }
}

#[test]
fn enumeration_size_five_is_exactly_two_entries() {
    let got: Vec<CatalogEntry> = enumerate_nonspanning(5).into_iter().map(|(e, _)| e).collect();
    assert_eq!(
        got,
        vec![
            CatalogEntry::family(CatalogTag::F1, 0, 1),
            CatalogEntry::exception(CatalogTag::E55),
        ]
    );
}

#[test]
fn enumeration_size_seven_labels() {
    // The size-7 coincidence removes F4(-1,1) in favor of F3(0,2,1).
    let got: Vec<String> = enumerate_nonspanning(7)
        .into_iter()
        .map(|(e, _)| e.to_string())
        .collect();
    assert_eq!(
        got,
        vec![
            "F1(-1,2)",
            "F1(0,3)",
            "F2(-1,2)",
            "F2(0,3)",
            "F3(-1,1,0)",
            "F3(0,2,0)",
            "F3(0,2,1)",
            "F3(0,2,2)",
            "F4(0,2)",
            "E72",
        ]
    );
}

#[test]
fn enumeration_size_six_merges_across_families() {
    // F2(0,2) = F4(0,1) and F2(-1,1) = F3(0,1,0); representatives carry
    // the smallest tag.
    let got: Vec<String> = enumerate_nonspanning(6)
        .into_iter()
        .map(|(e, _)| e.to_string())
        .collect();
    assert_eq!(
        got,
        vec!["F1(-1,1)", "F1(0,2)", "F2(-1,1)", "F2(0,2)", "E63"]
    );
}

#[test]
fn representatives_use_canonical_orientation() {
    // At size 8 the mirror pair F1(-1,3) / F1(-3,1) collapses to the
    // canonically oriented member.
    let f1: Vec<String> = enumerate_nonspanning(8)
        .into_iter()
        .map(|(e, _)| e)
        .filter(|e| e.tag == CatalogTag::F1)
        .map(|e| e.to_string())
        .collect();
    assert_eq!(f1, vec!["F1(-2,2)", "F1(-1,3)", "F1(0,4)"]);
    for n in 5..=10 {
        for (entry, _) in enumerate_nonspanning(n) {
            if let Some(params) = entry.family_params() {
                assert!(params.canonical_orientation(), "{entry}");
            }
        }
    }
}

#[test]
fn enumerated_forms_are_distinct_and_match_entries() {
    for n in 5..=9 {
        let entries = enumerate_nonspanning(n);
        let forms: BTreeSet<_> = entries.iter().map(|(_, cf)| cf.clone()).collect();
        assert_eq!(forms.len(), entries.len(), "duplicate classes at size {n}");
        for (entry, cf) in &entries {
            let p = make(entry).unwrap();
            assert_eq!(p.size(), n);
            assert_eq!(&canonical_form(&p), cf, "stored form for {entry}");
        }
    }
}

#[test]
fn width_one_enumeration_small_cases() {
    assert_eq!(
        enumerate_width_one(4, 2).unwrap(),
        vec![CatalogEntry::t(1, 2, 1, 1)]
    );
    // q = 5, size 6: two shear classes for each of (a,b) = (2,2), (3,1).
    let got = enumerate_width_one(6, 5).unwrap();
    assert_eq!(
        got,
        vec![
            CatalogEntry::t(3, 5, 2, 2),
            CatalogEntry::t(4, 5, 2, 2),
            CatalogEntry::t(3, 5, 3, 1),
            CatalogEntry::t(4, 5, 3, 1),
        ]
    );
    // q = 1 labels the spanning (White) tetrahedra.
    assert_eq!(
        enumerate_width_one(5, 1).unwrap(),
        vec![CatalogEntry::t(0, 1, 2, 1)]
    );
    assert!(enumerate_width_one(6, 0).is_err());
    assert!(enumerate_width_one(3, 2).unwrap().is_empty());
}

#[test]
fn width_one_entries_have_stated_invariants() {
    for q in 1..=5 {
        for n in 4..=8 {
            for entry in enumerate_width_one(n, q).unwrap() {
                let p = make(&entry).unwrap();
                assert_eq!(p.size(), n, "{entry}");
                assert_eq!(sublattice_index(&p), big(q), "{entry}");
                assert_eq!(width(&p).0, big(1), "{entry}");
                let (a, b) = (entry.params[2], entry.params[3]);
                assert!(a >= b, "{entry} not in a >= b form");
            }
        }
    }
}

#[test]
fn shear_classes_match_geometric_classification() {
    // Oracle: group actual polytopes by canonical form and compare with
    // the arithmetic orbit rule {p, q-p} (+ inverses when a = b).
    for (q, a, b) in [(5, 2, 2), (5, 3, 1), (7, 1, 1), (8, 2, 1)] {
        let mut arithmetic = BTreeSet::new();
        let mut geometric = BTreeSet::new();
        for p in 1..q {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            arithmetic.insert(canonical_shear(p, q, a == b));
            geometric.insert(canonical_form(&make(&CatalogEntry::t(p, q, a, b)).unwrap()));
        }
        assert_eq!(
            arithmetic.len(),
            geometric.len(),
            "T_(p,{q})({a},{b}) class count"
        );
        // Entries from distinct orbits really are non-isomorphic.
        let reps: Vec<i64> = arithmetic.iter().copied().collect();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                let pi = make(&CatalogEntry::t(reps[i], q, a, b)).unwrap();
                let pj = make(&CatalogEntry::t(reps[j], q, a, b)).unwrap();
                assert_ne!(canonical_form(&pi), canonical_form(&pj));
            }
        }
    }
}

#[test]
fn closed_form_counts() {
    assert_eq!(count_closed_form(9, 2).unwrap(), 15);
    assert_eq!(count_closed_form(10, 3).unwrap(), 4);
    assert_eq!(count_closed_form(9, 5).unwrap(), 0);
    assert_eq!(count_closed_form(11, 2).unwrap(), 24);
    assert!(matches!(
        count_closed_form(8, 2),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(
        count_closed_form(9, 1),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn closed_form_agrees_with_enumeration() {
    for n in 9..=13 {
        let mut index2 = 0u64;
        let mut index3 = 0u64;
        for (entry, _) in enumerate_nonspanning(n) {
            match index_of(&entry) {
                q if q == big(2) => index2 += 1,
                q if q == big(3) => index3 += 1,
                q => panic!("unexpected index {q} at size {n}"),
            }
        }
        assert_eq!(index2, count_closed_form(n, 2).unwrap(), "index 2, size {n}");
        assert_eq!(index3, count_closed_form(n, 3).unwrap(), "index 3, size {n}");
    }
}

#[test]
fn family_counts_table_matches_census() {
    let rows = family_counts_table(11).unwrap();
    let f1: Vec<usize> = rows.iter().map(|r| r.f1.enumerated).collect();
    let f2: Vec<usize> = rows.iter().map(|r| r.f2.enumerated).collect();
    let f3: Vec<usize> = rows.iter().map(|r| r.f3.enumerated).collect();
    let f4: Vec<usize> = rows.iter().map(|r| r.f4.enumerated).collect();
    let t2: Vec<usize> = rows.iter().map(|r| r.total_index2.enumerated).collect();
    let t3: Vec<usize> = rows.iter().map(|r| r.total_index3.enumerated).collect();
    assert_eq!(f1, vec![1, 2, 2, 3, 3, 4, 4]);
    assert_eq!(f2, vec![0, 2, 2, 3, 3, 4, 4]);
    assert_eq!(f3, vec![0, 1, 4, 6, 9, 12, 16]);
    assert_eq!(f4, vec![0, 1, 2, 2, 3, 3, 4]);
    assert_eq!(t2, vec![0, 2, 7, 11, 15, 19, 24]);
    assert_eq!(t3, f1);

    // Starred cells: the formula's sole extra candidate has width one.
    let row5 = &rows[0];
    assert_eq!(row5.f2.formula, Some(1));
    assert!(row5.f2.starred());
    assert_eq!(row5.f3.formula, None);
    assert_eq!(row5.f4.formula, None);
    let row6 = &rows[1];
    assert_eq!(row6.f3.formula, Some(2));
    assert!(row6.f3.starred());
    assert!(!row6.f1.starred());
    // Double-starred totals: cross-family coincidences at sizes 6 and 7.
    assert_eq!(rows[1].total_index2.enumerated, 2);
    assert_eq!(rows[2].total_index2.enumerated, 7);
    assert_eq!(rows[2].total_index2.formula, Some(8));
    // From size 8 on, enumeration and formulas agree everywhere.
    for row in &rows[3..] {
        for cell in [
            &row.f1,
            &row.f2,
            &row.f3,
            &row.f4,
            &row.total_index2,
            &row.total_index3,
        ] {
            assert_eq!(cell.formula, Some(cell.enumerated), "size {}", row.n);
        }
    }

    assert!(family_counts_table(4).is_err());
}

#[test]
fn dim4_counterexample() {
    let report = dim4_example();
    assert_eq!(report.minors, vec![big(4), big(2), big(2), big(2)]);
    assert_eq!(report.index, big(2));
    assert_eq!(report.minor_gcd, big(2));
    assert!(!report.all_volumes_equal_index);
    // gcd of the empty-simplex volumes equals the index, yet the volumes
    // themselves are not all equal to it: the 3d partition law fails in 4d.
    assert_eq!(report.minor_gcd, report.index);
}

#[test]
fn tag_parsing_and_display() {
    assert_eq!("F3".parse::<CatalogTag>().unwrap(), CatalogTag::F3);
    assert_eq!("e821".parse::<CatalogTag>().unwrap(), CatalogTag::E821);
    assert_eq!("t".parse::<CatalogTag>().unwrap(), CatalogTag::T);
    assert!("F5".parse::<CatalogTag>().is_err());
    assert_eq!(CatalogEntry::t(1, 2, 1, 1).to_string(), "T(1,2,1,1)");
    assert_eq!(CatalogEntry::f3(-1, 2, 0).to_string(), "F3(-1,2,0)");
    assert_eq!(
        CatalogEntry::exception(CatalogTag::E55).to_string(),
        "E55"
    );
}
