use std::collections::BTreeSet;

use brieskorn::homology::Dim5Kind;
use brieskorn::tables::{enumerate, enumerate_shard, write_csv, Filter, LinkRecord, RecordOptions};
use brieskorn::ExponentVector;

/// Sorted tuples by sorting every point of the full product and deduplicating.
fn multisets(len: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = BTreeSet::new();
    let span = (max - 1) as usize;
    let total = span.pow(len as u32);
    for mut code in 0..total {
        let mut v: Vec<u64> = (0..len)
            .map(|_| {
                let x = (code % span) as u64 + 2;
                code /= span;
                x
            })
            .collect();
        v.sort_unstable();
        out.insert(v);
    }
    out.into_iter().collect()
}

fn csv_bytes(rs: &[LinkRecord]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(rs, &mut buf).unwrap();
    buf
}

#[test]
fn enumeration_matches_multiset_generator() {
    for (dim, max) in [(5, 9), (7, 6), (9, 4)] {
        let got: Vec<Vec<u64>> = enumerate(dim, max, &[], RecordOptions::default())
            .unwrap()
            .into_iter()
            .map(|r| r.exponents.entries().to_vec())
            .collect();
        assert_eq!(got, multisets((dim + 3) / 2, max), "dim {dim} max {max}");
    }
}

#[test]
fn sharded_equals_unsharded() {
    let sharded = enumerate(7, 7, &[Filter::Positive], RecordOptions::default()).unwrap();
    let unsharded: Vec<LinkRecord> = multisets(5, 7)
        .into_iter()
        .map(|v| ExponentVector::new(v).unwrap())
        .filter(|a| a.recip_sum() > num_rational::BigRational::from_integer(1.into()))
        .map(|a| LinkRecord::compute(&a, RecordOptions::default()).unwrap())
        .collect();
    assert_eq!(csv_bytes(&sharded), csv_bytes(&unsharded));

    let merged: Vec<LinkRecord> = (2..=7)
        .flat_map(|lead| {
            enumerate_shard(7, 7, lead, &[Filter::Positive], RecordOptions::default()).unwrap()
        })
        .collect();
    assert_eq!(csv_bytes(&merged), csv_bytes(&sharded));
}

#[test]
fn enumeration_is_deterministic() {
    let a = enumerate(5, 10, &[], RecordOptions::default()).unwrap();
    let b = enumerate(5, 10, &[], RecordOptions::default()).unwrap();
    assert_eq!(csv_bytes(&a), csv_bytes(&b));
}

#[test]
fn rational_homology_spheres_over_2_3_5() {
    let rs = enumerate(
        5,
        36,
        &[Filter::Contains(vec![2, 3, 5]), Filter::Rhs],
        RecordOptions::default(),
    )
    .unwrap();
    let mut named = BTreeSet::new();
    for r in &rs {
        match &r.dim5_type.as_ref().unwrap().kind {
            Dim5Kind::Sphere5 => assert_eq!(r.homotopy_sphere, Some(true)),
            Dim5Kind::RationalHomologySphere(Some(name)) => {
                let e = r.exponents.entries();
                assert_eq!(&e[..3], &[2, 3, 5]);
                named.insert((e[3], name.clone()));
            }
            other => panic!("{}: unexpected {:?}", r.exponents, other),
        }
    }
    let rows: [(u64, &str); 7] = [
        (6, "M5"),
        (12, "M5"),
        (18, "M5"),
        (24, "M5"),
        (10, "2M3"),
        (20, "2M3"),
        (15, "4M2"),
    ];
    let expected: BTreeSet<(u64, String)> = rows
        .iter()
        .flat_map(|&(base, name)| {
            (0..)
                .map(move |k| base + 30 * k)
                .take_while(|&x| x <= 36)
                .map(move |x| (x, name.to_string()))
        })
        .collect();
    assert_eq!(named, expected);
}

#[test]
fn homotopy_sphere_filter_agrees_with_records() {
    let all = enumerate(5, 8, &[], RecordOptions::default()).unwrap();
    let spheres = enumerate(5, 8, &[Filter::HomotopySphere], RecordOptions::default()).unwrap();
    let want: Vec<&LinkRecord> = all
        .iter()
        .filter(|r| r.homotopy_sphere == Some(true))
        .collect();
    assert_eq!(spheres.iter().collect::<Vec<_>>(), want);
    assert!(spheres
        .iter()
        .any(|r| r.exponents.entries() == [2, 3, 5, 7]));
}
