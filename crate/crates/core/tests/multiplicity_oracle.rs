mod common;

use std::io::Write;

use common::*;
use ecvm::multiplicity::{exact, min_degree_two_count, sparse_interface_count, sparse_matchings, MultiplicityTable};
use ecvm::{Error, LogNumber};
use num_bigint::BigUint;

fn same(got: LogNumber, want: u64) -> bool {
    if want == 0 {
        got.is_zero()
    } else {
        (got.ln() - (want as f64).ln()).abs() <= 1e-9 * (want as f64).ln().abs().max(1.0)
    }
}

#[test]
fn counts_match_enumeration_up_to_six() {
    for n in 0..=6 {
        let o = oracle_counts(n);
        for e in 0..o.matchings.len() {
            assert_eq!(exact::matchings(e, n), BigUint::from(o.matchings[e]), "matchings E={e} n={n}");
            assert!(same(sparse_matchings(e, n), o.matchings[e]));
            assert!(same(min_degree_two_count(e, n), o.min_degree_two[e]), "C_d E={e} n={n}");
            for n_s in 0..=n {
                let want = o.interface[n_s][e];
                assert_eq!(exact::sparse_interface(e, n_s, n - n_s), BigUint::from(want));
                assert!(same(sparse_interface_count(e, n_s, n - n_s), want), "E={e} n_s={n_s} n={n}");
            }
        }
    }
}

#[test]
fn column_sums_match_total_min_degree_two_graphs() {
    for n in 0..=6 {
        let total: u64 = all_graphs(n)
            .filter(|(_, g)| (0..n).all(|v| g.degree(v) >= 2))
            .count() as u64;
        let t = MultiplicityTable::build(n);
        let sum: LogNumber = t.dense_column(n).iter().copied().sum();
        assert!(same(sum, total), "n={n}");
    }
}

#[test]
fn documented_examples() {
    let ln = |x: LogNumber| x.ln();
    assert_eq!(ln(sparse_matchings(0, 9)), 0.0);
    assert!(same(sparse_matchings(1, 2), 1));
    assert!(same(sparse_matchings(2, 4), 3));
    assert!(same(sparse_interface_count(1, 2, 1), 3));
    assert!(same(sparse_interface_count(0, 5, 4), 1));
    assert!(same(sparse_interface_count(2, 2, 3), 9));
    assert!(same(min_degree_two_count(3, 3), 1));
    assert!(same(min_degree_two_count(4, 4), 3));
    assert!(same(min_degree_two_count(5, 4), 6));
    assert!(min_degree_two_count(1, 2).is_zero());
    assert!(min_degree_two_count(3, 4).is_zero());
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let built = MultiplicityTable::load_or_build(14, Some(dir.path())).unwrap();
    let path = dir.path().join(MultiplicityTable::cache_file_name(14));
    assert!(path.exists());
    let loaded = MultiplicityTable::load_or_build(14, Some(dir.path())).unwrap();
    for n_s in 0..=14 {
        assert_eq!(built.sparse_row(n_s), loaded.sparse_row(n_s));
        assert_eq!(built.dense_column(n_s), loaded.dense_column(n_s));
    }

    let mut bytes = std::fs::read(&path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x40;
    std::fs::File::create(&path).unwrap().write_all(&bytes).unwrap();
    assert!(matches!(
        MultiplicityTable::load_or_build(14, Some(dir.path())),
        Err(Error::Cache(_))
    ));

    // a valid file for a different order is refused
    let other = tempfile::tempdir().unwrap();
    MultiplicityTable::load_or_build(9, Some(other.path())).unwrap();
    std::fs::copy(
        other.path().join(MultiplicityTable::cache_file_name(9)),
        other.path().join(MultiplicityTable::cache_file_name(10)),
    )
    .unwrap();
    assert!(MultiplicityTable::load_or_build(10, Some(other.path())).is_err());
}
