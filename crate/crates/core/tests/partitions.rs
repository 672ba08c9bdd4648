use num_bigint::BigInt;
use proptest::prelude::*;

use jackmix::partitions::{enumerate_partitions, is_dominance_extension, partition_counts, partitions_with_first_at_least};
use jackmix::rational::{factorial, rat};
use jackmix::Partition;

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=7, 1..=8).prop_map(Partition::from_multiset)
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(lam in partition()) {
        let c = lam.conjugate();
        prop_assert_eq!(c.size(), lam.size());
        prop_assert_eq!(c.conjugate(), lam.clone());
        prop_assert_eq!(c.len() as u32, lam.part(0));
    }

    #[test]
    fn n_statistic_two_ways(lam in partition()) {
        prop_assert_eq!(lam.n_stat(), lam.n_stat_by_columns());
        prop_assert_eq!(lam.pair_count(), lam.conjugate().n_stat());
    }

    #[test]
    fn text_form_round_trips(lam in partition()) {
        let s = lam.to_string();
        prop_assert_eq!(s.parse::<Partition>().unwrap(), lam.clone());
        let spaced = s.replace(',', " , ");
        prop_assert_eq!(spaced.parse::<Partition>().unwrap(), lam);
    }

    #[test]
    fn merge_and_split_invert(lam in partition(), r in 1u32..7) {
        for k in 0..lam.len() {
            let whole = lam.part(k);
            if r < whole {
                let s = lam.split(k, r);
                prop_assert_eq!(s.size(), lam.size());
                prop_assert_eq!(s.len(), lam.len() + 1);
                // The two new parts can be merged back.
                let i = s.parts().iter().position(|&x| x == r).unwrap();
                let j = s.parts().iter().enumerate().position(|(q, &x)| q != i && x == whole - r).unwrap();
                prop_assert_eq!(s.merge(i, j), lam.clone());
            }
        }
    }

    #[test]
    fn dominance_reverses_under_conjugation(a in partition(), b in partition()) {
        if a.size() == b.size() {
            let ab = a.dominance_leq(&b).unwrap();
            prop_assert_eq!(ab, b.conjugate().dominance_leq(&a.conjugate()).unwrap());
        } else {
            prop_assert!(a.dominance_leq(&b).is_err());
        }
    }

    #[test]
    fn durfee_height_at_one(lam in partition()) {
        // First row u with λ_u ≤ u, so that cell (u, u+1) is missing.
        let u = (1u32..).find(|&u| lam.part(u as usize - 1) <= u).unwrap();
        prop_assert_eq!(lam.theta_durfee_height(&rat(1, 1)).unwrap(), u);
    }
}

#[test]
fn counts_match_the_partition_numbers() {
    let known = [1u32, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135];
    let counts = partition_counts(14);
    for n in 1..=14u32 {
        assert_eq!(enumerate_partitions(n).unwrap().len() as u32, known[n as usize]);
        assert_eq!(counts[n as usize], known[n as usize] as f64);
    }
    assert_eq!(partition_counts(25)[25], 1958.0);
    assert!(enumerate_partitions(0).is_err());
}

#[test]
fn canonical_order_extends_dominance() {
    for n in 1..=12 {
        let ps = enumerate_partitions(n).unwrap();
        assert!(is_dominance_extension(&ps), "n = {n}");
        assert_eq!(ps[0], Partition::row(n));
        assert_eq!(ps[ps.len() - 1], Partition::column(n));
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn first_part_filter() {
    let all = enumerate_partitions(10).unwrap();
    let some = partitions_with_first_at_least(10, 7);
    let want: Vec<Partition> = all.into_iter().filter(|p| p.part(0) >= 7).collect();
    assert_eq!(some, want);
}

#[test]
fn squared_dimensions_sum_to_factorial() {
    for n in 1..=10u32 {
        let nf = factorial(n as u64);
        let sum: BigInt = enumerate_partitions(n)
            .unwrap()
            .iter()
            .map(|l| {
                let d = &nf / l.hook_product();
                &d * &d
            })
            .sum();
        assert_eq!(sum, nf);
    }
}

#[test]
fn class_sizes_sum_to_factorial() {
    for n in 1..=10u32 {
        let nf = factorial(n as u64);
        let sum: BigInt = enumerate_partitions(n).unwrap().iter().map(|r| &nf / r.z_stat()).sum();
        assert_eq!(sum, nf);
    }
}

#[test]
fn rejects_malformed_text() {
    for s in ["", "[]", "3,1", "[3,x]", "[1,3]", "[0]", "[3,,1]"] {
        assert!(s.parse::<Partition>().is_err(), "{s:?}");
    }
}

#[test]
fn hook_fixture() {
    let lam: Partition = "[3,1]".parse().unwrap();
    let hooks: Vec<(u32, u32)> = lam.hooks().into_iter().map(|(_, a, l)| (a, l)).collect();
    assert_eq!(hooks, vec![(2, 1), (1, 0), (0, 0), (0, 0)]);
    assert_eq!(lam.hook_product(), BigInt::from(8));
}
