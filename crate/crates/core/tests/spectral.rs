use num_traits::{One, Zero};
use proptest::prelude::*;

use jackmix::chain::{build_float_kernel, build_kernel, ewens, ThetaParam};
use jackmix::rational::{rat, to_f64};
use jackmix::spectral::{
    chi2_direct, column_group_weight_exact, completeness_check, cutoff_time, distribution_at, distribution_at_float,
    distribution_profile_exact, l2_bound_by_lambda1, l2_distance, l2_identity_closed, l2_ncycle_closed,
    l2_transposition_closed, left_eigen_check, ncycle_hook_l2, ncycle_tau, row_group_weight_exact, sandwich_check,
    tv_distance, EigenSystem, IdentityL2,
};
use jackmix::{Partition, Rat};

fn th(a: i64, b: i64) -> ThetaParam {
    ThetaParam::new(rat(a, b)).unwrap()
}

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

#[test]
fn three_state_distributions() {
    let t = th(2, 1);
    let k = build_kernel(3, &t, &Rat::zero()).unwrap();
    let pi = ewens(3, &t).unwrap();
    let col = Partition::column(3);
    assert_eq!(distribution_at(&col, 0, &k).unwrap(), vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
    assert_eq!(distribution_at(&col, 1, &k).unwrap(), vec![rat(0, 1), rat(1, 1), rat(0, 1)]);
    let two = distribution_at(&col, 2, &k).unwrap();
    assert_eq!(two, vec![rat(2, 3), rat(1, 6), rat(1, 6)]);
    assert_eq!(tv_distance(&distribution_at(&col, 1, &k).unwrap(), &pi), rat(3, 5));
    let many = distribution_profile_exact(&col, &[0, 1, 2], &k).unwrap();
    assert_eq!(many[2], two);
}

#[test]
fn two_state_completeness() {
    for t in [th(1, 3), th(2, 1), th(7, 2)] {
        let s = EigenSystem::new(2, &t, &Rat::zero()).unwrap();
        assert!(completeness_check(&s).unwrap());
        let k = build_kernel(2, &t, &Rat::zero()).unwrap();
        assert!(left_eigen_check(&s, &k).unwrap());
    }
}

#[test]
fn mismatched_kernel_is_rejected() {
    let s = EigenSystem::new(4, &th(2, 1), &Rat::zero()).unwrap();
    let k = build_kernel(4, &th(3, 1), &Rat::zero()).unwrap();
    assert!(left_eigen_check(&s, &k).is_err());
    let big = EigenSystem::new(10, &th(2, 1), &Rat::zero()).unwrap();
    assert!(completeness_check(&big).is_err());
}

#[test]
fn spectral_sum_matches_chi_square() {
    for n in 2..=7u32 {
        for t in [th(1, 2), th(3, 1)] {
            let d = rat(1, n as i64);
            let k = build_kernel(n, &t, &d).unwrap();
            let s = EigenSystem::new(n, &t, &d).unwrap();
            for start in k.partitions().iter() {
                for steps in [0u64, 1, 3, 6] {
                    let v = distribution_at(start, steps, &k).unwrap();
                    let l2 = l2_distance(start, steps, &s).unwrap();
                    assert_eq!(l2, chi2_direct(&v, s.stationary()), "n={n} {start} k={steps}");
                    assert!(sandwich_check(start, steps, &k, &s).unwrap());
                    let grouped: Rat = l2_bound_by_lambda1(start, steps, &s).unwrap().values().sum();
                    assert_eq!(grouped, l2);
                }
            }
        }
    }
}

#[test]
fn closed_forms_agree_with_the_spectral_sum() {
    for n in 3..=8u32 {
        for t in [th(1, 3), th(2, 1), th(1, 1)] {
            let d = if t.is_one() { rat(1, n as i64) } else { Rat::zero() };
            let s = EigenSystem::new(n, &t, &d).unwrap();
            let trans = {
                let mut v = vec![2];
                v.extend(std::iter::repeat(1).take(n as usize - 2));
                p(&v)
            };
            for k in [0u64, 1, 4] {
                let id = l2_distance(&Partition::column(n), k, &s).unwrap();
                assert_eq!(l2_identity_closed(n, &t, &d, k).unwrap(), id);
                assert_eq!(l2_transposition_closed(n, &t, &d, k).unwrap(), l2_distance(&trans, k, &s).unwrap());
                assert_eq!(l2_ncycle_closed(n, &t, &d, k).unwrap(), l2_distance(&Partition::row(n), k, &s).unwrap());
            }
        }
    }
}

#[test]
fn hook_sum_matches_the_ncycle_form_at_one() {
    for n in 3..=8u32 {
        let d = rat(1, n as i64);
        for k in [1u64, 2, 5] {
            let exact = to_f64(&l2_ncycle_closed(n, &th(1, 1), &d, k).unwrap());
            let hooks = ncycle_hook_l2(n, to_f64(&d), k);
            assert!((exact - hooks).abs() <= 1e-12 * exact.max(1.0), "n={n} k={k}");
        }
    }
}

#[test]
fn ncycle_tau_is_the_first_crossing() {
    let n = 40;
    let d = 1.0 / n as f64;
    let t = ncycle_tau(n, d, 0.25);
    assert!(ncycle_hook_l2(n, d, t) <= 0.25);
    assert!(ncycle_hook_l2(n, d, t - 1) > 0.25);
}

#[test]
fn identity_bound_is_exact_when_complete() {
    for n in [6u32, 9] {
        for t in [th(1, 2), th(3, 1)] {
            let b = IdentityL2::new(n, &t, &Rat::zero(), None).unwrap();
            assert!(b.is_complete());
            for k in [0u64, 2, 7] {
                let exact = to_f64(&l2_identity_closed(n, &t, &Rat::zero(), k).unwrap());
                assert!((b.bound(k) - exact).abs() <= 1e-9 * exact.max(1.0), "n={n} k={k}");
            }
        }
    }
}

#[test]
fn truncated_identity_bound_is_an_upper_bound() {
    let n = 30;
    for t in [th(1, 2), th(2, 1)] {
        let full = IdentityL2::new(n, &t, &Rat::zero(), None).unwrap();
        let cut = IdentityL2::new(n, &t, &Rat::zero(), Some(6)).unwrap();
        assert!(full.is_complete() && !cut.is_complete());
        for k in [40u64, 80, 120, 200] {
            assert!(cut.bound(k) >= full.bound(k) * (1.0 - 1e-12), "k={k}");
            assert!(cut.tv_bound(k) <= 1.0);
        }
    }
}

#[test]
fn group_weight_bounds_dominate_their_groups() {
    let n = 8;
    let t = rat(3, 2);
    let tp = ThetaParam::new(t.clone()).unwrap();
    let s = EigenSystem::new(n, &tp, &Rat::zero()).unwrap();
    let x = s.table().partitions().index_of(&Partition::column(n)).unwrap();
    let pid = &s.stationary().probs()[x];
    for first in 1..n {
        let (mut row, mut col) = (Rat::zero(), Rat::zero());
        for (l, lam) in s.table().partitions().iter().enumerate() {
            let w = s.g_sq(l, x) / (pid * pid);
            if lam.part(0) == first {
                row += &w;
            }
            if lam.len() as u32 == first {
                col += &w;
            }
        }
        assert!(row <= row_group_weight_exact(n, first, &t), "row {first}");
        assert!(col <= column_group_weight_exact(n, first, &t), "column {first}");
    }
}

#[test]
fn float_distribution_tracks_exact() {
    let (n, t, d) = (9, th(1, 2), rat(1, 9));
    let k = build_kernel(n, &t, &d).unwrap();
    let fk = build_float_kernel(n, &t, &d).unwrap();
    let start = p(&[3, 3, 2, 1]);
    for steps in [1u64, 5, 20] {
        let a = distribution_at(&start, steps, &k).unwrap();
        let b = distribution_at_float(&start, steps, &fk).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((to_f64(x) - y).abs() < 1e-12);
        }
    }
}

#[test]
fn cutoff_time_scales_with_theta() {
    assert_eq!(cutoff_time(100, &th(2, 1), 0.0), (50.0 * 100f64.ln()).round() as u64);
    assert_eq!(cutoff_time(100, &th(1, 2), 0.0), (100.0 * 100f64.ln()).round() as u64);
    assert_eq!(cutoff_time(10, &th(2, 1), -10.0), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn left_eigenvectors_and_completeness(n in 2u32..=7, a in 1i64..=5, b in 1i64..=5) {
        let t = ThetaParam::new(rat(a, b)).unwrap();
        let d = if t.is_one() { rat(1, n as i64) } else { Rat::zero() };
        let s = EigenSystem::new(n, &t, &d).unwrap();
        let k = build_kernel(n, &t, &d).unwrap();
        prop_assert!(left_eigen_check(&s, &k).unwrap());
        prop_assert!(completeness_check(&s).unwrap());
        prop_assert_eq!(s.betas()[0].clone(), Rat::one());
    }
}
