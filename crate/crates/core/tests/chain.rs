use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jackmix::chain::{
    build_kernel, build_kernel_allow_periodic, eigenvalue, ewens, holding_closed_form, replica_rng, replica_seed,
    sample_ewens, sample_step, ThetaParam,
};
use jackmix::experiments::{binomial_se, max_sigma_deviation, one_step_counts};
use jackmix::partitions::enumerate_partitions;
use jackmix::rational::{int, rat, to_f64};
use jackmix::{Error, Partition, Rat};

fn th(a: i64, b: i64) -> ThetaParam {
    ThetaParam::new(rat(a, b)).unwrap()
}

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

#[test]
fn three_state_kernel_fixture() {
    let k = build_kernel(3, &th(2, 1), &Rat::zero()).unwrap();
    let want = vec![
        vec![rat(1, 2), rat(1, 2), rat(0, 1)],
        vec![rat(2, 3), rat(1, 6), rat(1, 6)],
        vec![rat(0, 1), rat(1, 1), rat(0, 1)],
    ];
    assert_eq!(k.dense(), want);
    let pi = ewens(3, &th(2, 1)).unwrap();
    assert_eq!(pi.probs(), &[rat(8, 15), rat(2, 5), rat(1, 15)]);
    assert_eq!(eigenvalue(&p(&[2, 1]), &th(2, 1), &Rat::zero()), rat(1, 6));
    assert_eq!(eigenvalue(&p(&[1, 1, 1]), &th(2, 1), &Rat::zero()), rat(-1, 2));
}

#[test]
fn two_state_kernel_below_one() {
    for t in [th(1, 3), th(1, 2), th(4, 5)] {
        let k = build_kernel(2, &t, &Rat::zero()).unwrap();
        assert_eq!(k.get(&p(&[2]), &p(&[1, 1])), Rat::one());
        assert_eq!(k.get(&p(&[1, 1]), &p(&[2])), t.value().clone());
    }
    let pi = ewens(2, &th(2, 1)).unwrap();
    assert_eq!(pi.prob(&p(&[1, 1])), rat(1, 3));
    assert_eq!(pi.prob(&p(&[2])), rat(2, 3));
}

#[test]
fn uniform_measure_at_theta_one() {
    let t = th(1, 1);
    for n in 1..=8 {
        let pi = ewens(n, &t).unwrap();
        for rho in pi.partitions().iter() {
            assert_eq!(pi.prob(rho), Rat::one() / Rat::from_integer(rho.z_stat()));
        }
    }
}

#[test]
fn laziness_raises_the_diagonal() {
    let n = 7;
    let t = th(3, 1);
    let d = rat(1, n as i64);
    let a = build_kernel(n, &t, &Rat::zero()).unwrap().dense();
    let b = build_kernel(n, &t, &d).unwrap().dense();
    for i in 0..a.len() {
        assert_eq!(&b[i][i] - &a[i][i], &d * (Rat::one() - &a[i][i]));
    }
}

#[test]
fn rows_balance_and_holding_for_the_grid() {
    for n in 2..=10u32 {
        for t in [th(1, 3), th(1, 2), th(2, 1), th(3, 1)] {
            for d in [Rat::zero(), rat(1, n as i64)] {
                let k = build_kernel(n, &t, &d).unwrap();
                let pi = ewens(n, &t).unwrap();
                let dense = k.dense();
                for (i, row) in dense.iter().enumerate() {
                    assert_eq!(row.iter().cloned().sum::<Rat>(), Rat::one());
                    assert!(row.iter().all(|x| !x.is_negative()));
                    for (j, x) in row.iter().enumerate() {
                        assert_eq!(&pi.probs()[i] * x, &pi.probs()[j] * &dense[j][i]);
                    }
                }
                if d.is_zero() {
                    for (i, lam) in k.partitions().iter().enumerate() {
                        assert_eq!(dense[i][i], holding_closed_form(lam, &t), "hold {lam}");
                    }
                }
            }
        }
    }
}

#[test]
fn extreme_eigenvalues() {
    for n in 2..=9u32 {
        for t in [th(1, 3), th(2, 1), th(1, 1)] {
            let d = if t.is_one() { rat(1, n as i64) } else { Rat::zero() };
            assert_eq!(eigenvalue(&Partition::row(n), &t, &d), Rat::one());
        }
        for t in [th(1, 3), th(2, 1), th(5, 2)] {
            let want = Rat::one() - t.merge_accept() - t.split_accept();
            assert_eq!(eigenvalue(&Partition::column(n), &t, &Rat::zero()), want);
        }
    }
}

#[test]
fn rejects_bad_parameters() {
    assert!(matches!(ThetaParam::new(Rat::zero()), Err(Error::InvalidArgument(_))));
    assert!(matches!(ThetaParam::new(int(-1)), Err(Error::InvalidArgument(_))));
    assert!(matches!(build_kernel(4, &th(1, 1), &Rat::zero()), Err(Error::Periodic(_))));
    assert!(build_kernel_allow_periodic(4, &th(1, 1), &Rat::zero()).is_ok());
    assert!(build_kernel(4, &th(2, 1), &Rat::one()).is_err());
    assert!(build_kernel(4, &th(2, 1), &rat(-1, 5)).is_err());
    assert!(build_kernel(1, &th(2, 1), &Rat::zero()).is_err());
}

#[test]
fn replica_seeds_are_distinct() {
    let seeds: std::collections::HashSet<u64> = (0..10_000).map(|i| replica_seed(42, i)).collect();
    assert_eq!(seeds.len(), 10_000);
    use rand::Rng;
    let a: u64 = replica_rng(7, 3).gen();
    let b: u64 = replica_rng(7, 3).gen();
    assert_eq!(a, b);
}

#[test]
fn forced_moves_from_the_extremes() {
    // θ < 1 accepts every split; θ > 1 accepts every merge.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let s = sample_step(&Partition::row(6), &th(1, 2), &Rat::zero(), &mut rng).unwrap();
        assert_eq!(s.len(), 2);
        let m = sample_step(&Partition::column(6), &th(2, 1), &Rat::zero(), &mut rng).unwrap();
        assert_eq!(m, p(&[2, 1, 1, 1, 1]));
    }
    assert_eq!(sample_ewens(1, &th(3, 1), &mut rng), p(&[1]));
}

#[test]
fn one_step_from_two_one_matches_the_row() {
    let reps = 1_000_000;
    let counts = one_step_counts(&p(&[2, 1]), &th(2, 1), &Rat::zero(), reps, 11).unwrap();
    let exact = vec![(p(&[3]), rat(2, 3)), (p(&[2, 1]), rat(1, 6)), (p(&[1, 1, 1]), rat(1, 6))];
    assert!(max_sigma_deviation(&counts, &exact, reps) <= 4.0);
}

#[test]
fn ewens_block_count_mean() {
    // E ℓ = Σ α/(α+i−1) with α = 1/θ.
    let (n, t) = (20u32, th(2, 1));
    let alpha = 0.5;
    let want: f64 = (1..=n).map(|i| alpha / (alpha + i as f64 - 1.0)).sum();
    let reps = 200_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let draws: Vec<f64> = (0..reps).map(|_| sample_ewens(n, &t, &mut rng).len() as f64).collect();
    let mean = draws.iter().sum::<f64>() / reps as f64;
    let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (reps as f64 - 1.0);
    assert!((mean - want).abs() <= 4.0 * (var / reps as f64).sqrt(), "{mean} vs {want}");
}

#[test]
fn ewens_at_theta_one_is_uniform_on_classes() {
    let reps = 1_000_000;
    let t = th(1, 1);
    let pi = ewens(5, &t).unwrap();
    let counts = jackmix::experiments::ewens_counts(5, &t, reps, 5);
    let exact: Vec<(Partition, Rat)> = pi.partitions().iter().cloned().zip(pi.probs().iter().cloned()).collect();
    assert!(max_sigma_deviation(&counts, &exact, reps) <= 4.0);
    assert!(binomial_se(to_f64(&pi.probs()[0]), reps) > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn stationary_law_is_fixed(n in 2u32..=9, a in 1i64..=6, b in 1i64..=6, lazy in any::<bool>()) {
        let t = ThetaParam::new(rat(a, b)).unwrap();
        let d = if lazy || t.is_one() { rat(1, n as i64) } else { Rat::zero() };
        let k = build_kernel(n, &t, &d).unwrap();
        let pi = ewens(n, &t).unwrap();
        prop_assert_eq!(pi.probs().iter().cloned().sum::<Rat>(), Rat::one());
        prop_assert_eq!(k.apply_left(pi.probs()), pi.probs().to_vec());
        let ones = vec![Rat::one(); k.partitions().len()];
        prop_assert_eq!(k.apply_right(&ones), ones);
    }

    #[test]
    fn moves_preserve_weight(n in 2u32..=12, seed in any::<u64>(), a in 1i64..=4, b in 1i64..=4) {
        let t = ThetaParam::new(rat(a, b)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states = enumerate_partitions(n).unwrap();
        let start = &states[(seed % states.len() as u64) as usize];
        let next = sample_step(start, &t, &rat(1, 3), &mut rng).unwrap();
        prop_assert_eq!(next.size(), n);
        let diff = next.len() as i64 - start.len() as i64;
        prop_assert!(diff.abs() <= 1);
    }
}
