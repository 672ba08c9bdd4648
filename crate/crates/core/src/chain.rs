//! The Metropolis random-transposition chain lumped to partitions, its
//! spectrum, the Ewens stationary law, and Monte Carlo samplers.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::partitions::{Partition, PartitionSet};
use crate::rational::{binom, factorial, from_big, int, max, min, pow, to_f64, Rat};
use crate::symfunc::partition_set;

/// The chain parameter θ > 0. The stationary law is Ewens with α = 1/θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaParam(Rat);

impl ThetaParam {
    pub fn new(theta: Rat) -> Result<Self> {
        if !theta.is_positive() {
            return invalid("theta must be positive");
        }
        Ok(ThetaParam(theta))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn alpha(&self) -> Rat {
        self.0.recip()
    }

    /// Merge acceptance 1∧θ.
    pub fn merge_accept(&self) -> Rat {
        min(&Rat::one(), &self.0)
    }

    /// Split acceptance 1∧θ⁻¹.
    pub fn split_accept(&self) -> Rat {
        min(&Rat::one(), &self.0.recip())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

/// Aggregated one-step proposals out of a state: `count` transpositions lead
/// to `target`, all of the same kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub target: Partition,
    pub count: u64,
    pub merge: bool,
}

/// Proposals from λ; counts sum to binom(n,2) minus nothing (every
/// transposition either merges or splits).
pub fn moves(lambda: &Partition) -> Vec<Move> {
    let mut acc: BTreeMap<(Partition, bool), u64> = BTreeMap::new();
    let parts = lambda.parts();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            *acc.entry((lambda.merge(i, j), true)).or_default() += parts[i] as u64 * parts[j] as u64;
        }
        let a = parts[i];
        for r in 1..=a / 2 {
            let count = if 2 * r == a { a as u64 / 2 } else { a as u64 };
            *acc.entry((lambda.split(i, r), false)).or_default() += count;
        }
    }
    acc.into_iter()
        .map(|((target, merge), count)| Move { target, count, merge })
        .collect()
}

fn check_params(n: u32, theta: &ThetaParam, delta: &Rat) -> Result<()> {
    if n < 2 {
        return invalid("the chain needs n ≥ 2");
    }
    if delta.is_negative() || *delta >= Rat::one() {
        return invalid("laziness must lie in [0, 1)");
    }
    if theta.is_one() && delta.is_zero() {
        return Err(Error::Periodic("θ = 1 without laziness has period 2".into()));
    }
    Ok(())
}

/// Row-sparse exact kernel over the canonical partition order.
#[derive(Clone, Debug)]
pub struct SparseKernel {
    n: u32,
    theta: ThetaParam,
    delta: Rat,
    set: Arc<PartitionSet>,
    rows: Vec<Vec<(usize, Rat)>>,
}

impl SparseKernel {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn theta(&self) -> &ThetaParam {
        &self.theta
    }

    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    pub fn partitions(&self) -> &PartitionSet {
        &self.set
    }

    pub fn rows(&self) -> &[Vec<(usize, Rat)>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> Rat {
        self.rows[i]
            .iter()
            .find(|(k, _)| *k == j)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn get(&self, from: &Partition, to: &Partition) -> Rat {
        match (self.set.index_of(from), self.set.index_of(to)) {
            (Some(i), Some(j)) => self.entry(i, j),
            _ => Rat::zero(),
        }
    }

    pub fn dense(&self) -> Vec<Vec<Rat>> {
        let m = self.set.len();
        let mut out = vec![vec![Rat::zero(); m]; m];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                out[i][*j] = v.clone();
            }
        }
        out
    }

    /// Row vector times kernel.
    pub fn apply_left(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, p) in &self.rows[i] {
                out[*j] += x * p;
            }
        }
        out
    }

    /// Kernel times column vector.
    pub fn apply_right(&self, v: &[Rat]) -> Vec<Rat> {
        self.rows
            .iter()
            .map(|row| row.iter().fold(Rat::zero(), |acc, (j, p)| acc + p * &v[*j]))
            .collect()
    }

    pub fn to_float(&self) -> FloatKernel {
        FloatKernel {
            set: self.set.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|(j, v)| (*j, to_f64(v))).collect())
                .collect(),
        }
    }
}

/// Lumped kernel: merges λ_i, λ_j with probability λ_iλ_j/binom(n,2)·(1∧θ),
/// splits λ_k with probability λ_k/binom(n,2)·(1∧θ⁻¹) per unordered outcome
/// (halved for equal halves), holding gets the remainder, then P ← δI + (1−δ)P.
pub fn build_kernel(n: u32, theta: &ThetaParam, delta: &Rat) -> Result<SparseKernel> {
    check_params(n, theta, delta)?;
    assemble(n, theta, delta)
}

/// Like [`build_kernel`] but admits the periodic case θ = 1, δ = 0, for use
/// as a factor in products of kernels.
pub fn build_kernel_allow_periodic(n: u32, theta: &ThetaParam, delta: &Rat) -> Result<SparseKernel> {
    match check_params(n, theta, delta) {
        Ok(()) | Err(Error::Periodic(_)) => assemble(n, theta, delta),
        Err(e) => Err(e),
    }
}

fn assemble(n: u32, theta: &ThetaParam, delta: &Rat) -> Result<SparseKernel> {
    let set = partition_set(n)?;
    let pairs = from_big(binom(n as u64, 2));
    let (ma, sa) = (theta.merge_accept(), theta.split_accept());
    let keep = Rat::one() - delta;
    let mut rows = Vec::with_capacity(set.len());
    for (i, lam) in set.iter().enumerate() {
        let mut row: Vec<(usize, Rat)> = Vec::new();
        let mut off = Rat::zero();
        for mv in moves(lam) {
            let acc = if mv.merge { &ma } else { &sa };
            let p = int(mv.count as i64) * acc / &pairs;
            off += &p;
            row.push((set.index_of(&mv.target).unwrap(), &keep * p));
        }
        let hold = Rat::one() - off;
        if hold.is_negative() {
            return Err(Error::Invariant(format!("negative holding probability at {lam}")));
        }
        row.push((i, delta + &keep * hold));
        row.retain(|(_, v)| !v.is_zero());
        row.sort_by_key(|(j, _)| *j);
        rows.push(row);
    }
    Ok(SparseKernel { n, theta: theta.clone(), delta: delta.clone(), set, rows })
}

/// Holding probability before laziness in closed form:
/// 1 − 1∧θ + (Σ_k binom(λ_k,2)/binom(n,2))·(1∧θ − 1∧θ⁻¹).
pub fn holding_closed_form(lambda: &Partition, theta: &ThetaParam) -> Rat {
    let n = lambda.size() as u64;
    if n < 2 {
        return Rat::one();
    }
    let frac = int(lambda.pair_count() as i64) / from_big(binom(n, 2));
    Rat::one() - theta.merge_accept() + frac * (theta.merge_accept() - theta.split_accept())
}

/// β_λ = 1 − θ∧1 + (θ·n(λ') − n(λ))/((θ∨1)·binom(n,2)), then δ + (1−δ)β.
/// The single state at n ≤ 1 has β = 1.
pub fn eigenvalue(lambda: &Partition, theta: &ThetaParam, delta: &Rat) -> Rat {
    let t = theta.value();
    let n = lambda.size() as u64;
    if n < 2 {
        return Rat::one();
    }
    let num = t * int(lambda.pair_count() as i64) - int(lambda.n_stat() as i64);
    let beta = Rat::one() - theta.merge_accept() + num / (max(t, &Rat::one()) * from_big(binom(n, 2)));
    delta + (Rat::one() - delta) * beta
}

/// The Ewens law with α = 1/θ on partitions of n.
#[derive(Clone, Debug)]
pub struct EwensDist {
    n: u32,
    theta: ThetaParam,
    set: Arc<PartitionSet>,
    probs: Vec<Rat>,
    big_pi: Rat,
}

impl EwensDist {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn theta(&self) -> &ThetaParam {
        &self.theta
    }

    pub fn partitions(&self) -> &PartitionSet {
        &self.set
    }

    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    pub fn prob(&self, rho: &Partition) -> Rat {
        self.set.index_of(rho).map(|i| self.probs[i].clone()).unwrap_or_else(Rat::zero)
    }

    /// Π = Π_{i=1}^n (1 + θ(i−1)) = 1/π(1^n).
    pub fn big_pi(&self) -> &Rat {
        &self.big_pi
    }

    /// z_n(θ⁻¹) = Π·θ⁻ⁿ.
    pub fn z(&self) -> Rat {
        &self.big_pi * pow(self.theta.value(), -(self.n as i64))
    }
}

pub fn big_pi(n: u32, theta: &Rat) -> Rat {
    (1..=n as i64).fold(Rat::one(), |acc, i| acc * (Rat::one() + theta * int(i - 1)))
}

pub fn ewens(n: u32, theta: &ThetaParam) -> Result<EwensDist> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let set = partition_set(n)?;
    let t = theta.value();
    let bp = big_pi(n, t);
    let z = &bp * pow(t, -(n as i64));
    let nf = from_big(factorial(n as u64));
    let probs = set
        .iter()
        .map(|rho| pow(t, -(rho.len() as i64)) * &nf / from_big(rho.z_stat()) / &z)
        .collect();
    Ok(EwensDist { n, theta: theta.clone(), set, probs, big_pi: bp })
}

/// Float kernel for state spaces too large for exact powering.
#[derive(Clone, Debug)]
pub struct FloatKernel {
    set: Arc<PartitionSet>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl FloatKernel {
    pub fn partitions(&self) -> &PartitionSet {
        &self.set
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    pub fn apply_left(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for (i, x) in v.iter().enumerate() {
            if *x == 0.0 {
                continue;
            }
            for (j, p) in &self.rows[i] {
                out[*j] += x * p;
            }
        }
        out
    }
}

/// Builds the kernel directly in floating point.
pub fn build_float_kernel(n: u32, theta: &ThetaParam, delta: &Rat) -> Result<FloatKernel> {
    check_params(n, theta, delta)?;
    let set = partition_set(n)?;
    let pairs = (n as f64) * (n as f64 - 1.0) / 2.0;
    let (ma, sa) = (to_f64(&theta.merge_accept()), to_f64(&theta.split_accept()));
    let d = to_f64(delta);
    let rows = set
        .iter()
        .enumerate()
        .map(|(i, lam)| {
            let mut row: Vec<(usize, f64)> = Vec::new();
            let mut off = 0.0;
            for mv in moves(lam) {
                let p = mv.count as f64 * if mv.merge { ma } else { sa } / pairs;
                off += p;
                row.push((set.index_of(&mv.target).unwrap(), (1.0 - d) * p));
            }
            row.push((i, d + (1.0 - d) * (1.0 - off).max(0.0)));
            row.sort_by_key(|(j, _)| *j);
            row
        })
        .collect();
    Ok(FloatKernel { set, rows })
}

/// Seed of replica `i` derived from a master seed: splitmix64(seed + i).
pub fn replica_seed(master: u64, i: u64) -> u64 {
    let mut z = master.wrapping_add(i).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn replica_rng(master: u64, i: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(replica_seed(master, i))
}

/// Fast stepping on an unsorted multiset of cycle lengths.
#[derive(Clone, Debug)]
pub struct Stepper {
    n: u32,
    merge_accept: f64,
    split_accept: f64,
    delta: f64,
}

impl Stepper {
    pub fn new(n: u32, theta: &ThetaParam, delta: &Rat) -> Result<Self> {
        check_params(n, theta, delta)?;
        Ok(Stepper {
            n,
            merge_accept: to_f64(&theta.merge_accept()),
            split_accept: to_f64(&theta.split_accept()),
            delta: to_f64(delta),
        })
    }

    /// One transition: laziness first, then two distinct labels; same cycle
    /// proposes a split at the offset between them, different cycles a merge.
    pub fn step<R: Rng>(&self, state: &mut Vec<u32>, rng: &mut R) {
        if self.delta > 0.0 && rng.gen::<f64>() < self.delta {
            return;
        }
        let n = self.n;
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let (i, oa) = locate(state, a);
        let (j, ob) = locate(state, b);
        if i == j {
            if self.split_accept >= 1.0 || rng.gen::<f64>() < self.split_accept {
                let len = state[i];
                let d = (ob + len - oa) % len;
                state[i] = d;
                state.push(len - d);
            }
        } else if self.merge_accept >= 1.0 || rng.gen::<f64>() < self.merge_accept {
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            let merged = state[lo] + state[hi];
            state.swap_remove(hi);
            state[lo] = merged;
        }
    }
}

fn locate(state: &[u32], label: u32) -> (usize, u32) {
    let mut acc = 0;
    for (i, &p) in state.iter().enumerate() {
        if label < acc + p {
            return (i, label - acc);
        }
        acc += p;
    }
    unreachable!("label outside the state")
}

/// One exact-law transition from λ.
pub fn sample_step<R: Rng>(lambda: &Partition, theta: &ThetaParam, delta: &Rat, rng: &mut R) -> Result<Partition> {
    let stepper = Stepper::new(lambda.size(), theta, delta)?;
    let mut state = lambda.parts().to_vec();
    stepper.step(&mut state, rng);
    Ok(Partition::from_multiset(state))
}

/// Ewens sample by the Chinese restaurant process with α = 1/θ: customer i
/// opens a new table with probability α/(α+i−1).
pub fn sample_ewens<R: Rng>(n: u32, theta: &ThetaParam, rng: &mut R) -> Partition {
    let alpha = to_f64(&theta.alpha());
    let mut tables: Vec<u32> = Vec::new();
    let mut seat: Vec<usize> = Vec::with_capacity(n as usize);
    for i in 0..n as usize {
        let u = rng.gen::<f64>() * (alpha + i as f64);
        if u < alpha || i == 0 {
            seat.push(tables.len());
            tables.push(1);
        } else {
            let k = ((u - alpha) as usize).min(i - 1);
            let t = seat[k];
            tables[t] += 1;
            seat.push(t);
        }
    }
    Partition::from_multiset(tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn th(a: i64, b: i64) -> ThetaParam {
        ThetaParam::new(rat(a, b)).unwrap()
    }

    #[test]
    fn kernel_n3_theta2() {
        let k = build_kernel(3, &th(2, 1), &int(0)).unwrap();
        let want = [
            [rat(1, 2), rat(1, 2), int(0)],
            [rat(2, 3), rat(1, 6), rat(1, 6)],
            [int(0), int(1), int(0)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(k.entry(i, j), want[i][j], "entry {i},{j}");
            }
        }
    }

    #[test]
    fn kernel_n2_small_theta() {
        let t = th(1, 3);
        let k = build_kernel(2, &t, &int(0)).unwrap();
        assert_eq!(k.get(&p(&[2]), &p(&[1, 1])), int(1));
        assert_eq!(k.get(&p(&[1, 1]), &p(&[2])), rat(1, 3));
    }

    #[test]
    fn laziness_shifts_diagonal() {
        let t = th(3, 2);
        let plain = build_kernel(5, &t, &int(0)).unwrap();
        let lazy = build_kernel(5, &t, &rat(1, 5)).unwrap();
        for i in 0..plain.partitions().len() {
            let old = plain.entry(i, i);
            assert_eq!(lazy.entry(i, i), &old + rat(1, 5) * (int(1) - &old));
        }
    }

    #[test]
    fn rejects_periodic_and_bad_params() {
        assert!(matches!(build_kernel(4, &th(1, 1), &int(0)), Err(Error::Periodic(_))));
        assert!(build_kernel(4, &th(1, 1), &rat(1, 4)).is_ok());
        assert!(build_kernel(1, &th(2, 1), &int(0)).is_err());
        assert!(build_kernel(4, &th(2, 1), &int(1)).is_err());
        assert!(ThetaParam::new(int(0)).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let t = th(2, 1);
        assert_eq!(eigenvalue(&p(&[3]), &t, &int(0)), int(1));
        assert_eq!(eigenvalue(&p(&[2, 1]), &t, &int(0)), rat(1, 6));
        assert_eq!(eigenvalue(&p(&[1, 1, 1]), &t, &int(0)), rat(-1, 2));
        for (a, b) in [(1, 3), (5, 2)] {
            let t = th(a, b);
            let want = int(1) - t.merge_accept() - t.split_accept();
            assert_eq!(eigenvalue(&Partition::column(6), &t, &int(0)), want);
            assert_eq!(eigenvalue(&Partition::row(6), &t, &rat(1, 6)), int(1));
        }
    }

    #[test]
    fn ewens_examples() {
        let e = ewens(2, &th(2, 1)).unwrap();
        assert_eq!(e.prob(&p(&[1, 1])), rat(1, 3));
        assert_eq!(e.prob(&p(&[2])), rat(2, 3));
        let e = ewens(3, &th(2, 1)).unwrap();
        assert_eq!(e.probs(), &[rat(8, 15), rat(2, 5), rat(1, 15)]);
        assert_eq!(e.big_pi().recip(), e.prob(&Partition::column(3)));
        let e = ewens(5, &th(1, 1)).unwrap();
        for rho in e.partitions().iter() {
            assert_eq!(e.prob(rho), Rat::one() / from_big(rho.z_stat()));
        }
    }

    #[test]
    fn move_counts_cover_all_transpositions() {
        for lam in crate::partitions::enumerate_partitions(7).unwrap() {
            let total: u64 = moves(&lam).iter().map(|m| m.count).sum();
            assert_eq!(total, 21);
        }
    }

    #[test]
    fn sampler_edge_cases() {
        let mut rng = replica_rng(7, 0);
        assert_eq!(sample_ewens(1, &th(2, 1), &mut rng), p(&[1]));
        // From (n) every proposal is a split; from 1^n every proposal is a merge.
        let t = th(1, 2);
        for _ in 0..50 {
            let q = sample_step(&p(&[5]), &t, &int(0), &mut rng).unwrap();
            assert_eq!(q.len(), 2);
            let q = sample_step(&Partition::column(5), &th(3, 1), &int(0), &mut rng).unwrap();
            assert_eq!(q.len(), 4);
        }
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_ne!(replica_seed(1, 0), replica_seed(1, 1));
        assert_eq!(replica_seed(42, 3), replica_seed(42, 3));
    }
}
