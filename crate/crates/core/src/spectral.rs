//! Eigenfunctions of the lumped chain, exact and floating distances to
//! stationarity, and the L² upper bound as an executable sum.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::chain::{big_pi, eigenvalue, ewens, EwensDist, FloatKernel, SparseKernel, ThetaParam};
use crate::error::{invalid, Error, Result};
use crate::jack::{c_n_cycle, c_two_cycle, hook_pair_product, jack_table, JackTable};
use crate::partitions::{partitions_with_first_at_least, Partition};
use crate::rational::{factorial, from_big, int, is_square, max, pow, to_f64, Rat};

/// Largest state space handled with exact rationals.
pub const EXACT_STATE_LIMIT: usize = 5000;

/// Drift of a float distribution's total mass that counts as instability.
pub const FLOAT_DRIFT: f64 = 1e-12;

/// Eigendata of the chain at (n, θ, δ). Left eigenfunctions are kept through
/// g² = c²θⁿn!/(j·Π), which is rational even when g is not.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    n: u32,
    theta: ThetaParam,
    delta: Rat,
    table: JackTable,
    beta: Vec<Rat>,
    pi: EwensDist,
    scale: Rat,
}

impl EigenSystem {
    pub fn new(n: u32, theta: &ThetaParam, delta: &Rat) -> Result<Self> {
        let table = jack_table(n, theta.value())?;
        let pi = ewens(n, theta)?;
        let beta = table.partitions().iter().map(|l| eigenvalue(l, theta, delta)).collect();
        let scale = pow(theta.value(), n as i64) * from_big(factorial(n as u64)) / pi.big_pi();
        Ok(EigenSystem { n, theta: theta.clone(), delta: delta.clone(), table, beta, pi, scale })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn theta(&self) -> &ThetaParam {
        &self.theta
    }

    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    pub fn table(&self) -> &JackTable {
        &self.table
    }

    pub fn stationary(&self) -> &EwensDist {
        &self.pi
    }

    pub fn beta(&self, lambda: usize) -> &Rat {
        &self.beta[lambda]
    }

    pub fn betas(&self) -> &[Rat] {
        &self.beta
    }

    /// g_λ(ρ)² by index.
    pub fn g_sq(&self, lambda: usize, rho: usize) -> Rat {
        let c = self.table.c_at(lambda, rho);
        c * c * &self.scale / self.table.j_at(lambda)
    }

    /// g_λ(ρ) itself when the radicand is a perfect square.
    pub fn g(&self, lambda: usize, rho: usize) -> Option<Rat> {
        let c = self.table.c_at(lambda, rho);
        let radicand = self.table.j_at(lambda) / &self.scale;
        if !is_square(&radicand) {
            return None;
        }
        let root = Rat::new(radicand.numer().sqrt(), radicand.denom().sqrt());
        Some(c / root)
    }

    /// f_λ(ρ)² = g_λ(ρ)²/π(ρ)², the right eigenfunction normalized in L²(π).
    pub fn f_sq(&self, lambda: usize, rho: usize) -> Rat {
        let p = &self.pi.probs()[rho];
        self.g_sq(lambda, rho) / (p * p)
    }

    fn check_kernel(&self, kernel: &SparseKernel) -> Result<()> {
        if kernel.n() != self.n || kernel.theta() != &self.theta || kernel.delta() != &self.delta {
            return invalid("eigensystem and kernel parameters differ");
        }
        Ok(())
    }
}

/// Verifies c_λ·P = β_λ·c_λ for every λ.
pub fn left_eigen_check(system: &EigenSystem, kernel: &SparseKernel) -> Result<bool> {
    system.check_kernel(kernel)?;
    let set = system.table.partitions();
    let bad: Vec<String> = (0..set.len())
        .filter(|&i| {
            let row = system.table.c_row(i);
            let lhs = kernel.apply_left(row);
            let beta = &system.beta[i];
            lhs.iter().zip(row).any(|(a, c)| *a != beta * c)
        })
        .map(|i| set.get(i).to_string())
        .collect();
    if bad.is_empty() {
        Ok(true)
    } else {
        Err(Error::Invariant(format!("left eigenvector fails at {}", bad.join(" "))))
    }
}

/// Verifies Σ_λ g_λ(x)² = π(x) and Σ_λ f_λ(x)² = 1/π(x) at every x.
pub fn completeness_check(system: &EigenSystem) -> Result<bool> {
    if system.n > 9 {
        return invalid("completeness is checked exactly only for n ≤ 9");
    }
    let m = system.table.partitions().len();
    for x in 0..m {
        let p = &system.pi.probs()[x];
        let g: Rat = (0..m).map(|l| system.g_sq(l, x)).sum();
        let f: Rat = (0..m).map(|l| system.f_sq(l, x)).sum();
        if g != *p {
            return Err(Error::Invariant(format!(
                "Σg² at {} is off by {}",
                system.table.partitions().get(x),
                g - p
            )));
        }
        if f != p.recip() {
            return Err(Error::Invariant(format!(
                "Σf² at {} is off by {}",
                system.table.partitions().get(x),
                f - p.recip()
            )));
        }
    }
    Ok(true)
}

/// Distribution after k steps, as a value over the canonical order.
#[derive(Clone, Debug, PartialEq)]
pub enum ProbVector {
    Exact(Vec<Rat>),
    Float(Vec<f64>),
}

impl ProbVector {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            ProbVector::Exact(v) => v.iter().map(to_f64).collect(),
            ProbVector::Float(v) => v.clone(),
        }
    }
}

fn point_mass<T: Clone>(len: usize, at: usize, zero: T, one: T) -> Vec<T> {
    let mut v = vec![zero; len];
    v[at] = one;
    v
}

/// δ_start·P^k with exact arithmetic.
pub fn distribution_at(start: &Partition, k: u64, kernel: &SparseKernel) -> Result<Vec<Rat>> {
    Ok(distribution_profile_exact(start, &[k], kernel)?.pop().unwrap())
}

/// Exact distributions at each of the sorted times `ks`. Entries are kept as
/// integers over the common denominator Lᵗ, with L the lcm of the kernel's
/// denominators, so no gcd is taken while powering.
pub fn distribution_profile_exact(start: &Partition, ks: &[u64], kernel: &SparseKernel) -> Result<Vec<Vec<Rat>>> {
    if ks.windows(2).any(|w| w[0] > w[1]) {
        return invalid("times must be sorted");
    }
    let set = kernel.partitions();
    let at = set
        .index_of(start)
        .ok_or_else(|| Error::InvalidArgument(format!("{start} is not a state")))?;
    let l = kernel
        .rows()
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()));
    let scale = Rat::from_integer(l.clone());
    let mut incoming: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); set.len()];
    for (i, row) in kernel.rows().iter().enumerate() {
        for (j, p) in row {
            incoming[*j].push((i, (p * &scale).to_integer()));
        }
    }
    let mut v = point_mass(set.len(), at, BigInt::zero(), BigInt::one());
    let mut den = BigInt::one();
    let mut now = 0;
    let mut out = Vec::with_capacity(ks.len());
    for &k in ks {
        for _ in now..k {
            v = incoming
                .par_iter()
                .map(|inc| inc.iter().fold(BigInt::zero(), |acc, (i, c)| acc + &v[*i] * c))
                .collect();
            den *= &l;
        }
        now = k;
        out.push(v.iter().map(|x| Rat::new(x.clone(), den.clone())).collect());
    }
    Ok(out)
}

/// δ_start·P^k in floating point.
pub fn distribution_at_float(start: &Partition, k: u64, kernel: &FloatKernel) -> Result<Vec<f64>> {
    Ok(distribution_profile_float(start, &[k], kernel)?.pop().unwrap())
}

/// Distributions at each of the sorted times `ks`, from one powering pass.
pub fn distribution_profile_float(start: &Partition, ks: &[u64], kernel: &FloatKernel) -> Result<Vec<Vec<f64>>> {
    if ks.windows(2).any(|w| w[0] > w[1]) {
        return invalid("times must be sorted");
    }
    let set = kernel.partitions();
    let at = set
        .index_of(start)
        .ok_or_else(|| Error::InvalidArgument(format!("{start} is not a state")))?;
    let mut v = point_mass(set.len(), at, 0.0, 1.0);
    let mut out = Vec::with_capacity(ks.len());
    let mut step = 0;
    for &k in ks {
        while step < k {
            v = kernel.apply_left(&v);
            step += 1;
            let drift = (pairwise_sum(&v) - 1.0).abs();
            if drift > FLOAT_DRIFT {
                return Err(Error::NumericInstability(format!("mass drifted by {drift:e} at step {step}")));
            }
        }
        out.push(v.clone());
    }
    Ok(out)
}

/// Pairwise summation with a fixed block split, so results do not depend on
/// scheduling.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn tv_distance(v: &[Rat], pi: &EwensDist) -> Rat {
    v.iter().zip(pi.probs()).map(|(a, b)| (a - b).abs()).sum::<Rat>() / int(2)
}

pub fn tv_distance_float(v: &[f64], pi: &[f64]) -> f64 {
    let diffs: Vec<f64> = v.iter().zip(pi).map(|(a, b)| (a - b).abs()).collect();
    pairwise_sum(&diffs) / 2.0
}

/// Σ_ρ π(ρ)(v(ρ)/π(ρ) − 1)², computed directly from a distribution.
pub fn chi2_direct(v: &[Rat], pi: &EwensDist) -> Rat {
    v.iter()
        .zip(pi.probs())
        .map(|(a, p)| {
            let d = a / p - Rat::one();
            p * &d * &d
        })
        .sum()
}

/// ‖P_x^k/π − 1‖² from the spectral sum (1/π(x)²)Σ_{λ≠(n)} β_λ^{2k} g_λ(x)².
pub fn l2_distance(start: &Partition, k: u64, system: &EigenSystem) -> Result<Rat> {
    Ok(l2_bound_by_lambda1(start, k, system)?.values().sum())
}

/// Which group a term of the spectral sum is booked under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Group {
    /// β_λ ≥ 0, keyed by λ₁.
    Row(u32),
    /// β_λ < 0, keyed by λ'₁.
    Column(u32),
}

/// The spectral sum split by λ₁ (nonnegative eigenvalues) and λ'₁ (negative).
pub fn l2_bound_by_lambda1(start: &Partition, k: u64, system: &EigenSystem) -> Result<BTreeMap<Group, Rat>> {
    let set = system.table.partitions();
    let x = set
        .index_of(start)
        .ok_or_else(|| Error::InvalidArgument(format!("{start} is not a state")))?;
    let p = &system.pi.probs()[x];
    let p2 = p * p;
    let mut out: BTreeMap<Group, Rat> = BTreeMap::new();
    for (l, lam) in set.iter().enumerate() {
        if lam.len() == 1 {
            continue;
        }
        let b = &system.beta[l];
        let key = if b.is_negative() { Group::Column(lam.conjugate().part(0)) } else { Group::Row(lam.part(0)) };
        let term = pow(b, 2 * k as i64) * system.g_sq(l, x) / &p2;
        *out.entry(key).or_insert_with(Rat::zero) += term;
    }
    Ok(out)
}

/// Asserts 4·TV² ≤ L² for the given start and time.
pub fn sandwich_check(start: &Partition, k: u64, kernel: &SparseKernel, system: &EigenSystem) -> Result<bool> {
    system.check_kernel(kernel)?;
    let v = distribution_at(start, k, kernel)?;
    let tv = tv_distance(&v, &system.pi);
    let l2 = l2_distance(start, k, system)?;
    if int(4) * &tv * &tv > l2 {
        return Err(Error::Invariant(format!("4·TV² exceeds L² at start {start}, k = {k}")));
    }
    Ok(true)
}

/// θⁿn!Π·Σ_{λ≠(n)} β_λ^{2k}/j_λ, the L² distance from the identity.
pub fn l2_identity_closed(n: u32, theta: &ThetaParam, delta: &Rat, k: u64) -> Result<Rat> {
    let t = theta.value();
    let pre = pow(t, n as i64) * from_big(factorial(n as u64)) * big_pi(n, t);
    let set = crate::symfunc::partition_set(n)?;
    let s: Rat = set
        .iter()
        .filter(|l| l.len() > 1)
        .map(|l| pow(&eigenvalue(l, theta, delta), 2 * k as i64) / hook_pair_product(l, t))
        .sum();
    Ok(pre * s)
}

/// The L² distance from a transposition, with c_{λ,(2,1^{n−2})} = θn(λ') − n(λ)
/// substituted and π((2,1^{n−2})) = θ^{1−n}binom(n,2)/(θ⁻¹)_n.
pub fn l2_transposition_closed(n: u32, theta: &ThetaParam, delta: &Rat, k: u64) -> Result<Rat> {
    let t = theta.value();
    let nn = n as i64;
    let poch = big_pi(n, t) * pow(t, -nn);
    let p = pow(t, 1 - nn) * int(nn * (nn - 1) / 2) / poch;
    let scale = pow(t, nn) * from_big(factorial(n as u64)) / big_pi(n, t);
    let set = crate::symfunc::partition_set(n)?;
    let mut s = Rat::zero();
    for l in set.iter().filter(|l| l.len() > 1) {
        let c = c_two_cycle(l, t)?;
        s += &c * &c * &scale / hook_pair_product(l, t) * pow(&eigenvalue(l, theta, delta), 2 * k as i64);
    }
    Ok(s / (&p * &p))
}

/// n!θⁿ/(π((n))²Π)·Σ_{λ≠(n)} c_{λ,(n)}²/j_λ·β_λ^{2k}, the L² distance from an n-cycle.
pub fn l2_ncycle_closed(n: u32, theta: &ThetaParam, delta: &Rat, k: u64) -> Result<Rat> {
    let t = theta.value();
    let pi = ewens(n, theta)?;
    let pn = pi.prob(&Partition::row(n));
    let pre = from_big(factorial(n as u64)) * pow(t, n as i64) / (&pn * &pn * pi.big_pi());
    let s: Rat = pi
        .partitions()
        .iter()
        .filter(|l| l.len() > 1)
        .map(|l| {
            let c = c_n_cycle(l, t);
            &c * &c / hook_pair_product(l, t) * pow(&eigenvalue(l, theta, delta), 2 * k as i64)
        })
        .sum();
    Ok(pre * s)
}

/// At θ = 1 from an n-cycle only hooks contribute, each with weight one:
/// L² = Σ_{s=1}^{n−1} β_{(s,1^{n−s})}^{2t}.
pub fn ncycle_hook_l2(n: u32, delta: f64, t: u64) -> f64 {
    let pairs = n as f64 * (n as f64 - 1.0) / 2.0;
    let mut terms: Vec<f64> = (1..n)
        .map(|s| {
            let s = s as f64;
            let content = (s * (s - 1.0) - (n as f64 - s + 1.0) * (n as f64 - s)) / 2.0;
            let b = delta + (1.0 - delta) * content / pairs;
            pow_f64(b, 2 * t)
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Smallest t with the hook-shape L² bound at most 4ε².
pub fn ncycle_tau(n: u32, delta: f64, eps: f64) -> u64 {
    let target = 4.0 * eps * eps;
    let mut t = 0;
    while ncycle_hook_l2(n, delta, t) > target {
        t += 1;
    }
    t
}

/// β^e with an integer-power fallback for nonpositive β.
pub fn pow_f64(b: f64, e: u64) -> f64 {
    if e == 0 {
        return 1.0;
    }
    if b > 0.0 {
        (e as f64 * b.ln()).exp()
    } else if b == 0.0 {
        0.0
    } else if e % 2 == 0 {
        (e as f64 * (-b).ln()).exp()
    } else {
        -(e as f64 * (-b).ln()).exp()
    }
}

fn ln_fact(n: u32) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// ln j_λ in floating point.
pub fn ln_hook_pair_product(lambda: &Partition, theta: f64) -> f64 {
    lambda
        .hooks()
        .into_iter()
        .map(|(_, a, l)| {
            let (a, l) = (a as f64, l as f64);
            (a * theta + l + 1.0).ln() + ((a + 1.0) * theta + l).ln()
        })
        .sum()
}

fn beta_f64(n: u32, pair_count: u64, n_stat: u64, theta: f64, delta: f64) -> f64 {
    let pairs = n as f64 * (n as f64 - 1.0) / 2.0;
    let b = 1.0 - theta.min(1.0) + (theta * pair_count as f64 - n_stat as f64) / (theta.max(1.0) * pairs);
    delta + (1.0 - delta) * b
}

/// The eigenvalue of the dominance-largest shape with first part s, (s^q, r),
/// before laziness; it bounds β_λ for every λ with λ₁ = s.
pub fn beta_row_max(n: u32, s: u32, theta: f64) -> f64 {
    let q = n / s;
    let r = n % s;
    let mut parts = vec![s; q as usize];
    if r > 0 {
        parts.push(r);
    }
    let lam = Partition::new(parts).expect("valid shape");
    beta_f64(n, lam.pair_count(), lam.n_stat(), theta, 0.0)
}

/// Certified upper bound on Σ_{λ₁=s} θⁿn!Π/j_λ, in logs, from
/// j_λ ≥ s!θ^sΠ_{a<s}(aθ+1)·j_μ with μ the shape below the first row.
pub fn ln_row_group_weight(n: u32, s: u32, theta: f64, ln_pi: f64) -> f64 {
    let ln_r = ln_fact(s) + s as f64 * theta.ln() + (1..s).map(|a| (a as f64 * theta + 1.0).ln()).sum::<f64>();
    let b = s as f64 * theta.ln() + ln_fact(n) + ln_pi - ln_r - ln_fact(n - s);
    b.min(ln_pi)
}

/// Certified upper bound on Σ_{λ'₁=s} θⁿn!Π/j_λ, in logs, from the first
/// column of hooks.
pub fn ln_column_group_weight(n: u32, s: u32, theta: f64, ln_pi: f64) -> f64 {
    let ln_c = ln_fact(s) + (0..s).map(|r| (r as f64 + theta).ln()).sum::<f64>();
    let b = s as f64 * theta.ln() + ln_fact(n) + ln_pi - ln_c - ln_fact(n - s);
    b.min(ln_pi)
}

/// Exact row-group weight bound θ^s n!Π/(s!θ^sΠ_{a<s}(aθ+1)(n−s)!).
pub fn row_group_weight_exact(n: u32, s: u32, theta: &Rat) -> Rat {
    let r = from_big(factorial(s as u64))
        * pow(theta, s as i64)
        * (1..s as i64).fold(Rat::one(), |acc, a| acc * (theta * int(a) + Rat::one()));
    pow(theta, s as i64) * from_big(factorial(n as u64)) * big_pi(n, theta) / (r * from_big(factorial((n - s) as u64)))
}

/// Exact column-group weight bound θ^s n!Π/(s!Π_{r<s}(r+θ)(n−s)!).
pub fn column_group_weight_exact(n: u32, s: u32, theta: &Rat) -> Rat {
    let c = from_big(factorial(s as u64)) * (0..s as i64).fold(Rat::one(), |acc, r| acc * (int(r) + theta));
    pow(theta, s as i64) * from_big(factorial(n as u64)) * big_pi(n, theta) / (c * from_big(factorial((n - s) as u64)))
}

/// L² distance from the identity in floating point. Shapes within `depth`
/// of a row or a column are summed exactly; the rest is bounded group by
/// group, so `bound` is an upper bound and is exact when nothing is left out.
#[derive(Clone, Debug)]
pub struct IdentityL2 {
    n: u32,
    delta: f64,
    terms: Vec<(f64, f64)>,
    tail: Vec<(f64, f64)>,
}

impl IdentityL2 {
    pub fn new(n: u32, theta: &ThetaParam, delta: &Rat, depth: Option<u32>) -> Result<Self> {
        if n < 2 {
            return invalid("needs n ≥ 2");
        }
        let th = to_f64(theta.value());
        let d = to_f64(delta);
        let depth = depth.unwrap_or(n).min(n);
        let ln_pi: f64 = (1..=n).map(|i| (1.0 + th * (i as f64 - 1.0)).ln()).sum();
        let pre = n as f64 * th.ln() + ln_fact(n) + ln_pi;
        let rows = partitions_with_first_at_least(n, n - depth);
        let mut seen: HashSet<Partition> = rows.iter().cloned().collect();
        let mut shapes = rows;
        for p in shapes.clone() {
            let c = p.conjugate();
            if seen.insert(c.clone()) {
                shapes.push(c);
            }
        }
        let terms: Vec<(f64, f64)> = shapes
            .par_iter()
            .filter(|l| l.len() > 1)
            .map(|l| (pre - ln_hook_pair_product(l, th), beta_f64(n, l.pair_count(), l.n_stat(), th, d)))
            .collect();
        let mut tail = Vec::new();
        if depth + 1 < n {
            for s in 1..n - depth {
                let b = d + (1.0 - d) * beta_row_max(n, s, th).max(0.0);
                tail.push((ln_row_group_weight(n, s, th, ln_pi), b));
                tail.push((ln_column_group_weight(n, s, th, ln_pi), b));
            }
        }
        Ok(IdentityL2 { n, delta: d, terms, tail })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn is_complete(&self) -> bool {
        self.tail.is_empty()
    }

    fn sum(list: &[(f64, f64)], k: u64) -> f64 {
        let mut v: Vec<f64> = list
            .iter()
            .map(|&(lw, b)| {
                if k == 0 {
                    lw.exp()
                } else if b == 0.0 {
                    0.0
                } else {
                    (lw + 2.0 * k as f64 * b.abs().ln()).exp()
                }
            })
            .collect();
        v.sort_by(f64::total_cmp);
        pairwise_sum(&v)
    }

    /// The summed part over enumerated shapes.
    pub fn enumerated(&self, k: u64) -> f64 {
        Self::sum(&self.terms, k)
    }

    /// The certified bound on the shapes left out.
    pub fn tail(&self, k: u64) -> f64 {
        Self::sum(&self.tail, k)
    }

    pub fn bound(&self, k: u64) -> f64 {
        self.enumerated(k) + self.tail(k)
    }

    /// min(1, ½√L²), an upper bound on total variation.
    pub fn tv_bound(&self, k: u64) -> f64 {
        (0.5 * self.bound(k).sqrt()).min(1.0)
    }
}

/// t(c) = ½(θ⁻¹∨1)·n·(log n + c), rounded and clamped at zero.
pub fn cutoff_time(n: u32, theta: &ThetaParam, c: f64) -> u64 {
    let a = to_f64(&max(&theta.alpha(), &Rat::one()));
    let t = 0.5 * a * n as f64 * ((n as f64).ln() + c);
    t.round().max(0.0) as u64
}
