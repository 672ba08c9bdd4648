//! Statistical experiments: the second-moment lower bound through d_{(n−1,1)},
//! cutoff profiles, the short-cycle statistic from an n-cycle, and Monte
//! Carlo consistency checks.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{build_float_kernel, build_kernel, eigenvalue, ewens, replica_rng, sample_ewens, Stepper, ThetaParam};
use crate::error::{invalid, Error, Result};
use crate::jack::{d_low_shapes, eval_low};
use crate::linalg;
use crate::partitions::Partition;
use crate::rational::{int, max, pow, to_f64, Rat};
use crate::partitions::partition_counts;
use crate::spectral::{
    cutoff_time, distribution_profile_exact, distribution_profile_float, l2_distance, ncycle_hook_l2, tv_distance, tv_distance_float, EigenSystem,
    IdentityL2, EXACT_STATE_LIMIT,
};

/// Coefficients of d²_{(n−1,1)} = u + v·d_{(n−1,1)} + w·d_{(n−2,1²)} + x·d_{(n−2,2)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentCoeffs {
    pub u: Rat,
    pub v: Rat,
    pub w: Rat,
    pub x: Rat,
}

/// Solves for (u, v, w, x) by matching coefficients on {1, m₁, m₁², m₂}.
pub fn second_moment_coeffs(n: u32, theta: &Rat) -> Result<MomentCoeffs> {
    if n < 5 {
        return invalid("needs n ≥ 5");
    }
    let [d1, d2, d3] = d_low_shapes(n, theta)?;
    let sq = [
        &d1[0] * &d1[0],
        int(2) * &d1[0] * &d1[1],
        &d1[1] * &d1[1],
        Rat::zero(),
    ];
    let unit = [Rat::one(), Rat::zero(), Rat::zero(), Rat::zero()];
    let a: Vec<Vec<Rat>> = (0..4)
        .map(|r| vec![unit[r].clone(), d1[r].clone(), d2[r].clone(), d3[r].clone()])
        .collect();
    let s = linalg::solve(&a, &sq)?;
    Ok(MomentCoeffs { u: s[0].clone(), v: s[1].clone(), w: s[2].clone(), x: s[3].clone() })
}

/// The rational closed forms for (u, v, w, x) as printed.
pub fn second_moment_closed_forms(n: u32, theta: &Rat) -> MomentCoeffs {
    let t = theta;
    let nn = int(n as i64);
    let one = Rat::one();
    let p2 = |a: &Rat| a * a;
    let p3 = |a: &Rat| a * a * a;
    let u = ((&nn * &nn - int(4) * &nn + int(3)) * p3(t)
        + (&nn - &one) * p2(t)
        + p2(&(&nn - &one)) * t
        + &nn
        - int(3))
        / (p2(t) * (t + &one) * (t * (&nn - int(3)) + &one) * &nn);
    let v = ((p3(&nn) - int(6) * p2(&nn) + int(11) * &nn - int(6)) * p3(t)
        + int(2) * (int(2) * p2(&nn) - int(7) * &nn + int(4)) * p2(t)
        + (int(3) * &nn + int(2)) * t
        - int(4))
        / (t * &nn * ((p2(&nn) - int(5) * &nn + int(6)) * p2(t) + (int(3) * &nn - int(8)) * t + int(2)));
    let a = &one + t * (&nn - &one);
    let w = int(2) * p2(&a) / ((&one + t) * (int(2) + t * (&nn - int(2))) * &nn);
    let x = int(2) * p2(&a) * (&nn - &one) * (&nn - int(2))
        / ((&one + t)
            * p2(&nn)
            * (&one + t * (int(2) * &nn - int(5)) + p2(t) * (&nn - int(2)) * (&nn - int(3))));
    MomentCoeffs { u, v, w, x }
}

/// β for (n), (n−1,1), (n−2,1²), (n−2,2) as listed in closed form, at δ = 0.
pub fn listed_eigenvalues(n: u32, theta: &ThetaParam) -> [Rat; 4] {
    let t = theta.value();
    let b = int((n as i64) * (n as i64 - 1) / 2);
    let base = Rat::one() - theta.merge_accept();
    let den = max(t, &Rat::one()) * &b;
    let c2 = |m: i64| int(m * (m - 1) / 2);
    let n = n as i64;
    [
        Rat::one(),
        &base + (t * c2(n - 1) - int(1)) / &den,
        &base + (t * c2(n - 2) - int(3)) / &den,
        &base + (t * c2(n - 2) - int(2)) / &den,
    ]
}

/// The three low shapes whose eigenfunctions carry the second moment.
pub fn low_shapes(n: u32) -> [Partition; 3] {
    [
        Partition::new(vec![n - 1, 1]).unwrap(),
        Partition::new(vec![n - 2, 1, 1]).unwrap(),
        Partition::new(vec![n - 2, 2]).unwrap(),
    ]
}

/// Mean and variance of d_{(n−1,1)} after k steps from `start`, from the
/// eigenfunction decay of the three low shapes.
pub fn d_moments(start: &Partition, k: u64, theta: &ThetaParam, delta: &Rat) -> Result<(Rat, Rat)> {
    let n = start.size();
    let coeffs = second_moment_coeffs(n, theta.value())?;
    let d = d_low_shapes(n, theta.value())?;
    let shapes = low_shapes(n);
    let decay: Vec<Rat> = (0..3)
        .map(|i| pow(&eigenvalue(&shapes[i], theta, delta), k as i64) * eval_low(&d[i], start))
        .collect();
    let mean = decay[0].clone();
    let second = &coeffs.u + &coeffs.v * &decay[0] + &coeffs.w * &decay[1] + &coeffs.x * &decay[2];
    let var = second - &mean * &mean;
    Ok((mean, var))
}

/// Chebyshev lower bound on TV from d_{(n−1,1)} with threshold η:
/// 1 − u/η² − Var_k/(E_k − η)², maximized over η ∈ (0, E_k).
pub fn chebyshev_tv_lower(n: u32, theta: &ThetaParam, delta: &Rat, k: u64) -> Result<f64> {
    let (mean, var) = d_moments(&Partition::column(n), k, theta, delta)?;
    let u = to_f64(&second_moment_coeffs(n, theta.value())?.u);
    let (m, v) = (to_f64(&mean), to_f64(&var));
    if m <= 0.0 {
        return Ok(0.0);
    }
    let f = |eta: f64| 1.0 - u / (eta * eta) - v / ((m - eta) * (m - eta));
    // The objective is concave in η on (0, m); golden-section search.
    let (mut a, mut b) = (0.0, m);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            a = c;
        } else {
            b = d;
        }
    }
    Ok(f(0.5 * (a + b)).clamp(0.0, 1.0))
}

/// One row of a cutoff profile from the identity.
#[derive(Clone, Debug, Serialize)]
pub struct CutoffRow {
    pub c: f64,
    pub t: u64,
    pub tv_upper: f64,
    pub tv_lower: f64,
}

/// TV bounds along t(c) for start (1ⁿ): the spectral L² bound from above and
/// the d-statistic Chebyshev bound from below.
pub fn cutoff_bounds(n: u32, theta: &ThetaParam, delta: &Rat, cs: &[f64], depth: Option<u32>) -> Result<Vec<CutoffRow>> {
    let l2 = IdentityL2::new(n, theta, delta, depth)?;
    cs.iter()
        .map(|&c| {
            let t = cutoff_time(n, theta, c);
            Ok(CutoffRow { c, t, tv_upper: l2.tv_bound(t), tv_lower: chebyshev_tv_lower(n, theta, delta, t)? })
        })
        .collect()
}

/// How a TV column is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
    Auto,
}

/// Largest state space powered in floating point.
pub const FLOAT_STATE_LIMIT: usize = 200_000;

/// What the `tv` column of a profile actually holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TvSource {
    Exact,
    Float,
    /// min(1, ½√L²) from the certified spectral bound.
    Bound,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub c: f64,
    pub t: u64,
    pub tv: f64,
    pub l2_bound: Option<f64>,
}

/// TV and L² along t(c) from any start. Auto mode powers exactly up to
/// `EXACT_STATE_LIMIT` states, in floats up to `FLOAT_STATE_LIMIT`, and past
/// that reports the spectral bound in place of TV.
pub fn tv_profile(
    n: u32,
    theta: &ThetaParam,
    delta: &Rat,
    start: &Partition,
    cs: &[f64],
    mode: Mode,
) -> Result<(TvSource, Vec<ProfileRow>)> {
    if start.size() != n {
        return invalid("start is not a partition of n");
    }
    let states = partition_counts(n as usize)[n as usize];
    let source = match mode {
        Mode::Exact => TvSource::Exact,
        Mode::Float if states > FLOAT_STATE_LIMIT as f64 => {
            return invalid(format!("{states} states is too many to power in floating point"))
        }
        Mode::Float => TvSource::Float,
        Mode::Auto if states <= EXACT_STATE_LIMIT as f64 => TvSource::Exact,
        Mode::Auto if states <= FLOAT_STATE_LIMIT as f64 => TvSource::Float,
        Mode::Auto => TvSource::Bound,
    };
    let ts: Vec<u64> = cs.iter().map(|&c| cutoff_time(n, theta, c)).collect();
    let l2 = l2_column(n, theta, delta, start, &ts, states)?;
    let tv: Vec<f64> = match source {
        TvSource::Exact => exact_tv(n, theta, delta, start, &ts)?,
        TvSource::Float => {
            let kernel = build_float_kernel(n, theta, delta)?;
            let pi: Vec<f64> = ewens(n, theta)?.probs().iter().map(to_f64).collect();
            let mut sorted = ts.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let profile = distribution_profile_float(start, &sorted, &kernel)?;
            ts.iter()
                .map(|t| tv_distance_float(&profile[sorted.binary_search(t).unwrap()], &pi))
                .collect()
        }
        TvSource::Bound => l2
            .iter()
            .map(|b| b.map(|b| (0.5 * b.sqrt()).min(1.0)))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::InvalidArgument(format!("no certified bound from {start} at n = {n}")))?,
    };
    let rows = cs
        .iter()
        .zip(&ts)
        .zip(tv.iter().zip(&l2))
        .map(|((&c, &t), (&tv, &l2_bound))| ProfileRow { c, t, tv, l2_bound })
        .collect();
    Ok((source, rows))
}

fn exact_tv(n: u32, theta: &ThetaParam, delta: &Rat, start: &Partition, ts: &[u64]) -> Result<Vec<f64>> {
    let kernel = build_kernel(n, theta, delta)?;
    let pi = ewens(n, theta)?;
    let mut sorted: Vec<u64> = ts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let profile = distribution_profile_exact(start, &sorted, &kernel)?;
    Ok(ts
        .iter()
        .map(|t| to_f64(&tv_distance(&profile[sorted.binary_search(t).unwrap()], &pi)))
        .collect())
}

fn l2_column(n: u32, theta: &ThetaParam, delta: &Rat, start: &Partition, ts: &[u64], states: f64) -> Result<Vec<Option<f64>>> {
    if *start == Partition::column(n) {
        let depth = if states <= FLOAT_STATE_LIMIT as f64 { None } else { Some(40) };
        let l2 = IdentityL2::new(n, theta, delta, depth)?;
        return Ok(ts.iter().map(|&t| Some(l2.bound(t))).collect());
    }
    if *start == Partition::row(n) && theta.is_one() {
        let d = to_f64(delta);
        return Ok(ts.iter().map(|&t| Some(ncycle_hook_l2(n, d, t))).collect());
    }
    if n <= 10 {
        let sys = EigenSystem::new(n, theta, delta)?;
        return ts.iter().map(|&t| Ok(Some(to_f64(&l2_distance(start, t, &sys)?)))).collect();
    }
    Ok(vec![None; ts.len()])
}

/// Standard error of a binomial proportion.
pub fn binomial_se(p: f64, reps: u64) -> f64 {
    (p * (1.0 - p) / reps as f64).sqrt()
}

fn run_chains(start: &Partition, steps: u64, stepper: &Stepper, reps: u64, seed: u64) -> Vec<Vec<u32>> {
    (0..reps)
        .into_par_iter()
        .map(|i| {
            let mut rng = replica_rng(seed, i);
            let mut state = start.parts().to_vec();
            for _ in 0..steps {
                stepper.step(&mut state, &mut rng);
            }
            state
        })
        .collect()
}

fn run_ewens(n: u32, theta: &ThetaParam, reps: u64, seed: u64) -> Vec<Partition> {
    (0..reps)
        .into_par_iter()
        .map(|i| sample_ewens(n, theta, &mut replica_rng(seed, i)))
        .collect()
}

/// Stationary draws use a seed stream separate from the chain replicas.
fn stationary_seed(seed: u64) -> u64 {
    seed ^ 0x5EED_0F_E7E1_5A11
}

fn short_cycles(parts: &[u32], upto: u32) -> u32 {
    parts.iter().filter(|&&p| p <= upto).count() as u32
}

/// d_{(n−1,1)} depends on ρ only through its number of fixed points:
/// d = −θ⁻¹ + (1 + (n−1)θ)/(θn)·m₁.
pub fn d1_from_fixed(n: u32, theta: &ThetaParam, m1: u32) -> f64 {
    let th = to_f64(theta.value());
    let slope = (1.0 + (n as f64 - 1.0) * th) / (th * n as f64);
    -1.0 / th + slope * m1 as f64
}

/// Per-step averages over independent replicas.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleRow {
    pub step: u64,
    pub mean_fixed: f64,
    pub mean_cycles: f64,
    pub mean_d1: f64,
    pub sd_d1: f64,
}

/// Runs `reps` chains from `start` for `steps` steps and summarizes m₁, ℓ and
/// d_{(n−1,1)} after every step. Sums are accumulated in integers, so the
/// output does not depend on the thread schedule.
pub fn sample_summary(
    start: &Partition,
    steps: u64,
    theta: &ThetaParam,
    delta: &Rat,
    reps: u64,
    seed: u64,
) -> Result<Vec<SampleRow>> {
    if reps == 0 {
        return invalid("reps must be positive");
    }
    let n = start.size();
    let stepper = Stepper::new(n, theta, delta)?;
    let len = steps as usize + 1;
    // Per step: Σm₁, Σm₁², Σℓ.
    let sums = (0..reps)
        .into_par_iter()
        .fold(
            || vec![[0u64; 3]; len],
            |mut acc, i| {
                let mut rng = replica_rng(seed, i);
                let mut state = start.parts().to_vec();
                for (t, slot) in acc.iter_mut().enumerate() {
                    if t > 0 {
                        stepper.step(&mut state, &mut rng);
                    }
                    let m1 = short_cycles(&state, 1) as u64;
                    slot[0] += m1;
                    slot[1] += m1 * m1;
                    slot[2] += state.len() as u64;
                }
                acc
            },
        )
        .reduce(
            || vec![[0u64; 3]; len],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| (0..3).for_each(|j| x[j] += y[j]));
                a
            },
        );
    let r = reps as f64;
    let slope = d1_from_fixed(n, theta, 1) - d1_from_fixed(n, theta, 0);
    Ok(sums
        .iter()
        .enumerate()
        .map(|(t, s)| {
            let mean = s[0] as f64 / r;
            let var_m1 = (s[1] as f64 / r - mean * mean).max(0.0);
            SampleRow {
                step: t as u64,
                mean_fixed: mean,
                mean_cycles: s[2] as f64 / r,
                mean_d1: d1_from_fixed(n, theta, 0) + slope * mean,
                sd_d1: slope.abs() * var_m1.sqrt(),
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundReport {
    pub n: u32,
    pub theta: String,
    pub c: f64,
    pub k: u64,
    pub eta: f64,
    pub reps: u64,
    pub seed: u64,
    pub p_chain: f64,
    pub se_chain: f64,
    pub p_stationary: f64,
    pub se_stationary: f64,
    pub witness: f64,
    pub se_witness: f64,
    pub exact_mean: f64,
    pub exact_variance: f64,
    pub stationary_second_moment: f64,
    pub chebyshev_chain_bound: f64,
    pub chebyshev_stationary_bound: f64,
    pub chebyshev_tv_lower: f64,
}

/// Estimates P_k[d_{(n−1,1)} < ½e^c] from the identity at k = ½(θ⁻¹∨1)n(log n − c)
/// and the same probability under Ewens, with the exact-moment predictions.
pub fn lower_bound_witness(n: u32, theta: &ThetaParam, c: f64, reps: u64, seed: u64) -> Result<LowerBoundReport> {
    if reps == 0 {
        return invalid("reps must be positive");
    }
    let k = cutoff_time(n, theta, -c);
    if k < 1 {
        return invalid("n is too small for this c: k(c) < 1");
    }
    let delta = Rat::zero();
    let stepper = Stepper::new(n, theta, &delta)?;
    let d1 = |m1: u32| d1_from_fixed(n, theta, m1);
    let eta = 0.5 * c.exp();
    let start = Partition::column(n);
    let below_chain = run_chains(&start, k, &stepper, reps, seed)
        .iter()
        .filter(|s| d1(short_cycles(s, 1)) < eta)
        .count();
    let below_stat = run_ewens(n, theta, reps, stationary_seed(seed))
        .iter()
        .filter(|p| d1(p.multiplicity(1)) < eta)
        .count();
    let p_chain = below_chain as f64 / reps as f64;
    let p_stat = below_stat as f64 / reps as f64;
    let (mean, var) = d_moments(&start, k, theta, &delta)?;
    let u = to_f64(&second_moment_coeffs(n, theta.value())?.u);
    let (m, v) = (to_f64(&mean), to_f64(&var));
    let cheb_chain = if m > eta { (v / ((m - eta) * (m - eta))).min(1.0) } else { 1.0 };
    let cheb_stat = (u / (eta * eta)).min(1.0);
    let (se_c, se_s) = (binomial_se(p_chain, reps), binomial_se(p_stat, reps));
    Ok(LowerBoundReport {
        n,
        theta: crate::rational::fmt_rat(theta.value()),
        c,
        k,
        eta,
        reps,
        seed,
        p_chain,
        se_chain: se_c,
        p_stationary: p_stat,
        se_stationary: se_s,
        witness: p_stat - p_chain,
        se_witness: (se_c * se_c + se_s * se_s).sqrt(),
        exact_mean: m,
        exact_variance: v,
        stationary_second_moment: u,
        chebyshev_chain_bound: cheb_chain,
        chebyshev_stationary_bound: cheb_stat,
        chebyshev_tv_lower: (1.0 - cheb_chain - cheb_stat).max(0.0),
    })
}

/// Σ_{i=1}^k 1/i as an exact rational.
pub fn harmonic(k: u32) -> Rat {
    (1..=k as i64).map(|i| Rat::new(1.into(), i.into())).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct FkReport {
    pub n: u32,
    pub k: u32,
    pub t: u64,
    pub theta: String,
    pub delta: String,
    pub reps: u64,
    pub seed: u64,
    pub harmonic: String,
    /// P(f_k − H_k ≤ −H_k/2), i.e. P(f_k ≤ H_k/2), under the chain from (n).
    pub p_chain_centered: f64,
    pub se_chain_centered: f64,
    pub p_stationary_centered: f64,
    pub se_stationary_centered: f64,
    pub gap_centered: f64,
    pub se_gap_centered: f64,
    /// The uncentered event f_k ≤ −H_k/2.
    pub p_chain_as_printed: f64,
    pub p_stationary_as_printed: f64,
    pub mean_chain: f64,
    pub var_chain: f64,
    pub mean_stationary: f64,
    pub var_stationary: f64,
}

/// Runs the chain from an n-cycle for t steps and compares the short-cycle
/// count f_k = m₁ + … + m_k with its law under stationarity.
pub fn ncycle_fk_experiment(
    n: u32,
    k: u32,
    t: u64,
    theta: &ThetaParam,
    delta: &Rat,
    reps: u64,
    seed: u64,
) -> Result<FkReport> {
    if k == 0 || k > n / 2 {
        return invalid("k must lie in 1..=n/2");
    }
    if reps < 2 {
        return invalid("reps must be at least 2");
    }
    let stepper = Stepper::new(n, theta, delta)?;
    let h = harmonic(k);
    let hf = to_f64(&h);
    let chain: Vec<f64> = run_chains(&Partition::row(n), t, &stepper, reps, seed)
        .iter()
        .map(|s| short_cycles(s, k) as f64)
        .collect();
    let stat: Vec<f64> = run_ewens(n, theta, reps, stationary_seed(seed))
        .iter()
        .map(|p| short_cycles(p.parts(), k) as f64)
        .collect();
    let frac = |v: &[f64], f: &dyn Fn(f64) -> bool| v.iter().filter(|&&x| f(x)).count() as f64 / reps as f64;
    let moments = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0);
        (m, var)
    };
    let pc = frac(&chain, &|x| x <= hf / 2.0);
    let ps = frac(&stat, &|x| x <= hf / 2.0);
    let (sc, ss) = (binomial_se(pc, reps), binomial_se(ps, reps));
    let (mc, vc) = moments(&chain);
    let (ms, vs) = moments(&stat);
    Ok(FkReport {
        n,
        k,
        t,
        theta: crate::rational::fmt_rat(theta.value()),
        delta: crate::rational::fmt_rat(delta),
        reps,
        seed,
        harmonic: crate::rational::fmt_rat(&h),
        p_chain_centered: pc,
        se_chain_centered: sc,
        p_stationary_centered: ps,
        se_stationary_centered: ss,
        gap_centered: pc - ps,
        se_gap_centered: (sc * sc + ss * ss).sqrt(),
        p_chain_as_printed: frac(&chain, &|x| x <= -hf / 2.0),
        p_stationary_as_printed: frac(&stat, &|x| x <= -hf / 2.0),
        mean_chain: mc,
        var_chain: vc,
        mean_stationary: ms,
        var_stationary: vs,
    })
}

/// Empirical counts of the state after one step from `start`.
pub fn one_step_counts(start: &Partition, theta: &ThetaParam, delta: &Rat, reps: u64, seed: u64) -> Result<BTreeMap<Partition, u64>> {
    let stepper = Stepper::new(start.size(), theta, delta)?;
    Ok(tally(run_chains(start, 1, &stepper, reps, seed).into_iter().map(Partition::from_multiset)))
}

/// Empirical counts of Ewens draws.
pub fn ewens_counts(n: u32, theta: &ThetaParam, reps: u64, seed: u64) -> BTreeMap<Partition, u64> {
    tally(run_ewens(n, theta, reps, seed).into_iter())
}

fn tally(it: impl Iterator<Item = Partition>) -> BTreeMap<Partition, u64> {
    let mut out = BTreeMap::new();
    for p in it {
        *out.entry(p).or_insert(0) += 1;
    }
    out
}

/// Largest deviation of empirical frequencies from exact probabilities, in
/// binomial standard errors. Outcomes with zero probability must not occur.
pub fn max_sigma_deviation(counts: &BTreeMap<Partition, u64>, exact: &[(Partition, Rat)], reps: u64) -> f64 {
    let mut worst: f64 = 0.0;
    for (p, q) in exact {
        let q = to_f64(q);
        let f = *counts.get(p).unwrap_or(&0) as f64 / reps as f64;
        if q == 0.0 {
            if f > 0.0 {
                return f64::INFINITY;
            }
            continue;
        }
        worst = worst.max((f - q).abs() / binomial_se(q, reps).max(f64::MIN_POSITIVE));
    }
    if counts.keys().any(|p| !exact.iter().any(|(e, _)| e == p)) {
        return f64::INFINITY;
    }
    worst
}

/// Exact mean and variance of d_{(n−1,1)} under a distribution over the canonical order.
pub fn d_moments_from_distribution(v: &[Rat], n: u32, theta: &Rat) -> Result<(Rat, Rat)> {
    let d1 = &d_low_shapes(n, theta)?[0];
    let set = crate::symfunc::partition_set(n)?;
    let mut m = Rat::zero();
    let mut s = Rat::zero();
    for (p, rho) in v.iter().zip(set.iter()) {
        let d = eval_low(d1, rho);
        m += p * &d;
        s += p * &d * &d;
    }
    let var = s - &m * &m;
    Ok((m, var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn th(a: i64, b: i64) -> ThetaParam {
        ThetaParam::new(rat(a, b)).unwrap()
    }

    #[test]
    fn w_matches_closed_form_and_x_plus_w() {
        for n in 5..=9 {
            for t in [rat(1, 2), int(2)] {
                let s = second_moment_coeffs(n, &t).unwrap();
                let c = second_moment_closed_forms(n, &t);
                assert_eq!(s.w, c.w);
                assert_eq!(s.v, c.v);
                assert_eq!(s.x, c.x);
            }
        }
        let c = second_moment_closed_forms(10, &int(1));
        let s = second_moment_coeffs(10, &int(1)).unwrap();
        assert_eq!(&c.x + &c.w, int(2));
        assert_eq!(&s.x + &s.w, int(2));
    }

    #[test]
    fn moments_at_time_zero() {
        for t in [th(1, 3), th(2, 1)] {
            let (m, v) = d_moments(&Partition::column(7), 0, &t, &int(0)).unwrap();
            assert_eq!(m, int(6));
            assert_eq!(v, int(0));
        }
    }

    #[test]
    fn harmonic_sum() {
        assert_eq!(harmonic(3), rat(11, 6));
    }

    #[test]
    fn fk_from_ncycle_at_time_zero() {
        let r = ncycle_fk_experiment(20, 5, 0, &th(1, 1), &rat(1, 20), 50, 1).unwrap();
        assert_eq!(r.mean_chain, 0.0);
        assert_eq!(r.p_chain_centered, 1.0);
        assert_eq!(r.p_chain_as_printed, 0.0);
    }
}
