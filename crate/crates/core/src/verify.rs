//! The exact invariant suite behind `jackmix verify`. Every check is a pure
//! identity or inequality of the library; comparisons against reference
//! closed forms live in the acceptance tests instead.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::chain::{build_float_kernel, build_kernel, eigenvalue, ewens, holding_closed_form, ThetaParam};
use crate::error::{Error, Result};
use crate::experiments::{d_moments, low_shapes, second_moment_coeffs};
use crate::jack::{
    c_n_cycle, c_two_cycle, character, cj_bound_holds, d_coeff, d_low_shapes, eval_low, hook_pair_product,
    j_split_bound_holds, jack_at_ones, jack_table,
};
use crate::linalg::mat_mul;
use crate::partitions::{enumerate_partitions, Partition};
use crate::rational::{factorial, from_big, int, max, min, pow, rat, to_f64, Rat};
use crate::sdops::{self, is_triangular, lb2_markov_rows, lb2_monomial_matrix, OpKind, OperatorSpec};
use crate::spectral::{
    completeness_check, distribution_profile_float, l2_distance, l2_identity_closed, l2_ncycle_closed,
    l2_transposition_closed, left_eigen_check, tv_distance, tv_distance_float, chi2_direct, EigenSystem,
};
use crate::symfunc::{convert, theta_inner, Basis, SymExpansion};

/// Upper limits on n for each family of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ranges {
    pub partitions: u32,
    pub hook_sum: u32,
    pub conversions: u32,
    pub jack: u32,
    pub chain: u32,
    pub spectrum: u32,
    pub spectral: u32,
    pub float_tv: u32,
    pub operators: u32,
    pub oracle: u32,
}

impl Ranges {
    pub fn full() -> Self {
        Ranges {
            partitions: 12,
            hook_sum: 10,
            conversions: 10,
            jack: 9,
            chain: 10,
            spectrum: 8,
            spectral: 8,
            float_tv: 40,
            operators: 8,
            oracle: 5,
        }
    }

    pub fn quick() -> Self {
        Ranges {
            partitions: 6,
            hook_sum: 6,
            conversions: 6,
            jack: 6,
            chain: 6,
            spectrum: 6,
            spectral: 6,
            float_tv: 12,
            operators: 6,
            oracle: 4,
        }
    }
}

pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub outcome: Result<()>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

type Check = (&'static str, &'static str, fn(&Ranges) -> Result<()>);

const CHECKS: &[Check] = &[
    ("partitions", "conjugation is an involution", conjugation_involution),
    ("partitions", "n(λ) two ways", n_stat_two_ways),
    ("partitions", "n(λ') monotone, n(λ) antimonotone", n_stat_monotone),
    ("partitions", "hook product is conjugation invariant", hook_conjugate),
    ("partitions", "Σ (n!/H_λ)² = n!", hook_square_sum),
    ("symfunc", "basis round trips", conversion_round_trips),
    ("symfunc", "θ inner product symmetric and positive", inner_product_positive),
    ("symfunc", "p to m against polynomial expansion", p_to_m_oracle),
    ("jack", "c at 1ⁿ, 2-cycle, n-cycle and j", jack_closed_forms),
    ("jack", "Σ c²zθ^ℓ = j", jack_norms),
    ("jack", "evaluation at 1^N", jack_ones),
    ("jack", "duality θ ↔ 1/θ", jack_duality),
    ("jack", "θ = 1 characters", jack_characters),
    ("jack", "split and c/j inequalities", jack_inequalities),
    ("chain", "row sums and detailed balance", kernel_rows),
    ("chain", "Σβ^k = trace Pᵏ", spectrum_traces),
    ("chain", "affine relation to T_θ", affine_relation),
    ("chain", "eigenvalue monotonicity and bounds", technical_bounds),
    ("chain", "holding closed form", holding),
    ("spectral", "left eigenvectors and completeness", eigen_completeness),
    ("spectral", "L² spectral sum, χ² and 4TV² ≤ L²", l2_direct),
    ("spectral", "L² closed forms by start", l2_closed_forms),
    ("spectral", "lazy TV non-increasing in float", float_tv_monotone),
    ("experiments", "second-moment decomposition", moment_decomposition),
    ("experiments", "d-statistic variance non-negative", moment_variance),
    ("sdops", "closed forms against differentiation", operator_oracle),
    ("sdops", "normalized operator is the kernel", lb2_kernel),
    ("sdops", "Jack polynomials are eigenfunctions", jack_eigenfunctions),
    ("sdops", "monomial matrix is triangular", monomial_triangular),
    ("sdops", "V is diagonal on e_r", v_elementary),
];

/// Runs every check, in parallel, reporting in a fixed order.
pub fn run_suite(ranges: &Ranges) -> Vec<CheckResult> {
    CHECKS
        .par_iter()
        .map(|(module, name, f)| CheckResult { module, name, outcome: f(ranges) })
        .collect()
}

pub const THETA_GRID: [(i64, i64); 4] = [(1, 3), (1, 2), (2, 1), (3, 1)];

fn thetas(grid: &[(i64, i64)]) -> Vec<Rat> {
    grid.iter().map(|&(a, b)| rat(a, b)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invariant(msg()))
    }
}

fn all_partitions(upto: u32) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for n in 1..=upto {
        out.extend(enumerate_partitions(n)?);
    }
    Ok(out)
}

fn conjugation_involution(r: &Ranges) -> Result<()> {
    for l in all_partitions(r.partitions)? {
        ensure(l.conjugate().conjugate() == l, || format!("conjugate twice differs at {l}"))?;
    }
    Ok(())
}

fn n_stat_two_ways(r: &Ranges) -> Result<()> {
    for l in all_partitions(r.partitions)? {
        ensure(l.n_stat() == l.n_stat_by_columns(), || format!("n(λ) differs at {l}"))?;
        ensure(l.pair_count() == l.conjugate().n_stat(), || format!("pair count differs at {l}"))?;
    }
    Ok(())
}

fn n_stat_monotone(r: &Ranges) -> Result<()> {
    for n in 1..=r.partitions.min(10) {
        let ps = enumerate_partitions(n)?;
        for a in &ps {
            for b in &ps {
                if a != b && b.dominance_leq(a)? {
                    ensure(a.pair_count() > b.pair_count() && a.n_stat() < b.n_stat(), || {
                        format!("monotonicity fails for {b} < {a}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn hook_conjugate(r: &Ranges) -> Result<()> {
    for l in all_partitions(r.partitions)? {
        ensure(l.hook_product() == l.conjugate().hook_product(), || format!("hook product at {l}"))?;
    }
    Ok(())
}

fn hook_square_sum(r: &Ranges) -> Result<()> {
    for n in 1..=r.hook_sum {
        let f = factorial(n as u64);
        let s: BigInt = enumerate_partitions(n)?
            .iter()
            .map(|l| {
                let d = &f / l.hook_product();
                &d * &d
            })
            .sum();
        ensure(s == f, || format!("sum of squared dimensions at n = {n}"))?;
    }
    Ok(())
}

const BASES: [Basis; 4] = [Basis::Monomial, Basis::PowerSum, Basis::Elementary, Basis::Complete];

fn conversion_round_trips(r: &Ranges) -> Result<()> {
    for n in 1..=r.conversions {
        for l in enumerate_partitions(n)? {
            for from in BASES {
                let f = SymExpansion::basis_element(from, &l);
                for to in BASES {
                    let back = convert(&convert(&f, to)?, from)?;
                    ensure(back == f, || format!("{}→{}→{} at {l}", from.tag(), to.tag(), from.tag()))?;
                }
            }
        }
    }
    Ok(())
}

fn inner_product_positive(r: &Ranges) -> Result<()> {
    for t in thetas(&THETA_GRID) {
        for n in 1..=r.conversions.min(8) {
            let ps = enumerate_partitions(n)?;
            for a in &ps {
                let fa = SymExpansion::basis_element(Basis::Monomial, a);
                ensure(theta_inner(&fa, &fa, &t)?.is_positive(), || format!("⟨m,m⟩ ≤ 0 at {a}"))?;
                for b in &ps {
                    let fb = SymExpansion::basis_element(Basis::Elementary, b);
                    ensure(theta_inner(&fa, &fb, &t)? == theta_inner(&fb, &fa, &t)?, || {
                        format!("asymmetric at {a}, {b}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn p_to_m_oracle(r: &Ranges) -> Result<()> {
    for n in 1..=r.conversions.min(6) {
        for l in enumerate_partitions(n)? {
            let m = convert(&SymExpansion::basis_element(Basis::PowerSum, &l), Basis::Monomial)?;
            let mut poly = sdops::oracle::Poly::default();
            for (mu, c) in m.coeffs() {
                let c = c.to_integer();
                let c: i128 = c.try_into().map_err(|_| Error::NumericInstability("coefficient overflow".into()))?;
                poly.add_assign_scaled(&sdops::oracle::monomial(mu, n as usize), c);
            }
            ensure(poly == sdops::oracle::power_sum(&l, n as usize), || format!("p→m at {l}"))?;
        }
    }
    Ok(())
}

fn jack_grid() -> Vec<Rat> {
    thetas(&[(1, 3), (1, 2), (1, 1), (2, 1), (3, 1)])
}

fn jack_closed_forms(r: &Ranges) -> Result<()> {
    for t in jack_grid() {
        for n in 1..=r.jack {
            let table = jack_table(n, &t)?;
            for l in table.partitions().iter() {
                ensure(table.c(l, &Partition::column(n)).is_one(), || format!("c at 1ⁿ for {l}"))?;
                ensure(*table.j(l) == hook_pair_product(l, &t), || format!("j at {l}"))?;
                ensure(*table.c(l, &Partition::row(n)) == c_n_cycle(l, &t), || format!("n-cycle at {l}"))?;
                if n >= 2 {
                    let two = Partition::from_multiset([vec![2], vec![1; n as usize - 2]].concat());
                    ensure(*table.c(l, &two) == c_two_cycle(l, &t)?, || format!("2-cycle at {l}"))?;
                }
            }
        }
    }
    Ok(())
}

fn jack_norms(r: &Ranges) -> Result<()> {
    for t in jack_grid() {
        for n in 1..=r.jack {
            let table = jack_table(n, &t)?;
            let set = table.partitions();
            for (i, l) in set.iter().enumerate() {
                let s: Rat = set
                    .iter()
                    .enumerate()
                    .map(|(k, rho)| {
                        let c = table.c_at(i, k);
                        c * c * from_big(rho.z_stat()) * pow(&t, rho.len() as i64)
                    })
                    .sum();
                ensure(&s == table.j(l), || format!("norm at {l}, θ = {t}"))?;
            }
        }
    }
    Ok(())
}

fn jack_ones(r: &Ranges) -> Result<()> {
    for t in jack_grid() {
        for n in 1..=r.jack.min(7) {
            let table = jack_table(n, &t)?;
            let set = table.partitions();
            for (i, l) in set.iter().enumerate() {
                for big_n in [n, n + 1, n + 2] {
                    let s: Rat = set
                        .iter()
                        .enumerate()
                        .map(|(k, rho)| table.c_at(i, k) * pow(&int(big_n as i64), rho.len() as i64))
                        .sum();
                    ensure(s == jack_at_ones(l, big_n, &t), || format!("J_{l}(1^{big_n}), θ = {t}"))?;
                }
            }
        }
    }
    Ok(())
}

fn jack_duality(r: &Ranges) -> Result<()> {
    for t in thetas(&[(1, 2), (2, 1), (3, 1)]) {
        for n in 1..=r.jack.min(8) {
            let a = jack_table(n, &t)?;
            let b = jack_table(n, &t.recip())?;
            for l in a.partitions().iter() {
                for mu in a.partitions().iter() {
                    let rhs = pow(&-t.clone(), n as i64 - mu.len() as i64) * b.c(l, mu);
                    ensure(*a.c(&l.conjugate(), mu) == rhs, || format!("duality at {l}, {mu}"))?;
                }
            }
        }
    }
    Ok(())
}

fn jack_characters(r: &Ranges) -> Result<()> {
    for n in 1..=r.jack {
        let table = jack_table(n, &Rat::one())?;
        for l in table.partitions().iter() {
            for rho in table.partitions().iter() {
                let chi = from_big(character(l, rho)?);
                ensure(d_coeff(l, rho, &table) == chi, || format!("χ mismatch at {l}, {rho}"))?;
                let c = from_big(l.hook_product()) * &chi / from_big(rho.z_stat());
                ensure(*table.c(l, rho) == c, || format!("c = Hχ/z fails at {l}, {rho}"))?;
            }
        }
    }
    Ok(())
}

fn jack_inequalities(r: &Ranges) -> Result<()> {
    for t in thetas(&[(1, 2), (1, 1), (2, 1)]) {
        for l in all_partitions(r.jack.max(r.hook_sum))? {
            ensure(j_split_bound_holds(&l, &t), || format!("j split bound at {l}, θ = {t}"))?;
            ensure(cj_bound_holds(&l, &t, false), || format!("c/j bound at {l}, θ = {t}"))?;
            ensure(cj_bound_holds(&l, &t, true), || format!("c/j transpose bound at {l}, θ = {t}"))?;
        }
    }
    Ok(())
}

fn deltas(n: u32) -> [Rat; 2] {
    [Rat::zero(), rat(1, n as i64)]
}

fn kernel_rows(r: &Ranges) -> Result<()> {
    for t in thetas(&THETA_GRID) {
        let th = ThetaParam::new(t.clone())?;
        for n in 2..=r.chain {
            let pi = ewens(n, &th)?;
            for d in deltas(n) {
                let k = build_kernel(n, &th, &d)?;
                for (i, row) in k.rows().iter().enumerate() {
                    let s: Rat = row.iter().map(|(_, p)| p).sum();
                    ensure(s.is_one(), || format!("row sum at n = {n}, θ = {t}"))?;
                    for (j, p) in row {
                        ensure(&pi.probs()[i] * p == &pi.probs()[*j] * k.entry(*j, i), || {
                            format!("detailed balance at n = {n}, θ = {t}")
                        })?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Σ_λ β_λ^k against trace(Pᵏ) for k = 1..|P_n|.
pub fn spectrum_trace_holds(n: u32, theta: &ThetaParam, delta: &Rat) -> Result<bool> {
    let k = build_kernel(n, theta, delta)?;
    let betas: Vec<Rat> = k.partitions().iter().map(|l| eigenvalue(l, theta, delta)).collect();
    let p = k.dense();
    let mut power = p.clone();
    let mut powers = betas.clone();
    for step in 1..=p.len() {
        if step > 1 {
            power = mat_mul(&power, &p);
            powers.iter_mut().zip(&betas).for_each(|(a, b)| *a *= b);
        }
        let tr: Rat = (0..p.len()).map(|i| power[i][i].clone()).sum();
        let s: Rat = powers.iter().sum();
        if tr != s {
            return Ok(false);
        }
    }
    Ok(true)
}

fn spectrum_traces(r: &Ranges) -> Result<()> {
    for t in thetas(&THETA_GRID) {
        let th = ThetaParam::new(t.clone())?;
        for n in 2..=r.spectrum {
            for d in deltas(n) {
                ensure(spectrum_trace_holds(n, &th, &d)?, || format!("trace at n = {n}, θ = {t}, δ = {d}"))?;
            }
        }
    }
    Ok(())
}

fn affine_relation(r: &Ranges) -> Result<()> {
    for t in thetas(&THETA_GRID) {
        let th = ThetaParam::new(t.clone())?;
        let a = min(&t, &Rat::one());
        for n in 2..=r.spectrum {
            let p = build_kernel(n, &th, &Rat::zero())?.dense();
            let tm = lb2_markov_rows(n, &t, n)?;
            for i in 0..p.len() {
                for j in 0..p.len() {
                    let id = if i == j { Rat::one() - &a } else { Rat::zero() };
                    ensure(p[i][j] == &a * &tm[i][j] + id, || format!("affine relation at n = {n}, θ = {t}"))?;
                }
            }
        }
    }
    Ok(())
}

/// Monotonicity along dominance, the two upper bounds on β_λ, and the
/// conjugate bound for negative eigenvalues, all at δ = 0.
pub fn technical_bounds_hold(n: u32, theta: &ThetaParam) -> Result<Option<String>> {
    let zero = Rat::zero();
    let ps = enumerate_partitions(n)?;
    let beta: Vec<Rat> = ps.iter().map(|l| eigenvalue(l, theta, &zero)).collect();
    let a = min(theta.value(), &Rat::one());
    let nn = int(n as i64);
    for (i, l) in ps.iter().enumerate() {
        for (j, m) in ps.iter().enumerate() {
            if m.dominance_leq(l)? && beta[j] > beta[i] {
                return Ok(Some(format!("β not monotone: {m} ≤ {l}")));
            }
        }
        if n < 2 {
            continue;
        }
        let l1 = int(l.part(0) as i64);
        let b = beta[i].abs();
        let general = Rat::one() - &a * (Rat::one() - (&l1 - int(1)) / (&nn - int(1)));
        if beta[i] > general || (beta[i] >= zero && b > general) {
            return Ok(Some(format!("general bound fails at {l}")));
        }
        if int(2) * &l1 >= nn {
            let big = Rat::one() - &a * int(2) * &l1 * (&nn - &l1) / (&nn * (&nn - int(1)));
            if beta[i] > big {
                return Ok(Some(format!("large-λ₁ bound fails at {l}")));
            }
        }
        if beta[i].is_negative() {
            let bt = eigenvalue(&l.conjugate(), theta, &zero);
            if !bt.is_positive() || b > bt {
                return Ok(Some(format!("conjugate bound fails at {l}")));
            }
        }
    }
    Ok(None)
}

fn technical_bounds(r: &Ranges) -> Result<()> {
    for t in thetas(&THETA_GRID) {
        let th = ThetaParam::new(t.clone())?;
        for n in 1..=r.partitions {
            if let Some(msg) = technical_bounds_hold(n, &th)? {
                return Err(Error::Invariant(format!("{msg} (n = {n}, θ = {t})")));
            }
        }
    }
    Ok(())
}

fn holding(r: &Ranges) -> Result<()> {
    for t in thetas(&THETA_GRID) {
        let th = ThetaParam::new(t.clone())?;
        for n in 2..=r.partitions {
            let k = build_kernel(n, &th, &Rat::zero())?;
            for (i, l) in k.partitions().iter().enumerate() {
                ensure(k.entry(i, i) == holding_closed_form(l, &th), || format!("holding at {l}, θ = {t}"))?;
            }
        }
    }
    Ok(())
}

fn spectral_thetas() -> Vec<Rat> {
    thetas(&[(1, 2), (2, 1)])
}

fn eigen_completeness(r: &Ranges) -> Result<()> {
    for t in spectral_thetas() {
        let th = ThetaParam::new(t)?;
        for n in 2..=r.spectral {
            for d in deltas(n) {
                let sys = EigenSystem::new(n, &th, &d)?;
                left_eigen_check(&sys, &build_kernel(n, &th, &d)?)?;
                completeness_check(&sys)?;
            }
        }
    }
    Ok(())
}

fn l2_direct(r: &Ranges) -> Result<()> {
    for t in spectral_thetas() {
        let th = ThetaParam::new(t.clone())?;
        for n in 2..=r.spectral {
            let d = rat(1, n as i64);
            let sys = EigenSystem::new(n, &th, &d)?;
            let kernel = build_kernel(n, &th, &d)?;
            for start in kernel.partitions().iter() {
                let mut v: Vec<Rat> = kernel.partitions().iter().map(|p| if p == start { Rat::one() } else { Rat::zero() }).collect();
                for k in 0..=30u64 {
                    if k > 0 {
                        v = kernel.apply_left(&v);
                    }
                    let l2 = l2_distance(start, k, &sys)?;
                    if k <= 20 {
                        ensure(chi2_direct(&v, sys.stationary()) == l2, || format!("χ² at {start}, k = {k}, θ = {t}"))?;
                    }
                    let tv = tv_distance(&v, sys.stationary());
                    ensure(int(4) * &tv * &tv <= l2, || format!("4TV² > L² at {start}, k = {k}, θ = {t}"))?;
                }
            }
        }
    }
    Ok(())
}

fn l2_closed_forms(r: &Ranges) -> Result<()> {
    for t in spectral_thetas() {
        let th = ThetaParam::new(t.clone())?;
        for n in 2..=r.spectral {
            let d = rat(1, n as i64);
            let sys = EigenSystem::new(n, &th, &d)?;
            let two = Partition::from_multiset([vec![2], vec![1; n as usize - 2]].concat());
            for k in 0..=20u64 {
                let at = |s: &Partition| l2_distance(s, k, &sys);
                ensure(at(&Partition::column(n))? == l2_identity_closed(n, &th, &d, k)?, || format!("identity, n = {n}, k = {k}"))?;
                ensure(at(&two)? == l2_transposition_closed(n, &th, &d, k)?, || format!("transposition, n = {n}, k = {k}"))?;
                ensure(at(&Partition::row(n))? == l2_ncycle_closed(n, &th, &d, k)?, || format!("n-cycle, n = {n}, k = {k}"))?;
            }
        }
    }
    Ok(())
}

fn float_tv_monotone(r: &Ranges) -> Result<()> {
    let mut sizes: Vec<u32> = (10..=r.float_tv).step_by(10).collect();
    if sizes.last() != Some(&r.float_tv) {
        sizes.push(r.float_tv);
    }
    for t in spectral_thetas() {
        let th = ThetaParam::new(t.clone())?;
        for &n in &sizes {
            let d = rat(1, n as i64);
            let kernel = build_float_kernel(n, &th, &d)?;
            let pi: Vec<f64> = ewens(n, &th)?.probs().iter().map(to_f64).collect();
            let scale = to_f64(&max(&t.recip(), &Rat::one()));
            let horizon = (2.0 * scale * n as f64 * (n as f64).ln()).ceil() as u64;
            let ks: Vec<u64> = (0..=horizon).step_by((horizon as usize / 60).max(1)).collect();
            for start in [Partition::column(n), Partition::row(n)] {
                let profile = distribution_profile_float(&start, &ks, &kernel)?;
                let tv: Vec<f64> = profile.iter().map(|v| tv_distance_float(v, &pi)).collect();
                ensure(tv.windows(2).all(|w| w[1] <= w[0] + 1e-10), || format!("TV increases from {start}, n = {n}, θ = {t}"))?;
            }
        }
    }
    Ok(())
}

fn moment_decomposition(r: &Ranges) -> Result<()> {
    for t in thetas(&THETA_GRID) {
        for n in 5..=r.jack.min(8) {
            let table = jack_table(n, &t)?;
            let m = second_moment_coeffs(n, &t)?;
            let [l1, l2, l3] = low_shapes(n);
            let low = d_low_shapes(n, &t)?;
            for rho in table.partitions().iter() {
                let d1 = d_coeff(&l1, rho, &table);
                ensure(eval_low(&low[0], rho) == d1, || format!("d(n−1,1) closed form at {rho}"))?;
                ensure(eval_low(&low[1], rho) == d_coeff(&l2, rho, &table), || format!("d(n−2,1²) at {rho}"))?;
                ensure(eval_low(&low[2], rho) == d_coeff(&l3, rho, &table), || format!("d(n−2,2) at {rho}"))?;
                let rhs = &m.u + &m.v * &d1 + &m.w * d_coeff(&l2, rho, &table) + &m.x * d_coeff(&l3, rho, &table);
                ensure(&d1 * &d1 == rhs, || format!("decomposition at {rho}, n = {n}, θ = {t}"))?;
            }
        }
    }
    Ok(())
}

fn moment_variance(r: &Ranges) -> Result<()> {
    for t in thetas(&THETA_GRID) {
        let th = ThetaParam::new(t.clone())?;
        for n in 5..=r.chain {
            for d in deltas(n) {
                for start in [Partition::column(n), Partition::row(n)] {
                    for k in [0u64, 1, 5, 20, 100] {
                        let (_, var) = d_moments(&start, k, &th, &d)?;
                        ensure(!var.is_negative(), || format!("negative variance from {start}, k = {k}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn operator_oracle(r: &Ranges) -> Result<()> {
    let kinds = [OpKind::D110, OpKind::D002, OpKind::D120, OpKind::D210, OpKind::D003, OpKind::Dtheta2, OpKind::Dtheta3];
    for n in 1..=r.oracle {
        for l in enumerate_partitions(n)? {
            for kind in kinds {
                for t in thetas(&[(1, 2), (3, 1)]) {
                    let op = OperatorSpec::new(kind, t, r.oracle)?;
                    ensure(sdops::oracle::check(&op, &l)?, || format!("{kind} on p_{l}"))?;
                }
            }
        }
    }
    Ok(())
}

fn lb2_kernel(r: &Ranges) -> Result<()> {
    for t in thetas(&[(1, 3), (1, 2), (1, 1), (2, 1), (3, 1)]) {
        for n in 2..=r.operators {
            let rows = lb2_markov_rows(n, &t, n + 1)?;
            for row in &rows {
                ensure(row.iter().sum::<Rat>().is_one(), || format!("row sum, n = {n}, θ = {t}"))?;
            }
            if t > Rat::one() {
                let k = build_kernel(n, &ThetaParam::new(t.clone())?, &Rat::zero())?;
                ensure(rows == k.dense(), || format!("kernel mismatch, n = {n}, θ = {t}"))?;
            }
        }
    }
    Ok(())
}

fn jack_eigenfunctions(r: &Ranges) -> Result<()> {
    for t in spectral_thetas() {
        let th = ThetaParam::new(t.clone())?;
        let a = min(&t, &Rat::one());
        for n in 2..=r.operators.min(6) {
            let table = jack_table(n, &t)?;
            for l in table.partitions().iter() {
                let j = table.expansion(l);
                for kind in [OpKind::Dtheta2, OpKind::Dtheta3, OpKind::LB2] {
                    let img = sdops::apply(&OperatorSpec::new(kind, t.clone(), n)?, &j)?;
                    let c = img.coeff(&Partition::column(n));
                    ensure(img == j.scale(&c), || format!("{kind} on J_{l}, θ = {t}"))?;
                    if kind == OpKind::LB2 {
                        let beta = eigenvalue(l, &th, &Rat::zero());
                        ensure(&a * &c + Rat::one() - &a == beta, || format!("T eigenvalue at {l}, θ = {t}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn monomial_triangular(r: &Ranges) -> Result<()> {
    for t in thetas(&[(1, 2), (2, 1)]) {
        for n in 2..=r.operators {
            let m = lb2_monomial_matrix(n, &t, n)?;
            ensure(is_triangular(&m), || format!("not triangular at n = {n}, θ = {t}"))?;
        }
    }
    Ok(())
}

fn v_elementary(r: &Ranges) -> Result<()> {
    for r_ in 1..=r.operators {
        ensure(sdops::v_on_elementary(r_, r.operators)?.is_some(), || format!("V e_{r_} not scalar"))?;
    }
    Ok(())
}
