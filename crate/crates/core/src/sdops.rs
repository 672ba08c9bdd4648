//! Sekiguchi–Debiard type operators on power sums in N variables, their
//! Markov normalization, actions on other bases, and a brute-force
//! polynomial oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chain::{build_kernel_allow_periodic, ThetaParam};
use crate::error::{invalid, Error, Result};
use crate::linalg::{left_fixed_vector, mat_mul};
use crate::partitions::Partition;
use crate::rational::{int, rat, Rat};
use crate::symfunc::{convert, partition_set, Basis, SymExpansion};

/// The operators exposed on power sums. D(λ,μ;h) is named by its three
/// indices, e.g. `D120` = D((1),(2);0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    D110,
    D002,
    D120,
    D210,
    D003,
    Dtheta2,
    Dtheta3,
    LB2,
}

impl OpKind {
    pub const ALL: [OpKind; 8] = [
        OpKind::D110,
        OpKind::D002,
        OpKind::D120,
        OpKind::D210,
        OpKind::D003,
        OpKind::Dtheta2,
        OpKind::Dtheta3,
        OpKind::LB2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::D110 => "d110",
            OpKind::D002 => "d002",
            OpKind::D120 => "d120",
            OpKind::D210 => "d210",
            OpKind::D003 => "d003",
            OpKind::Dtheta2 => "dtheta2",
            OpKind::Dtheta3 => "dtheta3",
            OpKind::LB2 => "lb2",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OpKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown operator {s:?}")))
    }
}

/// An operator together with θ and the number of variables N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSpec {
    pub kind: OpKind,
    pub theta: Rat,
    pub n_vars: u32,
}

impl OperatorSpec {
    pub fn new(kind: OpKind, theta: Rat, n_vars: u32) -> Result<Self> {
        if !theta.is_positive() {
            return invalid("theta must be positive");
        }
        if n_vars == 0 {
            return invalid("need at least one variable");
        }
        Ok(OperatorSpec { kind, theta, n_vars })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Atom {
    Identity,
    D110,
    D002,
    D120,
    D210,
    D003,
}

struct Acc(BTreeMap<Partition, Rat>);

impl Acc {
    fn new() -> Self {
        Acc(BTreeMap::new())
    }

    /// Adds `c` times p_λ with the parts at `drop` replaced by `add`.
    fn put(&mut self, parts: &[u32], drop: &[usize], add: &[u32], c: Rat) {
        if c.is_zero() {
            return;
        }
        let mut v: Vec<u32> = parts
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, &p)| p)
            .collect();
        v.extend_from_slice(add);
        *self.0.entry(Partition::from_multiset(v)).or_insert_with(Rat::zero) += c;
    }
}

fn atom_on(atom: Atom, parts: &[u32], n_vars: u32, acc: &mut Acc, scale: &Rat) {
    let nv = int(n_vars as i64);
    let l = parts.len();
    let q = |x: u32| int(x as i64);
    match atom {
        Atom::Identity => acc.put(parts, &[], &[], scale.clone()),
        Atom::D002 => {
            let diag: u64 = parts.iter().map(|&p| (p as u64) * (p as u64)).sum();
            acc.put(parts, &[], &[], scale * int(diag as i64));
            for s in 0..l {
                for t in 0..l {
                    if s != t {
                        acc.put(parts, &[s, t], &[parts[s] + parts[t]], scale * q(parts[s] * parts[t]));
                    }
                }
            }
        }
        Atom::D110 => {
            for s in 0..l {
                let a = parts[s];
                let diag = q(a) * (int(2) * &nv - q(a) - int(1)) / int(2);
                acc.put(parts, &[], &[], scale * diag);
                for r in 1..a {
                    acc.put(parts, &[s], &[r, a - r], scale * q(a) / int(2));
                }
            }
        }
        Atom::D003 => {
            let diag: i64 = parts.iter().map(|&p| (p as i64).pow(3)).sum();
            acc.put(parts, &[], &[], scale * int(diag));
            for s in 0..l {
                for t in 0..l {
                    if s == t {
                        continue;
                    }
                    let c = int(3) * q(parts[s] * parts[s] * parts[t]);
                    acc.put(parts, &[s, t], &[parts[s] + parts[t]], scale * c);
                    for u in 0..l {
                        if u != s && u != t {
                            let c = q(parts[s] * parts[t] * parts[u]);
                            acc.put(parts, &[s, t, u], &[parts[s] + parts[t] + parts[u]], scale * c);
                        }
                    }
                }
            }
        }
        Atom::D120 => {
            for s in 0..l {
                let a = parts[s];
                let half_sq = q(a * a) / int(2);
                acc.put(parts, &[], &[], scale * &half_sq * (int(2) * &nv - q(a) - int(1)));
                for u in 1..a {
                    acc.put(parts, &[s], &[u, a - u], scale * &half_sq);
                }
                for t in 0..l {
                    if t == s {
                        continue;
                    }
                    let b = parts[t];
                    let half = q(a * b) / int(2);
                    acc.put(parts, &[s, t], &[a + b], scale * &half * (int(2) * &nv - q(a + b) - int(1)));
                    for u in 1..a + b {
                        acc.put(parts, &[s, t], &[u, a + b - u], scale * &half);
                    }
                }
            }
        }
        Atom::D210 => {
            for s in 0..l {
                let a = parts[s];
                let qa = q(a);
                let pair = &nv - (int(1) + &qa) / int(2);
                for r in 1..a {
                    acc.put(parts, &[s], &[r, a - r], scale * &qa * &pair);
                }
                for r1 in 1..a {
                    for r2 in 1..a - r1 {
                        acc.put(parts, &[s], &[r1, r2, a - r1 - r2], scale * &qa / int(3));
                    }
                }
                let diag = (&nv - int(1)) * (&nv - &qa) + (int(2) * &qa - int(1)) * (&qa - int(1)) / int(6);
                acc.put(parts, &[], &[], scale * &qa * diag);
            }
        }
    }
}

/// The operator as a linear combination of atoms at degree n.
fn combination(op: &OperatorSpec, n: u32) -> Result<Vec<(Atom, Rat)>> {
    let t = &op.theta;
    let nv = int(op.n_vars as i64);
    let nn = int(n as i64);
    let b = &nv * (&nv - int(1)) / int(2);
    Ok(match op.kind {
        OpKind::D110 => vec![(Atom::D110, Rat::one())],
        OpKind::D002 => vec![(Atom::D002, Rat::one())],
        OpKind::D120 => vec![(Atom::D120, Rat::one())],
        OpKind::D210 => vec![(Atom::D210, Rat::one())],
        OpKind::D003 => vec![(Atom::D003, Rat::one())],
        OpKind::Dtheta2 => {
            let e2 = &nv * (&nv - int(1)) * (&nv - int(2)) * (int(3) * &nv - int(1)) / int(24);
            let c = t * t * &nn * &nn / int(2) + t * &nn * &b + e2;
            vec![(Atom::Identity, c), (Atom::D110, -t.clone()), (Atom::D002, -(t * t) / int(2))]
        }
        OpKind::Dtheta3 => {
            // Elementary symmetric functions of the staircase (N−1, …, 0).
            let p2 = (&nv - int(1)) * &nv * (int(2) * &nv - int(1)) / int(6);
            let e2 = (&b * &b - &p2) / int(2);
            let e3 = (&b * &b * &b - int(3) * &b * &p2 + int(2) * &b * &b) / int(6);
            let t2 = t * t;
            let t3 = &t2 * t;
            let c = e3 + t * &e2 * &nn + &t2 * &b * &nn * &nn / int(2) + &t3 * &nn * &nn * &nn / int(6);
            vec![
                (Atom::Identity, c),
                (Atom::D003, &t3 / int(3)),
                (Atom::D002, -(&t3 * &nn) / int(2) - &t2 * &b / int(2)),
                (Atom::D120, t2.clone()),
                (Atom::D110, -(&t2 * &nn) - t * &b),
                (Atom::D210, t.clone()),
            ]
        }
        OpKind::LB2 => {
            if n < 2 {
                return invalid("the normalized operator needs degree ≥ 2");
            }
            let pairs = &nn * (&nn - int(1)) / int(2);
            let ti = t.recip();
            let c = -(&nn / int(2)) - &ti * (&nv - int(1)) * &nn;
            vec![
                (Atom::Identity, &c / &pairs),
                (Atom::D002, Rat::one() / (int(2) * &pairs)),
                (Atom::D110, &ti / &pairs),
            ]
        }
    })
}

/// D_θ³ with the θ and θ² groups weighted 2/3 and the θ² constant Bn²/3.
/// Kept for comparison with the reference p₃p₁² expansion.
pub fn dtheta3_as_printed(theta: &Rat, n_vars: u32, f: &SymExpansion) -> Result<SymExpansion> {
    let n = f.degree();
    if n_vars < n {
        return invalid(format!("N = {n_vars} is below the degree {n}"));
    }
    let fp = convert(f, Basis::PowerSum)?;
    let spec = OperatorSpec::new(OpKind::Dtheta3, theta.clone(), n_vars)?;
    let two_thirds = rat(2, 3);
    let nv = int(n_vars as i64);
    let b = &nv * (&nv - int(1)) / int(2);
    let nn = int(n as i64);
    let combo: Vec<(Atom, Rat)> = combination(&spec, n)?
        .into_iter()
        .map(|(atom, w)| match atom {
            Atom::Identity => {
                let shift = theta * theta * &b * &nn * &nn * (rat(1, 3) - rat(1, 2));
                (atom, w + shift)
            }
            Atom::D003 => (atom, w),
            Atom::D002 => {
                let cubic = -(theta * theta * theta * &nn) / int(2);
                (atom, &cubic + (w - &cubic) * &two_thirds)
            }
            _ => (atom, w * &two_thirds),
        })
        .collect();
    let mut acc = Acc::new();
    for (lam, c) in fp.coeffs() {
        for (atom, w) in &combo {
            atom_on(*atom, lam.parts(), n_vars, &mut acc, &(c * w));
        }
    }
    convert(&SymExpansion::from_terms(Basis::PowerSum, n, acc.0)?, f.basis())
}

/// Applies the operator to a homogeneous expansion. Inputs in another basis
/// are converted through the power sums and the result is returned in the
/// input basis.
pub fn apply(op: &OperatorSpec, f: &SymExpansion) -> Result<SymExpansion> {
    let n = f.degree();
    if op.n_vars < n {
        return invalid(format!("N = {} is below the degree {n}", op.n_vars));
    }
    if f.basis() != Basis::PowerSum {
        let fp = convert(f, Basis::PowerSum)?;
        return convert(&apply(op, &fp)?, f.basis());
    }
    let combo = combination(op, n)?;
    let mut acc = Acc::new();
    for (lam, c) in f.coeffs() {
        for (atom, w) in &combo {
            atom_on(*atom, lam.parts(), op.n_vars, &mut acc, &(c * w));
        }
    }
    SymExpansion::from_terms(Basis::PowerSum, n, acc.0)
}

/// Applies the operator to a single p_λ.
pub fn apply_to_power_sum(op: &OperatorSpec, lambda: &Partition) -> Result<SymExpansion> {
    apply(op, &SymExpansion::basis_element(Basis::PowerSum, lambda))
}

/// Matrix of the operator on degree-n power sums: row λ holds the
/// coefficients of the image of p_λ, over the canonical order.
pub fn power_sum_matrix(op: &OperatorSpec, n: u32) -> Result<Vec<Vec<Rat>>> {
    let set = partition_set(n)?;
    set.iter()
        .map(|lam| {
            let img = apply_to_power_sum(op, lam)?;
            Ok(set.iter().map(|mu| img.coeff(mu)).collect())
        })
        .collect()
}

/// Rows of the normalized operator (1/binom(n,2))(½(U − n) + θ⁻¹(V − (N−1)n))
/// with U = Σ(x_i∂_i)² and V = D((1),(1);0).
pub fn lb2_markov_rows(n: u32, theta: &Rat, n_vars: u32) -> Result<Vec<Vec<Rat>>> {
    power_sum_matrix(&OperatorSpec::new(OpKind::LB2, theta.clone(), n_vars)?, n)
}

/// Matrix of the normalized operator in the monomial basis.
pub fn lb2_monomial_matrix(n: u32, theta: &Rat, n_vars: u32) -> Result<Vec<Vec<Rat>>> {
    let op = OperatorSpec::new(OpKind::LB2, theta.clone(), n_vars)?;
    let set = partition_set(n)?;
    set.iter()
        .map(|lam| {
            let img = apply(&op, &SymExpansion::basis_element(Basis::Monomial, lam))?;
            Ok(set.iter().map(|mu| img.coeff(mu)).collect())
        })
        .collect()
}

/// True when every nonzero entry sits on or to one side of the diagonal.
pub fn is_triangular(m: &[Vec<Rat>]) -> bool {
    let upper = m.iter().enumerate().all(|(i, r)| r[..i].iter().all(Zero::is_zero));
    let lower = m.iter().enumerate().all(|(i, r)| r[i + 1..].iter().all(Zero::is_zero));
    upper || lower
}

/// U = Σ(x_i∂_i)² applied to e_{r₁}e_{r₂}, in the elementary basis.
pub fn elementary_u(r1: u32, r2: u32, n_vars: u32) -> Result<SymExpansion> {
    let e = elementary_pair(r1, r2)?;
    apply(&OperatorSpec::new(OpKind::D002, Rat::one(), n_vars)?, &e)
}

/// The closed form 3(1+r₁)e_{r₁,r₂} − Σ_{j<r₁} 2(r₁+r₂−2j)e_{r₁+r₂−j,j}.
pub fn elementary_u_closed_form(r1: u32, r2: u32) -> Result<SymExpansion> {
    if r1 == 0 || r1 > r2 {
        return invalid("needs 1 ≤ r₁ ≤ r₂");
    }
    let mut out = SymExpansion::zero(Basis::Elementary, r1 + r2);
    out.add_term(Partition::from_multiset(vec![r1, r2]), int(3 * (1 + r1 as i64)))?;
    for j in 0..r1 {
        let p = Partition::from_multiset(vec![r1 + r2 - j, j].into_iter().filter(|&x| x > 0).collect());
        out.add_term(p, int(-2 * (r1 as i64 + r2 as i64 - 2 * j as i64)))?;
    }
    Ok(out)
}

fn elementary_pair(r1: u32, r2: u32) -> Result<SymExpansion> {
    if r1 == 0 || r2 == 0 {
        return invalid("indices must be positive");
    }
    Ok(SymExpansion::basis_element(Basis::Elementary, &Partition::from_multiset(vec![r1, r2])))
}

/// V e_r, returning the scalar when the image is a multiple of e_r.
pub fn v_on_elementary(r: u32, n_vars: u32) -> Result<Option<Rat>> {
    let e = SymExpansion::basis_element(Basis::Elementary, &Partition::row(r));
    let img = apply(&OperatorSpec::new(OpKind::D110, Rat::one(), n_vars)?, &e)?;
    let c = img.coeff(&Partition::row(r));
    Ok(if img.sub(&e.scale(&c))?.is_zero() { Some(c) } else { None })
}

/// Stationary law of P_{θ₁}·P_{θ₂} (both at δ = 0) by an exact solve.
pub fn composition_stationary(theta1: &Rat, theta2: &Rat, n: u32) -> Result<Vec<Rat>> {
    if n > 9 {
        return invalid("composition is computed exactly only for n ≤ 9");
    }
    if theta1.is_one() && theta2.is_one() {
        return Err(Error::Periodic("P₁·P₁ does not mix between parity classes".into()));
    }
    let zero = Rat::zero();
    let a = build_kernel_allow_periodic(n, &ThetaParam::new(theta1.clone())?, &zero)?;
    let b = build_kernel_allow_periodic(n, &ThetaParam::new(theta2.clone())?, &zero)?;
    left_fixed_vector(&mat_mul(&a.dense(), &b.dense()))
}

/// Brute-force polynomials in at most eight variables with integer
/// coefficients, used to check the closed forms by literal differentiation.
pub mod oracle {
    use super::*;

    const BITS: u32 = 8;

    /// Exponent vectors packed eight bits per variable.
    #[derive(Clone, Debug, Default, PartialEq, Eq)]
    pub struct Poly {
        pub terms: HashMap<u64, i128>,
    }

    fn exponent(key: u64, j: usize) -> i128 {
        ((key >> (BITS * j as u32)) & 0xff) as i128
    }

    impl Poly {
        pub fn constant(c: i128) -> Self {
            let mut terms = HashMap::new();
            if c != 0 {
                terms.insert(0, c);
            }
            Poly { terms }
        }

        fn var(j: usize) -> u64 {
            1u64 << (BITS * j as u32)
        }

        pub fn add_assign_scaled(&mut self, other: &Poly, c: i128) {
            for (k, v) in &other.terms {
                let e = self.terms.entry(*k).or_insert(0);
                *e += v * c;
                if *e == 0 {
                    self.terms.remove(k);
                }
            }
        }

        pub fn mul(&self, other: &Poly) -> Poly {
            let mut out = Poly::default();
            for (a, x) in &self.terms {
                for (b, y) in &other.terms {
                    *out.terms.entry(a + b).or_insert(0) += x * y;
                }
            }
            out.terms.retain(|_, v| *v != 0);
            out
        }

        /// x_j ∂_j.
        pub fn euler(&self, j: usize) -> Poly {
            let mut out = Poly::default();
            for (k, v) in &self.terms {
                let e = exponent(*k, j);
                if e != 0 {
                    out.terms.insert(*k, v * e);
                }
            }
            out
        }

        pub fn euler_pow(&self, j: usize, times: u32) -> Poly {
            (0..times).fold(self.clone(), |p, _| p.euler(j))
        }

        pub fn scaled(&self, c: i128) -> Poly {
            let mut out = Poly::default();
            out.add_assign_scaled(self, c);
            out
        }
    }

    /// Π_{i<j}(x_i − x_j).
    pub fn vandermonde(n_vars: usize) -> Poly {
        let mut acc = Poly::constant(1);
        for i in 0..n_vars {
            for j in i + 1..n_vars {
                let mut f = Poly::default();
                f.terms.insert(Poly::var(i), 1);
                f.terms.insert(Poly::var(j), -1);
                acc = acc.mul(&f);
            }
        }
        acc
    }

    pub fn power_sum(lambda: &Partition, n_vars: usize) -> Poly {
        lambda.parts().iter().fold(Poly::constant(1), |acc, &r| {
            let mut p = Poly::default();
            for j in 0..n_vars {
                p.terms.insert(Poly::var(j) * r as u64, 1);
            }
            acc.mul(&p)
        })
    }

    /// m_μ in N variables: every distinct arrangement of the parts.
    pub fn monomial(mu: &Partition, n_vars: usize) -> Poly {
        let mut exps: Vec<u32> = mu.parts().to_vec();
        exps.resize(n_vars.max(exps.len()), 0);
        exps.sort_unstable();
        let mut out = Poly::default();
        loop {
            let key = exps.iter().enumerate().fold(0u64, |k, (j, &e)| k + ((e as u64) << (BITS * j as u32)));
            out.terms.insert(key, 1);
            if !next_permutation(&mut exps) {
                return out;
            }
        }
    }

    fn next_permutation(v: &mut [u32]) -> bool {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return false;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }

    /// Clears denominators of a power-sum expansion: returns (D, D·f as a polynomial).
    pub fn expansion_poly(f: &SymExpansion, n_vars: usize) -> Result<(i128, Poly)> {
        let f = convert(f, Basis::PowerSum)?;
        let den = f.coeffs().values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let d = den.to_i128().ok_or_else(|| Error::NumericInstability("denominator overflow".into()))?;
        let mut out = Poly::default();
        for (lam, c) in f.coeffs() {
            let k = (c * Rat::from_integer(den.clone())).to_integer();
            let k = k.to_i128().ok_or_else(|| Error::NumericInstability("coefficient overflow".into()))?;
            out.add_assign_scaled(&power_sum(lam, n_vars), k);
        }
        Ok((d, out))
    }

    /// a_δ·(D f) for the single D(λ,μ;h) operators, computed literally.
    fn vandermonde_times_atom(kind: OpKind, a: &Poly, f: &Poly, n_vars: usize) -> Result<Poly> {
        let (l, m, h) = match kind {
            OpKind::D110 => (1, 1, 0),
            OpKind::D120 => (1, 2, 0),
            OpKind::D210 => (2, 1, 0),
            OpKind::D002 => (0, 0, 2),
            OpKind::D003 => (0, 0, 3),
            _ => return invalid("not a single D(λ,μ;h) operator"),
        };
        let mut out = Poly::default();
        for j in 0..n_vars {
            if h > 0 {
                out.add_assign_scaled(&a.mul(&f.euler_pow(j, h)), 1);
            } else {
                out.add_assign_scaled(&a.euler_pow(j, l).mul(&f.euler_pow(j, m)), 1);
            }
        }
        Ok(out)
    }

    /// q^k·a_δ·(D_θ^k f) for θ = p/q, from the generating function: the sum
    /// over k-subsets S of Π_{j∈S}(A_j + θF_j) applied to a_δ ⊗ f, where A_j
    /// differentiates the Vandermonde factor and F_j the operand.
    fn vandermonde_times_dtheta(k: usize, p: i128, q: i128, a: &Poly, f: &Poly, n_vars: usize) -> Poly {
        let mut out = Poly::default();
        let subsets = (0u32..1 << n_vars).filter(|s| s.count_ones() as usize == k);
        for s in subsets {
            let idx: Vec<usize> = (0..n_vars).filter(|j| s >> j & 1 == 1).collect();
            for t in 0u32..1 << k {
                let (mut pa, mut pf) = (a.clone(), f.clone());
                let mut on_f = 0;
                for (b, &j) in idx.iter().enumerate() {
                    if t >> b & 1 == 1 {
                        pf = pf.euler(j);
                        on_f += 1;
                    } else {
                        pa = pa.euler(j);
                    }
                }
                let w = p.pow(on_f) * q.pow((k - on_f as usize) as u32);
                out.add_assign_scaled(&pa.mul(&pf), w);
            }
        }
        out
    }

    /// Compares the closed-form action on p_λ with literal differentiation
    /// in N variables. Supports the five D(λ,μ;h) operators and D_θ², D_θ³.
    pub fn check(op: &OperatorSpec, lambda: &Partition) -> Result<bool> {
        let nv = op.n_vars as usize;
        if nv > 8 {
            return invalid("the oracle handles at most eight variables");
        }
        let a = vandermonde(nv);
        let f = power_sum(lambda, nv);
        let image = apply_to_power_sum(op, lambda)?;
        let (den, img) = expansion_poly(&image, nv)?;
        let lhs = a.mul(&img);
        let rhs = match op.kind {
            OpKind::Dtheta2 | OpKind::Dtheta3 => {
                let k = if op.kind == OpKind::Dtheta2 { 2 } else { 3 };
                let p = op.theta.numer().to_i128().unwrap();
                let q = op.theta.denom().to_i128().unwrap();
                // lhs carries den; rhs carries q^k.
                let raw = vandermonde_times_dtheta(k, p, q, &a, &f, nv);
                return Ok(lhs.scaled(q.pow(k as u32)) == raw.scaled(den));
            }
            OpKind::LB2 => return invalid("the normalized operator is checked through its parts"),
            kind => vandermonde_times_atom(kind, &a, &f, nv)?,
        };
        Ok(lhs == rhs.scaled(den))
    }
}

/// Convenience for the e/h fixtures: expansion from (parts, coefficient) pairs.
pub fn expansion(basis: Basis, degree: u32, terms: &[(&[u32], i64)]) -> Result<SymExpansion> {
    SymExpansion::from_terms(
        basis,
        degree,
        terms.iter().map(|(p, c)| (Partition::from_multiset(p.to_vec()), rat(*c, 1))),
    )
}
