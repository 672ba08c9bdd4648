//! Jack polynomials in the power-sum basis, their norms, and the closed forms
//! that the transition coefficients satisfy.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::partitions::{Partition, PartitionSet};
use crate::rational::{fmt_rat, from_big, int, pow, to_f64, Rat};
use crate::symfunc::{convert, partition_set, Basis, SymExpansion};

/// Coefficients c[λ][ρ] of J_λ on p_ρ together with the norms j_λ = ⟨J_λ, J_λ⟩_θ.
#[derive(Clone, Debug)]
pub struct JackTable {
    n: u32,
    theta: Rat,
    set: Arc<PartitionSet>,
    c: Vec<Vec<Rat>>,
    j: Vec<Rat>,
}

impl JackTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn theta(&self) -> &Rat {
        &self.theta
    }

    pub fn partitions(&self) -> &PartitionSet {
        &self.set
    }

    pub fn idx(&self, p: &Partition) -> usize {
        self.set
            .index_of(p)
            .unwrap_or_else(|| panic!("{p} is not a partition of {}", self.n))
    }

    pub fn c(&self, lambda: &Partition, rho: &Partition) -> &Rat {
        &self.c[self.idx(lambda)][self.idx(rho)]
    }

    pub fn c_at(&self, i: usize, k: usize) -> &Rat {
        &self.c[i][k]
    }

    pub fn c_row(&self, i: usize) -> &[Rat] {
        &self.c[i]
    }

    pub fn j(&self, lambda: &Partition) -> &Rat {
        &self.j[self.idx(lambda)]
    }

    pub fn j_at(&self, i: usize) -> &Rat {
        &self.j[i]
    }

    /// J_λ as a power-sum expansion.
    pub fn expansion(&self, lambda: &Partition) -> SymExpansion {
        let i = self.idx(lambda);
        let terms = self
            .set
            .iter()
            .zip(&self.c[i])
            .map(|(p, c)| (p.clone(), c.clone()));
        SymExpansion::from_terms(Basis::PowerSum, self.n, terms).unwrap()
    }

    /// Table as JSON; `emit` is one of "c", "d", "j".
    pub fn to_json(&self, emit: &str) -> Result<Value> {
        let mut rows = Map::new();
        for (i, lam) in self.set.iter().enumerate() {
            match emit {
                "j" => {
                    rows.insert(lam.to_string(), Value::String(fmt_rat(&self.j[i])));
                }
                "c" | "d" => {
                    let mut row = Map::new();
                    for (k, rho) in self.set.iter().enumerate() {
                        let v = if emit == "c" { self.c[i][k].clone() } else { d_coeff(lam, rho, self) };
                        row.insert(rho.to_string(), Value::String(fmt_rat(&v)));
                    }
                    rows.insert(lam.to_string(), Value::Object(row));
                }
                _ => return invalid(format!("unknown table kind {emit:?}")),
            }
        }
        Ok(json!({"n": self.n, "theta": fmt_rat(&self.theta), "kind": emit, "table": rows}))
    }
}

/// Builds every J_λ, λ ⊢ n, by Gram–Schmidt on the monomials, smallest shape
/// first, then rescales so that the coefficient of p_{1^n} is 1.
pub fn jack_table(n: u32, theta: &Rat) -> Result<JackTable> {
    if !theta.is_positive() {
        return invalid("theta must be positive");
    }
    let set = partition_set(n)?;
    let len = set.len();
    let weight: Vec<Rat> = set
        .iter()
        .map(|p| from_big(p.z_stat()) * pow(theta, p.len() as i64))
        .collect();
    let inner = |a: &[Rat], b: &[Rat]| -> Rat {
        let mut s = Rat::zero();
        for k in 0..len {
            if !a[k].is_zero() && !b[k].is_zero() {
                s += &a[k] * &b[k] * &weight[k];
            }
        }
        s
    };
    let mut c: Vec<Vec<Rat>> = vec![Vec::new(); len];
    let mut norms: Vec<Rat> = vec![Rat::zero(); len];
    for i in (0..len).rev() {
        let m = convert(&SymExpansion::basis_element(Basis::Monomial, set.get(i)), Basis::PowerSum)?;
        let mut v: Vec<Rat> = set.iter().map(|p| m.coeff(p)).collect();
        for k in i + 1..len {
            let proj = inner(&v, &c[k]);
            if proj.is_zero() {
                continue;
            }
            let f = proj / &norms[k];
            for (x, y) in v.iter_mut().zip(&c[k]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let nv = inner(&v, &v);
        if nv.is_zero() {
            return Err(Error::Invariant(format!("degenerate inner product at {}", set.get(i))));
        }
        c[i] = v;
        norms[i] = nv;
    }
    let last = len - 1;
    for row in c.iter_mut() {
        let s = row[last].clone();
        if s.is_zero() {
            return Err(Error::Invariant("Jack polynomial has no p_{1^n} term".into()));
        }
        for x in row.iter_mut() {
            *x = &*x / &s;
        }
    }
    let j = c.iter().map(|row| inner(row, row)).collect();
    Ok(JackTable { n, theta: theta.clone(), set, c, j })
}

/// j_λ = Π_cells (aθ + ℓ + 1)((a+1)θ + ℓ).
pub fn hook_pair_product(lambda: &Partition, theta: &Rat) -> Rat {
    lambda.hooks().into_iter().fold(Rat::one(), |acc, (_, a, l)| {
        let (a, l) = (int(a as i64), int(l as i64));
        let lower = &a * theta + &l + Rat::one();
        let upper = (&a + Rat::one()) * theta + &l;
        acc * lower * upper
    })
}

/// c_{λ,(2,1^{n-2})} = θ·n(λ') − n(λ).
pub fn c_two_cycle(lambda: &Partition, theta: &Rat) -> Result<Rat> {
    if lambda.size() < 2 {
        return invalid("needs n ≥ 2");
    }
    Ok(theta * int(lambda.pair_count() as i64) - int(lambda.n_stat() as i64))
}

/// c_{λ,(n)} = Π over cells other than (1,1) of [θ(j−1) − (i−1)].
pub fn c_n_cycle(lambda: &Partition, theta: &Rat) -> Rat {
    lambda
        .cells()
        .filter(|c| !(c.row == 1 && c.col == 1))
        .fold(Rat::one(), |acc, c| {
            acc * (theta * int(c.col as i64 - 1) - int(c.row as i64 - 1))
        })
}

/// d_{λ,ρ} = c_{λ,ρ}·z_ρ·θ^{−(n−ℓ(ρ))}/H_λ; equals χ_λ(ρ) at θ = 1.
pub fn d_coeff(lambda: &Partition, rho: &Partition, table: &JackTable) -> Rat {
    let n = table.n as i64;
    table.c(lambda, rho) * from_big(rho.z_stat()) * pow(&table.theta, -(n - rho.len() as i64))
        / from_big(lambda.hook_product())
}

/// J_λ(1^N) = Π_cells (N − (i−1) + θ(j−1)).
pub fn jack_at_ones(lambda: &Partition, big_n: u32, theta: &Rat) -> Rat {
    lambda.cells().fold(Rat::one(), |acc, c| {
        acc * (int(big_n as i64 - (c.row as i64 - 1)) + theta * int(c.col as i64 - 1))
    })
}

/// Symmetric-group characters by the Murnaghan–Nakayama rule, memoized.
#[derive(Default)]
pub struct Characters {
    memo: HashMap<(Vec<u32>, Vec<u32>), BigInt>,
}

impl Characters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn chi(&mut self, lambda: &Partition, rho: &Partition) -> Result<BigInt> {
        if lambda.size() != rho.size() {
            return invalid("character needs partitions of equal weight");
        }
        Ok(self.rec(lambda.parts().to_vec(), rho.parts()))
    }

    fn rec(&mut self, lam: Vec<u32>, rho: &[u32]) -> BigInt {
        if rho.is_empty() {
            return BigInt::one();
        }
        let key = (lam.clone(), rho.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let r = rho[0];
        let len = lam.len();
        // Beta-set of first-column hook lengths; a border strip of size r
        // moves one bead r places down.
        let beta: Vec<u32> = lam.iter().enumerate().map(|(i, &p)| p + (len - 1 - i) as u32).collect();
        let mut total = BigInt::zero();
        for &b in &beta {
            if b < r || beta.contains(&(b - r)) {
                continue;
            }
            let nb = b - r;
            let height = beta.iter().filter(|&&x| x > nb && x < b).count();
            let mut next: Vec<u32> = beta.iter().map(|&x| if x == b { nb } else { x }).collect();
            next.sort_unstable_by(|a, b| b.cmp(a));
            let k = next.len();
            let shape: Vec<u32> = next
                .iter()
                .enumerate()
                .map(|(i, &x)| x - (k - 1 - i) as u32)
                .filter(|&p| p > 0)
                .collect();
            let v = self.rec(shape, &rho[1..]);
            if height % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

pub fn character(lambda: &Partition, rho: &Partition) -> Result<BigInt> {
    Characters::new().chi(lambda, rho)
}

/// χ_λ as a combination of cycle-count products: the function indexed by
/// μ = (n−|ν|, ν) is Π_{parts ν_i} m_{ν_i}(ρ).
pub fn chi_to_m(lambda: &Partition, k: u32) -> Result<Vec<(Partition, Rat)>> {
    let n = lambda.size();
    if k > n / 2 {
        return invalid("k must be at most n/2");
    }
    if lambda.part(0) + k < n {
        return invalid(format!("{lambda} has first part below n − k"));
    }
    let set = partition_set(n)?;
    let basis: Vec<Partition> = set.iter().filter(|mu| mu.part(0) + k >= n).cloned().collect();
    let eval = |mu: &Partition, rho: &Partition| -> Rat {
        mu.parts()[1..]
            .iter()
            .fold(Rat::one(), |acc, &q| acc * int(rho.multiplicity(q) as i64))
    };
    let mut chars = Characters::new();
    let mut a = Vec::with_capacity(set.len());
    let mut b = Vec::with_capacity(set.len());
    for rho in set.iter() {
        a.push(basis.iter().map(|mu| eval(mu, rho)).collect());
        b.push(from_big(chars.chi(lambda, rho)?));
    }
    let x = linalg::solve(&a, &b).map_err(|e| {
        Error::Invariant(format!("character of {lambda} is not in the cycle-count span: {e}"))
    })?;
    Ok(basis.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).collect())
}

/// Coefficients on (1, m₁, m₁², m₂) of d_λ for the three shapes (n−1,1),
/// (n−2,1,1) and (n−2,2). The last one is read off the character form of
/// c_{(n−2,2),ρ}, including its constant term.
pub fn d_low_shapes(n: u32, theta: &Rat) -> Result<[[Rat; 4]; 3]> {
    if n < 4 {
        return invalid("needs n ≥ 4");
    }
    let t = theta.recip();
    let nn = int(n as i64);
    let one = Rat::one();
    let z = Rat::zero();
    let a1 = (&one + (&nn - &one) * theta) / (theta * &nn);
    let d1 = [-t.clone(), a1.clone(), z.clone(), z.clone()];
    let b = (int(2) + (&nn - int(2)) * theta) / (int(2) * theta * &nn);
    let d2 = [
        &t * &t,
        -(&a1 / theta + &b),
        b.clone(),
        -(int(2) * &b / theta),
    ];
    let q = (&nn - int(2) + &t) / ((&nn - &one) * (&nn - int(2)));
    let r = &q * (&nn - int(3) + &t);
    let k = -(&t * (&one - &t) * &nn * (&nn - int(3))) / (int(2) * (&nn - &one) * (&nn - int(2)));
    let d3 = [
        k,
        &q * ((&nn - int(3)) * (&one - &t) - int(3) * (&nn - int(3) + &t) / int(2)),
        &r / int(2),
        r,
    ];
    Ok([d1, d2, d3])
}

/// The d_{(n−2,2)} display exactly as printed, without a constant term.
pub fn d_n22_as_printed(n: u32, theta: &Rat) -> Result<[Rat; 4]> {
    let mut d = d_low_shapes(n, theta)?[2].clone();
    d[0] = Rat::zero();
    Ok(d)
}

/// Evaluates a (1, m₁, m₁², m₂) coefficient vector at ρ.
pub fn eval_low(coeffs: &[Rat; 4], rho: &Partition) -> Rat {
    let m1 = int(rho.multiplicity(1) as i64);
    let m2 = int(rho.multiplicity(2) as i64);
    &coeffs[0] + &coeffs[1] * &m1 + &coeffs[2] * &m1 * &m1 + &coeffs[3] * &m2
}

/// Floating-point check of j_λ ≥ λ₁!²θ^{2λ₁−1}λ₁^{1/θ−1}e^{−π²/12θ²}·j_{(λ₂,…)}.
pub fn j_split_bound_holds(lambda: &Partition, theta: &Rat) -> bool {
    let th = to_f64(theta);
    let s = lambda.part(0) as f64;
    let rest = Partition::from_multiset(lambda.parts()[1..].to_vec());
    let lhs = ln_pos(&hook_pair_product(lambda, theta));
    let rhs_rest = if rest.is_empty() { 0.0 } else { ln_pos(&hook_pair_product(&rest, theta)) };
    let rhs = 2.0 * ln_fact(lambda.part(0))
        + (2.0 * s - 1.0) * th.ln()
        + (1.0 / th - 1.0) * s.ln()
        - std::f64::consts::PI.powi(2) / (12.0 * th * th)
        + rhs_rest;
    lhs >= rhs - 1e-9 * rhs.abs().max(1.0)
}

/// Floating-point check of the c_{λ,(n)}²/j_λ bound; `transpose` selects the
/// column version, indexed by s = λ'₁.
pub fn cj_bound_holds(lambda: &Partition, theta: &Rat, transpose: bool) -> bool {
    let c = c_n_cycle(lambda, theta);
    if c.is_zero() {
        return true;
    }
    let th = to_f64(theta);
    let n = lambda.size() as f64;
    let lhs = 2.0 * ln_pos(&c.abs()) - ln_pos(&hook_pair_product(lambda, theta));
    let c1 = th.sqrt() + 1.0 / th.sqrt();
    let c2 = 1.0 + 1.0 / th;
    let pi2 = std::f64::consts::PI.powi(2);
    let (s, denom) = if transpose {
        let s = lambda.conjugate().part(0) as f64;
        if s <= 1.0 {
            return true;
        }
        (s, (th * (-pi2 * th / 12.0).exp()).ln() + (1.0 + th) * (s - 1.0).ln())
    } else {
        let s = lambda.part(0) as f64;
        (s, (th * (-pi2 / (12.0 * th)).exp()).ln() + (1.0 + 1.0 / th) * s.ln())
    };
    let rhs = (c1 * (n - s).sqrt() + c2) * (n - s + 1.0).ln() - denom;
    lhs <= rhs + 1e-9 * rhs.abs().max(1.0)
}

fn ln_pos(r: &Rat) -> f64 {
    crate::rational::ln_abs(r)
}

fn ln_fact(k: u32) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn degree_two_table() {
        let t = rat(5, 3);
        let tab = jack_table(2, &t).unwrap();
        assert_eq!(*tab.c(&p(&[2]), &p(&[1, 1])), int(1));
        assert_eq!(*tab.c(&p(&[2]), &p(&[2])), t.clone());
        assert_eq!(*tab.c(&p(&[1, 1]), &p(&[1, 1])), int(1));
        assert_eq!(*tab.c(&p(&[1, 1]), &p(&[2])), int(-1));
        let want = int(2) * &t * &t * (int(1) + &t);
        assert_eq!(*tab.j(&p(&[2])), want);
        assert!(jack_table(2, &int(0)).is_err());
    }

    #[test]
    fn hook_pairs() {
        let t = rat(2, 7);
        assert_eq!(hook_pair_product(&p(&[1]), &t), t.clone());
        assert_eq!(hook_pair_product(&p(&[2]), &t), int(2) * &t * &t * (&t + int(1)));
        let h = from_big(p(&[3, 2]).hook_product());
        assert_eq!(hook_pair_product(&p(&[3, 2]), &int(1)), &h * &h);
    }

    #[test]
    fn cycle_closed_forms() {
        let t = rat(3, 2);
        assert_eq!(c_two_cycle(&p(&[2]), &t).unwrap(), t.clone());
        assert_eq!(c_two_cycle(&p(&[1, 1]), &t).unwrap(), int(-1));
        assert_eq!(c_two_cycle(&p(&[2, 1]), &t).unwrap(), &t - int(1));
        assert!(c_two_cycle(&p(&[1]), &t).is_err());
        assert_eq!(c_n_cycle(&p(&[4]), &t), pow(&t, 3) * int(6));
        assert_eq!(c_n_cycle(&p(&[2, 2]), &int(1)), int(0));
        assert_eq!(c_n_cycle(&p(&[3, 1, 1]), &int(1)), int(2 * 2));
    }

    #[test]
    fn ones_evaluation() {
        assert_eq!(jack_at_ones(&p(&[1]), 3, &rat(1, 2)), int(3));
        assert_eq!(jack_at_ones(&p(&[2, 1]), 3, &int(1)), int(24));
        let t = rat(4, 9);
        assert_eq!(jack_at_ones(&p(&[2]), 2, &t), int(2) * (int(2) + &t));
    }

    #[test]
    fn small_characters() {
        let mut ch = Characters::new();
        assert_eq!(ch.chi(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), BigInt::from(2));
        assert_eq!(ch.chi(&p(&[2, 1]), &p(&[3])).unwrap(), BigInt::from(-1));
        assert_eq!(ch.chi(&p(&[2, 2]), &p(&[2, 2])).unwrap(), BigInt::from(2));
        assert_eq!(ch.chi(&p(&[3, 1, 1]), &p(&[5])).unwrap(), BigInt::from(1));
        assert!(ch.chi(&p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn chi_in_cycle_counts() {
        let n = 7;
        let r = chi_to_m(&Partition::row(n), 2).unwrap();
        assert_eq!(r, vec![(Partition::row(n), int(1))]);
        let r = chi_to_m(&p(&[6, 1]), 2).unwrap();
        assert_eq!(r, vec![(p(&[7]), int(-1)), (p(&[6, 1]), int(1))]);
        let r = chi_to_m(&p(&[5, 1, 1]), 2).unwrap();
        let want = vec![
            (p(&[7]), int(1)),
            (p(&[6, 1]), rat(-3, 2)),
            (p(&[5, 2]), int(-1)),
            (p(&[5, 1, 1]), rat(1, 2)),
        ];
        assert_eq!(r, want);
        assert!(chi_to_m(&p(&[4, 3]), 2).is_err());
    }
}
