//! Integer partitions: enumeration in canonical order, conjugation and the
//! scalar statistics used by the eigenvalue and hook formulas.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{invalid, Error, Result};
use crate::rational::{factorial, Rat};

/// A weakly decreasing sequence of positive parts.
///
/// `Ord` is the canonical order: descending lexicographic on the parts, so
/// `(3) < (2,1) < (1,1,1)`. It refines dominance with larger shapes first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

/// A cell of a Ferrers diagram, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: u32,
    pub col: u32,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return invalid("partition parts must be positive");
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid("partition parts must be weakly decreasing");
        }
        Ok(Partition { parts })
    }

    /// Sorts and drops zeros, so any multiset of part sizes is accepted.
    pub fn from_multiset(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn row(n: u32) -> Self {
        Partition { parts: vec![n] }
    }

    pub fn column(n: u32) -> Self {
        Partition { parts: vec![1; n as usize] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Number of parts equal to `i`.
    pub fn multiplicity(&self, i: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == i).count() as u32
    }

    /// Pairs `(part, multiplicity)` with parts in decreasing order.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        let parts = (1..=first)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// n(λ) = Σ (i−1)·λ_i.
    pub fn n_stat(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    /// n(λ) computed from columns as Σ binom(λ'_j, 2).
    pub fn n_stat_by_columns(&self) -> u64 {
        self.conjugate()
            .parts
            .iter()
            .map(|&c| c as u64 * (c as u64).saturating_sub(1) / 2)
            .sum()
    }

    /// Σ_k binom(λ_k, 2); this is n(λ').
    pub fn pair_count(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64 * (p as u64 - 1) / 2).sum()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.row >= 1 && cell.col >= 1 && self.part(cell.row as usize - 1) >= cell.col
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| {
            (1..=p).map(move |j| Cell { row: i as u32 + 1, col: j })
        })
    }

    /// Arm a = λ_i − j and leg ℓ = λ'_j − i for every cell.
    pub fn hooks(&self) -> Vec<(Cell, u32, u32)> {
        let conj = self.conjugate();
        self.cells()
            .map(|c| {
                let arm = self.parts[c.row as usize - 1] - c.col;
                let leg = conj.parts[c.col as usize - 1] - c.row;
                (c, arm, leg)
            })
            .collect()
    }

    pub fn hook_product(&self) -> BigInt {
        self.hooks()
            .into_iter()
            .fold(BigInt::one(), |acc, (_, a, l)| acc * BigInt::from(a + l + 1))
    }

    /// z_ρ = Π_i i^{m_i} m_i!.
    pub fn z_stat(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .fold(BigInt::one(), |acc, (i, m)| {
                acc * num_traits::pow(BigInt::from(i), m as usize) * factorial(m as u64)
            })
    }

    /// Smallest u ≥ 1 with cell (u, ⌊u/θ⌋ + 1) outside the diagram.
    pub fn theta_durfee_height(&self, theta: &Rat) -> Result<u32> {
        if *theta <= Rat::from_integer(0.into()) {
            return invalid("theta must be positive");
        }
        let mut u: u32 = 1;
        loop {
            let q = Rat::from_integer(u.into()) / theta;
            let col = q.floor().to_integer();
            let col: u32 = (col + 1u32).try_into().unwrap_or(u32::MAX);
            if !self.contains(Cell { row: u, col }) {
                return Ok(u);
            }
            u += 1;
        }
    }

    /// Partial-sum comparison; true when λ ≤ μ in dominance order.
    pub fn dominance_leq(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return invalid("dominance compares partitions of equal weight");
        }
        let len = self.len().max(other.len());
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..len {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Merges the parts at positions `i != j`.
    pub fn merge(&self, i: usize, j: usize) -> Partition {
        let mut parts: Vec<u32> = self
            .parts
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, &p)| p)
            .collect();
        parts.push(self.parts[i] + self.parts[j]);
        Partition::from_multiset(parts)
    }

    /// Splits the part at position `k` into `r` and `λ_k − r`.
    pub fn split(&self, k: usize, r: u32) -> Partition {
        let mut parts = self.parts.clone();
        let whole = parts.remove(k);
        parts.push(r);
        parts.push(whole - r);
        Partition::from_multiset(parts)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts "[3,1,1]" with optional whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("partition must be bracketed: {s:?}")))?;
        if inner.trim().is_empty() {
            return Err(Error::Parse("empty partition".into()));
        }
        let parts = inner
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad partition: {s:?}")))?;
        Partition::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl serde::Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Every partition of `n`, in canonical order.
pub fn enumerate_partitions(n: u32) -> Result<Vec<Partition>> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, &mut cur, &mut out);
    debug_assert!(is_dominance_extension(&out));
    Ok(out)
}

fn fill(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

/// Partitions of `n` whose first part is at least `min_first`, canonical order.
pub fn partitions_with_first_at_least(n: u32, min_first: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for first in (min_first.max(1)..=n).rev() {
        cur.push(first);
        fill(n - first, first, &mut cur, &mut out);
        cur.pop();
    }
    out
}

/// Number of partitions of each k ≤ n, as floats (exact for small n).
pub fn partition_counts(n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    for part in 1..=n {
        for k in part..=n {
            p[k] += p[k - part];
        }
    }
    p
}

/// No later partition strictly dominates an earlier one.
pub fn is_dominance_extension(ps: &[Partition]) -> bool {
    for (i, a) in ps.iter().enumerate() {
        for b in &ps[i + 1..] {
            if a != b && a.dominance_leq(b).unwrap_or(false) {
                return false;
            }
        }
    }
    true
}

/// Dense index over the partitions of `n`.
#[derive(Clone, Debug)]
pub struct PartitionSet {
    n: u32,
    list: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl PartitionSet {
    pub fn new(n: u32) -> Result<Self> {
        let list = enumerate_partitions(n)?;
        let index = list.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(PartitionSet { n, list, index })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn list(&self) -> &[Partition] {
        &self.list
    }

    pub fn get(&self, i: usize) -> &Partition {
        &self.list[i]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Partition> {
        self.list.iter()
    }
}
