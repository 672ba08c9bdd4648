//! Homogeneous symmetric functions over exact rationals in the monomial,
//! power-sum, elementary and complete bases.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{invalid, Error, Result};
use crate::partitions::{enumerate_partitions, Partition, PartitionSet};
use crate::rational::{fmt_rat, from_big, parse_rat, pow, Rat};

/// Largest degree the exact conversions accept.
pub const DEFAULT_DEGREE_CAP: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Monomial,
    PowerSum,
    Elementary,
    Complete,
}

impl Basis {
    pub fn tag(self) -> &'static str {
        match self {
            Basis::Monomial => "m",
            Basis::PowerSum => "p",
            Basis::Elementary => "e",
            Basis::Complete => "h",
        }
    }

    pub fn from_tag(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(Basis::Monomial),
            "p" => Ok(Basis::PowerSum),
            "e" => Ok(Basis::Elementary),
            "h" => Ok(Basis::Complete),
            _ => Err(Error::Parse(format!("unknown basis tag {s:?}"))),
        }
    }

    fn multiplicative(self) -> bool {
        self != Basis::Monomial
    }
}

/// A homogeneous symmetric function written in one basis.
#[derive(Clone, PartialEq, Eq)]
pub struct SymExpansion {
    basis: Basis,
    degree: u32,
    coeffs: BTreeMap<Partition, Rat>,
}

impl SymExpansion {
    pub fn zero(basis: Basis, degree: u32) -> Self {
        SymExpansion { basis, degree, coeffs: BTreeMap::new() }
    }

    /// A single basis element.
    pub fn basis_element(basis: Basis, lambda: &Partition) -> Self {
        let mut f = Self::zero(basis, lambda.size());
        f.coeffs.insert(lambda.clone(), Rat::one());
        f
    }

    pub fn from_terms(
        basis: Basis,
        degree: u32,
        terms: impl IntoIterator<Item = (Partition, Rat)>,
    ) -> Result<Self> {
        let mut f = Self::zero(basis, degree);
        for (p, c) in terms {
            f.add_term(p, c)?;
        }
        Ok(f)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, Rat> {
        &self.coeffs
    }

    pub fn coeff(&self, p: &Partition) -> Rat {
        self.coeffs.get(p).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, p: Partition, c: Rat) -> Result<()> {
        if p.size() != self.degree {
            return invalid(format!("{p} is not a partition of {}", self.degree));
        }
        if c.is_zero() {
            return Ok(());
        }
        let slot = self.coeffs.entry(p).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = Self::zero(self.basis, self.degree);
        if s.is_zero() {
            return out;
        }
        out.coeffs = self.coeffs.iter().map(|(p, c)| (p.clone(), c * s)).collect();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (p, c) in &other.coeffs {
            out.add_term(p.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rat::one()))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return invalid("expansions are in different bases");
        }
        if self.degree != other.degree {
            return invalid("expansions have different degrees");
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut coeffs = Map::new();
        for (p, c) in &self.coeffs {
            coeffs.insert(p.to_string(), Value::String(fmt_rat(c)));
        }
        json!({"basis": self.basis.tag(), "degree": self.degree, "coeffs": coeffs})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("expansion JSON: {m}"));
        let basis = Basis::from_tag(v["basis"].as_str().ok_or_else(|| bad("missing basis"))?)?;
        let degree = v["degree"].as_u64().ok_or_else(|| bad("missing degree"))? as u32;
        let obj = v["coeffs"].as_object().ok_or_else(|| bad("missing coeffs"))?;
        let mut f = Self::zero(basis, degree);
        for (k, c) in obj {
            let p: Partition = k.parse()?;
            let c = match c {
                Value::String(s) => parse_rat(s)?,
                Value::Number(x) if x.is_i64() => Rat::from_integer(x.as_i64().unwrap().into()),
                _ => return Err(bad("coefficients must be rational strings")),
            };
            f.add_term(p, c)?;
        }
        Ok(f)
    }
}

impl fmt::Debug for SymExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.basis.tag())?;
        for (i, (p, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}){}", fmt_rat(c), p)?;
        }
        write!(f, "]")
    }
}

/// Sparse columns: `cols[i]` expands basis element `i` in the target basis.
type Columns = Vec<Vec<(usize, Rat)>>;

struct Transition {
    to_p: Columns,
    from_p: Columns,
}

type Cache = Mutex<HashMap<(Basis, u32), Arc<Transition>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared partition index per degree.
pub fn partition_set(n: u32) -> Result<Arc<PartitionSet>> {
    static S: OnceLock<Mutex<HashMap<u32, Arc<PartitionSet>>>> = OnceLock::new();
    let m = S.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = m.lock().unwrap().get(&n) {
        return Ok(s.clone());
    }
    let s = Arc::new(PartitionSet::new(n)?);
    m.lock().unwrap().insert(n, s.clone());
    Ok(s)
}

fn transition(basis: Basis, n: u32) -> Result<Arc<Transition>> {
    if let Some(t) = cache().lock().unwrap().get(&(basis, n)) {
        return Ok(t.clone());
    }
    let set = partition_set(n)?;
    let (to_p, from_p) = match basis {
        Basis::PowerSum => {
            let id: Columns = (0..set.len()).map(|i| vec![(i, Rat::one())]).collect();
            (id.clone(), id)
        }
        Basis::Monomial => {
            let p_in_m = p_to_m_columns(&set);
            let m_in_p = invert_triangular(&p_in_m)?;
            (m_in_p, p_in_m)
        }
        Basis::Elementary | Basis::Complete => {
            let signed = basis == Basis::Elementary;
            let x_in_p: Columns = set
                .iter()
                .map(|lam| product_in_p(lam, signed, &set))
                .collect();
            let p_in_x = invert_triangular(&x_in_p)?;
            (x_in_p, p_in_x)
        }
    };
    let t = Arc::new(Transition { to_p, from_p });
    cache().lock().unwrap().insert((basis, n), t.clone());
    Ok(t)
}

/// Coefficient of m_λ in p_ρ: the number of ways to distribute the parts of ρ
/// into ℓ(λ) labelled boxes with box sums λ.
fn p_to_m_columns(set: &PartitionSet) -> Columns {
    set.iter()
        .map(|rho| {
            let mut col = Vec::new();
            for (i, lam) in set.iter().enumerate() {
                if lam.len() > rho.len() || !rho.dominance_leq(lam).unwrap() {
                    continue;
                }
                let mut memo = HashMap::new();
                let c = count_fillings(rho.parts(), 0, lam.parts().to_vec(), &mut memo);
                if !c.is_zero() {
                    col.push((i, from_big(c)));
                }
            }
            col
        })
        .collect()
}

fn count_fillings(
    parts: &[u32],
    k: usize,
    room: Vec<u32>,
    memo: &mut HashMap<(usize, Vec<u32>), BigInt>,
) -> BigInt {
    if k == parts.len() {
        return if room.iter().all(|&r| r == 0) { BigInt::one() } else { BigInt::zero() };
    }
    if let Some(v) = memo.get(&(k, room.clone())) {
        return v.clone();
    }
    let mut total = BigInt::zero();
    for j in 0..room.len() {
        if room[j] >= parts[k] {
            let mut next = room.clone();
            next[j] -= parts[k];
            total += count_fillings(parts, k + 1, next, memo);
        }
    }
    memo.insert((k, room), total.clone());
    total
}

/// e_λ (signed) or h_λ as a p-expansion, using e_r = Σ ε_ρ p_ρ/z_ρ and h_r = Σ p_ρ/z_ρ.
fn product_in_p(lam: &Partition, signed: bool, set: &PartitionSet) -> Vec<(usize, Rat)> {
    let mut acc: BTreeMap<Partition, Rat> = BTreeMap::new();
    acc.insert(Partition::from_multiset(vec![]), Rat::one());
    for &r in lam.parts() {
        let gens = enumerate_partitions(r).unwrap();
        let mut next: BTreeMap<Partition, Rat> = BTreeMap::new();
        for (p, c) in &acc {
            for rho in &gens {
                let mut w = Rat::new(BigInt::one(), rho.z_stat());
                if signed && (r as usize - rho.len()) % 2 == 1 {
                    w = -w;
                }
                let mut parts = p.parts().to_vec();
                parts.extend_from_slice(rho.parts());
                *next.entry(Partition::from_multiset(parts)).or_insert_with(Rat::zero) += c * w;
            }
        }
        acc = next;
    }
    let mut col: Vec<(usize, Rat)> = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| (set.index_of(&p).unwrap(), c))
        .collect();
    col.sort_by_key(|(i, _)| *i);
    col
}

/// Inverts a triangular change of basis given by sparse columns.
fn invert_triangular(cols: &Columns) -> Result<Columns> {
    let n = cols.len();
    let mut a = vec![vec![Rat::zero(); n]; n];
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            a[*i][j] = c.clone();
        }
    }
    let upper = (0..n).all(|j| (j + 1..n).all(|i| a[i][j].is_zero()));
    let lower = (0..n).all(|j| (0..j).all(|i| a[i][j].is_zero()));
    if !upper && !lower {
        return Err(Error::Invariant("change of basis is not triangular".into()));
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut b = vec![Rat::zero(); n];
        let order: Vec<usize> = if upper { (0..=j).rev().collect() } else { (j..n).collect() };
        for &i in &order {
            let mut s = if i == j { Rat::one() } else { Rat::zero() };
            let range: Vec<usize> = if upper { (i + 1..=j).collect() } else { (j..i).collect() };
            for k in range {
                if !a[i][k].is_zero() && !b[k].is_zero() {
                    s -= &a[i][k] * &b[k];
                }
            }
            if a[i][i].is_zero() {
                return Err(Error::Singular("zero pivot in basis change".into()));
            }
            b[i] = s / &a[i][i];
        }
        out.push(b.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
    }
    Ok(out)
}

fn check_degree(n: u32) -> Result<()> {
    if n > DEFAULT_DEGREE_CAP {
        return invalid(format!("degree {n} exceeds the exact-mode cap {DEFAULT_DEGREE_CAP}"));
    }
    Ok(())
}

/// Rewrites `f` in the target basis.
pub fn convert(f: &SymExpansion, target: Basis) -> Result<SymExpansion> {
    if f.basis == target {
        return Ok(f.clone());
    }
    check_degree(f.degree)?;
    let set = partition_set(f.degree)?;
    let mut dense = vec![Rat::zero(); set.len()];
    let src = transition(f.basis, f.degree)?;
    for (lam, c) in &f.coeffs {
        let j = set.index_of(lam).unwrap();
        for (i, a) in &src.to_p[j] {
            dense[*i] += c * a;
        }
    }
    let dst = transition(target, f.degree)?;
    let mut out = SymExpansion::zero(target, f.degree);
    let mut acc = vec![Rat::zero(); set.len()];
    for (j, c) in dense.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (i, a) in &dst.from_p[j] {
            acc[*i] += c * a;
        }
    }
    for (i, c) in acc.into_iter().enumerate() {
        if !c.is_zero() {
            out.coeffs.insert(set.get(i).clone(), c);
        }
    }
    Ok(out)
}

/// Product of two expansions; monomial inputs are multiplied through the power sums.
pub fn multiply(f: &SymExpansion, g: &SymExpansion) -> Result<SymExpansion> {
    if f.basis != g.basis {
        return invalid("multiply needs both factors in the same basis");
    }
    let degree = f.degree + g.degree;
    check_degree(degree)?;
    if !f.basis.multiplicative() {
        let fp = convert(f, Basis::PowerSum)?;
        let gp = convert(g, Basis::PowerSum)?;
        return convert(&multiply(&fp, &gp)?, Basis::Monomial);
    }
    let mut out = SymExpansion::zero(f.basis, degree);
    for (a, x) in &f.coeffs {
        for (b, y) in &g.coeffs {
            let mut parts = a.parts().to_vec();
            parts.extend_from_slice(b.parts());
            out.add_term(Partition::from_multiset(parts), x * y)?;
        }
    }
    Ok(out)
}

/// ⟨f, g⟩_θ with ⟨p_λ, p_μ⟩ = δ z_λ θ^{ℓ(λ)}.
pub fn theta_inner(f: &SymExpansion, g: &SymExpansion, theta: &Rat) -> Result<Rat> {
    if f.degree != g.degree {
        return invalid("inner product of different degrees");
    }
    if !theta.is_positive() {
        return invalid("theta must be positive");
    }
    let fp = convert(f, Basis::PowerSum)?;
    let gp = convert(g, Basis::PowerSum)?;
    let mut s = Rat::zero();
    for (p, c) in &fp.coeffs {
        if let Some(d) = gp.coeffs.get(p) {
            s += c * d * from_big(p.z_stat()) * pow(theta, p.len() as i64);
        }
    }
    Ok(s)
}
