//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

fn size_key(r: &Rat) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Solves `a·x = b` for a system with at least as many equations as
/// unknowns. The system must be consistent and of full column rank.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>> {
    let rows = a.len();
    if rows != b.len() {
        return Err(Error::InvalidArgument("row count mismatch".into()));
    }
    let cols = a.first().map_or(0, |r| r.len());
    if rows < cols {
        return Err(Error::Singular("underdetermined system".into()));
    }
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    for c in 0..cols {
        // Smallest nonzero entry keeps intermediate growth down.
        let piv = (c..rows)
            .filter(|&r| !m[r][c].is_zero())
            .min_by_key(|&r| size_key(&m[r][c]))
            .ok_or_else(|| Error::Singular(format!("no pivot in column {c}")))?;
        m.swap(c, piv);
        let inv = m[c][c].recip();
        for k in c..=cols {
            m[c][k] = &m[c][k] * &inv;
        }
        for r in 0..rows {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for k in c..=cols {
                if !m[c][k].is_zero() {
                    let d = &f * &m[c][k];
                    m[r][k] -= d;
                }
            }
        }
    }
    for row in m.iter().skip(cols) {
        if !row[cols].is_zero() {
            return Err(Error::Singular("inconsistent system".into()));
        }
    }
    Ok(m.into_iter().take(cols).map(|r| r[cols].clone()).collect())
}

/// The unique probability vector `x` with `x·p = x`, for a square stochastic `p`.
pub fn left_fixed_vector(p: &[Vec<Rat>]) -> Result<Vec<Rat>> {
    let n = p.len();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = p[j][i].clone();
                    if i == j {
                        v -= Rat::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    a.push(vec![Rat::one(); n]);
    let mut b = vec![Rat::zero(); n];
    b.push(Rat::one());
    solve(&a, &b)
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}
