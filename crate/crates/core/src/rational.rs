//! Exact rational scalars and a few helpers the rest of the crate leans on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn from_big(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

/// Parses "p/q", "p" or a signed variant. Rejects zero denominators.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Formats as "p/q", or "p" when integral.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integer power, negative exponents allowed for nonzero bases.
pub fn pow(r: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

pub fn min(a: &Rat, b: &Rat) -> Rat {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn max(a: &Rat, b: &Rat) -> Rat {
    if a >= b { a.clone() } else { b.clone() }
}

/// Lossy conversion that survives numerators and denominators far beyond f64 range.
pub fn to_f64(r: &Rat) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    (sign * (ln_abs_big(r.numer()) - ln_abs_big(r.denom())).exp()).copysign(sign)
}

/// ln|r| for nonzero r.
pub fn ln_abs(r: &Rat) -> f64 {
    ln_abs_big(r.numer()) - ln_abs_big(r.denom())
}

fn ln_abs_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// True when a nonnegative rational is the square of a rational.
pub fn is_square(r: &Rat) -> bool {
    if r.is_negative() {
        return false;
    }
    let sq = |n: &BigInt| {
        let s = n.sqrt();
        &s * &s == *n
    };
    sq(r.numer()) && sq(r.denom())
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(" -2 ").unwrap(), int(-2));
        assert!(parse_rat("2/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&rat(-4, 6)), "-2/3");
        assert_eq!(fmt_rat(&int(5)), "5");
    }

    #[test]
    fn huge_values_convert() {
        let big = from_big(factorial(300)) / from_big(factorial(299));
        assert!((to_f64(&big) - 300.0).abs() < 1e-9);
        let r = from_big(factorial(400)) / from_big(factorial(398) * 7);
        assert!((to_f64(&r) - 400.0 * 399.0 / 7.0).abs() < 1e-6);
        assert!((ln_abs(&from_big(factorial(500))) - (1..=500).map(|i| (i as f64).ln()).sum::<f64>()).abs() < 1e-9);
    }

    #[test]
    fn small_helpers() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
        assert!(is_square(&rat(9, 4)));
        assert!(!is_square(&rat(2, 1)));
        assert_eq!(pow(&rat(2, 3), -2), rat(9, 4));
    }
}
