//! Exact rational arithmetic helpers.
//!
//! All probabilities, densities, epsilon values, and LP data in this crate are
//! `num_rational::BigRational`; nothing is ever rounded to floating point.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Builds `p/q` from machine integers. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn ratio_u(p: u64, q: u64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact nonnegative integer power.
pub fn pow(base: &Rational, exp: u64) -> Rational {
    let mut acc = Rational::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Canonical `p/q` rendering; the denominator is always printed, even when 1.
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_ratio(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_repeated_multiplication() {
        let b = ratio(2, 3);
        let mut acc = Rational::one();
        for e in 0..10u64 {
            assert_eq!(pow(&b, e), acc);
            acc *= &b;
        }
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/2", "-7/4", "0/1", "12/8"] {
            let r = parse_ratio(s).unwrap();
            let t = parse_ratio(&format_ratio(&r)).unwrap();
            assert_eq!(r, t);
        }
        assert_eq!(parse_ratio("5"), Some(ratio(5, 1)));
        assert!(parse_ratio("1/0").is_none());
        assert!(parse_ratio("x/2").is_none());
    }
}
