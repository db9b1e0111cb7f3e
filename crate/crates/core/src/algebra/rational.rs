//! Exact rational scalars.
//!
//! Everything numeric in the engine is a [`Rational`]: a `BigRational`
//! kept in lowest terms with a positive denominator by construction.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn factorial_rational(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(factorial(n)))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Always `numerator/denominator`, including integers (`3/1`) and zero (`0/1`).
pub fn to_ratio_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `a`, `-a`, or `a/b` with integer `a`, `b` (`b != 0`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("`{s}`: zero denominator")));
            }
            Ok(Rational::new(parse_int(n)?, den))
        }
    }
}

pub fn sign_power(r: usize) -> Rational {
    if r % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_strings_are_always_fractions() {
        assert_eq!(to_ratio_string(&int(3)), "3/1");
        assert_eq!(to_ratio_string(&int(0)), "0/1");
        assert_eq!(to_ratio_string(&ratio(-6, 4)), "-3/2");
        assert_eq!(to_ratio_string(&ratio(6, -4)), "-3/2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0/1", "7/1", "-3/2", "22/7"] {
            assert_eq!(to_ratio_string(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational(" -5 ").unwrap(), int(-5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(6), BigUint::from(720u32));
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(binomial(11, 6), BigUint::from(462u32));
    }
}
