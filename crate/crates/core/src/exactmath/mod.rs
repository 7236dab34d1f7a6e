//! Exact arithmetic helpers shared by the rest of the crate.
//!
//! Everything here is integer or rational; nothing in the crate touches
//! floating point. Rationals are `num_rational::BigRational`, which keeps
//! the numerator/denominator pair reduced with a positive denominator.

mod combinat;
mod poly;

pub use combinat::{
    binomial, catalan, factorial, falling_product, is_prime, next_prime_above, stirling_first_unsigned, stirling_second,
};
pub use poly::{lagrange_interpolate, IntegerPolynomial};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact rational number.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("interpolation nodes are empty")]
    NoNodes,
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(BigInt),
    #[error("interpolant has non-integer coefficient {value} at degree {degree}")]
    NonIntegerCoefficients { degree: usize, value: Rational },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Greatest common divisor of a list of integers (0 for an all-zero list).
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |g, v| g.gcd(v)).abs()
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::from(1), |l, v| l.lcm(v.denom()))
}
