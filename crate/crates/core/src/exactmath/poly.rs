use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ExactError, Rational};

/// Dense polynomial in one variable `t` with integer coefficients, lowest degree first.
///
/// The coefficient vector never has a trailing zero; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntegerPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    /// `t - root`.
    pub fn linear_factor(root: i64) -> Self {
        Self::from_i64(&[-root, 1])
    }

    /// `(t - r_1)(t - r_2)...`.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| &acc * &Self::linear_factor(r))
    }

    pub fn product<'a>(factors: impl IntoIterator<Item = &'a IntegerPolynomial>) -> Self {
        factors.into_iter().fold(Self::one(), |acc, f| &acc * f)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_i64(&self, t: i64) -> BigInt {
        self.eval(&BigInt::from(t))
    }

    /// True when the nonzero coefficients alternate in sign from the leading one down,
    /// i.e. `coeff(k) * (-1)^(deg - k) >= 0` for every `k`.
    pub fn signs_alternate(&self) -> bool {
        let Some(d) = self.degree() else {
            return true;
        };
        let lead_positive = self.coeffs[d].is_positive();
        self.coeffs.iter().enumerate().all(|(k, c)| {
            let expect_positive = lead_positive == ((d - k) % 2 == 0);
            c.is_zero() || c.is_positive() == expect_positive
        })
    }
}

impl Add for &IntegerPolynomial {
    type Output = IntegerPolynomial;
    fn add(self, rhs: Self) -> IntegerPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntegerPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Neg for &IntegerPolynomial {
    type Output = IntegerPolynomial;
    fn neg(self) -> IntegerPolynomial {
        IntegerPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &IntegerPolynomial {
    type Output = IntegerPolynomial;
    fn sub(self, rhs: Self) -> IntegerPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &IntegerPolynomial {
    type Output = IntegerPolynomial;
    fn mul(self, rhs: Self) -> IntegerPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntegerPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntegerPolynomial::new(out)
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Interpolates the unique polynomial of degree below `nodes.len()` through `nodes`,
/// in Lagrange form over the rationals, and insists the result has integer coefficients.
pub fn lagrange_interpolate(nodes: &[(BigInt, BigInt)]) -> Result<IntegerPolynomial, ExactError> {
    if nodes.is_empty() {
        return Err(ExactError::NoNodes);
    }
    for (i, (xi, _)) in nodes.iter().enumerate() {
        if nodes[..i].iter().any(|(xj, _)| xj == xi) {
            return Err(ExactError::DuplicateAbscissa(xi.clone()));
        }
    }
    let n = nodes.len();
    let mut acc = vec![Rational::zero(); n];
    for (i, (xi, yi)) in nodes.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        // basis numerator prod_{j != i} (t - x_j), integer coefficients
        let mut basis = vec![BigInt::one()];
        let mut denom = BigInt::one();
        for (j, (xj, _)) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigInt::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = Rational::new(yi.clone(), denom);
        for (k, b) in basis.into_iter().enumerate() {
            acc[k] += &scale * Rational::from_integer(b);
        }
    }
    let mut coeffs = Vec::with_capacity(n);
    for (degree, value) in acc.into_iter().enumerate() {
        if !value.is_integer() {
            return Err(ExactError::NonIntegerCoefficients { degree, value });
        }
        coeffs.push(value.to_integer());
    }
    Ok(IntegerPolynomial::new(coeffs))
}
