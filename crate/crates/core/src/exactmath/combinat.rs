use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Catalan number `binom(2m, m) / (m + 1)`.
pub fn catalan(m: u64) -> BigInt {
    binomial(2 * m, m) / (m + 1)
}

/// `(2m)(2m-1)...(m+2)`, the chamber count `m! * C_m` of the Catalan arrangement.
pub fn falling_product(m: u64) -> BigInt {
    (m + 2..=2 * m).fold(BigInt::one(), |acc, k| acc * k)
}

/// Signless Stirling numbers of the first kind: permutations of `m` with `k` cycles.
pub fn stirling_first_unsigned(m: usize, k: usize) -> BigInt {
    stirling_table(m, |row, _k| BigInt::from(row))[m][k].clone()
}

/// Stirling numbers of the second kind: partitions of an `m`-set into `k` blocks.
pub fn stirling_second(m: usize, k: usize) -> BigInt {
    stirling_table(m, |_row, k| BigInt::from(k))[m][k].clone()
}

// s(n, k) = s(n-1, k-1) + weight(n-1, k) * s(n-1, k)
fn stirling_table(m: usize, weight: impl Fn(usize, usize) -> BigInt) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::zero(); m + 1]; m + 1];
    t[0][0] = BigInt::one();
    for n in 1..=m {
        for k in 1..=n {
            t[n][k] = &t[n - 1][k - 1] + weight(n - 1, k) * &t[n - 1][k];
        }
    }
    t
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut p = n + 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}
