//! Exact integer and rational kernels.
//!
//! Every count in the crate is a [`Natural`]; every generating-function
//! coefficient is a [`Rational`]. Divisions that are known to be exact are
//! routed through [`Rational`] and converted back with [`to_natural`], so a
//! wrong formula shows up as an error instead of a silently truncated quotient.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// The order `q` of the ground field.
///
/// Any `q >= 2` is accepted since the formulas are identities in `q`; whether
/// `q` is a prime power is recorded so callers can warn when a count has no
/// vector-space meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldOrder {
    q: u64,
    prime_power: bool,
}

impl FieldOrder {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidFieldOrder(q));
        }
        Ok(Self {
            q,
            prime_power: prime_power_base(q).is_some(),
        })
    }

    pub fn get(self) -> u64 {
        self.q
    }

    pub fn is_prime_power(self) -> bool {
        self.prime_power
    }

    pub fn is_prime(self) -> bool {
        prime_power_base(self.q) == Some(self.q)
    }

    pub fn as_natural(self) -> Natural {
        Natural::from(self.q)
    }
}

impl fmt::Display for FieldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Returns `p` if `n = p^e` for a prime `p` and `e >= 1`.
fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return (m == 1).then_some(p);
        }
        p += 1;
    }
    Some(n)
}

pub fn rational_from(n: &Natural) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

/// Converts an exact rational to a natural number, failing if it is negative
/// or has a nontrivial denominator.
pub fn to_natural(r: &Rational, context: &str) -> Result<Natural> {
    if !r.is_integer() || r.is_negative() {
        return Err(Error::NotNatural {
            context: context.to_string(),
            value: r.to_string(),
        });
    }
    Ok(r.to_integer().magnitude().clone())
}

/// `k!`
pub fn factorial(k: usize) -> Natural {
    (1..=k as u64).fold(Natural::one(), |acc, i| acc * i)
}

/// `|GL_n(F_q)| = prod_{0 <= i < n} (q^n - q^i)`, with the empty product
/// giving 1 at `n = 0`.
pub fn gl_order(n: usize, q: FieldOrder) -> Natural {
    let qn = q.as_natural().pow(n as u32);
    let mut qi = Natural::one();
    let mut acc = Natural::one();
    for _ in 0..n {
        acc *= &qn - &qi;
        qi *= q.get();
    }
    acc
}

/// `gamma_n / prod_i gamma_{parts_i}` with `n = sum(parts)`: the number of
/// ordered splittings of an `n`-dimensional space into subspaces of the given
/// dimensions.
pub fn gaussian_multinomial(parts: &[usize], q: FieldOrder) -> Result<Natural> {
    let n: usize = parts.iter().sum();
    GammaTable::new(q, n).multinomial(parts)
}

/// Cached `gamma_0, ..., gamma_max` for a fixed field order.
///
/// Formula-side computations draw every group order from one table, which is
/// also the single place where a fault can be injected for harness tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaTable {
    q: FieldOrder,
    values: Vec<Natural>,
}

impl GammaTable {
    pub fn new(q: FieldOrder, max_n: usize) -> Self {
        let values = (0..=max_n).map(|n| gl_order(n, q)).collect();
        Self { q, values }
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    /// `gamma_n`. Panics if `n` exceeds the table size.
    pub fn get(&self, n: usize) -> &Natural {
        assert!(
            n < self.values.len(),
            "gamma_{n} requested from a table built up to {}",
            self.max_n()
        );
        &self.values[n]
    }

    pub fn rational(&self, n: usize) -> Rational {
        rational_from(self.get(n))
    }

    /// Replaces `gamma_n` with an arbitrary value. Exists so that
    /// verification harnesses can check that a corrupted kernel is caught.
    pub fn with_override(mut self, n: usize, value: Natural) -> Self {
        if n >= self.values.len() {
            let q = self.q;
            self.values.extend((self.values.len()..=n).map(|m| gl_order(m, q)));
        }
        self.values[n] = value;
        self
    }

    pub fn multinomial(&self, parts: &[usize]) -> Result<Natural> {
        let n: usize = parts.iter().sum();
        let mut r = self.rational(n);
        for &p in parts {
            r /= self.rational(p);
        }
        to_natural(&r, &format!("gamma_{n} / prod gamma over {parts:?}"))
    }

    /// Table of `gamma_n / (gamma_a gamma_{n-a})` for `0 <= a <= n <= max_n`.
    pub fn split_counts(&self) -> Result<Vec<Vec<Natural>>> {
        (0..=self.max_n())
            .map(|n| (0..=n).map(|a| self.multinomial(&[a, n - a])).collect())
            .collect()
    }
}
