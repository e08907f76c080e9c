//! Truncated bivariate generating series.
//!
//! An [`XSeries`] is a power series in `x` cut off after degree `N`, whose
//! coefficients are polynomials in `y` ([`YPoly`]) with exact rational
//! coefficients. The `y`-degree is capped at `N` as well: every family here
//! has cards of dimension at least one, so a hand of dimension `n` has at most
//! `n` cards.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{rational_from, to_natural, FieldOrder, GammaTable, Natural, Rational};
use crate::error::{Error, Result};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 12;

/// Polynomial in `y` with rational coefficients; `coeffs[k]` multiplies
/// `y^k`. Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct YPoly {
    coeffs: Vec<Rational>,
}

impl YPoly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * y^k`
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `y`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::new(coeffs)
    }

    /// Product with every term of `y`-degree above `cap` dropped.
    pub fn mul_capped(&self, other: &Self, cap: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(cap + 1);
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `y^shift`, dropping terms above `cap`.
    pub fn shift_capped(&self, shift: usize, cap: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        coeffs.truncate(cap + 1);
        Self::new(coeffs)
    }

    pub fn eval(&self, y: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * y + c)
    }
}

impl fmt::Display for YPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})y")?,
                _ => write!(f, "({c})y^{k}")?,
            }
        }
        Ok(())
    }
}

/// Power series in `x` truncated after degree `order`, with [`YPoly`]
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XSeries {
    order: usize,
    coeffs: Vec<YPoly>,
}

impl XSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![YPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = YPoly::one();
        s
    }

    /// Builds a series from coefficients indexed by `x`-degree. Missing slots
    /// are zero; slots past `order`, and `y`-degrees past `order`, are dropped.
    pub fn from_coeffs(order: usize, coeffs: Vec<YPoly>) -> Self {
        let mut s = Self::zero(order);
        for (n, p) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[n] = p.shift_capped(0, order);
        }
        s
    }

    /// `c * x^n * y^k`; zero if either degree exceeds the order.
    pub fn monomial(order: usize, n: usize, k: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        if n <= order && k <= order {
            s.coeffs[n] = YPoly::monomial(k, c);
        }
        s
    }

    /// A series with no `y` dependence.
    pub fn from_x_coeffs(order: usize, coeffs: Vec<Rational>) -> Self {
        Self::from_coeffs(order, coeffs.into_iter().map(YPoly::constant).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `x^n` as a polynomial in `y`.
    pub fn coeff(&self, n: usize) -> &YPoly {
        &self.coeffs[n]
    }

    /// Coefficient of `x^n y^k`.
    pub fn coeff_xy(&self, n: usize, k: usize) -> Rational {
        self.coeffs
            .get(n)
            .map(|p| p.coeff(k))
            .unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[YPoly] {
        &self.coeffs
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    /// Truncated Cauchy product in `x`, polynomial product in `y`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n_max = self.order;
        let mut out = Self::zero(n_max);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n_max + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul_capped(b, n_max));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiplies by `y`.
    pub fn times_y(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|p| p.shift_capped(1, self.order))
                .collect(),
        }
    }

    /// `exp(self)`, which requires a zero constant term.
    ///
    /// Uses `n F_n = sum_{m=1}^{n} m g_m F_{n-m}`, which follows from
    /// `F' = g' F`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        let n_max = self.order;
        let mut f = Self::one(n_max);
        for n in 1..=n_max {
            let mut acc = YPoly::zero();
            for m in 1..=n {
                let g = &self.coeffs[m];
                if g.is_zero() || f.coeffs[n - m].is_zero() {
                    continue;
                }
                let term = g.mul_capped(&f.coeffs[n - m], n_max);
                acc = acc.add(&term.scale(&Rational::from_integer(BigInt::from(m))));
            }
            f.coeffs[n] = acc.scale(&Rational::new(BigInt::one(), BigInt::from(n)));
        }
        Ok(f)
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.order);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base).expect("same order");
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base).expect("same order");
            }
        }
        result
    }

    /// `self^e` for an arbitrary-precision exponent.
    pub fn pow_big(&self, e: &Natural) -> Self {
        let mut result = Self::one(self.order);
        let bits = e.bits();
        for i in (0..bits).rev() {
            result = result.checked_mul(&result).expect("same order");
            if e.bit(i) {
                result = result.checked_mul(self).expect("same order");
            }
        }
        result
    }

    /// Drops every `x`- and `y`-degree above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(order, self.coeffs.clone())
    }

    /// The one-variable series obtained by setting `y = 1`.
    pub fn at_y_one(&self) -> Vec<Rational> {
        self.coeffs.iter().map(|p| p.eval(&Rational::one())).collect()
    }
}

/// Table of hand counts `h(n, k)` for `0 <= k <= n <= order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HandTable {
    order: usize,
    rows: Vec<Vec<Natural>>,
}

impl HandTable {
    /// The table of the empty family: only `h(0,0) = 1`.
    pub fn unit(order: usize) -> Self {
        let mut rows: Vec<Vec<Natural>> = (0..=order).map(|n| vec![Natural::zero(); n + 1]).collect();
        rows[0][0] = Natural::one();
        Self { order, rows }
    }

    /// Builds a table from full rows; `rows[n]` must have `n + 1` entries and
    /// satisfy `h(0,0) = 1`, `h(n,0) = 0` for `n > 0`.
    pub fn from_rows(rows: Vec<Vec<Natural>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("hand table needs row 0".into()));
        }
        for (n, row) in rows.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::InvalidArgument(format!(
                    "row {n} has {} entries, expected {}",
                    row.len(),
                    n + 1
                )));
            }
        }
        if !rows[0][0].is_one() || rows.iter().skip(1).any(|r| !r[0].is_zero()) {
            return Err(Error::InvalidArgument(
                "hand table needs h(0,0) = 1 and h(n,0) = 0 for n > 0".into(),
            ));
        }
        Ok(Self {
            order: rows.len() - 1,
            rows,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `h(n, k)`; zero outside `0 <= k <= n <= order`.
    pub fn get(&self, n: usize, k: usize) -> Natural {
        self.rows
            .get(n)
            .and_then(|r| r.get(k))
            .cloned()
            .unwrap_or_else(Natural::zero)
    }

    pub fn row(&self, n: usize) -> &[Natural] {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec<Natural>] {
        &self.rows
    }

    pub(crate) fn set(&mut self, n: usize, k: usize, value: Natural) {
        self.rows[n][k] = value;
    }

    /// Recovers `h(n,k) = gamma_n [x^n y^k] H`.
    pub fn from_series(h: &XSeries, q: FieldOrder) -> Result<Self> {
        Self::from_series_with(h, &GammaTable::new(q, h.order()))
    }

    pub fn from_series_with(h: &XSeries, gammas: &GammaTable) -> Result<Self> {
        let mut table = Self::unit(h.order());
        for n in 0..=h.order() {
            let poly = h.coeff(n);
            if poly.degree().is_some_and(|d| d > n) {
                return Err(Error::NotNatural {
                    context: format!("hand table: y-degree above x-degree at n={n}"),
                    value: poly.to_string(),
                });
            }
            let gamma = gammas.rational(n);
            for k in 0..=n {
                let scaled = poly.coeff(k) * &gamma;
                let value = to_natural(&scaled, &format!("gamma_{n} [x^{n} y^{k}] H"))?;
                let expected_zero = (n == 0) != (k == 0);
                if expected_zero && !value.is_zero() {
                    return Err(Error::NotNatural {
                        context: format!("hand table entry h({n},{k}) must vanish"),
                        value: value.to_string(),
                    });
                }
                table.rows[n][k] = value;
            }
        }
        Ok(table)
    }

    /// `H(x,y) = sum h(n,k) x^n y^k / gamma_n`.
    pub fn to_series(&self, q: FieldOrder) -> XSeries {
        let gammas = GammaTable::new(q, self.order);
        let coeffs = self
            .rows
            .iter()
            .enumerate()
            .map(|(n, row)| {
                let g = gammas.rational(n);
                YPoly::new(row.iter().map(|h| rational_from(h) / &g).collect())
            })
            .collect();
        XSeries::from_coeffs(self.order, coeffs)
    }
}

impl fmt::Display for HandTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|h| h.to_string()).collect();
            writeln!(f, "{n}: {}", cells.join(" "))?;
        }
        Ok(())
    }
}
