//! Brute-force ground truth over prime fields.
//!
//! Nothing in here touches the formula engine: arithmetic is plain machine
//! integers mod `p`, counts are `u64`, and every quantity is obtained by
//! exhaustive enumeration of matrices or subspaces.

use std::collections::{BTreeMap, HashSet};
use std::ops::Range;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};

/// Upper bound on the number of matrices (or echelon candidates) a single
/// enumeration may visit.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Largest dimension for which characteristic polynomials are computed by
/// cofactor expansion.
pub const CHAR_POLY_MAX_N: usize = 6;

/// Prime modulus, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        let is_prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if !is_prime || p > 251 {
            return Err(Error::NotPrime(p));
        }
        Ok(Self(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b) % self.0
    }

    fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.0
    }

    fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.0 != 0);
        (1..self.0).find(|&x| self.mul(a, x) == 1).expect("prime field")
    }
}

/// An element of `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FqElement {
    value: u32,
    p: Prime,
}

impl FqElement {
    pub fn new(value: u64, p: Prime) -> Self {
        Self {
            value: (value % p.get() as u64) as u32,
            p,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.p
    }
}

/// Dense square matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    n: usize,
    p: Prime,
    entries: Vec<u32>,
}

impl FqMatrix {
    pub fn from_rows(p: Prime, rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        let entries = rows.iter().flatten().map(|&v| v % p.get()).collect();
        Ok(Self { n, p, entries })
    }

    pub fn zero(n: usize, p: Prime) -> Self {
        Self {
            n,
            p,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(n: usize, p: Prime) -> Self {
        Self::scalar(n, p, 1)
    }

    pub fn scalar(n: usize, p: Prime, a: u32) -> Self {
        let mut m = Self::zero(n, p);
        for i in 0..n {
            m.entries[i * n + i] = a % p.get();
        }
        m
    }

    /// Matrix number `index` in row-major odometer order: the last entry
    /// varies fastest.
    pub fn from_index(n: usize, p: Prime, mut index: u64) -> Self {
        let mut entries = vec![0; n * n];
        for slot in entries.iter_mut().rev() {
            *slot = (index % p.get() as u64) as u32;
            index /= p.get() as u64;
        }
        Self { n, p, entries }
    }

    /// Companion matrix of a monic polynomial.
    pub fn companion(f: &FqPolynomial) -> Self {
        let n = f.degree().expect("nonzero polynomial");
        let p = f.p;
        let mut m = Self::zero(n, p);
        for i in 1..n {
            m.set(i, i - 1, 1);
        }
        for i in 0..n {
            m.set(i, n - 1, p.sub(0, f.coeffs[i]));
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn element(&self, i: usize, j: usize) -> FqElement {
        FqElement::new(self.get(i, j) as u64, self.p)
    }

    fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let p = self.p;
        let mut out = Self::zero(n, p);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = p.add(out.get(i, j), p.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (o, &b) in out.entries.iter_mut().zip(&other.entries) {
            *o = self.p.add(*o, b);
        }
        out
    }

    pub fn scale(&self, c: u32) -> Self {
        let mut out = self.clone();
        for o in &mut out.entries {
            *o = self.p.mul(*o, c % self.p.get());
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::identity(self.n, self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<u32>> = self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect();
        if self.n == 0 {
            return 0;
        }
        row_rank(self.p, rows)
    }

    pub fn nullity(&self) -> usize {
        self.n - self.rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Gauss-Jordan inverse, `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let p = self.p;
        let mut a: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut row: Vec<u32> = (0..n).map(|j| self.get(i, j)).collect();
                row.extend((0..n).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r][col] != 0)?;
            a.swap(col, pivot);
            let inv = p.inv(a[col][col]);
            for v in &mut a[col] {
                *v = p.mul(*v, inv);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..2 * n {
                        a[r][c] = p.sub(a[r][c], p.mul(f, a[col][c]));
                    }
                }
            }
        }
        let mut out = Self::zero(n, p);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, a[i][n + j]);
            }
        }
        Some(out)
    }

    /// `f(M)` by Horner's rule.
    pub fn eval_poly(&self, f: &FqPolynomial) -> Self {
        let mut acc = Self::zero(self.n, self.p);
        for &c in f.coeffs.iter().rev() {
            acc = acc.mul(self).add(&Self::scalar(self.n, self.p, c));
        }
        acc
    }
}

/// Rank of a list of row vectors over `F_p`.
fn row_rank(p: Prime, mut rows: Vec<Vec<u32>>) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = p.inv(rows[rank][col]);
        for r in rank + 1..rows.len() {
            if rows[r][col] != 0 {
                let f = p.mul(rows[r][col], inv);
                for c in col..width {
                    rows[r][c] = p.sub(rows[r][c], p.mul(f, rows[rank][c]));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn guard(what: &str, n: usize, p: Prime) -> Result<u64> {
    let cells = (n * n) as u32;
    match (p.get() as u64).checked_pow(cells) {
        Some(total) if total <= ENUMERATION_LIMIT => Ok(total),
        _ => Err(Error::ScaleGuard {
            what: format!("{what} (n={n}, p={})", p.get()),
            size: format!("{}^{}", p.get(), cells),
            limit: ENUMERATION_LIMIT.to_string(),
        }),
    }
}

/// All `p^(n^2)` matrices in row-major odometer order.
pub fn enumerate_matrices(n: usize, p: Prime) -> Result<MatrixIter> {
    let total = guard("matrix enumeration", n, p)?;
    Ok(MatrixIter::new(n, p, 0..total))
}

/// The slice `range` of [`enumerate_matrices`], for partitioned scans.
pub fn enumerate_matrix_range(n: usize, p: Prime, range: Range<u64>) -> Result<MatrixIter> {
    let total = guard("matrix enumeration", n, p)?;
    Ok(MatrixIter::new(n, p, range.start.min(total)..range.end.min(total)))
}

#[derive(Debug, Clone)]
pub struct MatrixIter {
    current: Option<FqMatrix>,
    remaining: u64,
}

impl MatrixIter {
    fn new(n: usize, p: Prime, range: Range<u64>) -> Self {
        let remaining = range.end.saturating_sub(range.start);
        Self {
            current: Some(FqMatrix::from_index(n, p, range.start)),
            remaining,
        }
    }
}

impl Iterator for MatrixIter {
    type Item = FqMatrix;

    fn next(&mut self) -> Option<FqMatrix> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.current.clone()?;
        if self.remaining > 0 {
            let m = self.current.as_mut().expect("present");
            let p = m.p.get();
            for slot in m.entries.iter_mut().rev() {
                *slot += 1;
                if *slot < p {
                    break;
                }
                *slot = 0;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

pub fn is_projection(m: &FqMatrix) -> bool {
    m.mul(m) == *m
}

/// `M` is diagonalizable over `F_p` iff its minimal polynomial divides
/// `t^p - t`, i.e. iff `M^p = M`.
pub fn is_diagonalizable(m: &FqMatrix) -> bool {
    m.pow(m.p.get() as u64) == *m
}

/// All matrices of the form `S D S^{-1}` with `S` invertible and `D`
/// diagonal, found by running over every `S` and `D`.
pub fn diagonalizable_by_definition(n: usize, p: Prime) -> Result<HashSet<FqMatrix>> {
    let total = guard("conjugation search", n, p)?;
    let diagonals: Vec<FqMatrix> = (0..(p.get() as u64).pow(n as u32))
        .map(|mut idx| {
            let mut d = FqMatrix::zero(n, p);
            for i in 0..n {
                d.set(i, i, (idx % p.get() as u64) as u32);
                idx /= p.get() as u64;
            }
            d
        })
        .collect();
    let mut out = HashSet::new();
    for s in MatrixIter::new(n, p, 0..total) {
        let Some(s_inv) = s.inverse() else { continue };
        for d in &diagonals {
            out.insert(s.mul(d).mul(&s_inv));
        }
    }
    Ok(out)
}

/// Number of distinct eigenvalues in `F_p`.
pub fn eigenvalue_count(m: &FqMatrix) -> usize {
    (0..m.p.get())
        .filter(|&a| m.add(&FqMatrix::scalar(m.n, m.p, m.p.sub(0, a))).nullity() > 0)
        .count()
}

/// Polynomial over `F_p`; `coeffs[i]` multiplies `t^i`, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqPolynomial {
    p: Prime,
    coeffs: Vec<u32>,
}

impl FqPolynomial {
    pub fn new(p: Prime, coeffs: Vec<u32>) -> Self {
        let mut f = Self {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p.get()).collect(),
        };
        f.trim();
        f
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn zero(p: Prime) -> Self {
        Self { p, coeffs: vec![] }
    }

    pub fn constant(p: Prime, c: u32) -> Self {
        Self::new(p, vec![c])
    }

    /// `t - a`
    pub fn linear(p: Prime, a: u32) -> Self {
        Self::new(p, vec![p.sub(0, a % p.get()), 1])
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                self.p.add(a, b)
            })
            .collect();
        Self::new(self.p, c)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&c| self.p.sub(0, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = self.p.add(c[i + j], self.p.mul(a, b));
            }
        }
        Self::new(self.p, c)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(self.p, 1), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder on division by a monic polynomial.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.degree().expect("monic is nonzero");
        let mut rem = self.coeffs.clone();
        let Some(deg) = self.degree() else {
            return (Self::zero(self.p), Self::zero(self.p));
        };
        if deg < dd {
            return (Self::zero(self.p), self.clone());
        }
        let mut quot = vec![0; deg - dd + 1];
        for shift in (0..=deg - dd).rev() {
            let lead = rem[shift + dd];
            if lead == 0 {
                continue;
            }
            quot[shift] = lead;
            for (i, &c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = self.p.sub(rem[shift + i], self.p.mul(lead, c));
            }
        }
        (Self::new(self.p, quot), Self::new(self.p, rem))
    }
}

/// `det(tI - M)` by cofactor expansion along the first row over `F_p[t]`.
pub fn char_poly(m: &FqMatrix) -> Result<FqPolynomial> {
    if m.n > CHAR_POLY_MAX_N {
        return Err(Error::ScaleGuard {
            what: "characteristic polynomial by cofactor expansion".into(),
            size: format!("n={}", m.n),
            limit: format!("n<={CHAR_POLY_MAX_N}"),
        });
    }
    let p = m.p;
    let entries: Vec<Vec<FqPolynomial>> = (0..m.n)
        .map(|i| {
            (0..m.n)
                .map(|j| {
                    let entry = FqPolynomial::constant(p, m.get(i, j)).neg();
                    if i == j {
                        entry.add(&FqPolynomial::new(p, vec![0, 1]))
                    } else {
                        entry
                    }
                })
                .collect()
        })
        .collect();
    let cols: Vec<usize> = (0..m.n).collect();
    Ok(cofactor_det(p, &entries, 0, &cols))
}

fn cofactor_det(p: Prime, a: &[Vec<FqPolynomial>], row: usize, cols: &[usize]) -> FqPolynomial {
    if cols.is_empty() {
        return FqPolynomial::constant(p, 1);
    }
    let mut acc = FqPolynomial::zero(p);
    for (idx, &c) in cols.iter().enumerate() {
        let entry = &a[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry.mul(&cofactor_det(p, a, row + 1, &rest));
        acc = if idx % 2 == 0 { acc.add(&term) } else { acc.add(&term.neg()) };
    }
    acc
}

/// Monic irreducible polynomials of degree `1..=max_degree`, found by trial
/// division of every monic polynomial.
pub fn monic_irreducibles(p: Prime, max_degree: usize) -> Vec<FqPolynomial> {
    let mut found: Vec<FqPolynomial> = Vec::new();
    for d in 1..=max_degree {
        let count = (p.get() as u64).pow(d as u32);
        for idx in 0..count {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                coeffs.push((x % p.get() as u64) as u32);
                x /= p.get() as u64;
            }
            coeffs.push(1);
            let f = FqPolynomial::new(p, coeffs);
            let reducible = found
                .iter()
                .take_while(|g| 2 * g.degree().unwrap() <= d)
                .any(|g| f.div_rem_monic(g).1.is_zero());
            if !reducible {
                found.push(f);
            }
        }
    }
    found
}

/// Factorization of a monic polynomial into monic irreducibles with
/// multiplicities, by trial division in order of increasing degree.
pub fn factor_poly(f: &FqPolynomial) -> Result<Vec<(FqPolynomial, usize)>> {
    let deg = f.degree().unwrap_or(0);
    if f.is_zero() || !f.is_monic() {
        return Err(Error::InvalidArgument("factor_poly needs a monic polynomial".into()));
    }
    if deg > CHAR_POLY_MAX_N {
        return Err(Error::ScaleGuard {
            what: "polynomial factorization by trial division".into(),
            size: format!("degree {deg}"),
            limit: format!("degree<={CHAR_POLY_MAX_N}"),
        });
    }
    let mut rest = f.clone();
    let mut out = Vec::new();
    for g in monic_irreducibles(f.p, deg) {
        if rest.degree() == Some(0) {
            break;
        }
        let mut e = 0;
        loop {
            let (quot, rem) = rest.div_rem_monic(&g);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            e += 1;
        }
        if e > 0 {
            out.push((g, e));
        }
    }
    debug_assert_eq!(rest.degree(), Some(0));
    Ok(out)
}

/// Number of cyclic summands in the primary rational canonical form:
/// `sum_phi dim ker phi(M) / deg phi` over irreducible factors of the
/// characteristic polynomial.
pub fn primary_summand_count(m: &FqMatrix) -> Result<usize> {
    let factors = factor_poly(&char_poly(m)?)?;
    Ok(factors
        .iter()
        .map(|(phi, _)| m.eval_poly(phi).nullity() / phi.degree().expect("nonconstant"))
        .sum())
}

/// A subspace of `F_p^n`, stored as its reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// The flattened basis; distinct subspaces have distinct keys.
    pub fn key(&self) -> Vec<u32> {
        self.rows.iter().flatten().copied().collect()
    }
}

/// Every subspace of `F_p^n` exactly once, by dimension and then by pivot
/// pattern, each filled in with every choice of free entries.
pub fn enumerate_subspaces(n: usize, p: Prime) -> Result<Vec<Subspace>> {
    guard("subspace enumeration", n, p)?;
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            // free slots: row i, column c > pivots[i], c not a pivot
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| {
                    let pivots = &pivots;
                    (pivots[i] + 1..n)
                        .filter(move |c| !pivots.contains(c))
                        .map(move |c| (i, c))
                })
                .collect();
            let fillings = (p.get() as u64).pow(free.len() as u32);
            for mut idx in 0..fillings {
                let mut rows = vec![vec![0u32; n]; k];
                for (i, &c) in pivots.iter().enumerate() {
                    rows[i][c] = 1;
                }
                for &(i, c) in &free {
                    rows[i][c] = (idx % p.get() as u64) as u32;
                    idx /= p.get() as u64;
                }
                out.push(Subspace { n, rows });
            }
        }
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, k, current, out);
            current.pop();
        }
    }
    go(0, n, k, &mut current, &mut out);
    out
}

/// Number of unordered sets `{V_1, ..., V_k}` of nonzero subspaces with
/// `F_p^n = V_1 + ... + V_k` direct.
pub fn count_decompositions(n: usize, k: usize, p: Prime) -> Result<u64> {
    let mut subspaces: Vec<Subspace> = enumerate_subspaces(n, p)?
        .into_iter()
        .filter(|s| s.dim() > 0)
        .collect();
    subspaces.sort_by_key(Subspace::key);

    fn search(
        start: usize,
        parts_left: usize,
        dim_left: usize,
        stacked: &mut Vec<Vec<u32>>,
        subspaces: &[Subspace],
        p: Prime,
    ) -> u64 {
        if parts_left == 0 {
            return u64::from(dim_left == 0);
        }
        let mut count = 0;
        for idx in start..subspaces.len() {
            let s = &subspaces[idx];
            // each later part needs at least one dimension
            if s.dim() + (parts_left - 1) > dim_left {
                continue;
            }
            let before = stacked.len();
            stacked.extend(s.rows.iter().cloned());
            if row_rank(p, stacked.clone()) == stacked.len() {
                count += search(idx + 1, parts_left - 1, dim_left - s.dim(), stacked, subspaces, p);
            }
            stacked.truncate(before);
        }
        count
    }

    if k == 0 {
        return Ok(u64::from(n == 0));
    }
    Ok(search(0, k, n, &mut Vec::new(), &subspaces, p))
}

/// Aggregate of per-matrix predicates over all `n x n` matrices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CensusReport {
    pub n: usize,
    pub p: u32,
    pub total: u64,
    pub projections: u64,
    pub diagonalizable: u64,
    /// Diagonalizable matrices keyed by number of distinct eigenvalues.
    pub diagonalizable_by_eigenvalues: BTreeMap<usize, u64>,
    pub invertible: u64,
    /// Invertible matrices keyed by number of primary cyclic summands.
    pub summands_invertible: BTreeMap<usize, u64>,
    /// All matrices keyed by number of primary cyclic summands.
    pub summands_all: BTreeMap<usize, u64>,
}

impl CensusReport {
    fn empty(n: usize, p: Prime) -> Self {
        Self {
            n,
            p: p.get(),
            ..Self::default()
        }
    }

    fn record(&mut self, m: &FqMatrix) -> Result<()> {
        self.total += 1;
        if is_projection(m) {
            self.projections += 1;
        }
        if is_diagonalizable(m) {
            self.diagonalizable += 1;
            *self.diagonalizable_by_eigenvalues.entry(eigenvalue_count(m)).or_default() += 1;
        }
        let summands = primary_summand_count(m)?;
        *self.summands_all.entry(summands).or_default() += 1;
        if m.is_invertible() {
            self.invertible += 1;
            *self.summands_invertible.entry(summands).or_default() += 1;
        }
        Ok(())
    }

    /// Combines two partial censuses of the same `(n, p)`.
    pub fn merge(mut self, other: &Self) -> Self {
        self.total += other.total;
        self.projections += other.projections;
        self.diagonalizable += other.diagonalizable;
        self.invertible += other.invertible;
        for (map, theirs) in [
            (&mut self.diagonalizable_by_eigenvalues, &other.diagonalizable_by_eigenvalues),
            (&mut self.summands_invertible, &other.summands_invertible),
            (&mut self.summands_all, &other.summands_all),
        ] {
            for (&k, &v) in theirs {
                *map.entry(k).or_default() += v;
            }
        }
        self
    }
}

struct StringCounts<'a>(&'a BTreeMap<usize, u64>);

impl Serialize for StringCounts<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(&k.to_string(), &v.to_string())?;
        }
        map.end()
    }
}

impl Serialize for CensusReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(9))?;
        map.serialize_entry("n", &self.n.to_string())?;
        map.serialize_entry("p", &self.p.to_string())?;
        map.serialize_entry("total", &self.total.to_string())?;
        map.serialize_entry("projections", &self.projections.to_string())?;
        map.serialize_entry("diagonalizable", &self.diagonalizable.to_string())?;
        map.serialize_entry(
            "diagonalizable_by_eigenvalues",
            &StringCounts(&self.diagonalizable_by_eigenvalues),
        )?;
        map.serialize_entry("invertible", &self.invertible.to_string())?;
        map.serialize_entry("summands_invertible", &StringCounts(&self.summands_invertible))?;
        map.serialize_entry("summands_all", &StringCounts(&self.summands_all))?;
        map.end()
    }
}

/// Single-threaded census of all `n x n` matrices over `F_p`.
pub fn census(n: usize, p: Prime) -> Result<CensusReport> {
    census_with_workers(n, p, 1)
}

/// Census split into `workers` contiguous index ranges scanned in parallel.
/// The merged report does not depend on the number of workers.
pub fn census_with_workers(n: usize, p: Prime, workers: usize) -> Result<CensusReport> {
    let total = guard("census", n, p)?;
    if n > CHAR_POLY_MAX_N {
        return Err(Error::ScaleGuard {
            what: "census".into(),
            size: format!("n={n}"),
            limit: format!("n<={CHAR_POLY_MAX_N}"),
        });
    }
    let workers = workers.clamp(1, total.max(1) as usize) as u64;
    let chunk = total.div_ceil(workers);
    let ranges: Vec<Range<u64>> = (0..workers)
        .map(|w| (w * chunk).min(total)..((w + 1) * chunk).min(total))
        .collect();
    let scan = |range: Range<u64>| -> Result<CensusReport> {
        let mut report = CensusReport::empty(n, p);
        for m in MatrixIter::new(n, p, range) {
            report.record(&m)?;
        }
        Ok(report)
    };
    let partials: Vec<Result<CensusReport>> = if workers == 1 {
        ranges.into_iter().map(scan).collect()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = ranges
                .into_iter()
                .map(|r| s.spawn(move || scan(r)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("census worker panicked"))
                .collect()
        })
    };
    partials
        .into_iter()
        .try_fold(CensusReport::empty(n, p), |acc, part| Ok(acc.merge(&part?)))
}
