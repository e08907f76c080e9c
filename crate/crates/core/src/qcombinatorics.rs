//! Named q-sequences: Stirling subset and cycle numbers, Bell numbers,
//! diagonalization, diagonalizable-matrix and projection counts.
//!
//! Every sequence is produced along two routes that must agree (a
//! composition sum and a generating-function coefficient, or two closed
//! forms). A disagreement is reported as [`Error::Disagreement`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{factorial, rational_from, to_natural, FieldOrder, GammaTable, Natural, Rational};
use crate::error::{Error, Result};
use crate::families::{hand_enumerator_with, DeckSpec};
use crate::series::{HandTable, XSeries, YPoly};

/// Multiplicity data `b = (b_1, b_2, ..., b_m)` of a partition: `b_i` parts
/// equal to `i`. Stored without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiplicityVector(Vec<usize>);

impl MultiplicityVector {
    pub fn new(mut b: Vec<usize>) -> Self {
        while b.last() == Some(&0) {
            b.pop();
        }
        Self(b)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `b_i` for `i >= 1`.
    pub fn get(&self, i: usize) -> usize {
        i.checked_sub(1).and_then(|j| self.0.get(j)).copied().unwrap_or(0)
    }

    /// `sum_i i b_i`
    pub fn weight(&self) -> usize {
        self.0.iter().enumerate().map(|(j, &b)| (j + 1) * b).sum()
    }

    /// `sum_i b_i`
    pub fn parts(&self) -> usize {
        self.0.iter().sum()
    }

    /// Boxes in the first `i` columns of the Ferrers diagram:
    /// `b_1 + 2 b_2 + ... + (i-1) b_{i-1} + i (b_i + b_{i+1} + ...)`.
    pub fn column_boxes(&self, i: usize) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &b)| (j + 1).min(i) * b)
            .sum()
    }
}

/// All multiplicity vectors of weight `<= max_weight`, by increasing weight;
/// within a weight, `b_1` descends first, then `b_2`, and so on.
pub fn enumerate_multiplicity_vectors(max_weight: usize) -> Vec<MultiplicityVector> {
    let mut out = Vec::new();
    for w in 0..=max_weight {
        let mut current = Vec::new();
        push_partitions(w, 1, &mut current, &mut out);
    }
    out
}

fn push_partitions(
    remaining: usize,
    part: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<MultiplicityVector>,
) {
    if remaining == 0 {
        out.push(MultiplicityVector::new(current.clone()));
        return;
    }
    if part > remaining {
        return;
    }
    for count in (0..=remaining / part).rev() {
        current.push(count);
        push_partitions(remaining - count * part, part + 1, current, out);
        current.pop();
    }
}

/// Number of monic irreducible polynomials of degree `d` over `F_q`:
/// `(1/d) sum_{e | d} mu(e) q^{d/e}`.
pub fn irreducible_poly_count(d: usize, q: FieldOrder) -> Natural {
    assert!(d >= 1, "irreducible polynomials have degree >= 1");
    let qb = BigInt::from(q.get());
    let mut sum = BigInt::zero();
    for e in (1..=d).filter(|e| d % e == 0) {
        match mobius(e) {
            0 => {}
            m => sum += BigInt::from(m) * qb.pow((d / e) as u32),
        }
    }
    let (quot, rem) = sum.div_rem(&BigInt::from(d));
    assert!(rem.is_zero(), "necklace sum not divisible by {d}");
    quot.to_biguint().expect("irreducible count is nonnegative")
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Order of the centralizer of the primary canonical form with multiplicity
/// data `b` for an irreducible polynomial of degree `d`:
/// `prod_i prod_{j=1}^{b_i} (q^{d d_i} - q^{d (d_i - j)})`.
pub fn centralizer_order(d: usize, b: &MultiplicityVector, q: FieldOrder) -> Natural {
    let qd = q.as_natural().pow(d as u32);
    let mut acc = Natural::one();
    for i in 1..=b.as_slice().len() {
        let bi = b.get(i);
        if bi == 0 {
            continue;
        }
        let di = b.column_boxes(i);
        let top = qd.pow(di as u32);
        for j in 1..=bi {
            acc *= &top - qd.pow((di - j) as u32);
        }
    }
    acc
}

/// Hand enumerator of matrices whose characteristic polynomial is a power of
/// a fixed degree-`d` irreducible: `sum_b x^{d w(b)} y^{parts(b)} / c(d, b)`,
/// the empty `b` contributing the constant 1.
pub fn cycle_factor(d: usize, q: FieldOrder, order: usize) -> XSeries {
    assert!(d >= 1, "irreducible polynomials have degree >= 1");
    let mut coeffs = vec![YPoly::zero(); order + 1];
    for b in enumerate_multiplicity_vectors(order / d) {
        let n = d * b.weight();
        let c = rational_from(&centralizer_order(d, &b, q));
        let term = YPoly::monomial(b.parts(), Rational::one() / c);
        coeffs[n] = coeffs[n].add(&term);
    }
    XSeries::from_coeffs(order, coeffs)
}

/// Formula engine for the named sequences at one field order.
///
/// All group orders come from one [`GammaTable`], so a corrupted table
/// propagates everywhere and trips the internal cross-checks.
#[derive(Debug, Clone)]
pub struct QSequences {
    gammas: GammaTable,
}

impl QSequences {
    pub fn new(q: FieldOrder, max_n: usize) -> Self {
        Self {
            gammas: GammaTable::new(q, max_n),
        }
    }

    pub fn with_gammas(gammas: GammaTable) -> Self {
        Self { gammas }
    }

    pub fn q(&self) -> FieldOrder {
        self.gammas.q()
    }

    pub fn max_n(&self) -> usize {
        self.gammas.max_n()
    }

    pub fn gammas(&self) -> &GammaTable {
        &self.gammas
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n > self.max_n() {
            return Err(Error::InvalidArgument(format!(
                "n = {n} exceeds the engine size {}",
                self.max_n()
            )));
        }
        Ok(())
    }

    fn agree(left: &str, lvalue: &Natural, right: &str, rvalue: &Natural) -> Result<()> {
        if lvalue != rvalue {
            return Err(Error::Disagreement {
                left: left.to_string(),
                lvalue: lvalue.to_string(),
                right: right.to_string(),
                rvalue: rvalue.to_string(),
            });
        }
        Ok(())
    }

    /// `sums[k] = sum over compositions n = n_1 + ... + n_k (n_i >= 1) of
    /// gamma_n / prod gamma_{n_i}`, for `k <= max_parts`. Compositions are
    /// visited depth-first in lexicographic order; nothing is stored.
    fn composition_sums(&self, n: usize, max_parts: usize) -> Result<Vec<Natural>> {
        let splits = GammaTable::split_counts(&self.gammas)?;
        let mut sums = vec![Natural::zero(); max_parts + 1];
        fn walk(
            remaining: usize,
            depth: usize,
            max_parts: usize,
            running: &Natural,
            splits: &[Vec<Natural>],
            sums: &mut [Natural],
        ) {
            if remaining == 0 {
                sums[depth] += running;
                return;
            }
            if depth == max_parts {
                return;
            }
            // the remaining parts_left parts each need at least one dimension
            let parts_left = max_parts - depth;
            let lowest_first = if parts_left == 1 { remaining } else { 1 };
            for first in lowest_first..=remaining {
                let next = running * &splits[remaining][first];
                walk(remaining - first, depth + 1, max_parts, &next, splits, sums);
            }
        }
        walk(n, 0, max_parts, &Natural::one(), &splits, &mut sums);
        Ok(sums)
    }

    /// `{n k}_q` for all `k <= n` from the composition sum divided by `k!`.
    fn stirling_subset_direct(&self, n: usize, max_k: usize) -> Result<Vec<Natural>> {
        let sums = self.composition_sums(n, max_k)?;
        sums.iter()
            .enumerate()
            .map(|(k, s)| {
                let r = rational_from(s) / rational_from(&factorial(k));
                to_natural(&r, &format!("composition sum for {{{n} {k}}}_q divided by {k}!"))
            })
            .collect()
    }

    /// Hand table of the family with one card in every dimension, via
    /// `exp(y sum_r x^r / gamma_r)`.
    fn stirling_subset_series(&self, order: usize) -> Result<HandTable> {
        let gammas = self.truncated_gammas(order);
        let ones = DeckSpec::new(self.q(), (1..=order).map(|r| (r, Natural::one())))?;
        HandTable::from_series_with(&hand_enumerator_with(&ones, &gammas), &gammas)
    }

    fn truncated_gammas(&self, order: usize) -> GammaTable {
        let mut t = GammaTable::new(self.q(), order);
        for n in 0..=order {
            if self.gammas.get(n) != t.get(n) {
                t = t.with_override(n, self.gammas.get(n).clone());
            }
        }
        t
    }

    /// Number of splittings of an `n`-dimensional space into `k` nonzero
    /// subspaces.
    pub fn stirling_subset(&self, n: usize, k: usize) -> Result<Natural> {
        self.check_n(n)?;
        if k > n {
            return Ok(Natural::zero());
        }
        let direct = self.stirling_subset_direct(n, k)?.swap_remove(k);
        let series = self.stirling_subset_series(n)?.get(n, k);
        Self::agree(
            &format!("composition sum {{{n} {k}}}_q"),
            &direct,
            &format!("gamma_{n} [x^{n} y^{k}] exp(y D)"),
            &series,
        )?;
        Ok(direct)
    }

    /// Rows `0..=n_max` of `{n k}_q`, row `n` holding `k = 0..=n`.
    pub fn stirling_subset_rows(&self, n_max: usize) -> Result<Vec<Vec<Natural>>> {
        self.check_n(n_max)?;
        let series = self.stirling_subset_series(n_max)?;
        (0..=n_max)
            .map(|n| {
                let direct = self.stirling_subset_direct(n, n)?;
                for (k, value) in direct.iter().enumerate() {
                    Self::agree(
                        &format!("composition sum {{{n} {k}}}_q"),
                        value,
                        &format!("gamma_{n} [x^{n} y^{k}] exp(y D)"),
                        &series.get(n, k),
                    )?;
                }
                Ok(direct)
            })
            .collect()
    }

    /// Number of direct-sum decompositions of an `n`-dimensional space.
    pub fn bell(&self, n: usize) -> Result<Natural> {
        self.check_n(n)?;
        Ok(self.stirling_subset_direct(n, n)?.into_iter().sum())
    }

    /// `b_q(0..=n_max)`, checked against the one-variable series
    /// `exp(sum_r x^r / gamma_r)`.
    pub fn bell_row(&self, n_max: usize) -> Result<Vec<Natural>> {
        let rows = self.stirling_subset_rows(n_max)?;
        let gammas = self.truncated_gammas(n_max);
        let deck: Vec<Rational> = (0..=n_max)
            .map(|r| {
                if r == 0 {
                    Rational::zero()
                } else {
                    Rational::one() / gammas.rational(r)
                }
            })
            .collect();
        let egf = XSeries::from_x_coeffs(n_max, deck).exp()?.at_y_one();
        rows.into_iter()
            .enumerate()
            .map(|(n, row)| {
                let total: Natural = row.into_iter().sum();
                let from_egf = to_natural(&(&egf[n] * gammas.rational(n)), &format!("gamma_{n} [x^{n}] bell egf"))?;
                Self::agree(&format!("sum_k {{{n} k}}_q"), &total, &format!("bell egf at {n}"), &from_egf)?;
                Ok(total)
            })
            .collect()
    }

    /// Diagonalizations of `n x n` matrices: `(gamma_n / n!) (q / (q-1))^n`,
    /// checked against the family with `q` one-dimensional cards.
    pub fn diagonalizations(&self, n: usize) -> Result<Natural> {
        self.check_n(n)?;
        let q = self.q().get();
        let ratio = Rational::new(q.into(), (q - 1).into());
        let mut value = self.gammas.rational(n) / rational_from(&factorial(n));
        for _ in 0..n {
            value *= &ratio;
        }
        let closed = to_natural(&value, &format!("(gamma_{n}/{n}!) (q/(q-1))^{n}"))?;
        let family = self.single_line_family(n, q)?;
        Self::agree(
            &format!("closed form diagonalizations({n})"),
            &closed,
            &format!("hand table of {{1: q}} at ({n},{n})"),
            &family,
        )?;
        Ok(closed)
    }

    /// Diagonalizations of invertible `n x n` matrices: `gamma_n / n!`.
    pub fn invertible_diagonalizations(&self, n: usize) -> Result<Natural> {
        self.check_n(n)?;
        let value = self.gammas.rational(n) / rational_from(&factorial(n));
        let closed = to_natural(&value, &format!("gamma_{n}/{n}!"))?;
        let family = self.single_line_family(n, self.q().get() - 1)?;
        Self::agree(
            &format!("closed form invertible diagonalizations({n})"),
            &closed,
            &format!("hand table of {{1: q-1}} at ({n},{n})"),
            &family,
        )?;
        Ok(closed)
    }

    fn single_line_family(&self, n: usize, cards: u64) -> Result<Natural> {
        let gammas = self.truncated_gammas(n);
        let f = DeckSpec::from_sizes(self.q(), &[(1, cards)])?;
        Ok(HandTable::from_series_with(&hand_enumerator_with(&f, &gammas), &gammas)?.get(n, n))
    }

    /// `(1 + y sum_{m>=1} x^m / gamma_m)^q`: one single-card family per
    /// eigenvalue.
    fn diagonalizable_series(&self, order: usize) -> Result<HandTable> {
        let gammas = self.truncated_gammas(order);
        let mut coeffs = vec![YPoly::one()];
        coeffs.extend((1..=order).map(|m| YPoly::monomial(1, Rational::one() / gammas.rational(m))));
        let single = XSeries::from_coeffs(order, coeffs);
        HandTable::from_series_with(&single.pow(self.q().get()), &gammas)
    }

    /// Direct route: the sum over compositions `n_1 + ... + n_q = n` with
    /// `n_i >= 0`, grouped by the set of `k` nonzero slots, which
    /// contributes `C(q, k)` times the positive composition sum.
    fn diagonalizable_direct(&self, n: usize) -> Result<Vec<Natural>> {
        let q = self.q().get() as usize;
        let max_k = n.min(q);
        let sums = self.composition_sums(n, max_k)?;
        Ok(sums
            .into_iter()
            .enumerate()
            .map(|(k, s)| s * binomial(q, k))
            .collect())
    }

    /// Diagonalizable `n x n` matrices with exactly `k` distinct eigenvalues,
    /// `k = 0..=min(n, q)`.
    pub fn diagonalizable_row(&self, n: usize) -> Result<Vec<Natural>> {
        self.check_n(n)?;
        let direct = self.diagonalizable_direct(n)?;
        let series = self.diagonalizable_series(n)?;
        for (k, value) in direct.iter().enumerate() {
            Self::agree(
                &format!("composition sum diagonalizable({n}, k={k})"),
                value,
                &format!("gamma_{n} [x^{n} y^{k}] H_diag"),
                &series.get(n, k),
            )?;
        }
        Ok(direct)
    }

    pub fn diagonalizable_by_eigenvalues(&self, n: usize, k: usize) -> Result<Natural> {
        Ok(self
            .diagonalizable_row(n)?
            .get(k)
            .cloned()
            .unwrap_or_else(Natural::zero))
    }

    pub fn diagonalizable(&self, n: usize) -> Result<Natural> {
        Ok(self.diagonalizable_row(n)?.into_iter().sum())
    }

    /// Idempotent `n x n` matrices, from `2 {n 2}_q + 2` and from
    /// `sum_j gamma_n / (gamma_j gamma_{n-j})`.
    pub fn projections(&self, n: usize) -> Result<Natural> {
        self.check_n(n)?;
        // at n = 0 the zero and identity matrices coincide
        let from_stirling = if n == 0 {
            Natural::one()
        } else {
            self.stirling_subset(n, 2)? * 2u32 + 2u32
        };
        let mut from_sum = Natural::zero();
        for j in 0..=n {
            from_sum += self.gammas.multinomial(&[j, n - j])?;
        }
        Self::agree(
            &format!("2 {{{n} 2}}_q + 2"),
            &from_stirling,
            &format!("sum_j gamma_{n}/(gamma_j gamma_{{{n}-j}})"),
            &from_sum,
        )?;
        Ok(from_sum)
    }

    /// `prod_d cycle_factor(d)^{m_d}` truncated at `order`, with `m_1`
    /// lowered by one when the polynomial `t` is excluded.
    pub fn cycle_series(&self, order: usize, include_t: bool) -> XSeries {
        let q = self.q();
        let mut acc = XSeries::one(order);
        for d in 1..=order {
            let mut m = irreducible_poly_count(d, q);
            if d == 1 && !include_t {
                m -= 1u32;
            }
            if m.is_zero() {
                continue;
            }
            let factor = cycle_factor(d, q, order).pow_big(&m);
            acc = acc.checked_mul(&factor).expect("same order");
        }
        acc
    }

    /// `[n k]_q` for `k = 0..=n`: matrices (invertible unless `include_t`)
    /// with `k` summands in the primary rational canonical form.
    pub fn stirling_cycle_rows(&self, n_max: usize, include_t: bool) -> Result<Vec<Vec<Natural>>> {
        self.check_n(n_max)?;
        let gammas = self.truncated_gammas(n_max);
        let table = HandTable::from_series_with(&self.cycle_series(n_max, include_t), &gammas)?;
        Ok(table.rows().to_vec())
    }

    pub fn stirling_cycle(&self, n: usize, k: usize, include_t: bool) -> Result<Natural> {
        self.check_n(n)?;
        Ok(self.stirling_cycle_rows(n, include_t)?[n]
            .get(k)
            .cloned()
            .unwrap_or_else(Natural::zero))
    }
}

fn binomial(n: usize, k: usize) -> Natural {
    if k > n {
        return Natural::zero();
    }
    let mut acc = Natural::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn q_stirling_subset(n: usize, k: usize, q: FieldOrder) -> Result<Natural> {
    QSequences::new(q, n).stirling_subset(n, k)
}

pub fn q_bell(n: usize, q: FieldOrder) -> Result<Natural> {
    QSequences::new(q, n).bell(n)
}

pub fn diagonalization_count(n: usize, q: FieldOrder) -> Result<Natural> {
    QSequences::new(q, n).diagonalizations(n)
}

pub fn invertible_diagonalization_count(n: usize, q: FieldOrder) -> Result<Natural> {
    QSequences::new(q, n).invertible_diagonalizations(n)
}

pub fn diagonalizable_count(n: usize, q: FieldOrder) -> Result<Natural> {
    QSequences::new(q, n).diagonalizable(n)
}

pub fn diagonalizable_count_by_eigenvalues(n: usize, k: usize, q: FieldOrder) -> Result<Natural> {
    QSequences::new(q, n).diagonalizable_by_eigenvalues(n, k)
}

pub fn projection_count(n: usize, q: FieldOrder) -> Result<Natural> {
    QSequences::new(q, n).projections(n)
}

pub fn q_stirling_cycle(n: usize, k: usize, q: FieldOrder, include_t: bool) -> Result<Natural> {
    QSequences::new(q, n).stirling_cycle(n, k, include_t)
}
