//! q-exponential families described by their deck sizes.
//!
//! A family is a sequence of decks `D_1, D_2, ...`; the only thing any count
//! depends on is `d_n = |D_n|`, so pictures are never materialized.
//!
//! Two independent routes produce the hand table of a family:
//!
//! * [`hand_enumerator`]: `H(x, y) = exp(y D(x))` evaluated as a series, then
//!   scaled by `gamma_n`.
//! * [`hand_counts_recursive`]: integer convolution only. Each single-deck
//!   family contributes `d_r^k gamma_{kr} / (k! gamma_r^k)` hands of `k`
//!   cards, and families are merged with
//!   `h(n,k) = sum gamma_n / (gamma_{n'} gamma_{n-n'}) h'(n',k') h''(n-n',k-k')`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{factorial, rational_from, to_natural, FieldOrder, GammaTable, Natural, Rational};
use crate::error::{Error, Result};
use crate::series::{HandTable, XSeries, YPoly};

/// Deck sizes `n -> d_n` of a q-exponential family. Zero entries are
/// dropped, so two specs are equal iff they describe the same family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeckSpec {
    q: FieldOrder,
    decks: BTreeMap<usize, Natural>,
}

impl DeckSpec {
    pub fn new(q: FieldOrder, decks: impl IntoIterator<Item = (usize, Natural)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, d) in decks {
            if n == 0 {
                return Err(Error::InvalidArgument(
                    "deck dimensions start at 1".into(),
                ));
            }
            if !d.is_zero() {
                *map.entry(n).or_insert_with(Natural::zero) += d;
            }
        }
        Ok(Self { q, decks: map })
    }

    pub fn empty(q: FieldOrder) -> Self {
        Self {
            q,
            decks: BTreeMap::new(),
        }
    }

    /// Convenience constructor from small deck sizes.
    pub fn from_sizes(q: FieldOrder, sizes: &[(usize, u64)]) -> Result<Self> {
        Self::new(q, sizes.iter().map(|&(n, d)| (n, Natural::from(d))))
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    /// `d_n`, zero when the deck is absent.
    pub fn deck_size(&self, n: usize) -> Natural {
        self.decks.get(&n).cloned().unwrap_or_else(Natural::zero)
    }

    /// Nonempty decks in ascending dimension.
    pub fn decks(&self) -> impl Iterator<Item = (usize, &Natural)> {
        self.decks.iter().map(|(&n, d)| (n, d))
    }
}

/// The merger: deck sizes add dimension by dimension.
pub fn merge(f1: &DeckSpec, f2: &DeckSpec) -> Result<DeckSpec> {
    if f1.q != f2.q {
        return Err(Error::FieldMismatch {
            left: f1.q.get(),
            right: f2.q.get(),
        });
    }
    DeckSpec::new(
        f1.q,
        f1.decks()
            .chain(f2.decks())
            .map(|(n, d)| (n, d.clone())),
    )
}

/// `D(x) = sum_n d_n x^n / gamma_n`, truncated at `order`.
pub fn deck_enumerator(f: &DeckSpec, order: usize) -> XSeries {
    deck_enumerator_with(f, &GammaTable::new(f.q, order))
}

pub fn deck_enumerator_with(f: &DeckSpec, gammas: &GammaTable) -> XSeries {
    let order = gammas.max_n();
    let mut coeffs = vec![Rational::zero(); order + 1];
    for (n, d) in f.decks().filter(|&(n, _)| n <= order) {
        coeffs[n] = rational_from(d) / gammas.rational(n);
    }
    XSeries::from_x_coeffs(order, coeffs)
}

/// `H(x, y) = exp(y D(x))`.
pub fn hand_enumerator(f: &DeckSpec, order: usize) -> XSeries {
    hand_enumerator_with(f, &GammaTable::new(f.q, order))
}

pub fn hand_enumerator_with(f: &DeckSpec, gammas: &GammaTable) -> XSeries {
    deck_enumerator_with(f, gammas)
        .times_y()
        .exp()
        .expect("deck enumerator has no constant term")
}

/// Hand table of a family, built by explicit convolution without any
/// series exponential.
pub fn hand_counts_recursive(f: &DeckSpec, order: usize) -> Result<HandTable> {
    hand_counts_recursive_with(f, &GammaTable::new(f.q, order))
}

pub fn hand_counts_recursive_with(f: &DeckSpec, gammas: &GammaTable) -> Result<HandTable> {
    let order = gammas.max_n();
    let splits = gammas.split_counts()?;
    let mut table = HandTable::unit(order);
    for (r, d) in f.decks().filter(|&(r, _)| r <= order) {
        let single = single_deck_table(r, d, gammas)?;
        table = convolve(&table, &single, &splits);
    }
    Ok(table)
}

/// Hands of the family with one deck of `d` cards in dimension `r`:
/// `h(kr, k) = d^k gamma_{kr} / (k! gamma_r^k)`.
fn single_deck_table(r: usize, d: &Natural, gammas: &GammaTable) -> Result<HandTable> {
    let order = gammas.max_n();
    let mut table = HandTable::unit(order);
    let gamma_r = gammas.rational(r);
    for k in 1..=order / r {
        let n = k * r;
        let mut value = rational_from(&d.pow(k as u32)) * gammas.rational(n);
        value /= rational_from(&factorial(k));
        for _ in 0..k {
            value /= &gamma_r;
        }
        let value = to_natural(&value, &format!("single deck r={r}: h({n},{k})"))?;
        table.set(n, k, value);
    }
    Ok(table)
}

/// Hand table of the merger of two families from their hand tables.
fn convolve(a: &HandTable, b: &HandTable, splits: &[Vec<Natural>]) -> HandTable {
    let order = a.order();
    let mut out = HandTable::unit(order);
    for n in 0..=order {
        for k in 0..=n {
            let mut acc = Natural::zero();
            for n1 in 0..=n {
                let n2 = n - n1;
                for k1 in 0..=k.min(n1) {
                    let k2 = k - k1;
                    if k2 > n2 {
                        continue;
                    }
                    let x = a.get(n1, k1);
                    if x.is_zero() {
                        continue;
                    }
                    let y = b.get(n2, k2);
                    if y.is_zero() {
                        continue;
                    }
                    acc += &splits[n][n1] * x * y;
                }
            }
            out.set(n, k, acc);
        }
    }
    out
}

/// `phi_n(y) = sum_k h(n,k) y^k`, read off the exponential formula.
pub fn phi_polynomial(f: &DeckSpec, n: usize, order: usize) -> Result<YPoly> {
    if n > order {
        return Err(Error::InvalidArgument(format!(
            "phi_{n} needs order >= {n}, got {order}"
        )));
    }
    let table = HandTable::from_series(&hand_enumerator(f, order), f.q)?;
    Ok(YPoly::new(table.row(n).iter().map(rational_from).collect()))
}

/// Checks `phi_n(u + v) = sum_m gamma_n / (gamma_m gamma_{n-m}) phi_m(u) phi_{n-m}(v)`
/// by expanding both sides as polynomials in `u`, `v`.
pub fn binomial_type_check(f: &DeckSpec, n: usize) -> Result<bool> {
    let gammas = GammaTable::new(f.q, n);
    let table = HandTable::from_series_with(&hand_enumerator_with(f, &gammas), &gammas)?;

    // lhs[i][j] is the coefficient of u^i v^j
    let mut lhs = vec![vec![Natural::zero(); n + 1]; n + 1];
    let pascal = pascal_rows(n);
    for k in 0..=n {
        let h = table.get(n, k);
        if h.is_zero() {
            continue;
        }
        for i in 0..=k {
            lhs[i][k - i] += &h * &pascal[k][i];
        }
    }

    let mut rhs = vec![vec![Natural::zero(); n + 1]; n + 1];
    for m in 0..=n {
        let split = gammas.multinomial(&[m, n - m])?;
        for i in 0..=m {
            let a = table.get(m, i);
            if a.is_zero() {
                continue;
            }
            for j in 0..=(n - m) {
                let b = table.get(n - m, j);
                if !b.is_zero() {
                    rhs[i][j] += &split * &a * b;
                }
            }
        }
    }
    Ok(lhs == rhs)
}

fn pascal_rows(n: usize) -> Vec<Vec<Natural>> {
    let mut rows: Vec<Vec<Natural>> = vec![vec![Natural::one()]];
    for k in 1..=n {
        let prev = &rows[k - 1];
        let row = (0..=k)
            .map(|i| {
                let left = if i > 0 { prev[i - 1].clone() } else { Natural::zero() };
                let right = prev.get(i).cloned().unwrap_or_else(Natural::zero);
                left + right
            })
            .collect();
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gl_order;
    use proptest::prelude::*;

    fn fq(q: u64) -> FieldOrder {
        FieldOrder::new(q).unwrap()
    }

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn deck_enumerators() {
        let q = fq(2);
        assert_eq!(deck_enumerator(&DeckSpec::empty(q), 5), XSeries::zero(5));
        let f = DeckSpec::from_sizes(q, &[(1, 2)]).unwrap();
        assert_eq!(deck_enumerator(&f, 5), XSeries::from_x_coeffs(5, vec![int(0), int(2)]));
        for q in [2, 3, 5] {
            let f = DeckSpec::from_sizes(fq(q), &[(1, q - 1)]).unwrap();
            assert_eq!(deck_enumerator(&f, 4), XSeries::from_x_coeffs(4, vec![int(0), int(1)]));
        }
    }

    #[test]
    fn deck_beyond_order_is_ignored() {
        let f = DeckSpec::from_sizes(fq(2), &[(1, 1), (9, 4)]).unwrap();
        let g = DeckSpec::from_sizes(fq(2), &[(1, 1)]).unwrap();
        assert_eq!(hand_enumerator(&f, 5), hand_enumerator(&g, 5));
        assert_eq!(hand_counts_recursive(&f, 5).unwrap(), hand_counts_recursive(&g, 5).unwrap());
    }

    #[test]
    fn rejects_dimension_zero() {
        assert!(DeckSpec::from_sizes(fq(2), &[(0, 1)]).is_err());
    }

    #[test]
    fn empty_family_has_one_hand() {
        let f = DeckSpec::empty(fq(3));
        assert_eq!(hand_enumerator(&f, 6), XSeries::one(6));
        assert_eq!(hand_counts_recursive(&f, 6).unwrap(), HandTable::unit(6));
    }

    #[test]
    fn invertible_diagonalizations_are_gamma_over_factorial() {
        for q in [2u64, 3, 4] {
            let f = DeckSpec::from_sizes(fq(q), &[(1, q - 1)]).unwrap();
            let h = hand_enumerator(&f, 7);
            let table = HandTable::from_series(&h, fq(q)).unwrap();
            for n in 0..=7 {
                let expected = gl_order(n, fq(q)) / factorial(n);
                assert_eq!(table.get(n, n), expected);
            }
        }
    }

    #[test]
    fn single_deck_splitting_counts() {
        let q = fq(2);
        for r in 1..=3 {
            let f = DeckSpec::from_sizes(q, &[(r, 1)]).unwrap();
            let table = HandTable::from_series(&hand_enumerator(&f, 9), q).unwrap();
            for k in 0..=9 / r {
                let gr = gl_order(r, q);
                let expected = gl_order(k * r, q) / (factorial(k) * gr.pow(k as u32));
                assert_eq!(table.get(k * r, k), expected, "r={r} k={k}");
            }
        }
    }

    #[test]
    fn merge_adds_decks() {
        let q = fq(2);
        let f = DeckSpec::from_sizes(q, &[(1, 1), (3, 2)]).unwrap();
        assert_eq!(merge(&f, &DeckSpec::empty(q)).unwrap(), f);
        let one = DeckSpec::from_sizes(q, &[(1, 1)]).unwrap();
        assert_eq!(
            merge(&one, &one).unwrap(),
            DeckSpec::from_sizes(q, &[(1, 2)]).unwrap()
        );
        assert!(matches!(
            merge(&one, &DeckSpec::empty(fq(3))),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn recursive_counts() {
        let q = fq(2);
        let f = DeckSpec::from_sizes(q, &[(1, 2)]).unwrap();
        assert_eq!(hand_counts_recursive(&f, 4).unwrap().get(2, 2), nat(12));

        // one line card and one plane card: complementary (line, plane) pairs
        let f = DeckSpec::from_sizes(q, &[(1, 1), (2, 1)]).unwrap();
        let t = hand_counts_recursive(&f, 5).unwrap();
        assert_eq!(t.get(3, 2), gaussian(&[1, 2], q));
        assert_eq!(t.get(3, 2), nat(28));
        assert_eq!(t, HandTable::from_series(&hand_enumerator(&f, 5), q).unwrap());
    }

    fn gaussian(parts: &[usize], q: FieldOrder) -> Natural {
        crate::arith::gaussian_multinomial(parts, q).unwrap()
    }

    #[test]
    fn phi_polynomials() {
        let q = fq(2);
        let f = DeckSpec::from_sizes(q, &[(1, 1)]).unwrap();
        assert_eq!(phi_polynomial(&f, 0, 4).unwrap(), YPoly::one());
        assert_eq!(phi_polynomial(&f, 2, 4).unwrap(), YPoly::monomial(2, int(3)));
        let ones = DeckSpec::from_sizes(q, &[(1, 1), (2, 1), (3, 1), (4, 1)]).unwrap();
        assert_eq!(
            phi_polynomial(&ones, 2, 4).unwrap(),
            YPoly::new(vec![int(0), int(1), int(3)])
        );
        assert!(phi_polynomial(&f, 5, 4).is_err());
    }

    #[test]
    fn binomial_type_small() {
        let f = DeckSpec::from_sizes(fq(3), &[(1, 2), (2, 1)]).unwrap();
        assert!(binomial_type_check(&f, 0).unwrap());
        assert!(binomial_type_check(&f, 1).unwrap());
        assert!(binomial_type_check(&f, 5).unwrap());
    }

    #[test]
    fn pascal_rows_are_binomials() {
        let pascal = pascal_rows(4);
        assert_eq!(pascal[4], vec![nat(1), nat(4), nat(6), nat(4), nat(1)]);
    }

    fn deck_spec() -> impl Strategy<Value = DeckSpec> {
        (
            prop::sample::select(vec![2u64, 3]),
            prop::collection::btree_map(1usize..=6, 0u64..=5, 0..=6),
        )
            .prop_map(|(q, m)| {
                DeckSpec::new(fq(q), m.into_iter().map(|(n, d)| (n, Natural::from(d)))).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn exp_formula_matches_convolution(f in deck_spec()) {
            let exp_path = HandTable::from_series(&hand_enumerator(&f, 8), f.q()).unwrap();
            prop_assert_eq!(exp_path, hand_counts_recursive(&f, 8).unwrap());
        }

        #[test]
        fn merger_multiplies_enumerators(a in deck_spec(), b in deck_spec()) {
            let b = DeckSpec::new(a.q(), b.decks().map(|(n, d)| (n, d.clone()))).unwrap();
            let merged = hand_enumerator(&merge(&a, &b).unwrap(), 7);
            let product = hand_enumerator(&a, 7).checked_mul(&hand_enumerator(&b, 7)).unwrap();
            prop_assert_eq!(merged, product);
        }

        #[test]
        fn hand_table_shape(f in deck_spec()) {
            let t = hand_counts_recursive(&f, 7).unwrap();
            for n in 1..=7 {
                prop_assert!(t.get(n, 0).is_zero());
                prop_assert!(t.get(n, n + 1).is_zero());
            }
            prop_assert!(t.get(0, 0).is_one());
        }

        #[test]
        fn binomial_type_random(f in deck_spec(), n in 0usize..=6) {
            prop_assert!(binomial_type_check(&f, n).unwrap());
        }
    }
}
