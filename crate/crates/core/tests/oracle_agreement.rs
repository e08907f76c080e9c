//! Closed forms against exhaustive enumeration over small prime fields.

use num_bigint::BigUint;
use qexp::arith::{gl_order, FieldOrder};
use qexp::oracle::{self, FqMatrix, FqPolynomial, Prime};
use qexp::qcombinatorics::{
    centralizer_order, enumerate_multiplicity_vectors, irreducible_poly_count, QSequences,
};

fn fq(q: u64) -> FieldOrder {
    FieldOrder::new(q).unwrap()
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

#[test]
fn census_matches_formulas() {
    for (p, n_max) in [(2u64, 3usize), (3, 2)] {
        let engine = QSequences::new(fq(p), n_max);
        for n in 1..=n_max {
            let census = oracle::census(n, prime(p)).unwrap();
            assert_eq!(big(census.projections), engine.projections(n).unwrap());
            assert_eq!(big(census.diagonalizable), engine.diagonalizable(n).unwrap());
            assert_eq!(big(census.invertible), gl_order(n, fq(p)));

            let row = engine.diagonalizable_row(n).unwrap();
            for (k, expected) in row.iter().enumerate() {
                let got = census.diagonalizable_by_eigenvalues.get(&k).copied().unwrap_or(0);
                assert_eq!(big(got), *expected, "p={p} n={n} k={k}");
            }

            let inv = &engine.stirling_cycle_rows(n, false).unwrap()[n];
            let all = &engine.stirling_cycle_rows(n, true).unwrap()[n];
            for k in 0..=n {
                let got = census.summands_invertible.get(&k).copied().unwrap_or(0);
                assert_eq!(big(got), inv[k], "invertible p={p} n={n} k={k}");
                let got = census.summands_all.get(&k).copied().unwrap_or(0);
                assert_eq!(big(got), all[k], "all p={p} n={n} k={k}");
            }
        }
    }
}

#[test]
fn decompositions_match_stirling_subset() {
    for (p, n_max) in [(2u64, 3usize), (3, 3)] {
        let rows = QSequences::new(fq(p), n_max).stirling_subset_rows(n_max).unwrap();
        for n in 0..=n_max {
            for k in 0..=n {
                let census = oracle::count_decompositions(n, k, prime(p)).unwrap();
                assert_eq!(big(census), rows[n][k], "p={p} n={n} k={k}");
            }
        }
    }
}

#[test]
fn irreducible_counts_match_enumeration() {
    for (p, d_max) in [(2u64, 6usize), (3, 4), (5, 3)] {
        let irr = oracle::monic_irreducibles(prime(p), d_max);
        for d in 1..=d_max {
            let found = irr.iter().filter(|f| f.degree() == Some(d)).count() as u64;
            assert_eq!(big(found), irreducible_poly_count(d, fq(p)), "p={p} d={d}");
        }
    }
}

/// Matrices with characteristic polynomial `phi^w` number
/// `sum_{w(b) = w} gamma_{dw} / c(d, b)`.
#[test]
fn class_sizes_sum_to_primary_census() {
    let p = 2u64;
    let phis = [
        (1usize, FqPolynomial::new(prime(p), vec![1, 1])),
        (2usize, FqPolynomial::new(prime(p), vec![1, 1, 1])),
    ];
    for (d, phi) in phis {
        for w in 1..=2usize {
            let n = d * w;
            let target = phi.pow(w);
            let census = oracle::enumerate_matrices(n, prime(p))
                .unwrap()
                .filter(|m| oracle::char_poly(m).unwrap() == target)
                .count() as u64;
            let formula: BigUint = enumerate_multiplicity_vectors(w)
                .into_iter()
                .filter(|b| b.weight() == w)
                .map(|b| {
                    let c = centralizer_order(d, &b, fq(p));
                    let g = gl_order(n, fq(p));
                    assert!(&g % &c == big(0));
                    g / c
                })
                .sum();
            assert_eq!(big(census), formula, "d={d} w={w}");
        }
    }
}

#[test]
fn conjugacy_class_of_companion() {
    // GL_2(F_2) has two elements with characteristic polynomial t^2 + t + 1
    let phi = FqPolynomial::new(prime(2), vec![1, 1, 1]);
    let count = oracle::enumerate_matrices(2, prime(2))
        .unwrap()
        .filter(|m| oracle::char_poly(m).unwrap() == phi)
        .count();
    assert_eq!(count, 2);
    assert!(oracle::is_diagonalizable(&FqMatrix::identity(2, prime(2))));
}
