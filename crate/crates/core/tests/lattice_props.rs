#![allow(clippy::needless_range_loop)]

use e8bound::lattice::{
    determinant, inertia, is_even, is_negative_definite, is_positive_definite, is_unimodular, recognize_negative_e8, signature,
    SymmetricMatrix,
};
use e8bound::{IntegerSymmetricMatrix, SmallSymmetricMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;

// Laplace expansion along the first row.
fn cofactor_det(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0i128;
    for col in 0..n {
        let minor: Vec<Vec<i64>> =
            rows[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &x)| x).collect()).collect();
        let sign = if col % 2 == 0 { 1 } else { -1 };
        if rows[0][col] != 0 {
            total += sign * rows[0][col] as i128 * cofactor_det(&minor);
        }
    }
    total
}

fn symmetric(max_n: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (0..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-range..=range, n * (n + 1) / 2).prop_map(move |upper| {
            let mut rows = vec![vec![0; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i..n {
                    let x = it.next().unwrap();
                    rows[i][j] = x;
                    rows[j][i] = x;
                }
            }
            rows
        })
    })
}

fn big(rows: &[Vec<i64>]) -> IntegerSymmetricMatrix {
    let r: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    SymmetricMatrix::from_i64_rows(&r)
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

// Product of elementary row operations: unimodular by construction.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<BigInt>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        for c in 0..n {
            u[i][c] += k * u[j][c];
        }
    }
    u.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn determinant_matches_cofactor_expansion(rows in symmetric(9, 6)) {
        prop_assert_eq!(determinant(&big(&rows)), BigInt::from(cofactor_det(&rows)));
        let small: SmallSymmetricMatrix = big(&rows).convert().unwrap();
        prop_assert_eq!(i128::from(determinant(&small)), cofactor_det(&rows));
    }

    #[test]
    fn permutation_preserves_det_and_inertia(
        (rows, perm) in symmetric(8, 5).prop_flat_map(|r| { let n = r.len(); (Just(r), permutation(n)) })
    ) {
        let m = big(&rows);
        let p = m.permuted(&perm);
        prop_assert_eq!(determinant(&m), determinant(&p));
        prop_assert_eq!(inertia(&m), inertia(&p));
        prop_assert_eq!(is_even(&m), is_even(&p));
    }

    #[test]
    fn inertia_accounts_for_every_dimension(rows in symmetric(8, 4)) {
        let m = big(&rows);
        let i = inertia(&m);
        prop_assert_eq!(i.positive + i.negative + i.zero, m.rank());
        prop_assert_eq!(i.zero == 0, determinant(&m) != BigInt::from(0));
        if is_negative_definite(&m) {
            prop_assert_eq!(signature(&m), -(m.rank() as i64));
        }
        if is_positive_definite(&m) {
            prop_assert_eq!(signature(&m), m.rank() as i64);
        }
    }

    #[test]
    fn diagonally_dominant_negative_is_negdef(rows in symmetric(8, 3)) {
        let n = rows.len();
        let mut rows = rows;
        for i in 0..n {
            let off: i64 = (0..n).filter(|&j| j != i).map(|j| rows[i][j].abs()).sum();
            rows[i][i] = -off - 1;
        }
        let m = big(&rows);
        prop_assert!(is_negative_definite(&m));
        prop_assert_eq!(signature(&m), -(n as i64));
    }

    #[test]
    fn e8_survives_unimodular_change_of_basis(ops in prop::collection::vec((0usize..8, 0usize..8, -2i64..=2), 0..24)) {
        let u = unimodular(8, &ops);
        let m = SymmetricMatrix::<BigInt>::negative_e8().congruent(&u);
        prop_assert!(recognize_negative_e8(&m).is_negative_e8());
        prop_assert!(is_unimodular(&m) && is_even(&m));
    }

    #[test]
    fn text_round_trip(rows in symmetric(7, 50)) {
        let m = big(&rows);
        prop_assert_eq!(SymmetricMatrix::parse_text(&m.to_text()).unwrap(), m);
    }
}

#[test]
fn hyperbolic_plane_is_not_negative_e8() {
    let h = SymmetricMatrix::<BigInt>::hyperbolic();
    assert_eq!(determinant(&h), BigInt::from(-1));
    assert_eq!(signature(&h), 0);
    assert!(!recognize_negative_e8(&h).is_negative_e8());
}

#[test]
fn empty_matrix_has_unit_determinant() {
    assert_eq!(determinant(&IntegerSymmetricMatrix::zeros(0)), BigInt::from(1));
}
