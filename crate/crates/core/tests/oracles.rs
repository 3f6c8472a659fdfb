use std::collections::BTreeSet;

use e8bound::graph::StarGraph;
use e8bound::invariants::{mu_bar_of_form, wu_class};
use e8bound::lattice::{is_negative_definite, is_unimodular, signature, SymmetricMatrix};
use e8bound::search::{partition_parity_sample, partitions, search_even_stars, solve_family, RANK8_TYPES};
use e8bound::seifert::{resolve, BrieskornSpec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn small(m: &SymmetricMatrix<BigInt>) -> Vec<Vec<i64>> {
    m.rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

// All w in (Z/2)^n with w·e_i = e_i·e_i mod 2 for every i.
fn wu_by_enumeration(rows: &[Vec<i64>]) -> Vec<Vec<u8>> {
    let n = rows.len();
    (0u32..1 << n)
        .map(|mask| (0..n).map(|i| ((mask >> i) & 1) as u8).collect::<Vec<u8>>())
        .filter(|w| (0..n).all(|i| (0..n).map(|j| w[j] as i64 * rows[i][j]).sum::<i64>().rem_euclid(2) == rows[i][i].rem_euclid(2)))
        .collect()
}

fn coprime_triple() -> impl Strategy<Value = Vec<i64>> {
    (2i64..=13, 2i64..=13, 2i64..=13)
        .prop_filter("coprime", |&(p, q, r)| p.gcd(&q) == 1 && p.gcd(&r) == 1 && q.gcd(&r) == 1)
        .prop_map(|(p, q, r)| vec![p, q, r])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wu_class_matches_enumeration(ms in coprime_triple()) {
        let m = resolve(&BrieskornSpec::new(ms).unwrap()).gram_matrix();
        prop_assume!(m.rank() <= 14);
        let rows = small(&m);
        let all = wu_by_enumeration(&rows);
        prop_assert_eq!(all.len(), 1);
        let w = wu_class(&m).unwrap();
        prop_assert_eq!(&w.coefficients, &all[0]);
        let ww: i64 = (0..rows.len()).flat_map(|i| (0..rows.len()).map(move |j| (i, j))).map(|(i, j)| all[0][i] as i64 * all[0][j] as i64 * rows[i][j]).sum();
        prop_assert_eq!(mu_bar_of_form(&m).unwrap() * 8, signature(&m) - ww);
    }
}

type Equation = fn(i64, i64, i64) -> bool;

const EQUATIONS: [Equation; 7] = [
    |a, b, c| 3 * a * a + 4 * a * b + 3 * b * b == 5 * c - 2,
    |a, b, c| 3 * a * a + 3 * a * b + 2 * b * b == 5 * c - 2,
    |a, b, c| 6 * a * a + 9 * a * b + 6 * b * b == 7 * c - 2,
    |a, b, c| 6 * a * a + 8 * a * b + 5 * b * b == 7 * c - 2,
    |a, b, c| 5 * a * a + 5 * a * b + 3 * b * b == 7 * c - 2,
    |a, b, c| 15 * a * a + 20 * a * b + 12 * b * b == 16 * c - 1,
    |a, b, c| 12 * a * a + 12 * a * b + 7 * b * b == 16 * c - 1,
];

#[test]
fn solve_family_matches_triple_loop() {
    for (k, eq) in EQUATIONS.iter().enumerate() {
        let id = k as u8 + 1;
        let mut naive = Vec::new();
        for a in 1..=6 {
            for b in 1..=40 {
                for c in 1..=3000 {
                    if eq(a, b, c) {
                        naive.push((a, b, c, a.gcd(&b) == 1));
                    }
                }
            }
        }
        let got: Vec<_> = solve_family(id, 6, 40).unwrap().into_iter().map(|s| (s.a, s.b, s.c, s.gcd_ok)).collect();
        assert_eq!(got, naive, "family {id}");
        assert!(!got.is_empty());
    }
}

fn canonical(centre: i64, legs: &[Vec<i64>], lengths: &[usize]) -> (i64, Vec<Vec<i64>>) {
    let mut legs = legs.to_vec();
    // sort runs of equal-length legs by weight magnitude
    let mut i = 0;
    while i < legs.len() {
        let j = (i..legs.len()).find(|&j| lengths[j] != lengths[i]).unwrap_or(legs.len());
        legs[i..j].sort_by_key(|l| l.iter().map(|w| -w).collect::<Vec<_>>());
        i = j;
    }
    (centre, legs)
}

fn brute_force(lengths: &[usize], centre: i64, bound: i64) -> BTreeSet<(i64, Vec<Vec<i64>>)> {
    let slots: usize = lengths.iter().sum();
    let mut out = BTreeSet::new();
    let mut xs = vec![1i64; slots];
    loop {
        let mut it = xs.iter();
        let legs: Vec<Vec<i64>> = lengths.iter().map(|&n| (0..n).map(|_| -2 * it.next().unwrap()).collect()).collect();
        let m = StarGraph::new(-2 * centre, legs.clone()).gram_matrix();
        if is_unimodular(&m) && is_negative_definite(&m) {
            out.insert(canonical(-2 * centre, &legs, lengths));
        }
        let mut k = 0;
        loop {
            if k == slots {
                return out;
            }
            xs[k] += 1;
            if xs[k] <= bound {
                break;
            }
            xs[k] = 1;
            k += 1;
        }
    }
}

#[test]
fn star_search_matches_brute_force() {
    let mut cases: Vec<(Vec<usize>, i64)> = RANK8_TYPES.iter().map(|t| (t.to_vec(), 3)).collect();
    cases.push((vec![2, 2, 2, 1], 4));
    for (lengths, bound) in cases {
        for centre in [1, 2] {
            let (sols, _, _) = search_even_stars(&lengths, centre, bound);
            let got: BTreeSet<_> = sols.iter().map(|s| (s.star.central_weight, s.star.branches.clone())).collect();
            assert_eq!(got, brute_force(&lengths, centre, bound), "{lengths:?} centre {centre}");
        }
    }
    assert_eq!(brute_force(&[2, 2, 2, 1], 1, 4).len(), 2);
    assert_eq!(brute_force(&[1, 2, 4], 1, 3).len(), 1);
}

#[test]
fn partitions_of_seven() {
    let ps = partitions(7, 4);
    assert_eq!(ps.len(), 7);
    for p in &ps {
        assert_eq!(p.iter().sum::<usize>(), 7);
        let s = partition_parity_sample(p, 100, 64, 7);
        if p == &[2, 2, 2, 1] {
            assert!(s.even_determinants < 100);
        } else {
            assert_eq!(s.even_determinants, 100, "{p:?}");
        }
    }
}
