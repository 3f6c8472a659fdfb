use e8bound::graph::StarGraph;
use e8bound::invariants::{d_invariant, invariant_report, mu_bar, rokhlin_mu};
use e8bound::lattice::{determinant, is_even, is_negative_definite, is_unimodular, recognize_negative_e8, signature};
use e8bound::search::DiophantineFamily;
use e8bound::seifert::{
    brieskorn_from_seifert, hj_expansion, read_seifert, resolve, seifert_from_brieskorn, BrieskornSpec, SeifertData, SeifertError,
};
use e8bound::tables::{table1_sweep, Edition};
use num_bigint::BigInt;

fn spec(ms: &[i64]) -> BrieskornSpec {
    BrieskornSpec::new(ms.to_vec()).unwrap()
}

#[test]
fn poincare_sphere_resolves_to_e8() {
    let star = resolve(&spec(&[2, 3, 5]));
    let mut lengths = star.branch_lengths();
    lengths.sort();
    assert_eq!(lengths, vec![1, 2, 4]);
    assert_eq!(star.central_weight, -2);
    assert!(star.branches.iter().flatten().all(|&w| w == -2));
    assert!(recognize_negative_e8(&star.gram_matrix()).is_negative_e8());
}

#[test]
fn seifert_data_of_small_spheres() {
    assert_eq!(seifert_from_brieskorn(&spec(&[2, 3, 5])), SeifertData::new(2, vec![(2, 1), (3, 2), (5, 4)]).unwrap());
    let s3 = SeifertData::from_multiplicities(&[2, 3, 1]).unwrap();
    assert_eq!(s3.legs, vec![(2, 1), (3, 1)]);
    assert_eq!(s3.b0, 1);
    assert!(matches!(BrieskornSpec::new(vec![2, 3, 4]), Err(SeifertError::NotCoprime(2, 4))));
}

#[test]
fn figure_eight_resolutions() {
    assert_eq!(hj_expansion(11, 9), vec![2, 2, 2, 2, 3]);
    for n in 1..=6i64 {
        let star = resolve(&spec(&[2, 3, 6 * n - 1]));
        assert_eq!(star.rank() as i64, n + 7, "n = {n}");
    }
    let m = resolve(&spec(&[2, 3, 11])).gram_matrix();
    assert!(!is_even(&m));
    assert!(is_unimodular(&m));
    assert_eq!(signature(&m), -9);
    let longest = resolve(&spec(&[2, 3, 17])).branches.into_iter().max_by_key(Vec::len).unwrap();
    assert_eq!(longest, vec![-2, -2, -2, -2, -3, -2]);
}

#[test]
fn rank_eight_spheres() {
    for ms in [&[2, 3, 5][..], &[3, 4, 7], &[2, 3, 7, 11], &[2, 3, 7, 23], &[3, 4, 7, 43]] {
        let m = resolve(&spec(ms)).gram_matrix();
        assert_eq!(m.rank(), 8, "{ms:?}");
        assert_eq!(determinant(&m), BigInt::from(1));
        assert!(is_even(&m) && is_negative_definite(&m));
        assert_eq!(d_invariant(&spec(ms)), 2, "{ms:?}");
        let r = invariant_report(&spec(ms)).unwrap();
        assert_eq!((r.mu, r.mu_bar), (1, -1));
    }
}

#[test]
fn four_leg_star_reads_back_as_sphere() {
    // centre -2, legs (-2,-2), (-2,-6), (-4,-2), (-2)
    let star = StarGraph::new(-2, vec![vec![-2, -2], vec![-2, -6], vec![-4, -2], vec![-2]]);
    let m = star.gram_matrix();
    assert!(recognize_negative_e8(&m).is_negative_e8());
    assert_eq!(brieskorn_from_seifert(&read_seifert(&star).unwrap()).unwrap(), spec(&[2, 3, 7, 11]));
}

#[test]
fn mu_bar_alternates_along_the_minus_family() {
    for n in 1..=10i64 {
        let s = spec(&[2, 3, 6 * n - 1]);
        assert_eq!(mu_bar(&s), if n % 2 == 1 { -1 } else { 0 }, "n = {n}");
        assert_eq!(i64::from(rokhlin_mu(&s)), mu_bar(&s).rem_euclid(2));
    }
}

#[test]
fn table1_outputs_bound_negative_e8() {
    let mut checked = 0;
    for rec in table1_sweep(5, Edition::Corrected) {
        if !rec.positive {
            continue;
        }
        assert!(rec.satisfies, "{rec:?}");
        let s = &rec.solution;
        let config = DiophantineFamily::get(s.family).unwrap().configuration(s.a, s.b, s.c);
        assert!(recognize_negative_e8(&config.gram_matrix()).is_negative_e8(), "{rec:?}");
        checked += 1;
    }
    assert!(checked > 100);
}

#[test]
fn printed_table1_row12_fails_its_equation() {
    let bad = table1_sweep(3, Edition::Printed)
        .into_iter()
        .filter(|r| r.positive && !r.satisfies)
        .map(|r| r.solution.provenance.unwrap().row)
        .collect::<std::collections::BTreeSet<_>>();
    assert_eq!(bad.into_iter().collect::<Vec<_>>(), vec![12]);
}

#[test]
fn solution_5_4_41_is_the_one_on_the_progression() {
    let f = DiophantineFamily::get(1).unwrap();
    assert!(f.holds(5, 4, 41));
    assert!(!f.holds(5, 4, 20));
}
