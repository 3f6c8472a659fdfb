use e8bound::graph::{vid, Configuration, GraphError, Shape, StarGraph, VertexId};
use e8bound::lattice::{determinant, is_negative_definite, is_unimodular};
use e8bound::search::DiophantineFamily;
use e8bound::seifert::{brieskorn_from_seifert, hj_expansion, hj_value, is_minimal, read_seifert, resolve, BrieskornSpec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;

fn star() -> impl Strategy<Value = StarGraph> {
    (-6i64..=-1, prop::collection::vec(prop::collection::vec(-6i64..=-2, 1..4), 1..5)).prop_map(|(c, b)| StarGraph::new(c, b))
}

fn coprime_triple() -> impl Strategy<Value = Vec<i64>> {
    (2i64..=40, 2i64..=40, 2i64..=40)
        .prop_filter("pairwise coprime", |&(p, q, r)| p.gcd(&q) == 1 && p.gcd(&r) == 1 && q.gcd(&r) == 1)
        .prop_map(|(p, q, r)| vec![p, q, r])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reordering_permutes_gram_matrix(
        (s, perm) in star().prop_flat_map(|s| { let n = s.rank(); (Just(s), Just((0..n).collect::<Vec<_>>()).prop_shuffle()) })
    ) {
        let c = s.to_configuration();
        let r = c.reordered(&perm);
        prop_assert_eq!(r.gram_matrix(), c.gram_matrix().permuted(&perm));
        prop_assert_eq!(r.classify_shape(), c.classify_shape());
        prop_assert!(r.same_labeled_graph(&c));
    }

    #[test]
    fn renaming_keeps_shape_and_form(s in star()) {
        let c = s.to_configuration();
        let r = c.renamed(|id| VertexId::new(format!("x_{id}")).unwrap()).unwrap();
        prop_assert_eq!(r.gram_matrix(), c.gram_matrix());
        prop_assert_eq!(r.classify_shape(), c.classify_shape());
    }

    #[test]
    fn serialization_round_trips(s in star()) {
        let c = s.to_configuration();
        let back = Configuration::deserialize(&c.serialize()).unwrap();
        prop_assert_eq!(back.serialize(), c.serialize());
        prop_assert_eq!(StarGraph::from_configuration(&back, Some(&vid("c"))).unwrap(), s);
    }

    #[test]
    fn hj_expansion_inverts(a in 2i64..500, b in 1i64..500) {
        prop_assume!(b < a && a.gcd(&b) == 1);
        let xs = hj_expansion(a, b);
        prop_assert!(xs.iter().all(|&x| x >= 2));
        prop_assert_eq!(hj_value(&xs), Some((a, b)));
    }

    #[test]
    fn coprime_triples_resolve_to_unimodular_negdef_stars(ms in coprime_triple()) {
        let spec = BrieskornSpec::new(ms).unwrap();
        let star = resolve(&spec);
        prop_assert!(is_minimal(&star));
        prop_assert_eq!(star.branches.len(), 3);
        let m = star.gram_matrix();
        prop_assert_eq!(determinant(&m).abs(), BigInt::from(1));
        prop_assert!(is_unimodular(&m));
        prop_assert!(is_negative_definite(&m));
        let data = read_seifert(&star).unwrap();
        prop_assert_eq!(brieskorn_from_seifert(&data).unwrap(), spec);
    }
}

#[test]
fn star_shape_is_recognized() {
    let c = StarGraph::new(-2, vec![vec![-2], vec![-2, -2], vec![-2, -2, -2, -2]]).to_configuration();
    assert_eq!(c.classify_shape(), Shape::Star);
    let chain = StarGraph::new(-2, vec![vec![-2], vec![-3]]).to_configuration();
    assert_eq!(chain.classify_shape(), Shape::LinearChain);
}

#[test]
fn family_configurations_are_branched_triangular() {
    for fam in 1..=7u8 {
        let f = DiophantineFamily::get(fam).unwrap();
        let c = f.configuration(1, 1, 3);
        assert_eq!(c.classify_shape(), Shape::BranchedTriangular, "family {fam}");
        assert_eq!(c.len(), 8);
        assert!(c.triangle().is_some());
    }
}

#[test]
fn parse_errors_carry_positions() {
    let err = Configuration::deserialize("v a -2\nv b x\n").unwrap_err();
    assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err:?}");
    let err = Configuration::deserialize("v a -2\ne a b 1\n").unwrap_err();
    assert!(matches!(err, GraphError::UnknownVertex(_) | GraphError::Parse { .. }), "{err:?}");
    assert!(matches!(Configuration::deserialize(""), Err(GraphError::Parse { line: 1, column: 1, .. })));
}

#[test]
fn inadmissible_graphs_are_rejected() {
    let square = "v a -2\nv b -2\nv c -2\nv d -2\ne a b 1\ne b c 1\ne c d 1\ne d a 1\n";
    assert!(matches!(Configuration::deserialize(square), Err(GraphError::InadmissibleCycles(_))));
    let split = "v a -2\nv b -2\n";
    assert!(matches!(Configuration::deserialize(split), Err(GraphError::Disconnected)));
    let self_loop = "v a -2\ne a a 1\n";
    assert!(matches!(Configuration::deserialize(self_loop), Err(GraphError::SelfLoop(_)) | Err(GraphError::Parse { .. })));
}

#[test]
fn dot_export_lists_every_edge() {
    let c = StarGraph::new(-1, vec![vec![-2], vec![-3], vec![-7]]).to_configuration();
    let dot = c.to_dot();
    assert_eq!(dot.matches(" -- ").count(), 3);
    assert!(dot.contains(&format!("\"{}\"", vid("c"))));
}
