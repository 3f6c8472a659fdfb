use e8bound::graph::{vid, Configuration, StarGraph, VertexId};
use e8bound::lattice::{determinant, inertia, recognize_negative_e8};
use e8bound::moves::{blow_down, blow_down_traced, blow_up, boundary_brieskorn, normalize_to_star, MoveTrace};
use e8bound::search::{solve_family, DiophantineFamily};
use e8bound::seifert::{read_seifert, resolve, BrieskornSpec};
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Start {
    Sphere(Vec<i64>),
    Family(u8, i64, i64, i64),
}

#[derive(Clone, Debug)]
enum Move {
    // new -1 leaf hanging off vertex `pick`
    Leaf(usize),
    // new -1 vertex subdividing edge `pick` (only unit labels qualify)
    Edge(usize),
}

fn family_solutions() -> Vec<(u8, i64, i64, i64)> {
    (1..=7u8).flat_map(|f| solve_family(f, 6, 40).unwrap().into_iter().filter(|s| s.gcd_ok).map(move |s| (f, s.a, s.b, s.c))).collect()
}

fn start() -> impl Strategy<Value = Start> {
    let spheres = (2i64..=17, 2i64..=17, 2i64..=17)
        .prop_filter("coprime", |&(p, q, r)| p.gcd(&q) == 1 && p.gcd(&r) == 1 && q.gcd(&r) == 1)
        .prop_map(|(p, q, r)| Start::Sphere(vec![p, q, r]));
    let fams = prop::sample::select(family_solutions()).prop_map(|(f, a, b, c)| Start::Family(f, a, b, c));
    prop_oneof![spheres, fams]
}

fn moves() -> impl Strategy<Value = Vec<Move>> {
    prop::collection::vec(prop_oneof![(0usize..64).prop_map(Move::Leaf), (0usize..64).prop_map(Move::Edge)], 1..7)
}

fn build(s: &Start) -> Configuration {
    match s {
        Start::Sphere(ms) => resolve(&BrieskornSpec::new(ms.clone()).unwrap()).to_configuration(),
        Start::Family(f, a, b, c) => DiophantineFamily::get(*f).unwrap().configuration(*a, *b, *c),
    }
}

fn apply(c: &Configuration, m: &Move, id: &VertexId) -> Option<Configuration> {
    match *m {
        Move::Leaf(pick) => {
            let v = &c.vertices()[pick % c.len()];
            blow_up(c, id, &[(v.id.clone(), 1)]).ok()
        }
        Move::Edge(pick) => {
            let units: Vec<_> = c.edges().into_iter().filter(|e| e.label.abs() == 1).collect();
            if units.is_empty() {
                return None;
            }
            let e = &units[pick % units.len()];
            blow_up(c, id, &[(e.u.clone(), 1), (e.v.clone(), e.label)]).ok()
        }
    }
}

// Blow down -1 vertices of degree at most two until none is left.
fn reduce(mut c: Configuration) -> Configuration {
    loop {
        let next = c.vertices().iter().find(|v| v.weight == -1 && c.degree(&v.id) <= 2).map(|v| v.id.clone());
        match next.and_then(|id| blow_down(&c, &id).ok()) {
            Some(d) => c = d,
            None => return c,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_blow_ups_round_trip(s in start(), ms in moves()) {
        let original = build(&s);
        let det0 = determinant(&original.gram_matrix()).abs();
        let sig0 = inertia(&original.gram_matrix()).signature();
        let mut stack = vec![original.clone()];
        let mut ids = Vec::new();
        for (k, m) in ms.iter().enumerate() {
            let id = VertexId::new(format!("n{k}")).unwrap();
            let top = stack.last().unwrap();
            if let Some(next) = apply(top, m, &id) {
                let g = next.gram_matrix();
                prop_assert_eq!(determinant(&g).abs(), det0.clone());
                prop_assert_eq!(g.rank(), top.len() + 1);
                prop_assert_eq!(inertia(&g).signature(), sig0 - ids.len() as i64 - 1);
                stack.push(next);
                ids.push(id);
            }
        }
        // undo in reverse order: exact inverse, vertex order included
        let mut cur = stack.last().unwrap().clone();
        for (k, id) in ids.iter().enumerate().rev() {
            cur = blow_down(&cur, id).unwrap();
            prop_assert_eq!(cur.serialize(), stack[k].serialize());
        }
        prop_assert_eq!(cur.serialize(), original.serialize());

        // greedy reduction reaches the same graph, so the same boundary
        let reduced = reduce(stack.last().unwrap().clone());
        prop_assert!(reduced.same_labeled_graph(&original));
        match &s {
            Start::Sphere(_) => {
                let a = read_seifert(&StarGraph::from_configuration(&original, None).unwrap()).unwrap();
                let b = read_seifert(&StarGraph::from_configuration(&reduced, None).unwrap()).unwrap();
                prop_assert_eq!(a, b);
            }
            Start::Family(..) => {
                prop_assert_eq!(boundary_brieskorn(&reduced).unwrap(), boundary_brieskorn(&original).unwrap());
            }
        }
    }

    #[test]
    fn blow_down_then_up_is_identity(s in start()) {
        let (star, _) = match &s {
            Start::Family(f, a, b, c) => normalize_to_star(&DiophantineFamily::get(*f).unwrap().configuration(*a, *b, *c)).unwrap(),
            Start::Sphere(ms) => (resolve(&BrieskornSpec::new(ms.clone()).unwrap()), MoveTrace::default()),
        };
        let c = star.to_configuration();
        let Some(v) = c.vertices().iter().find(|v| v.weight == -1).map(|v| v.id.clone()) else {
            return Ok(());
        };
        let (down, step) = blow_down_traced(&c, &v).unwrap();
        let g0 = c.gram_matrix();
        let g1 = down.gram_matrix();
        prop_assert_eq!(g1.rank() + 1, g0.rank());
        prop_assert_eq!(inertia(&g1).signature(), inertia(&g0).signature() + 1);
        prop_assert_eq!(determinant(&g1).abs(), determinant(&g0).abs());
        let up = blow_up(&down, &v, &step.links).unwrap();
        prop_assert!(up.same_labeled_graph(&c));
    }
}

#[test]
fn normalization_trace_replays() {
    for (f, a, b, c) in family_solutions() {
        let config = DiophantineFamily::get(f).unwrap().configuration(a, b, c);
        let (star, trace) = normalize_to_star(&config).unwrap_or_else(|e| panic!("({f}) {a} {b} {c}: {e}"));
        let last = trace.replay(&config).unwrap();
        let back = MoveTrace::from_json_lines(&trace.to_json_lines()).unwrap();
        assert_eq!(back, trace);
        assert_eq!(StarGraph::from_configuration(&last, Some(&trace.steps.last().unwrap().vertex)).unwrap(), star);
        assert_eq!(trace.len() as i64, {
            // one corner blow-up per Euclidean subtraction, then the centre
            let (mut x, mut y, mut n) = (a, b, 0);
            while x != y {
                if x > y {
                    x -= y
                } else {
                    y -= x
                }
                n += 1;
            }
            n + 1
        });
        let g0 = config.gram_matrix();
        let g1 = last.gram_matrix();
        assert_eq!(determinant(&g0).abs(), determinant(&g1).abs());
        assert_eq!(g1.rank(), g0.rank() + trace.len());
    }
}

#[test]
fn unit_solution_blows_up_once_at_the_b_corner() {
    let config = DiophantineFamily::get(1).unwrap().configuration(1, 2, 5);
    assert!(recognize_negative_e8(&config.gram_matrix()).is_negative_e8());
    let (_, trace) = normalize_to_star(&config).unwrap();
    assert_eq!(trace.len(), 2);
    assert_eq!(trace.steps[0].corner, Some(vid("r")));
    assert!(trace.steps[1].corner.is_none());
}
