mod common;

use common::Mat;
use hyperchain::analysis::{
    check_result, coprime_everywhere, exact_cover_length, is_chain_mixing, is_chain_recurrent, is_chain_transitive,
    is_chain_weakly_mixing, is_exact_from_every_point, is_totally_chain_transitive, rebuild_graph, scc_decompose,
    ChainPropertyResult, ExactOutcome, GraphKind,
};
use hyperchain::{
    build_transition_graph, find_chain, find_chain_exact_length, validate_chain, Builtin, Carrier, Entourage, Exact,
    MapSystem, Scalar, DEFAULT_VERTEX_BUDGET,
};
use proptest::prelude::*;
use proptest::sample::subsequence;
use proptest::test_runner::FileFailurePersistence;

#[derive(Debug, Clone)]
struct Case {
    system: MapSystem<Exact>,
    keys: Vec<Exact>,
    pick: usize,
}

impl Case {
    fn eps(&self) -> Exact {
        self.keys[self.pick % self.keys.len()].clone()
    }

    fn entourage(&self) -> Entourage<Exact> {
        Entourage::metric(self.system.carrier(), self.eps()).unwrap()
    }
}

fn carrier(kind: u8, n: usize, coords: Vec<i64>) -> Carrier<Exact> {
    match kind {
        0 => Carrier::interval_grid(n).unwrap(),
        1 => Carrier::circle_grid(n).unwrap(),
        _ => Carrier::line(coords.into_iter().map(|c| Exact::from_ratio(c, 1)).collect()).unwrap(),
    }
}

fn table_case(max_n: usize) -> impl Strategy<Value = Case> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                0u8..3,
                prop::collection::vec(0..n, n),
                subsequence((0..=2 * n as i64).collect::<Vec<_>>(), n),
                any::<usize>(),
            )
        })
        .prop_map(|(kind, table, coords, pick)| {
            let c = carrier(kind, table.len(), coords);
            let keys = c.distinct_distance_keys();
            Case {
                system: MapSystem::table(c, table).unwrap(),
                keys,
                pick,
            }
        })
}

fn builtin_case() -> impl Strategy<Value = Case> {
    (2usize..=24, 0u8..6, 0i64..=8, any::<usize>()).prop_map(|(n, which, k, pick)| {
        let interval = Carrier::interval_grid(n).unwrap();
        let (c, map) = match which {
            0 => (interval, Builtin::Tent),
            1 => (interval, Builtin::Logistic(Exact::from_ratio(4, 1))),
            2 => (interval, Builtin::Logistic(Exact::from_ratio(7, 2))),
            3 => (interval, Builtin::Identity),
            4 => (interval, Builtin::Constant(Exact::from_ratio(k, 8))),
            _ => (
                Carrier::circle_grid(n).unwrap(),
                Builtin::Rotation(Exact::from_ratio(k, 7)),
            ),
        };
        let keys = c.distinct_distance_keys();
        Case {
            system: MapSystem::builtin(c, map).unwrap(),
            keys,
            pick,
        }
    })
}

fn relation(e: &Entourage<Exact>) -> Mat {
    let n = e.len();
    (0..n).map(|i| (0..n).map(|j| e.contains(i, j)).collect()).collect()
}

fn verify(case: &Case, e: &Entourage<Exact>, r: &ChainPropertyResult) -> Result<(), TestCaseError> {
    check_result(r, |k| rebuild_graph(&case.system, e, k, DEFAULT_VERTEX_BUDGET))
        .map_err(|m| TestCaseError::fail(format!("{}: {m}", r.property)))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        failure_persistence: Some(Box::new(FileFailurePersistence::WithSource("regressions"))),
        ..ProptestConfig::default()
    })]

    #[test]
    fn entourage_algebra(case in table_case(8), k in 1usize..4) {
        let c = case.system.carrier();
        let ents: Vec<_> = case.keys.iter().map(|e| Entourage::metric(c, e.clone()).unwrap()).collect();
        for (i, e) in ents.iter().enumerate() {
            let m = relation(e);
            prop_assert!((0..m.len()).all(|x| m[x][x]));
            prop_assert!(e.is_symmetric());
            let naive = (1..k).fold(m.clone(), |acc, _| common::mul(&acc, &m));
            prop_assert_eq!(relation(&e.power(k).unwrap()), naive);
            prop_assert_eq!(relation(&e.compose(e).unwrap()), common::mul(&m, &m));
            for f in &ents[i..] {
                let bigger = relation(f);
                prop_assert!(m.iter().flatten().zip(bigger.iter().flatten()).all(|(a, b)| !*a || *b));
            }
        }
    }

    #[test]
    fn chain_search_matches_matrix_powers(case in table_case(8)) {
        let e = case.entourage();
        let g = build_transition_graph(&case.system, &e).unwrap();
        let a = common::adjacency(&g);
        let reach = common::plus_closure(&a);
        let ps = common::powers(&a, 6);
        let n = g.len();
        for x in 0..n {
            for y in 0..n {
                match find_chain(&g, x, y) {
                    Ok(ch) => {
                        prop_assert!(reach[x][y]);
                        prop_assert!(ch.length() >= 1);
                        prop_assert_eq!((ch.first(), ch.last()), (x, y));
                        prop_assert!(validate_chain(&g, ch.points()).is_ok());
                    }
                    Err(_) => prop_assert!(!reach[x][y]),
                }
                for (m, p) in ps.iter().enumerate() {
                    let found = find_chain_exact_length(&g, x, y, m + 1).unwrap();
                    prop_assert_eq!(found.is_some(), p[x][y]);
                    if let Some(ch) = found {
                        prop_assert_eq!(ch.length(), m + 1);
                        prop_assert!(validate_chain(&g, ch.points()).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn concatenation_adds_lengths(case in table_case(8), x in 0usize..8, y in 0usize..8, z in 0usize..8) {
        let e = case.entourage();
        let g = build_transition_graph(&case.system, &e).unwrap();
        let n = g.len();
        let (x, y, z) = (x % n, y % n, z % n);
        if let (Ok(a), Ok(b)) = (find_chain(&g, x, y), find_chain(&g, y, z)) {
            let joined = a.concatenate(&b).unwrap();
            prop_assert_eq!(joined.length(), a.length() + b.length());
            prop_assert!(validate_chain(&g, joined.points()).is_ok());
        }
    }

    #[test]
    fn component_periods_match_cycle_gcd(case in table_case(8)) {
        let e = case.entourage();
        let g = build_transition_graph(&case.system, &e).unwrap();
        let a = common::adjacency(&g);
        let rec = common::recurrent(&a);
        let scc = scc_decompose(&g);
        for (c, members) in scc.components.iter().enumerate() {
            for &v in members {
                prop_assert_eq!(scc.periods[c] > 0, rec[v]);
                prop_assert_eq!(scc.periods[c], common::period_at(&a, v));
            }
        }
    }

    #[test]
    fn mixing_characterisations_agree(case in table_case(10)) {
        let e = case.entourage();
        let g = build_transition_graph(&case.system, &e).unwrap();
        let a = common::adjacency(&g);
        let n = g.len();
        let mixing = is_chain_mixing(&case.system, &e).unwrap();
        let transitive = is_chain_transitive(&case.system, &e).unwrap().verdict;
        let coprime = transitive && coprime_everywhere(&g, 2 * n * n + 2).is_ok();
        let scc = scc_decompose(&g);
        let primitive = scc.is_strongly_connected_with_cycle() && scc.periods[0] == 1;
        prop_assert_eq!(mixing.verdict, common::mixing(&a));
        prop_assert_eq!(mixing.verdict, coprime);
        prop_assert_eq!(mixing.verdict, primitive);
        prop_assert_eq!(mixing.bounds.get("minimal_n").copied(), common::minimal_mixing(&a));
        verify(&case, &e, &mixing)?;
    }

    #[test]
    fn weak_mixing_is_mixing_for_tables(case in table_case(7)) {
        let e = case.entourage();
        let g = build_transition_graph(&case.system, &e).unwrap();
        let a = common::adjacency(&g);
        let weak = is_chain_weakly_mixing(&case.system, &e, DEFAULT_VERTEX_BUDGET).unwrap();
        prop_assert_eq!(weak.verdict, common::transitive(&common::tensor_square(&a)));
        prop_assert_eq!(weak.verdict, is_chain_mixing(&case.system, &e).unwrap().verdict);
        verify(&case, &e, &weak)?;
    }

    #[test]
    fn exactness_and_recurrence_match_oracle(case in table_case(8)) {
        let e = case.entourage();
        let g = build_transition_graph(&case.system, &e).unwrap();
        let a = common::adjacency(&g);
        let n = g.len();
        for v in 0..n {
            let oracle = common::exact_length(&a, &[v], n * n);
            match exact_cover_length(&g, &[v], n * n) {
                ExactOutcome::Covers(m) => prop_assert_eq!(Some(m), oracle),
                _ => prop_assert_eq!(None, oracle),
            }
        }
        let rec = is_chain_recurrent(&case.system, &e).unwrap();
        prop_assert_eq!(rec.vertex_flags.clone().unwrap(), common::recurrent(&a));
        verify(&case, &e, &rec)?;
        verify(&case, &e, &is_exact_from_every_point(&case.system, &e, None).unwrap())?;
        verify(&case, &e, &is_totally_chain_transitive(&case.system, &e, 4).unwrap())?;
    }

    #[test]
    fn verdicts_are_monotone_in_epsilon(case in table_case(8), other in any::<usize>()) {
        let c = case.system.carrier();
        let (lo, hi) = {
            let a = case.eps();
            let b = case.keys[other % case.keys.len()].clone();
            if a <= b { (a, b) } else { (b, a) }
        };
        let small = Entourage::metric(c, lo).unwrap();
        let large = Entourage::metric(c, hi).unwrap();
        let s = &case.system;
        prop_assert!(!is_chain_transitive(s, &small).unwrap().verdict || is_chain_transitive(s, &large).unwrap().verdict);
        prop_assert!(!is_chain_mixing(s, &small).unwrap().verdict || is_chain_mixing(s, &large).unwrap().verdict);
        let rs = is_chain_recurrent(s, &small).unwrap().vertex_flags.unwrap();
        let rl = is_chain_recurrent(s, &large).unwrap().vertex_flags.unwrap();
        prop_assert!(rs.iter().zip(&rl).all(|(a, b)| !*a || *b));
    }

    #[test]
    fn results_round_trip_through_json(case in table_case(6)) {
        let e = case.entourage();
        for r in [
            is_chain_transitive(&case.system, &e).unwrap(),
            is_chain_mixing(&case.system, &e).unwrap(),
            is_chain_recurrent(&case.system, &e).unwrap(),
        ] {
            let text = serde_json::to_string(&r).unwrap();
            let back: ChainPropertyResult = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
            verify(&case, &e, &back)?;
        }
    }

    #[test]
    fn sampled_table_is_sandwiched(case in builtin_case()) {
        let eps = case.eps();
        let c = case.system.carrier();
        let table = case.system.sample_to_table().unwrap();
        let radius = case.system.covering_radius().unwrap();
        let graph = |s: &MapSystem<Exact>, t: Exact| {
            build_transition_graph(s, &Entourage::metric(c, t).unwrap()).unwrap()
        };
        let wide = eps.clone() + radius;
        prop_assert!(graph(&table, eps.clone()).is_subgraph_of(&graph(&case.system, wide.clone())));
        prop_assert!(graph(&case.system, eps).is_subgraph_of(&graph(&table, wide)));
    }
}

#[test]
fn tent_grid_table_agrees_with_builtin() {
    let c = Carrier::<Exact>::interval_grid(64).unwrap();
    let tent = MapSystem::builtin(c.clone(), Builtin::Tent).unwrap();
    assert_eq!(tent.covering_radius().unwrap(), Exact::from_ratio(0, 1));
    let e = Entourage::metric(&c, Exact::from_ratio(1, 16)).unwrap();
    let g = build_transition_graph(&tent, &e).unwrap();
    let h = build_transition_graph(&tent.sample_to_table().unwrap(), &e).unwrap();
    assert_eq!(g, h);
}

#[test]
fn tent_minimal_mixing_length_matches_oracle() {
    let c = Carrier::<Exact>::interval_grid(64).unwrap();
    let tent = MapSystem::builtin(c.clone(), Builtin::Tent).unwrap();
    let e = Entourage::metric(&c, Exact::from_ratio(1, 16)).unwrap();
    let g = build_transition_graph(&tent, &e).unwrap();
    let oracle = common::minimal_mixing(&common::adjacency(&g));
    assert_eq!(oracle, Some(5));
    let r = is_chain_mixing(&tent, &e).unwrap();
    assert_eq!(r.bounds.get("minimal_n").copied(), oracle);
    assert!(GraphKind::Base == r.graph);
}
