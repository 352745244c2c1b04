use proptest::prelude::*;
use qsheaf::adjunction::adjunction_defect;
use qsheaf::apps::paths::{shortest_paths, PathMode};
use qsheaf::apps::prefs::Relation;
use qsheaf::gen::{random_connected_graph, random_crisp_sheaf, random_lattice};
use qsheaf::oracle::{classic_shortest_paths, transitive_closure};
use qsheaf::sheaf::FlowConfig;
use qsheaf::{Elem, Quantale, TNorm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quantales() -> impl Strategy<Value = Quantale> {
    prop_oneof![
        Just(Quantale::unit_interval(TNorm::Product)),
        Just(Quantale::unit_interval(TNorm::Lukasiewicz)),
        Just(Quantale::unit_interval(TNorm::Min)),
        Just(Quantale::lawvere()),
        (2u32..6).prop_map(Quantale::chain),
        (1u32..4).prop_map(Quantale::powerset),
    ]
}

fn small_quantales() -> impl Strategy<Value = Quantale> {
    prop_oneof![Just(Quantale::boolean()), Just(Quantale::chain(3)), Just(Quantale::chain(4))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn residual_is_right_adjoint(q in quantales(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, r, s) = (q.random_element(&mut rng), q.random_element(&mut rng), q.random_element(&mut rng));
        prop_assert!(q.leq(q.mul(p, q.hom(p, r)), r));
        prop_assert_eq!(q.leq(q.mul(p, s), r), q.leq(s, q.hom(p, r)));
    }

    #[test]
    fn multiplication_is_monotone_and_associative(q in quantales(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (q.random_element(&mut rng), q.random_element(&mut rng), q.random_element(&mut rng));
        prop_assert!(q.eq(q.mul(q.mul(a, b), c), q.mul(a, q.mul(b, c))));
        let lo = q.meet2(a, b);
        prop_assert!(q.leq(q.mul(lo, c), q.mul(a, c)));
        prop_assert!(q.eq(q.mul(q.unit(), a), a));
    }

    #[test]
    fn laplacian_and_flow_are_monotone(q in small_quantales(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sheaf, w) = random_crisp_sheaf(&mut rng, q, 4);
        let all = sheaf.all_cochains().unwrap();
        let one = vec![q.unit(); sheaf.graph().vertex_count()];
        for _ in 0..20 {
            let x = &all[rng.gen_range(0..all.len())];
            let y = &all[rng.gen_range(0..all.len())];
            let fx = sheaf.flow_step(&w, &one, &one, x).unwrap();
            prop_assert!(q.leq(q.unit(), sheaf.cochain_hom(&fx, x)));
            let h = sheaf.cochain_hom(x, y);
            let (lx, ly) = (sheaf.laplacian(&w, x).unwrap(), sheaf.laplacian(&w, y).unwrap());
            prop_assert!(q.leq(h, sheaf.cochain_hom(&lx, &ly)));
            let fy = sheaf.flow_step(&w, &one, &one, y).unwrap();
            prop_assert!(q.leq(h, sheaf.cochain_hom(&fx, &fy)));
        }
    }

    #[test]
    fn defects_compose(q in small_quantales(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lat = random_lattice(&mut rng, q, 5);
        let n = lat.len();
        let objs: Vec<usize> = (0..n).collect();
        let mut map = || -> Vec<usize> { (0..n).map(|_| rng.gen_range(0..n)).collect() };
        let (f, g, f2, g2) = (map(), map(), map(), map());
        let d1 = adjunction_defect(&lat, &lat, |x| f[*x], |y| g[*y], &objs, &objs);
        let d2 = adjunction_defect(&lat, &lat, |x| f2[*x], |y| g2[*y], &objs, &objs);
        let d = adjunction_defect(&lat, &lat, |x| f2[f[*x]], |y| g[g2[*y]], &objs, &objs);
        prop_assert!(q.leq(q.mul(d1, d2), d));
    }

    #[test]
    fn closure_is_idempotent_and_matches_warshall(seed in any::<u64>(), n in 1usize..5) {
        let q = Quantale::unit_interval(TNorm::Product);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<Elem>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { f64::from(rng.gen_range(0..=4u32)) / 4.0 }).collect())
            .collect();
        let r = Relation::new(rows.clone()).unwrap();
        let c = r.closure(&q);
        prop_assert!(c.validate(&q).is_ok());
        let oracle = transitive_closure(&q, &rows);
        for (a, b) in c.rows().iter().flatten().zip(oracle.iter().flatten()) {
            prop_assert!(q.eq(*a, *b));
        }
        prop_assert_eq!(c.closure(&q), c);
    }

    #[test]
    fn shortest_paths_match_classic(seed in any::<u64>(), n in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let extra = rng.gen_range(0..=n);
        let g = random_connected_graph(&mut rng, n, extra);
        let w: Vec<Elem> = (0..g.edge_count()).map(|_| f64::from(rng.gen_range(1..=20u32))).collect();
        let source = rng.gen_range(0..n);
        let oracle = classic_shortest_paths(&g, &w, source);
        for mode in [PathMode::Synchronous, PathMode::Dijkstra] {
            let r = shortest_paths(&g, &w, source, mode, &FlowConfig::default()).unwrap();
            prop_assert_eq!(&r.distances, &oracle);
        }
    }
}
