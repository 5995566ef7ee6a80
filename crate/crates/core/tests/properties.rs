mod common;

use common::{dense_spectrum, rips};
use proptest::prelude::*;
use simplicial_score::complex::{
    boundary_faces, build_vietoris_rips, compute_distances, Metric, Simplex, SimplicialComplex, WeightScheme,
};
use simplicial_score::features::{induce_from_point_feature, induce_from_qpoint_feature, Aggregation, FeatureSet, TupleTable};
use simplicial_score::inference::{bh_adjust, permutation_pvalues, score_features, PermutationConfig};
use simplicial_score::spectral::{
    apply_laplacian_direct, assemble_laplacian, center_cochain, rayleigh_score, Cochain, LaplacianParts,
};

fn points(max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (3..=max_n).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0.0..1.0f64, 2), n))
}

fn scheme() -> impl Strategy<Value = WeightScheme> {
    prop_oneof![Just(WeightScheme::Unit), Just(WeightScheme::default())]
}

fn complex() -> impl Strategy<Value = SimplicialComplex> {
    (points(8), 0.2..1.2f64, scheme()).prop_map(|(p, eps, s)| rips(&p, eps, 2).with_weights(s).unwrap())
}

fn cochain_on(k: &SimplicialComplex, q: usize, seed: &[f64]) -> Cochain {
    Cochain::new(q, (0..k.count(q)).map(|i| seed[i % seed.len()] * (1.0 + i as f64 * 0.1).sin()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rips_is_closed_and_monotone(p in points(9), a in 0.05..1.0f64, b in 0.05..1.0f64) {
        let (lo, hi) = (a.min(b), a.max(b));
        let d = compute_distances(&p, Metric::Euclidean).unwrap();
        let small = build_vietoris_rips(&d, lo, 3).unwrap();
        let large = build_vietoris_rips(&d, hi, 3).unwrap();
        prop_assert!(small.check_closure().is_ok());
        prop_assert!(large.check_closure().is_ok());
        for q in 0..=small.top_dim() {
            for s in small.simplices(q) {
                prop_assert!(large.index_of(s).is_some());
            }
        }
    }

    #[test]
    fn boundary_of_boundary_vanishes(k in complex()) {
        for q in 2..=k.top_dim() {
            for s in k.simplices(q) {
                let mut acc: std::collections::BTreeMap<Simplex, i32> = Default::default();
                for (f, a) in boundary_faces(s) {
                    for (g, b) in boundary_faces(&f) {
                        *acc.entry(g).or_default() += (a * b) as i32;
                    }
                }
                prop_assert!(acc.values().all(|&c| c == 0));
            }
        }
    }

    #[test]
    fn coface_weights_on_graphs_are_degrees(p in points(10), eps in 0.1..0.8f64) {
        let k = rips(&p, eps, 1).with_weights(WeightScheme::CofaceSum { top_weight: 1.0, floor: 1e-12 }).unwrap();
        let mut degree = vec![0.0f64; k.vertex_count()];
        for (i, j) in k.edges() {
            degree[i] += 1.0;
            degree[j] += 1.0;
        }
        if k.top_dim() == 1 {
            for (w, d) in k.weights(0).unwrap().iter().zip(&degree) {
                prop_assert_eq!(*w, d.max(1e-12));
            }
        }
        for q in 0..=k.top_dim() {
            prop_assert!(k.weights(q).unwrap().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn matrix_matches_direct_application(k in complex(), seed in prop::collection::vec(-1.0..1.0f64, 1..6)) {
        for q in 0..=k.top_dim() {
            let f = cochain_on(&k, q, &seed);
            let l = assemble_laplacian(&k, q, LaplacianParts::Both).unwrap();
            let a = l.apply(&f).unwrap();
            let b = apply_laplacian_direct(&k, q, &f, LaplacianParts::Both).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!((x - y).abs() <= 1e-12, "q={} {} vs {}", q, x, y);
            }
        }
    }

    #[test]
    fn laplacians_are_positive_semidefinite(k in complex()) {
        for q in 0..=k.top_dim() {
            prop_assert!(dense_spectrum(&k, q)[0] >= -1e-10);
        }
    }

    #[test]
    fn scores_lie_within_the_spectrum(k in complex(), seed in prop::collection::vec(-1.0..1.0f64, 2..6)) {
        for q in 0..=k.top_dim() {
            let ev = dense_spectrum(&k, q);
            let l = assemble_laplacian(&k, q, LaplacianParts::Both).unwrap();
            if let Ok(r) = rayleigh_score(&cochain_on(&k, q, &seed), &l) {
                prop_assert!(r >= ev[0] - 1e-9 && r <= ev[ev.len() - 1] + 1e-9);
            }
        }
    }

    #[test]
    fn centering_is_idempotent(k in complex(), seed in prop::collection::vec(-5.0..5.0f64, 1..6)) {
        for q in 0..=k.top_dim() {
            let once = center_cochain(&cochain_on(&k, q, &seed), &k).unwrap();
            let twice = center_cochain(&once, &k).unwrap();
            for (a, b) in once.values().iter().zip(twice.values()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn mean_induction_is_linear_and_bounded(
        k in complex(),
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        fs in prop::collection::vec(-1.0..1.0f64, 16),
    ) {
        let n = k.vertex_count();
        let f = &fs[..n];
        let g: Vec<f64> = fs[8..8 + n].to_vec();
        let combo: Vec<f64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
        let identity = induce_from_point_feature(f, &k, 0, Aggregation::Mean).unwrap();
        prop_assert_eq!(identity.values(), f);
        let (lo, hi) = f.iter().fold((f64::MAX, f64::MIN), |(l, h), &x| (l.min(x), h.max(x)));
        for q in 0..=k.top_dim() {
            let fi = induce_from_point_feature(f, &k, q, Aggregation::Mean).unwrap();
            let gi = induce_from_point_feature(&g, &k, q, Aggregation::Mean).unwrap();
            let ci = induce_from_point_feature(&combo, &k, q, Aggregation::Mean).unwrap();
            for ((x, y), z) in fi.values().iter().zip(gi.values()).zip(ci.values()) {
                prop_assert!((a * x + b * y - z).abs() <= 1e-12);
            }
            prop_assert!(fi.values().iter().all(|&v| v >= lo - 1e-15 && v <= hi + 1e-15));
        }
    }

    #[test]
    fn pair_evaluation_is_linear(k in complex(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        prop_assume!(k.count(1) > 0);
        let n = k.vertex_count();
        let f = TupleTable::from_fn(2, n, |t| (t[0] as f64 - 0.5 * t[1] as f64).sin());
        let g = TupleTable::from_fn(2, n, |t| (t[0] * t[1]) as f64);
        let c = TupleTable::from_fn(2, n, |t| a * (t[0] as f64 - 0.5 * t[1] as f64).sin() + b * (t[0] * t[1]) as f64);
        let (fi, gi, ci) = (
            induce_from_qpoint_feature(&f, &k).unwrap(),
            induce_from_qpoint_feature(&g, &k).unwrap(),
            induce_from_qpoint_feature(&c, &k).unwrap(),
        );
        for ((x, y), z) in fi.values().iter().zip(gi.values()).zip(ci.values()) {
            prop_assert!((a * x + b * y - z).abs() <= 1e-12);
        }
    }

    #[test]
    fn bh_rejections_grow_with_alpha(
        p in prop::collection::vec(0.0001..1.0f64, 1..40),
        a in 0.001..0.5f64,
        b in 0.001..0.5f64,
    ) {
        let (lo, hi) = (a.min(b), a.max(b));
        let r1 = bh_adjust(&p, lo).unwrap();
        let r2 = bh_adjust(&p, hi).unwrap();
        for (x, y) in r1.rejected.iter().zip(&r2.rejected) {
            prop_assert!(!x || *y);
        }
        prop_assert!(r1.q_values.iter().zip(&p).all(|(q, p)| *q >= p * (1.0 - 1e-12) && *q <= 1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pvalues_are_bounded_below(k in complex(), n_perm in 1..60usize, seed in any::<u64>()) {
        let n = k.vertex_count();
        let rows: Vec<Vec<f64>> = (0..4).map(|r| (0..n).map(|i| ((i * 31 + r * 17) % 7) as f64).collect()).collect();
        let fs = FeatureSet::from_points((0..4).map(|r| format!("f{r}")).collect(), rows).unwrap();
        let cfg = PermutationConfig { n_permutations: n_perm, seed, alpha: 0.05 };
        for res in permutation_pvalues(&k, &fs, 0, &cfg, Aggregation::Mean).unwrap().into_iter().flatten() {
            prop_assert!(res.1 >= 1.0 / (n_perm + 1) as f64 && res.1 <= 1.0);
        }
    }

    #[test]
    fn relabelling_samples_leaves_scores_unchanged(
        p in points(8),
        eps in 0.2..1.2f64,
        s in scheme(),
        shuffle in any::<u64>(),
        q in 0..2usize,
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let n = p.len();
        // Oriented q-cochains with q >= 1 follow ascending vertex order, so an
        // arbitrary relabelling can flip some simplices but not others. Reversal
        // flips all of them alike and must leave scores unchanged.
        let mut perm: Vec<usize> = (0..n).collect();
        if q == 0 {
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(shuffle));
        } else {
            perm.reverse();
        }

        let d = compute_distances(&p, Metric::Euclidean).unwrap();
        let k = build_vietoris_rips(&d, eps, 2).unwrap().with_weights(s).unwrap();
        let k2 = build_vietoris_rips(&d.relabel(&perm), eps, 2).unwrap().with_weights(s).unwrap();
        prop_assume!(k.count(q) > 0);

        let f: Vec<f64> = (0..n).map(|i| (i as f64 * 1.7).cos()).collect();
        let mut g = vec![0.0; n];
        for i in 0..n {
            g[perm[i]] = f[i];
        }
        let a = score_features(&k, &FeatureSet::from_points(vec!["f".into()], vec![f]).unwrap(), q, Aggregation::Mean).unwrap();
        let b = score_features(&k2, &FeatureSet::from_points(vec!["f".into()], vec![g]).unwrap(), q, Aggregation::Mean).unwrap();
        match (&a[0], &b[0]) {
            (Ok(x), Ok(y)) => prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0), "{} vs {}", x, y),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "one labelling scored, the other did not"),
        }
    }

    #[test]
    fn results_do_not_depend_on_thread_count(k in complex(), seed in any::<u64>()) {
        let n = k.vertex_count();
        let rows: Vec<Vec<f64>> = (0..6).map(|r| (0..n).map(|i| ((i * 13 + r * 5) % 11) as f64).collect()).collect();
        let fs = FeatureSet::from_points((0..6).map(|r| format!("f{r}")).collect(), rows).unwrap();
        let cfg = PermutationConfig { n_permutations: 40, seed, alpha: 0.05 };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
                permutation_pvalues(&k, &fs, 0, &cfg, Aggregation::Mean)
                    .unwrap()
                    .into_iter()
                    .map(|r| r.ok())
                    .collect::<Vec<_>>()
            })
        };
        prop_assert_eq!(run(1), run(4));
    }
}
