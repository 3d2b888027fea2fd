use exceedance::hitting::{hitting_times_in, inter_exceedance_gaps};
use exceedance::processes::{simulate, simulate_timed, InterArrivalSpec, ProcessSpec};
use exceedance::theory::{self, TheoryParams};
use exceedance::{heavy_acf, intervals_estimator, parse_edge_list, timed_first_hitting, RngStream};
use proptest::prelude::*;

fn theory_params() -> impl Strategy<Value = TheoryParams> {
    (0.01f64..=1.0, 1e-6f64..0.99, 0u64..200)
        .prop_map(|(theta, rho, j0)| TheoryParams::new(theta, rho).unwrap().with_j0(j0))
}

fn process() -> impl Strategy<Value = ProcessSpec> {
    prop_oneof![
        (0.0f64..0.99).prop_map(|a| ProcessSpec::armax(a).unwrap()),
        prop::collection::vec(0.01f64..1.0, 1..5).prop_map(|mut w| {
            w.sort_by(|a, b| b.total_cmp(a));
            let s: f64 = w.iter().sum();
            let mut w: Vec<f64> = w.iter().map(|x| x / s).collect();
            let rest: f64 = w[1..].iter().sum();
            w[0] = 1.0 - rest;
            ProcessSpec::moving_max(w).unwrap()
        }),
        (2u32..6).prop_map(|r| ProcessSpec::ar1_uniform(r).unwrap()),
        Just(ProcessSpec::IidFrechet),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prefix_below_threshold_shifts_indices(
        values in prop::collection::vec(0.0f64..10.0, 0..60),
        prefix in prop::collection::vec(0.0f64..=1.0, 0..20),
        k in 1usize..6,
    ) {
        let u = 1.0 + values.first().copied().unwrap_or(5.0) / 2.0;
        let plain = hitting_times_in(&values, u, k).unwrap();
        let mut shifted_path = prefix.clone();
        shifted_path.extend_from_slice(&values);
        let shifted = hitting_times_in(&shifted_path, u, k).unwrap();
        let expected: Vec<usize> = plain.exceedance_indices.iter().map(|i| i + prefix.len()).collect();
        prop_assert_eq!(shifted.exceedance_indices, expected);
    }

    #[test]
    fn record_is_consistent(values in prop::collection::vec(0.0f64..10.0, 0..80), u in 0.0f64..10.0) {
        let rec = hitting_times_in(&values, u, values.len().max(1)).unwrap();
        let idx = &rec.exceedance_indices;
        prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(idx.iter().all(|&i| values[i - 1] > u));
        prop_assert_eq!(idx.len(), values.iter().filter(|&&x| x > u).count());
        prop_assert_eq!(rec.inter_gaps(), inter_exceedance_gaps(&values, u));
        if let (Some(a), Some(b)) = (rec.first(), rec.second()) {
            prop_assert_eq!(b - a, rec.inter_gaps()[0]);
        }
    }

    #[test]
    fn infinite_horizon_is_plain_first_hit(seed in any::<u64>(), spec in process(), rho in 0.01f64..0.5) {
        let ia = InterArrivalSpec::new(0.7, 2.0).unwrap();
        let path = simulate_timed(&spec, 100, RngStream::new(seed, 0), 0, &ia).unwrap();
        let u = exceedance::ThresholdSpec::Quantile { rho }.resolve_for(&spec).unwrap();
        prop_assert_eq!(
            timed_first_hitting(&path, u, f64::INFINITY).unwrap(),
            exceedance::hitting_times(&path, u, 1).unwrap().first()
        );
        prop_assert!(path.arrival_times().unwrap().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn paths_are_pure_functions_of_their_address(seed in any::<u64>(), index in any::<u64>(), spec in process()) {
        let a = simulate(&spec, 50, RngStream::new(seed, index), 0).unwrap();
        let b = simulate(&spec, 50, RngStream::new(seed, index), 0).unwrap();
        prop_assert_eq!(&a, &b);
        if let ProcessSpec::Ar1Uniform { .. } = spec {
            prop_assert!(a.values.iter().all(|&x| (0.0..1.0).contains(&x)));
        } else {
            prop_assert!(a.values.iter().all(|&x| x > 0.0 && x.is_finite()));
        }
    }

    #[test]
    fn model_pmfs_are_nonnegative_and_decreasing(p in theory_params(), j in 2u64..10_000) {
        for f in [theory::psi_pmf, theory::inter_cluster_pmf, theory::limit_geometric_pmf, theory::armax_pmf_exact, theory::armax_pmf_uncorrected] {
            let (a, b) = (f(j, &p), f(j + 1, &p));
            prop_assert!(a.is_finite() && b >= 0.0 && b <= a);
        }
        prop_assert!(theory::lambda_n(&p).is_finite() && theory::lambda_n(&p) > 0.0);
    }

    #[test]
    fn exact_and_geometric_pmfs_are_normalized(p in theory_params(), j in 1u64..500) {
        let head_exact: f64 = (1..=j).map(|i| theory::armax_pmf_exact(i, &p)).sum();
        prop_assert!((head_exact + theory::armax_exact_tail(j, &p) - 1.0).abs() < 1e-12);
        let head_geo: f64 = (1..=j).map(|i| theory::limit_geometric_pmf(i, &p)).sum();
        prop_assert!((head_geo + theory::limit_geometric_tail(j, &p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_model_is_symmetric(p in theory_params(), j in 1u64..1000, m in 1u64..1000) {
        prop_assert_eq!(theory::second_hitting_joint_model(j, m, &p), theory::second_hitting_joint_model(m, j, &p));
    }

    #[test]
    fn intervals_estimator_ignores_gap_order(gaps in prop::collection::vec(1usize..50, 2..60), seed in any::<u64>()) {
        let mut shuffled = gaps.clone();
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        match (intervals_estimator(&gaps), intervals_estimator(&shuffled)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.theta_hat, b.theta_hat);
                prop_assert!(a.theta_hat > 0.0 && a.theta_hat <= 1.0);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "order changed the outcome"),
        }
    }

    #[test]
    fn acf_is_nonnegative_on_nonnegative_data(data in prop::collection::vec(0.0f64..1e6, 2..200)) {
        prop_assume!(data.iter().any(|&x| x > 0.0));
        let acf = heavy_acf(&data, data.len() - 1).unwrap();
        prop_assert_eq!(acf.values[0], 1.0);
        prop_assert!(acf.values.iter().all(|&r| r >= 0.0));
    }

    #[test]
    fn degree_multiset_ignores_line_order(
        edges in prop::collection::vec((0u64..30, 0u64..30), 0..120),
        seed in any::<u64>(),
    ) {
        let text: Vec<String> = edges.iter().map(|(a, b)| format!("{a} {b}")).collect();
        let mut shuffled = text.clone();
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let mut a = parse_edge_list(text.join("\n").as_bytes(), "a").unwrap().degrees;
        let mut b = parse_edge_list(shuffled.join("\n").as_bytes(), "b").unwrap().degrees;
        prop_assert_eq!(a.iter().sum::<u64>() % 2, 0);
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn regular_ring_degrees(n in 3usize..300, k2 in 1usize..5) {
        let half = k2.min((n - 1) / 2);
        prop_assume!(half >= 1);
        let mut text = String::new();
        for i in 0..n {
            for d in 1..=half {
                text.push_str(&format!("{} {}\n", i, (i + d) % n));
            }
        }
        let seq = parse_edge_list(text.as_bytes(), "ring").unwrap();
        prop_assert_eq!(seq.degrees, vec![2 * half as u64; n]);
    }
}

#[test]
fn evaluators_stay_finite_for_tiny_rho() {
    let p = TheoryParams::new(0.01, 1e-12).unwrap().with_j0(5);
    for j in [1u64, 2, 1000, 1_000_000] {
        for v in [
            theory::psi_pmf(j, &p),
            theory::inter_cluster_pmf(j, &p),
            theory::limit_geometric_pmf(j, &p),
            theory::armax_pmf_exact(j, &p),
            theory::armax_pmf_uncorrected(j, &p),
        ] {
            assert!(v.is_finite() && v >= 0.0);
        }
    }
    for v in [theory::lambda_n(&p), theory::truncated_mean_model(&p), theory::armax_mean_exact(&p), theory::armax_mean_uncorrected(&p)] {
        assert!(v.is_finite() && v > 0.0);
    }
}
