use proptest::prelude::*;
use qi_core::closure::{ceil_log2, closest_superset, term_expansion};
use qi_core::delay::{sparsity_to_delay, DelayMatrix};
use qi_core::heuristics::{close_subset, HeuristicConfig, Method, Schedule};
use qi_core::nearest::{build_lp, minplus_superset, solve_closest, Mode, NearestQuery, Norm};
use qi_core::oracle::{exhaustive_maximal_subset, exhaustive_minimal_superset, rational_to_f64, solve_rational_lp, RationalLp};
use qi_core::pattern::BinaryPattern;
use qi_core::qi::{is_qi_delay, is_qi_delay_with_tolerance, is_qi_sparsity, is_qi_sparsity_fast};

fn pattern(rows: usize, cols: usize) -> impl Strategy<Value = BinaryPattern> {
    proptest::collection::vec(any::<bool>(), rows * cols).prop_map(move |e| BinaryPattern::new(rows, cols, e).unwrap())
}

/// (K, G) with K n_u×n_y and G n_y×n_u.
fn pair(max: usize) -> impl Strategy<Value = (BinaryPattern, BinaryPattern)> {
    (1..=max, 1..=max).prop_flat_map(|(nu, ny)| (pattern(nu, ny), pattern(ny, nu)))
}

fn integer_delays(rows: usize, cols: usize, hi: u32) -> impl Strategy<Value = DelayMatrix> {
    proptest::collection::vec(0..=hi, rows * cols).prop_map(move |v| {
        let rows_v: Vec<Vec<f64>> = v.chunks(cols).map(|r| r.iter().map(|&x| f64::from(x)).collect()).collect();
        DelayMatrix::from_rows(&rows_v).unwrap()
    })
}

fn delay_instance(n: usize) -> impl Strategy<Value = (DelayMatrix, DelayMatrix)> {
    (integer_delays(n, n, 9), integer_delays(n, n, 9))
}

fn flat(t: &DelayMatrix) -> Vec<f64> {
    t.to_finite_vec().expect("finite")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fast_and_enumerated_sparsity_tests_agree((k, g) in pair(5)) {
        prop_assert_eq!(is_qi_sparsity(&k, &g).unwrap().is_qi, is_qi_sparsity_fast(&k, &g).unwrap());
    }

    #[test]
    fn sparsity_and_mapped_delay_verdicts_agree((k, g) in pair(5), scale in 0.1f64..20.0) {
        let t = sparsity_to_delay(&k, scale).unwrap();
        let p = sparsity_to_delay(&g, scale).unwrap();
        prop_assert_eq!(is_qi_sparsity(&k, &g).unwrap().is_qi, is_qi_delay(&t, &p).unwrap().is_qi);
    }

    #[test]
    fn closure_is_qi_superset_and_idempotent((k, g) in pair(6)) {
        let (z, trace) = closest_superset(&k, &g).unwrap();
        prop_assert!(k.le(&z));
        prop_assert!(is_qi_sparsity_fast(&z, &g).unwrap());
        prop_assert!(trace.iterations_used <= ceil_log2(k.rows().min(k.cols())));
        let (again, second) = closest_superset(&z, &g).unwrap();
        prop_assert_eq!(again, z);
        prop_assert_eq!(second.iterations_used, 0);
    }

    #[test]
    fn closure_below_every_qi_superset((k, g) in pair(4), extra in any::<u64>()) {
        let (z, _) = closest_superset(&k, &g).unwrap();
        let (nu, ny) = k.shape();
        let bigger = &k + &BinaryPattern::from_bits(nu, ny, extra & ((1u64 << (nu * ny)) - 1)).unwrap();
        let (w, _) = closest_superset(&bigger, &g).unwrap();
        prop_assert!(z.le(&w));
    }

    #[test]
    fn term_expansion_matches_iterates((k, g) in pair(6)) {
        let (_, trace) = closest_superset(&k, &g).unwrap();
        for (m, z) in trace.iterates.iter().enumerate() {
            prop_assert_eq!(&term_expansion(&k, &g, m as u32).unwrap(), z);
        }
    }

    #[test]
    fn heuristics_return_qi_subsets((k, g) in pair(4), relaxed in any::<bool>(), per_pass in any::<bool>()) {
        let method = if relaxed { Method::RelaxedLp } else { Method::Weights };
        let schedule = if per_pass { Schedule::PerPass } else { Schedule::PerDisconnection };
        let r = close_subset(&k, &g, &HeuristicConfig::new(method).with_schedule(schedule)).unwrap();
        prop_assert!(r.z.le(&k));
        prop_assert!(is_qi_sparsity_fast(&r.z, &g).unwrap());
        prop_assert_eq!(r.hamming_distance, r.z.hamming(&k));
        prop_assert_eq!(r.removed_links.len(), r.hamming_distance);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn closure_matches_brute_force_at_three((k, g) in (pattern(3, 3), pattern(3, 3))) {
        prop_assert_eq!(closest_superset(&k, &g).unwrap().0, exhaustive_minimal_superset(&k, &g).unwrap());
    }

    #[test]
    fn subset_oracle_is_no_worse_than_heuristics((k, g) in (pattern(3, 3), pattern(3, 3))) {
        let (z, best) = exhaustive_maximal_subset(&k, &g).unwrap();
        prop_assert!(is_qi_sparsity_fast(&z, &g).unwrap());
        let r = close_subset(&k, &g, &HeuristicConfig::new(Method::Weights)).unwrap();
        prop_assert!(best <= r.hamming_distance);
    }

    #[test]
    fn lp_superset_equals_minplus_closure((p, t) in delay_instance(3)) {
        let closure = minplus_superset(&t, &p).unwrap();
        let lp = solve_closest(&t, &p, &NearestQuery::new(Mode::Superset, Norm::One)).unwrap();
        for (a, b) in flat(&closure.t_out).iter().zip(flat(&lp.t_out)) {
            prop_assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
        prop_assert!((closure.objective - lp.objective).abs() < 1e-7);
    }

    #[test]
    fn delay_modes_are_feasible_and_ordered((p, t) in delay_instance(3)) {
        for norm in [Norm::One, Norm::Two, Norm::Inf] {
            let mut by_mode = Vec::new();
            for mode in [Mode::Set, Mode::Subset, Mode::Superset] {
                let r = solve_closest(&t, &p, &NearestQuery::new(mode, norm)).unwrap();
                prop_assert!(is_qi_delay_with_tolerance(&r.t_out, &p, 1e-6).unwrap().is_qi);
                let (out, target) = (flat(&r.t_out), flat(&t));
                for (o, x) in out.iter().zip(&target) {
                    prop_assert!(*o >= -1e-7);
                    match mode {
                        Mode::Subset => prop_assert!(*o >= x - 1e-7),
                        Mode::Superset => prop_assert!(*o <= x + 1e-7),
                        Mode::Set => {}
                    }
                }
                by_mode.push(r.objective);
            }
            prop_assert!(by_mode[0] <= by_mode[1] + 1e-6);
            prop_assert!(by_mode[0] <= by_mode[2] + 1e-6);
        }
    }

    #[test]
    fn qi_input_is_its_own_nearest((p, t) in delay_instance(3)) {
        let qi = minplus_superset(&t, &p).unwrap().t_out;
        for norm in [Norm::One, Norm::Inf] {
            let r = solve_closest(&qi, &p, &NearestQuery::new(Mode::Set, norm)).unwrap();
            prop_assert!(r.objective.abs() < 1e-7);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn float_simplex_matches_exact_rational((p, t) in delay_instance(3), mode_ix in 0usize..3, inf in any::<bool>()) {
        let mode = [Mode::Set, Mode::Subset, Mode::Superset][mode_ix];
        let query = NearestQuery::new(mode, if inf { Norm::Inf } else { Norm::One });
        let exact = solve_rational_lp(&RationalLp::from_lp(&build_lp(&t, &p, &query).unwrap()).unwrap()).unwrap();
        let float = solve_closest(&t, &p, &query).unwrap();
        prop_assert!((rational_to_f64(&exact.objective) - float.objective).abs() < 1e-6);
    }
}
