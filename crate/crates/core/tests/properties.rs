mod common;

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;
use proptest::sample::subsequence;

use xisim_core::algorithms::{
    np_search, np_search_with_order, search_via_counting, sharp_p_count, Limits, OracleFunction,
};
use xisim_core::nonlinear::{apply_xi, signaling_advantage, LocalAction, XiMode};
use xisim_core::statevector::{gates, BasisLabel, RegisterLayout, SparseState};

fn state_on(width: usize, terms: BTreeMap<u64, (f64, f64)>) -> Option<SparseState> {
    let terms = terms
        .into_iter()
        .map(|(v, (re, im))| (BasisLabel::new(v, width), Complex::new(re, im)));
    SparseState::normalized(width, terms).ok()
}

/// One `(B, C)` branch per occupied value of register A.
fn marker_case() -> impl Strategy<Value = (RegisterLayout, SparseState, usize)> {
    (1usize..5, 0usize..3).prop_flat_map(|(a, b)| {
        let layout = RegisterLayout::new(a, b, 1).unwrap();
        let branch = (0..1u64 << b, 0..2u64, -1.0f64..1.0, -1.0f64..1.0);
        (
            Just(layout),
            prop::collection::btree_map(0..1u64 << a, branch, 1..=1usize << a),
            0..a,
        )
            .prop_filter_map("nonzero state", |(layout, branches, q)| {
                let terms = branches
                    .into_iter()
                    .map(|(j, (p, c, re, im))| (layout.join(j, p, c), Complex::new(re, im)));
                SparseState::normalized(layout.total(), terms)
                    .ok()
                    .map(|s| (layout, s, q))
            })
    })
}

fn single_qubit_unitary() -> impl Strategy<Value = DMatrix<Complex<f64>>> {
    let tau = std::f64::consts::TAU;
    (0.0..tau, 0.0..tau, 0.0..tau, 0.0..tau).prop_map(|(a, b, c, phase)| {
        let p = Complex::from_polar(1.0, phase);
        (gates::rz(a) * gates::ry(b) * gates::rz(c)).map(|z| z * p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn xi_preserves_norm_and_magnitudes((layout, state, q) in marker_case()) {
        let out = apply_xi(&state, &layout, q, XiMode::Marker).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
        let mags = |s: &SparseState| {
            let mut m: Vec<f64> = s.terms().map(|(_, a)| a.norm()).collect();
            m.sort_by(f64::total_cmp);
            m
        };
        prop_assert_eq!(mags(&out), mags(&state));
    }

    #[test]
    fn xi_is_idempotent((layout, state, q) in marker_case()) {
        let once = apply_xi(&state, &layout, q, XiMode::Marker).unwrap();
        let twice = apply_xi(&once, &layout, q, XiMode::Marker).unwrap();
        prop_assert!(once.max_amplitude_diff(&twice) <= 1e-12);
        prop_assert!(twice.max_amplitude_diff(&once) <= 1e-12);
    }

    #[test]
    fn counter_mode_preserves_norm(
        a in 1usize..4,
        counters in prop::collection::vec(0u64..8, 8),
        q_seed in 0usize..8,
    ) {
        let layout = RegisterLayout::new(a, 0, 5).unwrap();
        let terms: Vec<_> = (0..1u64 << a)
            .map(|j| (layout.join(j, 0, counters[j as usize % 8]), Complex::new(1.0, 0.0)))
            .collect();
        let state = SparseState::normalized(layout.total(), terms).unwrap();
        let out = apply_xi(&state, &layout, q_seed % a, XiMode::Counter).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn local_unitaries_never_signal(
        u in single_qubit_unitary(),
        terms in prop::collection::btree_map(0..8u64, (-1.0f64..1.0, -1.0f64..1.0), 1..8),
        alice in 0usize..3,
    ) {
        if let Some(state) = state_on(3, terms) {
            let bob: Vec<usize> = (0..3).filter(|&q| q != alice).collect();
            let d = signaling_advantage(&state, &[alice], &bob, &LocalAction::unitary(u, &[alice])).unwrap();
            prop_assert!(d <= 1e-12, "advantage {d}");
        }
    }

    #[test]
    fn doubling_law(n in 1usize..9, seed in any::<u64>()) {
        let s = seed % (1 << n);
        let res = np_search(&OracleFunction::from_solutions(n, [s]).unwrap()).unwrap();
        let expected: Vec<usize> = (0..=n).map(|k| 1 << k).collect();
        prop_assert_eq!(res.marked_terms, expected);
    }

    #[test]
    fn search_is_order_invariant(
        (n, order) in (1usize..8).prop_flat_map(|n| (Just(n), Just((0..n).collect::<Vec<_>>()).prop_shuffle())),
        seed in any::<u64>(),
    ) {
        let oracle = OracleFunction::from_solutions(n, [seed % (1 << n)]).unwrap();
        let reference = np_search(&oracle).unwrap();
        let permuted = np_search_with_order(&oracle, &order, Limits::default()).unwrap();
        prop_assert_eq!(permuted.solution, reference.solution);
        prop_assert!(permuted.final_state.max_amplitude_diff(&reference.final_state) <= 1e-12);
        prop_assert!(reference.final_state.max_amplitude_diff(&permuted.final_state) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn counting_agrees_with_truth_table(
        (n, table) in (4usize..=10).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::bool::weighted(0.1), 1 << n))),
    ) {
        let expected = table.iter().filter(|&&b| b).count() as u64;
        let oracle = OracleFunction::new(n, table).unwrap();
        prop_assert_eq!(sharp_p_count(&oracle).unwrap(), expected);
        match search_via_counting(&oracle).unwrap() {
            Some(s) => prop_assert!(oracle.eval(s)),
            None => prop_assert_eq!(expected, 0),
        }
    }

    #[test]
    fn unique_search_agrees_with_truth_table(n in 4usize..=10, seed in any::<u64>()) {
        let s = seed % (1 << n);
        let oracle = OracleFunction::from_solutions(n, [s]).unwrap();
        prop_assert_eq!(np_search(&oracle).unwrap().solution, Some(s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_separation_is_symmetric(code in 0usize..729, l in subsequence(vec![0usize, 1, 2, 3], 0..=2)) {
        let graphs = common::all_dags(4);
        let g = &graphs[code % graphs.len()];
        let dag = g.to_dag(2);
        let l: BTreeSet<usize> = l.into_iter().collect();
        let free: Vec<usize> = (0..4).filter(|v| !l.contains(v)).collect();
        if free.len() >= 2 {
            let (j, k) = (BTreeSet::from([free[0]]), BTreeSet::from([free[1]]));
            prop_assert_eq!(
                dag.d_separated_idx(&j, &k, &l).unwrap(),
                dag.d_separated_idx(&k, &j, &l).unwrap()
            );
        }
    }
}
