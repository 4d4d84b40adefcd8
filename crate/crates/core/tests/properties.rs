mod common;

use cmx_core::{
    add_noise, curl, divergence, enumerate_cones, estimate_components, generate_cmc, harmonic_hubs,
    hodge_decompose, nmse, nmse_sweep, reconstruct, signal_from_csv, signal_to_csv,
    synth_ground_truth, verify_chain, CellMultiComplex, Cochain, ComponentWeights,
    CrossEdgeOperators, SweepConfig, View, DEFAULT_TOLERANCE,
};
use common::*;
use proptest::prelude::*;

fn view_strategy() -> impl Strategy<Value = View> {
    prop_oneof![Just(View::Lower), Just(View::Upper)]
}

fn ops_and_signal(
    seed: u64,
    view: View,
    values: &[f64],
) -> Option<(CellMultiComplex, CrossEdgeOperators, Cochain)> {
    let x = synth(seed);
    let ops = CrossEdgeOperators::new(&x, pair(), view, DEFAULT_TOLERANCE).unwrap();
    if ops.edges.is_empty() {
        return None;
    }
    let v: Vec<f64> = (0..ops.edges.len())
        .map(|i| values[i % values.len()] + i as f64 * 0.01)
        .collect();
    let s = Cochain::new(ops.edges.clone(), v).unwrap();
    Some((x, ops, s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn description_round_trip(seed in 0u64..500) {
        let x = synth(seed);
        let back = CellMultiComplex::from_json(&x.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), x.to_json());
        prop_assert!(verify_chain(&x).passed());
    }

    #[test]
    fn decomposition_is_complete_and_orthogonal(
        seed in 0u64..500,
        view in view_strategy(),
        values in prop::collection::vec(-10.0f64..10.0, 1..8),
    ) {
        let Some((x, _, s)) = ops_and_signal(seed, view, &values) else { return Ok(()); };
        let h = hodge_decompose(&x, pair(), view, &s, DEFAULT_TOLERANCE).unwrap();
        let n2 = s.norm().powi(2).max(f64::MIN_POSITIVE);
        prop_assert!(reconstruct(&h).unwrap().sub(&s).unwrap().norm() <= 1e-10 * s.norm());
        prop_assert!(h.gradient.dot(&h.curl).unwrap().abs() <= 1e-9 * n2);
        prop_assert!(h.gradient.dot(&h.harmonic).unwrap().abs() <= 1e-9 * n2);
        prop_assert!(h.curl.dot(&h.harmonic).unwrap().abs() <= 1e-9 * n2);
    }

    #[test]
    fn estimator_matches_projections_and_constraints(
        seed in 0u64..500,
        view in view_strategy(),
        values in prop::collection::vec(-10.0f64..10.0, 1..8),
    ) {
        let Some((x, ops, y)) = ops_and_signal(seed, view, &values) else { return Ok(()); };
        let e = estimate_components(&x, pair(), view, &y, DEFAULT_TOLERANCE).unwrap();
        let h = ops.decompose(&x, &y).unwrap();
        for (a, b) in [(&e.gradient, &h.gradient), (&e.curl, &h.curl), (&e.harmonic, &h.harmonic)] {
            prop_assert!(max_abs_diff(a.values(), b.values()) <= 1e-9 * y.norm().max(1.0));
        }
        let div = ops.divergence(&e.harmonic).unwrap();
        let circ = ops.curl(&e.harmonic).unwrap();
        prop_assert!(div.norm() <= 1e-9 * y.norm());
        prop_assert!(circ.norm() <= 1e-9 * y.norm());
    }

    #[test]
    fn divergence_kills_curl_and_curl_kills_gradient(
        seed in 0u64..500,
        view in view_strategy(),
        values in prop::collection::vec(-10.0f64..10.0, 1..8),
    ) {
        let Some((x, _, s)) = ops_and_signal(seed, view, &values) else { return Ok(()); };
        let h = hodge_decompose(&x, pair(), view, &s, DEFAULT_TOLERANCE).unwrap();
        let scale = s.norm().max(1.0);
        prop_assert!(divergence(&x, pair(), view, &h.curl).unwrap().norm() <= 1e-9 * scale);
        prop_assert!(curl(&x, pair(), view, &h.gradient).unwrap().norm() <= 1e-9 * scale);
    }

    #[test]
    fn noiseless_planted_signals_are_recovered(seed in 0u64..500, view in view_strategy(), t in 0u64..1000) {
        let x = synth(seed);
        let Ok(g) = synth_ground_truth(&x, pair(), view, t, ComponentWeights::default()) else {
            return Ok(());
        };
        prop_assume!(g.signal.norm() > 0.0);
        let e = estimate_components(&x, pair(), view, &g.signal, DEFAULT_TOLERANCE).unwrap();
        prop_assert!(nmse(&reconstruct(&e).unwrap(), &g.signal).unwrap() <= 1e-10);
        prop_assert!(max_abs_diff(e.harmonic.values(), g.harmonic.values()) <= 1e-9);
    }

    #[test]
    fn hubs_are_unfilled_apexes_in_a_total_order(
        seed in 0u64..500,
        view in view_strategy(),
        values in prop::collection::vec(-10.0f64..10.0, 1..8),
    ) {
        let Some((x, ops, s)) = ops_and_signal(seed, view, &values) else { return Ok(()); };
        let div = ops.divergence(&s).unwrap();
        let hubs = harmonic_hubs(&x, pair(), view, &s, &div).unwrap();
        let again = harmonic_hubs(&x, pair(), view, &s, &div).unwrap();
        prop_assert_eq!(&hubs, &again);
        let cones = enumerate_cones(&x, pair(), view.opposite_layer(pair())).unwrap();
        for h in &hubs {
            prop_assert!(h.harmonic_energy >= 0.0);
            prop_assert!(cones.cones.iter().any(|c| c.apex == h.node && !c.filled));
        }
        for w in hubs.windows(2) {
            let ordered = w[0].harmonic_energy > w[1].harmonic_energy
                || (w[0].harmonic_energy == w[1].harmonic_energy
                    && (w[0].divergence_value > w[1].divergence_value
                        || (w[0].divergence_value == w[1].divergence_value && w[0].node < w[1].node)));
            prop_assert!(ordered);
        }
    }

    #[test]
    fn signal_csv_round_trip(values in prop::collection::vec(-1e6f64..1e6, 1..8), seed in 0u64..100) {
        let Some((_, _, s)) = ops_and_signal(seed, View::Lower, &values) else { return Ok(()); };
        prop_assert_eq!(signal_from_csv(&signal_to_csv(&s)).unwrap(), s);
    }

    #[test]
    fn noise_is_seed_deterministic(snr in -10.0f64..40.0, seed in 0u64..1000) {
        let x = synth(seed % 50);
        let Ok(g) = synth_ground_truth(&x, pair(), View::Lower, seed, ComponentWeights::default()) else {
            return Ok(());
        };
        prop_assume!(g.signal.len() > 1);
        let (a, ma) = add_noise(&g.signal, snr, seed).unwrap();
        let (b, mb) = add_noise(&g.signal, snr, seed).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(ma.noise_variance > 0.0);
        prop_assert!((ma.snr() - 10f64.powf(snr / 10.0)).abs() <= 1e-9 * ma.snr());
        prop_assert_eq!(ma, mb);
    }
}

#[test]
fn sweep_is_deterministic_across_runs() {
    let x = generate_cmc(&synth_config(3)).unwrap();
    let cfg = SweepConfig {
        snr_db: vec![0.0, 10.0],
        trials: 20,
        ..SweepConfig::default()
    };
    let a = nmse_sweep(&x, pair(), View::Lower, &cfg).unwrap();
    let b = nmse_sweep(&x, pair(), View::Lower, &cfg).unwrap();
    assert_eq!(a, b);
    assert!(a
        .points
        .iter()
        .all(|p| p.mean_nmse >= 0.0 && p.trials == 20));
}
