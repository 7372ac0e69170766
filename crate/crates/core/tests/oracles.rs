//! Property tests and cross-checks against independent oracles.

mod common;

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use bellrand::bell::{i_alpha, i_alpha_beta, BellExpression, Relabelling};
use bellrand::correlations::{
    behavior_from_correlators, chsh_symmetries, correlators_from_behavior, is_local_by_chsh,
    local_decomposition, Behavior, CorrelatorVector,
};
use bellrand::doubled::{block_correlator, block_correlator_formula, random_unitary, BlockInstance};
use bellrand::nspoly::{ns_max_guessing, ns_max_guessing_lp, ns_vertices, Target};
use bellrand::qubit::{
    correlators_of, max_violation_ialpha, max_violation_ialphabeta, numeric_maximize, optimal_realization,
    tsirelson_ialpha_fixed_theta, OptimalParams, SearchOptions,
};
use bellrand::randomness::{certified_single_bound, guessing_single};
use bellrand::repro::random_realization;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol:e})");
}

fn ns_behavior(weights: &[f64]) -> Behavior {
    let total: f64 = weights.iter().sum();
    let parts: Vec<(f64, Behavior)> = weights
        .iter()
        .zip(ns_vertices())
        .map(|(w, v)| (w / total, v.behavior))
        .collect();
    Behavior::mixture(&parts).unwrap()
}

fn correlator_strategy() -> impl Strategy<Value = CorrelatorVector> {
    // random points of the no-signalling polytope
    prop::collection::vec(0.0..1.0f64, 24)
        .prop_filter("non-zero weight", |w| w.iter().sum::<f64>() > 1e-3)
        .prop_map(|w| correlators_from_behavior(&ns_behavior(&w)))
}

fn expression_strategy() -> impl Strategy<Value = BellExpression> {
    (prop::array::uniform2(-3.0..3.0f64), prop::array::uniform2(-3.0..3.0f64), prop::array::uniform4(-3.0..3.0f64))
        .prop_map(|(a, b, j)| BellExpression::new(a, b, [[j[0], j[1]], [j[2], j[3]]]))
}

proptest! {
    #[test]
    fn behavior_correlator_round_trip(cv in correlator_strategy()) {
        let beh = behavior_from_correlators(&cv).unwrap();
        let back = correlators_from_behavior(&beh);
        prop_assert!(back.max_abs_diff(&cv) < 1e-12);
        let parsed = Behavior::from_json(&beh.to_json()).unwrap();
        prop_assert_eq!(parsed, beh);
    }

    #[test]
    fn fine_criterion_matches_lp(w in prop::collection::vec(0.0..1.0f64, 24)) {
        prop_assume!(w.iter().sum::<f64>() > 1e-3);
        let beh = ns_behavior(&w);
        prop_assert_eq!(local_decomposition(&beh).is_local(), is_local_by_chsh(&beh));
    }

    #[test]
    fn evaluate_is_linear(e in expression_strategy(), x in correlator_strategy(), y in correlator_strategy(), t in 0.0..1.0f64) {
        let mix = |p: f64, q: f64| t * p + (1.0 - t) * q;
        let m = CorrelatorVector::new(
            [mix(x.alice[0], y.alice[0]), mix(x.alice[1], y.alice[1])],
            [mix(x.bob[0], y.bob[0]), mix(x.bob[1], y.bob[1])],
            [
                [mix(x.joint[0][0], y.joint[0][0]), mix(x.joint[0][1], y.joint[0][1])],
                [mix(x.joint[1][0], y.joint[1][0]), mix(x.joint[1][1], y.joint[1][1])],
            ],
        );
        prop_assert!((e.evaluate(&m) - mix(e.evaluate(&x), e.evaluate(&y))).abs() < 1e-12);
    }

    #[test]
    fn relabelling_preserves_values_and_local_bound(e in expression_strategy(), cv in correlator_strategy(), k in 0usize..64) {
        let r = Relabelling::all().nth(k).unwrap();
        let er = e.relabel(&r);
        prop_assert!((er.evaluate(&r.apply(&cv)) - e.evaluate(&cv)).abs() < 1e-12);
        prop_assert_eq!(er.local_bound().local_bound, e.local_bound().local_bound);
    }

    #[test]
    fn local_bound_matches_formula(alpha in 1.0..20.0f64, beta in 0.0..8.0f64) {
        let b = i_alpha_beta(alpha, beta).unwrap().local_bound();
        prop_assert_eq!(b.local_bound, beta + 2.0 * alpha);
    }

    #[test]
    fn optimal_value_is_independent_of_phi(alpha in 1.0..10.0f64, theta in 0.01..FRAC_PI_4, phi in 0.0..6.3f64, flip in any::<bool>()) {
        let sign = if flip { -1.0 } else { 1.0 };
        let r = optimal_realization(alpha, theta, &OptimalParams::new(alpha, theta, phi, sign)).unwrap();
        let v = i_alpha(alpha).unwrap().evaluate(&correlators_of(&r));
        prop_assert!((v - tsirelson_ialpha_fixed_theta(alpha, theta)).abs() < 1e-12);
    }

    #[test]
    fn scan_matches_simplex(chsh in 2.0..=4.0f64, t in 0usize..16) {
        let target = Target::all().nth(t).unwrap();
        let scan = ns_max_guessing(chsh, target).unwrap().g;
        let lp = ns_max_guessing_lp(chsh, target).unwrap();
        prop_assert!((scan - lp).abs() < 1e-9, "{} vs {}", scan, lp);
    }
}

#[test]
fn realization_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let r = random_realization(&mut rng);
        let fast = correlators_of(&r);
        let dense = common::dense_correlators(&r);
        assert!(fast.max_abs_diff(&dense) < 1e-12, "{fast:?} vs {dense:?}");
    }
}

#[test]
fn quantum_behaviors_are_no_signalling_and_below_tsirelson() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let r = random_realization(&mut rng);
        let beh = behavior_from_correlators(&common::dense_correlators(&r)).unwrap();
        for v in chsh_symmetries(&beh) {
            assert!(v <= 2.0 * SQRT_2 + 1e-12);
        }
    }
}

/// Alice's first outcome can never be guessed better than the certified
/// bound allows, for any realization violating `I_α`.
#[test]
fn certified_bound_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut probed = 0;
    for i in 0..4000 {
        let alpha = 1.0 + 4.0 * rng.random::<f64>();
        let theta = rng.random_range(0.0..=FRAC_PI_4);
        let r = if i % 2 == 0 {
            random_realization(&mut rng)
        } else {
            // tilt Alice's first direction away from an optimal point
            let phi = rng.random_range(0.0..6.3);
            let theta = theta.max(1e-3);
            let mut q = optimal_realization(alpha, theta, &OptimalParams::new(alpha, theta, phi, 1.0)).unwrap();
            let tilt = nalgebra::Vector3::new(rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()) * 0.05;
            q.a[0] = (q.a[0] + tilt).normalize();
            q
        };
        let cv = common::dense_correlators(&r);
        let violation = i_alpha(alpha).unwrap().evaluate(&cv);
        if violation <= 2.0 * alpha {
            continue;
        }
        probed += 1;
        let beh = behavior_from_correlators(&cv).unwrap();
        let bound = certified_single_bound(alpha, violation).unwrap().g;
        assert!(guessing_single(&beh, 0) <= bound + 1e-9, "alpha={alpha} I={violation}");
    }
    assert!(probed > 500, "only {probed} violating samples");
}

/// Along the optimal family the second setting of Alice stays unbiased.
#[test]
fn second_setting_unpredictable_at_maximum() {
    for alpha in [1.0, 1.3, 2.0, 4.0] {
        for beta in [0.0, 0.1, 0.4, 0.45] {
            let m = max_violation_ialphabeta(alpha, beta).unwrap();
            let cv = common::dense_correlators(&m.realization);
            close(cv.alice[1], 0.0, 1e-12);
            close(cv.bob[0], cv.bob[1], 1e-12);
        }
    }
}

/// Whatever the search converges to, its correlators are those of the
/// closed-form optimum.
#[test]
fn maximal_correlators_are_unique() {
    let opts = SearchOptions {
        restarts: 20,
        seed: 9,
        ..SearchOptions::default()
    };
    for alpha in [1.0, 2.0, 3.5] {
        let (value, want) = max_violation_ialpha(alpha).unwrap();
        let r = numeric_maximize(&i_alpha(alpha).unwrap(), None, &opts);
        close(r.value, value, 1e-9);
        let got = common::dense_correlators(&r.realization);
        for u in 0..2 {
            close(got.alice[u], 0.0, 1e-4);
            close(got.bob[u], 0.0, 1e-4);
        }
        for u in 0..2 {
            for v in 0..2 {
                close(got.joint[u][v], want.joint[u][v], 1e-4);
            }
        }
    }
}

/// The maximal `I_α` value falls to the local bound as the state becomes
/// a product state, for the closed form and the numeric search alike.
#[test]
fn violation_vanishes_with_entanglement() {
    let opts = SearchOptions {
        restarts: 10,
        ..SearchOptions::default()
    };
    for alpha in [1.0, 2.0] {
        let mut prev = f64::INFINITY;
        for theta in [FRAC_PI_4, 0.5, 0.2, 0.05, 0.01, 0.0] {
            let closed = tsirelson_ialpha_fixed_theta(alpha, theta);
            assert!(closed < prev);
            prev = closed;
            let r = numeric_maximize(&i_alpha(alpha).unwrap(), Some(theta), &opts);
            close(r.value, closed, 1e-6);
        }
        close(prev, 2.0 * alpha, 0.0);
    }
}

#[test]
fn block_correlator_bound_larger_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for d in 1..=6 {
        for _ in 0..50 {
            let theta = rng.random_range(0.0..=FRAC_PI_4);
            let bi = BlockInstance::new(d, theta, random_unitary(d, &mut rng), random_unitary(d, &mut rng)).unwrap();
            let dense = block_correlator(&bi);
            close(dense, block_correlator_formula(&bi), 1e-12);
            assert!(dense.abs() <= (2.0 * theta).sin() + 1e-12);
        }
    }
}

#[test]
fn random_mixtures_cover_both_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut local, mut nonlocal) = (0, 0);
    for _ in 0..500 {
        let beh = bellrand::repro::random_ns_behavior(&mut rng);
        if local_decomposition(&beh).is_local() {
            local += 1;
        } else {
            nonlocal += 1;
        }
    }
    assert!(local > 50 && nonlocal > 50, "{local} local, {nonlocal} non-local");
}
