mod common;

use circuitwalk::arith::{int_to_rat, ratio, RatVector, Rational};
use circuitwalk::hardness::{reduce_to_walk_instance, subset_sum_sample};
use circuitwalk::ip::{solve_ip, DEFAULT_BRUTE_FORCE_BUDGET};
use circuitwalk::lp::solve_lp;
use circuitwalk::walks::{
    circuit_step_bound, circuit_walk, delta_hat, graver_walk, verify_circuit_walk, verify_graver_walk, DeltaChoice,
    GraverExtraction, Phase, WalkOptions,
};
use common::random_instance;
use num_traits::{One, Signed};

#[test]
fn circuit_walks_on_random_instances() {
    for seed in 0..80u64 {
        let m = 1 + (seed % 3) as usize;
        let n = m + 1 + (seed % 4) as usize;
        let (inst, x0) = random_instance(seed, m, n, (-5, 9));
        let cert = circuit_walk(&inst, &x0, &WalkOptions::default()).unwrap();
        let report = verify_circuit_walk(&inst, &cert);
        assert!(report.passed(), "seed {seed}: {report}");

        let optimum = solve_lp(&inst).objective;
        let gap0 = &optimum - inst.objective(&x0);
        let delta = delta_hat(inst.a(), DeltaChoice::Auto, 1_000_000).unwrap();
        assert!(cert.len() <= circuit_step_bound(n, &delta, &gap0), "seed {seed}");
        let factor = Rational::one() - ratio(1, n as i64);
        assert!(cert.decay_violations(&optimum, &factor).is_empty(), "seed {seed}");
        // the walk is monotone and its points all feasible
        for p in cert.points() {
            assert!(inst.is_feasible(&p, false));
        }
    }
}

#[test]
fn delta_choice_does_not_change_correctness() {
    for seed in 0..20u64 {
        let (inst, x0) = random_instance(seed + 77, 2, 5, (-5, 9));
        for choice in [DeltaChoice::Exact, DeltaChoice::Bound] {
            let opts = WalkOptions {
                delta: choice,
                ..WalkOptions::default()
            };
            let cert = circuit_walk(&inst, &x0, &opts).unwrap();
            assert!(verify_circuit_walk(&inst, &cert).passed());
        }
    }
}

#[test]
fn step_limit_stops_walks() {
    let (inst, x0) = random_instance(3, 2, 6, (-5, 9));
    let full = circuit_walk(&inst, &x0, &WalkOptions::default()).unwrap();
    assert!(!full.is_empty());
    let opts = WalkOptions {
        step_limit: full.len() - 1,
        ..WalkOptions::default()
    };
    assert!(circuit_walk(&inst, &x0, &opts).is_err());
}

#[test]
fn infeasible_start_is_rejected() {
    let (inst, x0) = random_instance(4, 2, 5, (-5, 9));
    let bad = &x0 + &RatVector::unit(5, 0).scale(&ratio(1, 2));
    assert!(circuit_walk(&inst, &bad, &WalkOptions::default()).is_err());
    assert!(graver_walk(&inst, &bad, &WalkOptions::default()).is_err());
}

#[test]
fn graver_walks_on_random_instances() {
    for seed in 0..40u64 {
        let m = 1 + (seed % 2) as usize;
        let n = 3 + (seed % 3) as usize;
        let (inst, x0) = random_instance(seed + 500, m, n, (-4, 4));
        for extraction in [GraverExtraction::Auxiliary, GraverExtraction::StandardForm] {
            let opts = WalkOptions {
                extraction,
                ..WalkOptions::default()
            };
            let cert = graver_walk(&inst, &x0, &opts).unwrap();
            let report = verify_graver_walk(&inst, &cert, DEFAULT_BRUTE_FORCE_BUDGET);
            assert!(report.passed(), "seed {seed}: {report}");
            assert_eq!(inst.objective(&cert.terminal), solve_ip(&inst).objective);
            assert_eq!(cert.count_phase(Phase::Descent), 0);
        }
    }
}

#[test]
fn subset_sum_walk_lengths() {
    for (s, yes) in subset_sum_sample(19, 30, 6, 12) {
        let (inst, x0, ones) = reduce_to_walk_instance(&s);
        let cert = graver_walk(&inst, &x0, &WalkOptions::default()).unwrap();
        assert_eq!(cert.terminal, ones);
        assert_eq!(cert.len() == 1, !yes, "{s:?}");
        let total: Rational = cert.steps.iter().map(|st| st.multiplier.clone()).sum();
        assert!(total.is_positive());
        assert!(verify_graver_walk(&inst, &cert, DEFAULT_BRUTE_FORCE_BUDGET).passed());
        assert_eq!(inst.objective(&ones), int_to_rat(&(s.items().len() as i64 + 2).into()));
    }
}
