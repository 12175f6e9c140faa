mod common;

use circuitwalk::arith::RatVector;
use circuitwalk::circuits::{conformal_circuit_decomposition, is_circuit, is_conformal};
use circuitwalk::walks::{graver_decomposition, GraverExtraction, graver_decomposition_with};
use circuitwalk::ip::{is_graver_element, DEFAULT_BRUTE_FORCE_BUDGET};
use circuitwalk::arith::{delta_exact, DEFAULT_DELTA_BUDGET};
use common::{example1_matrix, random_kernel_vector, random_matrix};
use proptest::prelude::*;

#[test]
fn worked_example_terms() {
    let a = example1_matrix();
    let h = RatVector::from_i64(&[2, 5, -9, 1, -4, 3, -8]);
    let published = [
        [0, 1, -2, 1, -1, 0, 0],
        [0, 0, -3, 0, -3, 3, 0],
        [0, 4, -4, 0, 0, 0, -4],
        [2, 0, 0, 0, 0, 0, -4],
    ];
    let mut sum = RatVector::zeros(7);
    for d in published {
        let d = RatVector::from_i64(&d);
        assert!(is_circuit(&a, &d.primitive().unwrap()));
        assert!(is_conformal(&d, &h).unwrap());
        sum = &sum + &d;
    }
    assert_eq!(sum, h);
    let dec = conformal_circuit_decomposition(&a, &h).unwrap();
    assert!(dec.is_valid(&a), "{:?}", dec.violations(&a));
    assert_eq!(dec.terms, published.iter().map(|d| RatVector::from_i64(d)).collect::<Vec<_>>());
}

#[test]
fn circuit_decomposes_to_itself() {
    let a = example1_matrix();
    let c = RatVector::from_i64(&[1, 0, 0, 0, 0, 0, -2]);
    let dec = conformal_circuit_decomposition(&a, &c).unwrap();
    assert_eq!(dec.terms, vec![c]);
}

#[test]
fn rejects_vectors_outside_kernel() {
    let a = example1_matrix();
    assert!(conformal_circuit_decomposition(&a, &RatVector::unit(7, 0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_circuit_decompositions_are_valid(seed in any::<u64>()) {
        let a = random_matrix(seed, 3, 6, 2);
        if let Some(h) = random_kernel_vector(&a, seed ^ 0x55, 12) {
            let dec = conformal_circuit_decomposition(&a, &h).unwrap();
            prop_assert!(dec.is_valid(&a), "{:?}", dec.violations(&a));
            prop_assert!(dec.len() <= 6);
        }
    }

    #[test]
    fn random_graver_decompositions_are_valid(seed in any::<u64>()) {
        let a = random_matrix(seed, 2, 5, 2);
        if let Some(h) = random_kernel_vector(&a, seed ^ 0xaa, 6) {
            let delta = delta_exact(&a, DEFAULT_DELTA_BUDGET).unwrap();
            let dec = graver_decomposition(&a, &h, &delta).unwrap();
            prop_assert!(dec.violations(&a).is_empty(), "{:?}", dec.violations(&a));
            for (_, g) in &dec.terms {
                prop_assert!(is_graver_element(&a, g, DEFAULT_BRUTE_FORCE_BUDGET).unwrap());
            }
            let other = graver_decomposition_with(&a, &h, &delta, GraverExtraction::StandardForm).unwrap();
            prop_assert_eq!(other.replay(), h);
        }
    }
}
