//! Randomized property suites. Each property is seeded through proptest so
//! failures shrink to a reproducible seed.

mod common;

use proptest::prelude::*;

fn check(r: common::Check) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gate_rules_are_sound(seed in any::<u64>()) {
        check(common::gate_soundness(seed))?;
    }

    #[test]
    fn composition_is_matrix_product(seed in any::<u64>()) {
        check(common::compose_matches_product(seed))?;
    }

    #[test]
    fn reduction_steps_are_sound(seed in any::<u64>()) {
        check(common::reduction_step_soundness(seed))?;
    }

    #[test]
    fn cast_is_pointwise_correct(seed in any::<u64>()) {
        check(common::cast_pointwise(seed))?;
    }

    #[test]
    fn wcnf_round_trips(seed in any::<u64>()) {
        check(common::wcnf_round_trip(seed))?;
    }

    #[test]
    fn cyclotomic_ring_identities(seed in any::<u64>()) {
        check(common::cyclotomic_identities(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_counter_matches_brute_force(seed in any::<u64>()) {
        check(common::counter_matches_brute_force(seed, false))?;
    }

    #[test]
    fn float_counter_matches_brute_force(seed in any::<u64>()) {
        check(common::counter_matches_brute_force(seed, true))?;
    }

    #[test]
    fn modes_agree_on_equivalence_class(seed in any::<u64>()) {
        check(common::mode_consistency(seed))?;
    }
}
