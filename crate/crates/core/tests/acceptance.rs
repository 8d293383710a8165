//! One test per acceptance criterion, so the runner prints a pass/fail line
//! for each. Run with `--nocapture` to see the measured values.

use locc_core::acceptance::{self, CriterionResult};

fn check(result: CriterionResult) {
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_1_random_qutrit_triples_are_perfect() {
    check(acceptance::three_qutrit_triples());
}

#[test]
fn criterion_2_small_bell_subsets_are_perfect_via_cub() {
    check(acceptance::bell_subsets_via_cub());
}

#[test]
fn criterion_3_standard_protocol_on_full_bell_basis() {
    check(acceptance::bell_basis_saturation());
}

#[test]
fn criterion_4_discard_strategies_hit_exact_values() {
    check(acceptance::discard_exact_values());
}

#[test]
fn criterion_5_library_respects_bounds() {
    check(acceptance::bound_consistency());
}

#[test]
fn criterion_6_transpose_identity() {
    check(acceptance::transpose_identity_sweep());
}

#[test]
fn criterion_7_prime_mubs_are_unbiased() {
    check(acceptance::mub_verification());
}

#[test]
fn criterion_8_verdicts_on_known_ensembles() {
    check(acceptance::verdict_correctness());
}

#[test]
fn criterion_9_monte_carlo_matches_exact() {
    check(acceptance::monte_carlo_agreement());
}
