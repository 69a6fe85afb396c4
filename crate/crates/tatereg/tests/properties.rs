mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms_hold(case in ring_case()) {
        ring_axioms(case)?;
    }

    #[test]
    fn frobenius_is_a_ring_automorphism(case in ring_case()) {
        frobenius_laws(case)?;
    }

    #[test]
    fn lambert_resum_inverts_decompose(case in series_case()) {
        lambert_round_trip(case)?;
    }

    #[test]
    fn lambert_matches_mobius(case in series_case()) {
        mobius_oracle(case)?;
    }

    #[test]
    fn ell_phi_is_additive(case in unit_case()) {
        ell_phi_additive(case)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn theta_transformations(case in (primes(), 2i64..8, -20i64..20)) {
        theta_laws(case)?;
    }

    #[test]
    fn eisenstein_verdict_is_basis_independent(case in verdict_case()) {
        verdict_independence(case)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn tate_curve_satisfies_weierstrass(p in primes()) {
        weierstrass_identity((p, 30))?;
    }
}
