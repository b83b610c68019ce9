mod common;

use num_integer::Integer;
use proptest::prelude::*;

use tspp_core::qseries::{extract_progression, pentagonal_series, CoefficientRing, TruncatedSeries};
use tspp_core::radu::{coset_reps, index_gamma0, kappa, p_mr, p_mr_term};
use tspp_core::tspp::{g_alpha_p_spec, reduce_claim, ReductionOutcome};
use tspp_core::{CongruenceClaim, DivisorVector};

use common::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn reduction_commutes_with_multiplication((a, b) in series_pair(40)) {
        for u in MODULI {
            ring_homomorphism(&a, &b, u)?;
        }
    }

    #[test]
    fn multiplication_is_a_commutative_monoid((a, b, c) in series_triple(30)) {
        mul_commutes_and_associates(&a, &b, &c)?;
    }

    #[test]
    fn units_invert(a in unit_series(40)) {
        inverse_law(&a)?;
    }

    #[test]
    fn powers_add(a in unit_series(20), e1 in -5i64..6, e2 in -5i64..6) {
        power_law(&a, e1, e2)?;
    }

    #[test]
    fn orbits_are_closed((m, t, w) in orbit_inputs()) {
        orbit_closure(m, t, w)?;
    }

    /// Nonzero terms sit exactly on dilated generalized pentagonal numbers.
    #[test]
    fn pentagonal_support(delta in 1u64..6, order in 0usize..400) {
        let s = pentagonal_series(delta, order, Z).unwrap();
        let pentagonal: Vec<usize> = (-30i64..=30).map(|k| (delta as i64 * k * (3 * k - 1) / 2) as usize).collect();
        for n in 0..=order {
            let c = s.coeff(n);
            prop_assert_eq!(c != 0.into(), pentagonal.contains(&n), "n = {}", n);
        }
    }

    #[test]
    fn progression_picks_every_step(v in series_strategy(80), step in 1u64..12, offset in 0u64..12) {
        let a = TruncatedSeries::from_i64(Z, &v);
        let result = extract_progression(&a, step, offset);
        if offset >= step || offset as usize > a.order() {
            prop_assert!(result.is_err());
        } else {
            let b = result.unwrap();
            for n in 0..=b.order() {
                prop_assert_eq!(b.coeff(n), a.coeff(step as usize * n + offset as usize));
            }
            prop_assert!(step as usize * (b.order() + 1) + offset as usize > a.order());
        }
    }

    #[test]
    fn index_is_multiplicative(a in 1u64..200, b in 1u64..200) {
        prop_assume!(a.gcd(&b) == 1);
        prop_assert_eq!(index_gamma0(a * b), index_gamma0(a) * index_gamma0(b));
        // one representative gamma_delta per divisor, and divisor counts multiply too
        prop_assert_eq!(coset_reps(a * b).len(), coset_reps(a).len() * coset_reps(b).len());
    }

    /// The reported minimum matches a plain scan and its witness attains it.
    #[test]
    fn cusp_minimum_is_a_minimum(m in (1u64..60).prop_map(|m| 2 * m + 1), r1 in -40i64..40, r2 in -40i64..40, r5 in -40i64..40) {
        let r = DivisorVector::from_ordered(10, &[r1, r2, r5, 0]).unwrap();
        let k = kappa(m);
        for gamma in coset_reps(10) {
            let best = p_mr(&gamma, m, &r, k);
            prop_assert_eq!(&p_mr_term(&gamma, m, &r, k, best.lambda), &best.value);
            for lambda in (0..m).rev() {
                prop_assert!(p_mr_term(&gamma, m, &r, k, lambda) >= best.value);
            }
        }
    }

    /// Each g-class rewrites f(A(3k+j)+B) as g(m k + t) through 6n+1.
    #[test]
    fn reduction_is_an_affine_identity(alpha in 1u32..4, p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), c in 1u64..5, b in 0u64..10_000) {
        let u = p.pow(alpha);
        let step = 2 * u * c;
        let claim = CongruenceClaim::on_f(step, b % step, u);
        if let Ok(classes) = reduce_claim(&claim) {
            prop_assert_eq!(classes.len(), 3);
            for cls in classes {
                let j = u64::from(cls.residue_class);
                prop_assert_eq!(cls.step, 3 * step);
                prop_assert_eq!(cls.offset, step * j + claim.offset);
                match cls.outcome {
                    ReductionOutcome::TriviallyZero => {
                        prop_assert_ne!(cls.offset % 3, 1);
                    }
                    ReductionOutcome::GClaim(g) => {
                        for k in 0..3u64 {
                            prop_assert_eq!(cls.step * k + cls.offset, 6 * (g.m * k + g.t) + 1);
                        }
                        prop_assert_eq!(g.u, u);
                        prop_assert!(g.t < g.m);
                    }
                }
            }
        }
    }

    /// The generator exponents always carry total weight 4 in delta.
    #[test]
    fn generator_weight(alpha in 1u32..5, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let spec = g_alpha_p_spec(alpha, p).unwrap();
        prop_assert_eq!(spec.weighted_total(), 4);
    }
}

#[test]
fn residue_ring_rejects_bad_moduli() {
    assert!(CoefficientRing::residues(1).is_err());
    assert!(CoefficientRing::residues((1 << 32) + 1).is_err());
    assert!(CoefficientRing::residues(1 << 32).is_ok());
}
