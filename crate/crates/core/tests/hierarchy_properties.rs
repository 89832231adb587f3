mod common;

use common::*;
use empathica::hierarchy::{
    check_consistency, consistent_family, default_battery, infinitely_consistent, level_matrix,
    Verdict,
};
use empathica::{EmpathyMatrix, Matrix2, Signature};
use proptest::prelude::*;

fn coupling() -> impl Strategy<Value = f64> {
    prop_oneof![-2.0..-0.25f64, 0.25..2.0f64]
}

fn idempotent_error(m: &Matrix2) -> f64 {
    (*m * *m - *m).max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ones_family_powers(rho in -1.5..1.5f64) {
        let lam = EmpathyMatrix::homogeneous(rho / 2.0, rho / 2.0);
        for k in 1..=20u32 {
            let closed = lam.as_matrix().scale(rho.powi(k as i32 - 1));
            let err = (level_matrix(&lam, k) - closed).max_abs();
            prop_assert!(err <= 1e-10 * closed.max_abs().max(1.0), "k={k} err={err}");
        }
    }

    #[test]
    fn idempotent_family_powers(l11 in -2.0..2.0f64, l21 in coupling()) {
        let lam = infinitely_consistent(l11, l21).unwrap();
        let m = lam.as_matrix();
        prop_assert!((m.trace() - 1.0).abs() < 1e-12);
        prop_assert!(idempotent_error(&m) < 1e-12);
        for k in 1..=20u32 {
            prop_assert!((level_matrix(&lam, k) - m).max_abs() <= 1e-10 * m.max_abs().max(1.0));
        }
    }

    #[test]
    fn generic_matrices_are_not_idempotent(lam in empathy()) {
        prop_assert!(idempotent_error(&lam.as_matrix()) >= 1e-12);
    }

    #[test]
    fn proportional_powers_never_look_inconsistent(eps in 0.2..1.8f64, t in 0.0..1.0f64, negative in any::<bool>()) {
        // y spans [−ε², ε²/4], the full real-root range on both signs.
        let y = if negative { -t * eps * eps } else { t * eps * eps / 4.0 };
        for lam in consistent_family(eps, y).unwrap() {
            let m = lam.as_matrix();
            prop_assert!((m * m - m.scale(eps)).max_abs() < 1e-10);
            let v = check_consistency(&lam, 10, &default_battery()).unwrap();
            prop_assert!(!matches!(v.verdict, Verdict::Inconsistent { .. }), "{lam:?}: {:?}", v.witness);
        }
    }

    #[test]
    fn signatures_ignore_positive_scaling(g in game(), c in 1e-3..1e3f64) {
        prop_assert_eq!(Signature::of(&g.scaled(c)), Signature::of(&g));
    }
}
