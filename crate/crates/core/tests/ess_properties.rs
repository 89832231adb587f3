mod common;

use common::*;
use empathica::ess::{
    cbr, constrained_ess, homogeneous_payoff, reduce, symmetric_equilibria, BestReply, Constraint,
    ConstraintType, DiagonalReduction,
};
use empathica::{transform, EmpathyMatrix};
use proptest::prelude::*;

fn nonzero_beta() -> impl Strategy<Value = f64> {
    prop_oneof![-5.0..-0.01f64, 0.01..5.0f64]
}

fn constraint() -> impl Strategy<Value = Constraint> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_filter("c1 != c2", |(c1, c2, _)| (c1 - c2).abs() > 1e-3)
        .prop_map(|(c1, c2, v)| Constraint::new(c1, c2, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduction_matches_grid_oracle(g in symmetric_game(), sigma in -3.0..3.0f64, mu in -3.0..3.0f64) {
        let a_lam = transform(&g, &EmpathyMatrix::homogeneous(sigma, mu)).a;
        let direct = homogeneous_payoff(&g, sigma, mu);
        for (x, y) in a_lam.entries().iter().zip(direct.entries()) {
            prop_assert!(close(*x, y, 1e-12));
        }
        let eq = symmetric_equilibria(&reduce(&a_lam));
        prop_assume!(!eq.degenerate);
        let h = 1e-3;
        let runs = grid_symmetric_equilibria(&a_lam, h);
        prop_assert!(runs_match(&eq.points, &runs, h), "{:?} vs {:?}", eq.points, runs);
    }

    #[test]
    fn ess_exists_on_nonempty_sets(b1 in nonzero_beta(), b2 in nonzero_beta(), con in constraint()) {
        prop_assume!(con.ctype != ConstraintType::Empty);
        let res = constrained_ess(&DiagonalReduction::from_betas(b1, b2), &con).unwrap();
        prop_assert!(res.exists);
        prop_assert!(!res.ess_points.is_empty());
    }

    #[test]
    fn ess_points_are_stable_best_replies(b1 in nonzero_beta(), b2 in nonzero_beta(), con in constraint()) {
        prop_assume!(con.ctype != ConstraintType::Empty);
        let red = DiagonalReduction::from_betas(b1, b2);
        let (lo, hi) = con.feasible().unwrap();
        for m in constrained_ess(&red, &con).unwrap().points() {
            let reply = cbr(&red, &con, m).unwrap();
            prop_assert!(reply.contains(m), "{m} not in {reply:?}");
            let BestReply::Interval(..) = reply else { continue };
            for i in 0..=20 {
                let x = lo + (hi - lo) * i as f64 / 20.0;
                if (x - m).abs() < 1e-9 {
                    continue;
                }
                for eps in [1e-3, 1e-2] {
                    let mix = (1.0 - eps) * m + eps * x;
                    prop_assert!(red.payoff(m, mix) > red.payoff(x, mix), "m={m} x={x} eps={eps}");
                }
            }
        }
    }

    #[test]
    fn alpha_outside_unit_interval_is_never_typed(con in constraint()) {
        if !(0.0..=1.0).contains(&con.alpha) {
            prop_assert!(matches!(con.ctype, ConstraintType::Unconstrained | ConstraintType::Empty));
        }
    }
}
