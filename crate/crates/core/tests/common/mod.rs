#![allow(dead_code)]

use empathica::{EmpathyMatrix, Game2x2, Matrix2};
use proptest::prelude::*;

pub fn payoff() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

pub fn matrix() -> impl Strategy<Value = Matrix2> {
    prop::array::uniform4(payoff()).prop_map(|[a, b, c, d]| Matrix2::new(a, b, c, d))
}

pub fn game() -> impl Strategy<Value = Game2x2> {
    (matrix(), matrix()).prop_map(|(a, b)| Game2x2::new(a, b).unwrap())
}

pub fn symmetric_game() -> impl Strategy<Value = Game2x2> {
    matrix().prop_map(|a| Game2x2::symmetric(a).unwrap())
}

pub fn empathy() -> impl Strategy<Value = EmpathyMatrix> {
    prop::array::uniform4(-3.0..3.0f64)
        .prop_map(|[a, b, c, d]| EmpathyMatrix::new(a, b, c, d).unwrap())
}

/// Symmetric prisoner's dilemma `a21 > a11 > a22 > a12` from four sorted draws.
pub fn prisoners_dilemma() -> impl Strategy<Value = Game2x2> {
    prop::array::uniform4(payoff())
        .prop_filter("distinct", |v| {
            let mut s = *v;
            s.sort_by(f64::total_cmp);
            s.windows(2).all(|w| w[1] - w[0] > 1e-3)
        })
        .prop_map(|mut v| {
            v.sort_by(f64::total_cmp);
            let [a12, a22, a11, a21] = v;
            Game2x2::symmetric(Matrix2::new(a11, a12, a21, a22)).unwrap()
        })
}

pub fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

/// Symmetric equilibria of the single-population game `a` found by scanning
/// the grid `0, h, 2h, .., 1`: `m` passes when no pure action beats it by more
/// than the change of the payoff difference over one grid step. Consecutive
/// passing points are merged into `(first, last)` runs.
pub fn grid_symmetric_equilibria(a: &Matrix2, h: f64) -> Vec<(f64, f64)> {
    let a = &a.0;
    let n = (1.0 / h).round() as usize;
    let diff = |m: f64| (m * a[0][0] + (1.0 - m) * a[0][1]) - (m * a[1][0] + (1.0 - m) * a[1][1]);
    let tol = (diff(1.0) - diff(0.0)).abs() * h;
    let mut runs: Vec<(f64, f64)> = Vec::new();
    let mut prev_pass = false;
    for i in 0..=n {
        let m = i as f64 / n as f64;
        let d = diff(m);
        let pass = (m == 0.0 || d >= -tol) && (m == 1.0 || d <= tol);
        if pass {
            match runs.last_mut() {
                Some(run) if prev_pass => run.1 = m,
                _ => runs.push((m, m)),
            }
        }
        prev_pass = pass;
    }
    runs
}

/// Every reduced point lies in some run and every run holds a reduced point,
/// both up to one grid step.
pub fn runs_match(points: &[f64], runs: &[(f64, f64)], h: f64) -> bool {
    let inside = |p: f64, r: &(f64, f64)| p >= r.0 - h - 1e-12 && p <= r.1 + h + 1e-12;
    points.iter().all(|&p| runs.iter().any(|r| inside(p, r)))
        && runs.iter().all(|r| points.iter().any(|&p| inside(p, r)))
}
