//! Single-population analysis of symmetric empathetic games.
//!
//! With homogeneous empathy `(σ, μ; μ, σ)` every player faces the matrix
//! `A^Λ`. Its symmetric equilibria only depend on the two differences
//! `β1 = A^Λ_11 − A^Λ_21` and `β2 = A^Λ_22 − A^Λ_12`, i.e. on the diagonal
//! game `diag(β1, β2)`. A linear constraint `c1·m + c2·(1 − m) ≤ V` restricts
//! the probability `m` on action 1 to an interval.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Game2x2;
use crate::matrix::Matrix2;

/// `A^Λ = ((σ+μ)a11, σa12+μa21; σa21+μa12, (σ+μ)a22)`, built from the row
/// player's matrix of `g`.
pub fn homogeneous_payoff(g: &Game2x2, sigma: f64, mu: f64) -> Matrix2 {
    let a = &g.a.0;
    Matrix2::new(
        (sigma + mu) * a[0][0],
        sigma * a[0][1] + mu * a[1][0],
        sigma * a[1][0] + mu * a[0][1],
        (sigma + mu) * a[1][1],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalReduction {
    pub beta1: f64,
    pub beta2: f64,
    pub source: Matrix2,
}

impl DiagonalReduction {
    /// Reduction with `source = diag(β1, β2)`.
    pub fn from_betas(beta1: f64, beta2: f64) -> Self {
        DiagonalReduction {
            beta1,
            beta2,
            source: Matrix2::new(beta1, 0.0, 0.0, beta2),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.beta1 == 0.0 && self.beta2 == 0.0
    }

    /// Interior indifference point `β2 / (β1 + β2)` when the betas share a strict sign.
    pub fn interior(&self) -> Option<f64> {
        let (b1, b2) = (self.beta1, self.beta2);
        ((b1 > 0.0 && b2 > 0.0) || (b1 < 0.0 && b2 < 0.0)).then(|| b2 / (b1 + b2))
    }

    /// Payoff of playing `x` against a population at `m`, in the reduced game.
    pub fn payoff(&self, x: f64, m: f64) -> f64 {
        self.beta1 * x * m + self.beta2 * (1.0 - x) * (1.0 - m)
    }

    /// Marginal gain of shifting weight to action 1 against `m`: `β1·m − β2·(1 − m)`.
    pub fn slope(&self, m: f64) -> f64 {
        self.beta1 * m - self.beta2 * (1.0 - m)
    }

    /// Slope with rounding noise around the indifference point set to zero.
    fn snapped_slope(&self, m: f64) -> f64 {
        let s = self.slope(m);
        if s.abs() <= 1e-12 * (self.beta1.abs() + self.beta2.abs()) {
            0.0
        } else {
            s
        }
    }
}

pub fn reduce(a: &Matrix2) -> DiagonalReduction {
    let m = &a.0;
    DiagonalReduction {
        beta1: m[0][0] - m[1][0],
        beta2: m[1][1] - m[0][1],
        source: *a,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricEquilibria {
    /// Probabilities on action 1: `1` if `β1 ≥ 0`, `0` if `β2 ≥ 0`, then the interior point.
    pub points: Vec<f64>,
    /// `β1 = β2 = 0`: every strategy is an equilibrium.
    pub degenerate: bool,
}

pub fn symmetric_equilibria(red: &DiagonalReduction) -> SymmetricEquilibria {
    if red.is_degenerate() {
        return SymmetricEquilibria {
            points: Vec::new(),
            degenerate: true,
        };
    }
    let mut points = Vec::with_capacity(3);
    if red.beta1 >= 0.0 {
        points.push(1.0);
    }
    if red.beta2 >= 0.0 {
        points.push(0.0);
    }
    points.extend(red.interior());
    SymmetricEquilibria {
        points,
        degenerate: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintType {
    /// `c1 > c2`, feasible set `[0, α]`.
    TypeI,
    /// `c1 < c2`, feasible set `[α, 1]`.
    TypeII,
    Unconstrained,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constraint {
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub alpha: f64,
    pub ctype: ConstraintType,
}

impl Constraint {
    pub fn new(c1: f64, c2: f64, v: f64) -> Result<Self> {
        if [c1, c2, v].iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("constraint values must be finite".into()));
        }
        if c1 == c2 {
            return Err(Error::EqualConstraintCoefficients(c1));
        }
        let alpha = (v - c2) / (c1 - c2);
        let ctype = if c1 > c2 {
            if alpha >= 1.0 {
                ConstraintType::Unconstrained
            } else if alpha >= 0.0 {
                ConstraintType::TypeI
            } else {
                ConstraintType::Empty
            }
        } else if alpha <= 0.0 {
            ConstraintType::Unconstrained
        } else if alpha <= 1.0 {
            ConstraintType::TypeII
        } else {
            ConstraintType::Empty
        };
        Ok(Constraint { c1, c2, v, alpha, ctype })
    }

    pub fn unconstrained() -> Self {
        Constraint {
            c1: 1.0,
            c2: 0.0,
            v: 1.0,
            alpha: 1.0,
            ctype: ConstraintType::Unconstrained,
        }
    }

    /// Feasible interval of probabilities on action 1.
    pub fn feasible(&self) -> Option<(f64, f64)> {
        match self.ctype {
            ConstraintType::TypeI => Some((0.0, self.alpha)),
            ConstraintType::TypeII => Some((self.alpha, 1.0)),
            ConstraintType::Unconstrained => Some((0.0, 1.0)),
            ConstraintType::Empty => None,
        }
    }

    pub fn contains(&self, m: f64) -> bool {
        self.feasible().is_some_and(|(lo, hi)| lo <= m && m <= hi)
    }
}

/// Constrained best replies: a single endpoint, or the whole feasible interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BestReply {
    Point(f64),
    Interval(f64, f64),
}

impl BestReply {
    pub fn contains(&self, x: f64) -> bool {
        match *self {
            BestReply::Point(p) => p == x,
            BestReply::Interval(lo, hi) => lo <= x && x <= hi,
        }
    }
}

/// `argmax` over the feasible set of the payoff against `m`, which is linear in the reply.
pub fn cbr(red: &DiagonalReduction, con: &Constraint, m: f64) -> Result<BestReply> {
    let (lo, hi) = con.feasible().ok_or(Error::EmptyFeasibleSet)?;
    let slope = red.snapped_slope(m);
    Ok(if slope > 0.0 {
        BestReply::Point(hi)
    } else if slope < 0.0 {
        BestReply::Point(lo)
    } else if lo == hi {
        BestReply::Point(lo)
    } else {
        BestReply::Interval(lo, hi)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EssKind {
    PureCorner,
    Interior,
    ConstraintBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EssPoint {
    pub m: f64,
    pub kind: EssKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EssResult {
    pub ess_points: Vec<EssPoint>,
    pub exists: bool,
}

impl EssResult {
    pub fn points(&self) -> Vec<f64> {
        self.ess_points.iter().map(|p| p.m).collect()
    }
}

fn kind_of(m: f64, con: &Constraint) -> EssKind {
    let on_alpha = matches!(con.ctype, ConstraintType::TypeI | ConstraintType::TypeII)
        && m == con.alpha;
    if on_alpha && m != 0.0 && m != 1.0 {
        EssKind::ConstraintBoundary
    } else if m == 0.0 || m == 1.0 {
        EssKind::PureCorner
    } else {
        EssKind::Interior
    }
}

/// Exact ESS test on the feasible interval.
///
/// `m` must be a best reply to itself, and every other feasible `x` must
/// either do strictly worse against `m`, or tie against `m` and do strictly
/// worse against itself than `m` does against it.
pub fn is_constrained_ess(red: &DiagonalReduction, con: &Constraint, m: f64) -> bool {
    let Some((lo, hi)) = con.feasible() else {
        return false;
    };
    if !(lo <= m && m <= hi) || red.is_degenerate() {
        return false;
    }
    let s = red.snapped_slope(m);
    // First order: no feasible direction improves.
    if (s > 0.0 && m < hi) || (s < 0.0 && m > lo) {
        return false;
    }
    if s != 0.0 || lo == hi {
        return true;
    }
    // Every feasible x ties against m. Then m must beat each x on x itself:
    // (m − x)·slope(x) = −(β1 + β2)(x − m)² > 0, i.e. β1 + β2 < 0.
    red.beta1 + red.beta2 < 0.0
}

fn point(m: f64, con: &Constraint) -> EssPoint {
    EssPoint { m, kind: kind_of(m, con) }
}

/// Candidates checked by [`is_constrained_ess`]: interval ends and the interior point.
fn search(red: &DiagonalReduction, con: &Constraint) -> Vec<EssPoint> {
    let Some((lo, hi)) = con.feasible() else {
        return Vec::new();
    };
    let mut candidates = vec![hi, lo];
    if let Some(x) = red.interior() {
        if lo < x && x < hi {
            candidates.push(x);
        }
    }
    candidates.dedup();
    candidates
        .into_iter()
        .filter(|&m| is_constrained_ess(red, con, m))
        .map(|m| point(m, con))
        .collect()
}

/// Constrained ESS following the Type I / Type II case tables.
///
/// Coordination cases (`β1, β2 > 0`) add the constraint boundary when it lies
/// in the basin of the eliminated pure action. Sign patterns outside the
/// tables (a zero beta the tables do not list) and the unconstrained case
/// fall back to [`is_constrained_ess`] over the candidate points.
pub fn constrained_ess(red: &DiagonalReduction, con: &Constraint) -> Result<EssResult> {
    if red.is_degenerate() {
        return Err(Error::NoEss);
    }
    let (b1, b2) = (red.beta1, red.beta2);
    let alpha = con.alpha;
    let interior = red.interior();
    let points = match con.ctype {
        ConstraintType::Empty => return Err(Error::EmptyFeasibleSet),
        ConstraintType::Unconstrained => search(red, con),
        ConstraintType::TypeI => {
            if b1 > 0.0 && b2 <= 0.0 {
                vec![point(alpha, con)]
            } else if b1 <= 0.0 && b2 > 0.0 {
                vec![point(0.0, con)]
            } else if b1 > 0.0 && b2 > 0.0 {
                let mut v = vec![point(0.0, con)];
                if interior.is_some_and(|x| alpha > x) {
                    v.push(point(alpha, con));
                }
                v
            } else if b1 < 0.0 && b2 < 0.0 {
                let x = interior.expect("both betas negative");
                vec![point(x.min(alpha), con)]
            } else {
                search(red, con)
            }
        }
        ConstraintType::TypeII => {
            if b1 > 0.0 && b2 <= 0.0 {
                vec![point(1.0, con)]
            } else if b1 <= 0.0 && b2 > 0.0 {
                vec![point(alpha, con)]
            } else if b1 > 0.0 && b2 > 0.0 {
                let mut v = vec![point(1.0, con)];
                if interior.is_some_and(|x| alpha < x) {
                    v.push(point(alpha, con));
                }
                v
            } else if b1 < 0.0 && b2 < 0.0 {
                let x = interior.expect("both betas negative");
                vec![point(x.max(alpha), con)]
            } else {
                search(red, con)
            }
        }
    };
    Ok(EssResult {
        exists: !points.is_empty(),
        ess_points: points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd() -> Game2x2 {
        Game2x2::symmetric(Matrix2::new(3.0, 0.0, 5.0, 1.0)).unwrap()
    }

    fn type_one(alpha: f64) -> Constraint {
        // c1 = 1, c2 = 0 → α = V.
        let c = Constraint::new(1.0, 0.0, alpha).unwrap();
        assert_eq!(c.ctype, ConstraintType::TypeI);
        c
    }

    fn type_two(alpha: f64) -> Constraint {
        // c1 = 0, c2 = 1 → α = 1 − V.
        let c = Constraint::new(0.0, 1.0, 1.0 - alpha).unwrap();
        assert_eq!(c.ctype, ConstraintType::TypeII);
        c
    }

    #[test]
    fn homogeneous_payoff_examples() {
        assert_eq!(homogeneous_payoff(&pd(), 1.0, 0.0), pd().a);
        assert_eq!(homogeneous_payoff(&pd(), 1.0, 1.0), Matrix2::new(6.0, 5.0, 5.0, 2.0));
        assert_eq!(homogeneous_payoff(&pd(), 0.0, 1.0), Matrix2::new(3.0, 5.0, 0.0, 1.0));
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&Matrix2::new(6.0, 5.0, 5.0, 2.0));
        assert_eq!((r.beta1, r.beta2), (1.0, -3.0));
        let d = reduce(&Matrix2::new(2.5, 0.0, 0.0, -1.5));
        assert_eq!((d.beta1, d.beta2), (2.5, -1.5));
        let flat = reduce(&Matrix2::filled(4.0));
        assert!(flat.is_degenerate());
        assert_eq!(
            constrained_ess(&flat, &Constraint::unconstrained()),
            Err(Error::NoEss)
        );
    }

    #[test]
    fn symmetric_equilibria_examples() {
        let both = symmetric_equilibria(&DiagonalReduction::from_betas(1.0, 1.0));
        assert_eq!(both.points, vec![1.0, 0.0, 0.5]);
        let dom = symmetric_equilibria(&DiagonalReduction::from_betas(1.0, -3.0));
        assert_eq!(dom.points, vec![1.0]);
        let flat = symmetric_equilibria(&DiagonalReduction::from_betas(0.0, 0.0));
        assert!(flat.degenerate);
    }

    #[test]
    fn constraint_types() {
        assert_eq!(Constraint::new(2.0, 2.0, 1.0), Err(Error::EqualConstraintCoefficients(2.0)));
        // c1 > c2: α = (V − c2)/(c1 − c2).
        assert_eq!(Constraint::new(2.0, 0.0, 3.0).unwrap().ctype, ConstraintType::Unconstrained);
        assert_eq!(Constraint::new(2.0, 0.0, 2.0).unwrap().ctype, ConstraintType::Unconstrained);
        let c = Constraint::new(2.0, 0.0, 1.0).unwrap();
        assert_eq!((c.ctype, c.alpha), (ConstraintType::TypeI, 0.5));
        assert_eq!(Constraint::new(2.0, 0.0, -1.0).unwrap().ctype, ConstraintType::Empty);
        // c1 < c2.
        assert_eq!(Constraint::new(0.0, 2.0, -1.0).unwrap().ctype, ConstraintType::Empty);
        let c = Constraint::new(0.0, 2.0, 0.0).unwrap();
        assert_eq!((c.ctype, c.alpha), (ConstraintType::TypeII, 1.0));
        let c = Constraint::new(0.0, 2.0, 1.0).unwrap();
        assert_eq!((c.ctype, c.alpha), (ConstraintType::TypeII, 0.5));
        assert_eq!(Constraint::new(0.0, 2.0, 2.5).unwrap().ctype, ConstraintType::Unconstrained);
    }

    #[test]
    fn empty_set_is_an_error() {
        let c = Constraint::new(2.0, 0.0, -1.0).unwrap();
        let r = DiagonalReduction::from_betas(1.0, 1.0);
        assert_eq!(constrained_ess(&r, &c), Err(Error::EmptyFeasibleSet));
        assert_eq!(cbr(&r, &c, 0.0), Err(Error::EmptyFeasibleSet));
    }

    #[test]
    fn ess_examples() {
        let r = constrained_ess(&DiagonalReduction::from_betas(2.0, -1.0), &type_one(0.6)).unwrap();
        assert_eq!(r.ess_points, vec![EssPoint { m: 0.6, kind: EssKind::ConstraintBoundary }]);

        let r = constrained_ess(&DiagonalReduction::from_betas(-1.0, -2.0), &type_one(0.8)).unwrap();
        assert_eq!(r.points().len(), 1);
        assert!((r.points()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.ess_points[0].kind, EssKind::Interior);

        let r = constrained_ess(&DiagonalReduction::from_betas(-1.0, -1.0), &Constraint::unconstrained())
            .unwrap();
        assert_eq!(r.ess_points, vec![EssPoint { m: 0.5, kind: EssKind::Interior }]);
    }

    #[test]
    fn unconstrained_coordination_has_two_pure_ess() {
        let r = constrained_ess(&DiagonalReduction::from_betas(1.0, 2.0), &Constraint::unconstrained())
            .unwrap();
        assert_eq!(r.points(), vec![1.0, 0.0]);
        assert!(r.ess_points.iter().all(|p| p.kind == EssKind::PureCorner));
    }

    #[test]
    fn zero_beta_falls_back_to_search() {
        // β1 = 0, β2 < 0: slope = −β2(1 − m) ≥ 0, so m = 1 invades everything.
        let r = DiagonalReduction::from_betas(0.0, -1.0);
        let res = constrained_ess(&r, &Constraint::unconstrained()).unwrap();
        assert_eq!(res.points(), vec![1.0]);
        let res = constrained_ess(&r, &type_one(0.4)).unwrap();
        assert_eq!(res.points(), vec![0.4]);
    }

    #[test]
    fn cbr_examples() {
        let hd = DiagonalReduction::from_betas(-1.0, -1.0);
        let x = hd.interior().unwrap();
        let con = type_one(0.8);
        assert_eq!(cbr(&hd, &con, x - 0.1).unwrap(), BestReply::Point(0.8));
        assert_eq!(cbr(&hd, &con, x + 0.1).unwrap(), BestReply::Point(0.0));
        assert_eq!(cbr(&hd, &con, x).unwrap(), BestReply::Interval(0.0, 0.8));
        let con = type_two(0.3);
        assert_eq!(cbr(&hd, &con, x + 0.1).unwrap(), BestReply::Point(con.alpha));
        assert_eq!(cbr(&hd, &con, x).unwrap(), BestReply::Interval(con.alpha, 1.0));

        let dom = DiagonalReduction::from_betas(1.0, -1.0);
        for m in [0.0, 0.3, 1.0] {
            assert_eq!(cbr(&dom, &Constraint::unconstrained(), m).unwrap(), BestReply::Point(1.0));
        }
    }

    #[test]
    fn interior_hawk_dove_passes_exact_test() {
        let hd = DiagonalReduction::from_betas(-1.0, -1.0);
        assert!(is_constrained_ess(&hd, &Constraint::unconstrained(), 0.5));
        assert!(!is_constrained_ess(&hd, &Constraint::unconstrained(), 0.0));
        let coord = DiagonalReduction::from_betas(1.0, 1.0);
        assert!(!is_constrained_ess(&coord, &Constraint::unconstrained(), 0.5));
    }
}
