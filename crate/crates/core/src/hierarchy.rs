//! Higher-order empathy: level-k games `Λ^k·r`, consistency of empathy
//! structures and the limit of the power sequence.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::equilibria::Signature;
use crate::error::{Error, Result};
use crate::game::{EmpathyMatrix, Game2x2, Player};
use crate::matrix::Matrix2;

/// Relative size below which an advantage counts as a tie when comparing levels.
pub const SIGNATURE_TOL: f64 = 1e-9;
/// Relative least-squares residual accepted for `Λ^k = ε_k·Λ`.
pub const PROPORTIONALITY_TOL: f64 = 1e-9;
/// Any entry of `Λ^k` beyond this magnitude means divergence.
pub const OVERFLOW_GUARD: f64 = 1e12;

pub fn level_matrix(lam: &EmpathyMatrix, k: u32) -> Matrix2 {
    lam.as_matrix().pow(k)
}

/// The game with payoff vector `Λ^k·r` in every cell; `k = 0` returns `g`.
pub fn level_game(g: &Game2x2, lam: &EmpathyMatrix, k: u32) -> Game2x2 {
    EmpathyMatrix::from(level_matrix(lam, k)).apply(g)
}

/// Equilibrium signature robust to rounding noise.
///
/// The signature of a 2×2 game depends only on the four advantages, so the
/// game is replaced by the canonical game with the same advantages, after
/// zeroing advantages smaller than `SIGNATURE_TOL` times the largest one.
pub fn level_signature(g: &Game2x2) -> Signature {
    let [u1, u2] = g.advantages(Player::Row);
    let [v1, v2] = g.advantages(Player::Column);
    let scale = [u1, u2, v1, v2].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let snap = |x: f64| if x.abs() <= SIGNATURE_TOL * scale { 0.0 } else { x };
    let canonical = Game2x2 {
        a: Matrix2::new(snap(u1), snap(u2), 0.0, 0.0),
        b: Matrix2::new(snap(v1), 0.0, snap(v2), 0.0),
    };
    Signature::of(&canonical)
}

/// Least-squares `ε` with `Λ^k ≈ ε·Λ`, if the fit is tight and `ε > 0`.
pub fn proportionality(lam_k: &Matrix2, lam: &Matrix2) -> Option<f64> {
    let norm2 = lam.frobenius_dot(lam);
    if norm2 == 0.0 {
        return None;
    }
    let eps = lam_k.frobenius_dot(lam) / norm2;
    let residual = (*lam_k - lam.scale(eps)).frobenius_norm();
    (eps > 0.0 && residual / lam_k.frobenius_norm().max(1.0) < PROPORTIONALITY_TOL).then_some(eps)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Verdict {
    ConsistentUpToK,
    Inconsistent { first_bad_k: u32 },
    StructurallyConsistent { epsilons: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub battery_index: usize,
    pub game: Game2x2,
    pub k: u32,
    pub level_game: Game2x2,
    pub signature_level1: String,
    pub signature_level_k: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyVerdict {
    /// Inconsistent beats StructurallyConsistent beats ConsistentUpToK.
    pub verdict: Verdict,
    /// Battery-only verdict, never StructurallyConsistent.
    pub battery: Verdict,
    /// `ε_k` for k = 1..=k_max when `Λ^k = ε_k·Λ` holds throughout.
    pub structural: Option<Vec<f64>>,
    pub witness: Option<Witness>,
}

/// One probe game per class, all with small integer payoffs.
pub fn default_battery() -> Vec<Game2x2> {
    let g = |a: [f64; 4], b: [f64; 4]| Game2x2 {
        a: Matrix2::new(a[0], a[1], a[2], a[3]),
        b: Matrix2::new(b[0], b[1], b[2], b[3]),
    };
    vec![
        // prisoner's dilemma
        g([3.0, 0.0, 5.0, 1.0], [3.0, 5.0, 0.0, 1.0]),
        // coordination
        g([2.0, 0.0, 0.0, 1.0], [2.0, 0.0, 0.0, 1.0]),
        // chicken
        g([0.0, 3.0, 1.0, 2.0], [0.0, 1.0, 3.0, 2.0]),
        // matching pennies
        g([1.0, -1.0, -1.0, 1.0], [-1.0, 1.0, 1.0, -1.0]),
        // a tie for each player
        g([1.0, 0.0, 1.0, 2.0], [1.0, 1.0, 0.0, 2.0]),
    ]
}

pub fn check_consistency(
    lam: &EmpathyMatrix,
    k_max: u32,
    battery: &[Game2x2],
) -> Result<ConsistencyVerdict> {
    if k_max < 2 {
        return Err(Error::InvalidArgument("k_max must be at least 2".into()));
    }
    if battery.is_empty() {
        return Err(Error::InvalidArgument("game battery is empty".into()));
    }
    let base = lam.as_matrix();
    let level1: Vec<Signature> = battery
        .iter()
        .map(|g| level_signature(&lam.apply(g)))
        .collect();

    let mut witness = None;
    let mut power = base;
    'levels: for k in 2..=k_max {
        power = base * power;
        let lam_k = EmpathyMatrix::from(power);
        for (i, g) in battery.iter().enumerate() {
            let game_k = lam_k.apply(g);
            let sig = level_signature(&game_k);
            if sig != level1[i] {
                witness = Some(Witness {
                    battery_index: i,
                    game: *g,
                    k,
                    level_game: game_k,
                    signature_level1: level1[i].to_string(),
                    signature_level_k: sig.to_string(),
                });
                break 'levels;
            }
        }
    }

    let structural = (1..=k_max)
        .scan(Matrix2::identity(), |acc, _| {
            *acc = base * *acc;
            Some(proportionality(acc, &base))
        })
        .collect::<Option<Vec<f64>>>();

    let battery_verdict = match &witness {
        Some(w) => Verdict::Inconsistent { first_bad_k: w.k },
        None => Verdict::ConsistentUpToK,
    };
    let verdict = match (&battery_verdict, &structural) {
        (Verdict::Inconsistent { .. }, _) | (_, None) => battery_verdict.clone(),
        (_, Some(eps)) => Verdict::StructurallyConsistent {
            epsilons: eps.clone(),
        },
    };
    Ok(ConsistencyVerdict {
        verdict,
        battery: battery_verdict,
        structural,
        witness,
    })
}

/// Solutions of `Λ² = ε·Λ` with diagonal roots of `x² − εx + y = 0` and `λ12·λ21 = y`.
pub fn consistent_family(epsilon: f64, y: f64) -> Result<Vec<EmpathyMatrix>> {
    if !(epsilon.is_finite() && epsilon > 0.0 && y.is_finite()) {
        return Err(Error::InvalidArgument(
            "epsilon must be positive and y finite".into(),
        ));
    }
    let disc = epsilon * epsilon - 4.0 * y;
    if disc < 0.0 {
        return Err(Error::NoRealSolution { epsilon, y });
    }
    if y == 0.0 {
        return Ok(vec![
            EmpathyMatrix::new(epsilon, 0.0, 0.0, epsilon)?,
            EmpathyMatrix::new(epsilon, 0.0, 0.0, 0.0)?,
            EmpathyMatrix::new(0.0, 0.0, 0.0, epsilon)?,
        ]);
    }
    let root = disc.sqrt();
    let (hi, lo) = ((epsilon + root) / 2.0, (epsilon - root) / 2.0);
    let (p, q) = if y > 0.0 {
        (y.sqrt(), y.sqrt())
    } else {
        ((-y).sqrt(), -(-y).sqrt())
    };
    let mut out = vec![EmpathyMatrix::new(hi, p, q, lo)?];
    if hi != lo {
        out.push(EmpathyMatrix::new(lo, p, q, hi)?);
    }
    Ok(out)
}

/// The idempotent profile `(l11, l11(1 − l11)/l21; l21, 1 − l11)`.
pub fn infinitely_consistent(l11: f64, l21: f64) -> Result<EmpathyMatrix> {
    if l21 == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    EmpathyMatrix::new(l11, l11 * (1.0 - l11) / l21, l21, 1.0 - l11)
}

/// The other infinitely consistent profile.
pub fn infinitely_consistent_identity() -> EmpathyMatrix {
    EmpathyMatrix::identity()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Limit {
    Zero,
    IdentityLike,
    Diverges,
    Oscillates,
    Converges(Matrix2),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectral {
    pub eigenvalues: [Complex64; 2],
    pub rho: f64,
    pub limit: Limit,
}

pub fn spectral_limit(lam: &EmpathyMatrix, k_max: u32) -> Result<Spectral> {
    if k_max < 1 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let m = lam.as_matrix();
    let eigenvalues = m.eigenvalues();
    let rho = m.spectral_radius();
    let limit = if rho < 1.0 - 1e-12 {
        Limit::Zero
    } else if rho > 1.0 + 1e-12 {
        Limit::Diverges
    } else {
        power_limit(&m, k_max)
    };
    Ok(Spectral {
        eigenvalues,
        rho,
        limit,
    })
}

fn power_limit(m: &Matrix2, k_max: u32) -> Limit {
    let mut prev = *m;
    for _ in 1..k_max {
        let next = *m * prev;
        if next.max_abs() > OVERFLOW_GUARD || !next.is_finite() {
            return Limit::Diverges;
        }
        if (next - prev).max_abs() < 1e-12 {
            return if (next - Matrix2::identity()).max_abs() < 1e-12 {
                Limit::IdentityLike
            } else {
                Limit::Converges(next)
            };
        }
        prev = next;
    }
    Limit::Oscillates
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRecord {
    pub k: u32,
    #[serde(rename = "Lambda_k")]
    pub lambda_k: Matrix2,
    pub eq_signature: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyAnalysis {
    pub lam: EmpathyMatrix,
    pub k_max: u32,
    pub per_level: Vec<LevelRecord>,
    /// Every level has the level-1 signature on the analysed game.
    pub consistent_up_to_k: bool,
    pub spectral: Spectral,
}

impl HierarchyAnalysis {
    /// CSV with columns `k,l11_k,l12_k,l21_k,l22_k,eq_signature`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "l11_k", "l12_k", "l21_k", "l22_k", "eq_signature"])?;
        for rec in &self.per_level {
            let [l11, l12, l21, l22] = rec.lambda_k.entries();
            w.write_record([
                rec.k.to_string(),
                l11.to_string(),
                l12.to_string(),
                l21.to_string(),
                l22.to_string(),
                rec.eq_signature.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn analyze(g: &Game2x2, lam: &EmpathyMatrix, k_max: u32) -> Result<HierarchyAnalysis> {
    let spectral = spectral_limit(lam, k_max)?;
    let base = lam.as_matrix();
    let mut power = Matrix2::identity();
    let per_level: Vec<LevelRecord> = (1..=k_max)
        .map(|k| {
            power = base * power;
            LevelRecord {
                k,
                lambda_k: power,
                eq_signature: level_signature(&EmpathyMatrix::from(power).apply(g)).to_string(),
            }
        })
        .collect();
    let consistent_up_to_k = per_level
        .iter()
        .all(|r| r.eq_signature == per_level[0].eq_signature);
    Ok(HierarchyAnalysis {
        lam: *lam,
        k_max,
        per_level,
        consistent_up_to_k,
        spectral,
    })
}
