//! Bimatrix games, empathy structures and the empathetic payoff transformation.
//!
//! A [`Game2x2`] holds the row player's payoffs `A` and the column player's
//! payoffs `B`. Action 1 is Up/Left and action 2 is Down/Right. An
//! [`EmpathyMatrix`] mixes both players' material payoffs: the row player
//! values a joint action at `l11·a + l12·b` and the column player at
//! `l22·b + l21·a`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::Matrix2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    First,
    Second,
}

impl Action {
    pub const BOTH: [Action; 2] = [Action::First, Action::Second];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Action::First => 0,
            Action::Second => 1,
        }
    }

    pub fn from_index(i: usize) -> Action {
        if i == 0 {
            Action::First
        } else {
            Action::Second
        }
    }

    /// 1-based label used in reports.
    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn other(self) -> Action {
        match self {
            Action::First => Action::Second,
            Action::Second => Action::First,
        }
    }
}

impl Serialize for Action {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Row,
    Column,
}

/// A joint action `(row, column)`, printed as `"11"`, `"12"`, ... and
/// serialized as `[i, j]` with 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: Action,
    pub col: Action,
}

impl Cell {
    pub const fn new(row: Action, col: Action) -> Self {
        Cell { row, col }
    }

    /// All four joint actions in the order 11, 12, 21, 22.
    pub fn all() -> [Cell; 4] {
        use Action::*;
        [
            Cell::new(First, First),
            Cell::new(First, Second),
            Cell::new(Second, First),
            Cell::new(Second, Second),
        ]
    }

    /// Parses a two-digit label such as `"21"`.
    pub fn parse(label: &str) -> Option<Cell> {
        let mut it = label.trim().chars();
        let action = |c: char| match c {
            '1' => Some(Action::First),
            '2' => Some(Action::Second),
            _ => None,
        };
        let row = action(it.next()?)?;
        let col = action(it.next()?)?;
        if it.next().is_some() {
            return None;
        }
        Some(Cell::new(row, col))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.row, self.col)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.row.number(), self.col.number()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [r, c] = <[u8; 2]>::deserialize(d)?;
        let action = |v: u8| match v {
            1 => Ok(Action::First),
            2 => Ok(Action::Second),
            _ => Err(serde::de::Error::custom("action index must be 1 or 2")),
        };
        Ok(Cell::new(action(r)?, action(c)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Game2x2 {
    #[serde(rename = "A")]
    pub a: Matrix2,
    #[serde(rename = "B")]
    pub b: Matrix2,
}

impl Game2x2 {
    pub fn new(a: Matrix2, b: Matrix2) -> Result<Self> {
        let g = Game2x2 { a, b };
        if g.is_finite() {
            Ok(g)
        } else {
            Err(Error::NonFinitePayoff)
        }
    }

    /// Symmetric game with column payoffs `b_ij = a_ji`.
    pub fn symmetric(a: Matrix2) -> Result<Self> {
        Game2x2::new(a, a.transpose())
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    #[inline]
    pub fn row_payoff(&self, cell: Cell) -> f64 {
        self.a.get(cell.row.index(), cell.col.index())
    }

    #[inline]
    pub fn col_payoff(&self, cell: Cell) -> f64 {
        self.b.get(cell.row.index(), cell.col.index())
    }

    pub fn payoff(&self, cell: Cell, player: Player) -> f64 {
        match player {
            Player::Row => self.row_payoff(cell),
            Player::Column => self.col_payoff(cell),
        }
    }

    /// `b_ij = a_ji` for all cells, compared exactly.
    pub fn is_symmetric(&self) -> bool {
        self.b == self.a.transpose()
    }

    pub fn scaled(&self, c: f64) -> Game2x2 {
        Game2x2 {
            a: self.a.scale(c),
            b: self.b.scale(c),
        }
    }

    /// Smallest payoff entry over both players.
    pub fn min_payoff(&self) -> f64 {
        self.a
            .entries()
            .iter()
            .chain(self.b.entries().iter())
            .fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Advantage of action 1 over action 2 for `player`, for each opponent action.
    ///
    /// Row: `[a11 − a21, a12 − a22]`. Column: `[b11 − b12, b21 − b22]`.
    pub fn advantages(&self, player: Player) -> [f64; 2] {
        let (a, b) = (&self.a.0, &self.b.0);
        match player {
            Player::Row => [a[0][0] - a[1][0], a[0][1] - a[1][1]],
            Player::Column => [b[0][0] - b[0][1], b[1][0] - b[1][1]],
        }
    }
}

impl std::ops::Add for Game2x2 {
    type Output = Game2x2;

    fn add(self, rhs: Game2x2) -> Game2x2 {
        Game2x2 {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

/// Empathy weights. `l_ii` scales a player's own payoff, `l_ij` the other's.
/// Serialized as `[[l11, l12], [l21, l22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "Matrix2", into = "Matrix2")]
pub struct EmpathyMatrix {
    pub l11: f64,
    pub l12: f64,
    pub l21: f64,
    pub l22: f64,
}

impl EmpathyMatrix {
    pub fn new(l11: f64, l12: f64, l21: f64, l22: f64) -> Result<Self> {
        let m = EmpathyMatrix { l11, l12, l21, l22 };
        if m.as_matrix().is_finite() {
            Ok(m)
        } else {
            Err(Error::NonFiniteEmpathy)
        }
    }

    pub const fn identity() -> Self {
        EmpathyMatrix {
            l11: 1.0,
            l12: 0.0,
            l21: 0.0,
            l22: 1.0,
        }
    }

    /// Equal self-weight `sigma` and equal cross-weight `mu` for both players.
    pub const fn homogeneous(sigma: f64, mu: f64) -> Self {
        EmpathyMatrix {
            l11: sigma,
            l12: mu,
            l21: mu,
            l22: sigma,
        }
    }

    /// Selfish diagonal with the given altruism (or spite) weights.
    pub const fn altruism(l12: f64, l21: f64) -> Self {
        EmpathyMatrix {
            l11: 1.0,
            l12,
            l21,
            l22: 1.0,
        }
    }

    pub fn as_matrix(&self) -> Matrix2 {
        Matrix2::new(self.l11, self.l12, self.l21, self.l22)
    }

    pub fn is_identity(&self) -> bool {
        *self == EmpathyMatrix::identity()
    }

    /// The empathetic game: `a' = l11·a + l12·b`, `b' = l22·b + l21·a` cellwise.
    pub fn apply(&self, g: &Game2x2) -> Game2x2 {
        let mut a = [[0.0; 2]; 2];
        let mut b = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let (r1, r2) = (g.a.0[i][j], g.b.0[i][j]);
                a[i][j] = blend(self.l11, r1, self.l12, r2);
                b[i][j] = blend(self.l22, r2, self.l21, r1);
            }
        }
        Game2x2 {
            a: Matrix2(a),
            b: Matrix2(b),
        }
    }
}

impl From<Matrix2> for EmpathyMatrix {
    fn from(m: Matrix2) -> Self {
        EmpathyMatrix {
            l11: m.0[0][0],
            l12: m.0[0][1],
            l21: m.0[1][0],
            l22: m.0[1][1],
        }
    }
}

impl From<EmpathyMatrix> for Matrix2 {
    fn from(l: EmpathyMatrix) -> Self {
        l.as_matrix()
    }
}

impl Default for EmpathyMatrix {
    fn default() -> Self {
        EmpathyMatrix::identity()
    }
}

// A zero cross-weight contributes nothing, so the identity map is exact even on -0.0.
#[inline]
fn blend(w_own: f64, own: f64, w_other: f64, other: f64) -> f64 {
    if w_other == 0.0 {
        w_own * own
    } else {
        w_own * own + w_other * other
    }
}

pub fn transform(g: &Game2x2, lam: &EmpathyMatrix) -> Game2x2 {
    lam.apply(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ClassTag {
    Coordination,
    AntiCoordination,
    Discoordination,
    DominantStrategy,
    Degenerate,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::Coordination => "Coordination",
            ClassTag::AntiCoordination => "AntiCoordination",
            ClassTag::Discoordination => "Discoordination",
            ClassTag::DominantStrategy => "DominantStrategy",
            ClassTag::Degenerate => "Degenerate",
        };
        f.write_str(s)
    }
}

/// A payoff comparison that ties: `player` is indifferent between its two
/// actions when the opponent plays `opponent_action`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Tie {
    pub player: Player,
    pub opponent_action: Action,
}

impl fmt::Display for Tie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = self.opponent_action;
        match self.player {
            Player::Row => write!(f, "a1{j}=a2{j}"),
            Player::Column => write!(f, "b{j}1=b{j}2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameClass {
    pub tag: ClassTag,
    /// Strictly dominant action of the row and column player, if any.
    pub dominant: [Option<Action>; 2],
    pub ties: Vec<Tie>,
}

/// How a player's best reply depends on the opponent's action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stance {
    Dominant(Action),
    /// Best reply copies the opponent's action index.
    Matching,
    /// Best reply is the other action index.
    Mismatching,
    Tied,
}

pub fn stance(g: &Game2x2, player: Player, tie_tolerance: f64) -> Stance {
    let [d1, d2] = g.advantages(player);
    if d1.abs() <= tie_tolerance || d2.abs() <= tie_tolerance {
        return Stance::Tied;
    }
    match (d1 > 0.0, d2 > 0.0) {
        (true, true) => Stance::Dominant(Action::First),
        (false, false) => Stance::Dominant(Action::Second),
        (true, false) => Stance::Matching,
        (false, true) => Stance::Mismatching,
    }
}

pub fn classify(g: &Game2x2) -> GameClass {
    classify_with(g, 0.0)
}

/// Classifies with comparisons within `tie_tolerance` treated as ties.
pub fn classify_with(g: &Game2x2, tie_tolerance: f64) -> GameClass {
    let mut ties = Vec::new();
    for player in [Player::Row, Player::Column] {
        for (k, d) in g.advantages(player).into_iter().enumerate() {
            if d.abs() <= tie_tolerance {
                ties.push(Tie {
                    player,
                    opponent_action: Action::from_index(k),
                });
            }
        }
    }
    let row = stance(g, Player::Row, tie_tolerance);
    let col = stance(g, Player::Column, tie_tolerance);
    let dominant_of = |s: Stance| match s {
        Stance::Dominant(a) => Some(a),
        _ => None,
    };
    let dominant = [dominant_of(row), dominant_of(col)];

    let tag = if !ties.is_empty() {
        ClassTag::Degenerate
    } else if dominant.iter().any(Option::is_some) {
        ClassTag::DominantStrategy
    } else {
        match (row, col) {
            (Stance::Matching, Stance::Matching) => ClassTag::Coordination,
            (Stance::Mismatching, Stance::Mismatching) => ClassTag::AntiCoordination,
            _ => ClassTag::Discoordination,
        }
    };
    GameClass {
        tag,
        dominant,
        ties,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dominance {
    pub player: Player,
    pub action: Action,
    pub dominated_by: Action,
    /// Strictly worse against both opponent actions.
    pub strict: bool,
}

/// Actions that are weakly dominated: never better, and worse against at
/// least one opponent action.
pub fn dominated_actions(g: &Game2x2) -> Vec<Dominance> {
    let mut out = Vec::new();
    for player in [Player::Row, Player::Column] {
        let adv = g.advantages(player);
        for action in Action::BOTH {
            // Advantage of the other action over `action`.
            let gain = match action {
                Action::First => [-adv[0], -adv[1]],
                Action::Second => adv,
            };
            let weak = gain.iter().all(|&d| d >= 0.0) && gain.iter().any(|&d| d > 0.0);
            if weak {
                out.push(Dominance {
                    player,
                    action,
                    dominated_by: action.other(),
                    strict: gain.iter().all(|&d| d > 0.0),
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub before: bool,
    pub after: bool,
}

pub fn symmetry_report(g: &Game2x2, lam: &EmpathyMatrix) -> SymmetryReport {
    SymmetryReport {
        before: g.is_symmetric(),
        after: lam.apply(g).is_symmetric(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Reduced,
    Increased,
    Unchanged,
    Undefined,
}

const GAP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityReport {
    pub cell: Cell,
    /// Material payoffs `(a, b)` at the cell.
    pub payoffs: (f64, f64),
    pub gap_before: f64,
    pub gap_after: f64,
    /// `l12 / l21`; `None` when `l21 = 0`.
    pub lambda_tilde: Option<f64>,
    /// Comparison of `|gap_after|` against `|gap_before|`.
    pub verdict: Verdict,
    #[serde(skip)]
    lam: EmpathyMatrix,
}

impl InequalityReport {
    /// Threshold rule on `l12 / l21` for selfish diagonals and `a > b > 0`:
    /// the signed gap shrinks iff `l12·b < l21·a`. Any other configuration,
    /// including `l21 = 0`, yields `Undefined`.
    pub fn ratio_verdict(&self) -> Verdict {
        let (a, b) = self.payoffs;
        let selfish = self.lam.l11 == 1.0 && self.lam.l22 == 1.0;
        match self.lambda_tilde {
            Some(t) if selfish && self.lam.l21 > 0.0 && a > b && b > 0.0 => {
                let bound = a / b;
                if t < bound {
                    Verdict::Reduced
                } else if t > bound {
                    Verdict::Increased
                } else {
                    Verdict::Unchanged
                }
            }
            _ => Verdict::Undefined,
        }
    }
}

pub fn inequality_report(g: &Game2x2, lam: &EmpathyMatrix, cell: Cell) -> InequalityReport {
    let t = lam.apply(g);
    let (a, b) = (g.row_payoff(cell), g.col_payoff(cell));
    let gap_before = a - b;
    let gap_after = t.row_payoff(cell) - t.col_payoff(cell);
    let diff = gap_after.abs() - gap_before.abs();
    let verdict = if diff < -GAP_TOLERANCE {
        Verdict::Reduced
    } else if diff > GAP_TOLERANCE {
        Verdict::Increased
    } else {
        Verdict::Unchanged
    };
    InequalityReport {
        cell,
        payoffs: (a, b),
        gap_before,
        gap_after,
        lambda_tilde: (lam.l21 != 0.0).then(|| lam.l12 / lam.l21),
        verdict,
        lam: *lam,
    }
}
