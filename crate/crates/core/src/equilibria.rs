//! Nash equilibria, Berge solutions, Pareto fronts and empathy region maps
//! for 2×2 bimatrix games.
//!
//! Mixed equilibria are computed exactly as the intersection of the two
//! best-reply graphs on the unit square. Each graph is a union of at most
//! three axis-aligned segments, so the intersection is a finite set of
//! points and segments; segments are reported as continua instead of
//! sampled points.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{classify, Action, Cell, ClassTag, EmpathyMatrix, Game2x2, Player};

const GEOMETRY_EPS: f64 = 1e-12;

/// `x` is the row player's probability on action 1, `y` the column player's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedProfile {
    pub x: f64,
    pub y: f64,
}

impl MixedProfile {
    pub fn new(x: f64, y: f64) -> Self {
        MixedProfile { x, y }
    }

    pub fn of_cell(cell: Cell) -> Self {
        let p = |a: Action| if a == Action::First { 1.0 } else { 0.0 };
        MixedProfile::new(p(cell.row), p(cell.col))
    }

    pub fn is_interior(&self) -> bool {
        self.x > 0.0 && self.x < 1.0 && self.y > 0.0 && self.y < 1.0
    }

    fn is_corner(&self) -> bool {
        let edge = |v: f64| v.abs() <= GEOMETRY_EPS || (v - 1.0).abs() <= GEOMETRY_EPS;
        edge(self.x) && edge(self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MixedEquilibrium {
    Isolated(MixedProfile),
    /// Every profile on the segment between the two endpoints.
    Continuum(MixedProfile, MixedProfile),
    /// Both players are indifferent everywhere.
    Everything,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedNash {
    /// Non-pure equilibria: isolated points other than the four corners, and continua.
    pub equilibria: Vec<MixedEquilibrium>,
    /// Set when the equilibrium set contains a continuum.
    pub degenerate: bool,
}

impl MixedNash {
    pub fn interior_points(&self) -> impl Iterator<Item = MixedProfile> + '_ {
        self.equilibria.iter().filter_map(|e| match e {
            MixedEquilibrium::Isolated(p) if p.is_interior() => Some(*p),
            _ => None,
        })
    }

    pub fn interior_count(&self) -> usize {
        self.interior_points().count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PureNash {
    pub cell: Cell,
    /// Both deviations are strictly worse.
    pub strict: bool,
}

/// Expected payoffs of the row and column player at a mixed profile.
pub fn expected_payoffs(g: &Game2x2, p: MixedProfile) -> (f64, f64) {
    let (wx, wy) = ([p.x, 1.0 - p.x], [p.y, 1.0 - p.y]);
    let mut u = (0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            let w = wx[i] * wy[j];
            u.0 += w * g.a.0[i][j];
            u.1 += w * g.b.0[i][j];
        }
    }
    u
}

/// Variational-inequality check: neither player gains more than `tol` by a
/// unilateral deviation from `p`.
pub fn is_nash(g: &Game2x2, p: MixedProfile, tol: f64) -> bool {
    let (u_row, u_col) = expected_payoffs(g, p);
    let best_row = [1.0, 0.0]
        .iter()
        .map(|&x| expected_payoffs(g, MixedProfile::new(x, p.y)).0)
        .fold(f64::NEG_INFINITY, f64::max);
    let best_col = [1.0, 0.0]
        .iter()
        .map(|&y| expected_payoffs(g, MixedProfile::new(p.x, y)).1)
        .fold(f64::NEG_INFINITY, f64::max);
    u_row >= best_row - tol && u_col >= best_col - tol
}

pub fn pure_nash(g: &Game2x2) -> Vec<PureNash> {
    Cell::all()
        .into_iter()
        .filter_map(|cell| {
            let row_dev = Cell::new(cell.row.other(), cell.col);
            let col_dev = Cell::new(cell.row, cell.col.other());
            let row_gain = g.row_payoff(cell) - g.row_payoff(row_dev);
            let col_gain = g.col_payoff(cell) - g.col_payoff(col_dev);
            (row_gain >= 0.0 && col_gain >= 0.0).then_some(PureNash {
                cell,
                strict: row_gain > 0.0 && col_gain > 0.0,
            })
        })
        .collect()
}

/// Axis-aligned closed box `[x0, x1] × [y0, y1]`; here always a point or a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Piece {
    x: (f64, f64),
    y: (f64, f64),
}

impl Piece {
    fn intersect(&self, other: &Piece) -> Option<Piece> {
        let x = (self.x.0.max(other.x.0), self.x.1.min(other.x.1));
        let y = (self.y.0.max(other.y.0), self.y.1.min(other.y.1));
        (x.0 <= x.1 + GEOMETRY_EPS && y.0 <= y.1 + GEOMETRY_EPS).then(|| Piece {
            x: (x.0.min(x.1), x.1.max(x.0)),
            y: (y.0.min(y.1), y.1.max(y.0)),
        })
    }

    fn is_point(&self) -> bool {
        self.x.1 - self.x.0 <= GEOMETRY_EPS && self.y.1 - self.y.0 <= GEOMETRY_EPS
    }

    fn contains(&self, other: &Piece) -> bool {
        self.x.0 <= other.x.0 + GEOMETRY_EPS
            && other.x.1 <= self.x.1 + GEOMETRY_EPS
            && self.y.0 <= other.y.0 + GEOMETRY_EPS
            && other.y.1 <= self.y.1 + GEOMETRY_EPS
    }
}

enum ReplyGraph {
    Everything,
    Pieces(Vec<Piece>),
}

/// Sign structure of `f(t) = t·at_one + (1 − t)·at_zero` on `[0, 1]`.
struct LinearSign {
    /// Closure of `{f > 0}`.
    positive: Option<(f64, f64)>,
    /// Closure of `{f < 0}`.
    negative: Option<(f64, f64)>,
    /// Isolated root in `[0, 1]`.
    root: Option<f64>,
}

fn linear_sign(at_zero: f64, at_one: f64) -> Option<LinearSign> {
    if at_zero == 0.0 && at_one == 0.0 {
        return None;
    }
    let root = if at_zero != at_one {
        let t = at_zero / (at_zero - at_one);
        (0.0..=1.0).contains(&t).then_some(t)
    } else {
        None
    };
    let side = |sign: f64| {
        let (p0, p1) = (sign * at_zero > 0.0, sign * at_one > 0.0);
        match (p0, p1) {
            (true, true) => Some((0.0, 1.0)),
            (true, false) => Some((0.0, root.unwrap_or(1.0))),
            (false, true) => Some((root.unwrap_or(0.0), 1.0)),
            (false, false) => None,
        }
    };
    Some(LinearSign {
        positive: side(1.0),
        negative: side(-1.0),
        root,
    })
}

fn reply_graph(g: &Game2x2, player: Player) -> ReplyGraph {
    // Advantage of action 1 as a function of the opponent's probability on action 1.
    let [vs_first, vs_second] = g.advantages(player);
    let Some(sign) = linear_sign(vs_second, vs_first) else {
        return ReplyGraph::Everything;
    };
    let full = (0.0, 1.0);
    let mut pieces = Vec::with_capacity(3);
    // `own` is the replying player's coordinate, `opp` the opponent's interval.
    let mut push = |own: (f64, f64), opp: (f64, f64)| {
        pieces.push(match player {
            Player::Row => Piece { x: own, y: opp },
            Player::Column => Piece { x: opp, y: own },
        })
    };
    if let Some(iv) = sign.positive {
        push((1.0, 1.0), iv);
    }
    if let Some(iv) = sign.negative {
        push((0.0, 0.0), iv);
    }
    if let Some(t) = sign.root {
        push(full, (t, t));
    }
    ReplyGraph::Pieces(pieces)
}

fn nash_pieces(g: &Game2x2) -> Option<Vec<Piece>> {
    let raw = match (reply_graph(g, Player::Row), reply_graph(g, Player::Column)) {
        (ReplyGraph::Everything, ReplyGraph::Everything) => return None,
        (ReplyGraph::Everything, ReplyGraph::Pieces(p))
        | (ReplyGraph::Pieces(p), ReplyGraph::Everything) => p,
        (ReplyGraph::Pieces(rows), ReplyGraph::Pieces(cols)) => rows
            .iter()
            .flat_map(|r| cols.iter().filter_map(move |c| r.intersect(c)))
            .collect(),
    };
    let mut kept: Vec<Piece> = Vec::new();
    for (i, p) in raw.iter().enumerate() {
        let covered = raw.iter().enumerate().any(|(j, q)| {
            j != i && q.contains(p) && (!p.contains(q) || j < i)
        });
        if !covered {
            kept.push(*p);
        }
    }
    Some(kept)
}

pub fn mixed_nash(g: &Game2x2) -> MixedNash {
    let Some(pieces) = nash_pieces(g) else {
        return MixedNash {
            equilibria: vec![MixedEquilibrium::Everything],
            degenerate: true,
        };
    };
    let mut equilibria = Vec::new();
    let mut degenerate = false;
    for p in pieces {
        let lo = MixedProfile::new(p.x.0, p.y.0);
        if p.is_point() {
            if !lo.is_corner() {
                equilibria.push(MixedEquilibrium::Isolated(lo));
            }
        } else {
            degenerate = true;
            equilibria.push(MixedEquilibrium::Continuum(lo, MixedProfile::new(p.x.1, p.y.1)));
        }
    }
    MixedNash {
        equilibria,
        degenerate,
    }
}

/// Joint actions where each player's payoff is the best the *other* player
/// could give them: `a_ij = max_k a_ik` and `b_ij = max_k b_kj`.
pub fn berge_solutions(g: &Game2x2) -> Vec<Cell> {
    Cell::all()
        .into_iter()
        .filter(|&cell| {
            let row_supported = g.row_payoff(cell) >= g.row_payoff(Cell::new(cell.row, cell.col.other()));
            let col_supported = g.col_payoff(cell) >= g.col_payoff(Cell::new(cell.row.other(), cell.col));
            row_supported && col_supported
        })
        .collect()
}

pub fn pareto_front(g: &Game2x2) -> Vec<Cell> {
    let dominates = |p: Cell, q: Cell| {
        let (pa, pb) = (g.row_payoff(p), g.col_payoff(p));
        let (qa, qb) = (g.row_payoff(q), g.col_payoff(q));
        pa >= qa && pb >= qb && (pa > qa || pb > qb)
    };
    Cell::all()
        .into_iter()
        .filter(|&q| !Cell::all().into_iter().any(|p| dominates(p, q)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumSet {
    /// The (empathetic) game the equilibria belong to.
    pub game: Game2x2,
    pub pure: Vec<Cell>,
    /// Pure equilibria where some deviation ties.
    pub weak: Vec<Cell>,
    pub mixed: Vec<MixedEquilibrium>,
    pub degenerate: bool,
    pub berge: Vec<Cell>,
    pub pareto: Vec<Cell>,
}

impl EquilibriumSet {
    pub fn of(g: &Game2x2) -> Self {
        let pure = pure_nash(g);
        let mixed = mixed_nash(g);
        EquilibriumSet {
            game: *g,
            weak: pure.iter().filter(|p| !p.strict).map(|p| p.cell).collect(),
            pure: pure.iter().map(|p| p.cell).collect(),
            mixed: mixed.equilibria,
            degenerate: mixed.degenerate,
            berge: berge_solutions(g),
            pareto: pareto_front(g),
        }
    }

    /// Pure cells joined by `+`, followed by `mixed` when any non-pure
    /// equilibrium exists, e.g. `"11+22+mixed"`.
    pub fn outcome_label(&self) -> String {
        let mut parts: Vec<String> = self.pure.iter().map(Cell::to_string).collect();
        if !self.mixed.is_empty() {
            parts.push("mixed".to_owned());
        }
        parts.join("+")
    }
}

/// Equilibria of the empathetic game `lam · g` for two separate populations.
pub fn two_population_equilibria(g: &Game2x2, lam: &EmpathyMatrix) -> EquilibriumSet {
    EquilibriumSet::of(&lam.apply(g))
}

/// Canonical equilibrium structure: class, pure cells and interior mixed count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub class: ClassTag,
    pub pure: Vec<Cell>,
    pub interior_mixed: usize,
    pub continuum: bool,
}

impl Signature {
    pub fn of(g: &Game2x2) -> Self {
        let mixed = mixed_nash(g);
        Signature {
            class: classify(g).tag,
            pure: pure_nash(g).into_iter().map(|p| p.cell).collect(),
            interior_mixed: mixed.interior_count(),
            continuum: mixed.degenerate,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pure: Vec<String> = self.pure.iter().map(Cell::to_string).collect();
        write!(
            f,
            "{}|{}|mixed={}",
            self.class,
            if pure.is_empty() { "-".to_owned() } else { pure.join("+") },
            self.interior_mixed
        )?;
        if self.continuum {
            f.write_str("|continuum")?;
        }
        Ok(())
    }
}

/// Outcome labels over a `(l12, l21)` grid with selfish diagonals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionMap {
    pub l12: Vec<f64>,
    pub l21: Vec<f64>,
    /// Row-major with `l21` as the outer index.
    pub labels: Vec<String>,
}

impl RegionMap {
    pub fn resolution(&self) -> usize {
        self.l12.len()
    }

    pub fn label(&self, i12: usize, i21: usize) -> &str {
        &self.labels[i21 * self.l12.len() + i12]
    }

    /// CSV with columns `l12,l21,label`, `l21` outer and `l12` inner.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["l12", "l21", "label"])?;
        for (i21, v21) in self.l21.iter().enumerate() {
            for (i12, v12) in self.l12.iter().enumerate() {
                w.write_record([v12.to_string(), v21.to_string(), self.label(i12, i21).to_owned()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// `resolution` evenly spaced values from `lo` to `hi` inclusive.
pub fn grid_axis(lo: f64, hi: f64, resolution: usize) -> Vec<f64> {
    let last = resolution - 1;
    (0..resolution)
        .map(|i| {
            if i == last {
                hi
            } else {
                lo + (hi - lo) * i as f64 / last as f64
            }
        })
        .collect()
}

pub fn region_map(
    g: &Game2x2,
    l12_range: (f64, f64),
    l21_range: (f64, f64),
    resolution: usize,
) -> Result<RegionMap> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let finite = [l12_range.0, l12_range.1, l21_range.0, l21_range.1];
    if finite.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("sweep ranges must be finite".into()));
    }
    let l12 = grid_axis(l12_range.0, l12_range.1, resolution);
    let l21 = grid_axis(l21_range.0, l21_range.1, resolution);
    let labels = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let lam = EmpathyMatrix::altruism(l12[k % resolution], l21[k / resolution]);
            two_population_equilibria(g, &lam).outcome_label()
        })
        .collect();
    Ok(RegionMap { l12, l21, labels })
}
