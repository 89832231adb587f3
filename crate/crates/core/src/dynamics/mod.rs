//! Discrete-time empathetic evolutionary dynamics for two populations.
//!
//! Each population `p` holds mass `m_p` on action 1 and updates by
//!
//! ```text
//! m_p ← m_p + λ̂_t·(1 − m_p)·η_21 − λ̂_t·m_p·η_12
//! ```
//!
//! where the switch rates `η` come from a [`RevisionProtocol`] evaluated on
//! the (already transformed) game. The learning rate is capped every step so
//! that the state never leaves the unit square.

mod field;
mod protocol;
mod svg;

use std::collections::HashMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{classify, ClassTag, EmpathyMatrix, Game2x2, GameClass};

pub use field::{vector_field, write_field_csv, FieldSample};
pub use protocol::{action_payoffs, switch_rates, Population, RevisionProtocol, SwitchRates};
pub use svg::render_phase_portrait;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PopulationState {
    pub p1: f64,
    pub p2: f64,
}

impl PopulationState {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        let ok = |v: f64| (0.0..=1.0).contains(&v);
        if ok(p1) && ok(p2) {
            Ok(PopulationState { p1, p2 })
        } else {
            Err(Error::InvalidArgument(format!(
                "population state ({p1}, {p2}) is outside [0, 1]^2"
            )))
        }
    }

    pub fn dist_inf(&self, other: &PopulationState) -> f64 {
        (self.p1 - other.p1).abs().max((self.p2 - other.p2).abs())
    }

    pub fn dist(&self, other: &PopulationState) -> f64 {
        (self.p1 - other.p1).hypot(self.p2 - other.p2)
    }

    /// Nearest corner of the unit square and the sup-distance to it.
    pub fn nearest_corner(&self) -> (PopulationState, f64) {
        let corner = PopulationState {
            p1: self.p1.round(),
            p2: self.p2.round(),
        };
        (corner, self.dist_inf(&corner))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LearningSchedule {
    Constant(f64),
    /// `λ̂_t = λ̂_0 / (t + 1)`.
    Harmonic(f64),
}

impl LearningSchedule {
    pub fn nominal(&self, t: usize) -> f64 {
        match *self {
            LearningSchedule::Constant(r) => r,
            LearningSchedule::Harmonic(r0) => r0 / (t as f64 + 1.0),
        }
    }

    /// Nominal rate capped by `1 / max outflow` so the update stays in the simplex.
    pub fn capped(&self, t: usize, rates: &[SwitchRates; 2]) -> f64 {
        let outflow = rates
            .iter()
            .map(SwitchRates::max_outflow)
            .fold(f64::EPSILON, f64::max);
        self.nominal(t).max(0.0).min(1.0 / outflow)
    }
}

fn rates_at(proto: &RevisionProtocol, g: &Game2x2, s: PopulationState) -> [SwitchRates; 2] {
    Population::BOTH.map(|pop| switch_rates(proto, g, s, pop))
}

// m·(1 − λη12) + (1 − m)·λη21 with both λη terms in [0, 1]; the final min
// absorbs rounding at the upper edge.
#[inline]
fn update(m: f64, rate: f64, r: SwitchRates) -> f64 {
    let stay = 1.0 - (rate * r.r12).min(1.0);
    let inflow = (rate * r.r21).min(1.0);
    (m * stay + (1.0 - m) * inflow).clamp(0.0, 1.0)
}

fn step_with_rate(
    s: PopulationState,
    proto: &RevisionProtocol,
    sched: &LearningSchedule,
    g: &Game2x2,
    t: usize,
) -> (PopulationState, f64) {
    let rates = rates_at(proto, g, s);
    let rate = sched.capped(t, &rates);
    (
        PopulationState {
            p1: update(s.p1, rate, rates[0]),
            p2: update(s.p2, rate, rates[1]),
        },
        rate,
    )
}

/// One step of the capped learning dynamics on the game `g`.
pub fn step(
    s: PopulationState,
    proto: &RevisionProtocol,
    sched: &LearningSchedule,
    g: &Game2x2,
    t: usize,
) -> PopulationState {
    step_with_rate(s, proto, sched, g, t).0
}

/// Raw flow `(1 − m)·η_21 − m·η_12` for both populations (learning rate 1, no cap).
pub fn flow(proto: &RevisionProtocol, g: &Game2x2, s: PopulationState) -> (f64, f64) {
    let [r1, r2] = rates_at(proto, g, s);
    (
        (1.0 - s.p1) * r1.r21 - s.p1 * r1.r12,
        (1.0 - s.p2) * r2.r21 - s.p2 * r2.r12,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationOptions {
    pub steps: usize,
    /// Converged once `‖s_{t+1} − s_t‖∞ < conv_tol · λ̂_t` ...
    pub conv_tol: f64,
    /// ... for this many consecutive steps.
    pub window: usize,
    pub cycle_eps: f64,
    /// Share of the run ignored by the cycle detector.
    pub transient: f64,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            steps: 10_000,
            conv_tol: 1e-7,
            window: 100,
            cycle_eps: 1e-3,
            transient: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub converged: bool,
    pub limit_point: Option<PopulationState>,
    pub cycle_detected: bool,
    pub cycle_period_estimate: Option<f64>,
    pub steps_taken: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<usize>,
    pub states: Vec<PopulationState>,
    pub diagnostics: Diagnostics,
}

impl Trajectory {
    pub fn last(&self) -> PopulationState {
        *self.states.last().expect("trajectory holds the initial state")
    }

    /// CSV with columns `t,p1,p2`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "p1", "p2"])?;
        for (t, s) in self.times.iter().zip(&self.states) {
            w.write_record([t.to_string(), s.p1.to_string(), s.p2.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn simulate(
    s0: PopulationState,
    proto: &RevisionProtocol,
    sched: &LearningSchedule,
    g: &Game2x2,
    opts: &SimulationOptions,
) -> Result<Trajectory> {
    if opts.steps == 0 {
        return Err(Error::InvalidArgument("simulation needs at least one step".into()));
    }
    let s0 = PopulationState::new(s0.p1, s0.p2)?;
    let mut states = Vec::with_capacity(opts.steps + 1);
    states.push(s0);
    let mut s = s0;
    let mut quiet = 0usize;
    let mut converged = false;
    for t in 0..opts.steps {
        let (next, rate) = step_with_rate(s, proto, sched, g, t);
        states.push(next);
        if next.dist_inf(&s) < opts.conv_tol * rate {
            quiet += 1;
        } else {
            quiet = 0;
        }
        s = next;
        if quiet >= opts.window.max(1) {
            converged = true;
            break;
        }
    }
    let (cycle_detected, period) = if converged {
        (false, None)
    } else {
        match detect_cycle(&states, opts) {
            Some(p) => (true, Some(p)),
            None => (false, None),
        }
    };
    let steps_taken = states.len() - 1;
    Ok(Trajectory {
        times: (0..states.len()).collect(),
        diagnostics: Diagnostics {
            converged,
            limit_point: converged.then_some(s),
            cycle_detected,
            cycle_period_estimate: period,
            steps_taken,
        },
        states,
    })
}

/// Return-proximity test: after the transient, some state comes back within
/// `cycle_eps` of an earlier one after travelling more than `10·cycle_eps`.
/// Returns the elapsed steps of the first such return.
fn detect_cycle(states: &[PopulationState], opts: &SimulationOptions) -> Option<f64> {
    let eps = opts.cycle_eps;
    let min_loop = 10.0 * eps;
    let start = ((states.len() as f64) * opts.transient).ceil() as usize;
    let cell = |s: &PopulationState| ((s.p1 / eps).floor() as i64, (s.p2 / eps).floor() as i64);
    // Per grid cell, one entry (index, arc length) per separate visit.
    let mut visits: HashMap<(i64, i64), Vec<(usize, f64)>> = HashMap::new();
    let mut arc = 0.0;
    for k in start..states.len() {
        if k > start {
            arc += states[k].dist(&states[k - 1]);
        }
        let s = &states[k];
        let (cx, cy) = cell(s);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = visits.get(&(cx + dx, cy + dy)) {
                    for &(j, arc_j) in list {
                        if arc - arc_j > min_loop && states[j].dist(s) <= eps {
                            return Some((k - j) as f64);
                        }
                    }
                }
            }
        }
        let list = visits.entry((cx, cy)).or_default();
        if list.last().is_none_or(|&(_, a)| arc - a > min_loop) {
            list.push((k, arc));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stabilization {
    pub game: Game2x2,
    pub transformed_class: GameClass,
    pub stabilized: bool,
}

/// Whether empathy turns a discoordination game into one with pure equilibria.
pub fn stabilization_check(g: &Game2x2, lam: &EmpathyMatrix) -> Result<Stabilization> {
    let base = classify(g);
    if base.tag != ClassTag::Discoordination {
        return Err(Error::NotDiscoordination(base.tag.to_string()));
    }
    let game = lam.apply(g);
    let transformed_class = classify(&game);
    let stabilized = matches!(
        transformed_class.tag,
        ClassTag::Coordination | ClassTag::AntiCoordination | ClassTag::DominantStrategy
    );
    Ok(Stabilization {
        game,
        transformed_class,
        stabilized,
    })
}
