//! Revision protocols: nonnegative switch rates between the two actions of a population.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Game2x2;

use super::PopulationState;

/// Population 1 plays the row role, population 2 the column role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Population {
    First,
    Second,
}

impl Population {
    pub const BOTH: [Population; 2] = [Population::First, Population::Second];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RevisionProtocol {
    /// Pairwise proportional imitation: `η_ab = m_b·[π_b − π_a]₊`.
    Replicator,
    /// Brown–von Neumann–Nash: `η_ab = [π_b − π̄]₊`.
    Bnn,
    /// Pairwise comparison: `η_ab = [π_b − π_a]₊`.
    Smith,
    /// Imitation of success: `η_ab = m_b·(K + π_b)` with `K = −min payoff`.
    Imitation,
    /// Convex combination of member protocols; weights sum to one.
    Hybrid(Vec<(RevisionProtocol, f64)>),
}

impl RevisionProtocol {
    /// Hybrid protocol with weights normalised to sum to one.
    pub fn hybrid(members: Vec<(RevisionProtocol, f64)>) -> Result<Self> {
        let total: f64 = members.iter().map(|(_, w)| w).sum();
        if members.is_empty()
            || members.iter().any(|(_, w)| !w.is_finite() || *w < 0.0)
            || total <= 0.0
        {
            return Err(Error::InvalidArgument(
                "hybrid weights must be nonnegative with a positive sum".into(),
            ));
        }
        Ok(RevisionProtocol::Hybrid(
            members.into_iter().map(|(p, w)| (p, w / total)).collect(),
        ))
    }
}

impl fmt::Display for RevisionProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RevisionProtocol::Replicator => f.write_str("replicator"),
            RevisionProtocol::Bnn => f.write_str("bnn"),
            RevisionProtocol::Smith => f.write_str("smith"),
            RevisionProtocol::Imitation => f.write_str("imitation"),
            RevisionProtocol::Hybrid(members) => {
                f.write_str("hybrid:")?;
                for (i, (p, w)) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}={w}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for RevisionProtocol {
    type Err = Error;

    /// `replicator`, `bnn`, `smith`, `imitation`, or
    /// `hybrid:replicator=0.5,smith=0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(list) = s.strip_prefix("hybrid:") {
            let members = list
                .split(',')
                .map(|part| {
                    let (name, weight) = part.split_once('=').ok_or_else(|| {
                        Error::InvalidArgument(format!("hybrid member '{part}' needs name=weight"))
                    })?;
                    let proto: RevisionProtocol = name.parse()?;
                    if matches!(proto, RevisionProtocol::Hybrid(_)) {
                        return Err(Error::InvalidArgument("nested hybrid protocols".into()));
                    }
                    let w: f64 = weight.trim().parse().map_err(|_| {
                        Error::InvalidArgument(format!("bad hybrid weight '{weight}'"))
                    })?;
                    Ok((proto, w))
                })
                .collect::<Result<Vec<_>>>()?;
            return RevisionProtocol::hybrid(members);
        }
        match s.to_ascii_lowercase().as_str() {
            "replicator" => Ok(RevisionProtocol::Replicator),
            "bnn" => Ok(RevisionProtocol::Bnn),
            "smith" => Ok(RevisionProtocol::Smith),
            "imitation" => Ok(RevisionProtocol::Imitation),
            other => Err(Error::InvalidArgument(format!("unknown protocol '{other}'"))),
        }
    }
}

/// Switch rates of one population: `r12` from action 1 to 2, `r21` from 2 to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwitchRates {
    pub r12: f64,
    pub r21: f64,
}

impl SwitchRates {
    pub const ZERO: SwitchRates = SwitchRates { r12: 0.0, r21: 0.0 };

    pub fn max_outflow(&self) -> f64 {
        self.r12.max(self.r21)
    }
}

/// Expected payoffs `[π1, π2]` of the two actions of `pop` and its own mass on action 1.
pub fn action_payoffs(g: &Game2x2, s: PopulationState, pop: Population) -> ([f64; 2], f64) {
    match pop {
        Population::First => {
            let (y, a) = (s.p2, &g.a.0);
            (
                [
                    y * a[0][0] + (1.0 - y) * a[0][1],
                    y * a[1][0] + (1.0 - y) * a[1][1],
                ],
                s.p1,
            )
        }
        Population::Second => {
            let (x, b) = (s.p1, &g.b.0);
            (
                [
                    x * b[0][0] + (1.0 - x) * b[1][0],
                    x * b[0][1] + (1.0 - x) * b[1][1],
                ],
                s.p2,
            )
        }
    }
}

#[inline]
fn pos(v: f64) -> f64 {
    v.max(0.0)
}

pub fn switch_rates(
    proto: &RevisionProtocol,
    g: &Game2x2,
    s: PopulationState,
    pop: Population,
) -> SwitchRates {
    let ([p1, p2], m) = action_payoffs(g, s, pop);
    let masses = [m, 1.0 - m];
    match proto {
        RevisionProtocol::Replicator => SwitchRates {
            r12: masses[1] * pos(p2 - p1),
            r21: masses[0] * pos(p1 - p2),
        },
        // π_b − π̄ written as a multiple of π_b − π_a, exact at ties.
        RevisionProtocol::Bnn => SwitchRates {
            r12: pos(masses[0] * (p2 - p1)),
            r21: pos(masses[1] * (p1 - p2)),
        },
        RevisionProtocol::Smith => SwitchRates {
            r12: pos(p2 - p1),
            r21: pos(p1 - p2),
        },
        RevisionProtocol::Imitation => {
            let shift = -g.min_payoff();
            SwitchRates {
                r12: masses[1] * pos(shift + p2),
                r21: masses[0] * pos(shift + p1),
            }
        }
        RevisionProtocol::Hybrid(members) => {
            members
                .iter()
                .fold(SwitchRates::ZERO, |acc, (member, w)| {
                    let r = switch_rates(member, g, s, pop);
                    SwitchRates {
                        r12: acc.r12 + w * r.r12,
                        r21: acc.r21 + w * r.r21,
                    }
                })
        }
    }
}
