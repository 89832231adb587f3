//! Empathetic transforms of 2×2 games and their strategic consequences.
//!
//! A 2×2 empathy matrix `Λ` mixes each player's material payoff with the
//! opponent's. This crate classifies the resulting games, solves them
//! (pure, mixed, Berge, Pareto), finds constrained evolutionarily stable
//! strategies, simulates population dynamics under several revision
//! protocols and analyses higher-order empathy `Λ^k`.

pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod ess;
pub mod game;
pub mod hierarchy;
pub mod io;
pub mod matrix;

pub use equilibria::{EquilibriumSet, Signature};
pub use error::{Error, Result};
pub use game::{classify, transform, Action, Cell, ClassTag, EmpathyMatrix, Game2x2, GameClass};
pub use io::GameFile;
pub use matrix::Matrix2;
