//! Executable categoricity constructions at desk scale.
//!
//! The crate is organised bottom-up: [`formula`] provides syntax and the
//! theory/sentence builders, [`structures`] the finite and computably
//! presented models, [`mocheck`] Tarski and full second-order evaluation,
//! and the remaining modules the game, set-theoretic, coding and search
//! layers built on top of them.

pub mod coding;
pub mod dedekind;
pub mod ef;
pub mod finder;
pub mod formula;
pub mod hf;
pub mod mocheck;
pub mod structures;

/// Step budget shared by operations on presented structures.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;
