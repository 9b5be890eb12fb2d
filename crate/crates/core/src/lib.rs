//! Planner and verifier for FOND+ problems: fully observable non-deterministic
//! planning with explicit conditional fairness assumptions `A/B`.
//!
//! A policy solves a FOND+ problem when every fair maximal trajectory it
//! induces reaches a goal. [`termination::verify_fondplus`] decides this with a
//! polynomial fixpoint over the policy graph, [`solver::solve`] searches for
//! such policies, and [`translate`] reduces strong, strong-cyclic, Dual FOND and
//! QNP planning to FOND+.

pub mod bench;
pub mod cli;
pub mod frontend;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod termination;
pub mod translate;

pub use model::{
    ActionId, FairnessAssumption, FondModel, FondPlusProblem, ModelError, ModelParts, Policy,
    PolicyGraph, StateId, Verdict, Witness,
};
