//! Quantales, modules and epistemic systems.
//!
//! Two concrete representations share the [`EpistemicAlgebra`] interface:
//! [`EpistemicSystem`] keeps explicit lattices and operation tables, and
//! [`AtomicSystem`] keeps powerset carriers described by their atoms, which
//! is what Kripke-model compilation produces.

mod atomic;
mod doc;
mod report;
mod table;

use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use atomic::{AtomSet, AtomicSystem, Theorem1Report, MAX_TABLE_ATOMS};
pub use doc::{AtomicSystemDoc, ElementCodec, SystemDoc, TableSystemDoc};
pub use report::{Law, ValidationReport, Violation};
pub use table::{EpistemicSystem, FiniteModule, FiniteQuantale};

use crate::lattice::LatticeError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub String);

impl AgentId {
    pub fn new(name: impl Into<String>) -> Self {
        AgentId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{table} table has {got} entries, expected {expected}")]
    TableSize { table: String, expected: usize, got: usize },
    #[error("{table} table: entry {entry} out of range")]
    OutOfRange { table: String, entry: usize },
    #[error("{table} table has no entry for {key}")]
    MissingEntry { table: String, key: String },
    #[error("duplicate agent {0}")]
    DuplicateAgent(String),
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("accessibility extraction needs an atomistic module")]
    Unsupported,
    #[error("system too large to tabulate ({0} atoms)")]
    TooLarge(usize),
}

/// The operations every epistemic system offers to formulas and proofs.
///
/// Agents are addressed by position in [`EpistemicAlgebra::agents`].
pub trait EpistemicAlgebra {
    type M: Clone + Eq + Hash + fmt::Debug;
    type Q: Clone + Eq + Hash + fmt::Debug;

    fn agents(&self) -> &[AgentId];

    fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents().iter().position(|a| a.as_str() == name)
    }

    fn m_bottom(&self) -> Self::M;
    fn m_top(&self) -> Self::M;
    fn m_join(&self, a: &Self::M, b: &Self::M) -> Self::M;
    fn m_meet(&self, a: &Self::M, b: &Self::M) -> Self::M;
    fn m_leq(&self, a: &Self::M, b: &Self::M) -> bool;

    fn q_bottom(&self) -> Self::Q;
    fn q_top(&self) -> Self::Q;
    fn q_join(&self, a: &Self::Q, b: &Self::Q) -> Self::Q;
    fn q_meet(&self, a: &Self::Q, b: &Self::Q) -> Self::Q;
    fn q_leq(&self, a: &Self::Q, b: &Self::Q) -> bool;

    fn unit(&self) -> Self::Q;
    /// Sequential composition `a • b`.
    fn mult(&self, a: &Self::Q, b: &Self::Q) -> Self::Q;
    /// Epistemic update `m · q`.
    fn update(&self, m: &Self::M, q: &Self::Q) -> Self::M;

    fn app_m(&self, agent: usize, m: &Self::M) -> Self::M;
    fn app_q(&self, agent: usize, q: &Self::Q) -> Self::Q;
    fn box_m(&self, agent: usize, m: &Self::M) -> Self::M;
    fn box_q(&self, agent: usize, q: &Self::Q) -> Self::Q;

    /// `[q]m = ⋁{m′ | m′·q ≤ m}`.
    fn dyn_box(&self, q: &Self::Q, m: &Self::M) -> Self::M;
    /// `{m}m′ = ⋁{q | m·q ≤ m′}`.
    fn co_residual(&self, m: &Self::M, m2: &Self::M) -> Self::Q;
    /// `a\b = ⋁{c | a•c ≤ b}`.
    fn left_residual(&self, a: &Self::Q, b: &Self::Q) -> Self::Q;
    /// `b/a = ⋁{c | c•a ≤ b}`.
    fn right_residual(&self, b: &Self::Q, a: &Self::Q) -> Self::Q;

    /// `φ·q ≤ φ` for every action `q`.
    fn is_stable(&self, m: &Self::M) -> bool;

    /// `⋁Ker(q)`, the largest proposition annihilated by `q`.
    fn kernel_generator(&self, q: &Self::Q) -> Self::M {
        self.dyn_box(q, &self.m_bottom())
    }

    fn m_label(&self, m: &Self::M) -> String;
    fn q_label(&self, q: &Self::Q) -> String;
}

/// Systems whose carriers can be listed element by element.
pub trait Enumerate: EpistemicAlgebra {
    fn m_elements(&self) -> Vec<Self::M>;
    fn q_elements(&self) -> Vec<Self::Q>;
}
