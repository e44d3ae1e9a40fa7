//! Rule checking for the action, proposition and mixed sequent systems.

mod base;
mod check;
mod rules;
mod tree;

pub use base::{axioms_of, AssumptionBase, BaseDoc, BaseError, Vocabulary};
pub use check::{check_step, StepError};
pub use rules::{RuleId, UnknownRule};
pub use tree::{check_proof, fmt_path, ProofDoc, ProofTree, TreeSyntaxError, Violation};
