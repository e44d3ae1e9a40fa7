//! Kripke state and action models and their compilation to atomic systems.
mod actions;
mod bms;
mod kripke;
pub mod scenarios;

pub use actions::{public_announcement, ActionDescriptor, Appearance};
pub use bms::{bms_to_system, Compiled};
pub use kripke::{ActionModel, ActionModelDoc, KripkeStateModel, ModelError, PreFormula, StateModelDoc};
