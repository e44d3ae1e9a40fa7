use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::kripke::{ActionModel, KripkeStateModel, ModelError, PreFormula};
use crate::lattice::{Elem, FiniteLattice};

/// What an agent believes happened when an action takes place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Appearance {
    /// The agent sees the action itself.
    Itself,
    /// The agent believes nothing happened.
    Skip,
}

/// An action that refutes a formula, with its appearance to each agent.
/// Agents not listed see the action itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDescriptor {
    pub name: String,
    pub refutes: PreFormula,
    #[serde(default)]
    pub appearance: BTreeMap<String, Appearance>,
}

/// Name of the trivial action added for agents that see nothing.
pub const SKIP: &str = "skip";

impl ActionDescriptor {
    /// Everyone learns that `m` is false.
    pub fn public_refutation(name: &str, m: PreFormula) -> Self {
        ActionDescriptor { name: name.to_owned(), refutes: m, appearance: BTreeMap::new() }
    }

    /// The group learns that `m` is false; everyone else sees nothing.
    pub fn private_refutation(name: &str, m: PreFormula, group: &[&str], agents: &[String]) -> Self {
        let appearance = agents
            .iter()
            .map(|a| {
                let ap = if group.contains(&a.as_str()) { Appearance::Itself } else { Appearance::Skip };
                (a.clone(), ap)
            })
            .collect();
        ActionDescriptor { name: name.to_owned(), refutes: m, appearance }
    }

    /// A refutation nobody notices.
    pub fn failure_test(name: &str, m: PreFormula, agents: &[String]) -> Self {
        ActionDescriptor::private_refutation(name, m, &[], agents)
    }

    pub fn precondition(&self) -> PreFormula {
        PreFormula::not(self.refutes.clone())
    }

    /// Builds the action model of the descriptors, adding [`SKIP`] when some
    /// agent sees nothing.
    pub fn action_model(sm: &KripkeStateModel, descriptors: &[ActionDescriptor]) -> Result<ActionModel, ModelError> {
        for d in descriptors {
            if let Some(a) = d.appearance.keys().find(|a| !sm.agents.contains(a)) {
                return Err(ModelError::UnknownAgent(a.clone()));
            }
        }
        let needs_skip = descriptors.iter().any(|d| d.appearance.values().any(|&a| a == Appearance::Skip));
        let mut actions: Vec<String> = descriptors.iter().map(|d| d.name.clone()).collect();
        let mut pre: Vec<PreFormula> = descriptors.iter().map(ActionDescriptor::precondition).collect();
        let skip = actions.len();
        if needs_skip {
            actions.push(SKIP.to_owned());
            pre.push(PreFormula::True);
        }
        let access = sm
            .agents
            .iter()
            .map(|agent| {
                let mut rel: Vec<(usize, usize)> = descriptors
                    .iter()
                    .enumerate()
                    .map(|(i, d)| match d.appearance.get(agent).copied().unwrap_or(Appearance::Itself) {
                        Appearance::Itself => (i, i),
                        Appearance::Skip => (i, skip),
                    })
                    .collect();
                if needs_skip {
                    rel.push((skip, skip));
                }
                rel
            })
            .collect();
        ActionModel::new(sm, actions, access, pre)
    }
}

/// Kernel generator of the public announcement of `m`: its unique complement.
pub fn public_announcement(lat: &FiniteLattice, m: Elem) -> Result<Elem, ModelError> {
    lat.boolean_complement(m).ok_or_else(|| {
        ModelError::Invalid(format!("{} has no unique complement, so its announcement has no kernel", lat.label(m)))
    })
}
