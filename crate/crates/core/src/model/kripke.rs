use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("unknown action {0}")]
    UnknownAction(String),
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("unknown fact {0}")]
    UnknownFact(String),
    #[error("duplicate name {0}")]
    Duplicate(String),
    #[error("action {0} has no precondition")]
    MissingPrecondition(String),
    #[error("closure did not stabilize within horizon {horizon} ({what})")]
    HorizonExceeded { what: &'static str, horizon: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Modal formulas over the facts of a state model, used as preconditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreFormula {
    True,
    False,
    Fact(String),
    /// Holds at the listed base states.
    States(Vec<String>),
    Not(Box<PreFormula>),
    And(Vec<PreFormula>),
    Or(Vec<PreFormula>),
    /// Holds at every successor for the agent.
    Knows(String, Box<PreFormula>),
}

impl PreFormula {
    pub fn fact(p: &str) -> Self {
        PreFormula::Fact(p.to_owned())
    }

    pub fn states<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        PreFormula::States(names.into_iter().map(str::to_owned).collect())
    }

    pub fn not(f: PreFormula) -> Self {
        PreFormula::Not(Box::new(f))
    }

    pub fn knows(agent: &str, f: PreFormula) -> Self {
        PreFormula::Knows(agent.to_owned(), Box::new(f))
    }

    fn check(&self, sm: &KripkeStateModel) -> Result<(), ModelError> {
        match self {
            PreFormula::True | PreFormula::False => Ok(()),
            PreFormula::Fact(p) => sm
                .valuation
                .contains_key(p)
                .then_some(())
                .ok_or_else(|| ModelError::UnknownFact(p.clone())),
            PreFormula::States(ss) => ss.iter().try_for_each(|s| sm.state_index(s).map(|_| ())),
            PreFormula::Not(f) => f.check(sm),
            PreFormula::And(fs) | PreFormula::Or(fs) => fs.iter().try_for_each(|f| f.check(sm)),
            PreFormula::Knows(a, f) => {
                sm.agent_index(a)?;
                f.check(sm)
            }
        }
    }
}

/// States with per-agent accessibility and a valuation of facts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeStateModel {
    pub states: Vec<String>,
    pub agents: Vec<String>,
    /// `access[agent]` as pairs of state indices.
    pub access: Vec<Vec<(usize, usize)>>,
    pub valuation: BTreeMap<String, BTreeSet<usize>>,
}

/// Actions with per-agent accessibility and preconditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionModel {
    pub actions: Vec<String>,
    /// `access[agent]` as pairs of action indices, agents as in the state model.
    pub access: Vec<Vec<(usize, usize)>>,
    pub pre: Vec<PreFormula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateModelDoc {
    pub states: Vec<String>,
    #[serde(default)]
    pub access: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionModelDoc {
    pub actions: Vec<String>,
    #[serde(default)]
    pub access: BTreeMap<String, Vec<(String, String)>>,
    pub pre: BTreeMap<String, PreFormula>,
}

fn index_of(names: &[String], s: &str) -> Option<usize> {
    names.iter().position(|n| n == s)
}

fn no_duplicates(names: &[String]) -> Result<(), ModelError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(ModelError::Duplicate(n.clone()));
        }
    }
    Ok(())
}

impl KripkeStateModel {
    pub fn new(
        states: Vec<String>,
        agents: Vec<String>,
        access: Vec<Vec<(usize, usize)>>,
        valuation: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<Self, ModelError> {
        no_duplicates(&states)?;
        no_duplicates(&agents)?;
        if access.len() != agents.len() {
            return Err(ModelError::Invalid("one access relation per agent is required".into()));
        }
        let n = states.len();
        if access.iter().flatten().any(|&(a, b)| a >= n || b >= n)
            || valuation.values().flatten().any(|&s| s >= n)
        {
            return Err(ModelError::Invalid("state index out of range".into()));
        }
        Ok(KripkeStateModel { states, agents, access, valuation })
    }

    pub fn state_index(&self, s: &str) -> Result<usize, ModelError> {
        index_of(&self.states, s).ok_or_else(|| ModelError::UnknownState(s.to_owned()))
    }

    pub fn agent_index(&self, a: &str) -> Result<usize, ModelError> {
        index_of(&self.agents, a).ok_or_else(|| ModelError::UnknownAgent(a.to_owned()))
    }

    /// `succ[agent][state]`.
    pub fn successors(&self) -> Vec<Vec<Vec<usize>>> {
        successor_lists(&self.access, self.states.len())
    }

    pub fn from_doc(doc: &StateModelDoc) -> Result<Self, ModelError> {
        let states = doc.states.clone();
        let agents: Vec<String> = doc.access.keys().cloned().collect();
        let idx = |s: &str| index_of(&states, s).ok_or_else(|| ModelError::UnknownState(s.to_owned()));
        let mut access = Vec::new();
        for pairs in doc.access.values() {
            access.push(pairs.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<_, ModelError>>()?);
        }
        let mut valuation = BTreeMap::new();
        for (p, ss) in &doc.valuation {
            valuation.insert(p.clone(), ss.iter().map(|s| idx(s)).collect::<Result<_, _>>()?);
        }
        KripkeStateModel::new(states, agents, access, valuation)
    }

    pub fn to_doc(&self) -> StateModelDoc {
        let name = |i: usize| self.states[i].clone();
        StateModelDoc {
            states: self.states.clone(),
            access: self
                .agents
                .iter()
                .zip(&self.access)
                .map(|(a, r)| (a.clone(), r.iter().map(|&(x, y)| (name(x), name(y))).collect()))
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(p, ss)| (p.clone(), ss.iter().map(|&s| name(s)).collect()))
                .collect(),
        }
    }
}

impl ActionModel {
    pub fn new(
        sm: &KripkeStateModel,
        actions: Vec<String>,
        access: Vec<Vec<(usize, usize)>>,
        pre: Vec<PreFormula>,
    ) -> Result<Self, ModelError> {
        no_duplicates(&actions)?;
        if access.len() != sm.agents.len() {
            return Err(ModelError::Invalid("one action access relation per agent is required".into()));
        }
        if pre.len() != actions.len() {
            let missing = actions.get(pre.len()).cloned().unwrap_or_default();
            return Err(ModelError::MissingPrecondition(missing));
        }
        let n = actions.len();
        if access.iter().flatten().any(|&(a, b)| a >= n || b >= n) {
            return Err(ModelError::Invalid("action index out of range".into()));
        }
        for f in &pre {
            f.check(sm)?;
        }
        Ok(ActionModel { actions, access, pre })
    }

    pub fn action_index(&self, a: &str) -> Result<usize, ModelError> {
        index_of(&self.actions, a).ok_or_else(|| ModelError::UnknownAction(a.to_owned()))
    }

    pub fn successors(&self) -> Vec<Vec<Vec<usize>>> {
        successor_lists(&self.access, self.actions.len())
    }

    /// Agents missing from the document get an empty relation.
    pub fn from_doc(doc: &ActionModelDoc, sm: &KripkeStateModel) -> Result<Self, ModelError> {
        let actions = doc.actions.clone();
        let idx = |s: &str| index_of(&actions, s).ok_or_else(|| ModelError::UnknownAction(s.to_owned()));
        let mut access = vec![Vec::new(); sm.agents.len()];
        for (agent, pairs) in &doc.access {
            let a = sm.agent_index(agent)?;
            access[a] = pairs.iter().map(|(x, y)| Ok((idx(x)?, idx(y)?))).collect::<Result<_, ModelError>>()?;
        }
        for name in doc.pre.keys() {
            idx(name)?;
        }
        let pre = actions
            .iter()
            .map(|a| doc.pre.get(a).cloned().ok_or_else(|| ModelError::MissingPrecondition(a.clone())))
            .collect::<Result<_, _>>()?;
        ActionModel::new(sm, actions, access, pre)
    }

    pub fn to_doc(&self, sm: &KripkeStateModel) -> ActionModelDoc {
        let name = |i: usize| self.actions[i].clone();
        ActionModelDoc {
            actions: self.actions.clone(),
            access: sm
                .agents
                .iter()
                .zip(&self.access)
                .map(|(a, r)| (a.clone(), r.iter().map(|&(x, y)| (name(x), name(y))).collect()))
                .collect(),
            pre: self.actions.iter().cloned().zip(self.pre.iter().cloned()).collect(),
        }
    }
}

fn successor_lists(access: &[Vec<(usize, usize)>], n: usize) -> Vec<Vec<Vec<usize>>> {
    access
        .iter()
        .map(|rel| {
            let mut succ = vec![Vec::new(); n];
            for &(a, b) in rel {
                succ[a].push(b);
            }
            for s in &mut succ {
                s.sort_unstable();
                s.dedup();
            }
            succ
        })
        .collect()
}
