use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::ast::{name, Conclusion, Item, MFormula, Name, QFormula, Sequent};
use super::parse::Signature;
use crate::algebra::{AlgebraError, ElementCodec, EpistemicAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticError {
    #[error("unbound action variable {0}")]
    UnboundQ(String),
    #[error("unbound proposition variable {0}")]
    UnboundM(String),
    #[error("unbound fact {0}")]
    UnboundFact(String),
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("fact {0} is not stable under every action")]
    UnstableFact(String),
    #[error("name {0} is bound as both an action and a proposition")]
    SortClash(String),
    #[error("proposition in the context of an action sequent")]
    PropositionInActionContext,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A system together with values for variables and facts.
pub struct Environment<S: EpistemicAlgebra> {
    system: Arc<S>,
    qvals: BTreeMap<Name, S::Q>,
    mvals: BTreeMap<Name, S::M>,
    factvals: BTreeMap<Name, S::M>,
}

impl<S: EpistemicAlgebra> Clone for Environment<S> {
    fn clone(&self) -> Self {
        Environment {
            system: self.system.clone(),
            qvals: self.qvals.clone(),
            mvals: self.mvals.clone(),
            factvals: self.factvals.clone(),
        }
    }
}

impl<S: EpistemicAlgebra> fmt::Debug for Environment<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Environment")
            .field("qvals", &self.qvals)
            .field("mvals", &self.mvals)
            .field("factvals", &self.factvals)
            .finish()
    }
}

/// Variable and fact values in JSON, encoded by [`ElementCodec`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BindingsDoc {
    #[serde(default)]
    pub qvars: BTreeMap<String, Value>,
    #[serde(default)]
    pub mvars: BTreeMap<String, Value>,
    #[serde(default)]
    pub facts: BTreeMap<String, Value>,
}

impl<S: EpistemicAlgebra> Environment<S> {
    /// Fails when a fact value is not stable.
    pub fn new(
        system: Arc<S>,
        qvals: BTreeMap<Name, S::Q>,
        mvals: BTreeMap<Name, S::M>,
        factvals: BTreeMap<Name, S::M>,
    ) -> Result<Self, SemanticError> {
        if let Some(n) = qvals.keys().find(|n| mvals.contains_key(*n)) {
            return Err(SemanticError::SortClash(n.to_string()));
        }
        for (p, v) in &factvals {
            if !system.is_stable(v) {
                return Err(SemanticError::UnstableFact(p.to_string()));
            }
        }
        Ok(Environment { system, qvals, mvals, factvals })
    }

    pub fn system(&self) -> &Arc<S> {
        &self.system
    }

    pub fn qvals(&self) -> &BTreeMap<Name, S::Q> {
        &self.qvals
    }

    pub fn mvals(&self) -> &BTreeMap<Name, S::M> {
        &self.mvals
    }

    pub fn factvals(&self) -> &BTreeMap<Name, S::M> {
        &self.factvals
    }

    /// The names this environment can interpret.
    pub fn signature(&self) -> Signature {
        Signature {
            agents: self.system.agents().iter().map(|a| name(a.as_str())).collect(),
            qvars: self.qvals.keys().cloned().collect(),
            mvars: self.mvals.keys().cloned().collect(),
            facts: self.factvals.keys().cloned().collect(),
        }
    }

    fn agent(&self, a: &str) -> Result<usize, SemanticError> {
        self.system
            .agent_index(a)
            .ok_or_else(|| SemanticError::UnknownAgent(a.to_owned()))
    }

    pub fn eval_q(&self, q: &QFormula) -> Result<S::Q, SemanticError> {
        let s = &*self.system;
        Ok(match q {
            QFormula::Top => s.q_top(),
            QFormula::Bot => s.q_bottom(),
            QFormula::One => s.unit(),
            QFormula::Var(v) => self
                .qvals
                .get(v)
                .cloned()
                .ok_or_else(|| SemanticError::UnboundQ(v.to_string()))?,
            QFormula::Seq(a, b) => s.mult(&self.eval_q(a)?, &self.eval_q(b)?),
            QFormula::LRes(a, b) => s.left_residual(&self.eval_q(a)?, &self.eval_q(b)?),
            QFormula::RRes(a, b) => s.right_residual(&self.eval_q(a)?, &self.eval_q(b)?),
            QFormula::Or(a, b) => s.q_join(&self.eval_q(a)?, &self.eval_q(b)?),
            QFormula::And(a, b) => s.q_meet(&self.eval_q(a)?, &self.eval_q(b)?),
            QFormula::AppQ(ag, a) => s.app_q(self.agent(ag)?, &self.eval_q(a)?),
            QFormula::BoxQ(ag, a) => s.box_q(self.agent(ag)?, &self.eval_q(a)?),
        })
    }

    pub fn eval_m(&self, m: &MFormula) -> Result<S::M, SemanticError> {
        let s = &*self.system;
        Ok(match m {
            MFormula::Top => s.m_top(),
            MFormula::Bot => s.m_bottom(),
            MFormula::Fact(p) => self
                .factvals
                .get(p)
                .cloned()
                .ok_or_else(|| SemanticError::UnboundFact(p.to_string()))?,
            MFormula::Var(v) => self
                .mvals
                .get(v)
                .cloned()
                .ok_or_else(|| SemanticError::UnboundM(v.to_string()))?,
            MFormula::And(a, b) => s.m_meet(&self.eval_m(a)?, &self.eval_m(b)?),
            MFormula::Or(a, b) => s.m_join(&self.eval_m(a)?, &self.eval_m(b)?),
            MFormula::DynBox(q, a) => s.dyn_box(&self.eval_q(q)?, &self.eval_m(a)?),
            MFormula::Update(a, q) => s.update(&self.eval_m(a)?, &self.eval_q(q)?),
            MFormula::AppM(ag, a) => s.app_m(self.agent(ag)?, &self.eval_m(a)?),
            MFormula::BoxM(ag, a) => s.box_m(self.agent(ag)?, &self.eval_m(a)?),
        })
    }

    /// Left fold from `1`: formulas compose by `•`, agents apply `f^Q`.
    pub fn fold_q(&self, context: &[Item]) -> Result<S::Q, SemanticError> {
        let s = &*self.system;
        let mut acc = s.unit();
        for item in context {
            acc = match item {
                Item::Agent(a) => s.app_q(self.agent(a)?, &acc),
                Item::Q(q) => s.mult(&acc, &self.eval_q(q)?),
                Item::M(_) => return Err(SemanticError::PropositionInActionContext),
            };
        }
        Ok(acc)
    }

    /// Left fold from `⊤`: propositions meet, actions update, agents
    /// apply `f^M`.
    pub fn fold_m(&self, context: &[Item]) -> Result<S::M, SemanticError> {
        let s = &*self.system;
        let mut acc = s.m_top();
        for item in context {
            acc = match item {
                Item::Agent(a) => s.app_m(self.agent(a)?, &acc),
                Item::Q(q) => s.update(&acc, &self.eval_q(q)?),
                Item::M(m) => s.m_meet(&acc, &self.eval_m(m)?),
            };
        }
        Ok(acc)
    }

    /// The folded context lies below the conclusion.
    pub fn holds(&self, sequent: &Sequent) -> Result<bool, SemanticError> {
        let s = &*self.system;
        Ok(match &sequent.conclusion {
            Conclusion::Q(q) => s.q_leq(&self.fold_q(&sequent.context)?, &self.eval_q(q)?),
            Conclusion::M(m) => s.m_leq(&self.fold_m(&sequent.context)?, &self.eval_m(m)?),
        })
    }
}

impl<S: ElementCodec> Environment<S> {
    pub fn from_bindings(system: Arc<S>, doc: &BindingsDoc) -> Result<Self, SemanticError> {
        let mut qvals = BTreeMap::new();
        for (k, v) in &doc.qvars {
            qvals.insert(name(k), system.decode_q(v)?);
        }
        let mut mvals = BTreeMap::new();
        for (k, v) in &doc.mvars {
            mvals.insert(name(k), system.decode_m(v)?);
        }
        let mut factvals = BTreeMap::new();
        for (k, v) in &doc.facts {
            factvals.insert(name(k), system.decode_m(v)?);
        }
        Environment::new(system, qvals, mvals, factvals)
    }

    pub fn to_bindings(&self) -> BindingsDoc {
        let s = &*self.system;
        BindingsDoc {
            qvars: self.qvals.iter().map(|(k, v)| (k.to_string(), s.encode_q(v))).collect(),
            mvars: self.mvals.iter().map(|(k, v)| (k.to_string(), s.encode_m(v))).collect(),
            facts: self.factvals.iter().map(|(k, v)| (k.to_string(), s.encode_m(v))).collect(),
        }
    }
}
