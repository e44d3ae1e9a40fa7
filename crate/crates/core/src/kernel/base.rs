use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::EpistemicAlgebra;
use crate::syntax::{
    name, parse_sequent, Environment, Item, MFormula, Name, QFormula, SemanticError, Sequent,
    Signature, SyntaxError,
};

/// Sequents accepted as leaves without further proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionBase {
    pub signature: Signature,
    pub axioms: Vec<Sequent>,
}

/// JSON form: axioms as sequent text over the signature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseDoc {
    pub signature: Signature,
    #[serde(default)]
    pub axioms: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseError {
    #[error("axiom {index}: {error}")]
    Syntax { index: usize, error: SyntaxError },
    #[error("{0} is not a declared name")]
    Undeclared(String),
    #[error("appearance of {item} to {agent} is not a join of the vocabulary")]
    Inexpressible { item: String, agent: String },
    #[error(transparent)]
    Semantic(#[from] SemanticError),
}

impl AssumptionBase {
    pub fn empty(signature: Signature) -> Self {
        AssumptionBase { signature, axioms: Vec::new() }
    }

    pub fn from_doc(doc: &BaseDoc) -> Result<Self, BaseError> {
        let axioms = doc
            .axioms
            .iter()
            .enumerate()
            .map(|(index, text)| {
                parse_sequent(text, &doc.signature).map_err(|error| BaseError::Syntax { index, error })
            })
            .collect::<Result<_, _>>()?;
        Ok(AssumptionBase { signature: doc.signature.clone(), axioms })
    }

    pub fn to_doc(&self) -> BaseDoc {
        BaseDoc {
            signature: self.signature.clone(),
            axioms: self.axioms.iter().map(|a| a.to_string()).collect(),
        }
    }

    pub fn position(&self, s: &Sequent) -> Option<usize> {
        self.axioms.iter().position(|a| a == s)
    }

    /// Indices of axioms that fail in `env`.
    pub fn failures<S: EpistemicAlgebra>(&self, env: &Environment<S>) -> Result<Vec<usize>, SemanticError> {
        let mut out = Vec::new();
        for (i, a) in self.axioms.iter().enumerate() {
            if !env.holds(a)? {
                out.push(i);
            }
        }
        Ok(out)
    }
}

/// Names the generated axioms may mention, in output order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    #[serde(default)]
    pub props: Vec<Name>,
    #[serde(default)]
    pub facts: Vec<Name>,
    #[serde(default)]
    pub actions: Vec<Name>,
}

fn join_formula<T>(parts: Vec<T>, bot: T, or: impl Fn(T, T) -> T) -> T {
    parts.into_iter().reduce(or).unwrap_or(bot)
}

/// The vocabulary entries below `target`, if their join is exactly `target`.
fn cover<'a, E: Clone + Eq>(
    candidates: &'a [(Name, E)],
    target: &E,
    bottom: E,
    leq: impl Fn(&E, &E) -> bool,
    join: impl Fn(&E, &E) -> E,
) -> Option<Vec<&'a Name>> {
    let mut acc = bottom;
    let mut out = Vec::new();
    for (n, v) in candidates {
        if leq(v, target) && !leq(v, &acc) {
            acc = join(&acc, v);
            out.push(n);
        }
    }
    (acc == *target).then_some(out)
}

fn lookup<T: Clone>(map: &BTreeMap<Name, T>, n: &Name) -> Result<T, BaseError> {
    map.get(n).cloned().ok_or_else(|| BaseError::Undeclared(n.to_string()))
}

/// Appearance, kernel and fact axioms true in `env` over `vocab`.
pub fn axioms_of<S: EpistemicAlgebra>(
    env: &Environment<S>,
    vocab: &Vocabulary,
) -> Result<AssumptionBase, BaseError> {
    let sys = &**env.system();
    let props: Vec<(Name, S::M)> = vocab
        .props
        .iter()
        .map(|n| Ok((n.clone(), lookup(env.mvals(), n)?)))
        .collect::<Result<_, BaseError>>()?;
    let facts: Vec<(Name, S::M)> = vocab
        .facts
        .iter()
        .map(|n| Ok((n.clone(), lookup(env.factvals(), n)?)))
        .collect::<Result<_, BaseError>>()?;
    let mut actions: Vec<(Name, S::Q)> = vocab
        .actions
        .iter()
        .map(|n| Ok((n.clone(), lookup(env.qvals(), n)?)))
        .collect::<Result<_, BaseError>>()?;
    let mvar = |n: &Name| MFormula::Var(n.clone());
    let qvar = |n: &Name| QFormula::Var(n.clone());
    let m_join = |names: Vec<&Name>| join_formula(names.into_iter().map(mvar).collect(), MFormula::Bot, MFormula::or);
    let mut axioms = Vec::new();

    for (ai, agent) in sys.agents().iter().enumerate() {
        for (n, v) in &props {
            let image = sys.app_m(ai, v);
            let names = cover(&props, &image, sys.m_bottom(), |a, b| sys.m_leq(a, b), |a, b| sys.m_join(a, b))
                .ok_or_else(|| BaseError::Inexpressible { item: n.to_string(), agent: agent.to_string() })?;
            axioms.push(Sequent::m(vec![Item::M(mvar(n)), Item::agent(agent.as_str())], m_join(names)));
        }
    }

    let one = name("1");
    let mut q_candidates = actions.clone();
    q_candidates.push((one.clone(), sys.unit()));
    let q_atom = |n: &Name| if *n == one { QFormula::One } else { qvar(n) };
    for (ai, agent) in sys.agents().iter().enumerate() {
        for (n, v) in &actions {
            let image = sys.app_q(ai, v);
            let names = cover(&q_candidates, &image, sys.q_bottom(), |a, b| sys.q_leq(a, b), |a, b| sys.q_join(a, b))
                .ok_or_else(|| BaseError::Inexpressible { item: n.to_string(), agent: agent.to_string() })?;
            let rhs = join_formula(names.into_iter().map(q_atom).collect(), QFormula::Bot, QFormula::or);
            axioms.push(Sequent::q(vec![Item::Q(qvar(n)), Item::agent(agent.as_str())], rhs));
        }
    }

    for (n, v) in actions.drain(..) {
        let k = sys.kernel_generator(&v);
        if k == sys.m_bottom() {
            continue;
        }
        let lhs = if let Some((p, _)) = facts.iter().find(|(_, f)| *f == k) {
            Some(MFormula::Fact(p.clone()))
        } else {
            cover(&props, &k, sys.m_bottom(), |a, b| sys.m_leq(a, b), |a, b| sys.m_join(a, b)).map(m_join)
        };
        if let Some(lhs) = lhs {
            axioms.push(Sequent::m(vec![Item::M(lhs), Item::Q(qvar(&n))], MFormula::Bot));
        }
    }

    for (n, v) in &props {
        for (p, f) in &facts {
            if sys.m_leq(v, f) {
                axioms.push(Sequent::m(vec![Item::M(mvar(n))], MFormula::Fact(p.clone())));
            }
        }
    }

    let signature = Signature {
        agents: sys.agents().iter().map(|a| name(a.as_str())).collect(),
        qvars: vocab.actions.iter().cloned().collect(),
        mvars: vocab.props.iter().cloned().collect(),
        facts: vocab.facts.iter().cloned().collect(),
    };
    Ok(AssumptionBase { signature, axioms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doc_round_trip() {
        let sig = Signature::new(["A"], ["a"], ["s", "t"], ["P"]);
        let doc = BaseDoc {
            signature: sig,
            axioms: vec!["s, @A |-M s | t".into(), "#P, a |-M bot".into(), "a, @A |-Q a".into()],
        };
        let base = AssumptionBase::from_doc(&doc).unwrap();
        assert_eq!(base.to_doc(), doc);
    }

    #[test]
    fn syntax_error_located() {
        let doc = BaseDoc { signature: Signature::default(), axioms: vec!["x |-M".into()] };
        assert!(matches!(AssumptionBase::from_doc(&doc), Err(BaseError::Syntax { index: 0, .. })));
    }
}
