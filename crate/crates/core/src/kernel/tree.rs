use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::base::AssumptionBase;
use super::check::check_step;
use super::rules::RuleId;
use crate::syntax::{parse_sequent, Sequent, Signature, SyntaxError};

/// A rule-labelled derivation. Assumption leaves may pin the axiom they use.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofTree {
    pub sequent: Sequent,
    pub rule: RuleId,
    pub premises: Vec<ProofTree>,
    pub axiom: Option<usize>,
}

/// JSON form of a proof tree with sequents as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofDoc {
    pub sequent: String,
    pub rule: RuleId,
    #[serde(default)]
    pub premises: Vec<ProofDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("node {}: {error}", fmt_path(.path))]
pub struct TreeSyntaxError {
    pub path: Vec<usize>,
    pub error: SyntaxError,
}

/// A node that is not an instance of its rule.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[error("node {} ({rule}, {sequent}): {message}", fmt_path(.path))]
pub struct Violation {
    /// Premise indices from the root.
    pub path: Vec<usize>,
    pub rule: RuleId,
    pub sequent: String,
    pub message: String,
}

/// Renders a path as `root` or `root.0.1`.
pub fn fmt_path(path: &[usize]) -> String {
    let mut s = String::from("root");
    for i in path {
        s.push('.');
        s.push_str(&i.to_string());
    }
    s
}

impl ProofTree {
    pub fn leaf(sequent: Sequent, rule: RuleId) -> Self {
        ProofTree { sequent, rule, premises: Vec::new(), axiom: None }
    }

    pub fn node(sequent: Sequent, rule: RuleId, premises: Vec<ProofTree>) -> Self {
        ProofTree { sequent, rule, premises, axiom: None }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::height).max().unwrap_or(0)
    }

    pub fn from_doc(doc: &ProofDoc, sig: &Signature) -> Result<Self, TreeSyntaxError> {
        fn go(doc: &ProofDoc, sig: &Signature, path: &mut Vec<usize>) -> Result<ProofTree, TreeSyntaxError> {
            let sequent = parse_sequent(&doc.sequent, sig)
                .map_err(|error| TreeSyntaxError { path: path.clone(), error })?;
            let mut premises = Vec::with_capacity(doc.premises.len());
            for (i, p) in doc.premises.iter().enumerate() {
                path.push(i);
                premises.push(go(p, sig, path)?);
                path.pop();
            }
            Ok(ProofTree { sequent, rule: doc.rule, premises, axiom: doc.axiom })
        }
        go(doc, sig, &mut Vec::new())
    }

    pub fn to_doc(&self) -> ProofDoc {
        ProofDoc {
            sequent: self.sequent.to_string(),
            rule: self.rule,
            premises: self.premises.iter().map(ProofTree::to_doc).collect(),
            axiom: self.axiom,
        }
    }

    /// Node at `path`, if any.
    pub fn at(&self, path: &[usize]) -> Option<&ProofTree> {
        path.iter().try_fold(self, |t, &i| t.premises.get(i))
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut ProofTree> {
        path.iter().try_fold(self, |t, &i| t.premises.get_mut(i))
    }

    /// Paths of every node, parents before children.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut i = 0;
        while i < out.len() {
            let path = out[i].clone();
            let n = self.at(&path).map_or(0, |t| t.premises.len());
            for k in 0..n {
                let mut p = path.clone();
                p.push(k);
                out.push(p);
            }
            i += 1;
        }
        out
    }
}

/// Checks every node, parents before children, and reports the first
/// failure in that order.
pub fn check_proof(tree: &ProofTree, base: &AssumptionBase) -> Result<(), Violation> {
    fn go(t: &ProofTree, base: &AssumptionBase, path: &mut Vec<usize>) -> Result<(), Violation> {
        let premises: Vec<&Sequent> = t.premises.iter().map(|p| &p.sequent).collect();
        check_step(t.rule, &t.sequent, &premises, base, t.axiom).map_err(|e| Violation {
            path: path.clone(),
            rule: t.rule,
            sequent: t.sequent.to_string(),
            message: e.0,
        })?;
        for (i, p) in t.premises.iter().enumerate() {
            path.push(i);
            go(p, base, path)?;
            path.pop();
        }
        Ok(())
    }
    go(tree, base, &mut Vec::new())
}

impl fmt::Display for ProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &ProofTree, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
            writeln!(f, "{:indent$}{}  [{}]", "", t.sequent, t.rule, indent = 2 * depth)?;
            t.premises.iter().try_for_each(|p| go(p, f, depth + 1))
        }
        go(self, f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(["A"], ["q"], ["m"], [])
    }

    fn tree() -> ProofTree {
        let doc: ProofDoc = serde_json::from_str(
            r#"{"sequent": "q, @A |-Q fQ[A](q)", "rule": "AppQ_R",
                "premises": [{"sequent": "q |-Q q", "rule": "Id"}]}"#,
        )
        .unwrap();
        ProofTree::from_doc(&doc, &sig()).unwrap()
    }

    #[test]
    fn checks_and_round_trips() {
        let t = tree();
        assert!(check_proof(&t, &AssumptionBase::empty(sig())).is_ok());
        assert_eq!(ProofTree::from_doc(&t.to_doc(), &sig()).unwrap(), t);
        assert_eq!(t.paths(), vec![vec![], vec![0]]);
    }

    #[test]
    fn violation_located() {
        let mut t = tree();
        t.at_mut(&[0]).unwrap().rule = RuleId::TopR;
        let v = check_proof(&t, &AssumptionBase::empty(sig())).unwrap_err();
        assert_eq!(v.path, vec![0]);
        assert_eq!(v.rule, RuleId::TopR);
    }

    #[test]
    fn parse_error_located() {
        let doc = ProofDoc {
            sequent: "q |-Q q".into(),
            rule: RuleId::OrR1,
            premises: vec![ProofDoc { sequent: "q |-Q @".into(), rule: RuleId::Id, premises: vec![], axiom: None }],
            axiom: None,
        };
        assert_eq!(ProofTree::from_doc(&doc, &sig()).unwrap_err().path, vec![0]);
    }
}
