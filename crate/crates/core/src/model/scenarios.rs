//! The muddy children, lying child and man-in-the-middle models.
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::bms::{bms_to_system, Compiled};
use super::kripke::{ActionModel, KripkeStateModel, ModelError, PreFormula};
use crate::algebra::AtomicSystem;
use crate::kernel::{AssumptionBase, BaseDoc, Vocabulary};
use crate::syntax::{name, parse_sequent, Environment, SemanticError, Signature, SyntaxError};

/// Extension rounds allowed when compiling a scenario.
pub const DEFAULT_HORIZON: usize = 32;

/// A sequent with the truth value the scenario predicts for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub label: String,
    pub sequent: String,
    pub expected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetResult {
    pub label: String,
    pub sequent: String,
    pub expected: bool,
    pub holds: bool,
}

#[derive(thiserror::Error, Debug)]
pub enum TargetError {
    #[error("{0}: {1}")]
    Syntax(String, SyntaxError),
    #[error("{0}: {1}")]
    Semantic(String, SemanticError),
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub state_model: KripkeStateModel,
    pub action_model: ActionModel,
    pub compiled: Compiled,
    pub env: Environment<AtomicSystem>,
    pub vocabulary: Vocabulary,
    pub targets: Vec<Target>,
    /// A small hand-written base, when the scenario has one.
    pub base: Option<AssumptionBase>,
}

fn target(label: impl Into<String>, sequent: impl Into<String>, expected: bool) -> Target {
    Target { label: label.into(), sequent: sequent.into(), expected }
}

impl Scenario {
    fn build(
        title: &str,
        sm: KripkeStateModel,
        am: ActionModel,
        horizon: usize,
        targets: Vec<Target>,
    ) -> Result<Self, ModelError> {
        let compiled = bms_to_system(&sm, &am, horizon)?;
        let env = compiled.environment(&sm, &am)?;
        let vocabulary = Vocabulary {
            props: sm.states.iter().map(|s| name(s)).collect(),
            facts: sm.valuation.keys().map(|s| name(s)).collect(),
            actions: am.actions.iter().map(|s| name(s)).collect(),
        };
        Ok(Scenario {
            name: title.to_owned(),
            state_model: sm,
            action_model: am,
            compiled,
            env,
            vocabulary,
            targets,
            base: None,
        })
    }

    pub fn signature(&self) -> Signature {
        self.env.signature()
    }

    /// Evaluates every target in the compiled system.
    pub fn check(&self) -> Result<Vec<TargetResult>, TargetError> {
        let sig = self.signature();
        self.targets
            .iter()
            .map(|t| {
                let s = parse_sequent(&t.sequent, &sig).map_err(|e| TargetError::Syntax(t.sequent.clone(), e))?;
                let holds = self.env.holds(&s).map_err(|e| TargetError::Semantic(t.sequent.clone(), e))?;
                Ok(TargetResult { label: t.label.clone(), sequent: t.sequent.clone(), expected: t.expected, holds })
            })
            .collect()
    }
}

/// Largest number of children in the muddy and lying scenarios.
pub const MAX_CHILDREN: usize = 4;

/// State name of the set of dirty children, e.g. `s_13` or `s_none`.
pub fn children_state(dirty: &BTreeSet<usize>) -> String {
    if dirty.is_empty() {
        "s_none".to_owned()
    } else {
        format!("s_{}", dirty.iter().map(|i| i.to_string()).collect::<String>())
    }
}

fn child(i: usize) -> String {
    format!("C{i}")
}

fn dirty(i: usize) -> String {
    format!("D{i}")
}

/// States are subsets of the children `1..=n`; child `i` sees everyone's
/// forehead except its own.
fn children_model(n: usize, extra_facts: &[(&str, Box<dyn Fn(&BTreeSet<usize>) -> bool>)]) -> Result<KripkeStateModel, ModelError> {
    if n == 0 || n > MAX_CHILDREN {
        return Err(ModelError::Invalid(format!("between 1 and {MAX_CHILDREN} children are supported, got {n}")));
    }
    let subsets: Vec<BTreeSet<usize>> =
        (0..1usize << n).map(|m| (1..=n).filter(|i| m >> (i - 1) & 1 == 1).collect()).collect();
    let states = subsets.iter().map(children_state).collect();
    let agents = (1..=n).map(child).collect();
    let access = (1..=n)
        .map(|i| {
            let bit = 1usize << (i - 1);
            (0..1usize << n).flat_map(|m| [(m, m), (m, m ^ bit)]).collect()
        })
        .collect();
    let mut valuation = BTreeMap::new();
    for i in 1..=n {
        valuation.insert(dirty(i), (0..subsets.len()).filter(|&m| subsets[m].contains(&i)).collect());
    }
    valuation.insert("Dnone".to_owned(), BTreeSet::from([0]));
    for (p, f) in extra_facts {
        valuation.insert((*p).to_owned(), (0..subsets.len()).filter(|&m| f(&subsets[m])).collect());
    }
    KripkeStateModel::new(states, agents, access, valuation)
}

fn public(n_agents: usize, actions: usize) -> Vec<Vec<(usize, usize)>> {
    vec![(0..actions).map(|a| (a, a)).collect(); n_agents]
}

fn someone_knows(children: impl IntoIterator<Item = usize>) -> PreFormula {
    PreFormula::Or(children.into_iter().map(|i| PreFormula::knows(&child(i), PreFormula::fact(&dirty(i)))).collect())
}

fn rounds_word(rounds: usize, last: &str) -> String {
    std::iter::once("q0").chain(std::iter::repeat_n(last, rounds)).collect::<Vec<_>>().join(" * ")
}

/// `n` children of whom `1..=k` are dirty. The father announces that someone
/// is dirty (`q0`), then every round the children announce that nobody knows
/// (`q`). With `rounds` given, targets after that many rounds are added.
pub fn muddy_scenario(n: usize, k: usize, rounds: Option<usize>, horizon: usize) -> Result<Scenario, ModelError> {
    if k == 0 || k > n {
        return Err(ModelError::Invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let sm = children_model(n, &[])?;
    let pre = vec![PreFormula::not(PreFormula::fact("Dnone")), PreFormula::not(someone_knows(1..=n))];
    let am = ActionModel::new(&sm, vec!["q0".into(), "q".into()], public(n, 2), pre)?;
    let real: BTreeSet<usize> = (1..=k).collect();
    let s = children_state(&real);
    let mut targets = Vec::new();
    let knows = |r: usize, j: usize| format!("{s} |-M [{}]boxM[{}](#{})", rounds_word(r, "q"), child(j), dirty(j));
    for j in 1..=k {
        targets.push(target(format!("C{j} knows after {} rounds", k - 1), knows(k - 1, j), true));
    }
    if k >= 2 {
        for j in 1..=k {
            targets.push(target(format!("C{j} does not know after {} rounds", k - 2), knows(k - 2, j), false));
            let mut other = real.clone();
            other.remove(&j);
            targets.push(target(
                format!("someone knows in {} after {} rounds", children_state(&other), k - 2),
                format!("{} |-M [{}][q]bot", children_state(&other), rounds_word(k - 2, "q")),
                true,
            ));
        }
    }
    if let Some(r) = rounds {
        for j in 1..=k {
            targets.push(target(format!("C{j} after {r} rounds"), knows(r, j), r + 1 >= k));
        }
    }
    Scenario::build(&format!("muddy n={n} k={k}"), sm, am, horizon, targets)
}

/// Child 1 is the only dirty child and, after the father's announcement,
/// falsely claims not to know (`qbar`). The others take it for the honest
/// round `q`. The truthful answer is `qt`.
pub fn lying_scenario(n: usize, horizon: usize) -> Result<Scenario, ModelError> {
    if n < 2 {
        return Err(ModelError::Invalid("the lying scenario needs at least two children".into()));
    }
    let sm = children_model(n, &[("Dbar1", Box::new(|s: &BTreeSet<usize>| !s.contains(&1)))])?;
    let others = || 2..=n;
    let pre = vec![
        PreFormula::not(PreFormula::fact("Dnone")),
        PreFormula::not(someone_knows(1..=n)),
        PreFormula::not(PreFormula::Or(vec![
            PreFormula::knows("C1", PreFormula::fact("Dbar1")),
            someone_knows(others()),
        ])),
        PreFormula::And(vec![
            PreFormula::knows("C1", PreFormula::fact("D1")),
            PreFormula::not(someone_knows(others())),
        ]),
    ];
    let (q0, q, qbar, qt) = (0, 1, 2, 3);
    let access = (1..=n)
        .map(|i| vec![(q0, q0), (q, q), (qbar, if i == 1 { qbar } else { q }), (qt, qt)])
        .collect();
    let am = ActionModel::new(&sm, ["q0", "q", "qbar", "qt"].map(String::from).to_vec(), access, pre)?;
    let mut targets: Vec<Target> = (2..=n)
        .map(|j| {
            target(
                format!("C{j} wrongly believes it is dirty"),
                format!("s_1 |-M [q0 * qbar]boxM[{}](#{})", child(j), dirty(j)),
                true,
            )
        })
        .collect();
    targets.push(target("truthful answer teaches C2 nothing false", "s_1 |-M [q0 * qt]boxM[C2](#D2)", false));
    targets.push(target("honest round is impossible once C1 knows", "s_1 |-M [q0][q]bot", true));
    targets.push(target("so the honest-round control holds vacuously", "s_1 |-M [q0 * q]boxM[C2](#D2)", true));
    Scenario::build(&format!("lying n={n}"), sm, am, horizon, targets)
}

/// Axioms over the man-in-the-middle vocabulary used by its certificate.
pub const MITM_AXIOMS: [&str; 11] = [
    "s |-M #P",
    "t |-M #Pbar",
    "#Pbar, alpha |-M bot",
    "#Pbar, alpha' |-M bot",
    "#P, beta |-M bot",
    "#P, beta' |-M bot",
    "s, @A |-M s",
    "s, @B |-M s | t",
    "alpha, @A |-Q alpha'",
    "alpha, @B |-Q beta'",
    "alpha', @B |-Q alpha'",
];

/// A sends B a message saying whether `P` holds; C intercepts and may
/// forward it (`alpha`, `beta`), and both believe it was delivered securely.
pub fn mitm_scenario(horizon: usize) -> Result<Scenario, ModelError> {
    let all = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
    let sm = KripkeStateModel::new(
        vec!["s".into(), "t".into()],
        ["A", "B", "C"].map(String::from).to_vec(),
        vec![vec![(0, 0), (1, 1)], all.clone(), all],
        BTreeMap::from([("P".to_owned(), BTreeSet::from([0])), ("Pbar".to_owned(), BTreeSet::from([1]))]),
    )?;
    let (alpha, alpha1, beta, beta1, gamma) = (0, 1, 2, 3, 4);
    let secure = [(alpha1, alpha1), (beta1, beta1), (gamma, gamma)];
    let mut f_a = vec![(alpha, alpha1), (beta, beta1)];
    f_a.extend(secure);
    let mut f_b = vec![(alpha, beta1), (beta, alpha1)];
    f_b.extend(secure);
    let mut f_c = Vec::new();
    for x in [alpha, beta] {
        f_c.extend([(x, alpha), (x, beta)]);
    }
    for x in [alpha1, beta1, gamma] {
        f_c.extend([(x, alpha1), (x, beta1), (x, gamma)]);
    }
    let pre = vec![
        PreFormula::states(["s"]),
        PreFormula::states(["s"]),
        PreFormula::states(["t"]),
        PreFormula::states(["t"]),
        PreFormula::True,
    ];
    let am = ActionModel::new(
        &sm,
        ["alpha", "alpha'", "beta", "beta'", "gamma"].map(String::from).to_vec(),
        vec![f_a, f_b, f_c],
        pre,
    )?;
    let targets = vec![
        target("A believes B believes P", "s . (alpha | beta) |-M boxM[A](boxM[B](#P))", true),
        target("beta cannot happen at s", "s . beta |-M bot", true),
        target("alpha' only happens where P holds", "(s | t) . alpha' |-M #P", true),
        target("C does not learn P", "s . (alpha | beta) |-M boxM[C](#P)", false),
    ];
    let mut sc = Scenario::build("mitm", sm, am, horizon, targets)?;
    let doc = BaseDoc {
        signature: Signature::new(["A", "B", "C"], ["alpha", "alpha'", "beta", "beta'", "gamma"], ["s", "t"], ["P", "Pbar"]),
        axioms: MITM_AXIOMS.iter().map(|s| s.to_string()).collect(),
    };
    sc.base = Some(AssumptionBase::from_doc(&doc).map_err(|e| ModelError::Invalid(e.to_string()))?);
    Ok(sc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_targets(sc: &Scenario) {
        for r in sc.check().unwrap() {
            assert_eq!(r.holds, r.expected, "{}: {}", r.label, r.sequent);
        }
    }

    #[test]
    fn muddy_small() {
        for n in 1..=3 {
            for k in 1..=n {
                assert_targets(&muddy_scenario(n, k, Some(k + 1), DEFAULT_HORIZON).unwrap());
            }
        }
    }

    #[test]
    fn lying_three() {
        assert_targets(&lying_scenario(3, DEFAULT_HORIZON).unwrap());
    }

    #[test]
    fn mitm_targets_and_base() {
        let sc = mitm_scenario(DEFAULT_HORIZON).unwrap();
        assert_targets(&sc);
        let base = sc.base.as_ref().unwrap();
        assert!(base.failures(&sc.env).unwrap().is_empty());
    }

    #[test]
    fn bad_parameters() {
        assert!(muddy_scenario(2, 3, None, 8).is_err());
        assert!(lying_scenario(1, 8).is_err());
        assert!(muddy_scenario(5, 1, None, 8).is_err());
        assert!(lying_scenario(5, 8).is_err());
    }
}
