//! Rule-by-rule soundness on random systems: every backward step of every
//! rule is replayed through the kernel and evaluated semantically.

use std::collections::BTreeMap;
use std::sync::Arc;

use epiq_core::algebra::Enumerate;
use epiq_core::gen::{chain_system, random_environment, random_m, random_q, random_sequent, relation_monoid_system};
use epiq_core::kernel::{check_step, AssumptionBase, RuleId};
use epiq_core::search::{backward_steps, CutPool};
use epiq_core::syntax::{name, Conclusion, Environment, Item, MFormula, QFormula, Sequent, Side, Signature};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

#[derive(Clone, Debug, Default)]
pub struct RuleTally {
    pub instances: usize,
    /// Instances whose premises all hold.
    pub live: usize,
    pub counterexamples: Vec<String>,
    pub kernel_rejections: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct SoundnessReport {
    pub systems: usize,
    pub rules: BTreeMap<RuleId, RuleTally>,
}

impl SoundnessReport {
    pub fn min_instances(&self) -> usize {
        RuleId::ALL.iter().map(|r| self.rules.get(r).map_or(0, |t| t.instances)).min().unwrap_or(0)
    }

    pub fn failures(&self) -> Vec<String> {
        self.rules
            .values()
            .flat_map(|t| t.counterexamples.iter().chain(&t.kernel_rejections).cloned())
            .collect()
    }
}

pub fn signature() -> Signature {
    Signature::new(["A", "B"], ["q", "r"], ["m", "n"], ["p"])
}

fn random_base<S: Enumerate, R: Rng>(rng: &mut R, env: &Environment<S>, sig: &Signature) -> AssumptionBase {
    let mut axioms = Vec::new();
    for _ in 0..400 {
        let side = if rng.gen_bool(0.5) { Side::Q } else { Side::M };
        let s = random_sequent(rng, sig, side, 1, 2);
        if env.holds(&s).unwrap() && !axioms.contains(&s) {
            axioms.push(s);
        }
        if axioms.len() == 6 {
            break;
        }
    }
    AssumptionBase { signature: sig.clone(), axioms }
}

/// Goals in the shapes that a few rules need and that uniform generation
/// rarely produces.
fn shaped_goal<R: Rng>(rng: &mut R, sig: &Signature) -> Sequent {
    let agent = name(if rng.gen_bool(0.5) { "A" } else { "B" });
    let q = random_q(rng, sig, 2);
    let m = random_m(rng, sig, 2);
    let side = if rng.gen_bool(0.5) { Side::Q } else { Side::M };
    let mut s = random_sequent(rng, sig, side, 2, 2);
    match rng.gen_range(0..8) {
        0 => match side {
            Side::Q => Sequent::q(vec![Item::Q(q.clone())], q),
            Side::M => Sequent::m(vec![Item::M(m.clone())], m),
        },
        1 => Sequent::q(Vec::new(), QFormula::One),
        2 => {
            s.context.push(Item::Agent(agent.clone()));
            s.conclusion = match side {
                Side::Q => Conclusion::Q(QFormula::AppQ(agent, Arc::new(q))),
                Side::M => Conclusion::M(MFormula::AppM(agent, Arc::new(m))),
            };
            s
        }
        3 => {
            let head = match side {
                Side::Q => Item::Q(QFormula::BoxQ(agent.clone(), Arc::new(q))),
                Side::M => Item::M(MFormula::BoxM(agent.clone(), Arc::new(m))),
            };
            s.context.splice(0..0, [head, Item::Agent(agent)]);
            s
        }
        4 => {
            let mut s = random_sequent(rng, sig, Side::M, 2, 2);
            s.context.push(Item::Q(q));
            s.conclusion = Conclusion::M(MFormula::fact("p"));
            s
        }
        5 => {
            let at = rng.gen_range(0..=s.context.len());
            s.context.insert(at, Item::Q(QFormula::One));
            s
        }
        6 => {
            let at = rng.gen_range(0..=s.context.len());
            s.context.insert(at, Item::Q(QFormula::or(q, random_q(rng, sig, 1))));
            s
        }
        _ => {
            let at = rng.gen_range(0..=s.context.len());
            s.context.insert(at, Item::Q(QFormula::lres(q, random_q(rng, sig, 1))));
            s.context.push(Item::Q(QFormula::rres(random_q(rng, sig, 1), random_q(rng, sig, 1))));
            s
        }
    }
}

fn run_system<S: Enumerate, R: Rng>(rng: &mut R, sys: Arc<S>, goals: usize, report: &mut SoundnessReport) {
    let sig = signature();
    let env = random_environment(rng, sys, &sig);
    let base = random_base(rng, &env, &sig);
    for _ in 0..goals {
        let goal: Sequent = match base.axioms.choose(rng) {
            Some(a) if rng.gen_bool(0.05) => a.clone(),
            _ if rng.gen_bool(0.3) => shaped_goal(rng, &sig),
            _ => {
                let side = if rng.gen_bool(0.5) { Side::Q } else { Side::M };
                random_sequent(rng, &sig, side, 2, 3)
            }
        };
        let holds = env.holds(&goal).unwrap();
        for rule in RuleId::ALL {
            let steps = backward_steps(&goal, rule, &base, CutPool::Subformulas);
            for (premises, axiom) in steps.choose_multiple(rng, 2) {
                let tally = report.rules.entry(rule).or_default();
                tally.instances += 1;
                let refs: Vec<&Sequent> = premises.iter().collect();
                if let Err(e) = check_step(rule, &goal, &refs, &base, *axiom) {
                    tally.kernel_rejections.push(format!("{rule}: {goal}: {e}"));
                }
                let axiom_ok = axiom.is_none_or(|i| env.holds(&base.axioms[i]).unwrap());
                if axiom_ok && premises.iter().all(|p| env.holds(p).unwrap()) {
                    tally.live += 1;
                    if !holds {
                        let ps: Vec<String> = premises.iter().map(|p| p.to_string()).collect();
                        tally.counterexamples.push(format!("{rule}: [{}] / {goal}", ps.join("; ")));
                    }
                }
            }
        }
    }
    report.systems += 1;
}

/// Alternates relation-monoid systems (at most 16 propositions and 8
/// actions) with chain systems.
pub fn soundness_suite(seed: u64, systems: usize, goals_per_system: usize) -> SoundnessReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = SoundnessReport::default();
    for i in 0..systems {
        if i % 2 == 0 {
            let sys = Arc::new(relation_monoid_system(&mut rng, 4, 2, 3));
            run_system(&mut rng, sys, goals_per_system, &mut report);
        } else {
            let sys = Arc::new(chain_system(&mut rng, 8, 2));
            run_system(&mut rng, sys, goals_per_system, &mut report);
        }
    }
    report
}
