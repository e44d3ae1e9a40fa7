mod common;

use common::soundness::soundness_suite;
use epiq_core::kernel::RuleId;

#[test]
fn every_rule_preserves_truth() {
    let report = soundness_suite(11, 12, 1500);
    assert!(report.failures().is_empty(), "{:#?}", report.failures());
    for rule in RuleId::ALL {
        let t = &report.rules.get(&rule).cloned().unwrap_or_default();
        println!("{rule:>10} {:>6} instances {:>6} with true premises", t.instances, t.live);
    }
    assert!(report.min_instances() >= 200);
}

/// The right rules for both boxes and the dynamic box are invertible.
#[test]
fn box_right_rules_hold_in_both_directions() {
    use epiq_core::gen::{random_environment, random_m, random_q, random_sequent, relation_monoid_system};
    use epiq_core::syntax::{name, Conclusion, Item, MFormula, QFormula, Side};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    let sig = common::soundness::signature();
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..20 {
        let sys = Arc::new(relation_monoid_system(&mut rng, 4, 2, 3));
        let env = random_environment(&mut rng, sys, &sig);
        for _ in 0..200 {
            let agent = name(if rng.gen_bool(0.5) { "A" } else { "B" });
            let side = if rng.gen_bool(0.5) { Side::Q } else { Side::M };
            let s = random_sequent(&mut rng, &sig, side, 2, 3);
            let mut premise = s.clone();
            premise.context.push(Item::Agent(agent.clone()));
            let mut conclusion = s.clone();
            conclusion.conclusion = match &s.conclusion {
                Conclusion::Q(q) => Conclusion::Q(QFormula::BoxQ(agent.clone(), Arc::new(q.clone()))),
                Conclusion::M(m) => Conclusion::M(MFormula::BoxM(agent.clone(), Arc::new(m.clone()))),
            };
            assert_eq!(env.holds(&premise).unwrap(), env.holds(&conclusion).unwrap(), "{conclusion}");
            if side == Side::M {
                let q = random_q(&mut rng, &sig, 2);
                let m = random_m(&mut rng, &sig, 2);
                let mut premise = s.clone();
                premise.context.push(Item::Q(q.clone()));
                premise.conclusion = Conclusion::M(m.clone());
                let mut conclusion = s.clone();
                conclusion.conclusion = Conclusion::M(MFormula::dynbox(q, m));
                assert_eq!(env.holds(&premise).unwrap(), env.holds(&conclusion).unwrap(), "{conclusion}");
            }
        }
    }
}

/// Checked certificates hold wherever their base holds.
#[test]
fn golden_certificates_hold_in_models_of_their_base() {
    use epiq_core::gen::{random_environment, relation_monoid_system};
    use epiq_core::kernel::{check_proof, AssumptionBase, BaseDoc, ProofDoc, ProofTree};
    use epiq_core::model::scenarios::{mitm_scenario, DEFAULT_HORIZON};
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::sync::Arc;

    let golden = |f: &str| {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../golden").join(f);
        std::fs::read_to_string(path).unwrap()
    };
    let load = |proof: &str, base: &str| {
        let base: BaseDoc = serde_json::from_str(&golden(base)).unwrap();
        let base = AssumptionBase::from_doc(&base).unwrap();
        let doc: ProofDoc = serde_json::from_str(&golden(proof)).unwrap();
        let tree = ProofTree::from_doc(&doc, &base.signature).unwrap();
        check_proof(&tree, &base).unwrap();
        (tree, base)
    };

    let (mitm, base) = load("mitm.proof.json", "mitm.base.json");
    let sc = mitm_scenario(DEFAULT_HORIZON).unwrap();
    assert!(base.failures(&sc.env).unwrap().is_empty());
    assert!(sc.env.holds(&mitm.sequent).unwrap());

    let (ak, base) = load("action_knowledge.proof.json", "empty.base.json");
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..200 {
        let sys = Arc::new(relation_monoid_system(&mut rng, 4, 1, 3));
        let env = random_environment(&mut rng, sys, &base.signature);
        assert!(env.holds(&ak.sequent).unwrap());
    }
}
