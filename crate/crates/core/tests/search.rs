use std::time::Instant;

mod common;

use common::goals::{regression_signature as sig, WELL_DEFINEDNESS};
use epiq_core::kernel::{check_proof, AssumptionBase, ProofTree};
use epiq_core::search::{prove, prove_with_stats, CutPool, SearchConfig};
use epiq_core::syntax::{parse_sequent, Signature};

fn base(axioms: &[&str]) -> AssumptionBase {
    AssumptionBase {
        signature: sig(),
        axioms: axioms.iter().map(|a| parse_sequent(a, &sig()).unwrap()).collect(),
    }
}

fn found_within(goal: &str, axioms: &[&str], depth: usize) -> ProofTree {
    let base = base(axioms);
    let goal = parse_sequent(goal, &sig()).unwrap();
    let cfg = SearchConfig { max_depth: depth, ..Default::default() };
    let t = prove(&goal, &base, &cfg).unwrap_or_else(|| panic!("no proof of {goal} within {depth}"));
    assert_eq!(t.sequent, goal);
    check_proof(&t, &base).unwrap();
    assert!(t.height() <= depth);
    t
}

#[test]
fn well_definedness_derivations_within_depth_eight() {
    for (goal, axioms) in WELL_DEFINEDNESS {
        found_within(goal, axioms, 8);
    }
}

#[test]
fn action_knowledge_within_depth_eight() {
    let sig = Signature::new(["A"], ["q"], ["m"], []);
    let goal = parse_sequent("boxM[A]([fQ[A](q)]m) |-M [q]boxM[A](m)", &sig).unwrap();
    let base = AssumptionBase::empty(sig);
    let cfg = SearchConfig { max_depth: 8, ..Default::default() };
    let t = prove(&goal, &base, &cfg).unwrap();
    check_proof(&t, &base).unwrap();
}

#[test]
fn search_is_deterministic() {
    for (goal, axioms) in WELL_DEFINEDNESS {
        let a = serde_json::to_string(&found_within(goal, axioms, 8).to_doc()).unwrap();
        let b = serde_json::to_string(&found_within(goal, axioms, 8).to_doc()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn cut_free_search_misses_what_needs_a_cut() {
    let base = base(&["q1 |-Q q2", "q2 |-Q q"]);
    let goal = parse_sequent("q1 |-Q q", &sig()).unwrap();
    let cfg = SearchConfig { max_depth: 6, cut_pool: CutPool::None, ..Default::default() };
    assert!(prove(&goal, &base, &cfg).is_none());
    let cfg = SearchConfig { max_depth: 6, ..Default::default() };
    let t = prove(&goal, &base, &cfg).unwrap();
    check_proof(&t, &base).unwrap();
}

#[test]
fn false_goals_are_not_proved() {
    let start = Instant::now();
    for goal in ["q1 |-Q q2", "fQ[A](q1) |-Q q1", "m |-M boxM[A](m)", "boxM[A](m) |-M boxM[A](boxM[A](m))"] {
        let goal = parse_sequent(goal, &sig()).unwrap();
        let (t, stats) = prove_with_stats(&goal, &base(&[]), &SearchConfig { max_depth: 6, ..Default::default() });
        assert!(t.is_none(), "{goal}");
        assert_eq!(stats.depth, 6);
    }
    assert!(start.elapsed().as_secs() < 60);
}
