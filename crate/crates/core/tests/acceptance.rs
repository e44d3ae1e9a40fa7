//! One line per acceptance criterion. Criteria listed in `KNOWN_FAILURES`
//! are reported but do not fail the run.
mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use common::goals::{regression_signature, WELL_DEFINEDNESS};
use common::laws::{check_laws, sample_elements};
use common::soundness::soundness_suite;
use epiq_core::algebra::{AtomicSystem, EpistemicAlgebra};
use epiq_core::gen::{positive_introspection_witness, random_bms};
use epiq_core::kernel::{check_proof, AssumptionBase, BaseDoc, ProofDoc, ProofTree, RuleId};
use epiq_core::model::scenarios::{
    children_state, lying_scenario, mitm_scenario, muddy_scenario, Scenario, DEFAULT_HORIZON, MAX_CHILDREN,
};
use epiq_core::search::{prove_with_stats, SearchConfig};
use epiq_core::syntax::parse_sequent;
use rand::rngs::StdRng;
use rand::SeedableRng;

/// A compiled system where some precondition fails has a nonzero
/// proposition and action with zero update, so the fourth structural
/// condition cannot hold as stated.
const KNOWN_FAILURES: [&str; 1] = ["6b"];

const RANDOM_BMS: usize = 50;
const SOUNDNESS_SYSTEMS: usize = 12;
const SOUNDNESS_GOALS: usize = 1500;
const MIN_INSTANCES: usize = 200;
const REGRESSION_DEPTH: usize = 8;
const MITM_DEPTH: usize = 12;

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn run(id: &'static str, title: &str, limit: Duration, f: impl FnOnce() -> Result<String, String>) -> Outcome {
    let start = Instant::now();
    let result = f();
    let took = start.elapsed();
    let in_time = took <= limit;
    let (pass, detail) = match result {
        Ok(d) if in_time => (true, d),
        Ok(d) => (false, format!("{d}; over time limit")),
        Err(e) => (false, e),
    };
    // written to the handle directly so the lines survive output capture
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{:<4} {} {title}: {detail} [{:.2}s, limit {}s]",
        id,
        if pass { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs()
    )
    .unwrap();
    Outcome { id, pass, detail }
}

fn golden(file: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../golden").join(file)).unwrap()
}

fn load(proof: &str, base: &str) -> (ProofTree, AssumptionBase) {
    let base: BaseDoc = serde_json::from_str(&golden(base)).unwrap();
    let base = AssumptionBase::from_doc(&base).unwrap();
    let doc: ProofDoc = serde_json::from_str(&golden(proof)).unwrap();
    (ProofTree::from_doc(&doc, &base.signature).unwrap(), base)
}

fn golden_certificates() -> Result<String, String> {
    let mut mutants = 0;
    for (proof, base) in [("action_knowledge.proof.json", "empty.base.json"), ("mitm.proof.json", "mitm.base.json")] {
        let (tree, base) = load(proof, base);
        check_proof(&tree, &base).map_err(|v| format!("{proof} rejected: {v}"))?;
        let filler = parse_sequent("|-M top", &base.signature).unwrap();
        for path in tree.paths() {
            let mut t = tree.clone();
            let node = t.at_mut(&path).unwrap();
            let k = RuleId::ALL.iter().position(|r| *r == node.rule).unwrap();
            node.rule = RuleId::ALL[(k + 1) % RuleId::ALL.len()];
            match check_proof(&t, &base) {
                Err(v) if v.path == path => {}
                other => return Err(format!("{proof}: relabelled node {path:?} gave {other:?}")),
            }
            let mut t = tree.clone();
            t.at_mut(&path).unwrap().sequent = filler.clone();
            let parent = &path[..path.len().saturating_sub(1)];
            match check_proof(&t, &base) {
                Err(v) if v.path == path || v.path == parent => {}
                other => return Err(format!("{proof}: replaced sequent at {path:?} gave {other:?}")),
            }
            mutants += 2;
        }
    }
    Ok(format!("both certificates check, {mutants} single-node mutants rejected at the mutated node"))
}

fn mismatches(sc: &Scenario) -> Result<Vec<String>, String> {
    let results = sc.check().map_err(|e| e.to_string())?;
    Ok(results.into_iter().filter(|r| r.holds != r.expected).map(|r| r.sequent).collect())
}

fn muddy() -> Result<String, String> {
    let (mut positive, mut negative, mut kernel) = (0, 0, 0);
    for n in 1..=MAX_CHILDREN {
        for k in 1..=n {
            let sc = muddy_scenario(n, k, None, DEFAULT_HORIZON).map_err(|e| e.to_string())?;
            let bad = mismatches(&sc)?;
            if !bad.is_empty() {
                return Err(format!("n={n} k={k}: {}", bad.join(", ")));
            }
            positive += k;
            if k >= 2 {
                negative += k;
                let sys = &sc.compiled.system;
                let mut word = sc.compiled.action(0);
                for _ in 0..k - 2 {
                    word = sys.mult(&word, &sc.compiled.action(1));
                }
                let ker = sys.kernel_generator(&sc.compiled.action(1));
                for j in 1..=k {
                    let others: BTreeSet<usize> = (1..=k).filter(|&i| i != j).collect();
                    let s = sc.state_model.state_index(&children_state(&others)).unwrap();
                    if !sys.m_leq(&sys.update(&sc.compiled.state(s), &word), &ker) {
                        return Err(format!("n={n} k={k}: {} not annihilated", children_state(&others)));
                    }
                    kernel += 1;
                }
            }
        }
    }
    Ok(format!("{positive} positive targets hold, {negative} negative targets fail, {kernel} kernel memberships"))
}

fn lying() -> Result<String, String> {
    let mut checked = 0;
    for n in 2..=3 {
        let sc = lying_scenario(n, DEFAULT_HORIZON).map_err(|e| e.to_string())?;
        let sig = sc.signature();
        let holds = |text: &str| sc.env.holds(&parse_sequent(text, &sig).unwrap()).unwrap();
        for j in 2..=n {
            if !holds(&format!("s_1 |-M [q0 * qbar]boxM[C{j}](#D{j})")) {
                return Err(format!("n={n}: C{j} does not believe it is dirty"));
            }
            checked += 1;
        }
        if holds("s_1 |-M [q0 * qt]boxM[C2](#D2)") {
            return Err(format!("n={n}: truthful-round control holds"));
        }
        let bad = mismatches(&sc)?;
        if !bad.is_empty() {
            return Err(bad.join(", "));
        }
    }
    Ok(format!("{checked} false beliefs hold, truthful control fails for n = 2, 3"))
}

fn mitm() -> Result<String, String> {
    let sc = mitm_scenario(DEFAULT_HORIZON).map_err(|e| e.to_string())?;
    let base = sc.base.as_ref().unwrap();
    let goal = parse_sequent("s . (alpha | beta) |-M boxM[A](boxM[B](#P))", &base.signature).unwrap();
    if !sc.env.holds(&goal).unwrap() {
        return Err("target fails semantically".into());
    }
    let cfg = SearchConfig { max_depth: MITM_DEPTH, ..Default::default() };
    let (tree, stats) = prove_with_stats(&goal, base, &cfg);
    let tree = tree.ok_or_else(|| format!("no proof within depth {MITM_DEPTH}"))?;
    check_proof(&tree, base).map_err(|v| v.to_string())?;
    Ok(format!(
        "holds; proof of height {} found after {} expansions and re-checked",
        tree.height(),
        stats.expanded
    ))
}

fn soundness() -> Result<String, String> {
    let report = soundness_suite(11, SOUNDNESS_SYSTEMS, SOUNDNESS_GOALS);
    let failures = report.failures();
    if let Some(f) = failures.first() {
        return Err(format!("{} unsound or rejected instances, first {f}", failures.len()));
    }
    let min = report.min_instances();
    if report.systems < 10 || min < MIN_INSTANCES {
        return Err(format!("{} systems, {min} instances for the rarest rule", report.systems));
    }
    let total: usize = report.rules.values().map(|t| t.instances).sum();
    Ok(format!("{} rules, {} systems, {total} instances, at least {min} per rule", RuleId::ALL.len(), report.systems))
}

fn compiled_systems() -> Result<Vec<(String, std::sync::Arc<AtomicSystem>)>, String> {
    let mut out = Vec::new();
    for n in 1..=MAX_CHILDREN {
        let sc = muddy_scenario(n, 1, None, DEFAULT_HORIZON).map_err(|e| e.to_string())?;
        out.push((format!("muddy n={n}"), sc.compiled.system));
    }
    for n in 2..=MAX_CHILDREN {
        let sc = lying_scenario(n, DEFAULT_HORIZON).map_err(|e| e.to_string())?;
        out.push((format!("lying n={n}"), sc.compiled.system));
    }
    out.push(("mitm".into(), mitm_scenario(DEFAULT_HORIZON).map_err(|e| e.to_string())?.compiled.system));
    let mut rng = StdRng::seed_from_u64(6);
    for i in 0..RANDOM_BMS {
        let (_, _, c) = random_bms(&mut rng, 16);
        out.push((format!("random model {i}"), c.system));
    }
    Ok(out)
}

fn algebra_laws(systems: &[(String, std::sync::Arc<AtomicSystem>)]) -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(8);
    let mut pairs = 0usize;
    for (label, sys) in systems {
        let report = sys.validate();
        if !report.is_valid() {
            return Err(format!("{label}: {report:?}"));
        }
        let (ms, qs) = sample_elements(&mut rng, sys, 8);
        check_laws(sys.as_ref(), &ms, &qs).map_err(|e| format!("{label}: {e}"))?;
        pairs += ms.len() * ms.len() * qs.len();
        let t = sys.theorem1();
        if !(t.boolean_carriers && t.update_not_atomic.is_none() && t.mult_not_atomic.is_none()) {
            return Err(format!("{label}: {t:?}"));
        }
    }
    Ok(format!(
        "{} systems valid, adjunctions and kernels on {pairs} triples, structural conditions 1-3 hold",
        systems.len()
    ))
}

fn zero_updates(systems: &[(String, std::sync::Arc<AtomicSystem>)]) -> Result<String, String> {
    let failing: Vec<String> = systems
        .iter()
        .filter_map(|(label, sys)| sys.theorem1().zero_update.map(|(m, q)| format!("{label} ({m}·{q} = bot)")))
        .collect();
    if failing.is_empty() {
        Ok("no nonzero update is bottom".into())
    } else {
        Err(format!(
            "condition 4 fails on {} of {} systems, e.g. {}",
            failing.len(),
            systems.len(),
            failing[..failing.len().min(2)].join(", ")
        ))
    }
}

fn introspection() -> Result<String, String> {
    let (sys, agent, m) = positive_introspection_witness(3).ok_or("no witness on at most three states")?;
    let once = sys.box_m(agent, &m);
    let twice = sys.box_m(agent, &once);
    if sys.m_leq(&once, &twice) {
        return Err("witness does not refute introspection".into());
    }
    Ok(format!(
        "{} states, access {:?}: box {} = {} but box box = {}",
        sys.m_atoms().len(),
        sys.accessibility(agent),
        sys.m_label(&m),
        sys.m_label(&once),
        sys.m_label(&twice)
    ))
}

fn regressions() -> Result<String, String> {
    let sig = regression_signature();
    let mut heights = Vec::new();
    for (goal, axioms) in WELL_DEFINEDNESS {
        let base = AssumptionBase {
            signature: sig.clone(),
            axioms: axioms.iter().map(|a| parse_sequent(a, &sig).unwrap()).collect(),
        };
        let goal = parse_sequent(goal, &sig).unwrap();
        let cfg = SearchConfig { max_depth: REGRESSION_DEPTH, ..Default::default() };
        let tree = prove_with_stats(&goal, &base, &cfg).0.ok_or_else(|| format!("no proof of {goal}"))?;
        check_proof(&tree, &base).map_err(|v| v.to_string())?;
        heights.push(tree.height());
    }
    Ok(format!("{} goals proved within depth {REGRESSION_DEPTH}, heights {heights:?}", heights.len()))
}

#[test]
fn acceptance() {
    writeln!(std::io::stdout()).unwrap();
    let secs = Duration::from_secs;
    let mut outcomes = vec![
        run("1", "golden certificates", secs(1), golden_certificates),
        run("2", "muddy children", secs(30), muddy),
        run("3", "lying child", secs(5), lying),
        run("4", "man in the middle", secs(60), mitm),
        run("5", "rule soundness", secs(300), soundness),
    ];
    let systems = compiled_systems().unwrap();
    outcomes.push(run("6", "algebra laws", secs(120), || algebra_laws(&systems)));
    outcomes.push(run("6b", "no zero updates of nonzero atoms", secs(120), || zero_updates(&systems)));
    outcomes.push(run("7", "positive introspection witness", secs(10), introspection));
    outcomes.push(run("8", "search regressions", secs(30), regressions));
    let unexpected: Vec<String> = outcomes
        .iter()
        .filter(|o| o.pass == KNOWN_FAILURES.contains(&o.id))
        .map(|o| format!("{}: {}", o.id, o.detail))
        .collect();
    assert!(unexpected.is_empty(), "unexpected outcomes: {unexpected:#?}");
}
