//! Random systems, models, environments and formulas for testing.
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{AgentId, AtomSet, AtomicSystem, EpistemicAlgebra, EpistemicSystem, Enumerate, FiniteModule, FiniteQuantale};
use crate::lattice::{FiniteLattice, LatticeMap};
use crate::model::{bms_to_system, ActionModel, Compiled, KripkeStateModel, PreFormula};
use crate::syntax::{Environment, Item, MFormula, Name, QFormula, Sequent, Side, Signature};

type PartialFn = Vec<Option<usize>>;

fn agent_names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
}

fn bits(n: usize, it: impl IntoIterator<Item = usize>) -> AtomSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.extend(it);
    s
}

/// `f` then `g`.
fn compose(f: &PartialFn, g: &PartialFn) -> PartialFn {
    f.iter().map(|x| x.and_then(|y| g[y])).collect()
}

fn random_partial_fn<R: Rng>(rng: &mut R, n: usize) -> PartialFn {
    match rng.gen_range(0..3) {
        // a test: the identity on a subset
        0 => (0..n).map(|x| rng.gen_bool(0.5).then_some(x)).collect(),
        // a constant map on a subset
        1 => {
            let c = rng.gen_range(0..n);
            (0..n).map(|_| rng.gen_bool(0.7).then_some(c)).collect()
        }
        _ => (0..n).map(|_| rng.gen_bool(0.8).then(|| rng.gen_range(0..n))).collect(),
    }
}

/// The monoid generated by `gens`, identity first, or `None` once it grows
/// past `limit` elements.
fn monoid_closure(n: usize, gens: &[PartialFn], limit: usize) -> Option<Vec<PartialFn>> {
    let mut elems: Vec<PartialFn> = vec![(0..n).map(Some).collect()];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h = compose(&elems[i], g);
            if !elems.contains(&h) {
                if elems.len() == limit {
                    return None;
                }
                elems.push(h);
            }
        }
        i += 1;
    }
    Some(elems)
}

/// A system of partial functions acting on states, with random
/// accessibility on states and random appearance maps on actions, pruned
/// until the lax conditions hold. At most `max_states` proposition atoms and
/// `max_actions` action atoms.
pub fn relation_monoid_system<R: Rng>(rng: &mut R, max_states: usize, agents: usize, max_actions: usize) -> AtomicSystem {
    assert!(max_states >= 1 && max_actions >= 1);
    loop {
        let n = rng.gen_range(1..=max_states);
        let gens: Vec<PartialFn> = (0..rng.gen_range(1..=2)).map(|_| random_partial_fn(rng, n)).collect();
        let Some(monoid) = monoid_closure(n, &gens, max_actions) else { continue };
        if let Some(sys) = repair(rng, n, &monoid, agents) {
            return sys;
        }
    }
}

fn repair<R: Rng>(rng: &mut R, n: usize, monoid: &[PartialFn], agents: usize) -> Option<AtomicSystem> {
    let k = monoid.len();
    let index = |f: &PartialFn| monoid.iter().position(|g| g == f).expect("closed under composition");
    let mult: Vec<Vec<usize>> = (0..k).map(|a| (0..k).map(|b| index(&compose(&monoid[a], &monoid[b]))).collect()).collect();
    let mut app_m = Vec::new();
    let mut app_q = Vec::new();
    for _ in 0..agents {
        let mut rel: Vec<BTreeSet<usize>> =
            (0..n).map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect()).collect();
        let mut app: Vec<BTreeSet<usize>> = (0..k)
            .map(|a| (0..k).filter(|&b| b == a && rng.gen_bool(0.8) || rng.gen_bool(0.25)).collect())
            .collect();
        app[0].insert(0);
        loop {
            let mut changed = false;
            for a in 0..k {
                for b in 0..k {
                    let allowed: BTreeSet<usize> =
                        app[a].iter().flat_map(|&c| app[b].iter().map(|&d| mult[c][d]).collect::<Vec<_>>()).collect();
                    let ab = mult[a][b];
                    let kept: BTreeSet<usize> = app[ab].intersection(&allowed).copied().collect();
                    changed |= kept.len() != app[ab].len();
                    app[ab] = kept;
                }
            }
            for x in 0..n {
                for (a, f) in monoid.iter().enumerate() {
                    let Some(y) = f[x] else { continue };
                    let allowed: BTreeSet<usize> = rel[x]
                        .iter()
                        .flat_map(|&z| app[a].iter().filter_map(|&c| monoid[c][z]).collect::<Vec<_>>())
                        .collect();
                    let kept: BTreeSet<usize> = rel[y].intersection(&allowed).copied().collect();
                    changed |= kept.len() != rel[y].len();
                    rel[y] = kept;
                }
            }
            if !changed {
                break;
            }
        }
        if !app[0].contains(&0) {
            return None;
        }
        app_m.push(rel.into_iter().map(|r| bits(n, r)).collect());
        app_q.push(app.into_iter().map(|r| bits(k, r)).collect());
    }
    let m_atoms = (0..n).map(|x| format!("x{x}")).collect();
    let q_atoms = (0..k).map(|a| if a == 0 { "1".to_owned() } else { format!("g{a}") }).collect();
    let act = (0..n).map(|x| monoid.iter().map(|f| bits(n, f[x])).collect()).collect();
    let mult = mult.iter().map(|row| row.iter().map(|&c| bits(k, [c])).collect()).collect();
    let sys = AtomicSystem::new(
        m_atoms,
        q_atoms,
        agent_names(agents).into_iter().map(AgentId::new).collect(),
        act,
        mult,
        bits(k, [0]),
        app_m,
        app_q,
    )
    .ok()?;
    sys.validate().is_valid().then_some(sys)
}

/// A chain of propositions acted on by the three-element chain of actions
/// `0 < a < 1` with meet as composition: `a` caps a proposition at a random
/// threshold. Appearance maps on propositions are random monotone maps
/// fixing bottom and respecting the threshold.
pub fn chain_system<R: Rng>(rng: &mut R, max_len: usize, agents: usize) -> EpistemicSystem {
    assert!(max_len >= 2);
    let n = rng.gen_range(2..=max_len);
    let mlat = Arc::new(FiniteLattice::chain(n).expect("chain"));
    let qlat = Arc::new(
        FiniteLattice::chain(3).expect("chain").with_labels(["0", "a", "1"].map(String::from).to_vec()).expect("labels"),
    );
    let cap = rng.gen_range(0..n);
    let quantale = Arc::new(FiniteQuantale::from_fn(qlat.clone(), 2, |a, b| a.min(b)).expect("quantale"));
    let module = FiniteModule::from_fn(mlat.clone(), quantale, |m, q| match q {
        0 => 0,
        1 => m.min(cap),
        _ => m,
    })
    .expect("module");
    let mut app_m = Vec::new();
    for _ in 0..agents {
        let mut table = vec![0; n];
        for m in 1..n {
            let hi = if m <= cap { cap } else { n - 1 };
            let lo = table[m - 1];
            table[m] = rng.gen_range(lo..=hi.max(lo));
        }
        app_m.push(LatticeMap::new(mlat.clone(), mlat.clone(), table).expect("map"));
    }
    let app_q = (0..agents).map(|_| LatticeMap::identity(qlat.clone())).collect();
    let agents = agent_names(agents).into_iter().map(AgentId::new).collect();
    EpistemicSystem::new(module, agents, app_m, app_q).expect("system")
}

/// A system, agent and proposition with `□m ≰ □□m`, found by trying every
/// accessibility relation on up to `max_states` states with only the
/// trivial action.
pub fn positive_introspection_witness(max_states: usize) -> Option<(AtomicSystem, usize, AtomSet)> {
    for n in 1..=max_states {
        for rel in 0u64..1 << (n * n) {
            let app: Vec<AtomSet> = (0..n).map(|x| bits(n, (0..n).filter(|y| rel >> (x * n + y) & 1 == 1))).collect();
            let sys = AtomicSystem::new(
                (0..n).map(|x| format!("x{x}")).collect(),
                vec!["1".into()],
                vec![AgentId::new("A")],
                (0..n).map(|x| vec![bits(n, [x])]).collect(),
                vec![vec![bits(1, [0])]],
                bits(1, [0]),
                vec![app],
                vec![vec![bits(1, [0])]],
            )
            .expect("shapes");
            for m in sys.m_elements() {
                let once = sys.box_m(0, &m);
                if !sys.m_leq(&once, &sys.box_m(0, &once)) {
                    return Some((sys, 0, m));
                }
            }
        }
    }
    None
}

fn random_pre<R: Rng>(rng: &mut R, sm: &KripkeStateModel, depth: usize) -> PreFormula {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    match rng.gen_range(0..if leaf { 3 } else { 6 }) {
        0 => PreFormula::True,
        1 => PreFormula::States(sm.states.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()),
        2 => PreFormula::fact("p"),
        3 => PreFormula::not(random_pre(rng, sm, depth - 1)),
        4 => PreFormula::Or(vec![random_pre(rng, sm, depth - 1), random_pre(rng, sm, depth - 1)]),
        _ => PreFormula::knows(sm.agents.choose(rng).expect("agent"), random_pre(rng, sm, depth - 1)),
    }
}

fn random_access<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|_| rng.gen_bool(0.5)).collect()
}

/// A small random Kripke state model and action model with fact `p`,
/// compiled. Draws again when the closure exceeds `horizon`.
pub fn random_bms<R: Rng>(rng: &mut R, horizon: usize) -> (KripkeStateModel, ActionModel, Compiled) {
    loop {
        let ns = rng.gen_range(2..=3);
        let agents = agent_names(rng.gen_range(1..=2));
        let states: Vec<String> = (0..ns).map(|i| format!("s{i}")).collect();
        let access = agents.iter().map(|_| random_access(rng, ns)).collect();
        let p: BTreeSet<usize> = (0..ns).filter(|_| rng.gen_bool(0.5)).collect();
        let sm = KripkeStateModel::new(states, agents.clone(), access, BTreeMap::from([("p".to_owned(), p)]))
            .expect("state model");
        let na = rng.gen_range(1..=2);
        let actions = (0..na).map(|i| format!("a{i}")).collect();
        let access = agents.iter().map(|_| random_access(rng, na)).collect();
        let pre = (0..na).map(|_| random_pre(rng, &sm, 2)).collect();
        let am = ActionModel::new(&sm, actions, access, pre).expect("action model");
        if let Ok(c) = bms_to_system(&sm, &am, horizon) {
            return (sm, am, c);
        }
    }
}

/// Values drawn uniformly from the carriers; facts only take stable values.
pub fn random_environment<S: Enumerate, R: Rng>(rng: &mut R, system: Arc<S>, sig: &Signature) -> Environment<S> {
    let ms = system.m_elements();
    let qs = system.q_elements();
    let stable: Vec<S::M> = ms.iter().filter(|m| system.is_stable(m)).cloned().collect();
    let pick_m = |rng: &mut R| ms.choose(rng).expect("nonempty").clone();
    let qvals = sig.qvars.iter().map(|v| (v.clone(), qs.choose(rng).expect("nonempty").clone())).collect();
    let mvals = sig.mvars.iter().map(|v| (v.clone(), pick_m(rng))).collect();
    let factvals = sig.facts.iter().map(|v| (v.clone(), stable.choose(rng).expect("bottom is stable").clone())).collect();
    Environment::new(system, qvals, mvals, factvals).expect("stable facts")
}

fn pick<R: Rng>(rng: &mut R, names: &BTreeSet<Name>) -> Option<Name> {
    names.iter().nth(rng.gen_range(0..names.len().max(1))).cloned()
}

/// A random action formula of height at most `depth + 1`.
pub fn random_q<R: Rng>(rng: &mut R, sig: &Signature, depth: usize) -> QFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match (rng.gen_range(0..6), pick(rng, &sig.qvars)) {
            (0, _) => QFormula::Top,
            (1, _) => QFormula::Bot,
            (2, _) => QFormula::One,
            (_, Some(v)) => QFormula::Var(v),
            (_, None) => QFormula::One,
        };
    }
    let sub = |rng: &mut R| Arc::new(random_q(rng, sig, depth - 1));
    let agent = pick(rng, &sig.agents);
    match (rng.gen_range(0..7), agent) {
        (0, _) => QFormula::Seq(sub(rng), sub(rng)),
        (1, _) => QFormula::LRes(sub(rng), sub(rng)),
        (2, _) => QFormula::RRes(sub(rng), sub(rng)),
        (3, _) => QFormula::Or(sub(rng), sub(rng)),
        (4, _) => QFormula::And(sub(rng), sub(rng)),
        (5, Some(a)) => QFormula::AppQ(a, sub(rng)),
        (_, Some(a)) => QFormula::BoxQ(a, sub(rng)),
        (_, None) => QFormula::Seq(sub(rng), sub(rng)),
    }
}

/// A random proposition formula of height at most `depth + 1`.
pub fn random_m<R: Rng>(rng: &mut R, sig: &Signature, depth: usize) -> MFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match (rng.gen_range(0..6), pick(rng, &sig.mvars), pick(rng, &sig.facts)) {
            (0, _, _) => MFormula::Top,
            (1, _, _) => MFormula::Bot,
            (2, _, Some(p)) => MFormula::Fact(p),
            (_, Some(v), _) => MFormula::Var(v),
            _ => MFormula::Top,
        };
    }
    let sub = |rng: &mut R| Arc::new(random_m(rng, sig, depth - 1));
    let subq = |rng: &mut R| Arc::new(random_q(rng, sig, depth - 1));
    let agent = pick(rng, &sig.agents);
    match (rng.gen_range(0..6), agent) {
        (0, _) => MFormula::And(sub(rng), sub(rng)),
        (1, _) => MFormula::Or(sub(rng), sub(rng)),
        (2, _) => MFormula::DynBox(subq(rng), sub(rng)),
        (3, _) => MFormula::Update(sub(rng), subq(rng)),
        (4, Some(a)) => MFormula::AppM(a, sub(rng)),
        (_, Some(a)) => MFormula::BoxM(a, sub(rng)),
        (_, None) => MFormula::Update(sub(rng), subq(rng)),
    }
}

/// A random well-formed sequent with up to `max_context` items. Proposition
/// contexts usually start with a proposition.
pub fn random_sequent<R: Rng>(rng: &mut R, sig: &Signature, side: Side, depth: usize, max_context: usize) -> Sequent {
    let len = rng.gen_range(0..=max_context);
    let mut context = Vec::with_capacity(len);
    for i in 0..len {
        let agent = pick(rng, &sig.agents).filter(|_| rng.gen_bool(0.25));
        let item = match (side, agent) {
            (_, Some(a)) if i > 0 => Item::Agent(a),
            (Side::M, _) if i == 0 || rng.gen_bool(0.3) => Item::M(random_m(rng, sig, depth)),
            _ => Item::Q(random_q(rng, sig, depth)),
        };
        context.push(item);
    }
    match side {
        Side::Q => Sequent::q(context, random_q(rng, sig, depth)),
        Side::M => Sequent::m(context, random_m(rng, sig, depth)),
    }
}
