use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::kripke::{ActionModel, KripkeStateModel, ModelError, PreFormula};
use crate::algebra::{AgentId, AtomSet, AtomicSystem};
use crate::syntax::{name, Environment};

/// The epistemic system read off a state model and an action model, with
/// the bookkeeping needed to name its atoms.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub system: Arc<AtomicSystem>,
    /// Base state of each module atom. Atoms `0..n` are the original states.
    pub state_base: Vec<usize>,
    /// Letters applied to the base state to reach each module atom.
    pub state_words: Vec<Vec<usize>>,
    /// Representative word of each quantale atom. Atom 0 is the empty word.
    pub words: Vec<Vec<usize>>,
    /// Quantale atom of each single action.
    pub action_atom: Vec<usize>,
    pub state_rounds: usize,
    pub word_rounds: usize,
}

/// Coarsest partition refining `initial` that is stable under successors.
/// Class ids are numbered by first occurrence.
fn refine(initial: &[usize], succ: &[Vec<Vec<usize>>]) -> (Vec<usize>, usize) {
    let mut color = initial.to_vec();
    let mut count = usize::MAX;
    loop {
        let mut ids: HashMap<(usize, Vec<Vec<usize>>), usize> = HashMap::new();
        let next: Vec<usize> = (0..color.len())
            .map(|i| {
                let sig: Vec<Vec<usize>> = succ[i]
                    .iter()
                    .map(|ss| {
                        let mut c: Vec<usize> = ss.iter().map(|&j| color[j]).collect();
                        c.sort_unstable();
                        c.dedup();
                        c
                    })
                    .collect();
                let n = ids.len();
                *ids.entry((color[i], sig)).or_insert(n)
            })
            .collect();
        let n = ids.len();
        color = next;
        if n == count {
            return (color, n);
        }
        count = n;
    }
}

/// Numbers distinct keys by first occurrence.
fn number<K: std::hash::Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Vec<usize> {
    let mut ids = HashMap::new();
    keys.into_iter()
        .map(|k| {
            let n = ids.len();
            *ids.entry(k).or_insert(n)
        })
        .collect()
}

struct Node<T> {
    label: T,
    word: Vec<usize>,
    succ: Vec<Vec<usize>>,
}

/// Extends `nodes` by one letter until the bisimulation quotient stops
/// growing. Returns the closed nodes, `step[node][letter]` and the rounds used.
fn close<T: Clone>(
    mut nodes: Vec<Node<T>>,
    letters: usize,
    horizon: usize,
    what: &'static str,
    color: impl Fn(&T) -> usize,
    mut extend: impl FnMut(&[Node<T>], usize, usize) -> Option<T>,
    step_succ: impl Fn(&[Node<T>], &[Vec<Option<usize>>], usize, usize, usize) -> Vec<usize>,
) -> Result<(Vec<Node<T>>, Vec<Vec<Option<usize>>>, usize), ModelError> {
    for round in 1..=horizon {
        let n = nodes.len();
        let mut index = vec![vec![None; letters]; n];
        let mut product = Vec::new();
        for x in 0..n {
            for l in 0..letters {
                if let Some(label) = extend(&nodes, x, l) {
                    index[x][l] = Some(n + product.len());
                    product.push((x, l, label));
                }
            }
        }
        let agents = nodes.first().map_or(0, |nd| nd.succ.len());
        let mut succ: Vec<Vec<Vec<usize>>> = nodes.iter().map(|nd| nd.succ.clone()).collect();
        for &(x, l, _) in &product {
            succ.push((0..agents).map(|a| step_succ(&nodes, &index, x, l, a)).collect());
        }
        let initial = number(
            nodes.iter().map(|nd| color(&nd.label)).chain(product.iter().map(|(_, _, t)| color(t))),
        );
        let (classes, count) = refine(&initial, &succ);
        debug_assert!((0..n).all(|i| classes[i] == i));
        let step: Vec<Vec<Option<usize>>> =
            index.iter().map(|row| row.iter().map(|p| p.map(|i| classes[i])).collect()).collect();
        if count == n {
            return Ok((nodes, step, round));
        }
        let mut next: Vec<Option<Node<T>>> = (0..count).map(|_| None).collect();
        for (i, &c) in classes.iter().enumerate() {
            if next[c].is_some() {
                continue;
            }
            let (label, word) = if i < n {
                (nodes[i].label.clone(), nodes[i].word.clone())
            } else {
                let (x, l, t) = &product[i - n];
                let mut w = nodes[*x].word.clone();
                w.push(*l);
                (t.clone(), w)
            };
            let mut s: Vec<Vec<usize>> = succ[i]
                .iter()
                .map(|ss| ss.iter().map(|&j| classes[j]).collect())
                .collect();
            for v in &mut s {
                v.sort_unstable();
                v.dedup();
            }
            next[c] = Some(Node { label, word, succ: s });
        }
        nodes = next.into_iter().map(|n| n.expect("every class has a member")).collect();
    }
    Err(ModelError::HorizonExceeded { what, horizon })
}

/// Truth set of `f` over nodes labelled by base state.
fn extension(f: &PreFormula, sm: &KripkeStateModel, nodes: &[Node<usize>]) -> Vec<bool> {
    match f {
        PreFormula::True => vec![true; nodes.len()],
        PreFormula::False => vec![false; nodes.len()],
        PreFormula::Fact(p) => {
            let set = &sm.valuation[p];
            nodes.iter().map(|n| set.contains(&n.label)).collect()
        }
        PreFormula::States(ss) => {
            let idx: Vec<usize> = ss.iter().filter_map(|s| sm.state_index(s).ok()).collect();
            nodes.iter().map(|n| idx.contains(&n.label)).collect()
        }
        PreFormula::Not(g) => extension(g, sm, nodes).into_iter().map(|b| !b).collect(),
        PreFormula::And(gs) => gs.iter().fold(vec![true; nodes.len()], |acc, g| {
            acc.iter().zip(extension(g, sm, nodes)).map(|(a, b)| *a && b).collect()
        }),
        PreFormula::Or(gs) => gs.iter().fold(vec![false; nodes.len()], |acc, g| {
            acc.iter().zip(extension(g, sm, nodes)).map(|(a, b)| *a || b).collect()
        }),
        PreFormula::Knows(a, g) => {
            let ai = sm.agent_index(a).expect("checked when the action model was built");
            let inner = extension(g, sm, nodes);
            nodes.iter().map(|n| n.succ[ai].iter().all(|&j| inner[j])).collect()
        }
    }
}

/// Compiles the product update closure of `sm` under `am` into an atomic
/// system. Each closure is given at most `horizon` extension rounds.
pub fn bms_to_system(sm: &KripkeStateModel, am: &ActionModel, horizon: usize) -> Result<Compiled, ModelError> {
    let agents = sm.agents.len();
    let letters = am.actions.len();
    let state_succ = sm.successors();
    let action_succ = am.successors();

    let originals: Vec<Node<usize>> = (0..sm.states.len())
        .map(|s| Node { label: s, word: Vec::new(), succ: (0..agents).map(|a| state_succ[a][s].clone()).collect() })
        .collect();
    let mut pre_cache: Option<(usize, Vec<Vec<bool>>)> = None;
    let (states, trans, state_rounds) = close(
        originals,
        letters,
        horizon,
        "states",
        |&b| b,
        |nodes, x, l| {
            if pre_cache.as_ref().is_none_or(|(n, _)| *n != nodes.len()) {
                let ext = am.pre.iter().map(|f| extension(f, sm, nodes)).collect();
                pre_cache = Some((nodes.len(), ext));
            }
            let ext = &pre_cache.as_ref().unwrap().1;
            ext[l][x].then_some(nodes[x].label)
        },
        |nodes, index, x, l, a| {
            let mut out = Vec::new();
            for &y in &nodes[x].succ[a] {
                for &t in &action_succ[a][l] {
                    if let Some(j) = index[y][t] {
                        out.push(j);
                    }
                }
            }
            out
        },
    )?;
    let ns = states.len();

    let eps = Node { label: (0..ns).map(Some).collect::<Vec<Option<usize>>>(), word: Vec::new(), succ: vec![vec![0]; agents] };
    let endo_ids: std::cell::RefCell<HashMap<Vec<Option<usize>>, usize>> = Default::default();
    let (words, word_step, word_rounds) = close(
        vec![eps],
        letters,
        horizon,
        "actions",
        |e| {
            let mut ids = endo_ids.borrow_mut();
            let n = ids.len();
            *ids.entry(e.clone()).or_insert(n)
        },
        |nodes, w, l| Some(nodes[w].label.iter().map(|x| x.and_then(|y| trans[y][l])).collect()),
        |nodes, index, w, l, a| {
            let mut out = Vec::new();
            for &v in &nodes[w].succ[a] {
                for &t in &action_succ[a][l] {
                    if let Some(j) = index[v][t] {
                        out.push(j);
                    }
                }
            }
            out
        },
    )?;
    let nw = words.len();

    let set = |n: usize, items: &mut dyn Iterator<Item = usize>| {
        let mut s = AtomSet::with_capacity(n);
        items.for_each(|i| s.insert(i));
        s
    };
    let act: Vec<Vec<AtomSet>> = (0..ns)
        .map(|x| {
            (0..nw)
                .map(|w| {
                    let end = words[w].word.iter().try_fold(x, |y, &l| trans[y][l]);
                    set(ns, &mut end.into_iter())
                })
                .collect()
        })
        .collect();
    let mult: Vec<Vec<AtomSet>> = (0..nw)
        .map(|w| {
            (0..nw)
                .map(|v| {
                    let end = words[v].word.iter().try_fold(w, |u, &l| word_step[u][l]);
                    set(nw, &mut end.into_iter())
                })
                .collect()
        })
        .collect();
    let unit = set(nw, &mut std::iter::once(0));
    let app_m = (0..agents)
        .map(|a| (0..ns).map(|x| set(ns, &mut states[x].succ[a].iter().copied())).collect())
        .collect();
    let app_q = (0..agents)
        .map(|a| (0..nw).map(|w| set(nw, &mut words[w].succ[a].iter().copied())).collect())
        .collect();

    let m_names = states
        .iter()
        .map(|n| {
            let mut s = sm.states[n.label].clone();
            for &l in &n.word {
                s.push('.');
                s.push_str(&am.actions[l]);
            }
            s
        })
        .collect();
    let q_names = words
        .iter()
        .map(|n| {
            if n.word.is_empty() {
                "1".to_owned()
            } else {
                n.word.iter().map(|&l| am.actions[l].as_str()).collect::<Vec<_>>().join("*")
            }
        })
        .collect();
    let agent_ids = sm.agents.iter().map(|a| AgentId::new(a.as_str())).collect();
    let system = AtomicSystem::new(m_names, q_names, agent_ids, act, mult, unit, app_m, app_q)
        .map_err(|e| ModelError::Invalid(e.to_string()))?;
    let action_atom = (0..letters).map(|l| word_step[0][l].expect("words always extend")).collect();
    Ok(Compiled {
        system: Arc::new(system),
        state_base: states.iter().map(|n| n.label).collect(),
        state_words: states.iter().map(|n| n.word.clone()).collect(),
        words: words.into_iter().map(|n| n.word).collect(),
        action_atom,
        state_rounds,
        word_rounds,
    })
}

impl Compiled {
    pub fn state_count(&self) -> usize {
        self.state_base.len()
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    /// The module atom of an original state.
    pub fn state(&self, s: usize) -> AtomSet {
        self.system.m_set([s])
    }

    /// Every module atom whose base state is listed.
    pub fn base_set(&self, states: impl IntoIterator<Item = usize>) -> AtomSet {
        let states: Vec<usize> = states.into_iter().collect();
        self.system.m_set((0..self.state_count()).filter(|i| states.contains(&self.state_base[*i])))
    }

    pub fn action(&self, a: usize) -> AtomSet {
        self.system.q_set([self.action_atom[a]])
    }

    /// States as propositional variables, actions as action variables and
    /// the valuation as facts.
    pub fn environment(&self, sm: &KripkeStateModel, am: &ActionModel) -> Result<Environment<AtomicSystem>, ModelError> {
        let mvals = sm.states.iter().enumerate().map(|(i, s)| (name(s), self.state(i))).collect();
        let qvals = am.actions.iter().enumerate().map(|(i, a)| (name(a), self.action(i))).collect();
        let factvals: BTreeMap<_, _> = sm
            .valuation
            .iter()
            .map(|(p, ss)| (name(p), self.base_set(ss.iter().copied())))
            .collect();
        Environment::new(self.system.clone(), qvals, mvals, factvals).map_err(|e| ModelError::Invalid(e.to_string()))
    }
}
