//! Brute-force Kripke semantics, independent of the algebra compiler.
#![allow(dead_code)]

pub mod goals;
pub mod laws;
pub mod soundness;

use std::collections::HashMap;

use epiq_core::model::{ActionModel, KripkeStateModel, PreFormula};

/// A product model: each world is a base state followed by the actions
/// executed so far.
pub struct Product {
    pub worlds: Vec<(usize, Vec<usize>)>,
    /// `succ[agent][world]`
    pub succ: Vec<Vec<Vec<usize>>>,
    index: HashMap<(usize, Vec<usize>), usize>,
}

impl Product {
    pub fn initial(sm: &KripkeStateModel) -> Self {
        let worlds: Vec<_> = (0..sm.states.len()).map(|s| (s, Vec::new())).collect();
        let mut succ = vec![vec![Vec::new(); worlds.len()]; sm.agents.len()];
        for (i, rel) in sm.access.iter().enumerate() {
            for &(a, b) in rel {
                succ[i][a].push(b);
            }
        }
        let index = worlds.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        Product { worlds, succ, index }
    }

    pub fn sat(&self, sm: &KripkeStateModel, w: usize, f: &PreFormula) -> bool {
        let base = self.worlds[w].0;
        match f {
            PreFormula::True => true,
            PreFormula::False => false,
            PreFormula::Fact(p) => sm.valuation[p].contains(&base),
            PreFormula::States(ss) => ss.iter().any(|s| sm.states[base] == *s),
            PreFormula::Not(g) => !self.sat(sm, w, g),
            PreFormula::And(gs) => gs.iter().all(|g| self.sat(sm, w, g)),
            PreFormula::Or(gs) => gs.iter().any(|g| self.sat(sm, w, g)),
            PreFormula::Knows(a, g) => {
                let i = sm.agents.iter().position(|x| x == a).unwrap();
                self.succ[i][w].iter().all(|&v| self.sat(sm, v, g))
            }
        }
    }

    /// The update of this model by every action of `am`.
    pub fn update(&self, sm: &KripkeStateModel, am: &ActionModel) -> Self {
        let asucc = am.successors();
        let mut worlds = Vec::new();
        let mut from = Vec::new();
        for w in 0..self.worlds.len() {
            for (a, pre) in am.pre.iter().enumerate() {
                if self.sat(sm, w, pre) {
                    let (s, word) = &self.worlds[w];
                    let mut word = word.clone();
                    word.push(a);
                    worlds.push((*s, word));
                    from.push((w, a));
                }
            }
        }
        let index: HashMap<_, _> = worlds.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut succ = vec![vec![Vec::new(); worlds.len()]; sm.agents.len()];
        for (i, row) in succ.iter_mut().enumerate() {
            for (k, &(w, a)) in from.iter().enumerate() {
                for &v in &self.succ[i][w] {
                    for &b in &asucc[i][a] {
                        let mut word = self.worlds[v].1.clone();
                        word.push(b);
                        if let Some(&t) = index.get(&(self.worlds[v].0, word)) {
                            row[k].push(t);
                        }
                    }
                }
            }
        }
        Product { worlds, succ, index }
    }

    pub fn world(&self, s: usize, word: &[usize]) -> Option<usize> {
        self.index.get(&(s, word.to_vec())).copied()
    }
}

/// Products after 0, 1, ..., `rounds` updates.
pub fn products(sm: &KripkeStateModel, am: &ActionModel, rounds: usize) -> Vec<Product> {
    let mut out = vec![Product::initial(sm)];
    for _ in 0..rounds {
        let next = out.last().unwrap().update(sm, am);
        out.push(next);
    }
    out
}

/// Whether every `agent`-successor of the world reached from `s` by `word`
/// satisfies `fact`; true when the word cannot be executed at `s`.
pub fn knows_after(ps: &[Product], sm: &KripkeStateModel, s: usize, word: &[usize], agent: usize, fact: &str) -> bool {
    let p = &ps[word.len()];
    match p.world(s, word) {
        None => true,
        Some(w) => p.succ[agent][w].iter().all(|&v| sm.valuation[fact].contains(&p.worlds[v].0)),
    }
}

/// Base states at which `word` can be executed.
pub fn executable(ps: &[Product], s_count: usize, word: &[usize]) -> Vec<usize> {
    (0..s_count).filter(|&s| ps[word.len()].world(s, word).is_some()).collect()
}
