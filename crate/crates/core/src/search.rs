//! Bounded backward proof search producing kernel-checkable trees.
use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::kernel::{AssumptionBase, ProofTree, RuleId};
use crate::syntax::{Conclusion, Item, MFormula, Name, QFormula, Sequent};

/// Which formulas cuts may introduce.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutPool {
    /// Subformulas of the goal and of the axioms, bottom, `[q]m . q` for
    /// every dynamic box, and updates of proposition axiom heads by action
    /// axiom heads.
    #[default]
    Subformulas,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest tree height tried; a single leaf has height 1.
    pub max_depth: usize,
    pub cut_pool: CutPool,
    /// Rules tried at every node, in this order.
    pub branch_order: Vec<RuleId>,
    pub loop_check: bool,
}

/// Axioms and closing rules first, then rules that shrink the goal, then
/// structural rules and cuts.
pub const DEFAULT_ORDER: [RuleId; 46] = {
    use RuleId::*;
    [
        Assumption, Id, TopR, BotL, OneR, UpdL, AppML, AppQL, SeqL, SeqML, OneL, OneML, OrML, OrL,
        AndR, BoxMR, BoxQR, DyR, RResR, LResR, BoxML, BoxQL, AppMR, AppQR, OrR1, OrR2, AndL1,
        AndL2, AndML1, AndML2, Fact, UpdR, SeqR, DyL, RResL, LResL, RResML, LResML, Agent, WeakR,
        WeakL, Exch, Contr, MCut, QCut, BotR,
    ]
};

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 10,
            cut_pool: CutPool::Subformulas,
            branch_order: DEFAULT_ORDER.to_vec(),
            loop_check: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Sequents expanded.
    pub expanded: u64,
    /// Depth bound of the last iteration.
    pub depth: usize,
}

/// Searches for a proof of `goal` from `base`. `None` means no proof exists
/// within the bounds, not that the goal is false.
pub fn prove(goal: &Sequent, base: &AssumptionBase, cfg: &SearchConfig) -> Option<ProofTree> {
    prove_with_stats(goal, base, cfg).0
}

pub fn prove_with_stats(goal: &Sequent, base: &AssumptionBase, cfg: &SearchConfig) -> (Option<ProofTree>, SearchStats) {
    let mut s = Searcher::new(goal, base, cfg);
    let mut stats = SearchStats::default();
    for depth in 1..=cfg.max_depth {
        stats.depth = depth;
        if let Some(t) = s.prove(goal, depth) {
            stats.expanded = s.expanded;
            return (Some(t), stats);
        }
    }
    stats.expanded = s.expanded;
    (None, stats)
}

/// Every premise list from which `rule` concludes `seq`, with the axiom
/// index of assumption leaves. Cut formulas come from the pool of `seq`.
pub fn backward_steps(
    seq: &Sequent,
    rule: RuleId,
    base: &AssumptionBase,
    pool: CutPool,
) -> Vec<(Vec<Sequent>, Option<usize>)> {
    let cfg = SearchConfig { cut_pool: pool, ..Default::default() };
    let mut s = Searcher::new(seq, base, &cfg);
    s.prune = false;
    if !rule.sides().contains(&seq.side()) {
        return Vec::new();
    }
    s.expansions(seq, rule)
}

struct Searcher<'a> {
    base: &'a AssumptionBase,
    cfg: &'a SearchConfig,
    agents: Vec<Name>,
    pool_m: Vec<MFormula>,
    pool_q: Vec<QFormula>,
    proved: HashMap<Sequent, (ProofTree, usize)>,
    failed: HashMap<Sequent, usize>,
    visited: HashSet<Sequent>,
    expanded: u64,
    /// Skip expansions that never help a search: `BotR` and repeated
    /// contraction.
    prune: bool,
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
    }
}

fn add_item(item: &Item, ms: &mut Vec<MFormula>, qs: &mut Vec<QFormula>) {
    match item {
        Item::M(m) => add_m(m, ms, qs),
        Item::Q(q) => add_q(q, qs),
        Item::Agent(_) => {}
    }
}

fn add_m(m: &MFormula, ms: &mut Vec<MFormula>, qs: &mut Vec<QFormula>) {
    for f in m.subformulas() {
        push_unique(ms, f);
    }
    for f in m.q_subformulas() {
        push_unique(qs, f);
    }
}

fn add_q(q: &QFormula, qs: &mut Vec<QFormula>) {
    for f in q.subformulas() {
        push_unique(qs, f);
    }
}

fn add_conclusion(c: &Conclusion, ms: &mut Vec<MFormula>, qs: &mut Vec<QFormula>) {
    match c {
        Conclusion::M(m) => add_m(m, ms, qs),
        Conclusion::Q(q) => add_q(q, qs),
    }
}

/// The cut formulas allowed by `policy`, in a fixed order.
pub fn cut_pool(goal: &Sequent, base: &AssumptionBase, policy: CutPool) -> (Vec<MFormula>, Vec<QFormula>) {
    let (mut ms, mut qs) = (Vec::new(), Vec::new());
    if policy == CutPool::None {
        return (ms, qs);
    }
    add_conclusion(&goal.conclusion, &mut ms, &mut qs);
    for i in &goal.context {
        add_item(i, &mut ms, &mut qs);
    }
    for a in &base.axioms {
        add_conclusion(&a.conclusion, &mut ms, &mut qs);
        for i in &a.context {
            add_item(i, &mut ms, &mut qs);
        }
    }
    push_unique(&mut ms, MFormula::Bot);
    push_unique(&mut qs, QFormula::Bot);
    for f in ms.clone() {
        if let MFormula::DynBox(q, _) = &f {
            push_unique(&mut ms, MFormula::update(f.clone(), (**q).clone()));
        }
    }
    let m_heads: Vec<&MFormula> = base
        .axioms
        .iter()
        .filter_map(|a| a.m_conclusion())
        .filter(|m| **m != MFormula::Bot)
        .collect();
    let q_heads: Vec<&QFormula> = base.axioms.iter().filter_map(|a| a.q_conclusion()).collect();
    for m in &m_heads {
        for q in &q_heads {
            push_unique(&mut ms, MFormula::update((*m).clone(), (*q).clone()));
        }
    }
    (ms, qs)
}

fn q_only(ctx: &[Item]) -> bool {
    ctx.iter().all(|i| matches!(i, Item::Q(_)))
}

fn agent_suffix(ctx: &[Item]) -> usize {
    ctx.iter().rev().take_while(|i| i.is_agent()).count()
}

fn cat(parts: &[&[Item]]) -> Vec<Item> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

fn qi(q: &QFormula) -> Item {
    Item::Q(q.clone())
}

fn mi(m: &MFormula) -> Item {
    Item::M(m.clone())
}

/// `cx` with position `i` replaced by `with`.
fn splice(cx: &[Item], i: usize, with: &[Item]) -> Vec<Item> {
    cat(&[&cx[..i], with, &cx[i + 1..]])
}

type Expansion = (Vec<Sequent>, Option<usize>);

impl<'a> Searcher<'a> {
    fn new(goal: &Sequent, base: &'a AssumptionBase, cfg: &'a SearchConfig) -> Self {
        let (pool_m, pool_q) = cut_pool(goal, base, cfg.cut_pool);
        Searcher {
            base,
            cfg,
            agents: base.signature.agents.iter().cloned().collect(),
            pool_m,
            pool_q,
            proved: HashMap::new(),
            failed: HashMap::new(),
            visited: HashSet::new(),
            expanded: 0,
            prune: true,
        }
    }

    /// Failures are remembered per depth even when the loop check cut a
    /// branch, which keeps the search polynomial in the number of sequents
    /// seen at the price of completeness.
    fn prove(&mut self, seq: &Sequent, depth: usize) -> Option<ProofTree> {
        if depth == 0 {
            return None;
        }
        if let Some((t, h)) = self.proved.get(seq) {
            if *h <= depth {
                return Some(t.clone());
            }
        }
        if self.failed.get(seq).is_some_and(|&d| d >= depth) {
            return None;
        }
        if self.cfg.loop_check && !self.visited.insert(seq.clone()) {
            return None;
        }
        self.expanded += 1;
        let side = seq.side();
        let mut found = None;
        'rules: for &rule in &self.cfg.branch_order {
            if !rule.sides().contains(&side) {
                continue;
            }
            for (premises, axiom) in self.expansions(seq, rule) {
                let mut trees = Vec::with_capacity(premises.len());
                for p in &premises {
                    match self.prove(p, depth - 1) {
                        Some(t) => trees.push(t),
                        None => break,
                    }
                }
                if trees.len() == premises.len() {
                    found = Some(ProofTree { sequent: seq.clone(), rule, premises: trees, axiom });
                    break 'rules;
                }
            }
        }
        if self.cfg.loop_check {
            self.visited.remove(seq);
        }
        match found {
            Some(t) => {
                let h = t.height();
                self.proved.insert(seq.clone(), (t.clone(), h));
                Some(t)
            }
            None => {
                let d = self.failed.entry(seq.clone()).or_insert(0);
                *d = (*d).max(depth);
                None
            }
        }
    }

    fn expansions(&self, seq: &Sequent, rule: RuleId) -> Vec<Expansion> {
        match &seq.conclusion {
            Conclusion::Q(goal) => self.expand_q(seq, goal, rule),
            Conclusion::M(goal) => self.expand_m(seq, goal, rule),
        }
    }

    fn shared(&self, seq: &Sequent, rule: RuleId) -> Option<Vec<Expansion>> {
        use RuleId::*;
        let out = match rule {
            Assumption => self
                .base
                .axioms
                .iter()
                .enumerate()
                .filter(|(_, a)| *a == seq)
                .map(|(i, _)| (Vec::new(), Some(i)))
                .take(1)
                .collect(),
            _ => return None,
        };
        Some(out)
    }

    fn expand_q(&self, seq: &Sequent, goal: &QFormula, rule: RuleId) -> Vec<Expansion> {
        use RuleId::*;
        if let Some(e) = self.shared(seq, rule) {
            return e;
        }
        let cx = &seq.context[..];
        let q = |ctx: Vec<Item>, f: &QFormula| Sequent::q(ctx, f.clone());
        let same = |ctx: Vec<Item>| Sequent { context: ctx, conclusion: seq.conclusion.clone() };
        let leaf = |ok: bool| if ok { vec![(Vec::new(), None)] } else { Vec::new() };
        let one = |s: Sequent| vec![(vec![s], None)];
        let mut out = Vec::new();
        match rule {
            Id => return leaf(cx == [qi(goal)]),
            OneR => return leaf(cx.is_empty() && *goal == QFormula::One),
            BotL => return leaf(cx.contains(&Item::Q(QFormula::Bot))),
            TopR => return leaf(*goal == QFormula::Top),
            OneL => {
                for (i, it) in cx.iter().enumerate() {
                    if *it == Item::Q(QFormula::One) {
                        out.push((vec![same(splice(cx, i, &[]))], None));
                    }
                }
            }
            AppQR => {
                if let (QFormula::AppQ(a, f), Some((Item::Agent(b), rest))) = (goal, cx.split_last()) {
                    if a == b {
                        return one(q(rest.to_vec(), f));
                    }
                }
            }
            AppQL => {
                if let Some((Item::Q(QFormula::AppQ(a, f)), rest)) = cx.split_first() {
                    return one(same(cat(&[&[qi(f), Item::Agent(a.clone())], rest])));
                }
            }
            BoxQR => {
                if let QFormula::BoxQ(a, f) = goal {
                    return one(q(cat(&[cx, &[Item::Agent(a.clone())]]), f));
                }
            }
            BoxQL => {
                if let [Item::Q(QFormula::BoxQ(a, f)), Item::Agent(b), rest @ ..] = cx {
                    if a == b {
                        return one(same(cat(&[&[qi(f)], rest])));
                    }
                }
            }
            SeqL => {
                for (i, it) in cx.iter().enumerate() {
                    if let Item::Q(QFormula::Seq(a, b)) = it {
                        out.push((vec![same(splice(cx, i, &[qi(a), qi(b)]))], None));
                    }
                }
            }
            SeqR => {
                if let QFormula::Seq(f1, f2) = goal {
                    let n = agent_suffix(cx);
                    let (qs, agents) = cx.split_at(cx.len() - n);
                    if q_only(qs) {
                        for i in 0..=qs.len() {
                            out.push((
                                vec![q(cat(&[&qs[..i], agents]), f1), q(cat(&[&qs[i..], agents]), f2)],
                                None,
                            ));
                        }
                    }
                }
            }
            OrL => {
                for (i, it) in cx.iter().enumerate() {
                    if let Item::Q(QFormula::Or(a, b)) = it {
                        out.push((vec![same(splice(cx, i, &[qi(a)])), same(splice(cx, i, &[qi(b)]))], None));
                    }
                }
            }
            OrR1 | OrR2 => {
                if let QFormula::Or(a, b) = goal {
                    return one(q(cx.to_vec(), if rule == OrR1 { a } else { b }));
                }
            }
            AndL1 | AndL2 => {
                for (i, it) in cx.iter().enumerate() {
                    if let Item::Q(QFormula::And(a, b)) = it {
                        let part = if rule == AndL1 { a } else { b };
                        out.push((vec![same(splice(cx, i, &[qi(part)]))], None));
                    }
                }
            }
            AndR => {
                if let QFormula::And(a, b) = goal {
                    out.push((vec![q(cx.to_vec(), a), q(cx.to_vec(), b)], None));
                }
            }
            RResL => {
                if let Some((Item::Q(QFormula::RRes(f1, f2)), rest)) = cx.split_first() {
                    if q_only(rest) {
                        out.push((vec![q(rest.to_vec(), f2), same(vec![qi(f1)])], None));
                    }
                }
            }
            RResR => {
                if let QFormula::RRes(f1, f2) = goal {
                    return one(q(cat(&[cx, &[qi(f2)]]), f1));
                }
            }
            LResL => {
                if let Some((Item::Q(QFormula::LRes(f1, f2)), rest)) = cx.split_last() {
                    out.push((vec![q(rest.to_vec(), f1), same(vec![qi(f2)])], None));
                }
            }
            LResR => {
                if let QFormula::LRes(f1, f2) = goal {
                    if q_only(cx) {
                        return one(q(cat(&[&[qi(f1)], cx]), f2));
                    }
                }
            }
            Agent => {
                if cx == [Item::Q(QFormula::One)] {
                    for a in &self.agents {
                        out.push((vec![same(vec![Item::Agent(a.clone())])], None));
                    }
                }
            }
            QCut => {
                for k in 0..=cx.len() {
                    for c in &self.pool_q {
                        if k == cx.len() && c == goal {
                            continue;
                        }
                        out.push((vec![q(cx[..k].to_vec(), c), same(cat(&[&[qi(c)], &cx[k..]]))], None));
                    }
                }
            }
            _ => {}
        }
        out
    }

    fn expand_m(&self, seq: &Sequent, goal: &MFormula, rule: RuleId) -> Vec<Expansion> {
        use RuleId::*;
        if let Some(e) = self.shared(seq, rule) {
            return e;
        }
        let cx = &seq.context[..];
        let m = |ctx: Vec<Item>, f: &MFormula| Sequent::m(ctx, f.clone());
        let q = |ctx: Vec<Item>, f: &QFormula| Sequent::q(ctx, f.clone());
        let same = |ctx: Vec<Item>| Sequent { context: ctx, conclusion: seq.conclusion.clone() };
        let leaf = |ok: bool| if ok { vec![(Vec::new(), None)] } else { Vec::new() };
        let one = |s: Sequent| vec![(vec![s], None)];
        let mut out = Vec::new();
        match rule {
            Id => return leaf(cx == [mi(goal)]),
            BotL => return leaf(cx == [Item::M(MFormula::Bot)]),
            TopR => return leaf(*goal == MFormula::Top),
            BotR if !self.prune && *goal == MFormula::Bot => return one(seq.clone()),
            AppMR => {
                if let (MFormula::AppM(a, f), Some((Item::Agent(b), rest))) = (goal, cx.split_last()) {
                    if a == b {
                        return one(m(rest.to_vec(), f));
                    }
                }
            }
            AppML => {
                if let Some((Item::M(MFormula::AppM(a, f)), rest)) = cx.split_first() {
                    return one(same(cat(&[&[mi(f), Item::Agent(a.clone())], rest])));
                }
            }
            BoxMR => {
                if let MFormula::BoxM(a, f) = goal {
                    return one(m(cat(&[cx, &[Item::Agent(a.clone())]]), f));
                }
            }
            BoxML => {
                if let [Item::M(MFormula::BoxM(a, f)), Item::Agent(b), rest @ ..] = cx {
                    if a == b {
                        return one(same(cat(&[&[mi(f)], rest])));
                    }
                }
            }
            AndR => {
                if let MFormula::And(a, b) = goal {
                    out.push((vec![m(cx.to_vec(), a), m(cx.to_vec(), b)], None));
                }
            }
            AndL1 | AndL2 => {
                for (i, it) in cx.iter().enumerate() {
                    if let Item::M(MFormula::And(a, b)) = it {
                        let part = if rule == AndL1 { a } else { b };
                        out.push((vec![same(splice(cx, i, &[mi(part)]))], None));
                    }
                }
            }
            OrL => {
                for (i, it) in cx.iter().enumerate() {
                    if let Item::M(MFormula::Or(a, b)) = it {
                        out.push((vec![same(splice(cx, i, &[mi(a)])), same(splice(cx, i, &[mi(b)]))], None));
                    }
                }
            }
            OrR1 | OrR2 => {
                if let MFormula::Or(a, b) = goal {
                    return one(m(cx.to_vec(), if rule == OrR1 { a } else { b }));
                }
            }
            Contr => {
                // one duplicated proposition per context at most
                let has_duplicate = (1..cx.len()).any(|i| cx[..i].contains(&cx[i]));
                for (i, it) in cx.iter().enumerate() {
                    if matches!(it, Item::M(_)) && !(self.prune && has_duplicate) {
                        out.push((vec![same(splice(cx, i, &[it.clone(), it.clone()]))], None));
                    }
                }
            }
            Exch => {
                for i in 0..cx.len().saturating_sub(1) {
                    if matches!(cx[i], Item::M(_)) && matches!(cx[i + 1], Item::M(_)) && cx[i] != cx[i + 1] {
                        let mut p = cx.to_vec();
                        p.swap(i, i + 1);
                        out.push((vec![same(p)], None));
                    }
                }
            }
            Fact => {
                if let (MFormula::Fact(_), Some((Item::Q(_), rest))) = (goal, cx.split_last()) {
                    return one(same(rest.to_vec()));
                }
            }
            MCut => {
                for k in 0..=cx.len() {
                    for c in &self.pool_m {
                        if k == cx.len() && c == goal {
                            continue;
                        }
                        out.push((vec![m(cx[..k].to_vec(), c), same(cat(&[&[mi(c)], &cx[k..]]))], None));
                    }
                }
            }
            WeakL => {
                for (i, it) in cx.iter().enumerate() {
                    if matches!(it, Item::M(_)) {
                        out.push((vec![same(splice(cx, i, &[]))], None));
                    }
                }
            }
            WeakR => {
                if *goal != MFormula::Bot {
                    return one(m(cx.to_vec(), &MFormula::Bot));
                }
            }
            UpdL => {
                if let Some((Item::M(MFormula::Update(f, a)), rest)) = cx.split_first() {
                    return one(same(cat(&[&[mi(f), qi(a)], rest])));
                }
            }
            UpdR => {
                if let MFormula::Update(f, a) = goal {
                    for k in 0..=cx.len() {
                        let (rest, tail) = cx.split_at(cx.len() - k);
                        let n = agent_suffix(tail);
                        let (qs, agents) = tail.split_at(tail.len() - n);
                        if q_only(qs) {
                            out.push((vec![m(cat(&[rest, agents]), f), q(tail.to_vec(), a)], None));
                        }
                    }
                }
            }
            DyL => {
                if let Some((Item::M(MFormula::DynBox(a, f)), rest)) = cx.split_first() {
                    if q_only(rest) {
                        out.push((vec![same(vec![mi(f)]), q(rest.to_vec(), a)], None));
                    }
                }
            }
            DyR => {
                if let MFormula::DynBox(a, f) = goal {
                    return one(m(cat(&[cx, &[qi(a)]]), f));
                }
            }
            OneML => {
                for (i, it) in cx.iter().enumerate() {
                    if *it == Item::Q(QFormula::One) {
                        out.push((vec![same(splice(cx, i, &[]))], None));
                    }
                }
            }
            SeqML => {
                for (i, it) in cx.iter().enumerate() {
                    if let Item::Q(QFormula::Seq(a, b)) = it {
                        out.push((vec![same(splice(cx, i, &[qi(a), qi(b)]))], None));
                    }
                }
            }
            OrML => {
                if let Some((Item::Q(QFormula::Or(a, b)), rest)) = cx.split_last() {
                    out.push((vec![same(cat(&[rest, &[qi(a)]])), same(cat(&[rest, &[qi(b)]]))], None));
                }
            }
            AndML1 | AndML2 => {
                for (i, it) in cx.iter().enumerate() {
                    if let Item::Q(QFormula::And(a, b)) = it {
                        let part = if rule == AndML1 { a } else { b };
                        out.push((vec![same(splice(cx, i, &[qi(part)]))], None));
                    }
                }
            }
            RResML => {
                for (i, it) in cx.iter().enumerate() {
                    if let Item::Q(QFormula::RRes(f1, f2)) = it {
                        let tail = &cx[i + 1..];
                        if q_only(tail) {
                            out.push((vec![q(tail.to_vec(), f2), same(cat(&[&cx[..i], &[qi(f1)]]))], None));
                        }
                    }
                }
            }
            LResML => {
                if let Some((Item::Q(QFormula::LRes(f1, f2)), rest)) = cx.split_last() {
                    for j in 0..=rest.len() {
                        if q_only(&rest[j..]) {
                            out.push((vec![q(rest[j..].to_vec(), f1), same(cat(&[&rest[..j], &[qi(f2)]]))], None));
                        }
                    }
                }
            }
            _ => {}
        }
        out
    }
}
