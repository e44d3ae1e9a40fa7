use std::fmt;

use super::base::AssumptionBase;
use super::rules::RuleId;
use crate::syntax::{Item, MFormula, QFormula, Sequent, Side};

/// The first structural constraint a step fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepError(pub String);

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for StepError {}

type Step = Result<(), StepError>;

macro_rules! fail {
    ($($arg:tt)*) => {
        return Err(StepError(format!($($arg)*)))
    };
}

fn ensure(cond: bool, msg: &str) -> Step {
    if cond {
        Ok(())
    } else {
        Err(StepError(msg.to_owned()))
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Q => "action",
        Side::M => "proposition",
    }
}

fn q_only(ctx: &[Item]) -> bool {
    ctx.iter().all(|i| matches!(i, Item::Q(_)))
}

fn agent_suffix(ctx: &[Item]) -> usize {
    ctx.iter().rev().take_while(|i| i.is_agent()).count()
}

fn first_diff(a: &[Item], b: &[Item]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Position where `shorter` has one item less than `longer`.
fn removed_at(longer: &[Item], shorter: &[Item]) -> Option<usize> {
    if longer.len() != shorter.len() + 1 {
        return None;
    }
    let i = first_diff(longer, shorter);
    (longer[i + 1..] == shorter[i..]).then_some(i)
}

/// The single position where two equally long contexts differ.
fn replaced_at(a: &[Item], b: &[Item]) -> Option<usize> {
    if a.len() != b.len() {
        return None;
    }
    let i = first_diff(a, b);
    (i < a.len() && a[i + 1..] == b[i + 1..]).then_some(i)
}

/// Position where the item of `conc` is replaced by two items in `prem`.
fn expanded_at(conc: &[Item], prem: &[Item]) -> Option<usize> {
    if prem.len() != conc.len() + 1 {
        return None;
    }
    let i = first_diff(conc, prem);
    (i < conc.len() && conc[i + 1..] == prem[i + 2..]).then_some(i)
}

fn concl_q(s: &Sequent) -> Result<&QFormula, StepError> {
    s.q_conclusion()
        .ok_or_else(|| StepError("expected an action conclusion".into()))
}

fn concl_m(s: &Sequent) -> Result<&MFormula, StepError> {
    s.m_conclusion()
        .ok_or_else(|| StepError("expected a proposition conclusion".into()))
}

fn same_conclusion(c: &Sequent, p: &Sequent) -> Step {
    ensure(c.conclusion == p.conclusion, "premise and conclusion have different right-hand sides")
}

fn concat(parts: &[&[Item]]) -> Vec<Item> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// Accepts iff `conclusion` follows from `premises` by one application of
/// `rule`. `axiom` pins an assumption leaf to one axiom of the base.
pub fn check_step(
    rule: RuleId,
    conclusion: &Sequent,
    premises: &[&Sequent],
    base: &AssumptionBase,
    axiom: Option<usize>,
) -> Step {
    let side = conclusion.side();
    if !rule.sides().contains(&side) {
        fail!("{rule} does not conclude {} sequents", side_name(side));
    }
    if premises.len() != rule.arity() {
        fail!("{rule} takes {} premises, got {}", rule.arity(), premises.len());
    }
    if !conclusion.is_well_formed() {
        fail!("proposition in the context of an action sequent");
    }
    for (k, (p, want)) in premises.iter().zip(rule.premise_sides(side)).enumerate() {
        if p.side() != want {
            fail!("premise {} must be a {} sequent", k + 1, side_name(want));
        }
        if !p.is_well_formed() {
            fail!("premise {} has a proposition in an action context", k + 1);
        }
    }
    let c = conclusion;
    let cx = &c.context[..];
    match side {
        Side::Q => check_q(rule, c, cx, premises, base, axiom),
        Side::M => check_m(rule, c, cx, premises, base, axiom),
    }
}

fn check_assumption(c: &Sequent, base: &AssumptionBase, axiom: Option<usize>) -> Step {
    match axiom {
        Some(k) => match base.axioms.get(k) {
            Some(a) if a == c => Ok(()),
            Some(_) => fail!("sequent differs from axiom {k}"),
            None => fail!("axiom {k} is not in the base"),
        },
        None if base.axioms.contains(c) => Ok(()),
        None => fail!("sequent is not an axiom of the base"),
    }
}

/// Shared left rules replacing one item by one of its parts.
fn check_left_part(
    c: &Sequent,
    p: &Sequent,
    split: impl Fn(&Item) -> Option<(Item, Item)>,
    second: bool,
    what: &str,
) -> Step {
    same_conclusion(c, p)?;
    let i = replaced_at(&c.context, &p.context)
        .ok_or_else(|| StepError("premise must differ from the conclusion in one item".into()))?;
    match split(&c.context[i]) {
        Some((a, b)) => ensure(p.context[i] == if second { b } else { a }, &format!("premise item is not the expected part of the {what}")),
        None => fail!("changed item is not a {what}"),
    }
}

fn check_or_left(
    c: &Sequent,
    p1: &Sequent,
    p2: &Sequent,
    split: impl Fn(&Item) -> Option<(Item, Item)>,
) -> Step {
    check_left_part(c, p1, &split, false, "disjunction")?;
    check_left_part(c, p2, &split, true, "disjunction")?;
    let i = first_diff(&c.context, &p1.context);
    ensure(
        first_diff(&c.context, &p2.context) == i,
        "premises must split the same disjunction",
    )
}

fn q_and(i: &Item) -> Option<(Item, Item)> {
    match i {
        Item::Q(QFormula::And(a, b)) => Some((Item::Q((**a).clone()), Item::Q((**b).clone()))),
        _ => None,
    }
}

fn q_or(i: &Item) -> Option<(Item, Item)> {
    match i {
        Item::Q(QFormula::Or(a, b)) => Some((Item::Q((**a).clone()), Item::Q((**b).clone()))),
        _ => None,
    }
}

fn m_and(i: &Item) -> Option<(Item, Item)> {
    match i {
        Item::M(MFormula::And(a, b)) => Some((Item::M((**a).clone()), Item::M((**b).clone()))),
        _ => None,
    }
}

fn m_or(i: &Item) -> Option<(Item, Item)> {
    match i {
        Item::M(MFormula::Or(a, b)) => Some((Item::M((**a).clone()), Item::M((**b).clone()))),
        _ => None,
    }
}

fn check_seq_left(c: &Sequent, p: &Sequent) -> Step {
    same_conclusion(c, p)?;
    let i = expanded_at(&c.context, &p.context)
        .ok_or_else(|| StepError("premise must split one conclusion item in two".into()))?;
    match &c.context[i] {
        Item::Q(QFormula::Seq(a, b)) => ensure(
            p.context[i] == Item::Q((**a).clone()) && p.context[i + 1] == Item::Q((**b).clone()),
            "premise items are not the factors of the product",
        ),
        _ => fail!("split item is not a product"),
    }
}

fn check_unit_left(c: &Sequent, p: &Sequent) -> Step {
    same_conclusion(c, p)?;
    match removed_at(&c.context, &p.context) {
        Some(i) => ensure(c.context[i] == Item::Q(QFormula::One), "removed item is not 1"),
        None => fail!("premise must drop one item of the conclusion"),
    }
}

fn check_cut(c: &Sequent, p1: &Sequent, p2: &Sequent, cut: Item) -> Step {
    same_conclusion(c, p2)?;
    let k = p1.context.len();
    ensure(
        c.context.len() >= k && c.context[..k] == p1.context[..],
        "left premise context is not a prefix of the conclusion context",
    )?;
    ensure(
        p2.context.first() == Some(&cut) && p2.context[1..] == c.context[k..],
        "right premise must be the cut formula followed by the rest of the context",
    )
}

fn check_q(
    rule: RuleId,
    c: &Sequent,
    cx: &[Item],
    ps: &[&Sequent],
    base: &AssumptionBase,
    axiom: Option<usize>,
) -> Step {
    use RuleId::*;
    let goal = concl_q(c)?;
    match rule {
        Id => ensure(cx == [Item::Q(goal.clone())], "identity needs exactly the conclusion on the left"),
        OneL => check_unit_left(c, ps[0]),
        OneR => ensure(cx.is_empty() && *goal == QFormula::One, "1R concludes |-Q 1"),
        BotL => ensure(cx.contains(&Item::Q(QFormula::Bot)), "no bot in the context"),
        TopR => ensure(*goal == QFormula::Top, "conclusion is not top"),
        AppQR => match goal {
            QFormula::AppQ(a, q) => {
                ensure(
                    concat(&[&ps[0].context, &[Item::Agent(a.clone())]]) == cx,
                    "conclusion context must be the premise context followed by the agent",
                )?;
                ensure(concl_q(ps[0])? == &**q, "premise must conclude the argument of the appearance")
            }
            _ => fail!("conclusion is not an appearance"),
        },
        AppQL => match cx.first() {
            Some(Item::Q(QFormula::AppQ(a, q))) => {
                same_conclusion(c, ps[0])?;
                let want = concat(&[&[Item::Q((**q).clone()), Item::Agent(a.clone())], &cx[1..]]);
                ensure(ps[0].context == want, "premise must unfold the leading appearance")
            }
            _ => fail!("context does not start with an appearance"),
        },
        BoxQR => match goal {
            QFormula::BoxQ(a, q) => {
                ensure(
                    ps[0].context == concat(&[cx, &[Item::Agent(a.clone())]]),
                    "premise context must be the conclusion context followed by the agent",
                )?;
                ensure(concl_q(ps[0])? == &**q, "premise must conclude the argument of the box")
            }
            _ => fail!("conclusion is not a box"),
        },
        BoxQL => match cx {
            [Item::Q(QFormula::BoxQ(a, q)), Item::Agent(b), rest @ ..] if a == b => {
                same_conclusion(c, ps[0])?;
                ensure(
                    ps[0].context == concat(&[&[Item::Q((**q).clone())], rest]),
                    "premise must replace the box and its agent by the argument",
                )
            }
            _ => fail!("context does not start with a box followed by its agent"),
        },
        SeqL => check_seq_left(c, ps[0]),
        SeqR => match goal {
            QFormula::Seq(q1, q2) => {
                let n = agent_suffix(cx);
                let (qs, agents) = cx.split_at(cx.len() - n);
                ensure(q_only(qs), "context must be action formulas followed by agents")?;
                let (p1, p2) = (ps[0], ps[1]);
                ensure(concl_q(p1)? == &**q1, "left premise must conclude the left factor")?;
                ensure(concl_q(p2)? == &**q2, "right premise must conclude the right factor")?;
                for p in [p1, p2] {
                    ensure(
                        p.context.len() >= n && p.context[p.context.len() - n..] == *agents,
                        "premise agents differ from the conclusion's agent suffix",
                    )?;
                }
                let l1 = &p1.context[..p1.context.len() - n];
                let l2 = &p2.context[..p2.context.len() - n];
                ensure(q_only(l1) && q_only(l2), "premise agents differ from the conclusion's agent suffix")?;
                ensure(concat(&[l1, l2]) == qs, "premise formulas do not split the conclusion context")
            }
            _ => fail!("conclusion is not a product"),
        },
        OrL => check_or_left(c, ps[0], ps[1], q_or),
        OrR1 | OrR2 => match goal {
            QFormula::Or(a, b) => {
                ensure(ps[0].context == cx, "premise context differs")?;
                let part = if rule == OrR1 { a } else { b };
                ensure(concl_q(ps[0])? == &**part, "premise must conclude the chosen disjunct")
            }
            _ => fail!("conclusion is not a disjunction"),
        },
        AndL1 | AndL2 => check_left_part(c, ps[0], q_and, rule == AndL2, "conjunction"),
        AndR => match goal {
            QFormula::And(a, b) => {
                ensure(ps[0].context == cx && ps[1].context == cx, "premise context differs")?;
                ensure(
                    concl_q(ps[0])? == &**a && concl_q(ps[1])? == &**b,
                    "premises must conclude the conjuncts",
                )
            }
            _ => fail!("conclusion is not a conjunction"),
        },
        RResL => match cx.split_first() {
            Some((Item::Q(QFormula::RRes(q1, q2)), rest)) => {
                ensure(q_only(rest), "context after the residual must hold only action formulas")?;
                ensure(
                    ps[0].context == rest && concl_q(ps[0])? == &**q2,
                    "left premise must derive the denominator from the rest of the context",
                )?;
                ensure(
                    ps[1].context == [Item::Q((**q1).clone())] && ps[1].conclusion == c.conclusion,
                    "right premise must derive the conclusion from the numerator",
                )
            }
            _ => fail!("context does not start with a right residual"),
        },
        RResR => match goal {
            QFormula::RRes(q1, q2) => {
                ensure(
                    ps[0].context == concat(&[cx, &[Item::Q((**q2).clone())]]),
                    "premise context must end with the denominator",
                )?;
                ensure(concl_q(ps[0])? == &**q1, "premise must conclude the numerator")
            }
            _ => fail!("conclusion is not a right residual"),
        },
        LResL => match cx.split_last() {
            Some((Item::Q(QFormula::LRes(q1, q2)), rest)) => {
                ensure(
                    ps[0].context == rest && concl_q(ps[0])? == &**q1,
                    "left premise must derive the left operand from the rest of the context",
                )?;
                ensure(
                    ps[1].context == [Item::Q((**q2).clone())] && ps[1].conclusion == c.conclusion,
                    "right premise must derive the conclusion from the right operand",
                )
            }
            _ => fail!("context does not end with a left residual"),
        },
        LResR => match goal {
            QFormula::LRes(q1, q2) => {
                ensure(q_only(cx), "context must hold only action formulas")?;
                ensure(
                    ps[0].context == concat(&[&[Item::Q((**q1).clone())], cx]),
                    "premise context must start with the left operand",
                )?;
                ensure(concl_q(ps[0])? == &**q2, "premise must conclude the right operand")
            }
            _ => fail!("conclusion is not a left residual"),
        },
        QCut => {
            let cut = concl_q(ps[0])?.clone();
            check_cut(c, ps[0], ps[1], Item::Q(cut))
        }
        Agent => {
            same_conclusion(c, ps[0])?;
            ensure(cx == [Item::Q(QFormula::One)], "conclusion context must be 1")?;
            ensure(
                matches!(&ps[0].context[..], [Item::Agent(_)]),
                "premise context must be a single agent",
            )
        }
        Assumption => check_assumption(c, base, axiom),
        _ => fail!("{rule} does not conclude action sequents"),
    }
}

fn check_m(
    rule: RuleId,
    c: &Sequent,
    cx: &[Item],
    ps: &[&Sequent],
    base: &AssumptionBase,
    axiom: Option<usize>,
) -> Step {
    use RuleId::*;
    let goal = concl_m(c)?;
    match rule {
        Id => ensure(cx == [Item::M(goal.clone())], "identity needs exactly the conclusion on the left"),
        BotL => ensure(cx == [Item::M(MFormula::Bot)], "context must be exactly bot"),
        BotR => {
            ensure(*goal == MFormula::Bot, "conclusion is not bot")?;
            ensure(ps[0] == c, "premise must equal the conclusion")
        }
        TopR => ensure(*goal == MFormula::Top, "conclusion is not top"),
        AppMR => match goal {
            MFormula::AppM(a, m) => {
                ensure(
                    concat(&[&ps[0].context, &[Item::Agent(a.clone())]]) == cx,
                    "conclusion context must be the premise context followed by the agent",
                )?;
                ensure(concl_m(ps[0])? == &**m, "premise must conclude the argument of the appearance")
            }
            _ => fail!("conclusion is not an appearance"),
        },
        AppML => match cx.first() {
            Some(Item::M(MFormula::AppM(a, m))) => {
                same_conclusion(c, ps[0])?;
                let want = concat(&[&[Item::M((**m).clone()), Item::Agent(a.clone())], &cx[1..]]);
                ensure(ps[0].context == want, "premise must unfold the leading appearance")
            }
            _ => fail!("context does not start with an appearance"),
        },
        BoxMR => match goal {
            MFormula::BoxM(a, m) => {
                ensure(
                    ps[0].context == concat(&[cx, &[Item::Agent(a.clone())]]),
                    "premise context must be the conclusion context followed by the agent",
                )?;
                ensure(concl_m(ps[0])? == &**m, "premise must conclude the argument of the box")
            }
            _ => fail!("conclusion is not a box"),
        },
        BoxML => match cx {
            [Item::M(MFormula::BoxM(a, m)), Item::Agent(b), rest @ ..] if a == b => {
                same_conclusion(c, ps[0])?;
                ensure(
                    ps[0].context == concat(&[&[Item::M((**m).clone())], rest]),
                    "premise must replace the box and its agent by the argument",
                )
            }
            _ => fail!("context does not start with a box followed by its agent"),
        },
        AndR => match goal {
            MFormula::And(a, b) => {
                ensure(ps[0].context == cx && ps[1].context == cx, "premise context differs")?;
                ensure(
                    concl_m(ps[0])? == &**a && concl_m(ps[1])? == &**b,
                    "premises must conclude the conjuncts",
                )
            }
            _ => fail!("conclusion is not a conjunction"),
        },
        AndL1 | AndL2 => check_left_part(c, ps[0], m_and, rule == AndL2, "conjunction"),
        OrL => check_or_left(c, ps[0], ps[1], m_or),
        OrR1 | OrR2 => match goal {
            MFormula::Or(a, b) => {
                ensure(ps[0].context == cx, "premise context differs")?;
                let part = if rule == OrR1 { a } else { b };
                ensure(concl_m(ps[0])? == &**part, "premise must conclude the chosen disjunct")
            }
            _ => fail!("conclusion is not a disjunction"),
        },
        Contr => {
            same_conclusion(c, ps[0])?;
            let p = &ps[0].context;
            match removed_at(p, cx) {
                Some(i) if matches!(p[i], Item::M(_)) => ensure(
                    (i > 0 && p[i - 1] == p[i]) || p.get(i + 1) == Some(&p[i]),
                    "removed proposition is not a duplicate of its neighbour",
                ),
                Some(_) => fail!("only propositions contract"),
                None => fail!("premise must have one item more than the conclusion"),
            }
        }
        Exch => {
            same_conclusion(c, ps[0])?;
            let p = &ps[0].context;
            let i = first_diff(cx, p);
            ensure(
                p.len() == cx.len()
                    && i + 1 < cx.len()
                    && matches!(cx[i], Item::M(_))
                    && matches!(cx[i + 1], Item::M(_))
                    && p[i] == cx[i + 1]
                    && p[i + 1] == cx[i]
                    && p[i + 2..] == cx[i + 2..],
                "premise must swap two adjacent propositions",
            )
        }
        Fact => {
            ensure(matches!(goal, MFormula::Fact(_)), "conclusion is not a fact")?;
            same_conclusion(c, ps[0])?;
            match cx.split_last() {
                Some((Item::Q(_), rest)) => ensure(ps[0].context == rest, "premise must drop the trailing action"),
                _ => fail!("context does not end with an action"),
            }
        }
        MCut => {
            let cut = concl_m(ps[0])?.clone();
            check_cut(c, ps[0], ps[1], Item::M(cut))
        }
        WeakL => {
            same_conclusion(c, ps[0])?;
            match removed_at(cx, &ps[0].context) {
                Some(i) => ensure(matches!(cx[i], Item::M(_)), "only propositions are weakened"),
                None => fail!("premise must drop one item of the conclusion"),
            }
        }
        WeakR => {
            ensure(ps[0].context == cx, "premise context differs")?;
            ensure(concl_m(ps[0])? == &MFormula::Bot, "premise must have an empty right-hand side")
        }
        UpdL => match cx.first() {
            Some(Item::M(MFormula::Update(m, q))) => {
                same_conclusion(c, ps[0])?;
                let want = concat(&[&[Item::M((**m).clone()), Item::Q((**q).clone())], &cx[1..]]);
                ensure(ps[0].context == want, "premise must unfold the leading update")
            }
            _ => fail!("context does not start with an update"),
        },
        UpdR => match goal {
            MFormula::Update(m, q) => {
                let (p1, p2) = (ps[0], ps[1]);
                ensure(concl_m(p1)? == &**m, "left premise must conclude the updated proposition")?;
                ensure(concl_q(p2)? == &**q, "right premise must conclude the action")?;
                let n = agent_suffix(&p2.context);
                let (qs, agents) = p2.context.split_at(p2.context.len() - n);
                ensure(q_only(qs), "right premise context must be action formulas followed by agents")?;
                let k = p2.context.len();
                ensure(
                    cx.len() >= k && cx[cx.len() - k..] == p2.context[..],
                    "conclusion context does not end with the right premise context",
                )?;
                let rest = &cx[..cx.len() - k];
                ensure(
                    p1.context == concat(&[rest, agents]),
                    "left premise context must be the remaining context followed by the agents",
                )
            }
            _ => fail!("conclusion is not an update"),
        },
        DyL => match cx.split_first() {
            Some((Item::M(MFormula::DynBox(q, m)), rest)) => {
                ensure(q_only(rest), "context after the dynamic box must hold only action formulas")?;
                ensure(
                    ps[0].context == [Item::M((**m).clone())] && ps[0].conclusion == c.conclusion,
                    "left premise must derive the conclusion from the boxed proposition",
                )?;
                ensure(
                    ps[1].context == rest && concl_q(ps[1])? == &**q,
                    "right premise must derive the box action from the rest of the context",
                )
            }
            _ => fail!("context does not start with a dynamic box"),
        },
        DyR => match goal {
            MFormula::DynBox(q, m) => {
                ensure(
                    ps[0].context == concat(&[cx, &[Item::Q((**q).clone())]]),
                    "premise context must end with the box action",
                )?;
                ensure(concl_m(ps[0])? == &**m, "premise must conclude the boxed proposition")
            }
            _ => fail!("conclusion is not a dynamic box"),
        },
        OneML => check_unit_left(c, ps[0]),
        SeqML => check_seq_left(c, ps[0]),
        OrML => match cx.split_last() {
            Some((Item::Q(QFormula::Or(a, b)), rest)) => {
                same_conclusion(c, ps[0])?;
                same_conclusion(c, ps[1])?;
                ensure(
                    ps[0].context == concat(&[rest, &[Item::Q((**a).clone())]])
                        && ps[1].context == concat(&[rest, &[Item::Q((**b).clone())]]),
                    "premises must end with the two disjuncts",
                )
            }
            _ => fail!("context does not end with an action disjunction"),
        },
        RResML => {
            let (p1, p2) = (ps[0], ps[1]);
            same_conclusion(c, p2)?;
            ensure(q_only(&p1.context), "left premise context must hold only action formulas")?;
            let q2 = concl_q(p1)?;
            match p2.context.split_last() {
                Some((Item::Q(q1), g)) => {
                    let res = Item::Q(QFormula::rres(q1.clone(), q2.clone()));
                    ensure(
                        cx == concat(&[g, &[res], &p1.context]),
                        "conclusion must be the context, the residual and the left premise context",
                    )
                }
                _ => fail!("right premise context does not end with an action"),
            }
        }
        LResML => {
            let (p1, p2) = (ps[0], ps[1]);
            same_conclusion(c, p2)?;
            ensure(q_only(&p1.context), "left premise context must hold only action formulas")?;
            let q1 = concl_q(p1)?;
            match p2.context.split_last() {
                Some((Item::Q(q2), g)) => {
                    let res = Item::Q(QFormula::lres(q1.clone(), q2.clone()));
                    ensure(
                        cx == concat(&[g, &p1.context, &[res]]),
                        "conclusion must be the context, the left premise context and the residual",
                    )
                }
                _ => fail!("right premise context does not end with an action"),
            }
        }
        AndML1 | AndML2 => check_left_part(c, ps[0], q_and, rule == AndML2, "action conjunction"),
        Assumption => check_assumption(c, base, axiom),
        _ => fail!("{rule} does not conclude proposition sequents"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_sequent, Signature};

    fn sig() -> Signature {
        Signature::new(["A", "B"], ["q", "r", "a", "b"], ["m", "n"], ["p"])
    }

    fn s(text: &str) -> Sequent {
        parse_sequent(text, &sig()).unwrap()
    }

    fn step(rule: RuleId, c: &str, ps: &[&str]) -> Step {
        let ps: Vec<Sequent> = ps.iter().map(|p| s(p)).collect();
        let refs: Vec<&Sequent> = ps.iter().collect();
        check_step(rule, &s(c), &refs, &AssumptionBase::empty(sig()), None)
    }

    #[test]
    fn identity() {
        assert!(step(RuleId::Id, "q |-Q q", &[]).is_ok());
        assert!(step(RuleId::Id, "q |-Q r", &[]).is_err());
        assert!(step(RuleId::Id, "m |-M m", &[]).is_ok());
    }

    #[test]
    fn appearance_right() {
        assert!(step(RuleId::AppQR, "q, r, @A |-Q fQ[A](q)", &["q, r |-Q q"]).is_ok());
        assert!(step(RuleId::AppQR, "q, r, @B |-Q fQ[A](q)", &["q, r |-Q q"]).is_err());
    }

    #[test]
    fn product_right_agent_suffix() {
        assert!(step(RuleId::SeqR, "q, r, @A |-Q q * r", &["q, @A |-Q q", "r, @A |-Q r"]).is_ok());
        let e = step(RuleId::SeqR, "q, r, @A |-Q q * r", &["q, @A |-Q q", "r, @B |-Q r"]).unwrap_err();
        assert!(e.0.contains("agent suffix"), "{e}");
        assert!(step(RuleId::SeqR, "q, @A, r |-Q q * r", &["q, @A |-Q q", "r |-Q r"]).is_err());
    }

    #[test]
    fn update_right_splits() {
        assert!(step(RuleId::UpdR, "m, a, @A |-M m . b", &["m, @A |-M m", "a, @A |-Q b"]).is_ok());
        assert!(step(RuleId::UpdR, "m, a, @A |-M m . b", &["m |-M m", "a, @A |-Q b"]).is_err());
    }

    #[test]
    fn left_rules_any_position() {
        assert!(step(RuleId::AndL2, "m, n & m, q |-M m", &["m, m, q |-M m"]).is_ok());
        assert!(step(RuleId::SeqML, "m, q * r, a |-M n", &["m, q, r, a |-M n"]).is_ok());
        assert!(step(RuleId::OneL, "q, 1, 1 |-Q q", &["q, 1 |-Q q"]).is_ok());
        assert!(step(RuleId::OrL, "m | n, q |-M n", &["m, q |-M n", "n, q |-M n"]).is_ok());
        assert!(step(RuleId::OrL, "m | n, q |-M n", &["n, q |-M n", "m, q |-M n"]).is_err());
    }

    #[test]
    fn structural() {
        assert!(step(RuleId::Contr, "m, q |-M n", &["m, m, q |-M n"]).is_ok());
        assert!(step(RuleId::Contr, "m, q |-M n", &["m, n, q |-M n"]).is_err());
        assert!(step(RuleId::Exch, "m, n, q |-M n", &["n, m, q |-M n"]).is_ok());
        assert!(step(RuleId::WeakL, "m, n |-M n", &["n |-M n"]).is_ok());
        assert!(step(RuleId::WeakL, "q, n |-M n", &["n |-M n"]).is_err());
        assert!(step(RuleId::Fact, "m, q |-M #p", &["m |-M #p"]).is_ok());
        assert!(step(RuleId::Fact, "m, q |-M n", &["m |-M n"]).is_err());
        assert!(step(RuleId::WeakR, "m |-M n", &["m |-M"]).is_ok());
    }

    #[test]
    fn residual_rules() {
        assert!(step(RuleId::RResML, "m, q / r, a, b |-M n", &["a, b |-Q r", "m, q |-M n"]).is_ok());
        assert!(step(RuleId::LResML, "m, a, b, q \\ r |-M n", &["a, b |-Q q", "m, r |-M n"]).is_ok());
        assert!(step(RuleId::RResL, "q / r, a |-Q b", &["a |-Q r", "q |-Q b"]).is_ok());
        assert!(step(RuleId::RResL, "q / r, a, @A |-Q b", &["a, @A |-Q r", "q |-Q b"]).is_err());
    }

    #[test]
    fn cuts() {
        assert!(step(RuleId::MCut, "m, q |-M n", &["m |-M n", "n, q |-M n"]).is_ok());
        assert!(step(RuleId::QCut, "q, r |-Q a", &["q, r |-Q b", "b |-Q a"]).is_ok());
        assert!(step(RuleId::QCut, "q, r |-Q a", &["q |-Q b", "b |-Q a"]).is_err());
    }

    #[test]
    fn wrong_side_and_arity() {
        assert!(step(RuleId::UpdL, "q |-Q q", &["q |-Q q"]).is_err());
        assert!(step(RuleId::Id, "q |-Q q", &["q |-Q q"]).is_err());
    }
}
