use std::fmt::{self, Display, Formatter, Write};

use super::ast::{Conclusion, Item, MFormula, QFormula, Sequent, Side};

const RES: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const MUL: u8 = 3;
const UNARY: u8 = 4;

fn q_level(q: &QFormula) -> u8 {
    match q {
        QFormula::LRes(..) | QFormula::RRes(..) => RES,
        QFormula::Or(..) => OR,
        QFormula::And(..) => AND,
        QFormula::Seq(..) => MUL,
        _ => UNARY,
    }
}

fn m_level(m: &MFormula) -> u8 {
    match m {
        MFormula::Or(..) => OR,
        MFormula::And(..) => AND,
        MFormula::Update(..) => MUL,
        _ => UNARY,
    }
}

fn write_q(f: &mut Formatter<'_>, q: &QFormula, min: u8) -> fmt::Result {
    let level = q_level(q);
    if level < min {
        f.write_char('(')?;
    }
    match q {
        QFormula::Top => f.write_str("top")?,
        QFormula::Bot => f.write_str("bot")?,
        QFormula::One => f.write_str("1")?,
        QFormula::Var(v) => f.write_str(v)?,
        QFormula::Seq(a, b)
        | QFormula::LRes(a, b)
        | QFormula::RRes(a, b)
        | QFormula::Or(a, b)
        | QFormula::And(a, b) => {
            let op = match q {
                QFormula::Seq(..) => " * ",
                QFormula::LRes(..) => " \\ ",
                QFormula::RRes(..) => " / ",
                QFormula::Or(..) => " | ",
                _ => " & ",
            };
            write_q(f, a, level)?;
            f.write_str(op)?;
            write_q(f, b, level + 1)?;
        }
        QFormula::AppQ(agent, a) => {
            write!(f, "fQ[{agent}](")?;
            write_q(f, a, RES)?;
            f.write_char(')')?;
        }
        QFormula::BoxQ(agent, a) => {
            write!(f, "boxQ[{agent}](")?;
            write_q(f, a, RES)?;
            f.write_char(')')?;
        }
    }
    if level < min {
        f.write_char(')')?;
    }
    Ok(())
}

fn write_m(f: &mut Formatter<'_>, m: &MFormula, min: u8) -> fmt::Result {
    let level = m_level(m);
    if level < min {
        f.write_char('(')?;
    }
    match m {
        MFormula::Top => f.write_str("top")?,
        MFormula::Bot => f.write_str("bot")?,
        MFormula::Fact(p) => write!(f, "#{p}")?,
        MFormula::Var(v) => f.write_str(v)?,
        MFormula::And(a, b) | MFormula::Or(a, b) => {
            write_m(f, a, level)?;
            f.write_str(if matches!(m, MFormula::And(..)) { " & " } else { " | " })?;
            write_m(f, b, level + 1)?;
        }
        MFormula::Update(a, q) => {
            write_m(f, a, MUL)?;
            f.write_str(" . ")?;
            write_q(f, q, MUL + 1)?;
        }
        MFormula::DynBox(q, a) => {
            f.write_char('[')?;
            write_q(f, q, RES)?;
            f.write_char(']')?;
            write_m(f, a, UNARY)?;
        }
        MFormula::AppM(agent, a) => {
            write!(f, "fM[{agent}](")?;
            write_m(f, a, RES)?;
            f.write_char(')')?;
        }
        MFormula::BoxM(agent, a) => {
            write!(f, "boxM[{agent}](")?;
            write_m(f, a, RES)?;
            f.write_char(')')?;
        }
    }
    if level < min {
        f.write_char(')')?;
    }
    Ok(())
}

/// Built only from `top`, `bot`, `|` and `&`, so its sort is not evident.
fn sort_ambiguous(q: &QFormula) -> bool {
    match q {
        QFormula::Top | QFormula::Bot => true,
        QFormula::Or(a, b) | QFormula::And(a, b) => sort_ambiguous(a) && sort_ambiguous(b),
        _ => false,
    }
}

impl Display for QFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_q(f, self, RES)
    }
}

impl Display for MFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_m(f, self, RES)
    }
}

impl Display for Item {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Item::Agent(a) => write!(f, "@{a}"),
            Item::Q(q) => q.fmt(f),
            Item::M(m) => m.fmt(f),
        }
    }
}

impl Display for Conclusion {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Q(q) => q.fmt(f),
            Conclusion::M(m) => m.fmt(f),
        }
    }
}

impl Display for Sequent {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, item) in self.context.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            item.fmt(f)?;
            if let Item::Q(q) = item {
                if self.side() == Side::M && sort_ambiguous(q) {
                    f.write_str(" : Q")?;
                }
            }
        }
        if !self.context.is_empty() {
            f.write_char(' ')?;
        }
        f.write_str(match self.side() {
            Side::Q => "|-Q ",
            Side::M => "|-M ",
        })?;
        self.conclusion.fmt(f)
    }
}
