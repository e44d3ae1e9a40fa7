use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ast::{name, Conclusion, Item, MFormula, Name, QFormula, Sequent, Side};

/// The names a formula may mention, by sort.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    pub agents: BTreeSet<Name>,
    #[serde(default)]
    pub qvars: BTreeSet<Name>,
    #[serde(default)]
    pub mvars: BTreeSet<Name>,
    #[serde(default)]
    pub facts: BTreeSet<Name>,
}

impl Signature {
    pub fn new<'a>(
        agents: impl IntoIterator<Item = &'a str>,
        qvars: impl IntoIterator<Item = &'a str>,
        mvars: impl IntoIterator<Item = &'a str>,
        facts: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        Signature {
            agents: agents.into_iter().map(name).collect(),
            qvars: qvars.into_iter().map(name).collect(),
            mvars: mvars.into_iter().map(name).collect(),
            facts: facts.into_iter().map(name).collect(),
        }
    }

    /// A name declared as both an action and a proposition variable.
    pub fn clash(&self) -> Option<&Name> {
        self.qvars.intersection(&self.mvars).next()
    }

    pub fn merge(&mut self, other: &Signature) {
        self.agents.extend(other.agents.iter().cloned());
        self.qvars.extend(other.qvars.iter().cloned());
        self.mvars.extend(other.mvars.iter().cloned());
        self.facts.extend(other.facts.iter().cloned());
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("column {}: {message}", .offset + 1)]
pub struct SyntaxError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    One,
    Comma,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Star,
    Dot,
    Amp,
    Bar,
    Backslash,
    Slash,
    Hash,
    At,
    Colon,
    Turnstile(Side),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier {s:?}"),
            Tok::One => "'1'",
            Tok::Comma => "','",
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::LBrack => "'['",
            Tok::RBrack => "']'",
            Tok::Star => "'*'",
            Tok::Dot => "'.'",
            Tok::Amp => "'&'",
            Tok::Bar => "'|'",
            Tok::Backslash => "'\\'",
            Tok::Slash => "'/'",
            Tok::Hash => "'#'",
            Tok::At => "'@'",
            Tok::Colon => "':'",
            Tok::Turnstile(Side::Q) => "'|-Q'",
            Tok::Turnstile(Side::M) => "'|-M'",
            Tok::End => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b',' => Tok::Comma,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'*' => Tok::Star,
            b'.' => Tok::Dot,
            b'&' => Tok::Amp,
            b'\\' => Tok::Backslash,
            b'/' => Tok::Slash,
            b'#' => Tok::Hash,
            b'@' => Tok::At,
            b':' => Tok::Colon,
            b'|' => {
                if bytes.get(i + 1) == Some(&b'-') {
                    let side = match bytes.get(i + 2) {
                        Some(b'Q') => Side::Q,
                        Some(b'M') => Side::M,
                        _ => {
                            return Err(SyntaxError {
                                offset: i,
                                message: "expected '|-Q' or '|-M'".into(),
                            })
                        }
                    };
                    i += 3;
                    out.push((start, Tok::Turnstile(side)));
                    continue;
                }
                Tok::Bar
            }
            b'1' if !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric()) => Tok::One,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_owned())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(SyntaxError { offset: i, message: format!("unexpected character {ch:?}") });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BinOp {
    Seq,
    Dot,
    And,
    Or,
    LRes,
    RRes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Modal {
    AppQ,
    AppM,
    BoxQ,
    BoxM,
}

/// Node kind of a formula before sort resolution.
#[derive(Clone, Debug)]
enum Term {
    Top,
    Bot,
    One,
    Ident(String),
    Fact(String),
    Bin(BinOp),
    Modal(Modal, String),
    Dyn,
}

#[derive(Clone, Debug)]
struct Spanned {
    offset: usize,
    term: Term,
    children: Vec<Spanned>,
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    sig: &'a Signature,
}

const KEYWORDS: [&str; 6] = ["top", "bot", "fQ", "fM", "boxQ", "boxM"];

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a Signature) -> Result<Self, SyntaxError> {
        Ok(Parser { toks: lex(text)?, pos: 0, sig })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError { offset: self.offset(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected a name, found {t}")),
        }
    }

    fn agent(&mut self) -> Result<String, SyntaxError> {
        let off = self.offset();
        let a = self.ident()?;
        if !self.sig.agents.contains(a.as_str()) {
            return Err(SyntaxError { offset: off, message: format!("unknown agent {a:?}") });
        }
        Ok(a)
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::End => Ok(()),
            t => self.error(format!("unexpected {t}")),
        }
    }

    fn expr(&mut self) -> Result<Spanned, SyntaxError> {
        self.binary_level(0)
    }

    fn binary_level(&mut self, level: usize) -> Result<Spanned, SyntaxError> {
        if level == 4 {
            return self.unary();
        }
        let mut left = self.binary_level(level + 1)?;
        loop {
            let op = match (level, self.peek()) {
                (0, Tok::Backslash) => BinOp::LRes,
                (0, Tok::Slash) => BinOp::RRes,
                (1, Tok::Bar) => BinOp::Or,
                (2, Tok::Amp) => BinOp::And,
                (3, Tok::Star) => BinOp::Seq,
                (3, Tok::Dot) => BinOp::Dot,
                _ => return Ok(left),
            };
            let offset = self.offset();
            self.bump();
            let right = self.binary_level(level + 1)?;
            left = Spanned { offset, term: Term::Bin(op), children: vec![left, right] };
        }
    }

    fn unary(&mut self) -> Result<Spanned, SyntaxError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Ident(k) if matches!(k.as_str(), "fQ" | "fM" | "boxQ" | "boxM") => {
                self.bump();
                let modal = match k.as_str() {
                    "fQ" => Modal::AppQ,
                    "fM" => Modal::AppM,
                    "boxQ" => Modal::BoxQ,
                    _ => Modal::BoxM,
                };
                self.expect(Tok::LBrack)?;
                let agent = self.agent()?;
                self.expect(Tok::RBrack)?;
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Spanned {
                    offset,
                    term: Term::Modal(modal, agent),
                    children: vec![arg],
                })
            }
            Tok::LBrack => {
                self.bump();
                let q = self.expr()?;
                self.expect(Tok::RBrack)?;
                let m = self.unary()?;
                Ok(Spanned {
                    offset,
                    term: Term::Dyn,
                    children: vec![q, m],
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Spanned, SyntaxError> {
        let offset = self.offset();
        let leaf = |term| Ok(Spanned { offset, term, children: Vec::new() });
        match self.bump() {
            Tok::One => leaf(Term::One),
            Tok::Hash => {
                let off = self.offset();
                let p = self.ident()?;
                if !self.sig.facts.contains(p.as_str()) {
                    return Err(SyntaxError { offset: off, message: format!("unknown fact {p:?}") });
                }
                leaf(Term::Fact(p))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) => match s.as_str() {
                "top" => leaf(Term::Top),
                "bot" => leaf(Term::Bot),
                k if KEYWORDS.contains(&k) => {
                    Err(SyntaxError { offset, message: format!("{k} needs an agent and an argument") })
                }
                _ => leaf(Term::Ident(s)),
            },
            t => Err(SyntaxError { offset, message: format!("expected a formula, found {t}") }),
        }
    }

    /// The sort forced by a term, `None` when it is built only from
    /// `top`, `bot`, `|` and `&`.
    fn infer(&self, t: &Spanned) -> Result<Option<Side>, SyntaxError> {
        Ok(match &t.term {
            Term::Top | Term::Bot => None,
            Term::One => Some(Side::Q),
            Term::Fact(_) => Some(Side::M),
            Term::Ident(s) => Some(self.ident_sort(t.offset, s)?),
            Term::Bin(BinOp::Seq | BinOp::LRes | BinOp::RRes) => Some(Side::Q),
            Term::Bin(BinOp::Dot) | Term::Dyn => Some(Side::M),
            Term::Bin(BinOp::And | BinOp::Or) => {
                match (self.infer(&t.children[0])?, self.infer(&t.children[1])?) {
                    (Some(a), _) => Some(a),
                    (None, b) => b,
                }
            }
            Term::Modal(Modal::AppQ | Modal::BoxQ, _) => Some(Side::Q),
            Term::Modal(Modal::AppM | Modal::BoxM, _) => Some(Side::M),
        })
    }

    fn ident_sort(&self, offset: usize, s: &str) -> Result<Side, SyntaxError> {
        if self.sig.qvars.contains(s) {
            Ok(Side::Q)
        } else if self.sig.mvars.contains(s) {
            Ok(Side::M)
        } else if self.sig.agents.contains(s) {
            Err(SyntaxError { offset, message: format!("agent {s:?} used as a formula; write @{s} in contexts") })
        } else {
            Err(SyntaxError { offset, message: format!("unknown name {s:?}") })
        }
    }

    fn to_q(&self, t: &Spanned) -> Result<QFormula, SyntaxError> {
        let sort_err = |what: &str| {
            Err(SyntaxError { offset: t.offset, message: format!("expected an action, found {what}") })
        };
        let c = |i: usize| self.to_q(&t.children[i]).map(Arc::new);
        Ok(match &t.term {
            Term::Top => QFormula::Top,
            Term::Bot => QFormula::Bot,
            Term::One => QFormula::One,
            Term::Fact(_) => return sort_err("a fact"),
            Term::Ident(s) => match self.ident_sort(t.offset, s)? {
                Side::Q => QFormula::Var(name(s)),
                Side::M => return sort_err("a proposition variable"),
            },
            Term::Bin(op) => match op {
                BinOp::Seq => QFormula::Seq(c(0)?, c(1)?),
                BinOp::LRes => QFormula::LRes(c(0)?, c(1)?),
                BinOp::RRes => QFormula::RRes(c(0)?, c(1)?),
                BinOp::Or => QFormula::Or(c(0)?, c(1)?),
                BinOp::And => QFormula::And(c(0)?, c(1)?),
                BinOp::Dot => return sort_err("an update"),
            },
            Term::Modal(Modal::AppQ, a) => QFormula::AppQ(name(a), c(0)?),
            Term::Modal(Modal::BoxQ, a) => QFormula::BoxQ(name(a), c(0)?),
            Term::Modal(..) => return sort_err("a proposition modality"),
            Term::Dyn => return sort_err("a dynamic box"),
        })
    }

    fn to_m(&self, t: &Spanned) -> Result<MFormula, SyntaxError> {
        let sort_err = |what: &str| {
            Err(SyntaxError { offset: t.offset, message: format!("expected a proposition, found {what}") })
        };
        let c = |i: usize| self.to_m(&t.children[i]).map(Arc::new);
        let cq = |i: usize| self.to_q(&t.children[i]).map(Arc::new);
        Ok(match &t.term {
            Term::Top => MFormula::Top,
            Term::Bot => MFormula::Bot,
            Term::One => return sort_err("'1'"),
            Term::Fact(p) => MFormula::Fact(name(p)),
            Term::Ident(s) => match self.ident_sort(t.offset, s)? {
                Side::M => MFormula::Var(name(s)),
                Side::Q => return sort_err("an action variable"),
            },
            Term::Bin(op) => match op {
                BinOp::Dot => MFormula::Update(c(0)?, cq(1)?),
                BinOp::Or => MFormula::Or(c(0)?, c(1)?),
                BinOp::And => MFormula::And(c(0)?, c(1)?),
                _ => return sort_err("an action connective"),
            },
            Term::Modal(Modal::AppM, a) => MFormula::AppM(name(a), c(0)?),
            Term::Modal(Modal::BoxM, a) => MFormula::BoxM(name(a), c(0)?),
            Term::Modal(..) => return sort_err("an action modality"),
            Term::Dyn => MFormula::DynBox(cq(0)?, c(1)?),
        })
    }

    fn item(&mut self) -> Result<(Option<Side>, Spanned), SyntaxError> {
        let e = self.expr()?;
        if *self.peek() == Tok::Colon {
            self.bump();
            let side = match self.ident()?.as_str() {
                "Q" => Side::Q,
                "M" => Side::M,
                _ => return self.error("expected sort Q or M after ':'"),
            };
            return Ok((Some(side), e));
        }
        let sort = self.infer(&e)?;
        Ok((sort, e))
    }

    fn sequent(&mut self) -> Result<Sequent, SyntaxError> {
        let mut raw: Vec<Result<(Option<Side>, Spanned), String>> = Vec::new();
        if !matches!(self.peek(), Tok::Turnstile(_)) {
            loop {
                if *self.peek() == Tok::At {
                    self.bump();
                    raw.push(Err(self.agent()?));
                } else {
                    raw.push(Ok(self.item()?));
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        let side = match self.bump() {
            Tok::Turnstile(s) => s,
            t => return self.error(format!("expected a turnstile, found {t}")),
        };
        let mut context = Vec::with_capacity(raw.len());
        for r in raw {
            context.push(match r {
                Err(agent) => Item::Agent(name(&agent)),
                Ok((sort, e)) => match sort.unwrap_or(side) {
                    Side::Q => Item::Q(self.to_q(&e)?),
                    Side::M if side == Side::Q => {
                        return Err(SyntaxError {
                            offset: e.offset,
                            message: "propositions cannot appear left of |-Q".into(),
                        })
                    }
                    Side::M => Item::M(self.to_m(&e)?),
                },
            });
        }
        let conclusion = match side {
            Side::Q => {
                if *self.peek() == Tok::End {
                    return self.error("an action sequent needs a right-hand side");
                }
                let e = self.expr()?;
                Conclusion::Q(self.to_q(&e)?)
            }
            Side::M => {
                if *self.peek() == Tok::End {
                    Conclusion::M(MFormula::Bot)
                } else {
                    let e = self.expr()?;
                    Conclusion::M(self.to_m(&e)?)
                }
            }
        };
        self.finish()?;
        Ok(Sequent { context, conclusion })
    }
}

pub fn parse_q(text: &str, sig: &Signature) -> Result<QFormula, SyntaxError> {
    let mut p = Parser::new(text, sig)?;
    let e = p.expr()?;
    p.finish()?;
    p.to_q(&e)
}

pub fn parse_m(text: &str, sig: &Signature) -> Result<MFormula, SyntaxError> {
    let mut p = Parser::new(text, sig)?;
    let e = p.expr()?;
    p.finish()?;
    p.to_m(&e)
}

pub fn parse_sequent(text: &str, sig: &Signature) -> Result<Sequent, SyntaxError> {
    Parser::new(text, sig)?.sequent()
}
