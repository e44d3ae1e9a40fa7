use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::syntax::Side;

/// Inference rules of the action, proposition and mixed systems.
///
/// Names shared by both systems (`Id`, `BotL`, `OrL`, ...) are told apart
/// by the side of the sequent they conclude.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    Id,
    #[serde(rename = "1L")]
    OneL,
    #[serde(rename = "1R")]
    OneR,
    BotL,
    BotR,
    TopR,
    #[serde(rename = "AppQ_R")]
    AppQR,
    #[serde(rename = "AppQ_L")]
    AppQL,
    #[serde(rename = "BoxQ_R")]
    BoxQR,
    #[serde(rename = "BoxQ_L")]
    BoxQL,
    SeqL,
    SeqR,
    OrL,
    OrR1,
    OrR2,
    AndL1,
    AndL2,
    AndR,
    RResL,
    RResR,
    LResL,
    LResR,
    QCut,
    Agent,
    #[serde(rename = "AppM_R")]
    AppMR,
    #[serde(rename = "AppM_L")]
    AppML,
    #[serde(rename = "BoxM_R")]
    BoxMR,
    #[serde(rename = "BoxM_L")]
    BoxML,
    Contr,
    Exch,
    Fact,
    MCut,
    WeakL,
    WeakR,
    UpdL,
    UpdR,
    DyL,
    DyR,
    #[serde(rename = "1ML")]
    OneML,
    SeqML,
    OrML,
    RResML,
    LResML,
    AndML1,
    AndML2,
    Assumption,
}

use RuleId::*;

impl RuleId {
    pub const ALL: [RuleId; 46] = [
        Id, OneL, OneR, BotL, BotR, TopR, AppQR, AppQL, BoxQR, BoxQL, SeqL, SeqR, OrL, OrR1, OrR2,
        AndL1, AndL2, AndR, RResL, RResR, LResL, LResR, QCut, Agent, AppMR, AppML, BoxMR, BoxML,
        Contr, Exch, Fact, MCut, WeakL, WeakR, UpdL, UpdR, DyL, DyR, OneML, SeqML, OrML, RResML,
        LResML, AndML1, AndML2, Assumption,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Id => "Id",
            OneL => "1L",
            OneR => "1R",
            BotL => "BotL",
            BotR => "BotR",
            TopR => "TopR",
            AppQR => "AppQ_R",
            AppQL => "AppQ_L",
            BoxQR => "BoxQ_R",
            BoxQL => "BoxQ_L",
            SeqL => "SeqL",
            SeqR => "SeqR",
            OrL => "OrL",
            OrR1 => "OrR1",
            OrR2 => "OrR2",
            AndL1 => "AndL1",
            AndL2 => "AndL2",
            AndR => "AndR",
            RResL => "RResL",
            RResR => "RResR",
            LResL => "LResL",
            LResR => "LResR",
            QCut => "QCut",
            Agent => "Agent",
            AppMR => "AppM_R",
            AppML => "AppM_L",
            BoxMR => "BoxM_R",
            BoxML => "BoxM_L",
            Contr => "Contr",
            Exch => "Exch",
            Fact => "Fact",
            MCut => "MCut",
            WeakL => "WeakL",
            WeakR => "WeakR",
            UpdL => "UpdL",
            UpdR => "UpdR",
            DyL => "DyL",
            DyR => "DyR",
            OneML => "1ML",
            SeqML => "SeqML",
            OrML => "OrML",
            RResML => "RResML",
            LResML => "LResML",
            AndML1 => "AndML1",
            AndML2 => "AndML2",
            Assumption => "Assumption",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Id | OneR | BotL | TopR | Assumption => 0,
            SeqR | OrL | AndR | RResL | LResL | QCut | MCut | UpdR | DyL | OrML | RResML
            | LResML => 2,
            _ => 1,
        }
    }

    /// Sides of the sequents this rule may conclude.
    pub fn sides(self) -> &'static [Side] {
        match self {
            Id | BotL | TopR | AndR | OrR1 | OrR2 | AndL1 | AndL2 | OrL | Assumption => {
                &[Side::Q, Side::M]
            }
            OneL | OneR | AppQR | AppQL | BoxQR | BoxQL | SeqL | SeqR | RResL | RResR | LResL
            | LResR | QCut | Agent => &[Side::Q],
            _ => &[Side::M],
        }
    }

    /// Sides of the premises when concluding a sequent on `side`.
    pub fn premise_sides(self, side: Side) -> Vec<Side> {
        match self {
            UpdR | DyL => vec![Side::M, Side::Q],
            RResML | LResML => vec![Side::Q, Side::M],
            _ => vec![side; self.arity()],
        }
    }

    /// Every (rule, side) combination that is a rule of some system.
    pub fn instances() -> Vec<(RuleId, Side)> {
        RuleId::ALL
            .iter()
            .flat_map(|r| r.sides().iter().map(move |s| (*r, *s)))
            .collect()
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule {0}")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_match_serde() {
        for r in RuleId::ALL {
            let json = serde_json::to_string(&r).unwrap();
            assert_eq!(json, format!("\"{}\"", r.name()));
            assert_eq!(r.name().parse::<RuleId>().unwrap(), r);
        }
    }

    #[test]
    fn instance_count() {
        assert_eq!(RuleId::instances().len(), 56);
    }
}
