use std::fmt;

use serde::Serialize;

/// A law of quantales, modules or epistemic systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Law {
    MultAssociative,
    MultLeftUnit,
    MultRightUnit,
    /// `(⋁S)•b = ⋁{s•b}`.
    MultJoinLeft,
    /// `a•(⋁S) = ⋁{a•s}`.
    MultJoinRight,
    ActUnit,
    ActCompose,
    /// `(⋁S)·q = ⋁{s·q}`.
    ActJoinModule,
    /// `m·(⋁S) = ⋁{m·s}`.
    ActJoinQuantale,
    AppMJoin,
    AppQJoin,
    /// `f(q•q′) ≤ f(q)•f(q′)`.
    LaxMult,
    /// `f(m·q) ≤ f(m)·f(q)`.
    LaxUpdate,
    /// `1 ≤ f(1)`.
    LaxUnit,
}

impl Law {
    pub fn describe(self) -> &'static str {
        match self {
            Law::MultAssociative => "multiplication is associative",
            Law::MultLeftUnit => "1 • q = q",
            Law::MultRightUnit => "q • 1 = q",
            Law::MultJoinLeft => "multiplication preserves joins on the left",
            Law::MultJoinRight => "multiplication preserves joins on the right",
            Law::ActUnit => "m · 1 = m",
            Law::ActCompose => "m · (q • q') = (m · q) · q'",
            Law::ActJoinModule => "action preserves joins of propositions",
            Law::ActJoinQuantale => "action preserves joins of actions",
            Law::AppMJoin => "proposition appearance preserves joins",
            Law::AppQJoin => "action appearance preserves joins",
            Law::LaxMult => "f(q • q') <= f(q) • f(q')",
            Law::LaxUpdate => "f(m · q) <= f(m) · f(q)",
            Law::LaxUnit => "1 <= f(1)",
        }
    }
}

/// One violated law with the elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: Law,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agent: Option<String>,
    pub witness: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.law.describe())?;
        if let Some(a) = &self.agent {
            write!(f, " (agent {a})")?;
        }
        write!(f, " fails at [{}]", self.witness.join(", "))
    }
}

/// Every violated law, one witness per law and agent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub(crate) fn push(&mut self, law: Law, agent: Option<&str>, witness: Vec<String>) {
        let agent = agent.map(str::to_owned);
        if !self.violations.iter().any(|v| v.law == law && v.agent == agent) {
            self.violations.push(Violation { law, agent, witness });
        }
    }
}
