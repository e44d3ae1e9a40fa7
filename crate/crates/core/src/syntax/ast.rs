use std::sync::Arc;

pub type Name = Arc<str>;

/// Action formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QFormula {
    Top,
    Bot,
    One,
    Var(Name),
    /// `q * q′`
    Seq(Arc<QFormula>, Arc<QFormula>),
    /// `q \ q′`
    LRes(Arc<QFormula>, Arc<QFormula>),
    /// `q / q′`
    RRes(Arc<QFormula>, Arc<QFormula>),
    Or(Arc<QFormula>, Arc<QFormula>),
    And(Arc<QFormula>, Arc<QFormula>),
    AppQ(Name, Arc<QFormula>),
    BoxQ(Name, Arc<QFormula>),
}

/// Proposition formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MFormula {
    Top,
    Bot,
    Fact(Name),
    Var(Name),
    And(Arc<MFormula>, Arc<MFormula>),
    Or(Arc<MFormula>, Arc<MFormula>),
    /// `[q]m`
    DynBox(Arc<QFormula>, Arc<MFormula>),
    /// `m . q`
    Update(Arc<MFormula>, Arc<QFormula>),
    AppM(Name, Arc<MFormula>),
    BoxM(Name, Arc<MFormula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item {
    Agent(Name),
    Q(QFormula),
    M(MFormula),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Q,
    M,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Conclusion {
    Q(QFormula),
    M(MFormula),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub context: Vec<Item>,
    pub conclusion: Conclusion,
}

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

impl QFormula {
    pub fn var(s: &str) -> Self {
        QFormula::Var(name(s))
    }

    pub fn seq(a: QFormula, b: QFormula) -> Self {
        QFormula::Seq(Arc::new(a), Arc::new(b))
    }

    pub fn lres(a: QFormula, b: QFormula) -> Self {
        QFormula::LRes(Arc::new(a), Arc::new(b))
    }

    pub fn rres(a: QFormula, b: QFormula) -> Self {
        QFormula::RRes(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: QFormula, b: QFormula) -> Self {
        QFormula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn and(a: QFormula, b: QFormula) -> Self {
        QFormula::And(Arc::new(a), Arc::new(b))
    }

    pub fn app(agent: &str, q: QFormula) -> Self {
        QFormula::AppQ(name(agent), Arc::new(q))
    }

    pub fn boxq(agent: &str, q: QFormula) -> Self {
        QFormula::BoxQ(name(agent), Arc::new(q))
    }

    /// Every subformula including `self`, parents before children,
    /// without duplicates.
    pub fn subformulas(&self) -> Vec<QFormula> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<QFormula>) {
        if out.contains(self) {
            return;
        }
        out.push(self.clone());
        match self {
            QFormula::Seq(a, b)
            | QFormula::LRes(a, b)
            | QFormula::RRes(a, b)
            | QFormula::Or(a, b)
            | QFormula::And(a, b) => {
                a.collect(out);
                b.collect(out);
            }
            QFormula::AppQ(_, a) | QFormula::BoxQ(_, a) => a.collect(out),
            _ => {}
        }
    }

    pub fn size(&self) -> usize {
        match self {
            QFormula::Seq(a, b)
            | QFormula::LRes(a, b)
            | QFormula::RRes(a, b)
            | QFormula::Or(a, b)
            | QFormula::And(a, b) => 1 + a.size() + b.size(),
            QFormula::AppQ(_, a) | QFormula::BoxQ(_, a) => 1 + a.size(),
            _ => 1,
        }
    }
}

impl MFormula {
    pub fn var(s: &str) -> Self {
        MFormula::Var(name(s))
    }

    pub fn fact(s: &str) -> Self {
        MFormula::Fact(name(s))
    }

    pub fn and(a: MFormula, b: MFormula) -> Self {
        MFormula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: MFormula, b: MFormula) -> Self {
        MFormula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn dynbox(q: QFormula, m: MFormula) -> Self {
        MFormula::DynBox(Arc::new(q), Arc::new(m))
    }

    pub fn update(m: MFormula, q: QFormula) -> Self {
        MFormula::Update(Arc::new(m), Arc::new(q))
    }

    pub fn app(agent: &str, m: MFormula) -> Self {
        MFormula::AppM(name(agent), Arc::new(m))
    }

    pub fn boxm(agent: &str, m: MFormula) -> Self {
        MFormula::BoxM(name(agent), Arc::new(m))
    }

    /// Every M-subformula including `self`, parents before children.
    pub fn subformulas(&self) -> Vec<MFormula> {
        let mut out = Vec::new();
        self.collect(&mut out, &mut Vec::new());
        out
    }

    /// Every Q-formula occurring inside, with its subformulas.
    pub fn q_subformulas(&self) -> Vec<QFormula> {
        let mut out = Vec::new();
        self.collect(&mut Vec::new(), &mut out);
        out
    }

    fn collect(&self, ms: &mut Vec<MFormula>, qs: &mut Vec<QFormula>) {
        if ms.contains(self) {
            return;
        }
        ms.push(self.clone());
        match self {
            MFormula::And(a, b) | MFormula::Or(a, b) => {
                a.collect(ms, qs);
                b.collect(ms, qs);
            }
            MFormula::DynBox(q, m) | MFormula::Update(m, q) => {
                m.collect(ms, qs);
                q.collect(qs);
            }
            MFormula::AppM(_, a) | MFormula::BoxM(_, a) => a.collect(ms, qs),
            _ => {}
        }
    }

    pub fn size(&self) -> usize {
        match self {
            MFormula::And(a, b) | MFormula::Or(a, b) => 1 + a.size() + b.size(),
            MFormula::DynBox(q, m) | MFormula::Update(m, q) => 1 + q.size() + m.size(),
            MFormula::AppM(_, a) | MFormula::BoxM(_, a) => 1 + a.size(),
            _ => 1,
        }
    }
}

impl Item {
    pub fn agent(s: &str) -> Self {
        Item::Agent(name(s))
    }

    pub fn is_agent(&self) -> bool {
        matches!(self, Item::Agent(_))
    }

    pub fn as_q(&self) -> Option<&QFormula> {
        match self {
            Item::Q(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_m(&self) -> Option<&MFormula> {
        match self {
            Item::M(m) => Some(m),
            _ => None,
        }
    }
}

impl Conclusion {
    pub fn side(&self) -> Side {
        match self {
            Conclusion::Q(_) => Side::Q,
            Conclusion::M(_) => Side::M,
        }
    }
}

impl Sequent {
    pub fn q(context: Vec<Item>, q: QFormula) -> Self {
        Sequent { context, conclusion: Conclusion::Q(q) }
    }

    pub fn m(context: Vec<Item>, m: MFormula) -> Self {
        Sequent { context, conclusion: Conclusion::M(m) }
    }

    pub fn side(&self) -> Side {
        self.conclusion.side()
    }

    pub fn q_conclusion(&self) -> Option<&QFormula> {
        match &self.conclusion {
            Conclusion::Q(q) => Some(q),
            _ => None,
        }
    }

    pub fn m_conclusion(&self) -> Option<&MFormula> {
        match &self.conclusion {
            Conclusion::M(m) => Some(m),
            _ => None,
        }
    }

    /// Q-side sequents may not mention M-formulas on the left.
    pub fn is_well_formed(&self) -> bool {
        self.side() == Side::M || self.context.iter().all(|i| !matches!(i, Item::M(_)))
    }
}
