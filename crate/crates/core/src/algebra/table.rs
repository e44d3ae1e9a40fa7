use std::collections::HashSet;
use std::sync::Arc;

use super::report::{Law, ValidationReport};
use super::{AgentId, AlgebraError, EpistemicAlgebra, Enumerate};
use crate::lattice::{join_witness, Elem, FiniteLattice, LatticeMap};

/// A finite quantale: a lattice with a multiplication table and a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuantale {
    lat: Arc<FiniteLattice>,
    mult: Vec<Elem>,
    unit: Elem,
}

impl FiniteQuantale {
    /// Builds a quantale from a row-major multiplication table. Only the
    /// shape is checked here; the laws are reported by [`Self::validate`].
    pub fn new(lat: Arc<FiniteLattice>, mult: Vec<Elem>, unit: Elem) -> Result<Self, AlgebraError> {
        let n = lat.size();
        check_table("mult", &mult, n * n, n)?;
        if unit >= n {
            return Err(AlgebraError::OutOfRange { table: "unit".into(), entry: unit });
        }
        Ok(FiniteQuantale { lat, mult, unit })
    }

    pub fn from_fn(
        lat: Arc<FiniteLattice>,
        unit: Elem,
        f: impl Fn(Elem, Elem) -> Elem,
    ) -> Result<Self, AlgebraError> {
        let n = lat.size();
        let mult = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::new(lat, mult, unit)
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lat
    }

    pub fn unit(&self) -> Elem {
        self.unit
    }

    pub fn mult(&self, a: Elem, b: Elem) -> Elem {
        self.mult[a * self.lat.size() + b]
    }

    pub fn left_residual(&self, a: Elem, b: Elem) -> Elem {
        let l = &self.lat;
        l.join(l.elements().filter(|&c| l.leq(self.mult(a, c), b)))
    }

    pub fn right_residual(&self, b: Elem, a: Elem) -> Elem {
        let l = &self.lat;
        l.join(l.elements().filter(|&c| l.leq(self.mult(c, a), b)))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check(&mut report);
        report
    }

    pub(crate) fn check(&self, report: &mut ValidationReport) {
        let l = &self.lat;
        let lab = |x: Elem| l.label(x).to_owned();
        'assoc: for a in l.elements() {
            for b in l.elements() {
                for c in l.elements() {
                    if self.mult(self.mult(a, b), c) != self.mult(a, self.mult(b, c)) {
                        report.push(Law::MultAssociative, None, vec![lab(a), lab(b), lab(c)]);
                        break 'assoc;
                    }
                }
            }
        }
        for a in l.elements() {
            if self.mult(self.unit, a) != a {
                report.push(Law::MultLeftUnit, None, vec![lab(a)]);
            }
            if self.mult(a, self.unit) != a {
                report.push(Law::MultRightUnit, None, vec![lab(a)]);
            }
        }
        for b in l.elements() {
            if let Some(w) = join_witness(l, l, |x| self.mult(x, b)) {
                let mut w: Vec<String> = w.into_iter().map(lab).collect();
                w.push(lab(b));
                report.push(Law::MultJoinLeft, None, w);
            }
            if let Some(w) = join_witness(l, l, |x| self.mult(b, x)) {
                let mut w: Vec<String> = w.into_iter().map(lab).collect();
                w.insert(0, lab(b));
                report.push(Law::MultJoinRight, None, w);
            }
        }
    }
}

/// A finite right module over a quantale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    lat: Arc<FiniteLattice>,
    quantale: Arc<FiniteQuantale>,
    act: Vec<Elem>,
}

impl FiniteModule {
    /// `act[m * |Q| + q]` is `m · q`.
    pub fn new(
        lat: Arc<FiniteLattice>,
        quantale: Arc<FiniteQuantale>,
        act: Vec<Elem>,
    ) -> Result<Self, AlgebraError> {
        check_table("act", &act, lat.size() * quantale.lattice().size(), lat.size())?;
        Ok(FiniteModule { lat, quantale, act })
    }

    pub fn from_fn(
        lat: Arc<FiniteLattice>,
        quantale: Arc<FiniteQuantale>,
        f: impl Fn(Elem, Elem) -> Elem,
    ) -> Result<Self, AlgebraError> {
        let nq = quantale.lattice().size();
        let act = (0..lat.size() * nq).map(|i| f(i / nq, i % nq)).collect();
        Self::new(lat, quantale, act)
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lat
    }

    pub fn quantale(&self) -> &Arc<FiniteQuantale> {
        &self.quantale
    }

    pub fn act(&self, m: Elem, q: Elem) -> Elem {
        self.act[m * self.quantale.lattice().size() + q]
    }

    pub fn dyn_box(&self, q: Elem, m: Elem) -> Elem {
        let l = &self.lat;
        l.join(l.elements().filter(|&x| l.leq(self.act(x, q), m)))
    }

    pub fn co_residual(&self, m: Elem, m2: Elem) -> Elem {
        let ql = self.quantale.lattice();
        ql.join(ql.elements().filter(|&q| self.lat.leq(self.act(m, q), m2)))
    }

    /// `Ker(q) = {m | m·q = ⊥}`.
    pub fn kernel(&self, q: Elem) -> Vec<Elem> {
        self.lat
            .elements()
            .filter(|&m| self.act(m, q) == self.lat.bottom())
            .collect()
    }

    /// `{φ | φ·q ≤ φ for every q}`.
    pub fn stabilizer(&self) -> Vec<Elem> {
        self.lat.elements().filter(|&m| self.is_stable(m)).collect()
    }

    pub fn is_stable(&self, m: Elem) -> bool {
        self.quantale
            .lattice()
            .elements()
            .all(|q| self.lat.leq(self.act(m, q), m))
    }

    pub(crate) fn check(&self, report: &mut ValidationReport) {
        let ml = &self.lat;
        let q = &self.quantale;
        let ql = q.lattice();
        let mlab = |x: Elem| ml.label(x).to_owned();
        let qlab = |x: Elem| ql.label(x).to_owned();
        for m in ml.elements() {
            if self.act(m, q.unit()) != m {
                report.push(Law::ActUnit, None, vec![mlab(m)]);
            }
        }
        'compose: for m in ml.elements() {
            for a in ql.elements() {
                for b in ql.elements() {
                    if self.act(m, q.mult(a, b)) != self.act(self.act(m, a), b) {
                        report.push(Law::ActCompose, None, vec![mlab(m), qlab(a), qlab(b)]);
                        break 'compose;
                    }
                }
            }
        }
        for a in ql.elements() {
            if let Some(w) = join_witness(ml, ml, |x| self.act(x, a)) {
                let mut w: Vec<String> = w.into_iter().map(mlab).collect();
                w.push(qlab(a));
                report.push(Law::ActJoinModule, None, w);
            }
        }
        for m in ml.elements() {
            if let Some(w) = join_witness(ql, ml, |x| self.act(m, x)) {
                let mut w: Vec<String> = w.into_iter().map(qlab).collect();
                w.insert(0, mlab(m));
                report.push(Law::ActJoinQuantale, None, w);
            }
        }
    }
}

/// A finite epistemic system with explicit lattices and tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicSystem {
    module: FiniteModule,
    agents: Vec<AgentId>,
    app_m: Vec<LatticeMap>,
    app_q: Vec<LatticeMap>,
    box_m: Vec<Vec<Elem>>,
    box_q: Vec<Vec<Elem>>,
    dyn_box: Vec<Elem>,
}

impl EpistemicSystem {
    /// Assembles a system. Maps must act on the module and quantale
    /// lattices; law checking is left to [`Self::validate`].
    pub fn new(
        module: FiniteModule,
        agents: Vec<AgentId>,
        app_m: Vec<LatticeMap>,
        app_q: Vec<LatticeMap>,
    ) -> Result<Self, AlgebraError> {
        let mut seen = HashSet::new();
        for a in &agents {
            if !seen.insert(a.clone()) {
                return Err(AlgebraError::DuplicateAgent(a.0.clone()));
            }
        }
        for (name, maps, lat) in [
            ("appM", &app_m, module.lattice()),
            ("appQ", &app_q, module.quantale().lattice()),
        ] {
            if maps.len() != agents.len() {
                return Err(AlgebraError::TableSize {
                    table: name.into(),
                    expected: agents.len(),
                    got: maps.len(),
                });
            }
            for f in maps.iter() {
                if f.source().as_ref() != lat.as_ref() || f.target().as_ref() != lat.as_ref() {
                    return Err(AlgebraError::TableSize {
                        table: name.into(),
                        expected: lat.size(),
                        got: f.table().len(),
                    });
                }
            }
        }
        let box_m = app_m.iter().map(LatticeMap::upper_adjoint_table).collect();
        let box_q = app_q.iter().map(LatticeMap::upper_adjoint_table).collect();
        let ml = module.lattice();
        let ql = module.quantale().lattice();
        let mut dyn_box = Vec::with_capacity(ql.size() * ml.size());
        for q in ql.elements() {
            for m in ml.elements() {
                dyn_box.push(module.dyn_box(q, m));
            }
        }
        Ok(EpistemicSystem { module, agents, app_m, app_q, box_m, box_q, dyn_box })
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn quantale(&self) -> &Arc<FiniteQuantale> {
        self.module.quantale()
    }

    pub fn m_lattice(&self) -> &Arc<FiniteLattice> {
        self.module.lattice()
    }

    pub fn q_lattice(&self) -> &Arc<FiniteLattice> {
        self.module.quantale().lattice()
    }

    pub fn app_m_map(&self, agent: usize) -> &LatticeMap {
        &self.app_m[agent]
    }

    pub fn app_q_map(&self, agent: usize) -> &LatticeMap {
        &self.app_q[agent]
    }

    pub fn kernel(&self, q: Elem) -> Vec<Elem> {
        self.module.kernel(q)
    }

    pub fn stabilizer(&self) -> Vec<Elem> {
        self.module.stabilizer()
    }

    /// Every quantale, module and appearance law, checked exhaustively.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.quantale().check(&mut report);
        self.module.check(&mut report);
        let ml = self.m_lattice();
        let ql = self.q_lattice();
        let q = self.quantale();
        let mlab = |x: Elem| ml.label(x).to_owned();
        let qlab = |x: Elem| ql.label(x).to_owned();
        for (i, agent) in self.agents.iter().enumerate() {
            let name = Some(agent.as_str());
            let fm = &self.app_m[i];
            let fq = &self.app_q[i];
            if let Some(w) = fm.join_preservation_witness() {
                report.push(Law::AppMJoin, name, w.into_iter().map(mlab).collect());
            }
            if let Some(w) = fq.join_preservation_witness() {
                report.push(Law::AppQJoin, name, w.into_iter().map(qlab).collect());
            }
            'eq1: for a in ql.elements() {
                for b in ql.elements() {
                    let lhs = fq.apply(q.mult(a, b));
                    let rhs = q.mult(fq.apply(a), fq.apply(b));
                    if !ql.leq(lhs, rhs) {
                        report.push(Law::LaxMult, name, vec![qlab(a), qlab(b)]);
                        break 'eq1;
                    }
                }
            }
            'eq2: for m in ml.elements() {
                for a in ql.elements() {
                    let lhs = fm.apply(self.module.act(m, a));
                    let rhs = self.module.act(fm.apply(m), fq.apply(a));
                    if !ml.leq(lhs, rhs) {
                        report.push(Law::LaxUpdate, name, vec![mlab(m), qlab(a)]);
                        break 'eq2;
                    }
                }
            }
            if !ql.leq(q.unit(), fq.apply(q.unit())) {
                report.push(Law::LaxUnit, name, vec![qlab(q.unit())]);
            }
        }
        report
    }

    /// `s →_A s′` iff `s′ ≤ f_A(s)`, for atoms `s, s′`.
    pub fn accessibility(&self, agent: usize) -> Result<Vec<(Elem, Elem)>, AlgebraError> {
        let ml = self.m_lattice();
        if !ml.is_atomistic() {
            return Err(AlgebraError::Unsupported);
        }
        let atoms = ml.atoms();
        let f = &self.app_m[agent];
        let mut out = Vec::new();
        for &s in &atoms {
            for &t in &atoms {
                if ml.leq(t, f.apply(s)) {
                    out.push((s, t));
                }
            }
        }
        Ok(out)
    }
}

impl Enumerate for EpistemicSystem {
    fn m_elements(&self) -> Vec<Elem> {
        self.m_lattice().elements().collect()
    }

    fn q_elements(&self) -> Vec<Elem> {
        self.q_lattice().elements().collect()
    }
}

impl EpistemicAlgebra for EpistemicSystem {
    type M = Elem;
    type Q = Elem;

    fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    fn m_bottom(&self) -> Elem {
        self.m_lattice().bottom()
    }

    fn m_top(&self) -> Elem {
        self.m_lattice().top()
    }

    fn m_join(&self, a: &Elem, b: &Elem) -> Elem {
        self.m_lattice().join2(*a, *b)
    }

    fn m_meet(&self, a: &Elem, b: &Elem) -> Elem {
        self.m_lattice().meet2(*a, *b)
    }

    fn m_leq(&self, a: &Elem, b: &Elem) -> bool {
        self.m_lattice().leq(*a, *b)
    }

    fn q_bottom(&self) -> Elem {
        self.q_lattice().bottom()
    }

    fn q_top(&self) -> Elem {
        self.q_lattice().top()
    }

    fn q_join(&self, a: &Elem, b: &Elem) -> Elem {
        self.q_lattice().join2(*a, *b)
    }

    fn q_meet(&self, a: &Elem, b: &Elem) -> Elem {
        self.q_lattice().meet2(*a, *b)
    }

    fn q_leq(&self, a: &Elem, b: &Elem) -> bool {
        self.q_lattice().leq(*a, *b)
    }

    fn unit(&self) -> Elem {
        self.quantale().unit()
    }

    fn mult(&self, a: &Elem, b: &Elem) -> Elem {
        self.quantale().mult(*a, *b)
    }

    fn update(&self, m: &Elem, q: &Elem) -> Elem {
        self.module.act(*m, *q)
    }

    fn app_m(&self, agent: usize, m: &Elem) -> Elem {
        self.app_m[agent].apply(*m)
    }

    fn app_q(&self, agent: usize, q: &Elem) -> Elem {
        self.app_q[agent].apply(*q)
    }

    fn box_m(&self, agent: usize, m: &Elem) -> Elem {
        self.box_m[agent][*m]
    }

    fn box_q(&self, agent: usize, q: &Elem) -> Elem {
        self.box_q[agent][*q]
    }

    fn dyn_box(&self, q: &Elem, m: &Elem) -> Elem {
        self.dyn_box[*q * self.m_lattice().size() + *m]
    }

    fn co_residual(&self, m: &Elem, m2: &Elem) -> Elem {
        self.module.co_residual(*m, *m2)
    }

    fn left_residual(&self, a: &Elem, b: &Elem) -> Elem {
        self.quantale().left_residual(*a, *b)
    }

    fn right_residual(&self, b: &Elem, a: &Elem) -> Elem {
        self.quantale().right_residual(*b, *a)
    }

    fn is_stable(&self, m: &Elem) -> bool {
        self.module.is_stable(*m)
    }

    fn m_label(&self, m: &Elem) -> String {
        self.m_lattice().label(*m).to_owned()
    }

    fn q_label(&self, q: &Elem) -> String {
        self.q_lattice().label(*q).to_owned()
    }
}

fn check_table(name: &str, table: &[Elem], len: usize, range: usize) -> Result<(), AlgebraError> {
    if table.len() != len {
        return Err(AlgebraError::TableSize { table: name.into(), expected: len, got: table.len() });
    }
    if let Some(&bad) = table.iter().find(|&&x| x >= range) {
        return Err(AlgebraError::OutOfRange { table: name.into(), entry: bad });
    }
    Ok(())
}
