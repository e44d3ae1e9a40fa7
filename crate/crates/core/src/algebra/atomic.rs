use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::report::{Law, ValidationReport};
use super::table::{EpistemicSystem, FiniteModule, FiniteQuantale};
use super::{AgentId, AlgebraError, EpistemicAlgebra, Enumerate};
use crate::lattice::{FiniteLattice, LatticeMap};

/// A subset of the atoms of one carrier.
pub type AtomSet = FixedBitSet;

/// Largest atom count per side accepted by [`AtomicSystem::to_table`].
pub const MAX_TABLE_ATOMS: usize = 5;

/// An epistemic system whose module and quantale are powersets of atoms.
///
/// Every operation is stored on atoms and extended by unions, so joins are
/// preserved by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicSystem {
    m_atoms: Vec<String>,
    q_atoms: Vec<String>,
    agents: Vec<AgentId>,
    act: Vec<Vec<AtomSet>>,
    mult: Vec<Vec<AtomSet>>,
    unit: AtomSet,
    app_m: Vec<Vec<AtomSet>>,
    app_q: Vec<Vec<AtomSet>>,
}

/// The four structural conditions satisfied by systems compiled from
/// Kripke models. Each field holds a witness of failure, if any.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Theorem1Report {
    /// Both carriers are Boolean, atomistic and distributive.
    pub boolean_carriers: bool,
    /// An atom pair `(m, q)` with `m·q` neither ⊥ nor an atom.
    pub update_not_atomic: Option<(String, String)>,
    /// An atom pair `(a, b)` with `a•b` not an atom.
    pub mult_not_atomic: Option<(String, String)>,
    /// Nonzero `m`, `q` with `m·q = ⊥`.
    pub zero_update: Option<(String, String)>,
}

impl Theorem1Report {
    pub fn conditions(&self) -> [bool; 4] {
        [
            self.boolean_carriers,
            self.update_not_atomic.is_none(),
            self.mult_not_atomic.is_none(),
            self.zero_update.is_none(),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.conditions().iter().all(|&c| c)
    }
}

impl AtomicSystem {
    /// `act[x][a]`, `mult[a][b]`, `app_m[agent][x]`, `app_q[agent][a]`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m_atoms: Vec<String>,
        q_atoms: Vec<String>,
        agents: Vec<AgentId>,
        act: Vec<Vec<AtomSet>>,
        mult: Vec<Vec<AtomSet>>,
        unit: AtomSet,
        app_m: Vec<Vec<AtomSet>>,
        app_q: Vec<Vec<AtomSet>>,
    ) -> Result<Self, AlgebraError> {
        let nm = m_atoms.len();
        let nq = q_atoms.len();
        unique(&m_atoms)?;
        unique(&q_atoms)?;
        let mut seen = HashSet::new();
        for a in &agents {
            if !seen.insert(a.as_str()) {
                return Err(AlgebraError::DuplicateAgent(a.0.clone()));
            }
        }
        shape("act", &act, nm, nq, nm)?;
        shape("mult", &mult, nq, nq, nq)?;
        shape("appM", &app_m, agents.len(), nm, nm)?;
        shape("appQ", &app_q, agents.len(), nq, nq)?;
        if unit.len() != nq {
            return Err(AlgebraError::TableSize { table: "unit".into(), expected: nq, got: unit.len() });
        }
        Ok(AtomicSystem { m_atoms, q_atoms, agents, act, mult, unit, app_m, app_q })
    }

    pub fn m_atoms(&self) -> &[String] {
        &self.m_atoms
    }

    pub fn q_atoms(&self) -> &[String] {
        &self.q_atoms
    }

    pub fn m_atom_index(&self, name: &str) -> Option<usize> {
        self.m_atoms.iter().position(|a| a == name)
    }

    pub fn q_atom_index(&self, name: &str) -> Option<usize> {
        self.q_atoms.iter().position(|a| a == name)
    }

    pub fn m_set<I: IntoIterator<Item = usize>>(&self, atoms: I) -> AtomSet {
        set_of(self.m_atoms.len(), atoms)
    }

    pub fn q_set<I: IntoIterator<Item = usize>>(&self, atoms: I) -> AtomSet {
        set_of(self.q_atoms.len(), atoms)
    }

    pub fn act_atoms(&self, x: usize, a: usize) -> &AtomSet {
        &self.act[x][a]
    }

    pub fn mult_atoms(&self, a: usize, b: usize) -> &AtomSet {
        &self.mult[a][b]
    }

    pub fn app_m_atoms(&self, agent: usize, x: usize) -> &AtomSet {
        &self.app_m[agent][x]
    }

    pub fn app_q_atoms(&self, agent: usize, a: usize) -> &AtomSet {
        &self.app_q[agent][a]
    }

    pub fn unit_atoms(&self) -> &AtomSet {
        &self.unit
    }

    /// Quantale and module laws plus the three lax conditions, atomwise.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let nm = self.m_atoms.len();
        let nq = self.q_atoms.len();
        let ql = |a: usize| self.q_atoms[a].clone();
        let ml = |x: usize| self.m_atoms[x].clone();
        'assoc: for a in 0..nq {
            for b in 0..nq {
                for c in 0..nq {
                    let l = self.mult_set(&self.mult[a][b], &self.q_set([c]));
                    let r = self.mult_set(&self.q_set([a]), &self.mult[b][c]);
                    if l != r {
                        report.push(Law::MultAssociative, None, vec![ql(a), ql(b), ql(c)]);
                        break 'assoc;
                    }
                }
            }
        }
        for a in 0..nq {
            let single = self.q_set([a]);
            if self.mult_set(&self.unit, &single) != single {
                report.push(Law::MultLeftUnit, None, vec![ql(a)]);
            }
            if self.mult_set(&single, &self.unit) != single {
                report.push(Law::MultRightUnit, None, vec![ql(a)]);
            }
        }
        for x in 0..nm {
            let single = self.m_set([x]);
            if self.update_set(&single, &self.unit) != single {
                report.push(Law::ActUnit, None, vec![ml(x)]);
            }
        }
        'compose: for x in 0..nm {
            for a in 0..nq {
                for b in 0..nq {
                    let l = self.update_set(&self.m_set([x]), &self.mult[a][b]);
                    let r = self.update_set(&self.act[x][a], &self.q_set([b]));
                    if l != r {
                        report.push(Law::ActCompose, None, vec![ml(x), ql(a), ql(b)]);
                        break 'compose;
                    }
                }
            }
        }
        for (i, agent) in self.agents.iter().enumerate() {
            let name = Some(agent.as_str());
            'eq1: for a in 0..nq {
                for b in 0..nq {
                    let lhs = self.app_q_set(i, &self.mult[a][b]);
                    let rhs = self.mult_set(&self.app_q[i][a], &self.app_q[i][b]);
                    if !lhs.is_subset(&rhs) {
                        report.push(Law::LaxMult, name, vec![ql(a), ql(b)]);
                        break 'eq1;
                    }
                }
            }
            'eq2: for x in 0..nm {
                for a in 0..nq {
                    let lhs = self.app_m_set(i, &self.act[x][a]);
                    let rhs = self.update_set(&self.app_m[i][x], &self.app_q[i][a]);
                    if !lhs.is_subset(&rhs) {
                        report.push(Law::LaxUpdate, name, vec![ml(x), ql(a)]);
                        break 'eq2;
                    }
                }
            }
            if !self.unit.is_subset(&self.app_q_set(i, &self.unit)) {
                report.push(Law::LaxUnit, name, vec![self.q_label(&self.unit)]);
            }
        }
        report
    }

    /// The structural conditions on atoms, each checked literally.
    pub fn theorem1(&self) -> Theorem1Report {
        let mut report = Theorem1Report { boolean_carriers: true, ..Default::default() };
        for x in 0..self.m_atoms.len() {
            for a in 0..self.q_atoms.len() {
                let r = &self.act[x][a];
                let pair = || (self.m_atoms[x].clone(), self.q_atoms[a].clone());
                if r.count_ones(..) > 1 && report.update_not_atomic.is_none() {
                    report.update_not_atomic = Some(pair());
                }
                if r.is_clear() && report.zero_update.is_none() {
                    report.zero_update = Some(pair());
                }
            }
        }
        'mult: for a in 0..self.q_atoms.len() {
            for b in 0..self.q_atoms.len() {
                if self.mult[a][b].count_ones(..) != 1 {
                    report.mult_not_atomic = Some((self.q_atoms[a].clone(), self.q_atoms[b].clone()));
                    break 'mult;
                }
            }
        }
        report
    }

    /// `s →_A t` iff `t ∈ f_A(s)`, as atom-name pairs.
    pub fn accessibility(&self, agent: usize) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (x, succ) in self.app_m[agent].iter().enumerate() {
            for y in succ.ones() {
                out.push((self.m_atoms[x].clone(), self.m_atoms[y].clone()));
            }
        }
        out
    }

    /// Materializes both powersets as explicit lattices with tables.
    pub fn to_table(&self) -> Result<EpistemicSystem, AlgebraError> {
        let nm = self.m_atoms.len();
        let nq = self.q_atoms.len();
        if nm.max(nq) > MAX_TABLE_ATOMS {
            return Err(AlgebraError::TooLarge(nm.max(nq)));
        }
        let mlat = Arc::new(FiniteLattice::powerset(nm)?.with_labels(
            (0..1usize << nm).map(|i| self.m_label(&mask_set(nm, i))).collect(),
        )?);
        let qlat = Arc::new(FiniteLattice::powerset(nq)?.with_labels(
            (0..1usize << nq).map(|i| self.q_label(&mask_set(nq, i))).collect(),
        )?);
        let unit = set_mask(&self.unit);
        let quantale = Arc::new(FiniteQuantale::from_fn(qlat.clone(), unit, |a, b| {
            set_mask(&self.mult_set(&mask_set(nq, a), &mask_set(nq, b)))
        })?);
        let module = FiniteModule::from_fn(mlat.clone(), quantale, |m, q| {
            set_mask(&self.update_set(&mask_set(nm, m), &mask_set(nq, q)))
        })?;
        let app_m = (0..self.agents.len())
            .map(|i| {
                let table = mlat.elements().map(|m| set_mask(&self.app_m_set(i, &mask_set(nm, m))));
                LatticeMap::new(mlat.clone(), mlat.clone(), table.collect())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let app_q = (0..self.agents.len())
            .map(|i| {
                let table = qlat.elements().map(|q| set_mask(&self.app_q_set(i, &mask_set(nq, q))));
                LatticeMap::new(qlat.clone(), qlat.clone(), table.collect())
            })
            .collect::<Result<Vec<_>, _>>()?;
        EpistemicSystem::new(module, self.agents.clone(), app_m, app_q)
    }

    fn update_set(&self, m: &AtomSet, q: &AtomSet) -> AtomSet {
        let mut out = self.m_set([]);
        for x in m.ones() {
            for a in q.ones() {
                out.union_with(&self.act[x][a]);
            }
        }
        out
    }

    fn mult_set(&self, p: &AtomSet, q: &AtomSet) -> AtomSet {
        let mut out = self.q_set([]);
        for a in p.ones() {
            for b in q.ones() {
                out.union_with(&self.mult[a][b]);
            }
        }
        out
    }

    fn app_m_set(&self, agent: usize, m: &AtomSet) -> AtomSet {
        let mut out = self.m_set([]);
        for x in m.ones() {
            out.union_with(&self.app_m[agent][x]);
        }
        out
    }

    fn app_q_set(&self, agent: usize, q: &AtomSet) -> AtomSet {
        let mut out = self.q_set([]);
        for a in q.ones() {
            out.union_with(&self.app_q[agent][a]);
        }
        out
    }
}

impl EpistemicAlgebra for AtomicSystem {
    type M = AtomSet;
    type Q = AtomSet;

    fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    fn m_bottom(&self) -> AtomSet {
        self.m_set([])
    }

    fn m_top(&self) -> AtomSet {
        self.m_set(0..self.m_atoms.len())
    }

    fn m_join(&self, a: &AtomSet, b: &AtomSet) -> AtomSet {
        a | b
    }

    fn m_meet(&self, a: &AtomSet, b: &AtomSet) -> AtomSet {
        a & b
    }

    fn m_leq(&self, a: &AtomSet, b: &AtomSet) -> bool {
        a.is_subset(b)
    }

    fn q_bottom(&self) -> AtomSet {
        self.q_set([])
    }

    fn q_top(&self) -> AtomSet {
        self.q_set(0..self.q_atoms.len())
    }

    fn q_join(&self, a: &AtomSet, b: &AtomSet) -> AtomSet {
        a | b
    }

    fn q_meet(&self, a: &AtomSet, b: &AtomSet) -> AtomSet {
        a & b
    }

    fn q_leq(&self, a: &AtomSet, b: &AtomSet) -> bool {
        a.is_subset(b)
    }

    fn unit(&self) -> AtomSet {
        self.unit.clone()
    }

    fn mult(&self, a: &AtomSet, b: &AtomSet) -> AtomSet {
        self.mult_set(a, b)
    }

    fn update(&self, m: &AtomSet, q: &AtomSet) -> AtomSet {
        self.update_set(m, q)
    }

    fn app_m(&self, agent: usize, m: &AtomSet) -> AtomSet {
        self.app_m_set(agent, m)
    }

    fn app_q(&self, agent: usize, q: &AtomSet) -> AtomSet {
        self.app_q_set(agent, q)
    }

    fn box_m(&self, agent: usize, m: &AtomSet) -> AtomSet {
        self.m_set((0..self.m_atoms.len()).filter(|&x| self.app_m[agent][x].is_subset(m)))
    }

    fn box_q(&self, agent: usize, q: &AtomSet) -> AtomSet {
        self.q_set((0..self.q_atoms.len()).filter(|&a| self.app_q[agent][a].is_subset(q)))
    }

    fn dyn_box(&self, q: &AtomSet, m: &AtomSet) -> AtomSet {
        self.m_set((0..self.m_atoms.len()).filter(|&x| q.ones().all(|a| self.act[x][a].is_subset(m))))
    }

    fn co_residual(&self, m: &AtomSet, m2: &AtomSet) -> AtomSet {
        self.q_set((0..self.q_atoms.len()).filter(|&a| m.ones().all(|x| self.act[x][a].is_subset(m2))))
    }

    fn left_residual(&self, a: &AtomSet, b: &AtomSet) -> AtomSet {
        self.q_set((0..self.q_atoms.len()).filter(|&c| a.ones().all(|x| self.mult[x][c].is_subset(b))))
    }

    fn right_residual(&self, b: &AtomSet, a: &AtomSet) -> AtomSet {
        self.q_set((0..self.q_atoms.len()).filter(|&c| a.ones().all(|x| self.mult[c][x].is_subset(b))))
    }

    fn is_stable(&self, m: &AtomSet) -> bool {
        m.ones().all(|x| self.act[x].iter().all(|r| r.is_subset(m)))
    }

    fn m_label(&self, m: &AtomSet) -> String {
        label(&self.m_atoms, m)
    }

    fn q_label(&self, q: &AtomSet) -> String {
        label(&self.q_atoms, q)
    }
}

/// Every subset, so only usable for a handful of atoms.
impl Enumerate for AtomicSystem {
    fn m_elements(&self) -> Vec<AtomSet> {
        let n = self.m_atoms.len();
        (0..1usize << n).map(|i| mask_set(n, i)).collect()
    }

    fn q_elements(&self) -> Vec<AtomSet> {
        let n = self.q_atoms.len();
        (0..1usize << n).map(|i| mask_set(n, i)).collect()
    }
}

fn set_of<I: IntoIterator<Item = usize>>(n: usize, atoms: I) -> AtomSet {
    let mut s = FixedBitSet::with_capacity(n);
    for a in atoms {
        s.insert(a);
    }
    s
}

fn mask_set(n: usize, mask: usize) -> AtomSet {
    set_of(n, (0..n).filter(|i| mask >> i & 1 == 1))
}

fn set_mask(s: &AtomSet) -> usize {
    s.ones().fold(0, |acc, i| acc | 1 << i)
}

fn label(names: &[String], s: &AtomSet) -> String {
    let items: Vec<&str> = s.ones().map(|i| names[i].as_str()).collect();
    format!("{{{}}}", items.join(","))
}

fn unique(names: &[String]) -> Result<(), AlgebraError> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(AlgebraError::Lattice(crate::lattice::LatticeError::DuplicateLabel(n.clone())));
        }
    }
    Ok(())
}

fn shape(table: &str, rows: &[Vec<AtomSet>], outer: usize, inner: usize, bits: usize) -> Result<(), AlgebraError> {
    let err = |expected, got| AlgebraError::TableSize { table: table.into(), expected, got };
    if rows.len() != outer {
        return Err(err(outer, rows.len()));
    }
    for row in rows {
        if row.len() != inner {
            return Err(err(inner, row.len()));
        }
        if let Some(s) = row.iter().find(|s| s.len() != bits) {
            return Err(err(bits, s.len()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two states swapped by one action `x`, plus the unit `e`.
    fn swap_system() -> AtomicSystem {
        let s = |v: &[usize]| set_of(2, v.iter().copied());
        let act = vec![vec![s(&[0]), s(&[1])], vec![s(&[1]), s(&[0])]];
        let mult = vec![vec![s(&[0]), s(&[1])], vec![s(&[1]), s(&[0])]];
        let app_m = vec![vec![s(&[0, 1]), s(&[0, 1])]];
        let app_q = vec![vec![s(&[0]), s(&[1])]];
        AtomicSystem::new(
            vec!["u".into(), "v".into()],
            vec!["e".into(), "x".into()],
            vec![AgentId::new("A")],
            act,
            mult,
            s(&[0]),
            app_m,
            app_q,
        )
        .unwrap()
    }

    #[test]
    fn swap_system_is_valid_and_satisfies_conditions() {
        let sys = swap_system();
        assert!(sys.validate().is_valid());
        assert!(sys.theorem1().all_hold());
    }

    #[test]
    fn table_materialization_agrees() {
        let sys = swap_system();
        let table = sys.to_table().unwrap();
        assert!(table.validate().is_valid());
        for m in 0..4 {
            for q in 0..4 {
                let lhs = set_mask(&sys.update(&mask_set(2, m), &mask_set(2, q)));
                assert_eq!(lhs, table.update(&m, &q));
                let dyn_a = set_mask(&sys.dyn_box(&mask_set(2, q), &mask_set(2, m)));
                assert_eq!(dyn_a, table.dyn_box(&q, &m));
                let co = set_mask(&sys.co_residual(&mask_set(2, m), &mask_set(2, q)));
                assert_eq!(co, table.co_residual(&m, &q));
            }
            assert_eq!(set_mask(&sys.box_m(0, &mask_set(2, m))), table.box_m(0, &m));
        }
    }

    #[test]
    fn broken_unit_reported() {
        let mut sys = swap_system();
        sys.unit = set_of(2, [1]);
        let report = sys.validate();
        assert!(report.has(Law::MultLeftUnit));
        assert!(report.has(Law::ActUnit));
    }

    #[test]
    fn labels_list_atom_names() {
        let sys = swap_system();
        assert_eq!(sys.m_label(&sys.m_top()), "{u,v}");
        assert_eq!(sys.q_label(&sys.q_bottom()), "{}");
    }
}
