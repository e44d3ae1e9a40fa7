use std::collections::BTreeMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::atomic::{AtomSet, AtomicSystem};
use super::table::{EpistemicSystem, FiniteModule, FiniteQuantale};
use super::{AgentId, AlgebraError, EpistemicAlgebra};
use crate::lattice::{Elem, FiniteLattice, LatticeDoc, LatticeMap};

/// JSON form of an [`EpistemicSystem`]. Tables are index triples and must
/// be total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSystemDoc {
    pub agents: Vec<String>,
    #[serde(rename = "M")]
    pub m: LatticeDoc,
    #[serde(rename = "Q")]
    pub q: LatticeDoc,
    pub unit: Elem,
    pub mult: Vec<[Elem; 3]>,
    pub act: Vec<[Elem; 3]>,
    #[serde(rename = "appM")]
    pub app_m: BTreeMap<String, Vec<[Elem; 2]>>,
    #[serde(rename = "appQ")]
    pub app_q: BTreeMap<String, Vec<[Elem; 2]>>,
}

/// JSON form of an [`AtomicSystem`]. A triple `[x, a, y]` in `act` states
/// that atom `y` belongs to `x·a`; `mult`, `appM` and `appQ` read the same way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomicSystemDoc {
    pub m_atoms: Vec<String>,
    pub q_atoms: Vec<String>,
    pub agents: Vec<String>,
    pub unit: Vec<String>,
    pub act: Vec<[String; 3]>,
    pub mult: Vec<[String; 3]>,
    #[serde(rename = "appM")]
    pub app_m: BTreeMap<String, Vec<[String; 2]>>,
    #[serde(rename = "appQ")]
    pub app_q: BTreeMap<String, Vec<[String; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemDoc {
    Atomic(AtomicSystemDoc),
    Table(TableSystemDoc),
}

impl TableSystemDoc {
    pub fn build(&self) -> Result<EpistemicSystem, AlgebraError> {
        let ml = Arc::new(self.m.build()?);
        let ql = Arc::new(self.q.build()?);
        let nm = ml.size();
        let nq = ql.size();
        let mult = fill("mult", nq, nq, nq, &self.mult)?;
        let quantale = Arc::new(FiniteQuantale::new(ql.clone(), mult, self.unit)?);
        let act = fill("act", nm, nq, nm, &self.act)?;
        let module = FiniteModule::new(ml.clone(), quantale, act)?;
        let agents: Vec<AgentId> = self.agents.iter().map(AgentId::new).collect();
        let app_m = maps("appM", &agents, &ml, &self.app_m)?;
        let app_q = maps("appQ", &agents, &ql, &self.app_q)?;
        EpistemicSystem::new(module, agents, app_m, app_q)
    }

    pub fn from_system(sys: &EpistemicSystem) -> Self {
        let ml = sys.m_lattice();
        let ql = sys.q_lattice();
        let mut mult = Vec::new();
        for a in ql.elements() {
            for b in ql.elements() {
                mult.push([a, b, sys.mult(&a, &b)]);
            }
        }
        let mut act = Vec::new();
        for m in ml.elements() {
            for q in ql.elements() {
                act.push([m, q, sys.update(&m, &q)]);
            }
        }
        let mut app_m = BTreeMap::new();
        let mut app_q = BTreeMap::new();
        for (i, a) in sys.agents().iter().enumerate() {
            app_m.insert(a.0.clone(), ml.elements().map(|m| [m, sys.app_m(i, &m)]).collect());
            app_q.insert(a.0.clone(), ql.elements().map(|q| [q, sys.app_q(i, &q)]).collect());
        }
        TableSystemDoc {
            agents: sys.agents().iter().map(|a| a.0.clone()).collect(),
            m: ml.to_doc(),
            q: ql.to_doc(),
            unit: sys.unit(),
            mult,
            act,
            app_m,
            app_q,
        }
    }
}

impl AtomicSystemDoc {
    pub fn build(&self) -> Result<AtomicSystem, AlgebraError> {
        let nm = self.m_atoms.len();
        let nq = self.q_atoms.len();
        let m_index = |t: &str, name: &str| index(t, &self.m_atoms, name);
        let q_index = |t: &str, name: &str| index(t, &self.q_atoms, name);
        let mut act = vec![vec![FixedBitSet::with_capacity(nm); nq]; nm];
        for [x, a, y] in &self.act {
            act[m_index("act", x)?][q_index("act", a)?].insert(m_index("act", y)?);
        }
        let mut mult = vec![vec![FixedBitSet::with_capacity(nq); nq]; nq];
        for [a, b, c] in &self.mult {
            mult[q_index("mult", a)?][q_index("mult", b)?].insert(q_index("mult", c)?);
        }
        let mut unit = FixedBitSet::with_capacity(nq);
        for a in &self.unit {
            unit.insert(q_index("unit", a)?);
        }
        let agents: Vec<AgentId> = self.agents.iter().map(AgentId::new).collect();
        let mut app_m = vec![vec![FixedBitSet::with_capacity(nm); nm]; agents.len()];
        let mut app_q = vec![vec![FixedBitSet::with_capacity(nq); nq]; agents.len()];
        for (name, pairs) in &self.app_m {
            let i = agent_index(&agents, name)?;
            for [x, y] in pairs {
                app_m[i][m_index("appM", x)?].insert(m_index("appM", y)?);
            }
        }
        for (name, pairs) in &self.app_q {
            let i = agent_index(&agents, name)?;
            for [a, b] in pairs {
                app_q[i][q_index("appQ", a)?].insert(q_index("appQ", b)?);
            }
        }
        AtomicSystem::new(
            self.m_atoms.clone(),
            self.q_atoms.clone(),
            agents,
            act,
            mult,
            unit,
            app_m,
            app_q,
        )
    }

    pub fn from_system(sys: &AtomicSystem) -> Self {
        let m = sys.m_atoms();
        let q = sys.q_atoms();
        let mut act = Vec::new();
        for x in 0..m.len() {
            for a in 0..q.len() {
                for y in sys.act_atoms(x, a).ones() {
                    act.push([m[x].clone(), q[a].clone(), m[y].clone()]);
                }
            }
        }
        let mut mult = Vec::new();
        for a in 0..q.len() {
            for b in 0..q.len() {
                for c in sys.mult_atoms(a, b).ones() {
                    mult.push([q[a].clone(), q[b].clone(), q[c].clone()]);
                }
            }
        }
        let mut app_m = BTreeMap::new();
        let mut app_q = BTreeMap::new();
        for (i, agent) in sys.agents().iter().enumerate() {
            let mut pm = Vec::new();
            for x in 0..m.len() {
                pm.extend(sys.app_m_atoms(i, x).ones().map(|y| [m[x].clone(), m[y].clone()]));
            }
            let mut pq = Vec::new();
            for a in 0..q.len() {
                pq.extend(sys.app_q_atoms(i, a).ones().map(|b| [q[a].clone(), q[b].clone()]));
            }
            app_m.insert(agent.0.clone(), pm);
            app_q.insert(agent.0.clone(), pq);
        }
        AtomicSystemDoc {
            m_atoms: m.to_vec(),
            q_atoms: q.to_vec(),
            agents: sys.agents().iter().map(|a| a.0.clone()).collect(),
            unit: sys.unit_atoms().ones().map(|a| q[a].clone()).collect(),
            act,
            mult,
            app_m,
            app_q,
        }
    }
}

/// Conversion between carrier elements and their JSON representation.
///
/// Table elements are written as labels (an index is also accepted on
/// input); atomic elements as arrays of atom names.
pub trait ElementCodec: EpistemicAlgebra {
    fn decode_m(&self, v: &Value) -> Result<Self::M, AlgebraError>;
    fn decode_q(&self, v: &Value) -> Result<Self::Q, AlgebraError>;
    fn encode_m(&self, m: &Self::M) -> Value;
    fn encode_q(&self, q: &Self::Q) -> Value;
}

impl ElementCodec for EpistemicSystem {
    fn decode_m(&self, v: &Value) -> Result<Elem, AlgebraError> {
        decode_elem("M", self.m_lattice(), v)
    }

    fn decode_q(&self, v: &Value) -> Result<Elem, AlgebraError> {
        decode_elem("Q", self.q_lattice(), v)
    }

    fn encode_m(&self, m: &Elem) -> Value {
        Value::String(self.m_lattice().label(*m).to_owned())
    }

    fn encode_q(&self, q: &Elem) -> Value {
        Value::String(self.q_lattice().label(*q).to_owned())
    }
}

impl ElementCodec for AtomicSystem {
    fn decode_m(&self, v: &Value) -> Result<AtomSet, AlgebraError> {
        Ok(self.m_set(decode_atoms("M", self.m_atoms(), v)?))
    }

    fn decode_q(&self, v: &Value) -> Result<AtomSet, AlgebraError> {
        Ok(self.q_set(decode_atoms("Q", self.q_atoms(), v)?))
    }

    fn encode_m(&self, m: &AtomSet) -> Value {
        m.ones().map(|i| Value::String(self.m_atoms()[i].clone())).collect()
    }

    fn encode_q(&self, q: &AtomSet) -> Value {
        q.ones().map(|i| Value::String(self.q_atoms()[i].clone())).collect()
    }
}

fn decode_elem(side: &str, lat: &FiniteLattice, v: &Value) -> Result<Elem, AlgebraError> {
    let missing = || AlgebraError::MissingEntry { table: side.into(), key: v.to_string() };
    match v {
        Value::String(s) => lat.index_of(s).ok_or_else(missing),
        Value::Number(n) => n
            .as_u64()
            .map(|i| i as usize)
            .filter(|&i| i < lat.size())
            .ok_or_else(missing),
        _ => Err(missing()),
    }
}

fn decode_atoms(side: &str, atoms: &[String], v: &Value) -> Result<Vec<usize>, AlgebraError> {
    let items = v
        .as_array()
        .ok_or_else(|| AlgebraError::MissingEntry { table: side.into(), key: v.to_string() })?;
    items
        .iter()
        .map(|item| {
            item.as_str()
                .and_then(|s| atoms.iter().position(|a| a == s))
                .ok_or_else(|| AlgebraError::MissingEntry { table: side.into(), key: item.to_string() })
        })
        .collect()
}

fn index(table: &str, names: &[String], name: &str) -> Result<usize, AlgebraError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| AlgebraError::MissingEntry { table: table.into(), key: name.into() })
}

fn agent_index(agents: &[AgentId], name: &str) -> Result<usize, AlgebraError> {
    agents
        .iter()
        .position(|a| a.as_str() == name)
        .ok_or_else(|| AlgebraError::UnknownAgent(name.into()))
}

fn fill(table: &str, rows: usize, cols: usize, range: usize, triples: &[[Elem; 3]]) -> Result<Vec<Elem>, AlgebraError> {
    let mut out: Vec<Option<Elem>> = vec![None; rows * cols];
    for &[i, j, k] in triples {
        if i >= rows || j >= cols || k >= range {
            return Err(AlgebraError::OutOfRange { table: table.into(), entry: i.max(j).max(k) });
        }
        out[i * cols + j] = Some(k);
    }
    out.iter()
        .enumerate()
        .map(|(idx, v)| {
            v.ok_or_else(|| AlgebraError::MissingEntry {
                table: table.into(),
                key: format!("[{}, {}]", idx / cols, idx % cols),
            })
        })
        .collect()
}

fn maps(
    table: &str,
    agents: &[AgentId],
    lat: &Arc<FiniteLattice>,
    doc: &BTreeMap<String, Vec<[Elem; 2]>>,
) -> Result<Vec<LatticeMap>, AlgebraError> {
    for name in doc.keys() {
        agent_index(agents, name)?;
    }
    agents
        .iter()
        .map(|a| {
            let pairs = doc.get(a.as_str()).ok_or_else(|| AlgebraError::MissingEntry {
                table: table.into(),
                key: a.0.clone(),
            })?;
            let triples: Vec<[Elem; 3]> = pairs.iter().map(|&[x, y]| [x, 0, y]).collect();
            let t = fill(table, lat.size(), 1, lat.size(), &triples)?;
            Ok(LatticeMap::new(lat.clone(), lat.clone(), t)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = r#"{
        "agents": ["A"],
        "M": {"powerset_of": 1},
        "Q": {"elements": ["0", "1"], "leq": [[0, 1]]},
        "unit": 1,
        "mult": [[0,0,0],[0,1,0],[1,0,0],[1,1,1]],
        "act": [[0,0,0],[0,1,0],[1,0,0],[1,1,1]],
        "appM": {"A": [[0,0],[1,1]]},
        "appQ": {"A": [[0,0],[1,1]]}
    }"#;

    #[test]
    fn table_doc_builds_and_round_trips() {
        let doc: SystemDoc = serde_json::from_str(TWO).unwrap();
        let SystemDoc::Table(t) = doc else { panic!("expected table form") };
        let sys = t.build().unwrap();
        assert!(sys.validate().is_valid());
        let again = TableSystemDoc::from_system(&sys).build().unwrap();
        assert_eq!(sys, again);
    }

    #[test]
    fn missing_entry_rejected() {
        let mut doc: TableSystemDoc = serde_json::from_str(TWO).unwrap();
        doc.act.pop();
        assert!(matches!(doc.build(), Err(AlgebraError::MissingEntry { .. })));
    }

    #[test]
    fn atomic_doc_round_trips() {
        let json = r#"{
            "m_atoms": ["u"], "q_atoms": ["e"], "agents": ["A"], "unit": ["e"],
            "act": [["u","e","u"]], "mult": [["e","e","e"]],
            "appM": {"A": [["u","u"]]}, "appQ": {"A": [["e","e"]]}
        }"#;
        let doc: SystemDoc = serde_json::from_str(json).unwrap();
        let SystemDoc::Atomic(a) = doc else { panic!("expected atomic form") };
        let sys = a.build().unwrap();
        assert!(sys.validate().is_valid());
        assert_eq!(AtomicSystemDoc::from_system(&sys), a);
        assert_eq!(sys.decode_m(&serde_json::json!(["u"])).unwrap(), sys.m_top());
    }
}
