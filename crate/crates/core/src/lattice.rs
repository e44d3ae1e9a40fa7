//! Finite complete lattices, maps between them, and right adjoints.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense element id inside a [`FiniteLattice`].
pub type Elem = usize;

/// Lattices up to this size get an all-subsets join-preservation check.
pub const EXHAUSTIVE_SUBSET_LIMIT: usize = 16;

/// Largest `n` accepted by [`FiniteLattice::powerset`].
pub const MAX_POWERSET_ATOMS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("element index {0} out of range")]
    OutOfRange(usize),
    #[error("order is not antisymmetric: {0} <= {1} and {1} <= {0}")]
    NotAntisymmetric(Elem, Elem),
    #[error("order is not reflexive at {0}")]
    NotReflexive(Elem),
    #[error("order is not transitive: {0} <= {1} <= {2}")]
    NotTransitive(Elem, Elem, Elem),
    #[error("elements {0} and {1} have no least upper bound")]
    NoJoin(Elem, Elem),
    #[error("elements {0} and {1} have no greatest lower bound")]
    NoMeet(Elem, Elem),
    #[error("no least element")]
    NoBottom,
    #[error("map table has {got} entries, source lattice has {expected} elements")]
    TableSize { expected: usize, got: usize },
    #[error("map is not join-preserving: {0}")]
    NotJoinPreserving(String),
    #[error("powerset of {0} atoms is too large to tabulate")]
    TooLarge(usize),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
}

/// A finite lattice given by its order relation, with precomputed binary
/// join and meet tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    size: usize,
    leq: Vec<bool>,
    join: Vec<Elem>,
    meet: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("size", &self.size)
            .field("labels", &self.labels)
            .finish()
    }
}

impl FiniteLattice {
    /// Builds a lattice from a full order matrix (`leq[a * n + b]` iff a ≤ b).
    pub fn from_matrix(labels: Vec<String>, leq: Vec<bool>) -> Result<Self, LatticeError> {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if leq.len() != n * n {
            return Err(LatticeError::TableSize { expected: n * n, got: leq.len() });
        }
        check_unique(&labels)?;
        let at = |a: usize, b: usize| leq[a * n + b];
        for a in 0..n {
            if !at(a, a) {
                return Err(LatticeError::NotReflexive(a));
            }
            for b in 0..n {
                if a != b && at(a, b) && at(b, a) {
                    return Err(LatticeError::NotAntisymmetric(a, b));
                }
                if !at(a, b) {
                    continue;
                }
                for c in 0..n {
                    if at(b, c) && !at(a, c) {
                        return Err(LatticeError::NotTransitive(a, b, c));
                    }
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| at(b, x)))
            .ok_or(LatticeError::NoBottom)?;
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let ups: Vec<Elem> = (0..n).filter(|&u| at(a, u) && at(b, u)).collect();
                let lub = ups
                    .iter()
                    .copied()
                    .find(|&u| ups.iter().all(|&v| at(u, v)))
                    .ok_or(LatticeError::NoJoin(a, b))?;
                join[a * n + b] = lub;
                let downs: Vec<Elem> = (0..n).filter(|&d| at(d, a) && at(d, b)).collect();
                let glb = downs
                    .iter()
                    .copied()
                    .find(|&d| downs.iter().all(|&v| at(v, d)))
                    .ok_or(LatticeError::NoMeet(a, b))?;
                meet[a * n + b] = glb;
            }
        }
        let top = (0..n).fold(bottom, |acc, x| join[acc * n + x]);
        Ok(FiniteLattice { size: n, leq, join, meet, bottom, top, labels })
    }

    /// Builds a lattice from generating pairs `(a, b)` meaning a ≤ b.
    /// The reflexive-transitive closure of the pairs is taken first.
    pub fn from_pairs(
        labels: Vec<String>,
        pairs: impl IntoIterator<Item = (Elem, Elem)>,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in pairs {
            if a >= n {
                return Err(LatticeError::OutOfRange(a));
            }
            if b >= n {
                return Err(LatticeError::OutOfRange(b));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_matrix(labels, leq)
    }

    /// The powerset of `{0, …, n-1}`; element ids are bitmasks.
    pub fn powerset(n: usize) -> Result<Self, LatticeError> {
        if n > MAX_POWERSET_ATOMS {
            return Err(LatticeError::TooLarge(n));
        }
        let size = 1usize << n;
        let mut leq = vec![false; size * size];
        let mut join = vec![0; size * size];
        let mut meet = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                leq[a * size + b] = a & !b == 0;
                join[a * size + b] = a | b;
                meet[a * size + b] = a & b;
            }
        }
        let labels = (0..size).map(|m| subset_label(m, n)).collect();
        Ok(FiniteLattice { size, leq, join, meet, bottom: 0, top: size - 1, labels })
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Result<Self, LatticeError> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_pairs(labels, (1..n).map(|i| (i - 1, i)))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, LatticeError> {
        if labels.len() != self.size {
            return Err(LatticeError::TableSize { expected: self.size, got: labels.len() });
        }
        check_unique(&labels)?;
        self.labels = labels;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn join2(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.size + b]
    }

    pub fn meet2(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.size + b]
    }

    /// Least upper bound of a finite set; the empty join is ⊥.
    pub fn join<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.bottom, |acc, x| self.join2(acc, x))
    }

    /// Greatest lower bound of a finite set; the empty meet is ⊤.
    pub fn meet<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.top, |acc, x| self.meet2(acc, x))
    }

    /// Elements covering ⊥.
    pub fn atoms(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| a != self.bottom)
            .filter(|&a| {
                self.elements()
                    .all(|x| x == self.bottom || x == a || !self.leq(x, a))
            })
            .collect()
    }

    /// Every element is the join of the atoms below it.
    pub fn is_atomistic(&self) -> bool {
        let atoms = self.atoms();
        self.elements()
            .all(|x| self.join(atoms.iter().copied().filter(|&a| self.leq(a, x))) == x)
    }

    /// `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)` for all triples.
    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    pub fn distributivity_witness(&self) -> Option<(Elem, Elem, Elem)> {
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    let lhs = self.meet2(a, self.join2(b, c));
                    let rhs = self.join2(self.meet2(a, b), self.meet2(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn downset(&self, x: Elem) -> Vec<Elem> {
        self.elements().filter(|&y| self.leq(y, x)).collect()
    }

    pub fn upset(&self, x: Elem) -> Vec<Elem> {
        self.elements().filter(|&y| self.leq(x, y)).collect()
    }

    /// All `y` with `x ∧ y = ⊥` and `x ∨ y = ⊤`.
    pub fn complements(&self, x: Elem) -> Vec<Elem> {
        self.elements()
            .filter(|&y| self.meet2(x, y) == self.bottom && self.join2(x, y) == self.top)
            .collect()
    }

    /// The complement of `x` when it exists and is unique.
    pub fn boolean_complement(&self, x: Elem) -> Option<Elem> {
        match self.complements(x).as_slice() {
            [y] => Some(*y),
            _ => None,
        }
    }

    pub fn is_boolean(&self) -> bool {
        self.is_distributive() && self.elements().all(|x| !self.complements(x).is_empty())
    }

    /// The generating pairs of the covering relation, for serialization.
    pub fn cover_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if a != b
                    && self.leq(a, b)
                    && !self
                        .elements()
                        .any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b))
                {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_doc(&self) -> LatticeDoc {
        LatticeDoc::Explicit {
            elements: self.labels.clone(),
            leq: self.cover_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// A subset of `source` whose join `f` does not preserve, if any.
///
/// All subsets are tried when `source` has at most
/// [`EXHAUSTIVE_SUBSET_LIMIT`] elements. Larger lattices are checked on ⊥
/// and binary joins, which covers every subset of a finite lattice by
/// induction on the subset size.
pub fn join_witness(
    source: &FiniteLattice,
    target: &FiniteLattice,
    f: impl Fn(Elem) -> Elem,
) -> Option<Vec<Elem>> {
    if f(source.bottom()) != target.bottom() {
        return Some(Vec::new());
    }
    if source.size() <= EXHAUSTIVE_SUBSET_LIMIT {
        for mask in 1u32..(1u32 << source.size()) {
            let subset: Vec<Elem> = (0..source.size()).filter(|i| mask >> i & 1 == 1).collect();
            let lhs = f(source.join(subset.iter().copied()));
            let rhs = target.join(subset.iter().map(|&x| f(x)));
            if lhs != rhs {
                return Some(subset);
            }
        }
        return None;
    }
    for a in source.elements() {
        for b in source.elements() {
            if f(source.join2(a, b)) != target.join2(f(a), f(b)) {
                return Some(vec![a, b]);
            }
        }
    }
    None
}

fn check_unique(labels: &[String]) -> Result<(), LatticeError> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(LatticeError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn subset_label(mask: usize, n: usize) -> String {
    let items: Vec<String> = (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// JSON form of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeDoc {
    Powerset { powerset_of: usize },
    Explicit { elements: Vec<String>, leq: Vec<[Elem; 2]> },
}

impl LatticeDoc {
    pub fn build(&self) -> Result<FiniteLattice, LatticeError> {
        match self {
            LatticeDoc::Powerset { powerset_of } => FiniteLattice::powerset(*powerset_of),
            LatticeDoc::Explicit { elements, leq } => {
                FiniteLattice::from_pairs(elements.clone(), leq.iter().map(|p| (p[0], p[1])))
            }
        }
    }
}

/// A total function between two lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    table: Vec<Elem>,
}

impl LatticeMap {
    pub fn new(
        source: Arc<FiniteLattice>,
        target: Arc<FiniteLattice>,
        table: Vec<Elem>,
    ) -> Result<Self, LatticeError> {
        if table.len() != source.size() {
            return Err(LatticeError::TableSize { expected: source.size(), got: table.len() });
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= target.size()) {
            return Err(LatticeError::OutOfRange(bad));
        }
        Ok(LatticeMap { source, target, table })
    }

    pub fn identity(lat: Arc<FiniteLattice>) -> Self {
        let table = lat.elements().collect();
        LatticeMap { source: lat.clone(), target: lat, table }
    }

    /// The sup-map induced by a relation on atoms of a powerset lattice:
    /// `f(X) = {t | ∃ s ∈ X, (s, t) ∈ R}`.
    pub fn relation_image(lat: Arc<FiniteLattice>, atoms: usize, rel: &[(usize, usize)]) -> Self {
        let table = lat
            .elements()
            .map(|x| {
                rel.iter()
                    .filter(|&&(s, _)| s < atoms && x >> s & 1 == 1)
                    .fold(0, |acc, &(_, t)| acc | 1 << t)
            })
            .collect();
        LatticeMap { source: lat.clone(), target: lat, table }
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.table[x]
    }

    pub fn is_monotone(&self) -> bool {
        let s = &self.source;
        s.elements().all(|a| {
            s.elements()
                .all(|b| !s.leq(a, b) || self.target.leq(self.apply(a), self.apply(b)))
        })
    }

    /// A subset (as a list of source elements) whose join is not preserved.
    pub fn join_preservation_witness(&self) -> Option<Vec<Elem>> {
        join_witness(&self.source, &self.target, |x| self.apply(x))
    }

    pub fn is_join_preserving(&self) -> bool {
        self.join_preservation_witness().is_none()
    }

    /// `f_*(b) = ⋁{a | f(a) ≤ b}` without checking join preservation.
    pub fn upper_adjoint_table(&self) -> Vec<Elem> {
        self.target
            .elements()
            .map(|b| {
                self.source
                    .join(self.source.elements().filter(|&a| self.target.leq(self.apply(a), b)))
            })
            .collect()
    }

    /// The right Galois adjoint; fails on maps that do not preserve joins.
    pub fn right_adjoint(&self) -> Result<LatticeMap, LatticeError> {
        if let Some(w) = self.join_preservation_witness() {
            let labels: Vec<&str> = w.iter().map(|&x| self.source.label(x)).collect();
            return Err(LatticeError::NotJoinPreserving(format!(
                "join of [{}] not preserved",
                labels.join(", ")
            )));
        }
        Ok(LatticeMap {
            source: self.target.clone(),
            target: self.source.clone(),
            table: self.upper_adjoint_table(),
        })
    }

    pub fn compose(&self, after: &LatticeMap) -> LatticeMap {
        LatticeMap {
            source: self.source.clone(),
            target: after.target.clone(),
            table: self.table.iter().map(|&x| after.apply(x)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FiniteLattice {
        let labels = ["bot", "a", "b", "c", "top"].map(String::from).to_vec();
        FiniteLattice::from_pairs(labels, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
    }

    fn pentagon() -> FiniteLattice {
        let labels = ["bot", "x", "y", "z", "top"].map(String::from).to_vec();
        FiniteLattice::from_pairs(labels, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn empty_join_and_meet() {
        let l = FiniteLattice::powerset(3).unwrap();
        assert_eq!(l.join(std::iter::empty()), l.bottom());
        assert_eq!(l.meet(std::iter::empty()), l.top());
        assert_eq!(l.join([5]), 5);
        assert_eq!(l.join([0b001, 0b110]), 0b111);
    }

    #[test]
    fn powerset_shape() {
        let l = FiniteLattice::powerset(3).unwrap();
        assert_eq!(l.size(), 8);
        assert_eq!(l.atoms(), vec![1, 2, 4]);
        assert!(l.is_atomistic());
        assert!(l.is_distributive());
        assert!(l.is_boolean());
        assert_eq!(l.label(0b101), "{0,2}");
    }

    #[test]
    fn diamond_is_not_distributive() {
        let d = diamond();
        assert!(!d.is_distributive());
        assert_eq!(d.atoms(), vec![1, 2, 3]);
        assert!(d.is_atomistic());
        assert_eq!(d.complements(1), vec![2, 3]);
        assert_eq!(d.boolean_complement(1), None);
    }

    #[test]
    fn pentagon_is_not_distributive_or_atomistic() {
        let p = pentagon();
        assert!(!p.is_distributive());
        assert!(!p.is_atomistic());
    }

    #[test]
    fn rejects_non_lattices() {
        // two incomparable maximal elements: no top
        let labels = ["b", "x", "y"].map(String::from).to_vec();
        assert!(matches!(
            FiniteLattice::from_pairs(labels, [(0, 1), (0, 2)]),
            Err(LatticeError::NoJoin(1, 2))
        ));
        let labels = ["a", "b"].map(String::from).to_vec();
        assert!(matches!(
            FiniteLattice::from_pairs(labels, [(0, 1), (1, 0)]),
            Err(LatticeError::NotAntisymmetric(0, 1))
        ));
        assert_eq!(FiniteLattice::from_pairs(vec![], []), Err(LatticeError::Empty));
    }

    #[test]
    fn constant_top_is_not_join_preserving() {
        let l = Arc::new(FiniteLattice::chain(2).unwrap());
        let f = LatticeMap::new(l.clone(), l, vec![1, 1]).unwrap();
        assert!(!f.is_join_preserving());
        assert!(f.right_adjoint().is_err());
    }

    #[test]
    fn identity_adjoint_is_identity() {
        let l = Arc::new(diamond());
        let id = LatticeMap::identity(l);
        assert_eq!(id.right_adjoint().unwrap(), id);
    }

    #[test]
    fn binary_check_used_above_limit() {
        let l = Arc::new(FiniteLattice::powerset(5).unwrap());
        let f = LatticeMap::relation_image(l.clone(), 5, &[(0, 1), (1, 2), (4, 0)]);
        assert!(f.is_join_preserving());
        let mut table = f.table().to_vec();
        table[0b00011] = 0b11111;
        let g = LatticeMap::new(l.clone(), l, table).unwrap();
        assert!(!g.is_join_preserving());
    }

    #[test]
    fn doc_round_trip() {
        let d = diamond();
        let doc = d.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back: LatticeDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), d);
        let p: LatticeDoc = serde_json::from_str(r#"{"powerset_of": 2}"#).unwrap();
        assert_eq!(p.build().unwrap().size(), 4);
    }
}
