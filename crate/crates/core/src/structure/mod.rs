//! Finite SL and FO structures.

mod enumerate;
mod text;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::syntax::{PredSym, Var};

pub use enumerate::{
    canonical_stores, enumerate_fo_structures, enumerate_heaps, enumerate_structures,
    FoStructures, Heaps, SlStructures,
};
pub use text::parse_structure;

/// A memory location.
pub type Loc = usize;

/// A finite partial map from locations to locations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Heap(BTreeMap<Loc, Loc>);

impl Heap {
    pub fn new() -> Self {
        Heap(BTreeMap::new())
    }

    pub fn get(&self, l: Loc) -> Option<Loc> {
        self.0.get(&l).copied()
    }

    pub fn insert(&mut self, from: Loc, to: Loc) -> Option<Loc> {
        self.0.insert(from, to)
    }

    pub fn remove(&mut self, l: Loc) -> Option<Loc> {
        self.0.remove(&l)
    }

    pub fn contains(&self, l: Loc) -> bool {
        self.0.contains_key(&l)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Loc, Loc)> + '_ {
        self.0.iter().map(|(&a, &b)| (a, b))
    }

    pub fn dom(&self) -> BTreeSet<Loc> {
        self.0.keys().copied().collect()
    }

    pub fn img(&self) -> BTreeSet<Loc> {
        self.0.values().copied().collect()
    }

    /// `dom(h) ∪ img(h)`.
    pub fn elems(&self) -> BTreeSet<Loc> {
        let mut out = self.dom();
        out.extend(self.0.values().copied());
        out
    }

    pub fn is_disjoint(&self, other: &Heap) -> bool {
        self.0.keys().all(|k| !other.0.contains_key(k))
    }

    /// Union of two heaps; `None` when their domains overlap.
    pub fn union(&self, other: &Heap) -> Option<Heap> {
        if !self.is_disjoint(other) {
            return None;
        }
        let mut out = self.clone();
        out.0.extend(other.0.iter().map(|(&a, &b)| (a, b)));
        Some(out)
    }

    pub fn restrict(&self, keep: &BTreeSet<Loc>) -> Heap {
        self.iter().filter(|(a, _)| keep.contains(a)).collect()
    }
}

impl FromIterator<(Loc, Loc)> for Heap {
    fn from_iter<T: IntoIterator<Item = (Loc, Loc)>>(iter: T) -> Self {
        Heap(iter.into_iter().collect())
    }
}

impl<const K: usize> From<[(Loc, Loc); K]> for Heap {
    fn from(cells: [(Loc, Loc); K]) -> Self {
        cells.into_iter().collect()
    }
}

/// `elems(h) = dom(h) ∪ img(h)`.
pub fn elems(heap: &Heap) -> BTreeSet<Loc> {
    heap.elems()
}

/// A finite SL structure: universe, partial store and heap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlStructure {
    pub universe: BTreeSet<Loc>,
    pub store: BTreeMap<Var, Loc>,
    pub heap: Heap,
}

impl SlStructure {
    /// Builds a structure and checks its well-formedness.
    pub fn new(universe: BTreeSet<Loc>, store: BTreeMap<Var, Loc>, heap: Heap) -> Result<Self> {
        let s = SlStructure {
            universe,
            store,
            heap,
        };
        s.validate()?;
        Ok(s)
    }

    /// A structure over the universe `{0, ..., size-1}`.
    pub fn with_size(
        size: usize,
        store: impl IntoIterator<Item = (Var, Loc)>,
        heap: Heap,
    ) -> Result<Self> {
        Self::new((0..size).collect(), store.into_iter().collect(), heap)
    }

    pub fn validate(&self) -> Result<()> {
        if self.universe.is_empty() {
            return Err(Error::InvalidStructure("the universe is empty".into()));
        }
        for (v, &l) in &self.store {
            if !self.universe.contains(&l) {
                return Err(Error::InvalidStructure(format!(
                    "store maps {v} to {l}, outside the universe"
                )));
            }
        }
        for (a, b) in self.heap.iter() {
            if !self.universe.contains(&a) || !self.universe.contains(&b) {
                return Err(Error::InvalidStructure(format!(
                    "heap cell {a}->{b} leaves the universe"
                )));
            }
        }
        Ok(())
    }

    pub fn universe_size(&self) -> usize {
        self.universe.len()
    }

    /// True when the universe is `{0, ..., n-1}`.
    pub fn is_contiguous(&self) -> bool {
        self.universe.iter().enumerate().all(|(i, &l)| i == l)
    }

    pub fn lookup(&self, v: &Var) -> Result<Loc> {
        self.store
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnboundVariable(v.clone()))
    }

    /// `s(X)` for a set of variables.
    pub fn store_image<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Result<BTreeSet<Loc>> {
        vars.into_iter().map(|v| self.lookup(v)).collect()
    }

    /// Number of universe locations outside `elems(h)`.
    pub fn slack(&self) -> usize {
        let e = self.heap.elems();
        self.universe.iter().filter(|l| !e.contains(l)).count()
    }

    /// Renumbers locations to `0..n` preserving order.
    pub fn compacted(&self) -> SlStructure {
        let index: BTreeMap<Loc, Loc> = self
            .universe
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i))
            .collect();
        SlStructure {
            universe: (0..self.universe.len()).collect(),
            store: self.store.iter().map(|(v, l)| (v.clone(), index[l])).collect(),
            heap: self.heap.iter().map(|(a, b)| (index[&a], index[&b])).collect(),
        }
    }

    /// Adds `k` fresh locations that occur neither in the store nor the heap.
    pub fn inflated(&self, k: usize) -> SlStructure {
        let mut out = self.clone();
        let start = self.universe.iter().next_back().map_or(0, |m| m + 1);
        out.universe.extend(start..start + k);
        out
    }
}

/// (X,n)-equivalence of two SL structures.
///
/// Holds when the heaps coincide, the stores induce the same equalities on
/// `X`, variables of `X` landing in `elems(h)` are mapped identically, and
/// both universes have at least `n + |X|` locations outside `elems(h)`.
pub fn equivalent(a: &SlStructure, b: &SlStructure, xs: &BTreeSet<Var>, n: usize) -> Result<bool> {
    if a.heap != b.heap {
        return Ok(false);
    }
    let sa: Vec<Loc> = xs.iter().map(|x| a.lookup(x)).collect::<Result<_>>()?;
    let sb: Vec<Loc> = xs.iter().map(|x| b.lookup(x)).collect::<Result<_>>()?;
    for i in 0..sa.len() {
        for j in 0..i {
            if (sa[i] == sa[j]) != (sb[i] == sb[j]) {
                return Ok(false);
            }
        }
    }
    let e = a.heap.elems();
    for (la, lb) in sa.iter().zip(&sb) {
        if (e.contains(la) || e.contains(lb)) && la != lb {
            return Ok(false);
        }
    }
    let need = n + xs.len();
    Ok(a.slack() >= need && b.slack() >= need)
}

/// A finite FO structure for one unary function and unary predicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FoStructure {
    pub universe: BTreeSet<Loc>,
    pub store: BTreeMap<Var, Loc>,
    pub func: BTreeMap<Loc, Loc>,
    pub preds: BTreeMap<PredSym, BTreeSet<Loc>>,
}

impl FoStructure {
    pub fn validate(&self) -> Result<()> {
        if self.universe.is_empty() {
            return Err(Error::InvalidStructure("the universe is empty".into()));
        }
        for l in &self.universe {
            match self.func.get(l) {
                Some(t) if self.universe.contains(t) => {}
                _ => {
                    return Err(Error::InvalidStructure(format!(
                        "function is undefined or leaves the universe at {l}"
                    )))
                }
            }
        }
        for (p, set) in &self.preds {
            if !set.is_subset(&self.universe) {
                return Err(Error::InvalidStructure(format!(
                    "predicate {p} holds outside the universe"
                )));
            }
        }
        for (v, l) in &self.store {
            if !self.universe.contains(l) {
                return Err(Error::InvalidStructure(format!(
                    "store maps {v} to {l}, outside the universe"
                )));
            }
        }
        Ok(())
    }

    /// The SL structure whose heap is the function restricted to the
    /// domain predicate.
    pub fn to_sl(&self) -> SlStructure {
        let empty = BTreeSet::new();
        let dom = self.preds.get(&PredSym::domain()).unwrap_or(&empty);
        SlStructure {
            universe: self.universe.clone(),
            store: self.store.clone(),
            heap: dom.iter().map(|&l| (l, self.func[&l])).collect(),
        }
    }
}

/// Location the function is sent to outside the heap domain.
const DEFAULT_TARGET: Loc = 0;

/// The FO structure corresponding to an SL structure: the domain predicate
/// holds exactly on `dom(h)` and the function agrees with the heap there.
/// Elsewhere the function maps to the smallest location.
pub fn corresponds(s: &SlStructure) -> FoStructure {
    let fallback = s.universe.iter().next().copied().unwrap_or(DEFAULT_TARGET);
    let func = s
        .universe
        .iter()
        .map(|&l| (l, s.heap.get(l).unwrap_or(fallback)))
        .collect();
    let mut preds = BTreeMap::new();
    preds.insert(PredSym::domain(), s.heap.dom());
    FoStructure {
        universe: s.universe.clone(),
        store: s.store.clone(),
        func,
        preds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(size: usize, store: &[(&str, Loc)], heap: &[(Loc, Loc)]) -> SlStructure {
        SlStructure::with_size(
            size,
            store.iter().map(|(v, l)| (Var::new(v), *l)),
            heap.iter().copied().collect(),
        )
        .unwrap()
    }

    fn xs(names: &[&str]) -> BTreeSet<Var> {
        names.iter().map(Var::new).collect()
    }

    #[test]
    fn elems_examples() {
        assert!(elems(&Heap::new()).is_empty());
        assert_eq!(elems(&Heap::from([(0, 1)])), [0, 1].into());
        assert_eq!(elems(&Heap::from([(0, 1), (1, 1)])), [0, 1].into());
    }

    #[test]
    fn equivalence_examples() {
        let i = st(3, &[("x", 0)], &[(0, 1)]);
        assert!(equivalent(&i, &i, &xs(&["x"]), 0).unwrap());
        assert!(!equivalent(&i, &i, &xs(&["x"]), 1).unwrap());
        let j = st(3, &[("x", 2)], &[(0, 1)]);
        assert!(!equivalent(&i, &j, &xs(&["x"]), 0).unwrap());
        assert!(equivalent(&i, &i, &xs(&["y"]), 0).is_err());
    }

    #[test]
    fn correspondence() {
        let i = st(2, &[("x", 0)], &[(0, 1)]);
        let m = corresponds(&i);
        assert_eq!(m.preds[&PredSym::domain()], [0].into());
        assert_eq!(m.func[&0], 1);
        assert_eq!(m.func[&1], 0);
        m.validate().unwrap();
        assert_eq!(m.to_sl(), i);

        let e = st(1, &[], &[]);
        let m = corresponds(&e);
        assert!(m.preds[&PredSym::domain()].is_empty());
        assert_eq!(m.func[&0], 0);
    }

    #[test]
    fn validation() {
        assert!(SlStructure::with_size(0, [], Heap::new()).is_err());
        assert!(SlStructure::with_size(2, [], Heap::from([(0, 2)])).is_err());
        assert!(SlStructure::with_size(2, [(Var::new("x"), 5)], Heap::new()).is_err());
    }

    #[test]
    fn compaction_preserves_order() {
        let s = SlStructure::new(
            [1, 4, 7].into(),
            [(Var::new("x"), 7)].into(),
            Heap::from([(4, 7)]),
        )
        .unwrap();
        let c = s.compacted();
        assert_eq!(c, st(3, &[("x", 2)], &[(1, 2)]));
    }
}
