use std::collections::{BTreeMap, BTreeSet};

use super::{FoStructure, Heap, Loc, SlStructure};
use crate::syntax::{PredSym, Var};

/// Counter over `len` digits in base `base`, most significant first.
#[derive(Clone, Debug)]
struct Odometer {
    digits: Vec<usize>,
    base: usize,
    done: bool,
}

impl Odometer {
    fn new(len: usize, base: usize) -> Self {
        Odometer {
            digits: vec![0; len],
            base,
            done: base == 0 && len > 0,
        }
    }

    fn advance(&mut self) {
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.base {
                return;
            }
            *d = 0;
        }
        self.done = true;
    }
}

/// All `(u+1)^u` heaps over `{0, ..., u-1}` in lexicographic order of
/// their cells, where an unallocated cell sorts before any target.
#[derive(Clone, Debug)]
pub struct Heaps {
    odo: Odometer,
}

pub fn enumerate_heaps(universe_size: usize) -> Heaps {
    Heaps {
        odo: Odometer::new(universe_size, universe_size + 1),
    }
}

impl Iterator for Heaps {
    type Item = Heap;

    fn next(&mut self) -> Option<Heap> {
        if self.odo.done {
            return None;
        }
        let heap = self
            .odo
            .digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(l, &d)| (l, d - 1))
            .collect();
        self.odo.advance();
        Some(heap)
    }
}

/// Stores over `vars` whose values are first-use ordered: the first
/// variable maps to 0 and each later one to at most one more than the
/// largest value seen so far.
pub fn canonical_stores(universe_size: usize, vars: &[Var]) -> Vec<BTreeMap<Var, Loc>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(vars.len());
    fn go(
        u: usize,
        vars: &[Var],
        current: &mut Vec<Loc>,
        out: &mut Vec<BTreeMap<Var, Loc>>,
    ) {
        if current.len() == vars.len() {
            out.push(vars.iter().cloned().zip(current.iter().copied()).collect());
            return;
        }
        let limit = current.iter().max().map_or(0, |m| m + 1).min(u - 1);
        for l in 0..=limit {
            current.push(l);
            go(u, vars, current, out);
            current.pop();
        }
    }
    if universe_size > 0 {
        go(universe_size, vars, &mut current, &mut out);
    }
    out
}

/// Every SL structure on `{0, ..., u-1}` with a canonical store over
/// `vars`, stores outermost and heaps in lexicographic order.
pub struct SlStructures {
    universe: BTreeSet<Loc>,
    stores: std::vec::IntoIter<BTreeMap<Var, Loc>>,
    store: Option<BTreeMap<Var, Loc>>,
    heaps: Heaps,
}

pub fn enumerate_structures(universe_size: usize, vars: &[Var]) -> SlStructures {
    let mut stores = canonical_stores(universe_size, vars).into_iter();
    let store = stores.next();
    SlStructures {
        universe: (0..universe_size).collect(),
        stores,
        store,
        heaps: enumerate_heaps(universe_size),
    }
}

impl Iterator for SlStructures {
    type Item = SlStructure;

    fn next(&mut self) -> Option<SlStructure> {
        loop {
            let store = self.store.as_ref()?;
            if let Some(heap) = self.heaps.next() {
                return Some(SlStructure {
                    universe: self.universe.clone(),
                    store: store.clone(),
                    heap,
                });
            }
            self.store = self.stores.next();
            self.heaps = enumerate_heaps(self.universe.len());
        }
    }
}

/// Every FO structure on `{0, ..., u-1}` interpreting the function and the
/// given predicates, with a canonical store over `vars`.
pub struct FoStructures {
    size: usize,
    preds: Vec<PredSym>,
    stores: Vec<BTreeMap<Var, Loc>>,
    store_idx: usize,
    odo: Odometer,
}

pub fn enumerate_fo_structures(universe_size: usize, vars: &[Var], preds: &[PredSym]) -> FoStructures {
    let stores = canonical_stores(universe_size, vars);
    // one digit per function cell, then one bit-vector digit per predicate
    let mut odo = Odometer::new(universe_size + preds.len(), 1);
    odo.done = stores.is_empty();
    FoStructures {
        size: universe_size,
        preds: preds.to_vec(),
        stores,
        store_idx: 0,
        odo,
    }
}

impl FoStructures {
    fn advance(&mut self) {
        let u = self.size;
        let digits = &mut self.odo.digits;
        for i in (0..digits.len()).rev() {
            let base = if i < u { u } else { 1usize << u };
            digits[i] += 1;
            if digits[i] < base {
                return;
            }
            digits[i] = 0;
        }
        self.store_idx += 1;
        if self.store_idx >= self.stores.len() {
            self.odo.done = true;
        }
    }
}

impl Iterator for FoStructures {
    type Item = FoStructure;

    fn next(&mut self) -> Option<FoStructure> {
        if self.odo.done {
            return None;
        }
        let u = self.size;
        let d = &self.odo.digits;
        let s = FoStructure {
            universe: (0..u).collect(),
            store: self.stores[self.store_idx].clone(),
            func: (0..u).map(|l| (l, d[l])).collect(),
            preds: self
                .preds
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let bits = d[u + i];
                    (p.clone(), (0..u).filter(|l| bits >> l & 1 == 1).collect())
                })
                .collect(),
        };
        self.advance();
        Some(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heap_counts() {
        for u in 1..=4usize {
            assert_eq!(enumerate_heaps(u).count(), (u + 1).pow(u as u32));
        }
        let all: Vec<Heap> = enumerate_heaps(1).collect();
        assert_eq!(all, vec![Heap::new(), Heap::from([(0, 0)])]);
    }

    #[test]
    fn structure_counts() {
        assert_eq!(enumerate_structures(1, &[]).count(), 2);
        assert_eq!(enumerate_structures(2, &[]).count(), 9);
        let with_x: Vec<_> = enumerate_structures(1, &[Var::new("x")]).collect();
        assert_eq!(with_x.len(), 2);
        assert!(with_x.iter().all(|s| s.store[&Var::new("x")] == 0));
    }

    #[test]
    fn stores_are_restricted_growth() {
        let vars: Vec<Var> = ["a", "b", "c"].iter().map(Var::new).collect();
        // Bell number B3 = 5 when the universe is large enough
        assert_eq!(canonical_stores(3, &vars).len(), 5);
        assert_eq!(canonical_stores(2, &vars).len(), 4);
        assert_eq!(canonical_stores(1, &vars).len(), 1);
        assert_eq!(canonical_stores(2, &[]).len(), 1);
    }

    #[test]
    fn fo_structure_counts() {
        let d = PredSym::domain();
        assert_eq!(enumerate_fo_structures(2, &[], &[]).count(), 4);
        assert_eq!(enumerate_fo_structures(2, &[], std::slice::from_ref(&d)).count(), 16);
        assert_eq!(enumerate_fo_structures(3, &[Var::new("x")], &[d]).count(), 27 * 8);
        for m in enumerate_fo_structures(2, &[], &[PredSym::new("p")]) {
            m.validate().unwrap();
        }
    }
}
