//! Structure surgery for the small-model argument: frontier sets, heap
//! segments, contraction and restriction.
//!
//! Given a structure `I`, variables `X` and locations `L`:
//!
//! * `V = L ∪ s(X)`,
//! * `V̄` is the set of locations reachable from `V` through the heap,
//! * `W` adds to `V` every location of `V̄` with two or more distinct heap
//!   predecessors inside `V̄`.
//!
//! The heap restricted to `V̄ ∖ W` decomposes into segments hanging off
//! the locations of `W`. Contraction shortens these segments to at most
//! `N` cells, restriction drops everything outside `V̄`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::structure::{Heap, Loc, SlStructure};
use crate::syntax::Var;

/// The sets `V`, `V̄` and `W` of a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierSets {
    pub v: BTreeSet<Loc>,
    pub vbar: BTreeSet<Loc>,
    pub w: BTreeSet<Loc>,
}

pub fn frontier_sets(
    s: &SlStructure,
    xs: &BTreeSet<Var>,
    locs: &BTreeSet<Loc>,
) -> Result<FrontierSets> {
    if let Some(l) = locs.iter().find(|l| !s.universe.contains(l)) {
        return Err(Error::LocationOutOfRange(*l));
    }
    let mut v = s.store_image(xs)?;
    v.extend(locs.iter().copied());

    let mut vbar = BTreeSet::new();
    let mut todo: Vec<Loc> = v.iter().copied().collect();
    while let Some(l) = todo.pop() {
        if vbar.insert(l) {
            if let Some(next) = s.heap.get(l) {
                todo.push(next);
            }
        }
    }

    let mut preds: BTreeMap<Loc, usize> = BTreeMap::new();
    for &l in &vbar {
        if let Some(t) = s.heap.get(l) {
            *preds.entry(t).or_default() += 1;
        }
    }
    let mut w = v.clone();
    w.extend(preds.into_iter().filter(|&(_, k)| k >= 2).map(|(l, _)| l));
    Ok(FrontierSets { v, vbar, w })
}

/// The segment `S(ℓ0)`, truncated to its first `min(|S|-1, N) + 1`
/// locations when `bound` is `Some(N)`.
///
/// The walk follows the heap from `ℓ0` through allocated locations outside
/// `W` and stops before a location that is in `W` or unallocated.
pub fn segment(
    s: &SlStructure,
    l0: Loc,
    sets: &FrontierSets,
    bound: Option<usize>,
) -> Result<Vec<Loc>> {
    if !s.heap.contains(l0) {
        return Err(Error::Unallocated(l0));
    }
    let mut seq = vec![l0];
    let mut cur = l0;
    while let Some(next) = s.heap.get(cur) {
        // A revisit can only happen when ℓ0 itself is outside W.
        if sets.w.contains(&next) || !s.heap.contains(next) || seq.contains(&next) {
            break;
        }
        seq.push(next);
        cur = next;
    }
    if let Some(n) = bound {
        seq.truncate(n.min(seq.len() - 1) + 1);
    }
    Ok(seq)
}

/// The first `h^i(ℓ)`, `i > 0`, that lies in `W` or has no successor.
fn retarget(heap: &Heap, l: Loc, w: &BTreeSet<Loc>) -> Loc {
    let mut t = heap.get(l).expect("segment cells are allocated");
    for _ in 0..=heap.len() {
        match heap.get(t) {
            Some(next) if !w.contains(&t) => t = next,
            _ => break,
        }
    }
    t
}

/// The `(N, X, L)`-contraction of `s`.
///
/// The new universe holds `U ∖ V̄` and, for every `ℓ0 ∈ W`, the truncated
/// segment `S^N(ℓ0)` (just `ℓ0` when it is unallocated). The heap agrees
/// with `s` on `(U ∖ V̄) ∪ W` and on the kept segment cells, except that
/// the last kept cell of a shortened segment jumps to the next location in
/// `W` or to the segment's unallocated end. Any heap target that would
/// fall outside the new universe is kept in it, so the result is always
/// a well-formed structure. Store entries whose location is dropped are
/// removed.
pub fn contract(
    s: &SlStructure,
    n: usize,
    xs: &BTreeSet<Var>,
    locs: &BTreeSet<Loc>,
) -> Result<SlStructure> {
    if n == 0 {
        return Err(Error::Precondition("the contraction bound must be at least 1".into()));
    }
    let sets = frontier_sets(s, xs, locs)?;
    let mut universe: BTreeSet<Loc> = s.universe.difference(&sets.vbar).copied().collect();
    let mut heap = Heap::new();
    for &l in &universe {
        if let Some(t) = s.heap.get(l) {
            heap.insert(l, t);
        }
    }
    for &l0 in &sets.w {
        universe.insert(l0);
        if !s.heap.contains(l0) {
            continue;
        }
        let seg = segment(s, l0, &sets, Some(n))?;
        let last = seg.len() - 1;
        for (i, &l) in seg.iter().enumerate() {
            universe.insert(l);
            let target = if i < last {
                s.heap.get(l).expect("segment cells are allocated")
            } else {
                retarget(&s.heap, l, &sets.w)
            };
            heap.insert(l, target);
        }
    }
    let targets: Vec<Loc> = heap.img().into_iter().collect();
    universe.extend(targets);
    let store = s
        .store
        .iter()
        .filter(|(_, l)| universe.contains(l))
        .map(|(v, &l)| (v.clone(), l))
        .collect();
    let out = SlStructure::new(universe, store, heap)?;
    debug_assert!(
        out.universe_size() - (s.universe_size() - sets.vbar.len())
            <= 2 * sets.v.len() * (n + 2),
        "contraction grew beyond 2|V|(N+2) locations"
    );
    Ok(out)
}

/// The `(X, L)`-restriction of `s`: the universe becomes `V̄` and the heap
/// is cut down to it. Store entries outside `V̄` are removed.
pub fn restrict(s: &SlStructure, xs: &BTreeSet<Var>, locs: &BTreeSet<Loc>) -> Result<SlStructure> {
    let sets = frontier_sets(s, xs, locs)?;
    if sets.vbar.is_empty() {
        return Err(Error::Precondition(
            "nothing is reachable from X and L, the restriction would be empty".into(),
        ));
    }
    let heap = s.heap.restrict(&sets.vbar);
    debug_assert!(heap.elems().is_subset(&sets.vbar));
    let store = s
        .store
        .iter()
        .filter(|(_, l)| sets.vbar.contains(l))
        .map(|(v, &l)| (v.clone(), l))
        .collect();
    SlStructure::new(sets.vbar, store, heap)
}

/// Picks `L = L1 ∪ L2` with `|L ∩ dom(h)| = N` and
/// `|(L ∪ s(X)) ∖ dom(h)| = min(|U ∖ dom(h)|, N + 1)`, taking the lowest
/// eligible locations outside `s(X)`.
///
/// Returns `None` when `|dom(h)| < N + |X|`, when a variable of `X` is
/// unbound, or when `s(X)` alone already has more than `N + 1`
/// unallocated locations.
pub fn choose_l(s: &SlStructure, xs: &BTreeSet<Var>, n: usize) -> Option<BTreeSet<Loc>> {
    let sx = s.store_image(xs).ok()?;
    if s.heap.len() < n + xs.len() {
        return None;
    }
    let free_total = s.universe.iter().filter(|&&l| !s.heap.contains(l)).count();
    let free_in_sx = sx.iter().filter(|&&l| !s.heap.contains(l)).count();
    let want_free = free_total.min(n + 1).checked_sub(free_in_sx)?;
    let candidates = s.universe.iter().copied().filter(|l| !sx.contains(l));
    let l1 = candidates.clone().filter(|&l| s.heap.contains(l)).take(n);
    let l2 = candidates.filter(|&l| !s.heap.contains(l)).take(want_free);
    let out: BTreeSet<Loc> = l1.chain(l2).collect();
    debug_assert_eq!(out.iter().filter(|&&l| s.heap.contains(l)).count(), n);
    debug_assert_eq!(
        out.union(&sx).filter(|&&l| !s.heap.contains(l)).count(),
        free_total.min(n + 1)
    );
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> BTreeSet<Var> {
        [Var::new("x")].into()
    }

    fn chain() -> SlStructure {
        SlStructure::with_size(4, [(Var::new("x"), 0)], [(0, 1), (1, 2), (2, 3)].into()).unwrap()
    }

    #[test]
    fn frontier_of_a_chain() {
        let sets = frontier_sets(&chain(), &x(), &BTreeSet::new()).unwrap();
        assert_eq!(sets.v, [0].into());
        assert_eq!(sets.vbar, [0, 1, 2, 3].into());
        assert_eq!(sets.w, [0].into());
    }

    #[test]
    fn frontier_with_a_merge() {
        let s = SlStructure::new(
            [0, 1, 2, 3, 9].into(),
            [(Var::new("x"), 0)].into(),
            [(0, 1), (1, 2), (2, 3), (9, 2)].into(),
        )
        .unwrap();
        let sets = frontier_sets(&s, &x(), &[9].into()).unwrap();
        assert_eq!(sets.w, [0, 2, 9].into());
    }

    #[test]
    fn frontier_of_nothing() {
        let sets = frontier_sets(&chain(), &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert!(sets.v.is_empty() && sets.vbar.is_empty() && sets.w.is_empty());
    }

    #[test]
    fn segments() {
        let s = chain();
        let sets = frontier_sets(&s, &x(), &BTreeSet::new()).unwrap();
        assert_eq!(segment(&s, 0, &sets, None).unwrap(), vec![0, 1, 2]);
        assert_eq!(segment(&s, 0, &sets, Some(1)).unwrap(), vec![0, 1]);
        assert!(matches!(segment(&s, 3, &sets, None), Err(Error::Unallocated(3))));

        let loop1 = SlStructure::with_size(1, [(Var::new("x"), 0)], [(0, 0)].into()).unwrap();
        let sets = frontier_sets(&loop1, &x(), &BTreeSet::new()).unwrap();
        assert_eq!(segment(&loop1, 0, &sets, None).unwrap(), vec![0]);
    }

    #[test]
    fn contract_chain_keeps_the_retarget() {
        let c = contract(&chain(), 1, &x(), &BTreeSet::new()).unwrap();
        assert_eq!(c.universe, [0, 1, 3].into());
        assert_eq!(c.heap, [(0, 1), (1, 3)].into());
    }

    #[test]
    fn contract_with_large_bound_is_inert() {
        let s = chain();
        let c = contract(&s, 5, &x(), &BTreeSet::new()).unwrap();
        assert_eq!(c, s);
        assert_eq!(contract(&c, 5, &x(), &BTreeSet::new()).unwrap(), c);
    }

    #[test]
    fn contract_empty_heap() {
        let s = SlStructure::with_size(3, [(Var::new("x"), 1)], Heap::new()).unwrap();
        assert_eq!(contract(&s, 1, &x(), &BTreeSet::new()).unwrap(), s);
        assert!(matches!(
            contract(&s, 0, &x(), &BTreeSet::new()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn contract_two_segments() {
        // 2 has the two predecessors 1 and 4, so W = {0, 2}.
        let s = SlStructure::with_size(
            5,
            [(Var::new("x"), 0)],
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 2)].into(),
        )
        .unwrap();
        let c = contract(&s, 1, &x(), &BTreeSet::new()).unwrap();
        assert_eq!(c.universe, [0, 1, 2, 3].into());
        assert_eq!(c.heap, [(0, 1), (1, 2), (2, 3), (3, 2)].into());
    }

    #[test]
    fn restrict_drops_unreachable() {
        let s = SlStructure::new(
            [0, 1, 2, 9].into(),
            [(Var::new("x"), 0)].into(),
            [(0, 1)].into(),
        )
        .unwrap();
        let r = restrict(&s, &x(), &BTreeSet::new()).unwrap();
        assert_eq!(r.universe, [0, 1].into());
        assert_eq!(r.heap, [(0, 1)].into());
        assert_eq!(r.store, s.store);
        let all: BTreeSet<Loc> = s.universe.clone();
        assert_eq!(restrict(&s, &x(), &all).unwrap(), s);
        let empty = SlStructure::with_size(2, [], Heap::new()).unwrap();
        assert!(restrict(&empty, &BTreeSet::new(), &BTreeSet::new()).is_err());
    }

    #[test]
    fn choose_l_cases() {
        let s = SlStructure::with_size(
            8,
            [(Var::new("x"), 0)],
            [(0, 1), (1, 2), (2, 3), (3, 0)].into(),
        )
        .unwrap();
        let l = choose_l(&s, &x(), 2).unwrap();
        assert_eq!(l, [1, 2, 4, 5, 6].into());

        let empty = SlStructure::with_size(3, [(Var::new("x"), 0)], Heap::new()).unwrap();
        assert_eq!(choose_l(&empty, &x(), 1), None);

        let total = SlStructure::with_size(3, [(Var::new("x"), 0)], [(0, 1), (1, 2), (2, 0)].into())
            .unwrap();
        assert_eq!(choose_l(&total, &x(), 2).unwrap(), [1, 2].into());
    }
}
