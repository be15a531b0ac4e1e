//! Finite and infinite satisfiability of ∃*∀* sentences.
//!
//! The finite procedure tries universes `{0, ..., u-1}` for increasing `u`
//! up to the small-model bound. For each `u` it fixes the existential
//! variables to a first-use ordered store and builds the heap cell by
//! cell in a depth-first search. After each cell every still-undecided
//! assignment of the universal variables is evaluated three-valuedly:
//! a definite `false` prunes the branch and a definite `true` retires the
//! assignment for the whole subtree.
//!
//! Cell targets are restricted to locations already touched (named by the
//! store, an earlier cell index, or an earlier target) plus the least
//! untouched one. Untouched locations are interchangeable by a permutation
//! fixing everything decided so far, so this loses no models up to
//! isomorphism.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::reductions::infinite_to_finite;
use crate::semantics::compiled::{Machine, Mask, OutOfSteps, Program, Tri, MAX_UNIVERSE, NONE};
use crate::semantics::{eval_sl_budgeted, Budget, Env, Interrupt};
use crate::structure::{canonical_stores, SlStructure};
use crate::syntax::{rename_apart, to_prenex, PrenexView, Quantifier, SlFormula, Var};
use crate::testform::{conservative_maxn, desugar_points_to, is_test_combination};

use super::{bound_from, oracle_sat_sl, SatResult, SolverConfig, Stats, Status, Witness};

/// Universe size the infinite procedure hands to the oracle when the
/// reduced sentence falls outside the ∃*∀* class.
const INFINITE_ORACLE_BOUND: usize = 5;

/// Steps allowed for re-checking a witness with the reference evaluator.
const RECHECK_STEPS: u64 = 20_000_000;

/// Decides whether the closed ∃*∀* sentence `phi` has a finite model.
///
/// Returns `Sat` with a smallest witness, `Unsat` once every universe up to
/// the small-model bound has been searched, and `BoundedUnknown` when the
/// step budget or the universe cap stops the search first.
pub fn check_finite_sat(phi: &SlFormula, config: &SolverConfig) -> Result<SatResult> {
    let start = Instant::now();
    let free = phi.free_vars();
    if !free.is_empty() {
        return Err(Error::NotClosed(join(&free)));
    }
    let (n, m) = phi
        .classify_prefix()
        .bsr()
        .ok_or_else(|| Error::NotBsr(phi.to_string()))?;
    let renamed = rename_apart(phi);
    let (prefix, matrix) = renamed.split_prefix();
    let xs: Vec<Var> = prefix
        .iter()
        .filter(|(q, _)| *q == Quantifier::Exists)
        .map(|(_, v)| v.clone())
        .collect();
    let ys: Vec<Var> = prefix
        .iter()
        .filter(|(q, _)| *q == Quantifier::Forall)
        .map(|(_, v)| v.clone())
        .collect();
    let bound = bound_from(n, m, conservative_maxn(matrix)? as usize);
    let cap = config.max_universe.clamp(1, MAX_UNIVERSE);
    let target = bound.min(cap);
    let inputs: Vec<Var> = xs.iter().chain(&ys).cloned().collect();
    let prog = Program::compile(matrix, &inputs)?;

    let mut stats = Stats::default();
    let mut explored = 0;
    for u in 1..=target {
        let level = search_level(&prog, u, n, m, config);
        stats.visited += level.visited;
        stats.steps += level.steps;
        match level.outcome {
            LevelOutcome::Found { store, cells } => {
                let structure = SlStructure::with_size(
                    u,
                    xs.iter().cloned().zip(store.iter().map(|&l| l as usize)),
                    cells
                        .iter()
                        .enumerate()
                        .filter(|(_, &t)| t != NONE)
                        .map(|(a, &t)| (a, t as usize))
                        .collect(),
                )?;
                assert!(recheck(&structure, phi)?, "witness fails re-check:\n{structure}");
                if is_test_combination(&desugar_points_to(matrix), true) {
                    // A location outside elems(h) can be dropped while more
                    // than n+m remain, unless it is the last one.
                    assert!(
                        structure.slack() <= n + m || u == 1,
                        "smallest witness has more than n+m locations outside elems(h)"
                    );
                }
                stats.elapsed = start.elapsed();
                return Ok(SatResult {
                    status: Status::Sat,
                    witness: Some(Witness::Sl {
                        structure,
                        inflatable: false,
                    }),
                    bound_used: u,
                    target_bound: Some(bound),
                    stats,
                });
            }
            LevelOutcome::OutOfSteps => break,
            LevelOutcome::Exhausted => {
                explored = u;
                if stats.steps > config.max_steps {
                    break;
                }
            }
        }
    }
    stats.elapsed = start.elapsed();
    let status = if explored == bound {
        Status::Unsat
    } else {
        Status::BoundedUnknown
    };
    Ok(SatResult {
        status,
        witness: None,
        bound_used: explored,
        target_bound: Some(bound),
        stats,
    })
}

/// Decides whether the closed sentence `phi` has an infinite model.
///
/// The sentence is put in prenex form if necessary and reduced to finite
/// satisfiability. A model found for the reduced sentence is reported as
/// an inflatable witness. If the reduced sentence is not ∃*∀*, the bounded
/// oracle is consulted instead and no `Unsat` answer is possible.
pub fn check_infinite_sat(phi: &SlFormula, config: &SolverConfig) -> Result<SatResult> {
    let free = phi.free_vars();
    if !free.is_empty() {
        return Err(Error::NotClosed(join(&free)));
    }
    let prenex = if phi.classify_prefix().is_prenex() {
        phi.clone()
    } else {
        to_prenex(phi).ok_or(Error::NotPrenex)?
    };
    let reduced = infinite_to_finite(&prenex)?;
    let mut result = if reduced.classify_prefix().bsr().is_some() {
        check_finite_sat(&reduced, config)?
    } else {
        oracle_sat_sl(&reduced, INFINITE_ORACLE_BOUND, config.max_steps)?
    };
    if let Some(Witness::Sl { structure, inflatable }) = &mut result.witness {
        *structure = pad_for_infinite(structure, phi);
        *inflatable = true;
        assert!(recheck(structure, phi)?, "padded witness fails re-check:\n{structure}");
        result.bound_used = structure.universe_size();
    }
    Ok(result)
}

/// Adds fresh locations until `|U| >= n` holds and `|h| >= |U| - n` fails
/// for every constant `n` of `phi`, so that both atoms take the value they
/// have on infinite universes. The heap is unchanged and the added
/// locations are unused, so the padded structure still satisfies the
/// reduced sentence and hence `phi` itself.
fn pad_for_infinite(s: &SlStructure, phi: &SlFormula) -> SlStructure {
    let c = phi
        .subformulas()
        .into_iter()
        .filter_map(|f| match f {
            SlFormula::UnivGe(n) | SlFormula::HeapGeUnivMinus(n) => Some(*n as usize),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let need = c.max(s.heap.len() + c + 1);
    s.inflated(need.saturating_sub(s.universe_size()))
}

fn join(vars: &std::collections::BTreeSet<Var>) -> String {
    vars.iter().map(Var::to_string).collect::<Vec<_>>().join(", ")
}

/// Evaluates a closed sentence on a witness, falling back to the compiled
/// evaluator when the reference one runs out of steps.
fn recheck(s: &SlStructure, phi: &SlFormula) -> Result<bool> {
    match eval_sl_budgeted(s, phi, &Env::new(), &mut Budget::new(RECHECK_STEPS)) {
        Ok(b) => Ok(b),
        Err(Interrupt::Error(e)) => Err(e),
        Err(Interrupt::OutOfBudget) => {
            let prog = Program::compile(phi, &[])?;
            let mut machine = Machine::new(&prog, s.universe_size());
            let mask = machine.load(s);
            Ok(machine.eval(mask).expect("no step limit"))
        }
    }
}

enum LevelOutcome {
    Found { store: Vec<u32>, cells: Vec<u32> },
    Exhausted,
    OutOfSteps,
}

struct Level {
    outcome: LevelOutcome,
    visited: u64,
    steps: u64,
}

/// One unit of parallel work: a store and the target of cell 0.
struct Shard {
    store: Vec<u32>,
    first: u32,
}

enum ShardOutcome {
    Found(Vec<u32>),
    Exhausted,
    OutOfSteps,
}

struct ShardReport {
    outcome: ShardOutcome,
    visited: u64,
    steps: u64,
}

fn search_level(prog: &Program, u: usize, n: usize, m: usize, config: &SolverConfig) -> Level {
    let vars: Vec<Var> = (0..n).map(|i| Var::new(format!("x{i}"))).collect();
    let mut shards = Vec::new();
    for store in canonical_stores(u, &vars) {
        let store: Vec<u32> = vars.iter().map(|v| store[v] as u32).collect();
        let top = store.iter().max().map_or(0, |&t| t as usize);
        let last = (top + 1).min(u - 1);
        shards.push(Shard {
            store: store.clone(),
            first: NONE,
        });
        for t in 0..=last {
            shards.push(Shard {
                store: store.clone(),
                first: t as u32,
            });
        }
    }

    let reports: Vec<Mutex<Option<ShardReport>>> = shards.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let best = AtomicUsize::new(usize::MAX);
    let work = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= shards.len() {
            break;
        }
        if i > best.load(Ordering::SeqCst) {
            continue;
        }
        let report = run_shard(prog, u, m, &shards[i], config.max_steps);
        if matches!(report.outcome, ShardOutcome::Found(_)) {
            best.fetch_min(i, Ordering::SeqCst);
        }
        *reports[i].lock().expect("no poisoned shard slot") = Some(report);
    };
    let workers = config.workers.clamp(1, shards.len().max(1));
    if workers == 1 {
        work();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(work);
            }
        });
    }

    let mut level = Level {
        outcome: LevelOutcome::Exhausted,
        visited: 0,
        steps: 0,
    };
    let mut out_of_steps = false;
    for (shard, slot) in shards.iter().zip(reports) {
        let Some(report) = slot.into_inner().expect("no poisoned shard slot") else {
            break;
        };
        level.visited += report.visited;
        level.steps += report.steps;
        match report.outcome {
            ShardOutcome::Found(cells) => {
                level.outcome = LevelOutcome::Found {
                    store: shard.store.clone(),
                    cells,
                };
                return level;
            }
            ShardOutcome::OutOfSteps => out_of_steps = true,
            ShardOutcome::Exhausted => {}
        }
    }
    if out_of_steps {
        level.outcome = LevelOutcome::OutOfSteps;
    }
    level
}

fn run_shard(prog: &Program, u: usize, m: usize, shard: &Shard, limit: u64) -> ShardReport {
    let mut search = Search {
        machine: Machine::new(prog, u),
        n: shard.store.len(),
        m,
        u,
        visited: 0,
    };
    search.machine.limit = limit;
    search.machine.env[..shard.store.len()].copy_from_slice(&shard.store);
    let top = shard.store.iter().max().map_or(-1, |&t| t as i64);
    let total = (u as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
    let outcome = if total > u32::MAX as u64 {
        ShardOutcome::OutOfSteps
    } else {
        let all: Vec<u32> = (0..total as u32).collect();
        match search.root(&all, shard.first, top) {
            Ok(true) => ShardOutcome::Found(search.machine.cells.clone()),
            Ok(false) => ShardOutcome::Exhausted,
            Err(OutOfSteps) => ShardOutcome::OutOfSteps,
        }
    };
    ShardReport {
        outcome,
        visited: search.visited,
        steps: search.machine.steps.min(limit),
    }
}

struct Search<'p> {
    machine: Machine<'p>,
    n: usize,
    m: usize,
    u: usize,
    visited: u64,
}

enum Filtered {
    Refuted,
    Remaining(Vec<u32>),
}

impl Search<'_> {
    fn set_tuple(&mut self, mut t: u32) {
        let u = self.u as u32;
        for j in 0..self.m {
            self.machine.env[self.n + j] = t % u;
            t /= u;
        }
    }

    /// Evaluates the open universal assignments with cells `0..k` fixed.
    fn filter(&mut self, k: usize, mask: Mask, active: &[u32]) -> Result<Filtered, OutOfSteps> {
        self.visited += 1;
        let mut keep = Vec::with_capacity(active.len());
        for &t in active {
            self.set_tuple(t);
            match self.machine.eval_partial(k, mask)? {
                Tri::False => return Ok(Filtered::Refuted),
                Tri::True => {}
                Tri::Unknown => keep.push(t),
            }
        }
        Ok(Filtered::Remaining(keep))
    }

    fn root(&mut self, active: &[u32], first: u32, top: i64) -> Result<bool, OutOfSteps> {
        let keep = match self.filter(0, 0, active)? {
            Filtered::Refuted => return Ok(false),
            Filtered::Remaining(keep) => keep,
        };
        self.machine.cells[0] = first;
        if keep.is_empty() {
            return Ok(true);
        }
        let (mask, top) = if first == NONE {
            (0, top)
        } else {
            (1, top.max(first as i64))
        };
        self.dfs(1, mask, top, &keep)
    }

    fn dfs(&mut self, k: usize, mask: Mask, top: i64, active: &[u32]) -> Result<bool, OutOfSteps> {
        let keep = match self.filter(k, mask, active)? {
            Filtered::Refuted => return Ok(false),
            Filtered::Remaining(keep) => keep,
        };
        if keep.is_empty() {
            return Ok(true);
        }
        debug_assert!(k < self.u, "complete heaps evaluate exactly");
        let last = ((k as i64).max(top) + 1).min(self.u as i64 - 1) as u32;
        for choice in std::iter::once(NONE).chain(0..=last) {
            self.machine.cells[k] = choice;
            let found = if choice == NONE {
                self.dfs(k + 1, mask, top, &keep)?
            } else {
                self.dfs(k + 1, mask | 1 << k, top.max(choice as i64), &keep)?
            };
            if found {
                return Ok(true);
            }
        }
        self.machine.cells[k] = NONE;
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sl;

    fn finite(src: &str) -> SatResult {
        check_finite_sat(&parse_sl(src).unwrap(), &SolverConfig::default()).unwrap()
    }

    fn infinite(src: &str) -> SatResult {
        check_infinite_sat(&parse_sl(src).unwrap(), &SolverConfig::default()).unwrap()
    }

    #[test]
    fn total_heap() {
        let r = finite("forall y. alloc(y)");
        assert_eq!(r.status, Status::Sat);
        let expected = SlStructure::with_size(1, [], [(0, 0)].into()).unwrap();
        assert_eq!(
            r.witness,
            Some(Witness::Sl {
                structure: expected,
                inflatable: false
            })
        );
        assert_eq!(infinite("forall y. alloc(y)").status, Status::Unsat);
    }

    #[test]
    fn contradictions() {
        assert_eq!(finite("emp & |h| >= 1").status, Status::Unsat);
        assert_eq!(finite("exists x. x |-> x & ~alloc(x)").status, Status::Unsat);
    }

    #[test]
    fn infinite_models() {
        let r = infinite("~emp");
        assert_eq!(r.status, Status::Sat);
        assert!(matches!(r.witness, Some(Witness::Sl { inflatable: true, .. })));
        assert_eq!(infinite("exists x. ~alloc(x)").status, Status::Sat);
    }

    #[test]
    fn existential_witness_in_store() {
        let r = finite("exists x, y. forall z. x ~> y & ~x = y & ~z ~> x");
        assert_eq!(r.status, Status::Sat);
        let Some(Witness::Sl { structure, .. }) = r.witness else {
            panic!("witness expected")
        };
        assert_eq!(structure.universe_size(), 2);
        assert_eq!(structure.heap, [(0, 1)].into());
    }

    #[test]
    fn padded_infinite_witness() {
        let phi = parse_sl("exists x. ~alloc(x) & |U| >= 5 & ~|h| >= |U| - 2").unwrap();
        let r = check_infinite_sat(&phi, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, Status::Sat);
        let Some(Witness::Sl { structure, .. }) = r.witness else {
            panic!("witness expected")
        };
        assert!(structure.universe_size() >= 5);
        assert!(crate::semantics::eval_sl(&structure, &phi, &Env::new()).unwrap());
    }

    #[test]
    fn rejects_ineligible() {
        let cfg = SolverConfig::default();
        assert!(matches!(
            check_finite_sat(&parse_sl("alloc(x)").unwrap(), &cfg),
            Err(Error::NotClosed(_))
        ));
        assert!(matches!(
            check_finite_sat(&parse_sl("forall x. exists y. x ~> y").unwrap(), &cfg),
            Err(Error::NotBsr(_))
        ));
    }

    #[test]
    fn budget_gives_bounded_unknown() {
        let cfg = SolverConfig {
            max_steps: 50,
            ..SolverConfig::default()
        };
        let r = check_finite_sat(&parse_sl("forall a, b. a ~> b -> a = b").unwrap(), &cfg).unwrap();
        assert_ne!(r.status, Status::Unsat);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        for src in [
            "exists x. forall y. ~y ~> x & alloc(x) & |h| >= 3",
            "forall a, b. a ~> b -> ~b ~> a",
            "exists x. x |-> x & ~alloc(x)",
        ] {
            let phi = parse_sl(src).unwrap();
            let one = check_finite_sat(&phi, &SolverConfig::default()).unwrap();
            let four = check_finite_sat(
                &phi,
                &SolverConfig {
                    workers: 4,
                    ..SolverConfig::default()
                },
            )
            .unwrap();
            assert_eq!(one.render(), four.render());
        }
    }
}
