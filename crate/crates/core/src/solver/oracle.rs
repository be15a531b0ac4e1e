//! Brute-force model search with the reference evaluators.
//!
//! Every structure over `{0, ..., u-1}` is tried for `u = 1, 2, ...` with no
//! symmetry reduction and no pruning. The search shares no code with the
//! finite solver beyond the structure types, so agreement between the two
//! is meaningful. Without a completeness argument the oracle never
//! answers `Unsat`.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::semantics::{eval_fo_budgeted, eval_sl_budgeted, Budget, Env, Interrupt};
use crate::structure::{enumerate_fo_structures, enumerate_heaps, SlStructure};
use crate::syntax::{FoFormula, Formula, SlFormula, Var};

use super::{SatResult, Stats, Status, Witness};

/// Searches for a model of a closed SL or FO sentence with at most
/// `max_universe` locations, spending at most `max_steps` evaluation steps.
pub fn oracle_sat(phi: &Formula, max_universe: usize, max_steps: u64) -> Result<SatResult> {
    match phi {
        Formula::Sl(f) => oracle_sat_sl(f, max_universe, max_steps),
        Formula::Fo(f) => oracle_sat_fo(f, max_universe, max_steps),
    }
}

pub fn oracle_sat_sl(phi: &SlFormula, max_universe: usize, max_steps: u64) -> Result<SatResult> {
    closed(phi.free_vars())?;
    search(max_universe, max_steps, |u, budget, stats| {
        for heap in enumerate_heaps(u) {
            stats.visited += 1;
            let s = SlStructure::with_size(u, [], heap)?;
            if eval_sl_budgeted(&s, phi, &Env::new(), budget)? {
                return Ok(Some(Witness::Sl {
                    structure: s,
                    inflatable: false,
                }));
            }
        }
        Ok(None)
    })
}

pub fn oracle_sat_fo(phi: &FoFormula, max_universe: usize, max_steps: u64) -> Result<SatResult> {
    closed(phi.free_vars())?;
    let preds: Vec<_> = phi.predicates().into_iter().collect();
    search(max_universe, max_steps, |u, budget, stats| {
        for m in enumerate_fo_structures(u, &[], &preds) {
            stats.visited += 1;
            if eval_fo_budgeted(&m, phi, &Env::new(), budget)? {
                return Ok(Some(Witness::Fo(m)));
            }
        }
        Ok(None)
    })
}

fn closed(free: std::collections::BTreeSet<Var>) -> Result<()> {
    if free.is_empty() {
        Ok(())
    } else {
        let names: Vec<String> = free.iter().map(Var::to_string).collect();
        Err(Error::NotClosed(names.join(", ")))
    }
}

fn search(
    max_universe: usize,
    max_steps: u64,
    mut level: impl FnMut(usize, &mut Budget, &mut Stats) -> Result<Option<Witness>, Interrupt>,
) -> Result<SatResult> {
    let start = Instant::now();
    let mut budget = Budget::new(max_steps);
    let mut stats = Stats::default();
    let mut explored = 0;
    let mut witness = None;
    for u in 1..=max_universe {
        match level(u, &mut budget, &mut stats) {
            Ok(Some(w)) => {
                witness = Some(w);
                break;
            }
            Ok(None) => explored = u,
            Err(Interrupt::OutOfBudget) => break,
            Err(Interrupt::Error(e)) => return Err(e),
        }
    }
    stats.steps = budget.used.min(max_steps);
    stats.elapsed = start.elapsed();
    Ok(match witness {
        Some(w) => SatResult {
            status: Status::Sat,
            bound_used: w.universe_size(),
            witness: Some(w),
            target_bound: Some(max_universe),
            stats,
        },
        None => SatResult {
            status: Status::BoundedUnknown,
            witness: None,
            bound_used: explored,
            target_bound: Some(max_universe),
            stats,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_fo, parse_sl};

    const STEPS: u64 = 100_000_000;

    #[test]
    fn injective_non_surjective_function_has_no_small_model() {
        let phi = parse_fo("exists x. forall y. ~x = f(y) & forall y, z. f(y) = f(z) -> y = z")
            .unwrap();
        let r = oracle_sat_fo(&phi, 5, STEPS).unwrap();
        assert_eq!(r.status, Status::BoundedUnknown);
        assert_eq!(r.bound_used, 5);
    }

    #[test]
    fn vacuous_right_disjunct() {
        let phi = parse_sl("forall x. exists y. x ~> y | ~alloc(x)").unwrap();
        let r = oracle_sat_sl(&phi, 1, STEPS).unwrap();
        assert_eq!(r.status, Status::Sat);
        let expected = SlStructure::with_size(1, [], Default::default()).unwrap();
        assert_eq!(
            r.witness,
            Some(Witness::Sl {
                structure: expected,
                inflatable: false
            })
        );
    }

    #[test]
    fn false_is_never_refuted() {
        let r = oracle_sat_sl(&SlFormula::False, 3, STEPS).unwrap();
        assert_eq!(r.status, Status::BoundedUnknown);
        assert_eq!(r.bound_used, 3);
    }

    #[test]
    fn budget_stops_early() {
        let r = oracle_sat_sl(&SlFormula::False, 6, 100).unwrap();
        assert_eq!(r.status, Status::BoundedUnknown);
        assert!(r.bound_used < 6);
    }

    #[test]
    fn monotone_in_the_bound() {
        let phi = parse_sl("exists x, y. ~x = y & x ~> y").unwrap();
        assert_eq!(oracle_sat_sl(&phi, 1, STEPS).unwrap().status, Status::BoundedUnknown);
        for b in 2..=4 {
            let r = oracle_sat_sl(&phi, b, STEPS).unwrap();
            assert_eq!(r.status, Status::Sat);
            assert_eq!(r.bound_used, 2);
        }
    }
}
