//! Satisfiability checking.
//!
//! [`check_finite_sat`] decides finite satisfiability of ∃*∀* sentences by
//! searching all universes up to the small-model bound.
//! [`check_infinite_sat`] reduces infinite satisfiability to the finite
//! case. [`oracle_sat`] is an independent brute-force search used to
//! cross-check both, and [`fuzz_compare`] drives that comparison over
//! generated sentences.

mod finite;
mod fuzz;
pub mod gen;
mod oracle;

use std::fmt;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::semantics::compiled::MAX_UNIVERSE;
use crate::structure::{FoStructure, SlStructure};
use crate::syntax::{PrenexView, SlFormula};
use crate::testform::conservative_maxn;

pub use finite::{check_finite_sat, check_infinite_sat};
pub use fuzz::{fuzz_compare, Disagreement, FuzzConfig, FuzzEntry, FuzzReport};
pub use oracle::{oracle_sat, oracle_sat_fo, oracle_sat_sl};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Sat,
    Unsat,
    /// No model up to the explored bound, and no completeness argument
    /// covers the rest.
    BoundedUnknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::BoundedUnknown => "UNKNOWN",
        })
    }
}

/// A model found by one of the procedures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// An SL model. When `inflatable` is set it answers an infinite
    /// satisfiability question: adding any number of fresh locations,
    /// infinitely many included, keeps it a model.
    Sl {
        structure: SlStructure,
        inflatable: bool,
    },
    Fo(FoStructure),
}

impl Witness {
    pub fn universe_size(&self) -> usize {
        match self {
            Witness::Sl { structure, .. } => structure.universe_size(),
            Witness::Fo(m) => m.universe.len(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Sl { structure, .. } => structure.fmt(f),
            Witness::Fo(m) => m.fmt(f),
        }
    }
}

/// Search effort counters. `elapsed` is wall time and is the only field
/// that varies between identical runs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Search nodes or candidate structures examined.
    pub visited: u64,
    /// Evaluation steps charged against the budget.
    pub steps: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatResult {
    pub status: Status,
    pub witness: Option<Witness>,
    /// For `Sat`, the size of the witness universe. Otherwise the largest
    /// universe size up to which every size was fully explored.
    pub bound_used: usize,
    /// The size the search aimed to reach, when one was computed.
    pub target_bound: Option<usize>,
    pub stats: Stats,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }

    /// Renders the result without timing information.
    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.status);
        match self.target_bound {
            Some(b) => out.push_str(&format!("bound {} of {}\n", self.bound_used, b)),
            None => out.push_str(&format!("bound {}\n", self.bound_used)),
        }
        out.push_str(&format!(
            "visited {}\nsteps {}\n",
            self.stats.visited, self.stats.steps
        ));
        if let Some(w) = &self.witness {
            if let Witness::Sl { inflatable: true, .. } = w {
                out.push_str("# stays a model when fresh locations are added\n");
            }
            out.push_str(&w.to_string());
        }
        out
    }
}

/// Resource limits shared by the procedures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Evaluation step budget. The finite solver applies it to each search
    /// shard and to the total over completed universe sizes.
    pub max_steps: u64,
    /// Worker threads for the finite solver.
    pub workers: usize,
    /// Largest universe the finite solver will try, capped at 128.
    pub max_universe: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_steps: 200_000_000,
            workers: 1,
            max_universe: MAX_UNIVERSE,
        }
    }
}

/// The universe size up to which a ∃ⁿ∀ᵐ sentence must have a model if it
/// has a finite one: `max(2N+3n+m, 2m(n+2N+1), n+m+1)`, where `N` bounds
/// the numeric constants of the matrix minterms.
pub fn small_model_bound(phi: &SlFormula) -> Result<usize> {
    let class = phi.classify_prefix();
    let (n, m) = class
        .bsr()
        .ok_or_else(|| Error::NotBsr(phi.to_string()))?;
    let (_, matrix) = phi.split_prefix();
    let big_n = conservative_maxn(matrix)? as usize;
    Ok(bound_from(n, m, big_n))
}

pub(crate) fn bound_from(n: usize, m: usize, big_n: usize) -> usize {
    (2 * big_n + 3 * n + m)
        .max(2 * m * (n + 2 * big_n + 1))
        .max(n + m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_arithmetic() {
        assert_eq!(bound_from(1, 1, 2), 12);
        assert_eq!(bound_from(0, 0, 2), 4);
        assert_eq!(bound_from(2, 0, 3), 12);
    }

    #[test]
    fn bound_of_sentences() {
        let phi = crate::syntax::parse_sl("exists x. forall y. x |-> y | alloc(y)").unwrap();
        assert_eq!(small_model_bound(&phi).unwrap(), 12);
        let psi = crate::syntax::parse_sl("forall x. exists y. x = y").unwrap();
        assert!(matches!(small_model_bound(&psi), Err(Error::NotBsr(_))));
    }
}
