//! Cross-checking the finite solver against the brute-force oracle.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::error::Result;
use crate::semantics::{eval_sl, Env};

use super::gen::{GenConfig, Generator};
use super::{check_finite_sat, oracle_sat_sl, SatResult, SolverConfig, Status, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub gen: GenConfig,
    pub solver: SolverConfig,
    /// Step budget of each oracle run.
    pub oracle_steps: u64,
    /// The oracle searches up to the small-model bound plus this amount.
    pub oracle_extra: usize,
    /// Include wall-clock time in the rendered report.
    pub timing: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            gen: GenConfig::default(),
            solver: SolverConfig {
                max_steps: 5_000_000,
                ..SolverConfig::default()
            },
            oracle_steps: 5_000_000,
            oracle_extra: 2,
            timing: false,
        }
    }
}

/// Outcome of one generated sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzEntry {
    pub index: usize,
    pub formula: String,
    pub solver: Status,
    pub solver_bound: usize,
    pub oracle: Status,
    pub oracle_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub index: usize,
    pub formula: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzReport {
    pub seed: u64,
    pub entries: Vec<FuzzEntry>,
    pub disagreements: Vec<Disagreement>,
    /// Witnesses re-evaluated with the reference evaluator.
    pub witnesses_checked: usize,
    pub elapsed: Option<Duration>,
}

impl FuzzReport {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty()
    }

    /// Counts of (solver verdict, oracle verdict) pairs.
    pub fn distribution(&self) -> BTreeMap<(String, String), usize> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry((e.solver.to_string(), e.oracle.to_string()))
                .or_default() += 1;
        }
        out
    }

    /// A text report. It is identical across runs with the same seed,
    /// count and configuration unless timing was requested.
    pub fn render(&self, verbose: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "sentences {}", self.entries.len());
        let _ = writeln!(out, "witnesses checked {}", self.witnesses_checked);
        let _ = writeln!(out, "disagreements {}", self.disagreements.len());
        for ((s, o), k) in self.distribution() {
            let _ = writeln!(out, "solver {s} oracle {o}: {k}");
        }
        if let Some(t) = self.elapsed {
            let _ = writeln!(out, "time {:.3}s", t.as_secs_f64());
        }
        for d in &self.disagreements {
            let _ = writeln!(out, "DISAGREE #{} {}: {}", d.index, d.reason, d.formula);
        }
        if verbose {
            for e in &self.entries {
                let _ = writeln!(
                    out,
                    "#{} solver {} at {} oracle {} at {}: {}",
                    e.index, e.solver, e.solver_bound, e.oracle, e.oracle_bound, e.formula
                );
            }
        }
        out
    }
}

/// Generates `count` ∃*∀* sentences from `seed` and compares the finite
/// solver with the oracle run up to the small-model bound plus
/// `oracle_extra`.
///
/// Both procedures search universes in increasing size, so whenever both
/// have fully explored a size they must agree on whether a model of at
/// most that size exists. An `Unsat` verdict contradicts any oracle model,
/// and every witness must satisfy its sentence.
pub fn fuzz_compare(seed: u64, count: usize, config: &FuzzConfig) -> Result<FuzzReport> {
    let start = Instant::now();
    let mut generator = Generator::new(seed);
    let mut report = FuzzReport {
        seed,
        entries: Vec::new(),
        disagreements: Vec::new(),
        witnesses_checked: 0,
        elapsed: None,
    };
    for index in 0..count {
        let phi = generator.bsr_sentence(&config.gen);
        let solver = check_finite_sat(&phi, &config.solver)?;
        let bound = solver.target_bound.expect("solver reports its bound");
        let oracle = oracle_sat_sl(&phi, bound + config.oracle_extra, config.oracle_steps)?;
        let formula = phi.to_string();
        for r in [&solver, &oracle] {
            if let Some(Witness::Sl { structure, .. }) = &r.witness {
                report.witnesses_checked += 1;
                if !eval_sl(structure, &phi, &Env::new())? {
                    report.disagreements.push(Disagreement {
                        index,
                        formula: formula.clone(),
                        reason: format!("witness of size {} is not a model", structure.universe_size()),
                    });
                }
            }
        }
        if let Some(reason) = conflict(&solver, &oracle) {
            report.disagreements.push(Disagreement {
                index,
                formula: formula.clone(),
                reason,
            });
        }
        report.entries.push(FuzzEntry {
            index,
            formula,
            solver: solver.status,
            solver_bound: solver.bound_used,
            oracle: oracle.status,
            oracle_bound: oracle.bound_used,
        });
    }
    if config.timing {
        report.elapsed = Some(start.elapsed());
    }
    Ok(report)
}

/// Smallest model size found, or `None` with the fully explored size.
fn smallest(r: &SatResult) -> (Option<usize>, usize) {
    match r.status {
        Status::Sat => (Some(r.bound_used), r.bound_used - 1),
        _ => (None, r.bound_used),
    }
}

fn conflict(solver: &SatResult, oracle: &SatResult) -> Option<String> {
    if solver.status == Status::Unsat && oracle.status == Status::Sat {
        return Some(format!(
            "solver UNSAT but oracle found a model of size {}",
            oracle.bound_used
        ));
    }
    let (s_model, s_explored) = smallest(solver);
    let (o_model, o_explored) = smallest(oracle);
    match (s_model, o_model) {
        (Some(a), Some(b)) if a != b => Some(format!("smallest models differ: solver {a}, oracle {b}")),
        (Some(a), None) if o_explored >= a => Some(format!(
            "solver found a model of size {a}, oracle found none up to {o_explored}"
        )),
        (None, Some(b)) if s_explored >= b => Some(format!(
            "oracle found a model of size {b}, solver found none up to {s_explored}"
        )),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_repeatable() {
        let cfg = FuzzConfig::default();
        let a = fuzz_compare(1, 10, &cfg).unwrap();
        assert!(a.is_clean(), "{}", a.render(true));
        let b = fuzz_compare(1, 10, &cfg).unwrap();
        assert_eq!(a.render(true), b.render(true));
    }

    #[test]
    fn zero_constants() {
        let mut cfg = FuzzConfig::default();
        cfg.gen.max_const = 0;
        let r = fuzz_compare(5, 10, &cfg).unwrap();
        assert!(r.is_clean(), "{}", r.render(true));
    }
}
