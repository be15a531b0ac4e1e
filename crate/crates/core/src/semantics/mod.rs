//! Exhaustive model checking of SL and FO formulae on finite structures.
//!
//! [`eval_sl`] and [`eval_fo`] are direct transcriptions of the
//! satisfaction relation with no shortcuts beyond short-circuiting of
//! connectives. The solver uses the faster evaluator in [`compiled`].

pub mod compiled;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::structure::{FoStructure, Heap, Loc, SlStructure};
use crate::syntax::{FoFormula, SlFormula, Term, Var};

/// Variable assignment layered over a structure's store.
pub type Env = BTreeMap<Var, Loc>;

/// Why an evaluation stopped without an answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interrupt {
    Error(Error),
    OutOfBudget,
}

impl From<Error> for Interrupt {
    fn from(e: Error) -> Self {
        Interrupt::Error(e)
    }
}

/// A step counter shared by a sequence of evaluations.
#[derive(Clone, Debug)]
pub struct Budget {
    pub used: u64,
    pub limit: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { used: 0, limit }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn tick(&mut self) -> Result<(), Interrupt> {
        self.used += 1;
        if self.used > self.limit {
            Err(Interrupt::OutOfBudget)
        } else {
            Ok(())
        }
    }

    pub fn exhausted(&self) -> bool {
        self.used > self.limit
    }
}

/// Truth of `phi` in `s` under `env`, which shadows the store.
pub fn eval_sl(s: &SlStructure, phi: &SlFormula, env: &Env) -> Result<bool> {
    match eval_sl_budgeted(s, phi, env, &mut Budget::unlimited()) {
        Ok(b) => Ok(b),
        Err(Interrupt::Error(e)) => Err(e),
        Err(Interrupt::OutOfBudget) => unreachable!("unlimited budget"),
    }
}

/// As [`eval_sl`], charging one step per visited subformula, heap split and
/// heap extension.
pub fn eval_sl_budgeted(
    s: &SlStructure,
    phi: &SlFormula,
    env: &Env,
    budget: &mut Budget,
) -> Result<bool, Interrupt> {
    let mut ev = SlEval {
        universe: s.universe.iter().copied().collect(),
        store: &s.store,
        env: env.clone(),
        budget,
    };
    ev.eval(phi, &s.heap)
}

struct SlEval<'a> {
    universe: Vec<Loc>,
    store: &'a BTreeMap<Var, Loc>,
    env: Env,
    budget: &'a mut Budget,
}

impl SlEval<'_> {
    fn val(&self, v: &Var) -> Result<Loc> {
        self.env
            .get(v)
            .or_else(|| self.store.get(v))
            .copied()
            .ok_or_else(|| Error::UnboundVariable(v.clone()))
    }

    fn eval(&mut self, phi: &SlFormula, h: &Heap) -> Result<bool, Interrupt> {
        use SlFormula::*;
        self.budget.tick()?;
        let u = self.universe.len();
        Ok(match phi {
            False => false,
            True => true,
            Emp => h.is_empty(),
            Eq(x, y) => self.val(x)? == self.val(y)?,
            PointsTo(x, y) => {
                let (a, b) = (self.val(x)?, self.val(y)?);
                h.len() == 1 && h.get(a) == Some(b)
            }
            Hooks(x, y) => {
                let (a, b) = (self.val(x)?, self.val(y)?);
                h.get(a) == Some(b)
            }
            Alloc(x) => h.contains(self.val(x)?),
            HeapGe(n) => h.len() >= *n as usize,
            UnivGe(n) => u >= *n as usize,
            HeapGeUnivMinus(n) => h.len() + *n as usize >= u,
            Not(a) => !self.eval(a, h)?,
            And(a, b) => self.eval(a, h)? && self.eval(b, h)?,
            Or(a, b) => self.eval(a, h)? || self.eval(b, h)?,
            Imp(a, b) => !self.eval(a, h)? || self.eval(b, h)?,
            Iff(a, b) => self.eval(a, h)? == self.eval(b, h)?,
            Star(a, b) => self.star(a, b, h)?,
            Wand(a, b) => self.wand(a, b, h)?,
            Exists(v, a) => self.quantify(v, a, h, true)?,
            Forall(v, a) => self.quantify(v, a, h, false)?,
        })
    }

    fn quantify(&mut self, v: &Var, body: &SlFormula, h: &Heap, exists: bool) -> Result<bool, Interrupt> {
        let saved = self.env.get(v).copied();
        let mut result = !exists;
        for i in 0..self.universe.len() {
            self.env.insert(v.clone(), self.universe[i]);
            let r = self.eval(body, h);
            match r {
                Ok(b) if b == exists => {
                    result = exists;
                    break;
                }
                Ok(_) => {}
                Err(e) => {
                    restore(&mut self.env, v, saved);
                    return Err(e);
                }
            }
        }
        restore(&mut self.env, v, saved);
        Ok(result)
    }

    /// Some split `h = h1 ⊎ h2` with `h1 ⊨ a` and `h2 ⊨ b`.
    fn star(&mut self, a: &SlFormula, b: &SlFormula, h: &Heap) -> Result<bool, Interrupt> {
        let cells: Vec<(Loc, Loc)> = h.iter().collect();
        let k = cells.len();
        assert!(k < 64, "heap too large for split enumeration");
        for mask in 0..(1u64 << k) {
            self.budget.tick()?;
            let (mut h1, mut h2) = (Heap::new(), Heap::new());
            for (i, &(l, t)) in cells.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    h1.insert(l, t);
                } else {
                    h2.insert(l, t);
                }
            }
            if self.eval(a, &h1)? && self.eval(b, &h2)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Every heap `h'` over the universe, disjoint from `h`, with `h' ⊨ a`
    /// gives `h ⊎ h' ⊨ b`.
    fn wand(&mut self, a: &SlFormula, b: &SlFormula, h: &Heap) -> Result<bool, Interrupt> {
        let free: Vec<Loc> = self
            .universe
            .iter()
            .copied()
            .filter(|l| !h.contains(*l))
            .collect();
        let u = self.universe.len();
        // digit 0 leaves the location unallocated, digit i+1 points to universe[i]
        let mut digits = vec![0usize; free.len()];
        let mut visited: u64 = 0;
        loop {
            self.budget.tick()?;
            visited += 1;
            let ext: Heap = free
                .iter()
                .zip(&digits)
                .filter(|(_, &d)| d > 0)
                .map(|(&l, &d)| (l, self.universe[d - 1]))
                .collect();
            if self.eval(a, &ext)? {
                let joined = h.union(&ext).expect("disjoint by construction");
                if !self.eval(b, &joined)? {
                    return Ok(false);
                }
            }
            let mut i = digits.len();
            loop {
                if i == 0 {
                    debug_assert_eq!(
                        Some(visited),
                        (u as u64 + 1).checked_pow(free.len() as u32),
                        "wand must visit every disjoint extension"
                    );
                    return Ok(true);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] <= u {
                    break;
                }
                digits[i] = 0;
            }
        }
    }
}

fn restore(env: &mut Env, v: &Var, saved: Option<Loc>) {
    match saved {
        Some(l) => {
            env.insert(v.clone(), l);
        }
        None => {
            env.remove(v);
        }
    }
}

/// Truth of `phi` in `m` under `env`, which shadows the store.
pub fn eval_fo(m: &FoStructure, phi: &FoFormula, env: &Env) -> Result<bool> {
    match eval_fo_budgeted(m, phi, env, &mut Budget::unlimited()) {
        Ok(b) => Ok(b),
        Err(Interrupt::Error(e)) => Err(e),
        Err(Interrupt::OutOfBudget) => unreachable!("unlimited budget"),
    }
}

pub fn eval_fo_budgeted(
    m: &FoStructure,
    phi: &FoFormula,
    env: &Env,
    budget: &mut Budget,
) -> Result<bool, Interrupt> {
    let mut ev = FoEval {
        m,
        universe: m.universe.iter().copied().collect(),
        env: env.clone(),
        budget,
    };
    ev.eval(phi)
}

struct FoEval<'a> {
    m: &'a FoStructure,
    universe: Vec<Loc>,
    env: Env,
    budget: &'a mut Budget,
}

impl FoEval<'_> {
    fn term(&self, t: &Term) -> Result<Loc> {
        match t {
            Term::Var(v) => self
                .env
                .get(v)
                .or_else(|| self.m.store.get(v))
                .copied()
                .ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::App(inner) => {
                let l = self.term(inner)?;
                self.m
                    .func
                    .get(&l)
                    .copied()
                    .ok_or(Error::LocationOutOfRange(l))
            }
        }
    }

    fn eval(&mut self, phi: &FoFormula) -> Result<bool, Interrupt> {
        use FoFormula::*;
        self.budget.tick()?;
        Ok(match phi {
            False => false,
            True => true,
            Eq(a, b) => self.term(a)? == self.term(b)?,
            Pred(p, t) => {
                let set = self
                    .m
                    .preds
                    .get(p)
                    .ok_or_else(|| Error::UnknownPredicate(p.clone()))?;
                set.contains(&self.term(t)?)
            }
            Not(a) => !self.eval(a)?,
            And(a, b) => self.eval(a)? && self.eval(b)?,
            Or(a, b) => self.eval(a)? || self.eval(b)?,
            Imp(a, b) => !self.eval(a)? || self.eval(b)?,
            Iff(a, b) => self.eval(a)? == self.eval(b)?,
            Exists(v, a) | Forall(v, a) => {
                let exists = matches!(phi, Exists(..));
                let saved = self.env.get(v).copied();
                let mut result = !exists;
                for i in 0..self.universe.len() {
                    self.env.insert(v.clone(), self.universe[i]);
                    match self.eval(a) {
                        Ok(b) if b == exists => {
                            result = exists;
                            break;
                        }
                        Ok(_) => {}
                        Err(e) => {
                            restore(&mut self.env, v, saved);
                            return Err(e);
                        }
                    }
                }
                restore(&mut self.env, v, saved);
                result
            }
        })
    }
}

/// Counts the disjoint extensions the wand ranges over: `(u+1)^free`.
pub fn wand_extension_count(s: &SlStructure) -> u128 {
    let free = s.universe.len() - s.heap.len();
    (s.universe.len() as u128 + 1).pow(free as u32)
}
