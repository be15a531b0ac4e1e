//! A faster SL evaluator over dense structures `{0, ..., u-1}`.
//!
//! Formulae are compiled to a node array with variables resolved to slots.
//! The heap is a vector of cells plus a bit mask selecting the cells that
//! belong to the heap currently under evaluation, so heap splits and
//! extensions are mask operations.
//!
//! Besides exact evaluation, [`Machine::eval_partial`] evaluates over a heap
//! whose first `k` cells are fixed and whose remaining cells are still
//! open, returning a three-valued answer that is sound for every completion.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::structure::{Heap, Loc, SlStructure};
use crate::syntax::{SlFormula, Var};

/// Bit set of locations.
pub type Mask = u128;

/// Largest universe the compiled evaluator supports.
pub const MAX_UNIVERSE: usize = Mask::BITS as usize;

/// Marker for an unallocated cell.
pub const NONE: u32 = u32::MAX;

type Id = usize;
type Slot = usize;

#[derive(Clone, Debug)]
enum Node {
    False,
    True,
    Emp,
    Eq(Slot, Slot),
    PointsTo(Slot, Slot),
    Hooks(Slot, Slot),
    Alloc(Slot),
    HeapGe(u32),
    UnivGe(u32),
    HeapGeUnivMinus(u32),
    Not(Id),
    And(Id, Id),
    Or(Id, Id),
    Imp(Id, Id),
    Iff(Id, Id),
    Star(Id, Id),
    Wand(Id, Id),
    Exists(Slot, Id),
    Forall(Slot, Id),
}

/// A compiled formula.
#[derive(Clone, Debug)]
pub struct Program {
    nodes: Vec<Node>,
    root: Id,
    slots: usize,
    inputs: Vec<Var>,
}

impl Program {
    /// Compiles `phi`; its free variables must all occur in `inputs`, which
    /// fix slots `0..inputs.len()`.
    pub fn compile(phi: &SlFormula, inputs: &[Var]) -> Result<Program> {
        let mut c = Compiler {
            nodes: Vec::new(),
            scope: inputs.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect(),
            slots: inputs.len(),
        };
        let root = c.compile(phi)?;
        Ok(Program {
            nodes: c.nodes,
            root,
            slots: c.slots,
            inputs: inputs.to_vec(),
        })
    }

    pub fn inputs(&self) -> &[Var] {
        &self.inputs
    }

    pub fn slot_count(&self) -> usize {
        self.slots
    }
}

struct Compiler {
    nodes: Vec<Node>,
    scope: BTreeMap<Var, Slot>,
    slots: usize,
}

impl Compiler {
    fn slot(&self, v: &Var) -> Result<Slot> {
        self.scope
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnboundVariable(v.clone()))
    }

    fn push(&mut self, n: Node) -> Id {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn compile(&mut self, phi: &SlFormula) -> Result<Id> {
        use SlFormula as F;
        let node = match phi {
            F::False => Node::False,
            F::True => Node::True,
            F::Emp => Node::Emp,
            F::Eq(x, y) => Node::Eq(self.slot(x)?, self.slot(y)?),
            F::PointsTo(x, y) => Node::PointsTo(self.slot(x)?, self.slot(y)?),
            F::Hooks(x, y) => Node::Hooks(self.slot(x)?, self.slot(y)?),
            F::Alloc(x) => Node::Alloc(self.slot(x)?),
            F::HeapGe(n) => Node::HeapGe(*n),
            F::UnivGe(n) => Node::UnivGe(*n),
            F::HeapGeUnivMinus(n) => Node::HeapGeUnivMinus(*n),
            F::Not(a) => Node::Not(self.compile(a)?),
            F::And(a, b) => Node::And(self.compile(a)?, self.compile(b)?),
            F::Or(a, b) => Node::Or(self.compile(a)?, self.compile(b)?),
            F::Imp(a, b) => Node::Imp(self.compile(a)?, self.compile(b)?),
            F::Iff(a, b) => Node::Iff(self.compile(a)?, self.compile(b)?),
            F::Star(a, b) => Node::Star(self.compile(a)?, self.compile(b)?),
            F::Wand(a, b) => Node::Wand(self.compile(a)?, self.compile(b)?),
            F::Exists(v, a) | F::Forall(v, a) => {
                let slot = self.slots;
                self.slots += 1;
                let saved = self.scope.insert(v.clone(), slot);
                let body = self.compile(a);
                match saved {
                    Some(s) => self.scope.insert(v.clone(), s),
                    None => self.scope.remove(v),
                };
                let body = body?;
                if matches!(phi, F::Exists(..)) {
                    Node::Exists(slot, body)
                } else {
                    Node::Forall(slot, body)
                }
            }
        };
        Ok(self.push(node))
    }
}

/// Three-valued truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    False,
    Unknown,
    True,
}

impl Tri {
    fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    fn not(self) -> Tri {
        match self {
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
            Tri::True => Tri::False,
        }
    }
}

/// Signals that the step limit was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutOfSteps;

/// Evaluation state for one program over a universe `{0, ..., u-1}`.
#[derive(Clone, Debug)]
pub struct Machine<'p> {
    prog: &'p Program,
    u: usize,
    /// Cell targets; [`NONE`] when unallocated.
    pub cells: Vec<u32>,
    /// Slot values.
    pub env: Vec<u32>,
    pub steps: u64,
    pub limit: u64,
}

fn bit(l: usize) -> Mask {
    1 << l
}

impl<'p> Machine<'p> {
    pub fn new(prog: &'p Program, universe_size: usize) -> Self {
        assert!(
            (1..=MAX_UNIVERSE).contains(&universe_size),
            "universe size {universe_size} outside 1..={MAX_UNIVERSE}"
        );
        Machine {
            prog,
            u: universe_size,
            cells: vec![NONE; universe_size],
            env: vec![0; prog.slots],
            steps: 0,
            limit: u64::MAX,
        }
    }

    pub fn universe_size(&self) -> usize {
        self.u
    }

    /// Loads a dense structure; inputs missing from the store stay 0.
    pub fn load(&mut self, s: &SlStructure) -> Mask {
        debug_assert!(s.is_contiguous() && s.universe_size() == self.u);
        self.cells.fill(NONE);
        let mut mask = 0;
        for (a, b) in s.heap.iter() {
            self.cells[a] = b as u32;
            mask |= bit(a);
        }
        for (i, v) in self.prog.inputs.iter().enumerate() {
            if let Some(&l) = s.store.get(v) {
                self.env[i] = l as u32;
            }
        }
        mask
    }

    /// The heap formed by the cells in `mask`.
    pub fn heap(&self, mask: Mask) -> Heap {
        (0..self.u)
            .filter(|&l| mask & bit(l) != 0)
            .map(|l| (l, self.cells[l] as Loc))
            .collect()
    }

    fn tick(&mut self) -> Result<(), OutOfSteps> {
        self.steps += 1;
        if self.steps > self.limit {
            Err(OutOfSteps)
        } else {
            Ok(())
        }
    }

    /// Exact truth of the program over the heap given by `mask`.
    pub fn eval(&mut self, mask: Mask) -> Result<bool, OutOfSteps> {
        self.full(self.prog.root, mask)
    }

    fn full(&mut self, id: Id, mask: Mask) -> Result<bool, OutOfSteps> {
        self.tick()?;
        let u = self.u;
        let size = mask.count_ones() as usize;
        Ok(match self.prog.nodes[id] {
            Node::False => false,
            Node::True => true,
            Node::Emp => mask == 0,
            Node::Eq(x, y) => self.env[x] == self.env[y],
            Node::PointsTo(x, y) => {
                let l = self.env[x] as usize;
                mask == bit(l) && self.cells[l] == self.env[y]
            }
            Node::Hooks(x, y) => {
                let l = self.env[x] as usize;
                mask & bit(l) != 0 && self.cells[l] == self.env[y]
            }
            Node::Alloc(x) => mask & bit(self.env[x] as usize) != 0,
            Node::HeapGe(n) => size >= n as usize,
            Node::UnivGe(n) => u >= n as usize,
            Node::HeapGeUnivMinus(n) => size + n as usize >= u,
            Node::Not(a) => !self.full(a, mask)?,
            Node::And(a, b) => self.full(a, mask)? && self.full(b, mask)?,
            Node::Or(a, b) => self.full(a, mask)? || self.full(b, mask)?,
            Node::Imp(a, b) => !self.full(a, mask)? || self.full(b, mask)?,
            Node::Iff(a, b) => self.full(a, mask)? == self.full(b, mask)?,
            Node::Star(a, b) => self.star(a, b, mask)?,
            Node::Wand(a, b) => self.wand(a, b, mask)?,
            Node::Exists(s, a) | Node::Forall(s, a) => {
                let exists = matches!(self.prog.nodes[id], Node::Exists(..));
                let saved = self.env[s];
                let mut result = !exists;
                for l in 0..u {
                    self.env[s] = l as u32;
                    let r = self.full(a, mask);
                    match r {
                        Ok(b) if b == exists => {
                            result = exists;
                            break;
                        }
                        Ok(_) => {}
                        Err(e) => {
                            self.env[s] = saved;
                            return Err(e);
                        }
                    }
                }
                self.env[s] = saved;
                result
            }
        })
    }

    fn star(&mut self, a: Id, b: Id, mask: Mask) -> Result<bool, OutOfSteps> {
        match (&self.prog.nodes[a], &self.prog.nodes[b]) {
            (Node::False, _) | (_, Node::False) => return Ok(false),
            (Node::Emp, _) => return self.full(b, mask),
            (_, Node::Emp) => return self.full(a, mask),
            (&Node::PointsTo(x, y), _) => {
                let l = self.env[x] as usize;
                if mask & bit(l) == 0 || self.cells[l] != self.env[y] {
                    return Ok(false);
                }
                return self.full(b, mask & !bit(l));
            }
            (_, &Node::PointsTo(x, y)) => {
                let l = self.env[x] as usize;
                if mask & bit(l) == 0 || self.cells[l] != self.env[y] {
                    return Ok(false);
                }
                return self.full(a, mask & !bit(l));
            }
            _ => {}
        }
        let mut sub = mask;
        loop {
            self.tick()?;
            if self.full(a, sub)? && self.full(b, mask ^ sub)? {
                return Ok(true);
            }
            if sub == 0 {
                return Ok(false);
            }
            sub = (sub - 1) & mask;
        }
    }

    fn wand(&mut self, a: Id, b: Id, mask: Mask) -> Result<bool, OutOfSteps> {
        match self.prog.nodes[a] {
            Node::False => return Ok(true),
            Node::Emp => return self.full(b, mask),
            Node::PointsTo(x, y) => {
                let l = self.env[x] as usize;
                if mask & bit(l) != 0 {
                    return Ok(true);
                }
                let saved = self.cells[l];
                self.cells[l] = self.env[y];
                let r = self.full(b, mask | bit(l));
                self.cells[l] = saved;
                return r;
            }
            _ => {}
        }
        let free: Vec<usize> = (0..self.u).filter(|&l| mask & bit(l) == 0).collect();
        let saved: Vec<u32> = free.iter().map(|&l| self.cells[l]).collect();
        for &l in &free {
            self.cells[l] = NONE;
        }
        let result = self.wand_loop(a, b, mask, &free);
        for (&l, &c) in free.iter().zip(&saved) {
            self.cells[l] = c;
        }
        result
    }

    fn wand_loop(&mut self, a: Id, b: Id, mask: Mask, free: &[usize]) -> Result<bool, OutOfSteps> {
        let last = self.u as u32 - 1;
        let mut ext: Mask = 0;
        loop {
            self.tick()?;
            if self.full(a, ext)? && !self.full(b, mask | ext)? {
                return Ok(false);
            }
            // advance the odometer over the free cells: NONE, 0, 1, ..., u-1
            let mut i = free.len();
            loop {
                if i == 0 {
                    return Ok(true);
                }
                i -= 1;
                let l = free[i];
                match self.cells[l] {
                    NONE => {
                        self.cells[l] = 0;
                        ext |= bit(l);
                        break;
                    }
                    c if c < last => {
                        self.cells[l] = c + 1;
                        break;
                    }
                    _ => {
                        self.cells[l] = NONE;
                        ext &= !bit(l);
                    }
                }
            }
        }
    }

    /// Three-valued truth when cells `0..assigned` are fixed (with
    /// allocated ones listed in `mask`) and the other cells are open.
    pub fn eval_partial(&mut self, assigned: usize, mask: Mask) -> Result<Tri, OutOfSteps> {
        if assigned >= self.u {
            return self.eval(mask).map(Tri::from_bool);
        }
        self.partial(self.prog.root, assigned, mask)
    }

    fn partial(&mut self, id: Id, k: usize, mask: Mask) -> Result<Tri, OutOfSteps> {
        self.tick()?;
        let u = self.u;
        let size = mask.count_ones() as usize;
        let open = u - k;
        let known = |l: usize| l < k;
        Ok(match self.prog.nodes[id] {
            Node::False => Tri::False,
            Node::True => Tri::True,
            Node::Emp => {
                if mask != 0 {
                    Tri::False
                } else {
                    Tri::Unknown
                }
            }
            Node::Eq(x, y) => Tri::from_bool(self.env[x] == self.env[y]),
            Node::PointsTo(x, y) => {
                let l = self.env[x] as usize;
                if mask & !bit(l) != 0 || (known(l) && self.cells[l] != self.env[y]) {
                    Tri::False
                } else {
                    Tri::Unknown
                }
            }
            Node::Hooks(x, y) => {
                let l = self.env[x] as usize;
                if known(l) {
                    Tri::from_bool(self.cells[l] == self.env[y])
                } else {
                    Tri::Unknown
                }
            }
            Node::Alloc(x) => {
                let l = self.env[x] as usize;
                if known(l) {
                    Tri::from_bool(mask & bit(l) != 0)
                } else {
                    Tri::Unknown
                }
            }
            Node::HeapGe(n) => range(size, size + open, n as usize),
            Node::UnivGe(n) => Tri::from_bool(u >= n as usize),
            Node::HeapGeUnivMinus(n) => {
                let need = u.saturating_sub(n as usize);
                range(size, size + open, need)
            }
            Node::Not(a) => self.partial(a, k, mask)?.not(),
            Node::And(a, b) => match self.partial(a, k, mask)? {
                Tri::False => Tri::False,
                ta => match (ta, self.partial(b, k, mask)?) {
                    (_, Tri::False) => Tri::False,
                    (Tri::True, Tri::True) => Tri::True,
                    _ => Tri::Unknown,
                },
            },
            Node::Or(a, b) => match self.partial(a, k, mask)? {
                Tri::True => Tri::True,
                ta => match (ta, self.partial(b, k, mask)?) {
                    (_, Tri::True) => Tri::True,
                    (Tri::False, Tri::False) => Tri::False,
                    _ => Tri::Unknown,
                },
            },
            Node::Imp(a, b) => match self.partial(a, k, mask)? {
                Tri::False => Tri::True,
                ta => match (ta, self.partial(b, k, mask)?) {
                    (_, Tri::True) => Tri::True,
                    (Tri::True, Tri::False) => Tri::False,
                    _ => Tri::Unknown,
                },
            },
            Node::Iff(a, b) => {
                let ta = self.partial(a, k, mask)?;
                if ta == Tri::Unknown {
                    Tri::Unknown
                } else {
                    match self.partial(b, k, mask)? {
                        Tri::Unknown => Tri::Unknown,
                        tb => Tri::from_bool(ta == tb),
                    }
                }
            }
            Node::Star(..) | Node::Wand(..) => Tri::Unknown,
            Node::Exists(s, a) | Node::Forall(s, a) => {
                let exists = matches!(self.prog.nodes[id], Node::Exists(..));
                let (stop, other) = if exists {
                    (Tri::True, Tri::False)
                } else {
                    (Tri::False, Tri::True)
                };
                let saved = self.env[s];
                let mut result = other;
                for l in 0..u {
                    self.env[s] = l as u32;
                    match self.partial(a, k, mask) {
                        Ok(t) if t == stop => {
                            result = stop;
                            break;
                        }
                        Ok(Tri::Unknown) => result = Tri::Unknown,
                        Ok(_) => {}
                        Err(e) => {
                            self.env[s] = saved;
                            return Err(e);
                        }
                    }
                }
                self.env[s] = saved;
                result
            }
        })
    }
}

/// Truth of `value >= need` when `value` lies in `[lo, hi]`.
fn range(lo: usize, hi: usize, need: usize) -> Tri {
    if lo >= need {
        Tri::True
    } else if hi < need {
        Tri::False
    } else {
        Tri::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_sl, Env};
    use crate::structure::enumerate_structures;
    use crate::syntax::parse_sl;

    fn agree(src: &str, vars: &[&str], max_u: usize) {
        let phi = parse_sl(src).unwrap();
        let vars: Vec<Var> = vars.iter().map(Var::new).collect();
        let prog = Program::compile(&phi, &vars).unwrap();
        for u in 1..=max_u {
            let mut m = Machine::new(&prog, u);
            for s in enumerate_structures(u, &vars) {
                let mask = m.load(&s);
                let fast = m.eval(mask).unwrap();
                let slow = eval_sl(&s, &phi, &Env::new()).unwrap();
                assert_eq!(fast, slow, "{src} on\n{s}");
            }
        }
    }

    #[test]
    fn agrees_with_reference() {
        agree("x |-> y * true", &["x", "y"], 3);
        agree("x |-> x -* false", &["x"], 3);
        agree("~(true -* ~|h| >= 2)", &[], 3);
        agree("(x ~> y -* emp) | (|h| >= 1 * ~emp)", &["x", "y"], 3);
        agree("exists z. (z |-> x -* alloc(z) & |h| >= |U| - 1)", &["x"], 3);
        agree("forall z. z = x | ~alloc(z) * x |-> z", &["x"], 3);
        agree("(emp -* x ~> x) * (alloc(x) -* true)", &["x"], 3);
    }

    #[test]
    fn shadowing_uses_inner_binder() {
        agree("exists x. x ~> x & forall x. alloc(x)", &["x"], 3);
    }

    #[test]
    fn partial_is_sound_for_all_completions() {
        let srcs = [
            "x |-> y & ~emp",
            "|h| >= 2 | ~alloc(x)",
            "x ~> y <-> |h| >= |U| - 1",
            "forall z. alloc(z) -> ~z ~> x",
            "emp * x |-> y",
        ];
        let vars = [Var::new("x"), Var::new("y")];
        for src in srcs {
            let prog = Program::compile(&parse_sl(src).unwrap(), &vars).unwrap();
            for u in 1..=3 {
                let mut m = Machine::new(&prog, u);
                for s in enumerate_structures(u, &vars) {
                    let full_mask = m.load(&s);
                    let truth = m.eval(full_mask).unwrap();
                    for k in 0..=u {
                        let mask = full_mask & ((1u128 << k) - 1);
                        match m.eval_partial(k, mask).unwrap() {
                            Tri::Unknown => {}
                            t => assert_eq!(t == Tri::True, truth, "{src} k={k}\n{s}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn step_limit() {
        let prog = Program::compile(&parse_sl("true -* true -* true").unwrap(), &[]).unwrap();
        let mut m = Machine::new(&prog, 3);
        m.limit = 50;
        assert_eq!(m.eval(0), Err(OutOfSteps));
    }

    #[test]
    fn unbound_variable_rejected() {
        assert!(Program::compile(&parse_sl("alloc(q)").unwrap(), &[]).is_err());
    }
}
