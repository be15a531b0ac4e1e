use std::collections::BTreeSet;
use std::fmt;

use super::prefix::{PrenexView, Quantifier};
use super::Var;

/// A formula of separation logic with one selector field.
///
/// The test formulae (`x ~> y`, `alloc(x)` and the three cardinality
/// constraints) are first-class nodes rather than abbreviations of the
/// spatial connectives they stand for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SlFormula {
    False,
    True,
    Emp,
    Eq(Var, Var),
    PointsTo(Var, Var),
    Hooks(Var, Var),
    Alloc(Var),
    /// `|h| >= n`
    HeapGe(u32),
    /// `|U| >= n`
    UnivGe(u32),
    /// `|h| >= |U| - n`
    HeapGeUnivMinus(u32),
    Not(Box<SlFormula>),
    And(Box<SlFormula>, Box<SlFormula>),
    Or(Box<SlFormula>, Box<SlFormula>),
    Imp(Box<SlFormula>, Box<SlFormula>),
    Iff(Box<SlFormula>, Box<SlFormula>),
    Star(Box<SlFormula>, Box<SlFormula>),
    Wand(Box<SlFormula>, Box<SlFormula>),
    Exists(Var, Box<SlFormula>),
    Forall(Var, Box<SlFormula>),
}

use SlFormula::*;

impl SlFormula {
    pub fn eq(x: impl Into<Var>, y: impl Into<Var>) -> Self {
        Eq(x.into(), y.into())
    }

    pub fn points_to(x: impl Into<Var>, y: impl Into<Var>) -> Self {
        PointsTo(x.into(), y.into())
    }

    pub fn hooks(x: impl Into<Var>, y: impl Into<Var>) -> Self {
        Hooks(x.into(), y.into())
    }

    pub fn alloc(x: impl Into<Var>) -> Self {
        Alloc(x.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: SlFormula) -> Self {
        Not(Box::new(f))
    }

    pub fn and(a: SlFormula, b: SlFormula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: SlFormula, b: SlFormula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: SlFormula, b: SlFormula) -> Self {
        Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: SlFormula, b: SlFormula) -> Self {
        Iff(Box::new(a), Box::new(b))
    }

    pub fn star(a: SlFormula, b: SlFormula) -> Self {
        Star(Box::new(a), Box::new(b))
    }

    pub fn wand(a: SlFormula, b: SlFormula) -> Self {
        Wand(Box::new(a), Box::new(b))
    }

    /// Septraction: some disjoint extension satisfying `a` makes the
    /// combined heap satisfy `b`. Encoded as `~(a -* ~b)`.
    pub fn septraction(a: SlFormula, b: SlFormula) -> Self {
        Self::not(Self::wand(a, Self::not(b)))
    }

    pub fn exists(x: impl Into<Var>, body: SlFormula) -> Self {
        Exists(x.into(), Box::new(body))
    }

    pub fn forall(x: impl Into<Var>, body: SlFormula) -> Self {
        Forall(x.into(), Box::new(body))
    }

    /// Conjunction of all items; `true` when empty.
    pub fn and_all(items: impl IntoIterator<Item = SlFormula>) -> Self {
        let mut iter = items.into_iter();
        match iter.next() {
            None => True,
            Some(first) => iter.fold(first, Self::and),
        }
    }

    /// Disjunction of all items; `false` when empty.
    pub fn or_all(items: impl IntoIterator<Item = SlFormula>) -> Self {
        let mut iter = items.into_iter();
        match iter.next() {
            None => False,
            Some(first) => iter.fold(first, Self::or),
        }
    }

    /// Wraps `body` in a quantifier block, outermost first.
    pub fn quantify(prefix: &[(Quantifier, Var)], body: SlFormula) -> Self {
        prefix.iter().rev().fold(body, |acc, (q, v)| match q {
            Quantifier::Exists => Self::exists(v.clone(), acc),
            Quantifier::Forall => Self::forall(v.clone(), acc),
        })
    }

    /// Pairwise disequality of the given variables.
    pub fn distinct(vars: &[Var]) -> Self {
        let mut parts = Vec::new();
        for i in 0..vars.len() {
            for j in 0..i {
                parts.push(Self::not(Eq(vars[i].clone(), vars[j].clone())));
            }
        }
        Self::and_all(parts)
    }

    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            False
                | True
                | Emp
                | Eq(..)
                | PointsTo(..)
                | Hooks(..)
                | Alloc(_)
                | HeapGe(_)
                | UnivGe(_)
                | HeapGeUnivMinus(_)
        )
    }

    /// Immediate subformulae, left to right.
    pub fn children(&self) -> Vec<&SlFormula> {
        match self {
            Not(a) | Exists(_, a) | Forall(_, a) => vec![a],
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) | Star(a, b) | Wand(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    /// Pre-order traversal.
    pub fn subformulas(&self) -> Vec<&SlFormula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            let mut kids = f.children();
            kids.reverse();
            stack.extend(kids);
        }
        out
    }

    pub fn has_quantifier(&self) -> bool {
        self.subformulas()
            .iter()
            .any(|f| matches!(f, Exists(..) | Forall(..)))
    }

    pub fn has_spatial(&self) -> bool {
        self.subformulas()
            .iter()
            .any(|f| matches!(f, Star(..) | Wand(..) | Emp | PointsTo(..)))
    }

    /// Number of symbol occurrences. Variables, connectives, quantifiers
    /// and atom symbols count one each; a numeric constant counts one.
    pub fn size(&self) -> usize {
        match self {
            False | True | Emp => 1,
            Eq(..) | PointsTo(..) | Hooks(..) => 3,
            Alloc(_) => 2,
            HeapGe(_) | UnivGe(_) => 3,
            HeapGeUnivMinus(_) => 5,
            Not(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) | Star(a, b) | Wand(a, b) => {
                1 + a.size() + b.size()
            }
            Exists(_, a) | Forall(_, a) => 2 + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut note = |v: &Var, bound: &Vec<Var>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Eq(x, y) | PointsTo(x, y) | Hooks(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            Alloc(x) => note(x, bound),
            Exists(v, a) | Forall(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    /// Every variable occurring in the formula, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for f in self.subformulas() {
            match f {
                Eq(x, y) | PointsTo(x, y) | Hooks(x, y) => {
                    out.insert(x.clone());
                    out.insert(y.clone());
                }
                Alloc(x) | Exists(x, _) | Forall(x, _) => {
                    out.insert(x.clone());
                }
                _ => {}
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Renames free occurrences of variables according to `map`.
    pub fn rename_free(&self, map: &dyn Fn(&Var) -> Option<Var>) -> SlFormula {
        self.rename_inner(map, &mut Vec::new())
    }

    fn rename_inner(&self, map: &dyn Fn(&Var) -> Option<Var>, bound: &mut Vec<Var>) -> SlFormula {
        let r = |v: &Var, bound: &Vec<Var>| {
            if bound.contains(v) {
                v.clone()
            } else {
                map(v).unwrap_or_else(|| v.clone())
            }
        };
        match self {
            Eq(x, y) => Eq(r(x, bound), r(y, bound)),
            PointsTo(x, y) => PointsTo(r(x, bound), r(y, bound)),
            Hooks(x, y) => Hooks(r(x, bound), r(y, bound)),
            Alloc(x) => Alloc(r(x, bound)),
            Exists(v, a) | Forall(v, a) => {
                bound.push(v.clone());
                let body = a.rename_inner(map, bound);
                bound.pop();
                if matches!(self, Exists(..)) {
                    Self::exists(v.clone(), body)
                } else {
                    Self::forall(v.clone(), body)
                }
            }
            other => other.map_children(|c| c.rename_inner(map, bound)),
        }
    }

    /// Rebuilds a connective node with transformed children. Atoms and
    /// quantifiers are returned unchanged apart from their bodies.
    pub fn map_children(&self, mut f: impl FnMut(&SlFormula) -> SlFormula) -> SlFormula {
        match self {
            Not(a) => Self::not(f(a)),
            And(a, b) => Self::and(f(a), f(b)),
            Or(a, b) => Self::or(f(a), f(b)),
            Imp(a, b) => Self::imp(f(a), f(b)),
            Iff(a, b) => Self::iff(f(a), f(b)),
            Star(a, b) => Self::star(f(a), f(b)),
            Wand(a, b) => Self::wand(f(a), f(b)),
            Exists(v, a) => Self::exists(v.clone(), f(a)),
            Forall(v, a) => Self::forall(v.clone(), f(a)),
            atom => atom.clone(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Exists(..) | Forall(..) => 0,
            Iff(..) => 1,
            Imp(..) => 2,
            Or(..) => 3,
            And(..) => 4,
            Star(..) => 5,
            Wand(..) => 6,
            Not(_) => 7,
            _ => 8,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            f.write_str("(")?;
            self.fmt_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            False => f.write_str("false"),
            True => f.write_str("true"),
            Emp => f.write_str("emp"),
            Eq(x, y) => write!(f, "{x} = {y}"),
            PointsTo(x, y) => write!(f, "{x} |-> {y}"),
            Hooks(x, y) => write!(f, "{x} ~> {y}"),
            Alloc(x) => write!(f, "alloc({x})"),
            HeapGe(n) => write!(f, "|h| >= {n}"),
            UnivGe(n) => write!(f, "|U| >= {n}"),
            HeapGeUnivMinus(n) => write!(f, "|h| >= |U| - {n}"),
            Not(a) => {
                f.write_str("~")?;
                a.fmt_prec(f, 7)
            }
            And(a, b) => binary(f, a, " & ", b, prec, Assoc::Left),
            Or(a, b) => binary(f, a, " | ", b, prec, Assoc::Left),
            Imp(a, b) => binary(f, a, " -> ", b, prec, Assoc::Right),
            Iff(a, b) => binary(f, a, " <-> ", b, prec, Assoc::Left),
            Star(a, b) => binary(f, a, " * ", b, prec, Assoc::Left),
            Wand(a, b) => binary(f, a, " -* ", b, prec, Assoc::Right),
            Exists(v, a) => {
                write!(f, "exists {v}. ")?;
                a.fmt_prec(f, 0)
            }
            Forall(v, a) => {
                write!(f, "forall {v}. ")?;
                a.fmt_prec(f, 0)
            }
        }
    }
}

pub(crate) enum Assoc {
    Left,
    Right,
}

fn binary(
    f: &mut fmt::Formatter<'_>,
    a: &SlFormula,
    op: &str,
    b: &SlFormula,
    prec: u8,
    assoc: Assoc,
) -> fmt::Result {
    let (lmin, rmin) = match assoc {
        Assoc::Left => (prec, prec + 1),
        Assoc::Right => (prec + 1, prec),
    };
    // quantifiers extend to the right, so they are bracketed in any operand
    a.fmt_prec(f, lmin.max(1))?;
    f.write_str(op)?;
    b.fmt_prec(f, rmin.max(1))
}

impl fmt::Display for SlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl PrenexView for SlFormula {
    fn as_quantifier(&self) -> Option<(Quantifier, &Var, &Self)> {
        match self {
            Exists(v, a) => Some((Quantifier::Exists, v, a)),
            Forall(v, a) => Some((Quantifier::Forall, v, a)),
            _ => None,
        }
    }

    fn contains_quantifier(&self) -> bool {
        self.has_quantifier()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_follow_symbol_count() {
        assert_eq!(Emp.size(), 1);
        assert_eq!(SlFormula::and(Emp, Emp).size(), 3);
        assert_eq!(SlFormula::exists("x", SlFormula::eq("x", "x")).size(), 5);
        assert_eq!(HeapGeUnivMinus(2).size(), 5);
    }

    #[test]
    fn free_variables() {
        let f = SlFormula::exists("x", SlFormula::hooks("x", "y"));
        assert_eq!(f.free_vars(), [Var::new("y")].into_iter().collect());
        assert_eq!(
            SlFormula::eq("x", "x").free_vars(),
            [Var::new("x")].into_iter().collect()
        );
        let closed = SlFormula::forall("x", SlFormula::exists("y", SlFormula::points_to("x", "y")));
        assert!(closed.free_vars().is_empty());
    }

    #[test]
    fn printing_atoms() {
        assert_eq!(Emp.to_string(), "emp");
        assert_eq!(SlFormula::points_to("x", "y").to_string(), "x |-> y");
        assert_eq!(HeapGeUnivMinus(2).to_string(), "|h| >= |U| - 2");
    }

    #[test]
    fn printing_brackets_operands() {
        let f = SlFormula::star(Emp, SlFormula::exists("x", SlFormula::alloc("x")));
        assert_eq!(f.to_string(), "emp * (exists x. alloc(x))");
        let g = SlFormula::and(SlFormula::or(Emp, True), False);
        assert_eq!(g.to_string(), "(emp | true) & false");
        let w = SlFormula::wand(Emp, SlFormula::wand(True, False));
        assert_eq!(w.to_string(), "emp -* true -* false");
        let w2 = SlFormula::wand(SlFormula::wand(Emp, True), False);
        assert_eq!(w2.to_string(), "(emp -* true) -* false");
    }

    #[test]
    fn distinct_of_few_vars_is_true() {
        assert_eq!(SlFormula::distinct(&[]), True);
        assert_eq!(SlFormula::distinct(&[Var::new("a")]), True);
    }
}
