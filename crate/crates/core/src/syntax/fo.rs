use std::collections::BTreeSet;
use std::fmt;

use super::prefix::{PrenexView, Quantifier};
use super::{PredSym, Var};

/// Name of the single unary function symbol.
pub const FUNCTION_SYMBOL: &str = "f";

/// A term over one unary function symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    App(Box<Term>),
}

impl Term {
    pub fn var(v: impl Into<Var>) -> Self {
        Term::Var(v.into())
    }

    pub fn app(t: Term) -> Self {
        Term::App(Box::new(t))
    }

    /// Number of nested applications.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(t) => 1 + t.depth(),
        }
    }

    pub fn root_var(&self) -> &Var {
        match self {
            Term::Var(v) => v,
            Term::App(t) => t.root_var(),
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(_) => None,
        }
    }

    fn size(&self) -> usize {
        1 + self.depth()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(t) => write!(f, "{FUNCTION_SYMBOL}({t})"),
        }
    }
}

/// A first-order formula with equality, one unary function symbol and
/// unary predicate symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FoFormula {
    False,
    True,
    Eq(Term, Term),
    Pred(PredSym, Term),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Imp(Box<FoFormula>, Box<FoFormula>),
    Iff(Box<FoFormula>, Box<FoFormula>),
    Exists(Var, Box<FoFormula>),
    Forall(Var, Box<FoFormula>),
}

use FoFormula::*;

impl FoFormula {
    pub fn eq(a: Term, b: Term) -> Self {
        Eq(a, b)
    }

    pub fn eq_vars(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        Eq(Term::var(a), Term::var(b))
    }

    pub fn pred(p: PredSym, t: Term) -> Self {
        Pred(p, t)
    }

    /// `d(x)`, the heap-domain predicate applied to a variable.
    pub fn dom(x: impl Into<Var>) -> Self {
        Pred(PredSym::domain(), Term::var(x))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FoFormula) -> Self {
        Not(Box::new(f))
    }

    pub fn and(a: FoFormula, b: FoFormula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FoFormula, b: FoFormula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: FoFormula, b: FoFormula) -> Self {
        Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: FoFormula, b: FoFormula) -> Self {
        Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(x: impl Into<Var>, body: FoFormula) -> Self {
        Exists(x.into(), Box::new(body))
    }

    pub fn forall(x: impl Into<Var>, body: FoFormula) -> Self {
        Forall(x.into(), Box::new(body))
    }

    pub fn quantify(prefix: &[(Quantifier, Var)], body: FoFormula) -> Self {
        prefix.iter().rev().fold(body, |acc, (q, v)| match q {
            Quantifier::Exists => Self::exists(v.clone(), acc),
            Quantifier::Forall => Self::forall(v.clone(), acc),
        })
    }

    pub fn and_all(items: impl IntoIterator<Item = FoFormula>) -> Self {
        let mut iter = items.into_iter();
        match iter.next() {
            None => True,
            Some(first) => iter.fold(first, Self::and),
        }
    }

    pub fn or_all(items: impl IntoIterator<Item = FoFormula>) -> Self {
        let mut iter = items.into_iter();
        match iter.next() {
            None => False,
            Some(first) => iter.fold(first, Self::or),
        }
    }

    pub fn distinct(vars: &[Var]) -> Self {
        let mut parts = Vec::new();
        for i in 0..vars.len() {
            for j in 0..i {
                parts.push(Self::not(Self::eq_vars(vars[i].clone(), vars[j].clone())));
            }
        }
        Self::and_all(parts)
    }

    pub fn children(&self) -> Vec<&FoFormula> {
        match self {
            Not(a) | Exists(_, a) | Forall(_, a) => vec![a],
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    pub fn subformulas(&self) -> Vec<&FoFormula> {
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

    pub fn size(&self) -> usize {
        match self {
            False | True => 1,
            Eq(a, b) => 1 + a.size() + b.size(),
            Pred(_, t) => 1 + t.size(),
            Not(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => 1 + a.size() + b.size(),
            Exists(_, a) | Forall(_, a) => 2 + a.size(),
        }
    }

    /// Predicate symbols in order of name.
    pub fn predicates(&self) -> BTreeSet<PredSym> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Pred(p, _) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn uses_function(&self) -> bool {
        self.subformulas().iter().any(|f| match f {
            Eq(a, b) => a.depth() > 0 || b.depth() > 0,
            Pred(_, t) => t.depth() > 0,
            _ => false,
        })
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut note = |t: &Term, bound: &Vec<Var>| {
            let v = t.root_var();
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Eq(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Pred(_, t) => note(t, bound),
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

    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for f in self.subformulas() {
            match f {
                Eq(a, b) => {
                    out.insert(a.root_var().clone());
                    out.insert(b.root_var().clone());
                }
                Pred(_, t) => {
                    out.insert(t.root_var().clone());
                }
                Exists(v, _) | Forall(v, _) => {
                    out.insert(v.clone());
                }
                _ => {}
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn precedence(&self) -> u8 {
        match self {
            Exists(..) | Forall(..) => 0,
            Iff(..) => 1,
            Imp(..) => 2,
            Or(..) => 3,
            And(..) => 4,
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
        let bin = |f: &mut fmt::Formatter<'_>, a: &FoFormula, op: &str, b: &FoFormula, right: bool| {
            let (l, r) = if right { (prec + 1, prec) } else { (prec, prec + 1) };
            a.fmt_prec(f, l.max(1))?;
            f.write_str(op)?;
            b.fmt_prec(f, r.max(1))
        };
        match self {
            False => f.write_str("false"),
            True => f.write_str("true"),
            Eq(a, b) => write!(f, "{a} = {b}"),
            Pred(p, t) => write!(f, "{p}({t})"),
            Not(a) => {
                f.write_str("~")?;
                a.fmt_prec(f, 7)
            }
            And(a, b) => bin(f, a, " & ", b, false),
            Or(a, b) => bin(f, a, " | ", b, false),
            Imp(a, b) => bin(f, a, " -> ", b, true),
            Iff(a, b) => bin(f, a, " <-> ", b, false),
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

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl PrenexView for FoFormula {
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
    fn printing_terms_and_formulas() {
        let t = Term::app(Term::app(Term::var("x")));
        assert_eq!(t.to_string(), "f(f(x))");
        let phi = FoFormula::forall(
            "y",
            FoFormula::imp(
                FoFormula::eq(Term::app(Term::var("y")), Term::var("y")),
                FoFormula::dom("y"),
            ),
        );
        assert_eq!(phi.to_string(), "forall y. f(y) = y -> d(y)");
    }

    #[test]
    fn free_vars_through_terms() {
        let phi = FoFormula::exists("x", FoFormula::eq(Term::app(Term::var("x")), Term::var("z")));
        assert_eq!(phi.free_vars(), [Var::new("z")].into_iter().collect());
    }
}
