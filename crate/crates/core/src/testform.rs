//! Test formulae, minterms and the syntactic bounds derived from them.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{SlFormula, Var};

/// A natural number or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NatInf {
    Fin(u32),
    Inf,
}

impl fmt::Display for NatInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatInf::Fin(n) => write!(f, "{n}"),
            NatInf::Inf => f.write_str("inf"),
        }
    }
}

/// A test formula.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TestAtom {
    Eq(Var, Var),
    Hooks(Var, Var),
    Alloc(Var),
    HeapGe(NatInf),
    UnivGe(u32),
    HeapGeUnivMinus(u32),
}

impl TestAtom {
    /// Whether truth depends on the size of the universe.
    pub fn is_domain_dependent(&self) -> bool {
        matches!(self, TestAtom::UnivGe(_) | TestAtom::HeapGeUnivMinus(_))
    }

    /// The atom as a formula; `|h| >= inf` is `false`.
    pub fn to_formula(&self) -> SlFormula {
        match self {
            TestAtom::Eq(x, y) => SlFormula::Eq(x.clone(), y.clone()),
            TestAtom::Hooks(x, y) => SlFormula::Hooks(x.clone(), y.clone()),
            TestAtom::Alloc(x) => SlFormula::Alloc(x.clone()),
            TestAtom::HeapGe(NatInf::Fin(n)) => SlFormula::HeapGe(*n),
            TestAtom::HeapGe(NatInf::Inf) => SlFormula::False,
            TestAtom::UnivGe(n) => SlFormula::UnivGe(*n),
            TestAtom::HeapGeUnivMinus(n) => SlFormula::HeapGeUnivMinus(*n),
        }
    }

    /// The atom underlying a formula node, if it is one.
    pub fn from_formula(phi: &SlFormula) -> Option<TestAtom> {
        Some(match phi {
            SlFormula::Eq(x, y) => TestAtom::Eq(x.clone(), y.clone()),
            SlFormula::Hooks(x, y) => TestAtom::Hooks(x.clone(), y.clone()),
            SlFormula::Alloc(x) => TestAtom::Alloc(x.clone()),
            SlFormula::HeapGe(n) => TestAtom::HeapGe(NatInf::Fin(*n)),
            SlFormula::UnivGe(n) => TestAtom::UnivGe(*n),
            SlFormula::HeapGeUnivMinus(n) => TestAtom::HeapGeUnivMinus(*n),
            _ => return None,
        })
    }
}

/// A test formula or its negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TestLiteral {
    pub atom: TestAtom,
    pub positive: bool,
}

impl TestLiteral {
    pub fn pos(atom: TestAtom) -> Self {
        TestLiteral {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: TestAtom) -> Self {
        TestLiteral {
            atom,
            positive: false,
        }
    }

    pub fn to_formula(&self) -> SlFormula {
        let f = self.atom.to_formula();
        if self.positive {
            f
        } else {
            SlFormula::not(f)
        }
    }

    /// A lower bound `|h| >= hmin` with `hmin` finite or `|U| - n`.
    fn is_heap_lower(&self) -> bool {
        self.positive
            && matches!(
                self.atom,
                TestAtom::HeapGe(NatInf::Fin(_)) | TestAtom::HeapGeUnivMinus(_)
            )
    }

    /// An upper bound `|h| < hmax`.
    fn is_heap_upper(&self) -> bool {
        !self.positive && matches!(self.atom, TestAtom::HeapGe(_) | TestAtom::HeapGeUnivMinus(_))
    }
}

/// Whether a set of literals has the shape of a minterm: exactly one heap
/// lower bound, exactly one heap upper bound, exactly one `|U| >= n` and
/// at most one `|U| < n`.
pub fn is_minterm(literals: &[TestLiteral]) -> bool {
    let set: BTreeSet<&TestLiteral> = literals.iter().collect();
    let count = |p: &dyn Fn(&TestLiteral) -> bool| set.iter().filter(|l| p(l)).count();
    count(&TestLiteral::is_heap_lower) == 1
        && count(&TestLiteral::is_heap_upper) == 1
        && count(&|l| l.positive && matches!(l.atom, TestAtom::UnivGe(_))) == 1
        && count(&|l| !l.positive && matches!(l.atom, TestAtom::UnivGe(_))) <= 1
}

/// A heap size bound of a minterm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeapBound {
    Const(NatInf),
    UnivMinus(u32),
}

/// A conjunction of literals satisfying [`is_minterm`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minterm {
    literals: BTreeSet<TestLiteral>,
}

impl Minterm {
    pub fn new(literals: impl IntoIterator<Item = TestLiteral>) -> Result<Minterm> {
        let literals: BTreeSet<TestLiteral> = literals.into_iter().collect();
        let v: Vec<TestLiteral> = literals.iter().cloned().collect();
        if !is_minterm(&v) {
            return Err(Error::Precondition(
                "literals do not have the cardinality constraints of a minterm".into(),
            ));
        }
        Ok(Minterm { literals })
    }

    pub fn literals(&self) -> &BTreeSet<TestLiteral> {
        &self.literals
    }

    fn bound(&self, lower: bool) -> HeapBound {
        let lit = self
            .literals
            .iter()
            .find(|l| if lower { l.is_heap_lower() } else { l.is_heap_upper() })
            .expect("checked on construction");
        match lit.atom {
            TestAtom::HeapGe(n) => HeapBound::Const(n),
            TestAtom::HeapGeUnivMinus(n) => HeapBound::UnivMinus(n),
            _ => unreachable!("heap bound literal"),
        }
    }

    pub fn hmin(&self) -> HeapBound {
        self.bound(true)
    }

    pub fn hmax(&self) -> HeapBound {
        self.bound(false)
    }

    pub fn to_formula(&self) -> SlFormula {
        SlFormula::and_all(self.literals.iter().map(TestLiteral::to_formula))
    }
}

/// Whether `phi` is a quantifier-free boolean combination of test formulae.
/// With `domain_independent`, `|U| >= n` and `|h| >= |U| - n` are excluded.
pub fn is_test_combination(phi: &SlFormula, domain_independent: bool) -> bool {
    first_non_test(phi, domain_independent).is_none()
}

/// The first subformula, in pre-order, that prevents `phi` from being a
/// test combination.
pub fn first_non_test(phi: &SlFormula, domain_independent: bool) -> Option<&SlFormula> {
    use SlFormula::*;
    phi.subformulas().into_iter().find(|f| match f {
        Emp | PointsTo(..) | Star(..) | Wand(..) | Exists(..) | Forall(..) => true,
        UnivGe(_) | HeapGeUnivMinus(_) => domain_independent,
        _ => false,
    })
}

/// An upper bound on the numeric constants of the minterms equivalent to a
/// quantifier-free formula, computed bottom-up: `emp` and points-to count
/// 2, a test atom its constant plus one, boolean connectives take the
/// maximum, and `*`, `-*` the sum plus one.
pub fn conservative_maxn(phi: &SlFormula) -> Result<u32> {
    use SlFormula::*;
    Ok(match phi {
        Emp | PointsTo(..) => 2,
        True | False | Eq(..) | Hooks(..) | Alloc(_) => 1,
        HeapGe(n) | UnivGe(n) | HeapGeUnivMinus(n) => n.saturating_add(1),
        Not(a) => conservative_maxn(a)?,
        And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => {
            conservative_maxn(a)?.max(conservative_maxn(b)?)
        }
        Star(a, b) | Wand(a, b) => conservative_maxn(a)?
            .saturating_add(conservative_maxn(b)?)
            .saturating_add(1),
        Exists(..) | Forall(..) => return Err(Error::NotQuantifierFree(phi.to_string())),
    })
}

/// Replaces `emp` by `~|h| >= 1` and `x |-> y` by `x ~> y & ~|h| >= 2`.
pub fn desugar_points_to(phi: &SlFormula) -> SlFormula {
    match phi {
        SlFormula::Emp => SlFormula::not(SlFormula::HeapGe(1)),
        SlFormula::PointsTo(x, y) => SlFormula::and(
            SlFormula::Hooks(x.clone(), y.clone()),
            SlFormula::not(SlFormula::HeapGe(2)),
        ),
        other => other.map_children(desugar_points_to),
    }
}

/// Replaces the domain-dependent atoms by their value on infinite
/// universes: `|U| >= n` by `true` and `|h| >= |U| - n` by `false`.
pub fn normalize_for_infinite(phi: &SlFormula) -> Result<SlFormula> {
    if let Some(bad) = first_non_test(phi, false) {
        return Err(Error::NotTestCombination(bad.to_string()));
    }
    Ok(replace_domain_dependent(phi))
}

fn replace_domain_dependent(phi: &SlFormula) -> SlFormula {
    match phi {
        SlFormula::UnivGe(_) => SlFormula::True,
        SlFormula::HeapGeUnivMinus(_) => SlFormula::False,
        other => other.map_children(replace_domain_dependent),
    }
}

/// The defining pattern of a test formula in terms of `emp`, points-to,
/// `*` and `-*`. Cardinality constraints are unrolled down to `true`, and
/// `|U| >= n` is read as the septraction `~(true -* ~|h| >= n)`.
pub fn spatial_encoding(atom: &TestAtom) -> SlFormula {
    match atom {
        TestAtom::Eq(x, y) => SlFormula::Eq(x.clone(), y.clone()),
        TestAtom::Hooks(x, y) => SlFormula::star(SlFormula::points_to(x.clone(), y.clone()), SlFormula::True),
        TestAtom::Alloc(x) => SlFormula::wand(SlFormula::points_to(x.clone(), x.clone()), SlFormula::False),
        TestAtom::HeapGe(NatInf::Inf) => SlFormula::False,
        TestAtom::HeapGe(NatInf::Fin(n)) => heap_ge_encoding(*n),
        TestAtom::UnivGe(n) => SlFormula::septraction(SlFormula::True, heap_ge_encoding(*n)),
        TestAtom::HeapGeUnivMinus(n) => SlFormula::wand(heap_ge_encoding(n + 1), SlFormula::False),
    }
}

fn heap_ge_encoding(n: u32) -> SlFormula {
    (0..n).fold(SlFormula::True, |acc, _| {
        SlFormula::star(acc, SlFormula::not(SlFormula::Emp))
    })
}
