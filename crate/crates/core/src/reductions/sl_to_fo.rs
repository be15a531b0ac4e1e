use crate::error::{Error, Result};
use crate::syntax::{FoFormula, FreshNames, SlFormula, Term, Var};

/// Translates a quantified boolean combination of test formulae into
/// first-order logic, with `d` standing for the heap domain and `f` for
/// the heap.
///
/// | SL | FO |
/// |----|----|
/// | `x ~> y` | `d(x) & y = f(x)` |
/// | `alloc(x)` | `d(x)` |
/// | `\|U\| >= n` | `∃x1..xn. distinct(x1..xn)` |
/// | `\|h\| >= n` | `∃x1..xn. distinct(x1..xn) & d(x1) & ... & d(xn)` |
/// | `\|h\| >= \|U\| - n` | `∃x1..xn ∀y. (y != x1 & ... & y != xn) -> d(y)` |
///
/// The remaining connectives and quantifiers are translated
/// homomorphically.
pub fn sl_to_fo(phi: &SlFormula) -> Result<FoFormula> {
    let mut fresh = FreshNames::new("x", phi.all_vars());
    translate(phi, &mut fresh)
}

fn translate(phi: &SlFormula, fresh: &mut FreshNames) -> Result<FoFormula> {
    use SlFormula as S;
    let tr = |f: &SlFormula, fresh: &mut FreshNames| translate(f, fresh);
    Ok(match phi {
        S::False => FoFormula::False,
        S::True => FoFormula::True,
        S::Emp | S::PointsTo(..) | S::Star(..) | S::Wand(..) => {
            return Err(Error::NotTestCombination(phi.to_string()))
        }
        S::Eq(x, y) => FoFormula::eq_vars(x.clone(), y.clone()),
        S::Hooks(x, y) => FoFormula::and(
            FoFormula::dom(x.clone()),
            FoFormula::eq(Term::var(y.clone()), Term::app(Term::var(x.clone()))),
        ),
        S::Alloc(x) => FoFormula::dom(x.clone()),
        S::UnivGe(n) => {
            let xs = fresh_block(*n, fresh);
            exists_block(&xs, FoFormula::distinct(&xs))
        }
        S::HeapGe(n) => {
            let xs = fresh_block(*n, fresh);
            let body = conj(
                FoFormula::distinct(&xs),
                xs.iter().map(|x| FoFormula::dom(x.clone())),
            );
            exists_block(&xs, body)
        }
        S::HeapGeUnivMinus(n) => {
            let xs = fresh_block(*n, fresh);
            let y = fresh.fresh_with("y");
            let outside = FoFormula::and_all(
                xs.iter()
                    .map(|x| FoFormula::not(FoFormula::eq_vars(y.clone(), x.clone()))),
            );
            let body = if xs.is_empty() {
                FoFormula::dom(y.clone())
            } else {
                FoFormula::imp(outside, FoFormula::dom(y.clone()))
            };
            exists_block(&xs, FoFormula::forall(y, body))
        }
        S::Not(a) => FoFormula::not(tr(a, fresh)?),
        S::And(a, b) => FoFormula::and(tr(a, fresh)?, tr(b, fresh)?),
        S::Or(a, b) => FoFormula::or(tr(a, fresh)?, tr(b, fresh)?),
        S::Imp(a, b) => FoFormula::imp(tr(a, fresh)?, tr(b, fresh)?),
        S::Iff(a, b) => FoFormula::iff(tr(a, fresh)?, tr(b, fresh)?),
        S::Exists(v, a) => FoFormula::exists(v.clone(), tr(a, fresh)?),
        S::Forall(v, a) => FoFormula::forall(v.clone(), tr(a, fresh)?),
    })
}

fn fresh_block(n: u32, fresh: &mut FreshNames) -> Vec<Var> {
    (0..n).map(|_| fresh.fresh()).collect()
}

fn exists_block(xs: &[Var], body: FoFormula) -> FoFormula {
    xs.iter()
        .rev()
        .fold(body, |acc, x| FoFormula::exists(x.clone(), acc))
}

/// `first ∧ rest...`, dropping a leading `true`.
fn conj(first: FoFormula, rest: impl Iterator<Item = FoFormula>) -> FoFormula {
    let items: Vec<FoFormula> = std::iter::once(first)
        .filter(|f| *f != FoFormula::True)
        .chain(rest)
        .collect();
    FoFormula::and_all(items)
}
