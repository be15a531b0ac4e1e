use crate::error::{Error, Result};
use crate::syntax::{is_flat, FoFormula, FreshNames, SlFormula, Term, Var};

/// Which kind of SL model the FO formula is transferred to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Finite SL structures: the heap is total, so it is the function.
    Finite,
    /// Infinite SL structures: the heap domain carries the FO structure.
    Infinite,
}

/// Translates a flat FO formula without predicate symbols into SL.
///
/// Equations `f(x) = y` become `x ~> y` and equations between variables
/// are kept. In finite mode the result is conjoined with `∀x. alloc(x)`.
/// In infinite mode every quantifier is relativised to `alloc`, and the
/// result additionally states that the heap is nonempty, closed under
/// successors, and allocates every free variable.
pub fn fo_to_sl(phi: &FoFormula, mode: Mode) -> Result<SlFormula> {
    if let Some(p) = phi.predicates().into_iter().next() {
        return Err(Error::PredicateNotAllowed(p));
    }
    if !is_flat(phi) {
        let bad = phi
            .subformulas()
            .into_iter()
            .find(|f| matches!(f, FoFormula::Eq(..) | FoFormula::Pred(..)) && !is_flat(f))
            .expect("some atom is not flat");
        return Err(Error::NotFlat(bad.to_string()));
    }
    let mut fresh = FreshNames::new("x", phi.all_vars());
    let relativise = mode == Mode::Infinite;
    let body = translate(phi, relativise);
    Ok(match mode {
        Mode::Finite => {
            let x = fresh.fresh();
            SlFormula::and(body, SlFormula::forall(x.clone(), SlFormula::Alloc(x)))
        }
        Mode::Infinite => {
            let x = fresh.fresh();
            let y = fresh.fresh_with("y");
            let closed = SlFormula::forall(
                x.clone(),
                SlFormula::forall(
                    y.clone(),
                    SlFormula::imp(SlFormula::Hooks(x, y.clone()), SlFormula::Alloc(y)),
                ),
            );
            let free = phi.free_vars().into_iter().map(SlFormula::Alloc);
            let parts = [SlFormula::not(SlFormula::Emp), closed]
                .into_iter()
                .chain(free)
                .chain(std::iter::once(body));
            SlFormula::and_all(parts)
        }
    })
}

fn var(t: &Term) -> Var {
    t.as_var().expect("flat term").clone()
}

fn translate(phi: &FoFormula, rel: bool) -> SlFormula {
    use FoFormula as F;
    match phi {
        F::False => SlFormula::False,
        F::True => SlFormula::True,
        F::Eq(Term::App(x), y) => SlFormula::Hooks(var(x), var(y)),
        F::Eq(x, y) => SlFormula::Eq(var(x), var(y)),
        F::Pred(..) => unreachable!("predicates rejected"),
        F::Not(a) => SlFormula::not(translate(a, rel)),
        F::And(a, b) => SlFormula::and(translate(a, rel), translate(b, rel)),
        F::Or(a, b) => SlFormula::or(translate(a, rel), translate(b, rel)),
        F::Imp(a, b) => SlFormula::imp(translate(a, rel), translate(b, rel)),
        F::Iff(a, b) => SlFormula::iff(translate(a, rel), translate(b, rel)),
        F::Exists(v, a) => {
            let body = translate(a, rel);
            let body = if rel {
                SlFormula::and(SlFormula::Alloc(v.clone()), body)
            } else {
                body
            };
            SlFormula::exists(v.clone(), body)
        }
        F::Forall(v, a) => {
            let body = translate(a, rel);
            let body = if rel {
                SlFormula::imp(SlFormula::Alloc(v.clone()), body)
            } else {
                body
            };
            SlFormula::forall(v.clone(), body)
        }
    }
}
