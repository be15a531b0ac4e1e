use super::{FoFormula, FreshNames, Term, Var};

/// True when every equation has the shape `x = y` or `f(x) = y` and every
/// predicate is applied to a variable.
pub fn is_flat(phi: &FoFormula) -> bool {
    phi.subformulas().into_iter().all(|f| match f {
        FoFormula::Eq(a, b) => {
            b.as_var().is_some() && (a.as_var().is_some() || a.depth() == 1)
        }
        FoFormula::Pred(_, t) => t.as_var().is_some(),
        _ => true,
    })
}

/// Removes nested function applications by naming subterms with fresh
/// variables, and orients equations as `f(x) = y`.
///
/// Names introduced for an atom are bound existentially when the atom
/// occurs positively and universally when it occurs negatively. Since the
/// function is total both choices yield an equivalent formula.
pub fn flatten_fo(phi: &FoFormula) -> FoFormula {
    let mut fresh = FreshNames::new("z", phi.all_vars());
    flatten(phi, true, &mut fresh)
}

fn flatten(phi: &FoFormula, positive: bool, fresh: &mut FreshNames) -> FoFormula {
    use FoFormula::*;
    match phi {
        False | True => phi.clone(),
        Eq(a, b) => flatten_eq(a, b, positive, fresh),
        Pred(p, t) => {
            let mut defs = Vec::new();
            let v = name_term(t, &mut defs, fresh);
            wrap(defs, Pred(p.clone(), Term::Var(v)), positive)
        }
        Not(a) => FoFormula::not(flatten(a, !positive, fresh)),
        And(a, b) => FoFormula::and(flatten(a, positive, fresh), flatten(b, positive, fresh)),
        Or(a, b) => FoFormula::or(flatten(a, positive, fresh), flatten(b, positive, fresh)),
        Imp(a, b) => FoFormula::imp(flatten(a, !positive, fresh), flatten(b, positive, fresh)),
        Iff(a, b) => FoFormula::iff(flatten(a, positive, fresh), flatten(b, positive, fresh)),
        Exists(v, a) => FoFormula::exists(v.clone(), flatten(a, positive, fresh)),
        Forall(v, a) => FoFormula::forall(v.clone(), flatten(a, positive, fresh)),
    }
}

fn flatten_eq(a: &Term, b: &Term, positive: bool, fresh: &mut FreshNames) -> FoFormula {
    let mut defs = Vec::new();
    let core = match (a, b) {
        (Term::Var(_), Term::Var(_)) => FoFormula::Eq(a.clone(), b.clone()),
        (Term::App(s), Term::Var(y)) | (Term::Var(y), Term::App(s)) => {
            let v = name_term(s, &mut defs, fresh);
            fn_eq(v, y.clone())
        }
        (Term::App(s), t) => {
            let v = name_term(s, &mut defs, fresh);
            let z = name_term(t, &mut defs, fresh);
            fn_eq(v, z)
        }
    };
    wrap(defs, core, positive)
}

fn fn_eq(x: Var, y: Var) -> FoFormula {
    FoFormula::Eq(Term::app(Term::Var(x)), Term::Var(y))
}

/// Returns a variable equal to `t`, pushing `(z, f(v) = z)` definitions.
fn name_term(t: &Term, defs: &mut Vec<(Var, FoFormula)>, fresh: &mut FreshNames) -> Var {
    match t {
        Term::Var(v) => v.clone(),
        Term::App(s) => {
            let v = name_term(s, defs, fresh);
            let z = fresh.fresh();
            defs.push((z.clone(), fn_eq(v, z.clone())));
            z
        }
    }
}

fn wrap(defs: Vec<(Var, FoFormula)>, core: FoFormula, positive: bool) -> FoFormula {
    if defs.is_empty() {
        return core;
    }
    let (vars, eqs): (Vec<Var>, Vec<FoFormula>) = defs.into_iter().unzip();
    let body = if positive {
        FoFormula::and(FoFormula::and_all(eqs), core)
    } else {
        FoFormula::imp(FoFormula::and_all(eqs), core)
    };
    vars.into_iter().rev().fold(body, |acc, z| {
        if positive {
            FoFormula::exists(z, acc)
        } else {
            FoFormula::forall(z, acc)
        }
    })
}
