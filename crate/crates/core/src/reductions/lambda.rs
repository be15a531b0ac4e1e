use crate::error::{Error, Result};
use crate::syntax::{FreshNames, PrenexView, Quantifier, SlFormula, Var};
use crate::testform::{desugar_points_to, normalize_for_infinite};

/// Quantifier prefix and matrix of `λ_p` over the given variable names:
/// `∃x1..xp ∀a ∀b. distinct(x1..xp) ∧ ⋀ ¬(a ~> b ∧ (xi = a ∨ xi = b))`.
///
/// A structure satisfies `λ_p` exactly when at least `p` of its locations
/// lie outside `elems(h)`.
pub fn lambda_parts(xs: &[Var], a: &Var, b: &Var) -> (Vec<(Quantifier, Var)>, SlFormula) {
    if xs.is_empty() {
        return (Vec::new(), SlFormula::True);
    }
    let mut prefix: Vec<(Quantifier, Var)> =
        xs.iter().map(|x| (Quantifier::Exists, x.clone())).collect();
    prefix.push((Quantifier::Forall, a.clone()));
    prefix.push((Quantifier::Forall, b.clone()));
    let outside = xs.iter().map(|x| {
        SlFormula::not(SlFormula::and(
            SlFormula::Hooks(a.clone(), b.clone()),
            SlFormula::or(
                SlFormula::Eq(x.clone(), a.clone()),
                SlFormula::Eq(x.clone(), b.clone()),
            ),
        ))
    });
    let matrix = SlFormula::and_all(std::iter::once(SlFormula::distinct(xs)).chain(outside));
    (prefix, matrix)
}

/// `λ_p` as a prenex sentence, with variables `x1..xp`, `y0` and `y1`.
pub fn lambda_formula(p: usize) -> SlFormula {
    let xs: Vec<Var> = (1..=p).map(|i| Var::new(format!("x{i}"))).collect();
    let (prefix, matrix) = lambda_parts(&xs, &Var::new("y0"), &Var::new("y1"));
    SlFormula::quantify(&prefix, matrix)
}

/// Reduces infinite satisfiability to finite satisfiability.
///
/// For a closed prenex `phi` with `m` quantifiers whose matrix is built
/// from test formulae, `emp` and points-to, the result is
/// `phi' ∧ λ_m` in prenex form, where `phi'` has `emp` and points-to
/// expanded and `|U| >= n`, `|h| >= |U| - n` replaced by `true`, `false`.
/// `phi` has an infinite model exactly when the result has a finite one.
pub fn infinite_to_finite(phi: &SlFormula) -> Result<SlFormula> {
    let free = phi.free_vars();
    if !free.is_empty() {
        return Err(Error::NotClosed(join(&free)));
    }
    if !phi.classify_prefix().is_prenex() {
        return Err(Error::NotPrenex);
    }
    let (prefix, matrix) = phi.split_prefix();
    let matrix = normalize_for_infinite(&desugar_points_to(matrix))?;
    let m = prefix.len();
    if m == 0 {
        return Ok(SlFormula::and(matrix, SlFormula::True));
    }
    let mut fresh = FreshNames::new("x", phi.all_vars());
    let xs: Vec<Var> = (0..m).map(|_| fresh.fresh()).collect();
    let a = fresh.fresh_with("y");
    let b = fresh.fresh_with("y");
    let (lprefix, lmatrix) = lambda_parts(&xs, &a, &b);
    let (exists, foralls) = lprefix.split_at(m);
    let full: Vec<(Quantifier, Var)> = exists
        .iter()
        .chain(prefix.iter())
        .chain(foralls.iter())
        .cloned()
        .collect();
    Ok(SlFormula::quantify(&full, SlFormula::and(matrix, lmatrix)))
}

pub(crate) fn join(vars: &std::collections::BTreeSet<Var>) -> String {
    vars.iter().map(Var::to_string).collect::<Vec<_>>().join(", ")
}
