use std::collections::BTreeSet;

use super::prefix::{PrenexView, Quantifier};
use super::{FreshNames, SlFormula, Var};

/// Renames bound variables so that no two binders share a name and no
/// binder reuses a free variable. Binders that are already unique keep
/// their names.
pub fn rename_apart(phi: &SlFormula) -> SlFormula {
    let mut seen: BTreeSet<Var> = phi.free_vars();
    let mut fresh = FreshNames::new("v", phi.all_vars());
    go(phi, &mut seen, &mut fresh)
}

fn go(phi: &SlFormula, seen: &mut BTreeSet<Var>, fresh: &mut FreshNames) -> SlFormula {
    match phi {
        SlFormula::Exists(v, body) | SlFormula::Forall(v, body) => {
            let (name, body) = if seen.insert(v.clone()) {
                (v.clone(), go(body, seen, fresh))
            } else {
                let new = fresh.fresh_with(&format!("{v}_"));
                seen.insert(new.clone());
                let target = new.clone();
                let old = v.clone();
                let renamed = body.rename_free(&move |w| (*w == old).then(|| target.clone()));
                (new, go(&renamed, seen, fresh))
            };
            if matches!(phi, SlFormula::Exists(..)) {
                SlFormula::exists(name, body)
            } else {
                SlFormula::forall(name, body)
            }
        }
        other => other.map_children(|c| go(c, seen, fresh)),
    }
}

type Prefix = Vec<(Quantifier, Var)>;

/// An equivalent prenex formula, or `None` when a quantifier occurs below
/// `*` or `-*`, where it cannot be moved. Prefixes of sibling operands are
/// interleaved so that existential blocks come first, which keeps
/// conjunctions and disjunctions of `∃*∀*` formulae in `∃*∀*`.
pub fn to_prenex(phi: &SlFormula) -> Option<SlFormula> {
    if phi.split_prefix().1.has_quantifier() {
        let apart = rename_apart(phi);
        let (prefix, matrix) = pull(&apart)?;
        Some(SlFormula::quantify(&prefix, matrix))
    } else {
        Some(phi.clone())
    }
}

fn flip(prefix: Prefix) -> Prefix {
    prefix
        .into_iter()
        .map(|(q, v)| {
            let q = match q {
                Quantifier::Exists => Quantifier::Forall,
                Quantifier::Forall => Quantifier::Exists,
            };
            (q, v)
        })
        .collect()
}

fn merge(a: Prefix, b: Prefix) -> Prefix {
    let (mut a, mut b) = (a.into_iter().peekable(), b.into_iter().peekable());
    let mut out = Vec::new();
    let mut want = Quantifier::Exists;
    while a.peek().is_some() || b.peek().is_some() {
        let before = out.len();
        while let Some(x) = a.next_if(|(q, _)| *q == want) {
            out.push(x);
        }
        while let Some(x) = b.next_if(|(q, _)| *q == want) {
            out.push(x);
        }
        if out.len() == before || a.peek().is_none() && b.peek().is_none() {
            want = match want {
                Quantifier::Exists => Quantifier::Forall,
                Quantifier::Forall => Quantifier::Exists,
            };
        }
    }
    out
}

fn pull(phi: &SlFormula) -> Option<(Prefix, SlFormula)> {
    use SlFormula::*;
    Some(match phi {
        Exists(v, a) | Forall(v, a) => {
            let (mut p, m) = pull(a)?;
            let q = if matches!(phi, Exists(..)) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            p.insert(0, (q, v.clone()));
            (p, m)
        }
        Not(a) => {
            let (p, m) = pull(a)?;
            (flip(p), SlFormula::not(m))
        }
        And(a, b) | Or(a, b) => {
            let (pa, ma) = pull(a)?;
            let (pb, mb) = pull(b)?;
            let m = if matches!(phi, And(..)) {
                SlFormula::and(ma, mb)
            } else {
                SlFormula::or(ma, mb)
            };
            (merge(pa, pb), m)
        }
        Imp(a, b) => {
            let (pa, ma) = pull(a)?;
            let (pb, mb) = pull(b)?;
            (merge(flip(pa), pb), SlFormula::imp(ma, mb))
        }
        Iff(a, b) => {
            if a.has_quantifier() || b.has_quantifier() {
                let forward = SlFormula::imp((**a).clone(), (**b).clone());
                let backward = SlFormula::imp((**b).clone(), (**a).clone());
                return pull(&rename_apart(&SlFormula::and(forward, backward)));
            }
            (Vec::new(), phi.clone())
        }
        Star(a, b) | Wand(a, b) => {
            if a.has_quantifier() || b.has_quantifier() {
                return None;
            }
            (Vec::new(), phi.clone())
        }
        atom => (Vec::new(), atom.clone()),
    })
}
