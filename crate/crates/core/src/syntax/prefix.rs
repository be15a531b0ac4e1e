use std::fmt;

use super::Var;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "∃",
            Quantifier::Forall => "∀",
        })
    }
}

/// Shape of the quantifier prefix of a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrefixClass {
    QuantifierFree,
    /// `exists^n forall^m` over a quantifier-free matrix, with `n + m > 0`.
    Bsr { exists: usize, forall: usize },
    /// All quantifiers outermost, but with an alternation outside `∃*∀*`.
    Prenex(Vec<Quantifier>),
    NonPrenex,
}

impl PrefixClass {
    /// `(n, m)` when the formula is in the Bernays-Schönfinkel-Ramsey
    /// class. Quantifier-free formulae count as `(0, 0)`.
    pub fn bsr(&self) -> Option<(usize, usize)> {
        match self {
            PrefixClass::QuantifierFree => Some((0, 0)),
            PrefixClass::Bsr { exists, forall } => Some((*exists, *forall)),
            _ => None,
        }
    }

    pub fn is_prenex(&self) -> bool {
        !matches!(self, PrefixClass::NonPrenex)
    }
}

impl fmt::Display for PrefixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrefixClass::QuantifierFree => f.write_str("quantifier-free"),
            PrefixClass::Bsr { exists, forall } => write!(f, "BSR({exists},{forall})"),
            PrefixClass::Prenex(qs) => {
                f.write_str("prenex ")?;
                for q in qs {
                    write!(f, "{q}")?;
                }
                Ok(())
            }
            PrefixClass::NonPrenex => f.write_str("non-prenex"),
        }
    }
}

/// Access to the quantifier structure of a formula type.
pub trait PrenexView: Sized {
    fn as_quantifier(&self) -> Option<(Quantifier, &Var, &Self)>;
    fn contains_quantifier(&self) -> bool;

    /// Splits off the outermost quantifier block.
    fn split_prefix(&self) -> (Vec<(Quantifier, Var)>, &Self) {
        let mut prefix = Vec::new();
        let mut cur = self;
        while let Some((q, v, body)) = cur.as_quantifier() {
            prefix.push((q, v.clone()));
            cur = body;
        }
        (prefix, cur)
    }

    fn classify_prefix(&self) -> PrefixClass {
        let (prefix, matrix) = self.split_prefix();
        if matrix.contains_quantifier() {
            return PrefixClass::NonPrenex;
        }
        if prefix.is_empty() {
            return PrefixClass::QuantifierFree;
        }
        let exists = prefix
            .iter()
            .take_while(|(q, _)| *q == Quantifier::Exists)
            .count();
        if prefix[exists..]
            .iter()
            .all(|(q, _)| *q == Quantifier::Forall)
        {
            PrefixClass::Bsr {
                exists,
                forall: prefix.len() - exists,
            }
        } else {
            PrefixClass::Prenex(prefix.into_iter().map(|(q, _)| q).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::SlFormula as F;

    #[test]
    fn classification() {
        let bsr = F::exists("x", F::forall("y", F::hooks("x", "y")));
        assert_eq!(bsr.classify_prefix(), PrefixClass::Bsr { exists: 1, forall: 1 });
        let ae = F::forall("y", F::exists("x", F::hooks("x", "y")));
        assert_eq!(
            ae.classify_prefix(),
            PrefixClass::Prenex(vec![Quantifier::Forall, Quantifier::Exists])
        );
        let np = F::star(F::Emp, F::exists("x", F::alloc("x")));
        assert_eq!(np.classify_prefix(), PrefixClass::NonPrenex);
        assert_eq!(F::Emp.classify_prefix(), PrefixClass::QuantifierFree);
        assert_eq!(F::Emp.classify_prefix().bsr(), Some((0, 0)));
    }
}
