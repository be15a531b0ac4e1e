//! Output of FO formulae for external provers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::syntax::{FoFormula, PredSym, Term, Var, FUNCTION_SYMBOL};

/// Target syntax for [`emit_fo`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// An SMT-LIB 2 script over one uninterpreted sort `L`.
    SmtLib2,
    /// A TPTP first-order problem with the formula as an axiom.
    Tptp,
    /// The crate's own concrete syntax.
    Native,
}

/// Renders `phi` in the chosen format. Output depends only on `phi`.
pub fn emit_fo(phi: &FoFormula, format: Format) -> String {
    match format {
        Format::SmtLib2 => smtlib2(phi),
        Format::Tptp => tptp(phi),
        Format::Native => format!("{phi}\n"),
    }
}

const SMT_RESERVED: &[&str] = &[
    "L", "Bool", "and", "or", "not", "=>", "xor", "ite", "let", "forall", "exists", "true",
    "false", "assert", "distinct", "par", "match", "_", "!", "as",
];

fn smt_symbol(name: &str, taken: &[&str]) -> String {
    let plain = name
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || "_.$~@%^&*+-<>?/".contains(c))
        && !name.starts_with(|c: char| c.is_ascii_digit());
    let base = if plain {
        name.to_string()
    } else {
        format!("|{}|", name.replace(['|', '\\'], "_"))
    };
    if SMT_RESERVED.contains(&base.as_str()) || taken.contains(&base.as_str()) {
        format!("v_{base}")
    } else {
        base
    }
}

struct Smt {
    vars: BTreeMap<Var, String>,
    preds: BTreeMap<PredSym, String>,
    taken: Vec<String>,
}

impl Smt {
    fn symbol(&self, v: &Var) -> String {
        let taken: Vec<&str> = self.taken.iter().map(String::as_str).collect();
        smt_symbol(v.as_str(), &taken)
    }

    fn var(&self, v: &Var) -> String {
        self.vars.get(v).cloned().unwrap_or_else(|| self.symbol(v))
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => self.var(v),
            Term::App(a) => format!("({FUNCTION_SYMBOL} {})", self.term(a)),
        }
    }

    fn formula(&mut self, phi: &FoFormula, out: &mut String) {
        use FoFormula::*;
        match phi {
            False => out.push_str("false"),
            True => out.push_str("true"),
            Eq(a, b) => {
                let _ = write!(out, "(= {} {})", self.term(a), self.term(b));
            }
            Pred(p, t) => {
                let _ = write!(out, "({} {})", self.preds[p], self.term(t));
            }
            Not(a) => {
                out.push_str("(not ");
                self.formula(a, out);
                out.push(')');
            }
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => {
                let op = match phi {
                    And(..) => "and",
                    Or(..) => "or",
                    Imp(..) => "=>",
                    _ => "=",
                };
                let _ = write!(out, "({op} ");
                self.formula(a, out);
                out.push(' ');
                self.formula(b, out);
                out.push(')');
            }
            Exists(v, a) | Forall(v, a) => {
                let q = if matches!(phi, Exists(..)) {
                    "exists"
                } else {
                    "forall"
                };
                let name = self.symbol(v);
                let saved = self.vars.insert(v.clone(), name.clone());
                let _ = write!(out, "({q} (({name} L)) ");
                self.formula(a, out);
                out.push(')');
                match saved {
                    Some(s) => self.vars.insert(v.clone(), s),
                    None => self.vars.remove(v),
                };
            }
        }
    }
}

fn smtlib2(phi: &FoFormula) -> String {
    let mut out = String::new();
    out.push_str("(declare-sort L 0)\n");
    let _ = writeln!(out, "(declare-fun {FUNCTION_SYMBOL} (L) L)");
    let mut preds = BTreeMap::new();
    for p in phi.predicates() {
        let name = smt_symbol(p.as_str(), &[FUNCTION_SYMBOL]);
        let _ = writeln!(out, "(declare-fun {name} (L) Bool)");
        preds.insert(p, name);
    }
    let pred_names: Vec<String> = preds.values().cloned().collect();
    let taken: Vec<&str> = pred_names
        .iter()
        .map(String::as_str)
        .chain([FUNCTION_SYMBOL])
        .collect();
    let mut vars = BTreeMap::new();
    for v in phi.free_vars() {
        let name = smt_symbol(v.as_str(), &taken);
        let _ = writeln!(out, "(declare-const {name} L)");
        vars.insert(v, name);
    }
    let mut smt = Smt {
        vars,
        preds,
        taken: taken.iter().map(|s| s.to_string()).collect(),
    };
    let mut body = String::new();
    smt.formula(phi, &mut body);
    let _ = writeln!(out, "(assert {body})");
    out.push_str("(check-sat)\n");
    out
}

fn tptp_functor(name: &str) -> String {
    let ok = name.starts_with(|c: char| c.is_ascii_lowercase())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        name.to_string()
    } else {
        let clean: String = name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
            .collect();
        format!("p_{clean}")
    }
}

struct Tptp {
    scope: BTreeMap<Var, String>,
    next: usize,
}

impl Tptp {
    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("X{}", self.next)
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => self.scope[v].clone(),
            Term::App(a) => format!("{FUNCTION_SYMBOL}({})", self.term(a)),
        }
    }

    fn formula(&mut self, phi: &FoFormula) -> String {
        use FoFormula::*;
        match phi {
            False => "$false".into(),
            True => "$true".into(),
            Eq(a, b) => format!("{} = {}", self.term(a), self.term(b)),
            Pred(p, t) => format!("{}({})", tptp_functor(p.as_str()), self.term(t)),
            Not(a) => format!("~ ({})", self.formula(a)),
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => {
                let op = match phi {
                    And(..) => "&",
                    Or(..) => "|",
                    Imp(..) => "=>",
                    _ => "<=>",
                };
                let l = self.formula(a);
                let r = self.formula(b);
                format!("({l} {op} {r})")
            }
            Exists(v, a) | Forall(v, a) => {
                let q = if matches!(phi, Exists(..)) { "?" } else { "!" };
                let name = self.fresh();
                let saved = self.scope.insert(v.clone(), name.clone());
                let body = self.formula(a);
                match saved {
                    Some(s) => self.scope.insert(v.clone(), s),
                    None => self.scope.remove(v),
                };
                format!("{q} [{name}] : ({body})")
            }
        }
    }
}

fn tptp(phi: &FoFormula) -> String {
    let mut t = Tptp {
        scope: BTreeMap::new(),
        next: 0,
    };
    let free: Vec<String> = phi
        .free_vars()
        .into_iter()
        .map(|v| {
            let name = t.fresh();
            t.scope.insert(v, name.clone());
            name
        })
        .collect();
    let body = t.formula(phi);
    let closed = if free.is_empty() {
        body
    } else {
        format!("? [{}] : ({body})", free.join(", "))
    };
    format!("fof(formula, axiom, {closed}).\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_fo;

    #[test]
    fn smtlib_declarations() {
        let phi = parse_fo("exists x. d(x)").unwrap();
        let out = emit_fo(&phi, Format::SmtLib2);
        assert!(out.contains("(declare-fun d (L) Bool)"));
        assert!(out.contains("(assert (exists ((x L)) (d x)))"));
        assert!(out.ends_with("(check-sat)\n"));
    }

    #[test]
    fn smtlib_free_and_reserved_names() {
        let phi = parse_fo("f(and) = y").unwrap();
        let out = emit_fo(&phi, Format::SmtLib2);
        assert!(out.contains("(declare-const v_and L)"));
        assert!(out.contains("(declare-const y L)"));
        assert!(out.contains("(assert (= (f v_and) y))"));
    }

    #[test]
    fn tptp_terms() {
        let phi = parse_fo("f(x) = y").unwrap();
        assert_eq!(
            emit_fo(&phi, Format::Tptp),
            "fof(formula, axiom, ? [X1, X2] : (f(X1) = X2)).\n"
        );
        let psi = parse_fo("forall x. P(x) | ~x = x").unwrap();
        assert_eq!(
            emit_fo(&psi, Format::Tptp),
            "fof(formula, axiom, ! [X1] : ((p_p(X1) | ~ (X1 = X1)))).\n"
        );
    }

    #[test]
    fn native_round_trip() {
        let phi = parse_fo("forall y, z. f(y) = f(z) -> y = z").unwrap();
        let out = emit_fo(&phi, Format::Native);
        assert_eq!(parse_fo(&out).unwrap(), phi);
    }
}
