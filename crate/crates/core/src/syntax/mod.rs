//! Formula syntax for SL(1) and for first-order logic over one unary
//! function symbol.

mod flatten;
mod fo;
mod lexer;
mod parser;
mod prefix;
mod prenex;
mod sl;
mod var;

pub use flatten::{flatten_fo, is_flat};
pub use fo::{FoFormula, Term, FUNCTION_SYMBOL};
pub use parser::{parse, parse_fo, parse_sl, Dialect, Formula};
pub use prefix::{PrefixClass, PrenexView, Quantifier};
pub use prenex::{rename_apart, to_prenex};
pub use sl::SlFormula;
pub use var::{FreshNames, PredSym, Var, DOMAIN_PREDICATE};

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Formula::Sl(phi) => phi.fmt(f),
            Formula::Fo(phi) => phi.fmt(f),
        }
    }
}
