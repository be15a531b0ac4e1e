use super::lexer::{tokenize, Spanned, Tok};
use super::{FoFormula, PredSym, SlFormula, Term, Var, FUNCTION_SYMBOL};
use crate::error::ParseError;

/// Which logic a text is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    Sl,
    Fo,
}

/// The result of [`parse`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Sl(SlFormula),
    Fo(FoFormula),
}

pub fn parse(text: &str, dialect: Dialect) -> Result<Formula, ParseError> {
    match dialect {
        Dialect::Sl => parse_sl(text).map(Formula::Sl),
        Dialect::Fo => parse_fo(text).map(Formula::Fo),
    }
}

pub fn parse_sl(text: &str) -> Result<SlFormula, ParseError> {
    Parser::<SlLogic>::new(text)?.parse_all()
}

pub fn parse_fo(text: &str) -> Result<FoFormula, ParseError> {
    Parser::<FoLogic>::new(text)?.parse_all()
}

/// The parts of the grammar that differ between the two logics.
trait Logic: Sized {
    type F;
    const SPATIAL: bool;
    fn top() -> Self::F;
    fn bottom() -> Self::F;
    fn not(a: Self::F) -> Self::F;
    fn and(a: Self::F, b: Self::F) -> Self::F;
    fn or(a: Self::F, b: Self::F) -> Self::F;
    fn imp(a: Self::F, b: Self::F) -> Self::F;
    fn iff(a: Self::F, b: Self::F) -> Self::F;
    fn star(a: Self::F, b: Self::F) -> Self::F;
    fn wand(a: Self::F, b: Self::F) -> Self::F;
    fn exists(v: Var, body: Self::F) -> Self::F;
    fn forall(v: Var, body: Self::F) -> Self::F;
    fn atom(p: &mut Parser<Self>) -> Result<Self::F, ParseError>;
}

struct Parser<L> {
    toks: Vec<Spanned>,
    pos: usize,
    _logic: std::marker::PhantomData<L>,
}

impl<L: Logic> Parser<L> {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            _logic: std::marker::PhantomData,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError::new(s.line, s.column, message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn variable(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if !is_keyword(&name) => {
                self.bump();
                Ok(Var::new(name))
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        match *self.peek() {
            Tok::Nat(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected("a natural number")),
        }
    }

    fn parse_all(&mut self) -> Result<L::F, ParseError> {
        let f = self.formula()?;
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("end of input"));
        }
        Ok(f)
    }

    fn formula(&mut self) -> Result<L::F, ParseError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            lhs = L::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<L::F, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.implication()?;
            return Ok(L::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<L::F, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.conjunction()?;
            lhs = L::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<L::F, ParseError> {
        let mut lhs = self.separating()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.separating()?;
            lhs = L::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn separating(&mut self) -> Result<L::F, ParseError> {
        let mut lhs = self.magic_wand()?;
        while *self.peek() == Tok::Star {
            if !L::SPATIAL {
                return Err(self.error("`*` is not available in first-order formulae"));
            }
            self.bump();
            let rhs = self.magic_wand()?;
            lhs = L::star(lhs, rhs);
        }
        Ok(lhs)
    }

    fn magic_wand(&mut self) -> Result<L::F, ParseError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Wand {
            if !L::SPATIAL {
                return Err(self.error("`-*` is not available in first-order formulae"));
            }
            self.bump();
            let rhs = self.magic_wand()?;
            return Ok(L::wand(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<L::F, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(L::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => {
                let is_exists = self.bump() == Tok::Exists;
                let mut vars = vec![self.variable()?];
                while self.eat(&Tok::Comma) {
                    vars.push(self.variable()?);
                }
                self.expect(Tok::Dot, "`.` after quantified variables")?;
                let body = self.formula()?;
                Ok(vars.into_iter().rev().fold(body, |acc, v| {
                    if is_exists {
                        L::exists(v, acc)
                    } else {
                        L::forall(v, acc)
                    }
                }))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Top => {
                self.bump();
                Ok(L::top())
            }
            Tok::Bottom => {
                self.bump();
                Ok(L::bottom())
            }
            Tok::Ident(w) if w == "true" => {
                self.bump();
                Ok(L::top())
            }
            Tok::Ident(w) if w == "false" => {
                self.bump();
                Ok(L::bottom())
            }
            _ => L::atom(self),
        }
    }
}

fn is_keyword(word: &str) -> bool {
    matches!(word, "true" | "false" | "emp" | "alloc")
}

struct SlLogic;

impl Logic for SlLogic {
    type F = SlFormula;
    const SPATIAL: bool = true;

    fn top() -> SlFormula {
        SlFormula::True
    }
    fn bottom() -> SlFormula {
        SlFormula::False
    }
    fn not(a: SlFormula) -> SlFormula {
        SlFormula::not(a)
    }
    fn and(a: SlFormula, b: SlFormula) -> SlFormula {
        SlFormula::and(a, b)
    }
    fn or(a: SlFormula, b: SlFormula) -> SlFormula {
        SlFormula::or(a, b)
    }
    fn imp(a: SlFormula, b: SlFormula) -> SlFormula {
        SlFormula::imp(a, b)
    }
    fn iff(a: SlFormula, b: SlFormula) -> SlFormula {
        SlFormula::iff(a, b)
    }
    fn star(a: SlFormula, b: SlFormula) -> SlFormula {
        SlFormula::star(a, b)
    }
    fn wand(a: SlFormula, b: SlFormula) -> SlFormula {
        SlFormula::wand(a, b)
    }
    fn exists(v: Var, body: SlFormula) -> SlFormula {
        SlFormula::exists(v, body)
    }
    fn forall(v: Var, body: SlFormula) -> SlFormula {
        SlFormula::forall(v, body)
    }

    fn atom(p: &mut Parser<Self>) -> Result<SlFormula, ParseError> {
        match p.peek().clone() {
            Tok::HeapCard => {
                p.bump();
                p.expect(Tok::Ge, "`>=`")?;
                if p.eat(&Tok::UnivCard) {
                    p.expect(Tok::Minus, "`-`")?;
                    Ok(SlFormula::HeapGeUnivMinus(p.nat()?))
                } else {
                    Ok(SlFormula::HeapGe(p.nat()?))
                }
            }
            Tok::UnivCard => {
                p.bump();
                p.expect(Tok::Ge, "`>=`")?;
                Ok(SlFormula::UnivGe(p.nat()?))
            }
            Tok::Ident(w) if w == "emp" => {
                p.bump();
                Ok(SlFormula::Emp)
            }
            Tok::Ident(w) if w == "alloc" => {
                p.bump();
                p.expect(Tok::LParen, "`(` after alloc")?;
                let x = p.variable()?;
                p.expect(Tok::RParen, "`)`")?;
                Ok(SlFormula::Alloc(x))
            }
            Tok::Ident(w) => {
                if *p.peek_at(1) == Tok::LParen {
                    return Err(p.error(format!("unknown atom `{w}(...)`")));
                }
                let x = p.variable()?;
                if !matches!(p.peek(), Tok::Eq | Tok::Neq | Tok::PointsTo | Tok::Hooks) {
                    return Err(p.unexpected("`=`, `!=`, `|->` or `~>`"));
                }
                let op = p.bump();
                let y = p.variable()?;
                Ok(match op {
                    Tok::Eq => SlFormula::Eq(x, y),
                    Tok::Neq => SlFormula::not(SlFormula::Eq(x, y)),
                    Tok::PointsTo => SlFormula::PointsTo(x, y),
                    _ => SlFormula::Hooks(x, y),
                })
            }
            _ => Err(p.unexpected("a formula")),
        }
    }
}

struct FoLogic;

impl Parser<FoLogic> {
    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(w) if w == FUNCTION_SYMBOL && *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                let inner = self.term()?;
                if *self.peek() == Tok::Comma {
                    return Err(self.error(format!(
                        "function `{FUNCTION_SYMBOL}` takes exactly one argument"
                    )));
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(Term::app(inner))
            }
            Tok::Ident(w) if *self.peek_at(1) == Tok::LParen => Err(self.error(format!(
                "`{w}` is not a function symbol; only `{FUNCTION_SYMBOL}` is available"
            ))),
            _ => Ok(Term::Var(self.variable()?)),
        }
    }
}

impl Logic for FoLogic {
    type F = FoFormula;
    const SPATIAL: bool = false;

    fn top() -> FoFormula {
        FoFormula::True
    }
    fn bottom() -> FoFormula {
        FoFormula::False
    }
    fn not(a: FoFormula) -> FoFormula {
        FoFormula::not(a)
    }
    fn and(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::and(a, b)
    }
    fn or(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::or(a, b)
    }
    fn imp(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::imp(a, b)
    }
    fn iff(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::iff(a, b)
    }
    fn star(_: FoFormula, _: FoFormula) -> FoFormula {
        unreachable!("rejected by the parser")
    }
    fn wand(_: FoFormula, _: FoFormula) -> FoFormula {
        unreachable!("rejected by the parser")
    }
    fn exists(v: Var, body: FoFormula) -> FoFormula {
        FoFormula::exists(v, body)
    }
    fn forall(v: Var, body: FoFormula) -> FoFormula {
        FoFormula::forall(v, body)
    }

    fn atom(p: &mut Parser<Self>) -> Result<FoFormula, ParseError> {
        match p.peek().clone() {
            Tok::Ident(w) if w != FUNCTION_SYMBOL && *p.peek_at(1) == Tok::LParen => {
                p.bump();
                p.bump();
                let t = p.term()?;
                if *p.peek() == Tok::Comma {
                    return Err(p.error(format!("predicate `{w}` takes exactly one argument")));
                }
                p.expect(Tok::RParen, "`)`")?;
                Ok(FoFormula::Pred(PredSym::new(w), t))
            }
            Tok::Ident(_) => {
                let a = p.term()?;
                let negated = match p.peek() {
                    Tok::Eq => false,
                    Tok::Neq => true,
                    _ => return Err(p.unexpected("`=` or `!=`")),
                };
                p.bump();
                let b = p.term()?;
                let eq = FoFormula::Eq(a, b);
                Ok(if negated { FoFormula::not(eq) } else { eq })
            }
            _ => Err(p.unexpected("a formula")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SlFormula as S;

    #[test]
    fn sl_examples() {
        assert_eq!(parse_sl("emp").unwrap(), S::Emp);
        assert_eq!(
            parse_sl("exists x. forall y. x |-> y").unwrap(),
            S::exists("x", S::forall("y", S::points_to("x", "y")))
        );
        assert_eq!(parse_sl("|h| >= |U| - 2").unwrap(), S::HeapGeUnivMinus(2));
        assert_eq!(parse_sl("|U| >= 3").unwrap(), S::UnivGe(3));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_sl("a = b | c = d & emp * emp -* emp -* emp").unwrap();
        let expect = S::or(
            S::eq("a", "b"),
            S::and(
                S::eq("c", "d"),
                S::star(S::Emp, S::wand(S::Emp, S::wand(S::Emp, S::Emp))),
            ),
        );
        assert_eq!(f, expect);
        let g = parse_sl("emp -> emp -> emp <-> emp").unwrap();
        assert_eq!(
            g,
            S::iff(S::imp(S::Emp, S::imp(S::Emp, S::Emp)), S::Emp)
        );
        assert_eq!(
            parse_sl("~x ~> y").unwrap(),
            S::not(S::hooks("x", "y"))
        );
    }

    #[test]
    fn quantifier_bodies_extend_right() {
        let f = parse_sl("emp & exists x, y. alloc(x) | alloc(y)").unwrap();
        assert_eq!(
            f,
            S::and(
                S::Emp,
                S::exists("x", S::exists("y", S::or(S::alloc("x"), S::alloc("y"))))
            )
        );
    }

    #[test]
    fn fo_example() {
        let f = parse_fo("forall y. forall z. (f(y) = f(z)) -> y = z").unwrap();
        let fy = Term::app(Term::var("y"));
        let fz = Term::app(Term::var("z"));
        assert_eq!(
            f,
            FoFormula::forall(
                "y",
                FoFormula::forall(
                    "z",
                    FoFormula::imp(FoFormula::eq(fy, fz), FoFormula::eq_vars("y", "z"))
                )
            )
        );
        assert_eq!(
            parse_fo("d(f(x))").unwrap(),
            FoFormula::pred(PredSym::new("d"), Term::app(Term::var("x")))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_sl("emp &\n  foo(x)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("unknown atom"));
        let e = parse_fo("f(x, y) = z").unwrap_err();
        assert!(e.message.contains("exactly one argument"));
        assert!(parse_sl("emp emp").is_err());
        assert!(parse_fo("x = y * x = y").is_err());
        assert!(parse_sl("|h| >= 99999999999").is_err());
    }
}
