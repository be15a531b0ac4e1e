use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Nat(u32),
    LParen,
    RParen,
    Dot,
    Comma,
    Eq,
    Neq,
    PointsTo,
    Hooks,
    Bar,
    Amp,
    Star,
    Wand,
    Imp,
    Iff,
    Not,
    Ge,
    Minus,
    HeapCard,
    UnivCard,
    Exists,
    Forall,
    Top,
    Bottom,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(n) => format!("number {n}"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Dot => ".",
            Tok::Comma => ",",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::PointsTo => "|->",
            Tok::Hooks => "~>",
            Tok::Bar => "|",
            Tok::Amp => "&",
            Tok::Star => "*",
            Tok::Wand => "-*",
            Tok::Imp => "->",
            Tok::Iff => "<->",
            Tok::Not => "~",
            Tok::Ge => ">=",
            Tok::Minus => "-",
            Tok::HeapCard => "|h|",
            Tok::UnivCard => "|U|",
            Tok::Exists => "exists",
            Tok::Forall => "forall",
            Tok::Top => "true",
            Tok::Bottom => "false",
            Tok::Ident(_) | Tok::Nat(_) | Tok::Eof => "",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Multi-character operators, longest first so that prefixes never win.
const OPERATORS: &[(&str, Tok)] = &[
    ("<->", Tok::Iff),
    ("<=>", Tok::Iff),
    ("|->", Tok::PointsTo),
    ("|h|", Tok::HeapCard),
    ("|U|", Tok::UnivCard),
    ("−∗", Tok::Wand),
    ("-∗", Tok::Wand),
    ("-*", Tok::Wand),
    ("->", Tok::Imp),
    ("=>", Tok::Imp),
    ("~>", Tok::Hooks),
    (">=", Tok::Ge),
    ("!=", Tok::Neq),
    ("/\\", Tok::Amp),
    ("\\/", Tok::Bar),
    ("↔", Tok::Iff),
    ("→", Tok::Imp),
    ("↦", Tok::PointsTo),
    ("↪", Tok::Hooks),
    ("≥", Tok::Ge),
    ("≠", Tok::Neq),
    ("≉", Tok::Neq),
    ("≈", Tok::Eq),
    ("∧", Tok::Amp),
    ("∨", Tok::Bar),
    ("∗", Tok::Star),
    ("¬", Tok::Not),
    ("−", Tok::Minus),
    ("∃", Tok::Exists),
    ("∀", Tok::Forall),
    ("⊤", Tok::Top),
    ("⊥", Tok::Bottom),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    (".", Tok::Dot),
    (",", Tok::Comma),
    ("=", Tok::Eq),
    ("|", Tok::Bar),
    ("&", Tok::Amp),
    ("*", Tok::Star),
    ("~", Tok::Not),
    ("!", Tok::Not),
    ("-", Tok::Minus),
];

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if c == '\n' {
            line += 1;
            column = 1;
            rest = &rest[1..];
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if c == '#' {
            let end = rest.find('\n').unwrap_or(rest.len());
            rest = &rest[end..];
            continue;
        }
        let (tok, len) = if c.is_ascii_digit() {
            let end = rest
                .find(|ch: char| !ch.is_ascii_digit())
                .unwrap_or(rest.len());
            let n = rest[..end].parse::<u32>().map_err(|_| {
                ParseError::new(line, column, format!("number `{}` is too large", &rest[..end]))
            })?;
            (Tok::Nat(n), end)
        } else if c.is_alphabetic() || c == '_' {
            let end = rest
                .find(|ch: char| !(ch.is_alphanumeric() || ch == '_' || ch == '\''))
                .unwrap_or(rest.len());
            let word = &rest[..end];
            let tok = match word {
                "exists" => Tok::Exists,
                "forall" => Tok::Forall,
                _ => Tok::Ident(word.to_string()),
            };
            (tok, end)
        } else if let Some((op, tok)) = OPERATORS.iter().find(|(op, _)| rest.starts_with(op)) {
            (tok.clone(), op.len())
        } else {
            return Err(ParseError::new(line, column, format!("unexpected character `{c}`")));
        };
        out.push(Spanned { tok, line, column });
        column += rest[..len].chars().count();
        rest = &rest[len..];
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_cardinalities() {
        assert_eq!(
            toks("|h| >= |U| - 2"),
            vec![Tok::HeapCard, Tok::Ge, Tok::UnivCard, Tok::Minus, Tok::Nat(2), Tok::Eof]
        );
        assert_eq!(
            toks("x |-> y -* ~x ~> y"),
            vec![
                Tok::Ident("x".into()),
                Tok::PointsTo,
                Tok::Ident("y".into()),
                Tok::Wand,
                Tok::Not,
                Tok::Ident("x".into()),
                Tok::Hooks,
                Tok::Ident("y".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let t = tokenize("# note\n  emp").unwrap();
        assert_eq!(t[0].tok, Tok::Ident("emp".into()));
        assert_eq!((t[0].line, t[0].column), (2, 3));
    }

    #[test]
    fn unicode_forms() {
        assert_eq!(
            toks("∃x. x ↦ x ∗ ¬emp"),
            vec![
                Tok::Exists,
                Tok::Ident("x".into()),
                Tok::Dot,
                Tok::Ident("x".into()),
                Tok::PointsTo,
                Tok::Ident("x".into()),
                Tok::Star,
                Tok::Not,
                Tok::Ident("emp".into()),
                Tok::Eof
            ]
        );
    }
}
