//! Plain-text form of structures:
//!
//! ```text
//! universe 3
//! store x=0 y=2
//! heap 0->1 1->1
//! ```
//!
//! A universe that is not of the form `{0, ..., n-1}` is written as a set,
//! `universe {0 1 3}`. Lines starting with `#` are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{FoStructure, Heap, Loc, SlStructure};
use crate::error::{Error, Result};
use crate::syntax::Var;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidStructure(msg.into())
}

fn loc(word: &str) -> Result<Loc> {
    word.parse::<Loc>()
        .map_err(|_| bad(format!("`{word}` is not a location")))
}

pub fn parse_structure(text: &str) -> Result<SlStructure> {
    let mut words = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        let line = line.replace('{', " { ").replace('}', " } ");
        words.extend(line.split_whitespace().map(str::to_string));
    }
    let mut universe: Option<BTreeSet<Loc>> = None;
    let mut store = BTreeMap::new();
    let mut heap = Heap::new();
    let mut section = "";
    let mut i = 0;
    while i < words.len() {
        let w = words[i].as_str();
        i += 1;
        match w {
            "universe" => {
                if universe.is_some() {
                    return Err(bad("universe declared twice"));
                }
                section = "universe";
                let first = words.get(i).ok_or_else(|| bad("missing universe size"))?;
                i += 1;
                if first == "{" {
                    let mut set = BTreeSet::new();
                    loop {
                        let item = words.get(i).ok_or_else(|| bad("unterminated universe set"))?;
                        i += 1;
                        if item == "}" {
                            break;
                        }
                        set.insert(loc(item)?);
                    }
                    universe = Some(set);
                } else {
                    universe = Some((0..loc(first)?).collect());
                }
            }
            "store" | "heap" => section = if w == "store" { "store" } else { "heap" },
            _ => match section {
                "store" => {
                    let (v, l) = w
                        .split_once('=')
                        .ok_or_else(|| bad(format!("expected `var=loc`, found `{w}`")))?;
                    if v.is_empty() {
                        return Err(bad(format!("missing variable in `{w}`")));
                    }
                    if store.insert(Var::new(v), loc(l)?).is_some() {
                        return Err(bad(format!("variable {v} stored twice")));
                    }
                }
                "heap" => {
                    let (a, b) = w
                        .split_once("->")
                        .ok_or_else(|| bad(format!("expected `loc->loc`, found `{w}`")))?;
                    let a = loc(a)?;
                    if heap.insert(a, loc(b)?).is_some() {
                        return Err(bad(format!("location {a} allocated twice")));
                    }
                }
                _ => return Err(bad(format!("unexpected `{w}`"))),
            },
        }
    }
    let universe = universe.ok_or_else(|| bad("missing `universe` line"))?;
    SlStructure::new(universe, store, heap)
}

fn write_universe(f: &mut fmt::Formatter<'_>, universe: &BTreeSet<Loc>) -> fmt::Result {
    let contiguous = universe.iter().enumerate().all(|(i, &l)| i == l);
    if contiguous {
        writeln!(f, "universe {}", universe.len())
    } else {
        f.write_str("universe {")?;
        for (i, l) in universe.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        writeln!(f, "}}")
    }
}

fn write_store(f: &mut fmt::Formatter<'_>, store: &BTreeMap<Var, Loc>) -> fmt::Result {
    f.write_str("store")?;
    for (v, l) in store {
        write!(f, " {v}={l}")?;
    }
    writeln!(f)
}

impl fmt::Display for SlStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_universe(f, &self.universe)?;
        write_store(f, &self.store)?;
        f.write_str("heap")?;
        for (a, b) in self.heap.iter() {
            write!(f, " {a}->{b}")?;
        }
        writeln!(f)
    }
}

impl fmt::Display for FoStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_universe(f, &self.universe)?;
        write_store(f, &self.store)?;
        f.write_str("function")?;
        for (a, b) in &self.func {
            write!(f, " {a}->{b}")?;
        }
        writeln!(f)?;
        for (p, set) in &self.preds {
            write!(f, "predicate {p} {{")?;
            for (i, l) in set.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{l}")?;
            }
            writeln!(f, "}}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "universe 3\nstore x=0 y=2\nheap 0->1 1->1\n";
        let s = parse_structure(text).unwrap();
        assert_eq!(s.universe, [0, 1, 2].into());
        assert_eq!(s.heap, Heap::from([(0, 1), (1, 1)]));
        assert_eq!(s.to_string(), text);
    }

    #[test]
    fn whitespace_comments_and_sets() {
        let s = parse_structure("# a comment\nuniverse {0 1 9}  store\n x=9 heap 9->0").unwrap();
        assert_eq!(s.universe, [0, 1, 9].into());
        assert_eq!(s.to_string(), "universe {0 1 9}\nstore x=9\nheap 9->0\n");
        assert_eq!(parse_structure(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_structure("store x=0").is_err());
        assert!(parse_structure("universe 2 heap 0->2").is_err());
        assert!(parse_structure("universe 2 heap 0->1 0->0").is_err());
        assert!(parse_structure("universe 2 heap 0-1").is_err());
        assert!(parse_structure("universe 0").is_err());
        assert!(parse_structure("universe 2 bogus").is_err());
    }
}
