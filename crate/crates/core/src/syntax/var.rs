use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A variable name. Shared by SL and FO formulae.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        Var(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// Name of a unary predicate symbol in FO formulae.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredSym(Arc<str>);

impl PredSym {
    pub fn new(name: impl AsRef<str>) -> Self {
        PredSym(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The predicate interpreting the heap domain.
    pub fn domain() -> Self {
        PredSym::new(DOMAIN_PREDICATE)
    }
}

/// Name under which the heap-domain predicate is printed and looked up.
pub const DOMAIN_PREDICATE: &str = "d";

impl fmt::Display for PredSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for PredSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Produces variable names that do not clash with a set of reserved ones.
#[derive(Debug, Clone)]
pub struct FreshNames {
    prefix: String,
    next: usize,
    used: BTreeSet<Var>,
}

impl FreshNames {
    pub fn new(prefix: impl Into<String>, used: impl IntoIterator<Item = Var>) -> Self {
        FreshNames {
            prefix: prefix.into(),
            next: 1,
            used: used.into_iter().collect(),
        }
    }

    pub fn reserve(&mut self, v: Var) {
        self.used.insert(v);
    }

    pub fn fresh(&mut self) -> Var {
        loop {
            let candidate = Var::new(format!("{}{}", self.prefix, self.next));
            self.next += 1;
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
    }

    /// A fresh name with a different prefix, sharing the reserved set.
    pub fn fresh_with(&mut self, prefix: &str) -> Var {
        let mut i = 1;
        loop {
            let candidate = Var::new(format!("{prefix}{i}"));
            i += 1;
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
    }
}
