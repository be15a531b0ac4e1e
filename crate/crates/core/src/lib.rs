pub mod contraction;
pub mod error;
pub mod reductions;
pub mod semantics;
pub mod solver;
pub mod structure;
pub mod syntax;
pub mod testform;

pub use error::{Error, ParseError, Result};
