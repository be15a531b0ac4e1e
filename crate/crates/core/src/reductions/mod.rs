//! Translations between SL and FO, the infinite-to-finite reduction, and
//! prover output formats.

mod emit;
mod fo_to_sl;
mod lambda;
mod sl_to_fo;

pub use emit::{emit_fo, Format};
pub use fo_to_sl::{fo_to_sl, Mode};
pub use lambda::{infinite_to_finite, lambda_formula, lambda_parts};
pub use sl_to_fo::sl_to_fo;
