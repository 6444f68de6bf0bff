//! A grammar-constrained CCG parsing engine.
//!
//! The engine combines a symbolic CCG grammar (combinatory rules restricted
//! to treebank-observed instances) with externally supplied statistical
//! scores: per-word supertag distributions and per-span category scores. It
//! decodes with a chart-based beam search, extracts labelled
//! predicate-argument dependencies, and evaluates them.

pub mod category;
pub mod chart;
pub mod dependencies;
pub mod derivation;
pub mod error;
pub mod grammar;
pub mod markedup;
pub mod multitag;
pub mod score;
pub mod treebank;

pub use category::{AtomRegistry, Category};
pub use error::{Error, Result};
pub use grammar::GrammarTables;
pub use markedup::{Dependency, MarkedupTable};
