//! Ordinal notation system for ordinals below the Takeuti ordinal, its
//! fundamental sequences, the quotients `T°[k]`, the slow-growing and Hardy
//! hierarchies, and the generalized Goodstein process built on them.

pub mod error;
pub mod checks;
pub mod classical;
pub mod enumerate;
pub mod fundseq;
pub mod goodstein;
pub mod hierarchy;
pub mod inversion;
pub mod parse;
pub mod term;

pub use error::{OrdinalError, Result};
pub use parse::{format_term, parse, parse_strict};
pub use term::{Principal, Term};
