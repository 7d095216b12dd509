//! Reasoning engine for deontic action logic with normal defaults.
pub mod algebra;
pub mod crosscheck;
pub mod defaults;
pub mod entailment;
pub mod error;
pub mod lindenbaum;
pub mod syntax;

pub use error::{Error, ParseError, Result};
