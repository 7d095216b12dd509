//! Concrete and abstract syntax: actions, formulas, defaults and theory files.

mod ast;
mod parse;
mod print;
mod transform;

pub use ast::{
    ActionTerm, BasicDeonticDefault, DefaultRule, Formula, Modality, NormalDefault, Theory,
    Vocabulary, RESERVED,
};
pub use parse::{parse_action, parse_default, parse_formula, parse_theory};
pub use print::{render_action, render_formula};
pub use transform::{desugar_derived, desugar_equiv, desugar_nequiv, is_nnf, is_primitive, to_nnf};
