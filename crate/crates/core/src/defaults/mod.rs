//! Normal defaults over DAL: Reiter extensions with default-proof
//! certificates, and algebraic extensions over the Lindenbaum-Tarski
//! algebra.
//!
//! All functions read the default set from the theory.

mod algebraic;
mod proof;
mod reiter;

pub use algebraic::{
    algebraic_entails, algebraic_extensions, algebraic_extensions_in, algebraic_witness_in,
    basic_defaults, is_fixpoint, is_fixpoint_in, robust_countermodel, robustly_satisfies,
    satisfies_in_algebra, AlgebraicConfig, ExtensionPair, PairDisplay,
};
pub use proof::{
    axiom_name, build_default_proof, check_default_proof, verify_default_proof, DefaultProof,
    Justification, ProofLine, Rejection,
};
pub use reiter::{
    credulous_entails, credulous_witness, generating_sequences, reiter_extensions,
    GeneratingSequence, SyntacticExtension, MAX_DEFAULTS,
};
