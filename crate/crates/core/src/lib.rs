//! Saturation-based superposition prover with subsumption demodulation.
//!
//! Layers, bottom up: [`term`] (terms, substitutions, unification,
//! matching), [`ordering`] (KBO and its literal/clause extensions),
//! [`clause`] (literals, clauses, selection), [`calculus`] (generating
//! inferences), [`matching`] (multi-literal matching), [`index`] (literal
//! keyed clause indexes), [`simplify`] (demodulation, subsumption and
//! subsumption demodulation), [`saturation`] (the given-clause loop) and
//! [`frontend`] (TPTP input, SZS output, command line).

pub mod calculus;
pub mod clause;
pub mod frontend;
pub mod index;
pub mod matching;
pub mod ordering;
pub mod saturation;
pub mod simplify;
pub mod term;

pub use clause::{Atom, Clause, ClauseId, Inference, Literal, LiteralPos, Rule};
pub use ordering::{compare_clauses, compare_literals, compare_terms, OrderResult};
pub use saturation::{saturate, Proof, ProverConfig, SaturationResult};
pub use term::{Signature, Substitution, Sym, Term, Var};
