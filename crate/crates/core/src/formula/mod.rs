//! Formula syntax: vocabularies, the FO/SO abstract syntax, the
//! s-expression reader and printer, and the syntactic transforms used to
//! build relativized, renamed and doubled theories.

mod enumerate;
mod parse;
mod schema;
mod sentences;
pub mod sexpr;
mod syntax;
mod theory;
mod transform;
mod vocab;

use thiserror::Error;

pub use enumerate::{enumerate_formulas, enumerate_sentences, EnumConfig};
pub use parse::{check_formula, parse_formula, parse_formula_with, parse_term, ParseOptions, HOLE};
pub use schema::Schema;
pub use sentences::{build_sentence, ia0, SentenceSpec, SENTENCE_IDS};
pub use syntax::{fresh_name, Formula, SoKind, SoVar, Term};
pub use theory::{build_theory, copy_name, Axiom, Theory, THEORY_IDS};
pub use transform::{relativize, rename_vocab};
pub use vocab::{Symbol, SymbolKind, Vocabulary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol '{name}' at byte {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("arity mismatch for '{name}' at byte {pos}: expected {expected}, found {found}")]
    Arity { pos: usize, name: String, expected: usize, found: usize },
    #[error("'{name}' at byte {pos} is a {found}, expected a {expected}")]
    KindMismatch { pos: usize, name: String, expected: String, found: String },
    #[error("bad symbol declaration {0}")]
    BadSymbol(String),
    #[error("symbol '{name}' declared as {existing} and as {new}")]
    SymbolClash { name: String, existing: String, new: String },
    #[error("ill-formed formula: {0}")]
    IllFormed(String),
    #[error("renaming is not injective: {0}")]
    NonInjective(String),
    #[error("relativizing predicate '{0}' is bound or misused in the formula")]
    BadRelativizer(String),
    #[error("symbol '{0}' is not permitted in this schema")]
    ForbiddenSymbol(String),
    #[error("unknown id '{0}'")]
    UnknownId(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("vocabulary mismatch: {0}")]
    VocabMismatch(String),
}

impl FormulaError {
    /// Byte offset for errors that originate in concrete syntax.
    pub fn position(&self) -> Option<usize> {
        match self {
            FormulaError::Syntax { pos, .. }
            | FormulaError::UnknownSymbol { pos, .. }
            | FormulaError::Arity { pos, .. }
            | FormulaError::KindMismatch { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}
