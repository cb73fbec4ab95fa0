//! Finite structures with dense interpretation tables, computably presented
//! successor structures over natural-number codes, and the preset
//! presentations of simply infinite systems.

mod finite;
mod presentation;
mod presented;

use thiserror::Error;

pub use finite::{linear_order, tuple_at, tuple_index, tuple_names, FiniteStructure, FunTable, RelTable};
pub use finite::StructureFile;
pub use presentation::{preset, Fuel, Offset, Presentation, Scaled, Standard, PRESET_IDS};
pub use presented::{Distance, Point, PresentedStructure, SuccKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("malformed structure: {0}")]
    Malformed(String),
    #[error("function '{function}' is not total: no value for ({args})")]
    Totality { function: String, args: String },
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("'{0}' is not in the vocabulary")]
    UnknownSymbol(String),
    #[error("structure I/O: {0}")]
    Io(String),
    #[error("a ℤ-chain count of 0 is not allowed")]
    NoChains,
    #[error("unknown presentation '{0}'")]
    UnknownPresentation(String),
    #[error("step budget of {0} exhausted")]
    Budget(u64),
    #[error("presentation '{0}' has no {1}")]
    Unsupported(String, &'static str),
}
