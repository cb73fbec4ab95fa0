//! Tarski evaluation of first-order sentences on finite structures,
//! full-semantics second-order evaluation on small ones, and per-axiom
//! theory audits.

mod audit;
pub(crate) mod compile;
mod eval;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, SoKind};
use crate::structures::FiniteStructure;

pub use audit::{audit_theory, AuditEntry, AuditReport};
pub use compile::Compiled;

/// Default cap on candidate relations/functions per SO quantifier.
pub const DEFAULT_MAX_CANDIDATES: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MocheckError {
    #[error("vocabulary mismatch: {0}")]
    Vocab(String),
    #[error("second-order quantifier over '{0}' in a first-order evaluation")]
    NotFirstOrder(String),
    #[error("free variable '{0}' has no value")]
    FreeVariable(String),
    #[error("quantifier over '{var}' ranges over {candidates} candidates, limit is {limit}")]
    LimitExceeded { var: String, candidates: String, limit: u64 },
    #[error("node budget of {0} exhausted")]
    Budget(u64),
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_candidates: u64,
    pub max_nodes: u64,
    /// Extract witnesses along the decisive path.
    pub witness: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_candidates: DEFAULT_MAX_CANDIDATES, max_nodes: u64::MAX, witness: true }
    }
}

/// Value of one quantified variable on the decisive path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Fo(String, usize),
    /// Table indexed like the structure's own tables; relations use 0/1.
    So { name: String, kind: SoKind, arity: usize, table: Vec<usize> },
}

impl Binding {
    pub fn render(&self, s: &FiniteStructure) -> String {
        match self {
            Binding::Fo(x, e) => format!("{x}={}", s.name(*e)),
            Binding::So { name, kind, arity, table } => {
                let n = s.size();
                let tuple = |i: usize| {
                    let args = crate::structures::tuple_names(s, *arity, i);
                    if *arity == 1 {
                        args
                    } else {
                        format!("({args})")
                    }
                };
                let items: Vec<String> = match kind {
                    SoKind::Rel => (0..table.len()).filter(|&i| table[i] != 0).map(tuple).collect(),
                    SoKind::Fun => (0..table.len()).map(|i| format!("{}->{}", tuple(i), s.name(table[i] % n.max(1)))).collect(),
                };
                format!("{name}={{{}}}", items.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub value: bool,
    /// Witnesses when true, counterexamples when false.
    pub witness: Vec<Binding>,
    pub nodes: u64,
}

impl Verdict {
    pub fn render_witness(&self, s: &FiniteStructure) -> Option<String> {
        if self.witness.is_empty() {
            None
        } else {
            Some(self.witness.iter().map(|b| b.render(s)).collect::<Vec<_>>().join(", "))
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} nodes)", self.value, self.nodes)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictJson {
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub nodes: u64,
}

impl VerdictJson {
    pub fn new(v: &Verdict, s: &FiniteStructure) -> Self {
        VerdictJson { verdict: v.value, witness: v.render_witness(s), nodes: v.nodes }
    }
}

/// First-order sentence on a finite structure.
pub fn eval_fo(s: &FiniteStructure, phi: &Formula) -> Result<Verdict, MocheckError> {
    eval_fo_with(s, phi, &[], Limits::default())
}

/// First-order formula under an assignment of its free variables.
pub fn eval_fo_with(
    s: &FiniteStructure,
    phi: &Formula,
    assignment: &[(&str, usize)],
    limits: Limits,
) -> Result<Verdict, MocheckError> {
    let c = Compiled::new(s, phi, &assignment.iter().map(|(x, _)| *x).collect::<Vec<_>>(), false)?;
    c.run(s, &assignment.iter().map(|(_, e)| *e).collect::<Vec<_>>(), limits)
}

/// Full semantics: SO quantifiers range over every relation or function of
/// their arity on the domain.
pub fn eval_so_full(s: &FiniteStructure, phi: &Formula, limits: Limits) -> Result<Verdict, MocheckError> {
    eval_so_with(s, phi, &[], limits)
}

pub fn eval_so_with(
    s: &FiniteStructure,
    phi: &Formula,
    assignment: &[(&str, usize)],
    limits: Limits,
) -> Result<Verdict, MocheckError> {
    let c = Compiled::new(s, phi, &assignment.iter().map(|(x, _)| *x).collect::<Vec<_>>(), true)?;
    c.run(s, &assignment.iter().map(|(_, e)| *e).collect::<Vec<_>>(), limits)
}
