//! Hereditarily finite sets with urelements and their cumulative stages.

mod audit;
mod collapse;
mod set;
mod universe;

pub use audit::{audit_axioms, check_lemma1, check_subdomain, search_lemma1, HfAuditEntry, HfAuditReport, Lemma1Report, SubdomainCheck};
pub use collapse::{mostowski_collapse, random_extensional_digraph, verify_collapse, MembershipDigraph};
pub use set::HFSet;
pub use universe::{
    automorphisms_fixing_urelements, build_universe, lift_urelement_bijection, verify_iso, Lift, Universe,
    DEFAULT_UNIVERSE_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HfError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("stage {stage} would have {size} elements, over the limit {limit}")]
    LimitExceeded { stage: usize, size: String, limit: usize },
    #[error("{0} is not in the universe")]
    NotInUniverse(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("membership graph is ill-founded at node '{0}'")]
    IllFounded(String),
    #[error("nodes '{0}' and '{1}' have the same members")]
    NonExtensional(String, String),
    #[error("urelement node '{0}' has members")]
    UrelementHasMembers(String),
}
