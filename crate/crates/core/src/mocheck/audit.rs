use serde::Serialize;

use super::{eval_so_full, Limits, MocheckError};
use crate::formula::Theory;
use crate::structures::FiniteStructure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub axiom: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
    pub sat: bool,
}

impl AuditReport {
    pub fn failures(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| !e.verdict)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{} {}", if e.verdict { "ok  " } else { "FAIL" }, e.axiom));
            if let Some(w) = &e.witness {
                out.push_str(&format!("  [{w}]"));
            }
            out.push('\n');
        }
        out.push_str(if self.sat { "SAT\n" } else { "UNSAT\n" });
        out
    }
}

/// Evaluates every axiom, and every schema instance up to `schema_bound`,
/// separately.
pub fn audit_theory(
    s: &FiniteStructure,
    t: &Theory,
    schema_bound: usize,
    limits: Limits,
) -> Result<AuditReport, MocheckError> {
    let mut entries = Vec::new();
    for ax in t.expand(schema_bound) {
        let v = eval_so_full(s, &ax.formula, limits)?;
        entries.push(AuditEntry { axiom: ax.name, verdict: v.value, witness: v.render_witness(s), nodes: v.nodes });
    }
    let sat = entries.iter().all(|e| e.verdict);
    Ok(AuditReport { entries, sat })
}
