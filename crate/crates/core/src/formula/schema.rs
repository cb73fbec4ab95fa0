use std::collections::BTreeMap;
use std::collections::BTreeSet;

use super::enumerate::{enumerate_formulas, EnumConfig};
use super::parse::{check_formula, check_template, HOLE};
use super::syntax::{fresh_name, Formula, Term};
use super::vocab::Vocabulary;
use super::FormulaError;

/// A first-order axiom schema: a template whose `$psi` atoms are replaced by
/// an instance formula ψ(designated..., parameters...).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub template: Formula,
    pub designated: Vec<String>,
    pub permitted: Vocabulary,
}

impl Schema {
    pub fn new(
        name: impl Into<String>,
        template: Formula,
        designated: Vec<String>,
        permitted: Vocabulary,
    ) -> Result<Schema, FormulaError> {
        check_hole_arity(&template, designated.len())?;
        let s = Schema { name: name.into(), template, designated, permitted };
        if !s.template.free_vars().is_empty() {
            return Err(FormulaError::IllFormed(format!("schema '{}' template has free variables", s.name)));
        }
        Ok(s)
    }

    /// Validates the template against the vocabulary it is evaluated in.
    pub fn check(&self, vocab: &Vocabulary) -> Result<(), FormulaError> {
        check_template(&self.template, vocab)
    }

    /// The instance for ψ, universally closed over ψ's parameters.
    pub fn instantiate(&self, psi: &Formula) -> Result<Formula, FormulaError> {
        if !psi.is_first_order() {
            return Err(FormulaError::IllFormed("schema instances must be first-order".into()));
        }
        if let Some(bad) = psi.free_heads().into_iter().find(|h| !self.permitted.contains(h)) {
            return Err(FormulaError::ForbiddenSymbol(bad));
        }
        check_formula(psi, &self.permitted)?;

        let params: Vec<String> =
            psi.free_vars().into_iter().filter(|v| !self.designated.contains(v)).collect();
        let mut avoid: BTreeSet<String> = self.template.all_names();
        avoid.extend(psi.all_names());
        avoid.extend(self.permitted.symbols().iter().map(|s| s.name.clone()));
        let mut renaming = BTreeMap::new();
        let mut closed_over = Vec::new();
        let template_names = self.template.all_names();
        for p in &params {
            if template_names.contains(p) {
                let fresh = fresh_name(p, &avoid);
                avoid.insert(fresh.clone());
                renaming.insert(p.clone(), Term::Var(fresh.clone()));
                closed_over.push(fresh);
            } else {
                closed_over.push(p.clone());
            }
        }
        let psi = psi.substitute(&renaming);
        let body = fill(&self.template, &psi, &self.designated);
        Ok(Formula::forall_all(closed_over, body))
    }

    /// Instances for every ψ up to `max_size` over the permitted vocabulary,
    /// with one parameter available besides the designated variables.
    pub fn instances(&self, max_size: usize) -> impl Iterator<Item = Formula> + '_ {
        let mut free: Vec<String> = self.designated.clone();
        let mut avoid: BTreeSet<String> = free.iter().cloned().collect();
        avoid.extend(self.permitted.symbols().iter().map(|s| s.name.clone()));
        free.push(fresh_name("p", &avoid));
        let cfg = EnumConfig { vocab: self.permitted.clone(), free_vars: free, max_size, term_depth: 1 };
        enumerate_formulas(&cfg).filter_map(move |psi| self.instantiate(&psi).ok())
    }
}

fn check_hole_arity(t: &Formula, n: usize) -> Result<(), FormulaError> {
    match t {
        Formula::Atom(h, args) if h == HOLE && args.len() != n => Err(FormulaError::IllFormed(format!(
            "hole applied to {} argument(s), schema designates {n}",
            args.len()
        ))),
        _ => t.children().into_iter().try_for_each(|c| check_hole_arity(c, n)),
    }
}

fn fill(t: &Formula, psi: &Formula, designated: &[String]) -> Formula {
    match t {
        Formula::Atom(h, args) if h == HOLE => {
            let map: BTreeMap<String, Term> = designated.iter().cloned().zip(args.iter().cloned()).collect();
            psi.substitute(&map)
        }
        _ => t.map_children(|c| fill(c, psi, designated)),
    }
}
