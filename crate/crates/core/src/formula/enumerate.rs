use std::collections::{BTreeSet, HashMap};

use super::syntax::{Formula, Term};
use super::vocab::{SymbolKind, Vocabulary};

/// Bounds for exhaustive formula generation.
#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub vocab: Vocabulary,
    /// Variables that may occur free.
    pub free_vars: Vec<String>,
    /// Largest formula size (connective and quantifier nodes plus atoms).
    pub max_size: usize,
    /// Nesting depth of function applications inside terms.
    pub term_depth: usize,
}

impl EnumConfig {
    pub fn new(vocab: Vocabulary, free_vars: &[&str], max_size: usize) -> Self {
        EnumConfig { vocab, free_vars: free_vars.iter().map(|s| s.to_string()).collect(), max_size, term_depth: 1 }
    }
}

/// All formulas up to `max_size`, smallest first, in a fixed order.
/// Quantifiers bind `v0`, `v1`, ... by nesting depth.
pub fn enumerate_formulas(cfg: &EnumConfig) -> impl Iterator<Item = Formula> {
    let mut gen = Generator { cfg: cfg.clone(), memo: HashMap::new() };
    (1..=cfg.max_size).flat_map(move |s| gen.of_size(s, 0))
}

/// Closed formulas only.
pub fn enumerate_sentences(cfg: &EnumConfig) -> impl Iterator<Item = Formula> {
    enumerate_formulas(cfg).filter(Formula::is_sentence)
}

fn bound_var(i: usize) -> String {
    format!("v{i}")
}

struct Generator {
    cfg: EnumConfig,
    memo: HashMap<(usize, usize), Vec<Formula>>,
}

impl Generator {
    fn terms(&self, nbound: usize) -> Vec<Term> {
        let mut layer: BTreeSet<Term> = self
            .cfg
            .free_vars
            .iter()
            .cloned()
            .chain((0..nbound).map(bound_var))
            .map(Term::Var)
            .chain(self.cfg.vocab.constants().map(|c| Term::constant(c.name.clone())))
            .collect();
        for _ in 0..self.cfg.term_depth {
            let prev: Vec<Term> = layer.iter().cloned().collect();
            for f in self.cfg.vocab.functions() {
                for args in tuples(&prev, f.arity) {
                    layer.insert(Term::app(f.name.clone(), args));
                }
            }
        }
        let mut out: Vec<Term> = layer.into_iter().collect();
        out.sort_by_key(|t| (t.size(), t.clone()));
        out
    }

    fn atoms(&self, nbound: usize) -> Vec<Formula> {
        let terms = self.terms(nbound);
        let mut out = Vec::new();
        for r in self.cfg.vocab.symbols().iter().filter(|s| s.kind == SymbolKind::Relation) {
            for args in tuples(&terms, r.arity) {
                out.push(Formula::Atom(r.name.clone(), args));
            }
        }
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[i..] {
                out.push(Formula::Eq(a.clone(), b.clone()));
            }
        }
        out
    }

    fn of_size(&mut self, size: usize, nbound: usize) -> Vec<Formula> {
        if let Some(v) = self.memo.get(&(size, nbound)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            out = self.atoms(nbound);
        } else {
            for f in self.of_size(size - 1, nbound) {
                out.push(Formula::not(f));
            }
            for left in 1..size - 1 {
                let right = size - 1 - left;
                let ls = self.of_size(left, nbound);
                let rs = self.of_size(right, nbound);
                for a in &ls {
                    for b in &rs {
                        out.push(Formula::and2(a.clone(), b.clone()));
                        out.push(Formula::or2(a.clone(), b.clone()));
                        out.push(Formula::implies(a.clone(), b.clone()));
                        out.push(Formula::iff(a.clone(), b.clone()));
                    }
                }
            }
            let v = bound_var(nbound);
            for body in self.of_size(size - 1, nbound + 1) {
                // Vacuous quantifiers add nothing new.
                if body.free_vars().contains(&v) {
                    out.push(Formula::forall(v.clone(), body.clone()));
                    out.push(Formula::exists(v.clone(), body));
                }
            }
        }
        self.memo.insert((size, nbound), out.clone());
        out
    }
}

fn tuples(items: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                items.iter().map(move |t| {
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    p
                })
            })
            .collect();
    }
    out
}
