//! Bounded finite model search with three-valued evaluation over partial
//! tables, UNSAT certification up to a size bound, and the intolerance probe
//! on two relativized copies of a theory.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::formula::{
    copy_name, fresh_name, relativize, rename_vocab, Axiom, Formula, FormulaError, Symbol, SymbolKind, Term, Theory,
    Vocabulary,
};
use crate::mocheck::compile::{CForm, CTerm};
use crate::mocheck::{eval_fo, Compiled, MocheckError};
use crate::structures::{tuple_at, FiniteStructure, FunTable, RelTable};

pub const DEFAULT_MAX_NODES: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FinderError {
    #[error("axiom '{0}' is not first-order")]
    SecondOrder(String),
    #[error("axiom '{0}' has free variables")]
    NotSentence(String),
    #[error("bad search problem: {0}")]
    BadProblem(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Mocheck(#[from] MocheckError),
    #[error("internal: model fails axiom '{0}' on re-check")]
    Unsound(String),
}

/// Axioms to satisfy, sizes to try and per-size budgets.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub vocab: Vocabulary,
    pub axioms: Vec<Axiom>,
    pub min_size: usize,
    pub max_size: usize,
    /// Search nodes allowed at each size.
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
    /// Sizes searched at once; results do not depend on it.
    pub threads: usize,
}

impl SearchProblem {
    pub fn new(vocab: Vocabulary, axioms: Vec<Axiom>) -> Result<Self, FinderError> {
        for a in &axioms {
            if !a.formula.is_first_order() {
                return Err(FinderError::SecondOrder(a.name.clone()));
            }
            if !a.formula.is_sentence() {
                return Err(FinderError::NotSentence(a.name.clone()));
            }
        }
        Ok(SearchProblem { vocab, axioms, min_size: 1, max_size: 8, max_nodes: DEFAULT_MAX_NODES, time_limit: None, threads: 1 })
    }

    /// Axioms and schema instances up to `schema_bound`.
    pub fn from_theory(t: &Theory, schema_bound: usize) -> Result<Self, FinderError> {
        Self::new(t.vocab.clone(), t.expand(schema_bound))
    }

    pub fn sizes(mut self, min: usize, max: usize) -> Self {
        self.min_size = min;
        self.max_size = max;
        self
    }

    pub fn nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn time_limit(mut self, limit: Option<Duration>) -> Self {
        self.time_limit = limit;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    fn check(&self) -> Result<(), FinderError> {
        if self.min_size == 0 || self.min_size > self.max_size {
            return Err(FinderError::BadProblem(format!("sizes {}..{}", self.min_size, self.max_size)));
        }
        if self.max_nodes == 0 || self.threads == 0 {
            return Err(FinderError::BadProblem("budgets must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeStatus {
    Sat,
    Unsat,
    NodeBudget,
    TimeBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeStats {
    pub size: usize,
    pub nodes: u64,
    pub status: SizeStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Model { size: usize, structure: FiniteStructure, certificate: Vec<AxiomCheck> },
    /// No model at any size in the range.
    Exhausted { through: usize },
    /// Some size ran out of budget and no model was found elsewhere.
    Inconclusive { size: usize, reason: SizeStatus },
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub outcome: Outcome,
    pub stats: Vec<SizeStats>,
}

impl SearchReport {
    pub fn model(&self) -> Option<&FiniteStructure> {
        match &self.outcome {
            Outcome::Model { structure, .. } => Some(structure),
            _ => None,
        }
    }

    pub fn total_nodes(&self) -> u64 {
        self.stats.iter().map(|s| s.nodes).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let outcome = match &self.outcome {
            Outcome::Model { size, structure, certificate } => serde_json::json!({
                "result": "model",
                "size": size,
                "model": serde_json::to_value(structure.to_json_value()).expect("serializable"),
                "certificate": certificate,
            }),
            Outcome::Exhausted { through } => serde_json::json!({ "result": "exhausted", "through": through }),
            Outcome::Inconclusive { size, reason } => {
                serde_json::json!({ "result": "inconclusive", "size": size, "reason": reason })
            }
        };
        serde_json::json!({ "outcome": outcome, "stats": self.stats })
    }
}

/// Size-ascending search; the first size with a model wins.
pub fn find_model(p: &SearchProblem) -> Result<SearchReport, FinderError> {
    p.check()?;
    let deadline = p.time_limit.map(|d| Instant::now() + d);
    let sizes: Vec<usize> = (p.min_size..=p.max_size).collect();
    let mut stats = Vec::new();
    let mut first_inconclusive = None;
    for chunk in sizes.chunks(p.threads) {
        let results: Vec<Result<SizeResult, FinderError>> = if chunk.len() == 1 {
            vec![search_size(p, chunk[0], deadline)]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = chunk.iter().map(|&n| scope.spawn(move || search_size(p, n, deadline))).collect();
                handles.into_iter().map(|h| h.join().expect("search thread panicked")).collect()
            })
        };
        for r in results {
            let r = r?;
            stats.push(SizeStats { size: r.size, nodes: r.nodes, status: r.status });
            match r.status {
                SizeStatus::Sat => {
                    let structure = r.model.expect("sat carries a model");
                    let certificate = certify(&structure, &p.axioms)?;
                    return Ok(SearchReport { outcome: Outcome::Model { size: r.size, structure, certificate }, stats });
                }
                SizeStatus::Unsat => {}
                reason => {
                    first_inconclusive.get_or_insert((r.size, reason));
                }
            }
        }
    }
    let outcome = match first_inconclusive {
        Some((size, reason)) => Outcome::Inconclusive { size, reason },
        None => Outcome::Exhausted { through: p.max_size },
    };
    Ok(SearchReport { outcome, stats })
}

fn certify(s: &FiniteStructure, axioms: &[Axiom]) -> Result<Vec<AxiomCheck>, FinderError> {
    let mut out = Vec::new();
    for a in axioms {
        let holds = eval_fo(s, &a.formula)?.value;
        if !holds {
            return Err(FinderError::Unsound(a.name.clone()));
        }
        out.push(AxiomCheck { axiom: a.name.clone(), holds });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum UnsatVerdict {
    Unsat { through: usize },
    Sat { size: usize, structure: FiniteStructure },
    Inconclusive { size: usize, reason: SizeStatus },
}

#[derive(Clone, Debug)]
pub struct UnsatReport {
    pub verdict: UnsatVerdict,
    pub stats: Vec<SizeStats>,
}

impl UnsatReport {
    pub fn is_unsat(&self) -> bool {
        matches!(self.verdict, UnsatVerdict::Unsat { .. })
    }

    /// UNSAT through `n` must mean every smaller size was searched out.
    pub fn consistent(&self) -> bool {
        match self.verdict {
            UnsatVerdict::Unsat { through } => {
                self.stats.iter().all(|s| s.status == SizeStatus::Unsat) && self.stats.last().map(|s| s.size) == Some(through)
            }
            _ => true,
        }
    }
}

/// No model at any size up to `max_size`; budget exhaustion is reported as
/// inconclusive, never as UNSAT.
pub fn certify_unsat_upto(p: &SearchProblem, max_size: usize) -> Result<UnsatReport, FinderError> {
    let q = SearchProblem { max_size, ..p.clone() };
    let r = find_model(&q)?;
    let verdict = match r.outcome {
        Outcome::Model { size, structure, .. } => UnsatVerdict::Sat { size, structure },
        Outcome::Exhausted { through } => UnsatVerdict::Unsat { through },
        Outcome::Inconclusive { size, reason } => UnsatVerdict::Inconclusive { size, reason },
    };
    Ok(UnsatReport { verdict, stats: r.stats })
}

/// `{T^(X₁), T^(X₂), φ^(X₁), ¬φ^(X₂)}` with the `k`-th copy of the
/// vocabulary relativized to `X_k`, each `X_k` nonempty and closed under the
/// copied constants and functions.
pub fn joint_theory(t: &Theory, phi: &Formula, schema_bound: usize) -> Result<(Vocabulary, Vec<Axiom>), FinderError> {
    if !phi.is_first_order() {
        return Err(FinderError::SecondOrder("phi".into()));
    }
    if !phi.is_sentence() {
        return Err(FinderError::NotSentence("phi".into()));
    }
    let base = t.expand(schema_bound);
    let mut vocab = Vocabulary::new();
    let mut axioms = Vec::new();
    for k in [1, 2] {
        let map: std::collections::BTreeMap<String, String> =
            t.vocab.symbols().iter().map(|s| (s.name.clone(), copy_name(&s.name, k))).collect();
        let copy_vocab = t.vocab.rename(&map)?;
        let taken: BTreeSet<String> =
            t.vocab.symbols().iter().chain(copy_vocab.symbols()).map(|s| s.name.clone()).chain(vocab.symbols().iter().map(|s| s.name.clone())).collect();
        let x = fresh_name(&format!("X{k}"), &taken);
        vocab = vocab.union(&Vocabulary::new().with(Symbol::relation(x.clone(), 1))?)?.union(&copy_vocab)?;
        axioms.push(Axiom { name: format!("{x}-nonempty"), formula: Formula::exists("x", Formula::atom1(&x, Term::var("x"))) });
        for s in copy_vocab.symbols() {
            match s.kind {
                SymbolKind::Constant => axioms.push(Axiom {
                    name: format!("{x}-contains-{}", s.name),
                    formula: Formula::atom1(&x, Term::constant(s.name.clone())),
                }),
                SymbolKind::Function => {
                    let vars: Vec<String> = (0..s.arity).map(|i| format!("x{i}")).collect();
                    let args: Vec<Term> = vars.iter().map(|v| Term::var(v.clone())).collect();
                    let pre = Formula::conj(args.iter().map(|a| Formula::atom1(&x, a.clone())).collect());
                    let post = Formula::atom1(&x, Term::app(s.name.clone(), args));
                    axioms.push(Axiom {
                        name: format!("{x}-closed-{}", s.name),
                        formula: Formula::forall_all(vars, Formula::implies(pre, post)),
                    });
                }
                SymbolKind::Relation => {}
            }
        }
        for a in &base {
            let f = rename_vocab(&a.formula, &t.vocab, &map)?;
            axioms.push(Axiom { name: format!("{}^{x}", a.name), formula: relativize(&f, &x, false)? });
        }
        let f = relativize(&rename_vocab(phi, &t.vocab, &map)?, &x, false)?;
        axioms.push(if k == 1 {
            Axiom { name: format!("phi^{x}"), formula: f }
        } else {
            Axiom { name: format!("not-phi^{x}"), formula: Formula::not(f) }
        });
    }
    Ok((vocab, axioms))
}

#[derive(Clone, Debug)]
pub enum ProbeVerdict {
    /// No model of the joint theory up to this size.
    Intolerant { through: usize },
    /// A model where the copies disagree on φ.
    Tolerant { size: usize, structure: FiniteStructure },
    Inconclusive { size: usize, reason: SizeStatus },
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub axioms: Vec<String>,
    pub verdict: ProbeVerdict,
    pub stats: Vec<SizeStats>,
}

/// Searches the joint theory of [`joint_theory`] up to `max_size`.
pub fn intolerance_probe(
    t: &Theory,
    phi: &Formula,
    max_size: usize,
    max_nodes: u64,
    threads: usize,
) -> Result<ProbeReport, FinderError> {
    let (vocab, axioms) = joint_theory(t, phi, 0)?;
    let names = axioms.iter().map(|a| a.name.clone()).collect();
    let p = SearchProblem::new(vocab, axioms)?.sizes(1, max_size).nodes(max_nodes).threads(threads);
    let r = certify_unsat_upto(&p, max_size)?;
    let verdict = match r.verdict {
        UnsatVerdict::Unsat { through } => ProbeVerdict::Intolerant { through },
        UnsatVerdict::Sat { size, structure } => ProbeVerdict::Tolerant { size, structure },
        UnsatVerdict::Inconclusive { size, reason } => ProbeVerdict::Inconclusive { size, reason },
    };
    Ok(ProbeReport { axioms: names, verdict, stats: r.stats })
}

struct SizeResult {
    size: usize,
    nodes: u64,
    status: SizeStatus,
    model: Option<FiniteStructure>,
}

fn search_size(p: &SearchProblem, n: usize, deadline: Option<Instant>) -> Result<SizeResult, FinderError> {
    let blank = FiniteStructure::new(p.vocab.clone(), n).map_err(|e| FinderError::BadProblem(e.to_string()))?;
    let mut forms = Vec::new();
    let mut slots = 0;
    for a in &p.axioms {
        let c = Compiled::new(&blank, &a.formula, &[], false)?;
        slots = slots.max(c.fo_slots);
        forms.push(c.form);
    }
    let rel_arity: Vec<usize> = blank.rel_tables().iter().map(|t| t.arity).collect();
    let fun_arity: Vec<usize> = blank.fun_tables().iter().map(|t| t.arity).collect();
    let mut st = State {
        n,
        rels: rel_arity.iter().map(|&a| vec![UNSET_REL; n.pow(a as u32)]).collect(),
        funs: fun_arity.iter().map(|&a| vec![UNSET; n.pow(a as u32)]).collect(),
        consts: vec![UNSET; blank.const_values().len()],
        rel_arity,
        fun_arity,
        mention: vec![0; n],
        env: vec![0; slots],
        pending: None,
        nodes: 0,
        max_nodes: p.max_nodes,
        deadline,
    };
    let mut settled = vec![false; forms.len()];
    let status = match st.dfs(&forms, &mut settled) {
        Ok(true) => SizeStatus::Sat,
        Ok(false) => SizeStatus::Unsat,
        Err(s) => s,
    };
    let model = (status == SizeStatus::Sat).then(|| st.to_structure(&p.vocab));
    Ok(SizeResult { size: n, nodes: st.nodes, status, model })
}

const UNSET: u32 = u32::MAX;
const UNSET_REL: i8 = -1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum K {
    F,
    U,
    T,
}

impl K {
    fn of(b: bool) -> K {
        if b {
            K::T
        } else {
            K::F
        }
    }

    fn not(self) -> K {
        match self {
            K::F => K::T,
            K::U => K::U,
            K::T => K::F,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Cell {
    Rel(usize, usize),
    Fun(usize, usize),
    Const(usize),
}

struct State {
    n: usize,
    rels: Vec<Vec<i8>>,
    funs: Vec<Vec<u32>>,
    consts: Vec<u32>,
    rel_arity: Vec<usize>,
    fun_arity: Vec<usize>,
    /// How many assigned cells mention each element.
    mention: Vec<u32>,
    env: Vec<usize>,
    /// First unassigned cell met by the current evaluation.
    pending: Option<Cell>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
}

impl State {
    fn term(&mut self, t: &CTerm) -> Option<usize> {
        match t {
            CTerm::Var(i) => Some(self.env[*i]),
            CTerm::Const(c) => {
                let v = self.consts[*c];
                if v == UNSET {
                    self.pending.get_or_insert(Cell::Const(*c));
                    None
                } else {
                    Some(v as usize)
                }
            }
            CTerm::Fun(f, args) => {
                let mut idx = 0;
                let mut known = true;
                for a in args {
                    match self.term(a) {
                        Some(v) => idx = idx * self.n + v,
                        None => known = false,
                    }
                }
                if !known {
                    return None;
                }
                let v = self.funs[*f][idx];
                if v == UNSET {
                    self.pending.get_or_insert(Cell::Fun(*f, idx));
                    None
                } else {
                    Some(v as usize)
                }
            }
            CTerm::SoFun(..) => unreachable!("first-order problems only"),
        }
    }

    fn eval(&mut self, phi: &CForm) -> K {
        match phi {
            CForm::True => K::T,
            CForm::False => K::F,
            CForm::Rel(r, args) => {
                let mut idx = 0;
                let mut known = true;
                for a in args {
                    match self.term(a) {
                        Some(v) => idx = idx * self.n + v,
                        None => known = false,
                    }
                }
                if !known {
                    return K::U;
                }
                match self.rels[*r][idx] {
                    UNSET_REL => {
                        self.pending.get_or_insert(Cell::Rel(*r, idx));
                        K::U
                    }
                    b => K::of(b == 1),
                }
            }
            CForm::SoRel(..) | CForm::Quant2 { .. } => unreachable!("first-order problems only"),
            CForm::Eq(a, b) => match (self.term(a), self.term(b)) {
                (Some(x), Some(y)) => K::of(x == y),
                _ => K::U,
            },
            CForm::Not(g) => self.eval(g).not(),
            CForm::And(gs) => {
                let mut acc = K::T;
                for g in gs {
                    acc = acc.min(self.eval(g));
                    if acc == K::F {
                        break;
                    }
                }
                acc
            }
            CForm::Or(gs) => {
                let mut acc = K::F;
                for g in gs {
                    acc = acc.max(self.eval(g));
                    if acc == K::T {
                        break;
                    }
                }
                acc
            }
            CForm::Implies(a, b) => {
                let l = self.eval(a).not();
                if l == K::T {
                    return K::T;
                }
                l.max(self.eval(b))
            }
            CForm::Iff(a, b) => {
                let (x, y) = (self.eval(a), self.eval(b));
                if x == K::U || y == K::U {
                    K::U
                } else {
                    K::of(x == y)
                }
            }
            CForm::Quant { exists, slot, body, .. } => {
                let (stop, mut acc) = if *exists { (K::T, K::F) } else { (K::F, K::T) };
                for e in 0..self.n {
                    self.env[*slot] = e;
                    let v = self.eval(body);
                    acc = if *exists { acc.max(v) } else { acc.min(v) };
                    if acc == stop {
                        break;
                    }
                }
                acc
            }
        }
    }

    fn args_of(&self, cell: Cell) -> Vec<usize> {
        match cell {
            Cell::Rel(r, idx) => tuple_at(self.n, self.rel_arity[r], idx),
            Cell::Fun(f, idx) => tuple_at(self.n, self.fun_arity[f], idx),
            Cell::Const(_) => Vec::new(),
        }
    }

    /// Values to try: `false, true` for relations; for functions and
    /// constants every mentioned element plus the least unmentioned one.
    fn candidates(&self, cell: Cell, args: &[usize]) -> Vec<u32> {
        if let Cell::Rel(..) = cell {
            return vec![0, 1];
        }
        let mut out = Vec::new();
        let mut fresh_used = false;
        for e in 0..self.n {
            if self.mention[e] > 0 || args.contains(&e) {
                out.push(e as u32);
            } else if !fresh_used {
                fresh_used = true;
                out.push(e as u32);
            }
        }
        out
    }

    fn set(&mut self, cell: Cell, v: u32) {
        match cell {
            Cell::Rel(r, idx) => self.rels[r][idx] = v as i8,
            Cell::Fun(f, idx) => self.funs[f][idx] = v,
            Cell::Const(c) => self.consts[c] = v,
        }
    }

    fn touch(&mut self, cell: Cell, args: &[usize], v: u32, delta: i32) {
        for &a in args {
            self.mention[a] = (self.mention[a] as i32 + delta) as u32;
        }
        if !matches!(cell, Cell::Rel(..)) {
            let v = v as usize;
            self.mention[v] = (self.mention[v] as i32 + delta) as u32;
        }
    }

    fn dfs(&mut self, forms: &[CForm], settled: &mut [bool]) -> Result<bool, SizeStatus> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(SizeStatus::NodeBudget);
        }
        if self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SizeStatus::TimeBudget);
        }
        let mut newly = Vec::new();
        let mut branch = None;
        for (i, f) in forms.iter().enumerate() {
            if settled[i] {
                continue;
            }
            self.pending = None;
            match self.eval(f) {
                K::F => {
                    newly.iter().for_each(|&j| settled[j] = false);
                    return Ok(false);
                }
                // true under every completion from here on
                K::T => {
                    settled[i] = true;
                    newly.push(i);
                }
                K::U => {
                    if branch.is_none() {
                        branch = self.pending;
                    }
                }
            }
        }
        let Some(cell) = branch else {
            return Ok(true);
        };
        let args = self.args_of(cell);
        for v in self.candidates(cell, &args) {
            self.set(cell, v);
            self.touch(cell, &args, v, 1);
            if self.dfs(forms, settled)? {
                return Ok(true);
            }
            self.touch(cell, &args, v, -1);
        }
        match cell {
            Cell::Rel(r, idx) => self.rels[r][idx] = UNSET_REL,
            _ => self.set(cell, UNSET),
        }
        newly.iter().for_each(|&j| settled[j] = false);
        Ok(false)
    }

    /// Unassigned cells default to false and 0.
    fn to_structure(&self, vocab: &Vocabulary) -> FiniteStructure {
        let rels = self
            .rels
            .iter()
            .zip(&self.rel_arity)
            .map(|(t, &arity)| RelTable { arity, bits: t.iter().map(|&b| b == 1).collect() })
            .collect();
        let funs = self
            .funs
            .iter()
            .zip(&self.fun_arity)
            .map(|(t, &arity)| FunTable { arity, values: t.iter().map(|&v| if v == UNSET { 0 } else { v as usize }).collect() })
            .collect();
        let consts = self.consts.iter().map(|&v| if v == UNSET { 0 } else { v as usize }).collect();
        FiniteStructure::from_tables(vocab.clone(), self.n, rels, funs, consts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{build_theory, parse_formula};
    use crate::mocheck::{audit_theory, Limits};
    use crate::structures::linear_order;
    use std::collections::BTreeMap;

    fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
        kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn loop_model_without_zero_axiom() {
        let t = build_theory("succ-core", &BTreeMap::new()).unwrap();
        let axioms = vec![t.axioms[0].clone()];
        let p = SearchProblem::new(t.vocab.clone(), axioms).unwrap();
        let r = find_model(&p).unwrap();
        let m = r.model().unwrap();
        assert_eq!(m.size(), 1);
        assert_eq!(m.apply_named("S", &[0]).unwrap(), 0);
    }

    #[test]
    fn succ_core_exhausted() {
        let t = build_theory("succ-core", &BTreeMap::new()).unwrap();
        let p = SearchProblem::from_theory(&t, 0).unwrap();
        let r = find_model(&p).unwrap();
        assert!(matches!(r.outcome, Outcome::Exhausted { through: 8 }));
        assert_eq!(r.stats.len(), 8);
    }

    #[test]
    fn linear_order_three() {
        let t = build_theory("linear-order", &BTreeMap::new()).unwrap();
        let p = SearchProblem::from_theory(&t, 0).unwrap().sizes(3, 3);
        let r = find_model(&p).unwrap();
        let m = r.model().unwrap();
        assert!(audit_theory(m, &t, 0, Limits::default()).unwrap().sat);
        assert_eq!(m.size(), 3);
        // some linear order on three points, isomorphic to L3
        let l3 = linear_order(3, "<");
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        assert!(perms.iter().any(|p| l3.permuted(p).rel_tables() == m.rel_tables()));
    }

    #[test]
    fn contradiction_unsat() {
        let v = Vocabulary::new().with(Symbol::relation("P", 1)).unwrap();
        let axioms = vec![
            Axiom { name: "some".into(), formula: parse_formula("(exists x (P x))", &v).unwrap() },
            Axiom { name: "none".into(), formula: parse_formula("(forall x (not (P x)))", &v).unwrap() },
        ];
        let p = SearchProblem::new(v, axioms).unwrap();
        let r = certify_unsat_upto(&p, 8).unwrap();
        assert!(r.is_unsat() && r.consistent());
    }

    #[test]
    fn budget_is_inconclusive() {
        let t = build_theory("succ-core", &BTreeMap::new()).unwrap();
        let p = SearchProblem::from_theory(&t, 0).unwrap().nodes(5);
        let r = certify_unsat_upto(&p, 8).unwrap();
        assert!(matches!(r.verdict, UnsatVerdict::Inconclusive { reason: SizeStatus::NodeBudget, .. }));
    }

    #[test]
    fn rejects_second_order() {
        let t = build_theory("pa2", &BTreeMap::new()).unwrap();
        assert!(matches!(SearchProblem::from_theory(&t, 0), Err(FinderError::SecondOrder(_))));
    }

    #[test]
    fn probes() {
        let t = build_theory("linear-order", &params(&[("rel", "R"), ("size", "2")])).unwrap();
        let phi = parse_formula("(exists x (forall y (or (= x y) (R x y))))", &t.vocab).unwrap();
        let r = intolerance_probe(&t, &phi, 5, DEFAULT_MAX_NODES, 1).unwrap();
        assert!(matches!(r.verdict, ProbeVerdict::Intolerant { through: 5 }), "{:?}", r.stats);
        let c = build_theory("at-least", &params(&[("k", "2")])).unwrap();
        let psi = parse_formula("(exists x (R x x))", &c.vocab).unwrap();
        let r = intolerance_probe(&c, &psi, 5, DEFAULT_MAX_NODES, 1).unwrap();
        assert!(matches!(r.verdict, ProbeVerdict::Tolerant { .. }));
    }
}
