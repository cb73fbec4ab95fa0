//! φ-chains on finite carriers, the simply-infinite check, and the
//! recursion map between presented simply infinite systems.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::SymbolKind;
use crate::structures::{FiniteStructure, Fuel, Presentation, StructureError};
use crate::DEFAULT_STEP_BUDGET;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DedekindError {
    #[error("φ is not total on the carrier: φ({0}) is outside it")]
    NotTotal(usize),
    #[error("base {0} is outside the carrier")]
    BaseOutside(usize),
    #[error("structure needs one unary function and one constant: {0}")]
    Shape(String),
    #[error(transparent)]
    Presentation(#[from] StructureError),
}

/// Carrier `0..phi.len()`, a total map on it, and a base element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainProblem {
    phi: Vec<usize>,
    base: usize,
}

impl ChainProblem {
    pub fn new(phi: Vec<usize>, base: usize) -> Result<Self, DedekindError> {
        if let Some(x) = phi.iter().position(|&y| y >= phi.len()) {
            return Err(DedekindError::NotTotal(x));
        }
        if base >= phi.len() {
            return Err(DedekindError::BaseOutside(base));
        }
        Ok(ChainProblem { phi, base })
    }

    /// Reads the successor and zero of a structure with exactly one unary
    /// function and one constant (`S` and `0` when present).
    pub fn from_structure(s: &FiniteStructure) -> Result<Self, DedekindError> {
        let v = s.vocab();
        let pick = |kind: SymbolKind, arity: usize, preferred: &str| -> Result<usize, DedekindError> {
            if let Some((k, i)) = v.kind_index(preferred) {
                if k == kind && v.get(preferred).unwrap().arity == arity {
                    return Ok(i);
                }
            }
            let matching: Vec<usize> = v
                .symbols()
                .iter()
                .filter(|sym| sym.kind == kind && sym.arity == arity)
                .map(|sym| v.kind_index(&sym.name).unwrap().1)
                .collect();
            match matching.as_slice() {
                [i] => Ok(*i),
                _ => Err(DedekindError::Shape(v.to_string())),
            }
        };
        let f = pick(SymbolKind::Function, 1, "S")?;
        let c = pick(SymbolKind::Constant, 0, "0")?;
        ChainProblem::new(s.fun_tables()[f].values.clone(), s.constant(c))
    }

    pub fn size(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn with_base(&self, base: usize) -> Result<Self, DedekindError> {
        ChainProblem::new(self.phi.clone(), base)
    }

    /// Whether `set` (as a bit mask over the carrier) is closed under φ.
    pub fn is_chain(&self, set: &[bool]) -> bool {
        (0..self.size()).all(|x| !set[x] || set[self.phi[x]])
    }
}

/// The least φ-chain containing the base: the orbit of the base.
pub fn chain_closure(p: &ChainProblem) -> BTreeSet<usize> {
    let mut seen = vec![false; p.size()];
    let mut x = p.base;
    while !seen[x] {
        seen[x] = true;
        x = p.phi[x];
    }
    (0..p.size()).filter(|&i| seen[i]).collect()
}

/// Intersection of every φ-closed subset containing the base, by listing
/// all subsets. Only for small carriers.
pub fn chain_closure_bruteforce(p: &ChainProblem) -> BTreeSet<usize> {
    let n = p.size();
    assert!(n <= 20, "brute force is limited to 20 elements");
    let mut inter = vec![true; n];
    let mut set = vec![false; n];
    for mask in 0u32..(1 << n) {
        if mask & (1 << p.base) == 0 {
            continue;
        }
        for (i, slot) in set.iter_mut().enumerate() {
            *slot = mask & (1 << i) != 0;
        }
        if p.is_chain(&set) {
            for i in 0..n {
                inter[i] &= set[i];
            }
        }
    }
    (0..n).filter(|&i| inter[i]).collect()
}

/// A clause of the simply-infinite definition that fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum Failure {
    /// `φ(x) = φ(y)` with `x ≠ y`.
    Injectivity { x: usize, y: usize },
    /// `φ(x)` is the base.
    BaseInRange { x: usize },
    /// Carrier element outside the chain closure of the base.
    ChainMinimality { outside: usize },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Injectivity { x, y } => write!(f, "injectivity: φ({x}) = φ({y})"),
            Failure::BaseInRange { x } => write!(f, "base in range: φ({x}) is the base"),
            Failure::ChainMinimality { outside } => write!(f, "chain minimality: {outside} is not in the closure of the base"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplyInfiniteVerdict {
    pub simply_infinite: bool,
    /// Failing clauses in the order injectivity, base-in-range, minimality;
    /// the first one is the cited reason.
    pub failures: Vec<Failure>,
}

impl SimplyInfiniteVerdict {
    pub fn reason(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

pub fn check_problem(p: &ChainProblem) -> SimplyInfiniteVerdict {
    let mut failures = Vec::new();
    let mut first_preimage: HashMap<usize, usize> = HashMap::new();
    for x in 0..p.size() {
        if let Some(&y) = first_preimage.get(&p.phi[x]) {
            failures.push(Failure::Injectivity { x: y, y: x });
            break;
        }
        first_preimage.insert(p.phi[x], x);
    }
    if let Some(x) = (0..p.size()).find(|&x| p.phi[x] == p.base) {
        failures.push(Failure::BaseInRange { x });
    }
    let closure = chain_closure(p);
    if let Some(outside) = (0..p.size()).find(|x| !closure.contains(x)) {
        failures.push(Failure::ChainMinimality { outside });
    }
    SimplyInfiniteVerdict { simply_infinite: failures.is_empty(), failures }
}

pub fn check_simply_infinite(s: &FiniteStructure) -> Result<SimplyInfiniteVerdict, DedekindError> {
    Ok(check_problem(&ChainProblem::from_structure(s)?))
}

/// Map from the first `bound + 1` successor iterates of one system's base
/// to the other's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialIso {
    pub source: String,
    pub target: String,
    pub pairs: Vec<(u64, u64)>,
    pub bound: usize,
}

impl PartialIso {
    pub fn image(&self, x: u64) -> Option<u64> {
        self.pairs.iter().find(|p| p.0 == x).map(|p| p.1)
    }
}

fn fuel(budget: u64) -> Fuel {
    Fuel::new(budget)
}

/// `eᵢ ↦ e′ᵢ` for `i ≤ n`, built by iterating both successors. Each
/// presentation operation gets `budget` steps.
pub fn build_recursion_iso(
    p1: &dyn Presentation,
    p2: &dyn Presentation,
    n: usize,
    budget: u64,
) -> Result<PartialIso, DedekindError> {
    let mut x = p1.base(&mut fuel(budget))?;
    let mut y = p2.base(&mut fuel(budget))?;
    let mut pairs = Vec::with_capacity(n + 1);
    pairs.push((x, y));
    for _ in 0..n {
        x = p1.succ(x, &mut fuel(budget))?;
        y = p2.succ(y, &mut fuel(budget))?;
        pairs.push((x, y));
    }
    Ok(PartialIso { source: p1.id(), target: p2.id(), pairs, bound: n })
}

pub fn build_recursion_iso_default(p1: &dyn Presentation, p2: &dyn Presentation, n: usize) -> Result<PartialIso, DedekindError> {
    build_recursion_iso(p1, p2, n, DEFAULT_STEP_BUDGET)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoFailure {
    pub clause: &'static str,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub ok: bool,
    pub failures: Vec<IsoFailure>,
}

impl IsoReport {
    pub fn first(&self) -> Option<&IsoFailure> {
        self.failures.first()
    }
}

/// Re-checks base, domain, commutation with successor, injectivity and
/// surjectivity onto the target's first `bound + 1` iterates.
pub fn verify_partial_iso(
    m: &PartialIso,
    p1: &dyn Presentation,
    p2: &dyn Presentation,
    budget: u64,
) -> Result<IsoReport, DedekindError> {
    let mut failures = Vec::new();
    let mut fail = |clause, index| failures.push(IsoFailure { clause, index });
    if m.pairs.len() != m.bound + 1 {
        fail("length", m.pairs.len().min(m.bound + 1));
    }
    let b1 = p1.base(&mut fuel(budget))?;
    let b2 = p2.base(&mut fuel(budget))?;
    let mut domain = b1;
    let mut target = b2;
    let mut targets = Vec::with_capacity(m.bound + 1);
    for i in 0..=m.bound {
        if i > 0 {
            domain = p1.succ(domain, &mut fuel(budget))?;
            target = p2.succ(target, &mut fuel(budget))?;
        }
        targets.push(target);
        let Some(&(x, y)) = m.pairs.get(i) else { continue };
        if x != domain {
            fail("domain", i);
        }
        if i == 0 {
            if y != b2 {
                fail("base", 0);
            }
        } else {
            let prev = m.pairs[i - 1].1;
            if p2.succ(prev, &mut fuel(budget))? != y {
                fail("commutation", i);
            }
        }
        if !p2.contains(y) {
            fail("target-carrier", i);
        }
    }
    let mut seen = HashMap::new();
    for (i, &(_, y)) in m.pairs.iter().enumerate() {
        if seen.insert(y, i).is_some() {
            fail("injectivity", i);
            break;
        }
    }
    if let Some(i) = targets.iter().position(|t| !seen.contains_key(t)) {
        fail("surjectivity", i);
    }
    Ok(IsoReport { ok: failures.is_empty(), failures })
}
