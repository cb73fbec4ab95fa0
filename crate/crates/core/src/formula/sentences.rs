use std::collections::{BTreeMap, BTreeSet};

use super::parse::check_formula;
use super::syntax::{fresh_name, Formula, SoKind, SoVar, Term};
use super::theory::Theory;
use super::transform::{relativize, rename_vocab, so_guard};
use super::vocab::{Symbol, SymbolKind, Vocabulary};
use super::FormulaError;

pub const SENTENCE_IDS: &[&str] = &["iso-so", "iso-phi", "aut-phi", "ia0", "intolerance-disjunction"];

/// Parameters for [`build_sentence`].
#[derive(Clone, Debug)]
pub enum SentenceSpec {
    /// `∃F` bijection from `u` onto `u2` preserving each symbol pair.
    IsoSo { u: String, u2: String, pairs: Vec<(Symbol, Symbol)> },
    /// `phi(x, y)` defines a bijection from `n1` onto `n2` preserving each pair.
    IsoPhi { phi: Formula, x: String, y: String, n1: String, n2: String, pairs: Vec<(Symbol, Symbol)> },
    /// `phi(x, y)` defines a permutation of the domain preserving each pair.
    AutPhi { phi: Formula, x: String, y: String, pairs: Vec<(Symbol, Symbol)> },
    /// Every limit cardinal above ω is singular, over membership `mem`.
    Ia0 { mem: String },
    /// `∀X,E(T^X(E) → φ^X(E)) ∨ ∀X,E(T^X(E) → ¬φ^X(E))`.
    IntoleranceDisjunction { theory: Theory, phi: Formula },
}

/// Vocabulary the sentence is stated over, together with the sentence.
pub fn build_sentence(spec: &SentenceSpec) -> Result<(Formula, Vocabulary), FormulaError> {
    let (f, v) = match spec {
        SentenceSpec::IsoSo { u, u2, pairs } => iso_so(u, u2, pairs)?,
        SentenceSpec::IsoPhi { phi, x, y, n1, n2, pairs } => iso_phi(phi, x, y, Some((n1, n2)), pairs)?,
        SentenceSpec::AutPhi { phi, x, y, pairs } => iso_phi(phi, x, y, None, pairs)?,
        SentenceSpec::Ia0 { mem } => (ia0(mem), Vocabulary::new().with(Symbol::relation(mem.clone(), 2))?),
        SentenceSpec::IntoleranceDisjunction { theory, phi } => (intolerance_disjunction(theory, phi)?, Vocabulary::new()),
    };
    check_formula(&f, &v)?;
    if !f.is_sentence() {
        return Err(FormulaError::IllFormed("built sentence has free variables".into()));
    }
    Ok((f, v))
}

/// Fresh variable names drawn from a shared pool.
struct Fresh {
    used: BTreeSet<String>,
}

impl Fresh {
    fn new(avoid: impl IntoIterator<Item = String>) -> Fresh {
        Fresh { used: avoid.into_iter().collect() }
    }

    fn var(&mut self, base: &str) -> String {
        let v = fresh_name(base, &self.used);
        self.used.insert(v.clone());
        v
    }

    fn vars(&mut self, base: &str, n: usize) -> Vec<String> {
        (0..n).map(|_| self.var(base)).collect()
    }
}

fn tvar(v: &str) -> Term {
    Term::var(v.to_string())
}

fn check_pairs(pairs: &[(Symbol, Symbol)]) -> Result<Vocabulary, FormulaError> {
    let mut v = Vocabulary::new();
    for (a, b) in pairs {
        if a.kind != b.kind || a.arity != b.arity {
            return Err(FormulaError::VocabMismatch(format!("{a} is paired with {b}")));
        }
        v.add(a.clone())?;
        v.add(b.clone())?;
    }
    Ok(v)
}

fn iso_so(u: &str, u2: &str, pairs: &[(Symbol, Symbol)]) -> Result<(Formula, Vocabulary), FormulaError> {
    let mut vocab = check_pairs(pairs)?;
    vocab.add(Symbol::relation(u, 1))?;
    vocab.add(Symbol::relation(u2, 1))?;
    let mut fresh = Fresh::new(vocab.symbols().iter().map(|s| s.name.clone()));
    let f = fresh.var("F");
    let app = |t: Term| Term::app1(f.clone(), t);
    let in_u = |t: Term| Formula::atom1(u, t);
    let in_u2 = |t: Term| Formula::atom1(u2, t);

    let (x, y) = (fresh.var("x"), fresh.var("y"));
    let mut clauses = vec![
        Formula::forall(x.clone(), Formula::implies(in_u(tvar(&x)), in_u2(app(tvar(&x))))),
        Formula::forall_all(
            [x.clone(), y.clone()],
            Formula::implies(
                Formula::conj(vec![in_u(tvar(&x)), in_u(tvar(&y)), Formula::eq(app(tvar(&x)), app(tvar(&y)))]),
                Formula::eq(tvar(&x), tvar(&y)),
            ),
        ),
        Formula::forall(
            y.clone(),
            Formula::implies(
                in_u2(tvar(&y)),
                Formula::exists(x.clone(), Formula::and2(in_u(tvar(&x)), Formula::eq(app(tvar(&x)), tvar(&y)))),
            ),
        ),
    ];
    for (a, b) in pairs {
        let xs = fresh.vars("x", a.arity);
        let args: Vec<Term> = xs.iter().map(|v| tvar(v)).collect();
        let images: Vec<Term> = args.iter().cloned().map(&app).collect();
        let guard = Formula::conj(args.iter().cloned().map(in_u).collect());
        let core = match a.kind {
            SymbolKind::Relation => Formula::iff(
                Formula::atom(a.name.clone(), args.clone()),
                Formula::atom(b.name.clone(), images),
            ),
            SymbolKind::Function | SymbolKind::Constant => {
                Formula::eq(app(Term::app(a.name.clone(), args.clone())), Term::app(b.name.clone(), images))
            }
        };
        let clause = if xs.is_empty() { core } else { Formula::forall_all(xs, Formula::implies(guard, core)) };
        clauses.push(clause);
    }
    Ok((Formula::exists2(SoVar::fun(f, 1), Formula::conj(clauses)), vocab))
}

fn iso_phi(
    phi: &Formula,
    x: &str,
    y: &str,
    domains: Option<(&String, &String)>,
    pairs: &[(Symbol, Symbol)],
) -> Result<(Formula, Vocabulary), FormulaError> {
    if x == y {
        return Err(FormulaError::BadParams("φ needs two distinct free variables".into()));
    }
    let extra: Vec<String> = phi.free_vars().into_iter().filter(|v| v != x && v != y).collect();
    if !extra.is_empty() {
        return Err(FormulaError::BadParams(format!("φ has unexpected free variables {extra:?}")));
    }
    if !phi.is_first_order() {
        return Err(FormulaError::BadParams("φ must be first-order".into()));
    }
    let mut vocab = check_pairs(pairs)?;
    if let Some((n1, n2)) = domains {
        vocab.add(Symbol::relation(n1.clone(), 1))?;
        vocab.add(Symbol::relation(n2.clone(), 1))?;
    }
    for h in phi.free_heads() {
        if !vocab.contains(&h) {
            return Err(FormulaError::VocabMismatch(format!("φ uses '{h}' outside the paired vocabulary")));
        }
    }
    let mut fresh = Fresh::new(vocab.symbols().iter().map(|s| s.name.clone()).chain(phi.all_names()));
    let rel = |a: Term, b: Term| {
        let map: BTreeMap<String, Term> = [(x.to_string(), a), (y.to_string(), b)].into();
        phi.substitute(&map)
    };
    let d1 = |t: Term| domains.map(|(n1, _)| Formula::atom1(n1.clone(), t)).unwrap_or(Formula::True);
    let d2 = |t: Term| domains.map(|(_, n2)| Formula::atom1(n2.clone(), t)).unwrap_or(Formula::True);
    let guard = |parts: Vec<Formula>| Formula::conj(parts.into_iter().filter(|f| *f != Formula::True).collect());
    let implies = |pre: Formula, post: Formula| if pre == Formula::True { post } else { Formula::implies(pre, post) };

    let (a, b, c) = (fresh.var("a"), fresh.var("b"), fresh.var("c"));
    let mut clauses = Vec::new();
    if domains.is_some() {
        clauses.push(Formula::forall_all(
            [a.clone(), b.clone()],
            Formula::implies(rel(tvar(&a), tvar(&b)), guard(vec![d1(tvar(&a)), d2(tvar(&b))])),
        ));
    }
    // total and single-valued on the source
    clauses.push(Formula::forall(
        a.clone(),
        implies(
            d1(tvar(&a)),
            Formula::exists(
                b.clone(),
                Formula::and2(
                    rel(tvar(&a), tvar(&b)),
                    Formula::forall(
                        c.clone(),
                        Formula::implies(rel(tvar(&a), tvar(&c)), Formula::eq(tvar(&c), tvar(&b))),
                    ),
                ),
            ),
        ),
    ));
    // injective
    clauses.push(Formula::forall_all(
        [a.clone(), c.clone(), b.clone()],
        Formula::implies(
            Formula::and2(rel(tvar(&a), tvar(&b)), rel(tvar(&c), tvar(&b))),
            Formula::eq(tvar(&a), tvar(&c)),
        ),
    ));
    // onto
    clauses.push(Formula::forall(
        b.clone(),
        implies(d2(tvar(&b)), Formula::exists(a.clone(), guard(vec![d1(tvar(&a)), rel(tvar(&a), tvar(&b))]))),
    ));
    for (s, s2) in pairs {
        let xs = fresh.vars("x", s.arity);
        let ys = fresh.vars("y", s.arity);
        let xt: Vec<Term> = xs.iter().map(|v| tvar(v)).collect();
        let yt: Vec<Term> = ys.iter().map(|v| tvar(v)).collect();
        let mut pre: Vec<Formula> = xt.iter().cloned().map(d1).collect();
        pre.extend(xt.iter().zip(&yt).map(|(a, b)| rel(a.clone(), b.clone())));
        let clause = match s.kind {
            SymbolKind::Relation => Formula::implies(
                guard(pre),
                Formula::iff(Formula::atom(s.name.clone(), xt.clone()), Formula::atom(s2.name.clone(), yt.clone())),
            ),
            SymbolKind::Function | SymbolKind::Constant => {
                // F(f(x̄)) = f'(F(x̄))
                implies(guard(pre), rel(Term::app(s.name.clone(), xt.clone()), Term::app(s2.name.clone(), yt.clone())))
            }
        };
        let mut vars = xs;
        vars.extend(ys);
        clauses.push(Formula::forall_all(vars, clause));
    }
    Ok((Formula::conj(clauses), vocab))
}

/// "Every limit cardinal > ω is singular", over membership `mem`.
pub fn ia0(mem: &str) -> Formula {
    let mut d = Defs { mem: mem.to_string(), fresh: Fresh::new([mem.to_string()]) };
    let l = d.fresh.var("l");
    let w = d.fresh.var("w");
    let above_omega = Formula::exists(w.clone(), Formula::and2(d.omega(&w), d.is_in(&w, &l)));
    let hyp = Formula::and2(d.limit_cardinal(&l), above_omega);
    Formula::forall(l.clone(), Formula::implies(hyp, d.singular(&l)))
}

/// Set-theoretic definitions over a single membership symbol.
struct Defs {
    mem: String,
    fresh: Fresh,
}

impl Defs {
    fn is_in(&self, a: &str, b: &str) -> Formula {
        Formula::atom2(self.mem.clone(), tvar(a), tvar(b))
    }

    fn eqv(&self, a: &str, b: &str) -> Formula {
        Formula::eq(tvar(a), tvar(b))
    }

    fn transitive(&mut self, a: &str) -> Formula {
        let (y, z) = (self.fresh.var("y"), self.fresh.var("z"));
        let body = Formula::implies(Formula::and2(self.is_in(&z, &y), self.is_in(&y, a)), self.is_in(&z, a));
        Formula::forall_all([y, z], body)
    }

    fn ordinal(&mut self, a: &str) -> Formula {
        let y = self.fresh.var("y");
        let tr = self.transitive(a);
        let each = Formula::forall(y.clone(), Formula::implies(self.is_in(&y, a), self.transitive(&y)));
        Formula::and2(tr, each)
    }

    fn nonempty(&mut self, a: &str) -> Formula {
        let z = self.fresh.var("z");
        Formula::exists(z.clone(), self.is_in(&z, a))
    }

    fn limit_ordinal(&mut self, a: &str) -> Formula {
        let (y, z) = (self.fresh.var("y"), self.fresh.var("z"));
        let unbounded = Formula::forall(
            y.clone(),
            Formula::implies(
                self.is_in(&y, a),
                Formula::exists(z.clone(), Formula::and2(self.is_in(&z, a), self.is_in(&y, &z))),
            ),
        );
        Formula::conj(vec![self.ordinal(a), self.nonempty(a), unbounded])
    }

    fn omega(&mut self, w: &str) -> Formula {
        let y = self.fresh.var("y");
        let least = Formula::forall(y.clone(), Formula::implies(self.is_in(&y, w), Formula::not(self.limit_ordinal(&y))));
        Formula::and2(self.limit_ordinal(w), least)
    }

    /// z = {a}
    fn singleton(&mut self, z: &str, a: &str) -> Formula {
        let t = self.fresh.var("t");
        Formula::forall(t.clone(), Formula::iff(self.is_in(&t, z), self.eqv(&t, a)))
    }

    /// z = {a, b}
    fn doubleton(&mut self, z: &str, a: &str, b: &str) -> Formula {
        let t = self.fresh.var("t");
        Formula::forall(t.clone(), Formula::iff(self.is_in(&t, z), Formula::or2(self.eqv(&t, a), self.eqv(&t, b))))
    }

    /// p = (a, b) as a Kuratowski pair
    fn kpair(&mut self, p: &str, a: &str, b: &str) -> Formula {
        let z = self.fresh.var("z");
        let member = Formula::or2(self.singleton(&z, a), self.doubleton(&z, a, b));
        Formula::forall(z.clone(), Formula::iff(self.is_in(&z, p), member))
    }

    /// (a, b) ∈ f
    fn maps(&mut self, f: &str, a: &str, b: &str) -> Formula {
        let p = self.fresh.var("p");
        Formula::exists(p.clone(), Formula::and2(self.is_in(&p, f), self.kpair(&p, a, b)))
    }

    /// f is a function from a into b
    fn function_from(&mut self, f: &str, a: &str, b: &str) -> Formula {
        let (p, x, y, y2) = (self.fresh.var("p"), self.fresh.var("x"), self.fresh.var("y"), self.fresh.var("y"));
        let only_pairs = Formula::forall(
            p.clone(),
            Formula::implies(
                self.is_in(&p, f),
                Formula::exists_all(
                    [x.clone(), y.clone()],
                    Formula::conj(vec![self.is_in(&x, a), self.is_in(&y, b), self.kpair(&p, &x, &y)]),
                ),
            ),
        );
        let unique = Formula::forall(
            y2.clone(),
            Formula::implies(self.maps(f, &x, &y2), self.eqv(&y2, &y)),
        );
        let total = Formula::forall(
            x.clone(),
            Formula::implies(
                self.is_in(&x, a),
                Formula::exists(y.clone(), Formula::conj(vec![self.is_in(&y, b), self.maps(f, &x, &y), unique])),
            ),
        );
        Formula::and2(only_pairs, total)
    }

    /// k is a cardinal: an ordinal onto which no smaller ordinal maps.
    fn cardinal(&mut self, k: &str) -> Formula {
        let (a, f, y, x) = (self.fresh.var("a"), self.fresh.var("f"), self.fresh.var("y"), self.fresh.var("x"));
        let onto = Formula::forall(
            y.clone(),
            Formula::implies(
                self.is_in(&y, k),
                Formula::exists(x.clone(), Formula::and2(self.is_in(&x, &a), self.maps(&f, &x, &y))),
            ),
        );
        let no_surjection = Formula::forall_all(
            [a.clone(), f.clone()],
            Formula::implies(
                Formula::and2(self.is_in(&a, k), self.function_from(&f, &a, k)),
                Formula::not(onto),
            ),
        );
        Formula::and2(self.ordinal(k), no_surjection)
    }

    fn limit_cardinal(&mut self, l: &str) -> Formula {
        let (k, m) = (self.fresh.var("k"), self.fresh.var("m"));
        let card_m = self.cardinal(&m);
        let card_k = self.cardinal(&k);
        let unbounded = Formula::forall(
            k.clone(),
            Formula::implies(
                Formula::and2(self.is_in(&k, l), card_k),
                Formula::exists(m.clone(), Formula::conj(vec![self.is_in(&m, l), card_m, self.is_in(&k, &m)])),
            ),
        );
        Formula::conj(vec![self.cardinal(l), self.limit_ordinal(l), unbounded])
    }

    /// some a ∈ l maps cofinally into l
    fn singular(&mut self, l: &str) -> Formula {
        let (a, f, b, x, y) =
            (self.fresh.var("a"), self.fresh.var("f"), self.fresh.var("b"), self.fresh.var("x"), self.fresh.var("y"));
        let reach = Formula::exists_all(
            [x.clone(), y.clone()],
            Formula::conj(vec![
                self.is_in(&x, &a),
                self.maps(&f, &x, &y),
                Formula::or2(self.is_in(&b, &y), self.eqv(&b, &y)),
            ]),
        );
        let cofinal = Formula::forall(b.clone(), Formula::implies(self.is_in(&b, l), reach));
        Formula::exists_all(
            [a.clone(), f.clone()],
            Formula::conj(vec![self.is_in(&a, l), self.function_from(&f, &a, l), cofinal]),
        )
    }
}

/// SO variable standing for vocabulary symbol `s`.
fn so_var_for(s: &Symbol, name: String) -> SoVar {
    match s.kind {
        SymbolKind::Relation => SoVar::rel(name, s.arity),
        SymbolKind::Function => SoVar::fun(name, s.arity),
        SymbolKind::Constant => SoVar::fun(name, 0),
    }
}

fn intolerance_disjunction(theory: &Theory, phi: &Formula) -> Result<Formula, FormulaError> {
    if !theory.schemas.is_empty() {
        return Err(FormulaError::BadParams("intolerance needs a finitely axiomatized theory".into()));
    }
    check_formula(phi, &theory.vocab).map_err(|e| FormulaError::VocabMismatch(e.to_string()))?;
    if !phi.is_sentence() {
        return Err(FormulaError::BadParams("φ must be a sentence".into()));
    }
    let mut avoid: BTreeSet<String> = phi.all_names();
    for a in &theory.axioms {
        avoid.extend(a.formula.all_names());
    }
    avoid.extend(theory.vocab.symbols().iter().map(|s| s.name.clone()));
    let x = fresh_name("X", &avoid);
    avoid.insert(x.clone());
    let single = theory.vocab.len() == 1;
    let mut mapping = BTreeMap::new();
    let mut so_vars = Vec::new();
    for s in theory.vocab.symbols() {
        let base = if single { "E".to_string() } else { format!("E_{}", s.name) };
        let name = fresh_name(&base, &avoid);
        avoid.insert(name.clone());
        mapping.insert(s.name.clone(), name.clone());
        so_vars.push(so_var_for(s, name));
    }
    let body_of = |f: &Formula| -> Result<Formula, FormulaError> {
        relativize(&rename_vocab(f, &theory.vocab, &mapping)?, &x, true)
    };
    let mut hyp = vec![Formula::exists("x", Formula::atom1(x.clone(), Term::var("x")))];
    for sv in &so_vars {
        if sv.kind == SoKind::Fun {
            hyp.push(so_guard(sv, &x, &Formula::True));
        }
    }
    for a in &theory.axioms {
        hyp.push(body_of(&a.formula)?);
    }
    let hyp = Formula::conj(hyp);
    let phi_x = body_of(phi)?;
    let close = |concl: Formula| {
        let inner = Formula::implies(hyp.clone(), concl);
        let inner = so_vars.iter().rev().fold(inner, |acc, sv| Formula::forall2(sv.clone(), acc));
        Formula::forall2(SoVar::rel(x.clone(), 1), inner)
    };
    Ok(Formula::or2(close(phi_x.clone()), close(Formula::not(phi_x))))
}
