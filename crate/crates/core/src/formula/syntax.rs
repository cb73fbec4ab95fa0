use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A first-order term. Constants are nullary applications.
///
/// Application heads name either a vocabulary function/constant or a bound
/// second-order function variable; which one is decided by scope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn app1(name: impl Into<String>, arg: Term) -> Term {
        Term::App(name.into(), vec![arg])
    }

    pub fn app2(name: impl Into<String>, a: Term, b: Term) -> Term {
        Term::App(name.into(), vec![a, b])
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars(out)),
        }
    }

    pub(crate) fn heads(&self, out: &mut BTreeSet<String>) {
        if let Term::App(f, args) = self {
            out.insert(f.clone());
            args.iter().for_each(|a| a.heads(out));
        }
    }

    fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(map)).collect()),
        }
    }

    fn rename_head(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(f, args) => {
                let f = if f == from { to.to_string() } else { f.clone() };
                Term::App(f, args.iter().map(|a| a.rename_head(from, to)).collect())
            }
        }
    }

    pub(crate) fn map_heads(&self, f: &mut impl FnMut(&str) -> Option<String>) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(h, args) => {
                let head = f(h).unwrap_or_else(|| h.clone());
                Term::App(head, args.iter().map(|a| a.map_heads(f)).collect())
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SoKind {
    Rel,
    Fun,
}

/// A second-order variable together with its binding-site annotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SoVar {
    pub name: String,
    pub kind: SoKind,
    pub arity: usize,
}

impl SoVar {
    pub fn rel(name: impl Into<String>, arity: usize) -> SoVar {
        SoVar { name: name.into(), kind: SoKind::Rel, arity }
    }

    pub fn fun(name: impl Into<String>, arity: usize) -> SoVar {
        SoVar { name: name.into(), kind: SoKind::Fun, arity }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall2(SoVar, Box<Formula>),
    Exists2(SoVar, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(name.into(), args)
    }

    pub fn atom1(name: impl Into<String>, a: Term) -> Formula {
        Formula::Atom(name.into(), vec![a])
    }

    pub fn atom2(name: impl Into<String>, a: Term, b: Term) -> Formula {
        Formula::Atom(name.into(), vec![a, b])
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction that collapses the empty and singleton cases.
    pub fn conj(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction that collapses the empty and singleton cases.
    pub fn disj(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn and2(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![a, b])
    }

    pub fn or2(a: Formula, b: Formula) -> Formula {
        Formula::Or(vec![a, b])
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall_all<S: Into<String>>(vars: impl IntoIterator<Item = S>, body: Formula) -> Formula {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        vars.into_iter().rev().fold(body, |acc, v| Formula::forall(v, acc))
    }

    pub fn exists_all<S: Into<String>>(vars: impl IntoIterator<Item = S>, body: Formula) -> Formula {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        vars.into_iter().rev().fold(body, |acc, v| Formula::exists(v, acc))
    }

    pub fn forall2(v: SoVar, body: Formula) -> Formula {
        Formula::Forall2(v, Box::new(body))
    }

    pub fn exists2(v: SoVar, body: Formula) -> Formula {
        Formula::Exists2(v, Box::new(body))
    }

    /// Number of formula nodes (terms are not counted).
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, f) | Formula::Exists(_, f) | Formula::Forall2(_, f) | Formula::Exists2(_, f) => {
                1 + f.size()
            }
        }
    }

    /// First-order quantifier rank.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => 0,
            Formula::Not(f) | Formula::Forall2(_, f) | Formula::Exists2(_, f) => f.quantifier_rank(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_rank).max().unwrap_or(0),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.quantifier_rank(),
        }
    }

    pub fn is_first_order(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => true,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.is_first_order(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_first_order),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.is_first_order() && b.is_first_order(),
            Formula::Forall2(..) | Formula::Exists2(..) => false,
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => vec![],
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) | Formula::Forall2(_, f) | Formula::Exists2(_, f) => {
                vec![f]
            }
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
        }
    }

    /// Free first-order variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            let mut vs = BTreeSet::new();
            t.vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => args.iter().for_each(|t| add_term(t, bound, out)),
            Formula::Eq(a, b) => {
                add_term(a, bound, out);
                add_term(b, bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            _ => self.children().into_iter().for_each(|c| c.collect_free(bound, out)),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Names used in head position (relation atoms and term applications)
    /// that are not bound by a second-order quantifier in scope.
    pub fn free_heads(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_heads(&mut Vec::new(), &mut out);
        out
    }

    fn collect_heads(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add = |names: BTreeSet<String>, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            out.extend(names.into_iter().filter(|n| !bound.contains(n)));
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(r, args) => {
                let mut hs = BTreeSet::new();
                hs.insert(r.clone());
                args.iter().for_each(|t| t.heads(&mut hs));
                add(hs, bound, out);
            }
            Formula::Eq(a, b) => {
                let mut hs = BTreeSet::new();
                a.heads(&mut hs);
                b.heads(&mut hs);
                add(hs, bound, out);
            }
            Formula::Forall2(v, f) | Formula::Exists2(v, f) => {
                bound.push(v.name.clone());
                f.collect_heads(bound, out);
                bound.pop();
            }
            _ => self.children().into_iter().for_each(|c| c.collect_heads(bound, out)),
        }
    }

    /// Every name that occurs anywhere (variables, heads, binders).
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(r, args) => {
                out.insert(r.clone());
                for t in args {
                    t.vars(out);
                    t.heads(out);
                }
            }
            Formula::Eq(a, b) => {
                for t in [a, b] {
                    t.vars(out);
                    t.heads(out);
                }
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                out.insert(v.clone());
                f.collect_names(out);
            }
            Formula::Forall2(v, f) | Formula::Exists2(v, f) => {
                out.insert(v.name.clone());
                f.collect_names(out);
            }
            _ => self.children().into_iter().for_each(|c| c.collect_names(out)),
        }
    }

    /// Capture-avoiding simultaneous substitution of terms for free
    /// first-order variables.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(|t| t.substitute(map)).collect()),
            Formula::Eq(a, b) => Formula::Eq(a.substitute(map), b.substitute(map)),
            Formula::Not(f) => Formula::not(f.substitute(map)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(map)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(map)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.substitute(map), b.substitute(map)),
            Formula::Iff(a, b) => Formula::iff(a.substitute(map), b.substitute(map)),
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                let free = f.free_vars();
                let mut inner: BTreeMap<String, Term> = map
                    .iter()
                    .filter(|(k, _)| *k != v && free.contains(*k))
                    .map(|(k, t)| (k.clone(), t.clone()))
                    .collect();
                let mut incoming = BTreeSet::new();
                inner.values().for_each(|t| t.vars(&mut incoming));
                let (v2, body) = if incoming.contains(v) {
                    let mut avoid = f.all_names();
                    avoid.extend(incoming.iter().cloned());
                    avoid.extend(inner.keys().cloned());
                    let fresh = fresh_name(v, &avoid);
                    inner.insert(v.clone(), Term::Var(fresh.clone()));
                    (fresh, f.substitute(&inner))
                } else {
                    (v.clone(), f.substitute(&inner))
                };
                if matches!(self, Formula::Forall(..)) {
                    Formula::forall(v2, body)
                } else {
                    Formula::exists(v2, body)
                }
            }
            Formula::Forall2(sv, f) | Formula::Exists2(sv, f) => {
                let mut incoming_heads = BTreeSet::new();
                map.values().for_each(|t| t.heads(&mut incoming_heads));
                let (sv2, body) = if incoming_heads.contains(&sv.name) {
                    let mut avoid = f.all_names();
                    avoid.extend(incoming_heads);
                    let fresh = fresh_name(&sv.name, &avoid);
                    let renamed = f.rename_bound_head(&sv.name, &fresh);
                    (SoVar { name: fresh, ..sv.clone() }, renamed.substitute(map))
                } else {
                    (sv.clone(), f.substitute(map))
                };
                if matches!(self, Formula::Forall2(..)) {
                    Formula::forall2(sv2, body)
                } else {
                    Formula::exists2(sv2, body)
                }
            }
        }
    }

    pub fn substitute_var(&self, var: &str, term: Term) -> Formula {
        let mut map = BTreeMap::new();
        map.insert(var.to_string(), term);
        self.substitute(&map)
    }

    /// Renames free occurrences of head `from` (stops at rebinding).
    pub(crate) fn rename_bound_head(&self, from: &str, to: &str) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(r, args) => Formula::Atom(
                if r == from { to.to_string() } else { r.clone() },
                args.iter().map(|t| t.rename_head(from, to)).collect(),
            ),
            Formula::Eq(a, b) => Formula::Eq(a.rename_head(from, to), b.rename_head(from, to)),
            Formula::Forall2(sv, _) | Formula::Exists2(sv, _) if sv.name == from => self.clone(),
            _ => self.map_children(|c| c.rename_bound_head(from, to)),
        }
    }

    /// Rebuilds the node with `f` applied to each direct subformula.
    pub fn map_children(&self, mut f: impl FnMut(&Formula) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => self.clone(),
            Formula::Not(a) => Formula::not(f(a)),
            Formula::And(fs) => Formula::And(fs.iter().map(&mut f).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(&mut f).collect()),
            Formula::Implies(a, b) => Formula::implies(f(a), f(b)),
            Formula::Iff(a, b) => Formula::iff(f(a), f(b)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), f(a)),
            Formula::Exists(v, a) => Formula::exists(v.clone(), f(a)),
            Formula::Forall2(v, a) => Formula::forall2(v.clone(), f(a)),
            Formula::Exists2(v, a) => Formula::exists2(v.clone(), f(a)),
        }
    }

    /// Universal closure over free variables, in sorted order.
    pub fn universal_closure(&self) -> Formula {
        Formula::forall_all(self.free_vars(), self.clone())
    }
}

/// Picks `base_1`, `base_2`, ... until the name avoids `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}_{i}")).find(|n| !avoid.contains(n)).unwrap()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(h, args) if args.is_empty() => write!(f, "{h}"),
            Term::App(h, args) => {
                write!(f, "({h}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for SoVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SoKind::Rel => write!(f, "({} {})", self.name, self.arity),
            SoKind::Fun => write!(f, "(fun {} {})", self.name, self.arity),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, op: &str, parts: &[&Formula]) -> fmt::Result {
            write!(f, "({op}")?;
            for p in parts {
                write!(f, " {p}")?;
            }
            write!(f, ")")
        }
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(r, args) => {
                write!(f, "({r}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Not(a) => list(f, "not", &[a]),
            Formula::And(fs) => list(f, "and", &fs.iter().collect::<Vec<_>>()),
            Formula::Or(fs) => list(f, "or", &fs.iter().collect::<Vec<_>>()),
            Formula::Implies(a, b) => list(f, "->", &[a, b]),
            Formula::Iff(a, b) => list(f, "<->", &[a, b]),
            Formula::Forall(v, a) => write!(f, "(forall {v} {a})"),
            Formula::Exists(v, a) => write!(f, "(exists {v} {a})"),
            Formula::Forall2(v, a) => write!(f, "(forall2 {v} {a})"),
            Formula::Exists2(v, a) => write!(f, "(exists2 {v} {a})"),
        }
    }
}
