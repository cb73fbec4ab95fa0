use super::sexpr::{self, SExpr};
use super::syntax::{Formula, SoKind, SoVar, Term};
use super::vocab::{SymbolKind, Vocabulary};
use super::FormulaError;

/// Head of the placeholder atom in schema templates.
pub const HOLE: &str = "$psi";

const RESERVED: &[&str] =
    &["forall", "exists", "forall2", "exists2", "not", "and", "or", "->", "<->", "=", "true", "false", "fun"];

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept `($psi t ...)` atoms (schema templates).
    pub allow_hole: bool,
}

pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, FormulaError> {
    parse_formula_with(text, vocab, ParseOptions::default())
}

pub fn parse_formula_with(text: &str, vocab: &Vocabulary, opts: ParseOptions) -> Result<Formula, FormulaError> {
    let e = sexpr::read_one(text)?;
    Parser { vocab, opts, fo: Vec::new(), so: Vec::new() }.formula(&e)
}

pub fn parse_term(text: &str, vocab: &Vocabulary) -> Result<Term, FormulaError> {
    let e = sexpr::read_one(text)?;
    Parser { vocab, opts: ParseOptions::default(), fo: Vec::new(), so: Vec::new() }.term(&e)
}

struct Parser<'a> {
    vocab: &'a Vocabulary,
    opts: ParseOptions,
    fo: Vec<String>,
    so: Vec<SoVar>,
}

fn kind_name(k: SymbolKind) -> &'static str {
    match k {
        SymbolKind::Relation => "relation",
        SymbolKind::Function => "function",
        SymbolKind::Constant => "constant",
    }
}

impl Parser<'_> {
    fn so_lookup(&self, name: &str) -> Option<&SoVar> {
        self.so.iter().rev().find(|v| v.name == name)
    }

    fn formula(&mut self, e: &SExpr) -> Result<Formula, FormulaError> {
        let pos = e.pos();
        let syn = |msg: &str| FormulaError::Syntax { pos, msg: msg.to_string() };
        let items = match e {
            SExpr::Atom { text, .. } => {
                return match text.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => self.relation_atom(text, &[], pos),
                };
            }
            SExpr::List { items, .. } => items,
        };
        let head = match items.first() {
            Some(SExpr::Atom { text, .. }) => text.as_str(),
            Some(_) => return Err(syn("operator must be an atom")),
            None => return Err(syn("empty list")),
        };
        let args = &items[1..];
        let exact = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(syn(&format!("'{head}' takes {n} argument(s), found {}", args.len())))
            }
        };
        match head {
            "not" => {
                exact(1)?;
                Ok(Formula::not(self.formula(&args[0])?))
            }
            "and" | "or" => {
                if args.is_empty() {
                    return Err(syn(&format!("empty '{head}'")));
                }
                let parts = args.iter().map(|a| self.formula(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(if head == "and" { Formula::And(parts) } else { Formula::Or(parts) })
            }
            "->" | "<->" => {
                exact(2)?;
                let a = self.formula(&args[0])?;
                let b = self.formula(&args[1])?;
                Ok(if head == "->" { Formula::implies(a, b) } else { Formula::iff(a, b) })
            }
            "=" => {
                exact(2)?;
                Ok(Formula::Eq(self.term(&args[0])?, self.term(&args[1])?))
            }
            "forall" | "exists" => {
                exact(2)?;
                let v = self.binder_name(&args[0])?;
                self.fo.push(v.clone());
                let body = self.formula(&args[1]);
                self.fo.pop();
                let body = body?;
                Ok(if head == "forall" { Formula::forall(v, body) } else { Formula::exists(v, body) })
            }
            "forall2" | "exists2" => {
                exact(2)?;
                let sv = self.so_binder(&args[0])?;
                self.so.push(sv.clone());
                let body = self.formula(&args[1]);
                self.so.pop();
                let body = body?;
                Ok(if head == "forall2" { Formula::forall2(sv, body) } else { Formula::exists2(sv, body) })
            }
            "true" | "false" | "fun" => Err(syn(&format!("'{head}' cannot be applied"))),
            _ => self.relation_atom(head, args, items[0].pos()),
        }
    }

    fn binder_name(&self, e: &SExpr) -> Result<String, FormulaError> {
        match e.as_atom() {
            Some(a) if !RESERVED.contains(&a) && a != HOLE => Ok(a.to_string()),
            _ => Err(FormulaError::Syntax { pos: e.pos(), msg: "expected variable name".into() }),
        }
    }

    fn so_binder(&self, e: &SExpr) -> Result<SoVar, FormulaError> {
        let bad = || FormulaError::Syntax {
            pos: e.pos(),
            msg: "expected second-order binder '(X n)' or '(fun F n)'".into(),
        };
        let items = e.as_list().ok_or_else(bad)?;
        let (kind, rest) = match items.first().and_then(SExpr::as_atom) {
            Some("fun") => (SoKind::Fun, &items[1..]),
            _ => (SoKind::Rel, items),
        };
        if rest.len() != 2 {
            return Err(bad());
        }
        let name = self.binder_name(&rest[0])?;
        let arity: usize = rest[1].as_atom().and_then(|a| a.parse().ok()).ok_or_else(bad)?;
        if kind == SoKind::Rel && arity == 0 {
            return Err(bad());
        }
        Ok(SoVar { name, kind, arity })
    }

    fn relation_atom(&mut self, head: &str, args: &[SExpr], pos: usize) -> Result<Formula, FormulaError> {
        let expected = if head == HOLE && self.opts.allow_hole {
            args.len()
        } else if let Some(sv) = self.so_lookup(head) {
            if sv.kind != SoKind::Rel {
                return Err(FormulaError::KindMismatch {
                    pos,
                    name: head.into(),
                    expected: "relation".into(),
                    found: "function variable".into(),
                });
            }
            sv.arity
        } else if let Some(sym) = self.vocab.get(head) {
            if sym.kind != SymbolKind::Relation {
                return Err(FormulaError::KindMismatch {
                    pos,
                    name: head.into(),
                    expected: "relation".into(),
                    found: kind_name(sym.kind).into(),
                });
            }
            sym.arity
        } else {
            return Err(FormulaError::UnknownSymbol { pos, name: head.into() });
        };
        if expected != args.len() {
            return Err(FormulaError::Arity { pos, name: head.into(), expected, found: args.len() });
        }
        let terms = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
        Ok(Formula::Atom(head.to_string(), terms))
    }

    fn term(&mut self, e: &SExpr) -> Result<Term, FormulaError> {
        let pos = e.pos();
        match e {
            SExpr::Atom { text, .. } => {
                if RESERVED.contains(&text.as_str()) || text == HOLE {
                    return Err(FormulaError::Syntax { pos, msg: format!("'{text}' is not a term") });
                }
                if self.fo.iter().any(|v| v == text) {
                    return Ok(Term::Var(text.clone()));
                }
                if let Some(sv) = self.so_lookup(text) {
                    return match (sv.kind, sv.arity) {
                        (SoKind::Fun, 0) => Ok(Term::App(text.clone(), vec![])),
                        (SoKind::Fun, a) => Err(FormulaError::Arity { pos, name: text.clone(), expected: a, found: 0 }),
                        (SoKind::Rel, _) => Err(FormulaError::KindMismatch {
                            pos,
                            name: text.clone(),
                            expected: "term".into(),
                            found: "relation variable".into(),
                        }),
                    };
                }
                match self.vocab.get(text) {
                    Some(sym) if sym.kind == SymbolKind::Constant => Ok(Term::App(text.clone(), vec![])),
                    Some(sym) if sym.kind == SymbolKind::Function => {
                        Err(FormulaError::Arity { pos, name: text.clone(), expected: sym.arity, found: 0 })
                    }
                    Some(sym) => Err(FormulaError::KindMismatch {
                        pos,
                        name: text.clone(),
                        expected: "term".into(),
                        found: kind_name(sym.kind).into(),
                    }),
                    None => Ok(Term::Var(text.clone())),
                }
            }
            SExpr::List { items, .. } => {
                let (head, hpos) = match items.first() {
                    Some(SExpr::Atom { text, pos }) => (text.as_str(), *pos),
                    _ => return Err(FormulaError::Syntax { pos, msg: "expected function application".into() }),
                };
                let args = &items[1..];
                let expected = if let Some(sv) = self.so_lookup(head) {
                    if sv.kind != SoKind::Fun {
                        return Err(FormulaError::KindMismatch {
                            pos: hpos,
                            name: head.into(),
                            expected: "function".into(),
                            found: "relation variable".into(),
                        });
                    }
                    sv.arity
                } else if let Some(sym) = self.vocab.get(head) {
                    if sym.kind == SymbolKind::Relation {
                        return Err(FormulaError::KindMismatch {
                            pos: hpos,
                            name: head.into(),
                            expected: "function".into(),
                            found: "relation".into(),
                        });
                    }
                    sym.arity
                } else {
                    return Err(FormulaError::UnknownSymbol { pos: hpos, name: head.into() });
                };
                if expected != args.len() || args.is_empty() {
                    return Err(FormulaError::Arity { pos: hpos, name: head.into(), expected, found: args.len() });
                }
                let terms = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(Term::App(head.to_string(), terms))
            }
        }
    }
}

/// Checks that an AST is well formed over `vocab` and that its printed form
/// reads back to the same AST.
pub fn check_formula(phi: &Formula, vocab: &Vocabulary) -> Result<(), FormulaError> {
    Checker { vocab, allow_hole: false, fo: Vec::new(), so: Vec::new() }.formula(phi)
}

pub(crate) fn check_template(phi: &Formula, vocab: &Vocabulary) -> Result<(), FormulaError> {
    Checker { vocab, allow_hole: true, fo: Vec::new(), so: Vec::new() }.formula(phi)
}

struct Checker<'a> {
    vocab: &'a Vocabulary,
    allow_hole: bool,
    fo: Vec<String>,
    so: Vec<SoVar>,
}

impl Checker<'_> {
    fn err(&self, msg: String) -> FormulaError {
        FormulaError::IllFormed(msg)
    }

    fn name_ok(&self, name: &str) -> Result<(), FormulaError> {
        if RESERVED.contains(&name) || name == HOLE || !sexpr::is_identifier(name) {
            return Err(self.err(format!("'{name}' is not a usable name")));
        }
        Ok(())
    }

    fn formula(&mut self, phi: &Formula) -> Result<(), FormulaError> {
        match phi {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom(r, args) => {
                let expected = if r == HOLE && self.allow_hole {
                    args.len()
                } else if let Some(sv) = self.so.iter().rev().find(|v| &v.name == r) {
                    if sv.kind != SoKind::Rel {
                        return Err(self.err(format!("'{r}' is a function variable used as a relation")));
                    }
                    sv.arity
                } else {
                    match self.vocab.get(r) {
                        Some(s) if s.kind == SymbolKind::Relation => s.arity,
                        Some(_) => return Err(self.err(format!("'{r}' is not a relation"))),
                        None => return Err(self.err(format!("unknown relation '{r}'"))),
                    }
                };
                if expected != args.len() {
                    return Err(self.err(format!("'{r}' expects {expected} argument(s), found {}", args.len())));
                }
                args.iter().try_for_each(|t| self.term(t))
            }
            Formula::Eq(a, b) => {
                self.term(a)?;
                self.term(b)
            }
            Formula::And(fs) | Formula::Or(fs) if fs.is_empty() => Err(self.err("empty connective".into())),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                self.name_ok(v)?;
                self.fo.push(v.clone());
                let r = self.formula(body);
                self.fo.pop();
                r
            }
            Formula::Forall2(sv, body) | Formula::Exists2(sv, body) => {
                self.name_ok(&sv.name)?;
                if sv.kind == SoKind::Rel && sv.arity == 0 {
                    return Err(self.err(format!("relation variable '{}' has arity 0", sv.name)));
                }
                self.so.push(sv.clone());
                let r = self.formula(body);
                self.so.pop();
                r
            }
            _ => phi.children().into_iter().try_for_each(|c| self.formula(c)),
        }
    }

    fn term(&mut self, t: &Term) -> Result<(), FormulaError> {
        match t {
            Term::Var(v) => {
                self.name_ok(v)?;
                if self.fo.contains(v) {
                    return Ok(());
                }
                // A free variable must not read back as a symbol.
                if self.vocab.contains(v) || self.so.iter().any(|s| &s.name == v) {
                    return Err(self.err(format!("free variable '{v}' clashes with a symbol")));
                }
                Ok(())
            }
            Term::App(f, args) => {
                if args.is_empty() && self.fo.contains(f) {
                    return Err(self.err(format!("constant '{f}' is shadowed by a bound variable")));
                }
                let expected = if let Some(sv) = self.so.iter().rev().find(|v| &v.name == f) {
                    if sv.kind != SoKind::Fun {
                        return Err(self.err(format!("'{f}' is a relation variable used as a function")));
                    }
                    sv.arity
                } else {
                    match self.vocab.get(f) {
                        Some(s) if s.kind != SymbolKind::Relation => s.arity,
                        Some(_) => return Err(self.err(format!("'{f}' is a relation used as a term"))),
                        None => return Err(self.err(format!("unknown function or constant '{f}'"))),
                    }
                };
                if expected != args.len() {
                    return Err(self.err(format!("'{f}' expects {expected} argument(s), found {}", args.len())));
                }
                args.iter().try_for_each(|a| self.term(a))
            }
        }
    }
}
