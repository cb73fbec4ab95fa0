use super::{Limits, MocheckError, Verdict};
use crate::formula::{Formula, SoKind, SoVar, SymbolKind, Term};
use crate::structures::FiniteStructure;

#[derive(Clone, Debug)]
pub(crate) enum CTerm {
    Var(usize),
    Const(usize),
    Fun(usize, Vec<CTerm>),
    SoFun(usize, Vec<CTerm>),
}

#[derive(Clone, Debug)]
pub(crate) enum CForm {
    True,
    False,
    Rel(usize, Vec<CTerm>),
    SoRel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<CForm>),
    And(Vec<CForm>),
    Or(Vec<CForm>),
    Implies(Box<CForm>, Box<CForm>),
    Iff(Box<CForm>, Box<CForm>),
    Quant { exists: bool, slot: usize, name: String, body: Box<CForm> },
    Quant2 { exists: bool, slot: usize, var: SoVar, body: Box<CForm> },
}

/// A formula resolved against a structure's vocabulary: variables become
/// slots, symbols become table indices.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub(crate) form: CForm,
    pub(crate) fo_slots: usize,
    pub(crate) so_slots: usize,
    pub(crate) free: usize,
}

struct Scope<'a> {
    s: &'a FiniteStructure,
    allow_so: bool,
    fo: Vec<String>,
    so: Vec<SoVar>,
    fo_max: usize,
    so_max: usize,
}

impl Compiled {
    pub fn new(s: &FiniteStructure, phi: &Formula, free: &[&str], allow_so: bool) -> Result<Compiled, MocheckError> {
        let mut scope = Scope {
            s,
            allow_so,
            fo: free.iter().map(|x| x.to_string()).collect(),
            so: Vec::new(),
            fo_max: free.len(),
            so_max: 0,
        };
        let form = scope.formula(phi)?;
        Ok(Compiled { form, fo_slots: scope.fo_max, so_slots: scope.so_max, free: free.len() })
    }

    pub fn run(&self, s: &FiniteStructure, values: &[usize], limits: Limits) -> Result<Verdict, MocheckError> {
        assert_eq!(values.len(), self.free, "one value per free variable");
        if let Some(&bad) = values.iter().find(|&&e| e >= s.size()) {
            return Err(MocheckError::Vocab(format!("element {bad} is outside the domain")));
        }
        let mut ctx = super::eval::Ctx::new(s, self, limits);
        ctx.fo[..values.len()].copy_from_slice(values);
        let value = ctx.form(&self.form)?;
        let mut witness = Vec::new();
        if limits.witness {
            ctx.explain(&self.form, value, &mut witness)?;
        }
        Ok(Verdict { value, witness, nodes: ctx.nodes })
    }
}

impl Scope<'_> {
    fn fo_slot(&self, name: &str) -> Option<usize> {
        self.fo.iter().rposition(|v| v == name)
    }

    fn so_slot(&self, name: &str) -> Option<usize> {
        self.so.iter().rposition(|v| v.name == name)
    }

    fn symbol(&self, name: &str, kind: SymbolKind, arity: usize) -> Result<usize, MocheckError> {
        match self.s.vocab().kind_index(name) {
            Some((k, i)) if k == kind && self.s.vocab().get(name).unwrap().arity == arity => Ok(i),
            Some(_) => Err(MocheckError::Vocab(format!("'{name}' is used with the wrong kind or arity"))),
            None => Err(MocheckError::Vocab(format!("'{name}' is not in the structure's vocabulary"))),
        }
    }

    fn term(&self, t: &Term) -> Result<CTerm, MocheckError> {
        match t {
            Term::Var(x) => match self.fo_slot(x) {
                Some(i) => Ok(CTerm::Var(i)),
                None => match self.s.vocab().kind_index(x) {
                    Some((SymbolKind::Constant, i)) => Ok(CTerm::Const(i)),
                    _ => Err(MocheckError::FreeVariable(x.clone())),
                },
            },
            Term::App(f, args) => {
                if args.is_empty() {
                    if let Some(i) = self.fo_slot(f) {
                        return Ok(CTerm::Var(i));
                    }
                }
                let cargs = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                if let Some(i) = self.so_slot(f) {
                    let v = &self.so[i];
                    if v.kind != SoKind::Fun || v.arity != args.len() {
                        return Err(MocheckError::Vocab(format!("second-order variable '{f}' misused")));
                    }
                    return Ok(CTerm::SoFun(i, cargs));
                }
                if args.is_empty() {
                    Ok(CTerm::Const(self.symbol(f, SymbolKind::Constant, 0)?))
                } else {
                    Ok(CTerm::Fun(self.symbol(f, SymbolKind::Function, args.len())?, cargs))
                }
            }
        }
    }

    fn formula(&mut self, phi: &Formula) -> Result<CForm, MocheckError> {
        Ok(match phi {
            Formula::True => CForm::True,
            Formula::False => CForm::False,
            Formula::Atom(r, args) => {
                let cargs = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                if let Some(i) = self.so_slot(r) {
                    let v = &self.so[i];
                    if v.kind != SoKind::Rel || v.arity != args.len() {
                        return Err(MocheckError::Vocab(format!("second-order variable '{r}' misused")));
                    }
                    CForm::SoRel(i, cargs)
                } else {
                    CForm::Rel(self.symbol(r, SymbolKind::Relation, args.len())?, cargs)
                }
            }
            Formula::Eq(a, b) => CForm::Eq(self.term(a)?, self.term(b)?),
            Formula::Not(g) => CForm::Not(Box::new(self.formula(g)?)),
            Formula::And(gs) => CForm::And(gs.iter().map(|g| self.formula(g)).collect::<Result<_, _>>()?),
            Formula::Or(gs) => CForm::Or(gs.iter().map(|g| self.formula(g)).collect::<Result<_, _>>()?),
            Formula::Implies(a, b) => CForm::Implies(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Iff(a, b) => CForm::Iff(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                let slot = self.fo.len();
                self.fo.push(x.clone());
                self.fo_max = self.fo_max.max(self.fo.len());
                let body = self.formula(g);
                self.fo.pop();
                CForm::Quant { exists: matches!(phi, Formula::Exists(..)), slot, name: x.clone(), body: Box::new(body?) }
            }
            Formula::Forall2(v, g) | Formula::Exists2(v, g) => {
                if !self.allow_so {
                    return Err(MocheckError::NotFirstOrder(v.name.clone()));
                }
                let slot = self.so.len();
                self.so.push(v.clone());
                self.so_max = self.so_max.max(self.so.len());
                let body = self.formula(g);
                self.so.pop();
                CForm::Quant2 { exists: matches!(phi, Formula::Exists2(..)), slot, var: v.clone(), body: Box::new(body?) }
            }
        })
    }
}
