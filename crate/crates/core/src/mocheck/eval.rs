use super::compile::{CForm, CTerm, Compiled};
use super::{Binding, Limits, MocheckError};
use crate::formula::{SoKind, SoVar};
use crate::structures::FiniteStructure;

pub(crate) struct Ctx<'a> {
    s: &'a FiniteStructure,
    n: usize,
    pub(crate) fo: Vec<usize>,
    so: Vec<Vec<usize>>,
    pub(crate) nodes: u64,
    limits: Limits,
}

/// Number of candidates for an SO variable, if it fits in `u64`.
pub(crate) fn candidate_count(n: usize, v: &SoVar) -> Option<u64> {
    let len = u32::try_from((n as u64).checked_pow(v.arity as u32)?).ok()?;
    let base = match v.kind {
        SoKind::Rel => 2u64,
        SoKind::Fun => n as u64,
    };
    base.checked_pow(len)
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(s: &'a FiniteStructure, c: &Compiled, limits: Limits) -> Self {
        Ctx { s, n: s.size(), fo: vec![0; c.fo_slots], so: vec![Vec::new(); c.so_slots], nodes: 0, limits }
    }

    fn tick(&mut self) -> Result<(), MocheckError> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            Err(MocheckError::Budget(self.limits.max_nodes))
        } else {
            Ok(())
        }
    }

    fn index(&self, args: &[CTerm]) -> usize {
        args.iter().fold(0, |acc, a| acc * self.n + self.term(a))
    }

    fn term(&self, t: &CTerm) -> usize {
        match t {
            CTerm::Var(i) => self.fo[*i],
            CTerm::Const(c) => self.s.constant(*c),
            CTerm::Fun(f, args) => self.s.fun_tables()[*f].values[self.index(args)],
            CTerm::SoFun(i, args) => self.so[*i][self.index(args)],
        }
    }

    fn check_candidates(&self, v: &SoVar) -> Result<(u64, usize), MocheckError> {
        let len = self.n.pow(v.arity as u32);
        match candidate_count(self.n, v) {
            Some(c) if c <= self.limits.max_candidates => Ok((c, len)),
            other => Err(MocheckError::LimitExceeded {
                var: v.name.clone(),
                candidates: other.map(|c| c.to_string()).unwrap_or_else(|| {
                    let base = if v.kind == SoKind::Rel { "2".to_string() } else { self.n.to_string() };
                    format!("{base}^{len}")
                }),
                limit: self.limits.max_candidates,
            }),
        }
    }

    /// Advances a characteristic vector to its lexicographic successor.
    fn next_candidate(table: &mut [usize], base: usize) -> bool {
        for slot in table.iter_mut().rev() {
            *slot += 1;
            if *slot < base {
                return true;
            }
            *slot = 0;
        }
        false
    }

    fn base(&self, v: &SoVar) -> usize {
        match v.kind {
            SoKind::Rel => 2,
            SoKind::Fun => self.n,
        }
    }

    pub(crate) fn form(&mut self, f: &CForm) -> Result<bool, MocheckError> {
        self.tick()?;
        Ok(match f {
            CForm::True => true,
            CForm::False => false,
            CForm::Rel(r, args) => self.s.rel_tables()[*r].bits[self.index(args)],
            CForm::SoRel(i, args) => self.so[*i][self.index(args)] != 0,
            CForm::Eq(a, b) => self.term(a) == self.term(b),
            CForm::Not(g) => !self.form(g)?,
            CForm::And(gs) => {
                for g in gs {
                    if !self.form(g)? {
                        return Ok(false);
                    }
                }
                true
            }
            CForm::Or(gs) => {
                for g in gs {
                    if self.form(g)? {
                        return Ok(true);
                    }
                }
                false
            }
            CForm::Implies(a, b) => !self.form(a)? || self.form(b)?,
            CForm::Iff(a, b) => self.form(a)? == self.form(b)?,
            CForm::Quant { exists, slot, body, .. } => self.find_fo(*slot, body, *exists)?.is_some() == *exists,
            CForm::Quant2 { exists, slot, var, body } => {
                self.find_so(*slot, var, body, *exists)?.is_some() == *exists
            }
        })
    }

    /// First element making `body` evaluate to `target`.
    fn find_fo(&mut self, slot: usize, body: &CForm, target: bool) -> Result<Option<usize>, MocheckError> {
        let saved = self.fo[slot];
        let mut found = None;
        for e in 0..self.n {
            self.fo[slot] = e;
            if self.form(body)? == target {
                found = Some(e);
                break;
            }
        }
        self.fo[slot] = saved;
        Ok(found)
    }

    /// First candidate, in lexicographic order, making `body` evaluate to
    /// `target`.
    fn find_so(
        &mut self,
        slot: usize,
        var: &SoVar,
        body: &CForm,
        target: bool,
    ) -> Result<Option<Vec<usize>>, MocheckError> {
        let (_, len) = self.check_candidates(var)?;
        let base = self.base(var);
        let saved = std::mem::replace(&mut self.so[slot], vec![0; len]);
        let mut found = None;
        loop {
            if self.form(body)? == target {
                found = Some(self.so[slot].clone());
                break;
            }
            if !Self::next_candidate(&mut self.so[slot], base) {
                break;
            }
        }
        self.so[slot] = saved;
        Ok(found)
    }

    /// Records the bindings that decide `f` at `value`.
    pub(crate) fn explain(&mut self, f: &CForm, value: bool, out: &mut Vec<Binding>) -> Result<(), MocheckError> {
        match f {
            CForm::Not(g) => self.explain(g, !value, out)?,
            CForm::And(gs) | CForm::Or(gs) => {
                let is_and = matches!(f, CForm::And(_));
                if value == is_and {
                    for g in gs {
                        self.explain(g, value, out)?;
                    }
                } else {
                    for g in gs {
                        if self.form(g)? == value {
                            return self.explain(g, value, out);
                        }
                    }
                }
            }
            CForm::Implies(a, b) => {
                if !value {
                    self.explain(a, true, out)?;
                    self.explain(b, false, out)?;
                } else if !self.form(a)? {
                    self.explain(a, false, out)?;
                } else {
                    self.explain(b, true, out)?;
                }
            }
            CForm::Iff(a, b) => {
                let va = self.form(a)?;
                self.explain(a, va, out)?;
                self.explain(b, if value { va } else { !va }, out)?;
            }
            CForm::Quant { exists, slot, name, body } if *exists == value => {
                if let Some(e) = self.find_fo(*slot, body, value)? {
                    out.push(Binding::Fo(name.clone(), e));
                    let saved = self.fo[*slot];
                    self.fo[*slot] = e;
                    let r = self.explain(body, value, out);
                    self.fo[*slot] = saved;
                    r?;
                }
            }
            CForm::Quant2 { exists, slot, var, body } if *exists == value => {
                if let Some(table) = self.find_so(*slot, var, body, value)? {
                    out.push(Binding::So { name: var.name.clone(), kind: var.kind, arity: var.arity, table: table.clone() });
                    let saved = std::mem::replace(&mut self.so[*slot], table);
                    let r = self.explain(body, value, out);
                    self.so[*slot] = saved;
                    r?;
                }
            }
            _ => {}
        }
        Ok(())
    }
}
