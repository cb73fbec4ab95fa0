use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::sexpr::{self, SExpr};
use super::FormulaError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Relation,
    Function,
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
    pub arity: usize,
}

impl Symbol {
    pub fn relation(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), kind: SymbolKind::Relation, arity }
    }

    pub fn function(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), kind: SymbolKind::Function, arity }
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Symbol { name: name.into(), kind: SymbolKind::Constant, arity: 0 }
    }

    fn validate(&self) -> Result<(), FormulaError> {
        let ok = match self.kind {
            SymbolKind::Constant => self.arity == 0,
            _ => self.arity >= 1,
        };
        if !ok || !sexpr::is_identifier(&self.name) {
            return Err(FormulaError::BadSymbol(self.to_string()));
        }
        Ok(())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Relation => write!(f, "(rel {} {})", self.name, self.arity),
            SymbolKind::Function => write!(f, "(fun {} {})", self.name, self.arity),
            SymbolKind::Constant => write!(f, "(const {})", self.name),
        }
    }
}

/// An ordered set of symbols with unique names.
///
/// Symbol order is insertion order; finite structures lay out their tables
/// in this order, one index space per kind.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vocabulary {
    symbols: Vec<Symbol>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_symbols(symbols: impl IntoIterator<Item = Symbol>) -> Result<Self, FormulaError> {
        let mut v = Self::new();
        for s in symbols {
            v.add(s)?;
        }
        Ok(v)
    }

    /// Adds a symbol. Re-adding an identical symbol is a no-op.
    pub fn add(&mut self, symbol: Symbol) -> Result<(), FormulaError> {
        symbol.validate()?;
        match self.get(&symbol.name) {
            Some(existing) if *existing == symbol => Ok(()),
            Some(existing) => Err(FormulaError::SymbolClash {
                name: symbol.name.clone(),
                existing: existing.to_string(),
                new: symbol.to_string(),
            }),
            None => {
                self.symbols.push(symbol);
                Ok(())
            }
        }
    }

    pub fn with(mut self, symbol: Symbol) -> Result<Self, FormulaError> {
        self.add(symbol)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn relations(&self) -> impl Iterator<Item = &Symbol> {
        self.of_kind(SymbolKind::Relation)
    }

    pub fn functions(&self) -> impl Iterator<Item = &Symbol> {
        self.of_kind(SymbolKind::Function)
    }

    pub fn constants(&self) -> impl Iterator<Item = &Symbol> {
        self.of_kind(SymbolKind::Constant)
    }

    fn of_kind(&self, kind: SymbolKind) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter().filter(move |s| s.kind == kind)
    }

    /// Position of `name` among the symbols of its own kind.
    pub fn kind_index(&self, name: &str) -> Option<(SymbolKind, usize)> {
        let sym = self.get(name)?;
        let idx = self.of_kind(sym.kind).position(|s| s.name == name)?;
        Some((sym.kind, idx))
    }

    pub fn union(&self, other: &Vocabulary) -> Result<Vocabulary, FormulaError> {
        let mut out = self.clone();
        for s in &other.symbols {
            out.add(s.clone())?;
        }
        Ok(out)
    }

    pub fn is_subset_of(&self, other: &Vocabulary) -> bool {
        self.symbols.iter().all(|s| other.get(&s.name) == Some(s))
    }

    /// Applies a symbol renaming; unmapped symbols are kept.
    pub fn rename(&self, mapping: &BTreeMap<String, String>) -> Result<Vocabulary, FormulaError> {
        let mut out = Vocabulary::new();
        for s in &self.symbols {
            let name = mapping.get(&s.name).cloned().unwrap_or_else(|| s.name.clone());
            out.add(Symbol { name, ..s.clone() })?;
        }
        Ok(out)
    }

    /// Parses the line-oriented vocabulary format:
    /// `(rel name arity)`, `(fun name arity)`, `(const name)`.
    pub fn parse(text: &str) -> Result<Self, FormulaError> {
        let mut v = Vocabulary::new();
        for item in sexpr::read_all(text)? {
            v.add(symbol_from_sexpr(&item)?)?;
        }
        Ok(v)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for s in &self.symbols {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }
}

pub(crate) fn symbol_from_sexpr(item: &SExpr) -> Result<Symbol, FormulaError> {
    let bad = |msg: &str| FormulaError::Syntax { pos: item.pos(), msg: msg.to_string() };
    let list = item.as_list().ok_or_else(|| bad("expected symbol declaration"))?;
    let head = list.first().and_then(SExpr::as_atom).ok_or_else(|| bad("expected rel, fun or const"))?;
    let name = |i: usize| {
        list.get(i).and_then(SExpr::as_atom).map(str::to_string).ok_or_else(|| bad("expected symbol name"))
    };
    let arity = |i: usize| -> Result<usize, FormulaError> {
        list.get(i)
            .and_then(SExpr::as_atom)
            .and_then(|a| a.parse().ok())
            .ok_or_else(|| bad("expected arity"))
    };
    let sym = match (head, list.len()) {
        ("rel", 3) => Symbol::relation(name(1)?, arity(2)?),
        ("fun", 3) => Symbol::function(name(1)?, arity(2)?),
        ("const", 2) => Symbol::constant(name(1)?),
        _ => return Err(bad("malformed symbol declaration")),
    };
    sym.validate()?;
    Ok(sym)
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match s.kind {
                SymbolKind::Constant => write!(f, "{}", s.name)?,
                _ => write!(f, "{}/{}", s.name, s.arity)?,
            }
        }
        write!(f, "}}")
    }
}
