use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::StructureError;
use crate::formula::{Symbol, SymbolKind, Vocabulary};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelTable {
    pub arity: usize,
    /// Indexed by the tuple read as a base-n number, first argument most
    /// significant.
    pub bits: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunTable {
    pub arity: usize,
    pub values: Vec<usize>,
}

/// A finite structure. Elements are `0..n` in memory and carry string ids.
/// Tables are stored per kind in vocabulary order.
#[derive(Clone, Debug)]
pub struct FiniteStructure {
    names: Vec<String>,
    vocab: Vocabulary,
    rels: Vec<RelTable>,
    funs: Vec<FunTable>,
    consts: Vec<usize>,
}

pub fn tuple_index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

pub fn tuple_at(n: usize, arity: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

/// Element names of the tuple at `idx`, comma separated.
pub fn tuple_names(s: &FiniteStructure, arity: usize, idx: usize) -> String {
    let args: Vec<&str> = tuple_at(s.size(), arity, idx).iter().map(|&e| s.name(e)).collect();
    args.join(",")
}

impl FiniteStructure {
    /// Structure on `n` elements named `0..n`: empty relations, functions
    /// constantly 0, constants 0.
    pub fn new(vocab: Vocabulary, n: usize) -> Result<Self, StructureError> {
        Self::with_names(vocab, (0..n).map(|i| i.to_string()).collect())
    }

    pub fn with_names(vocab: Vocabulary, names: Vec<String>) -> Result<Self, StructureError> {
        if names.is_empty() {
            return Err(StructureError::Malformed("domain must be nonempty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &names {
            if !seen.insert(name) {
                return Err(StructureError::Malformed(format!("duplicate element '{name}'")));
            }
        }
        let n = names.len();
        let size = |arity: usize| {
            n.checked_pow(arity as u32)
                .filter(|s| *s <= 1 << 26)
                .ok_or_else(|| StructureError::Malformed(format!("table of arity {arity} over {n} elements is too large")))
        };
        let mut rels = Vec::new();
        for r in vocab.relations() {
            rels.push(RelTable { arity: r.arity, bits: vec![false; size(r.arity)?] });
        }
        let mut funs = Vec::new();
        for f in vocab.functions() {
            funs.push(FunTable { arity: f.arity, values: vec![0; size(f.arity)?] });
        }
        let consts = vec![0; vocab.constants().count()];
        Ok(FiniteStructure { names, vocab, rels, funs, consts })
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn rel_tables(&self) -> &[RelTable] {
        &self.rels
    }

    pub fn fun_tables(&self) -> &[FunTable] {
        &self.funs
    }

    pub fn const_values(&self) -> &[usize] {
        &self.consts
    }

    fn index(&self, name: &str, kind: SymbolKind) -> Result<usize, StructureError> {
        match self.vocab.kind_index(name) {
            Some((k, i)) if k == kind => Ok(i),
            _ => Err(StructureError::UnknownSymbol(name.to_string())),
        }
    }

    pub fn holds(&self, rel: usize, args: &[usize]) -> bool {
        self.rels[rel].bits[tuple_index(self.size(), args)]
    }

    pub fn apply(&self, fun: usize, args: &[usize]) -> usize {
        self.funs[fun].values[tuple_index(self.size(), args)]
    }

    pub fn constant(&self, c: usize) -> usize {
        self.consts[c]
    }

    pub fn holds_named(&self, rel: &str, args: &[usize]) -> Result<bool, StructureError> {
        Ok(self.holds(self.index(rel, SymbolKind::Relation)?, args))
    }

    pub fn apply_named(&self, fun: &str, args: &[usize]) -> Result<usize, StructureError> {
        Ok(self.apply(self.index(fun, SymbolKind::Function)?, args))
    }

    pub fn constant_named(&self, c: &str) -> Result<usize, StructureError> {
        Ok(self.constant(self.index(c, SymbolKind::Constant)?))
    }

    pub fn set_rel(&mut self, rel: &str, args: &[usize], value: bool) -> Result<(), StructureError> {
        let i = self.index(rel, SymbolKind::Relation)?;
        self.check_args(self.rels[i].arity, args)?;
        let at = tuple_index(self.size(), args);
        self.rels[i].bits[at] = value;
        Ok(())
    }

    pub fn set_fun(&mut self, fun: &str, args: &[usize], value: usize) -> Result<(), StructureError> {
        let i = self.index(fun, SymbolKind::Function)?;
        self.check_args(self.funs[i].arity, args)?;
        self.check_args(1, &[value])?;
        let at = tuple_index(self.size(), args);
        self.funs[i].values[at] = value;
        Ok(())
    }

    pub fn set_const(&mut self, c: &str, value: usize) -> Result<(), StructureError> {
        let i = self.index(c, SymbolKind::Constant)?;
        self.check_args(1, &[value])?;
        self.consts[i] = value;
        Ok(())
    }

    /// Replaces tables wholesale (used by the model finder).
    pub(crate) fn from_tables(
        vocab: Vocabulary,
        n: usize,
        rels: Vec<RelTable>,
        funs: Vec<FunTable>,
        consts: Vec<usize>,
    ) -> Self {
        FiniteStructure { names: (0..n).map(|i| i.to_string()).collect(), vocab, rels, funs, consts }
    }

    fn check_args(&self, arity: usize, args: &[usize]) -> Result<(), StructureError> {
        if args.len() != arity {
            return Err(StructureError::Malformed(format!("expected {arity} argument(s), got {}", args.len())));
        }
        match args.iter().find(|&&a| a >= self.size()) {
            Some(a) => Err(StructureError::UnknownElement(a.to_string())),
            None => Ok(()),
        }
    }

    /// Re-checks the table invariants.
    pub fn validate(&self) -> Result<(), StructureError> {
        let n = self.size();
        for (f, t) in self.vocab.functions().zip(&self.funs) {
            if t.values.len() != n.pow(t.arity as u32) {
                return Err(StructureError::Malformed(format!("table of '{}' has wrong length", f.name)));
            }
            if let Some(i) = t.values.iter().position(|&v| v >= n) {
                let args: Vec<String> = tuple_at(n, t.arity, i).iter().map(|&e| self.names[e].clone()).collect();
                return Err(StructureError::Totality { function: f.name.clone(), args: args.join(",") });
            }
        }
        if self.consts.iter().any(|&c| c >= n) {
            return Err(StructureError::Malformed("constant outside the domain".into()));
        }
        Ok(())
    }

    /// Tuples of a relation in index order.
    pub fn tuples(&self, rel: usize) -> Vec<Vec<usize>> {
        let t = &self.rels[rel];
        t.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| tuple_at(self.size(), t.arity, i))
            .collect()
    }

    /// Same interpretation, element names aside, after permuting elements
    /// by `perm` (old index to new index).
    pub fn permuted(&self, perm: &[usize]) -> FiniteStructure {
        let n = self.size();
        let mut names = vec![String::new(); n];
        for (old, &new) in perm.iter().enumerate() {
            names[new] = self.names[old].clone();
        }
        let mut out = FiniteStructure::with_names(self.vocab.clone(), names).expect("same shape");
        for (ri, t) in self.rels.iter().enumerate() {
            for (i, &b) in t.bits.iter().enumerate() {
                if b {
                    let args: Vec<usize> = tuple_at(n, t.arity, i).iter().map(|&a| perm[a]).collect();
                    out.rels[ri].bits[tuple_index(n, &args)] = true;
                }
            }
        }
        for (fi, t) in self.funs.iter().enumerate() {
            for (i, &v) in t.values.iter().enumerate() {
                let args: Vec<usize> = tuple_at(n, t.arity, i).iter().map(|&a| perm[a]).collect();
                out.funs[fi].values[tuple_index(n, &args)] = perm[v];
            }
        }
        for (ci, &c) in self.consts.iter().enumerate() {
            out.consts[ci] = perm[c];
        }
        out
    }

    pub fn to_json_value(&self) -> StructureFile {
        let mut file = StructureFile { domain: self.names.clone(), ..Default::default() };
        for (ri, r) in self.vocab.relations().enumerate() {
            let tuples: Vec<Vec<String>> = self
                .tuples(ri)
                .into_iter()
                .map(|t| t.into_iter().map(|e| self.names[e].clone()).collect())
                .collect();
            if tuples.is_empty() {
                file.arities.get_or_insert_with(BTreeMap::new).insert(r.name.clone(), r.arity);
            }
            file.rels.insert(r.name.clone(), tuples);
        }
        for (fi, f) in self.vocab.functions().enumerate() {
            let t = &self.funs[fi];
            let mut table = BTreeMap::new();
            for (i, &v) in t.values.iter().enumerate() {
                let key: Vec<&str> = tuple_at(self.size(), f.arity, i).iter().map(|&e| self.names[e].as_str()).collect();
                table.insert(key.join(","), self.names[v].clone());
            }
            file.funs.insert(f.name.clone(), table);
        }
        for (ci, c) in self.vocab.constants().enumerate() {
            file.consts.insert(c.name.clone(), self.names[self.consts[ci]].clone());
        }
        file
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, StructureError> {
        let file: StructureFile = serde_json::from_str(text).map_err(|e| StructureError::Malformed(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &StructureFile) -> Result<Self, StructureError> {
        let malformed = |m: String| StructureError::Malformed(m);
        let mut vocab = Vocabulary::new();
        let arities = file.arities.clone().unwrap_or_default();
        for (name, tuples) in &file.rels {
            let arity = match (tuples.first(), arities.get(name)) {
                (Some(t), Some(&a)) if t.len() != a => {
                    return Err(malformed(format!("relation '{name}' declared with arity {a}")))
                }
                (Some(t), _) => t.len(),
                (None, Some(&a)) => a,
                (None, None) => return Err(malformed(format!("empty relation '{name}' needs an entry in \"arities\""))),
            };
            vocab.add(Symbol::relation(name.clone(), arity)).map_err(|e| malformed(e.to_string()))?;
        }
        if let Some(extra) = arities.keys().find(|k| !file.rels.contains_key(*k)) {
            return Err(malformed(format!("arity given for unknown relation '{extra}'")));
        }
        for (name, table) in &file.funs {
            let arity = table
                .keys()
                .next()
                .map(|k| k.split(',').count())
                .ok_or_else(|| StructureError::Totality { function: name.clone(), args: file.domain.first().cloned().unwrap_or_default() })?;
            vocab.add(Symbol::function(name.clone(), arity)).map_err(|e| malformed(e.to_string()))?;
        }
        for name in file.consts.keys() {
            vocab.add(Symbol::constant(name.clone())).map_err(|e| malformed(e.to_string()))?;
        }
        if file.domain.iter().any(|d| d.contains(',')) {
            return Err(malformed("element ids may not contain ','".into()));
        }
        let mut s = FiniteStructure::with_names(vocab, file.domain.clone())?;
        let elem = |s: &FiniteStructure, name: &str| s.element(name).ok_or_else(|| StructureError::UnknownElement(name.to_string()));
        for (name, tuples) in &file.rels {
            for t in tuples {
                let args = t.iter().map(|e| elem(&s, e)).collect::<Result<Vec<_>, _>>()?;
                let arity = s.vocab.get(name).unwrap().arity;
                if args.len() != arity {
                    return Err(malformed(format!("tuple of wrong length in '{name}'")));
                }
                s.set_rel(name, &args, true)?;
            }
        }
        for (name, table) in &file.funs {
            let arity = s.vocab.get(name).unwrap().arity;
            let n = s.size();
            let mut seen = vec![false; n.pow(arity as u32)];
            for (k, v) in table {
                let args = k.split(',').map(|e| elem(&s, e)).collect::<Result<Vec<_>, _>>()?;
                if args.len() != arity {
                    return Err(malformed(format!("key '{k}' of '{name}' has the wrong number of arguments")));
                }
                let value = elem(&s, v)?;
                seen[tuple_index(n, &args)] = true;
                s.set_fun(name, &args, value)?;
            }
            if let Some(i) = seen.iter().position(|b| !b) {
                let args: Vec<String> = tuple_at(n, arity, i).iter().map(|&e| s.names[e].clone()).collect();
                return Err(StructureError::Totality { function: name.clone(), args: args.join(",") });
            }
        }
        for (name, v) in &file.consts {
            let value = elem(&s, v)?;
            s.set_const(name, value)?;
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, StructureError> {
        let text = std::fs::read_to_string(path).map_err(|e| StructureError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), StructureError> {
        std::fs::write(path, self.to_json()).map_err(|e| StructureError::Io(format!("{}: {e}", path.display())))
    }
}

/// Interpretations agree symbol by symbol; vocabulary order is immaterial.
impl PartialEq for FiniteStructure {
    fn eq(&self, other: &Self) -> bool {
        if self.names != other.names || self.vocab.len() != other.vocab.len() {
            return false;
        }
        self.vocab.symbols().iter().all(|s| {
            if other.vocab.get(&s.name) != Some(s) {
                return false;
            }
            let (_, i) = self.vocab.kind_index(&s.name).unwrap();
            let (_, j) = other.vocab.kind_index(&s.name).unwrap();
            match s.kind {
                SymbolKind::Relation => self.rels[i] == other.rels[j],
                SymbolKind::Function => self.funs[i] == other.funs[j],
                SymbolKind::Constant => self.consts[i] == other.consts[j],
            }
        })
    }
}

impl Eq for FiniteStructure {}

/// On-disk structure format.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub domain: Vec<String>,
    #[serde(default)]
    pub rels: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub funs: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub consts: BTreeMap<String, String>,
    /// Only needed for relations with no tuples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arities: Option<BTreeMap<String, usize>>,
}

/// Strict linear order `0 < 1 < ... < n-1` on symbol `rel`.
pub fn linear_order(n: usize, rel: &str) -> FiniteStructure {
    let vocab = Vocabulary::new().with(Symbol::relation(rel, 2)).expect("valid symbol");
    let mut s = FiniteStructure::new(vocab, n).expect("nonempty");
    for a in 0..n {
        for b in a + 1..n {
            s.set_rel(rel, &[a, b], true).unwrap();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_element_order_file() {
        let text = r#"{"domain":["a","b","c"],"rels":{"<":[["a","b"],["a","c"],["b","c"]]}}"#;
        let s = FiniteStructure::from_json(text).unwrap();
        assert_eq!(s.tuples(0).len(), 3);
        assert!(s.holds_named("<", &[0, 2]).unwrap());
        assert!(!s.holds_named("<", &[2, 0]).unwrap());
    }

    #[test]
    fn partial_function_is_rejected() {
        let text = r#"{"domain":["0","1"],"funs":{"S":{"0":"1"}},"consts":{"0":"0"}}"#;
        assert_eq!(
            FiniteStructure::from_json(text),
            Err(StructureError::Totality { function: "S".into(), args: "1".into() })
        );
    }

    #[test]
    fn empty_relations_need_arity() {
        assert!(FiniteStructure::from_json(r#"{"domain":["a"],"rels":{"R":[]}}"#).is_err());
        let s = FiniteStructure::from_json(r#"{"domain":["a"],"rels":{"R":[]},"arities":{"R":2}}"#).unwrap();
        assert_eq!(s.vocab().get("R").unwrap().arity, 2);
        assert_eq!(FiniteStructure::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn binary_function_keys() {
        let mut vocab = Vocabulary::new();
        vocab.add(Symbol::function("+", 2)).unwrap();
        let mut s = FiniteStructure::new(vocab, 2).unwrap();
        s.set_fun("+", &[1, 1], 0).unwrap();
        s.set_fun("+", &[0, 1], 1).unwrap();
        s.set_fun("+", &[1, 0], 1).unwrap();
        let json = s.to_json();
        assert!(json.contains("\"1,1\": \"0\""));
        assert_eq!(FiniteStructure::from_json(&json).unwrap(), s);
    }

    #[test]
    fn permutation_preserves_shape() {
        let s = linear_order(3, "<");
        let p = s.permuted(&[2, 1, 0]);
        assert!(p.holds(0, &[2, 1]));
        assert_eq!(p.names()[2], "0");
    }
}
