use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::parse::{check_formula, parse_formula, parse_formula_with, ParseOptions};
use super::schema::Schema;
use super::sentences::ia0;
use super::sexpr::{self, SExpr};
use super::syntax::{Formula, Term};
use super::transform::{relativize, rename_vocab};
use super::vocab::{symbol_from_sexpr, Symbol, SymbolKind, Vocabulary};
use super::FormulaError;

pub const THEORY_IDS: &[&str] = &[
    "succ-core",
    "pa-fo",
    "pa2",
    "t1t2",
    "pa-star-pair",
    "zf-fragment",
    "zf-doubled",
    "gamma",
    "linear-order",
    "at-least",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub vocab: Vocabulary,
    pub axioms: Vec<Axiom>,
    pub schemas: Vec<Schema>,
}

impl Theory {
    pub fn new(id: impl Into<String>, vocab: Vocabulary) -> Theory {
        Theory { id: id.into(), params: BTreeMap::new(), vocab, axioms: Vec::new(), schemas: Vec::new() }
    }

    pub fn add_axiom(&mut self, name: impl Into<String>, formula: Formula) -> Result<(), FormulaError> {
        check_formula(&formula, &self.vocab)?;
        if !formula.is_sentence() {
            return Err(FormulaError::IllFormed("axioms must be sentences".into()));
        }
        self.axioms.push(Axiom { name: name.into(), formula });
        Ok(())
    }

    pub fn add_schema(&mut self, schema: Schema) -> Result<(), FormulaError> {
        self.vocab = self.vocab.union(&schema.permitted)?;
        schema.check(&self.vocab)?;
        self.schemas.push(schema);
        Ok(())
    }

    pub fn is_first_order(&self) -> bool {
        self.axioms.iter().all(|a| a.formula.is_first_order())
    }

    /// Axioms followed by every schema instance whose ψ has size at most
    /// `schema_bound` (0 disables instances).
    pub fn expand(&self, schema_bound: usize) -> Vec<Axiom> {
        let mut out = self.axioms.clone();
        if schema_bound > 0 {
            for s in &self.schemas {
                for (i, f) in s.instances(schema_bound).enumerate() {
                    out.push(Axiom { name: format!("{}#{i}", s.name), formula: f });
                }
            }
        }
        out
    }

    /// Conjunction of the finite axioms.
    pub fn conjunction(&self) -> Formula {
        Formula::conj(self.axioms.iter().map(|a| a.formula.clone()).collect())
    }

    /// Same theory with symbols renamed, schemas included.
    pub fn renamed(&self, mapping: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
        let vocab = self.vocab.rename(mapping)?;
        let mut out = Theory { id: self.id.clone(), params: self.params.clone(), vocab, ..Theory::default() };
        for a in &self.axioms {
            out.axioms.push(Axiom { name: a.name.clone(), formula: rename_vocab(&a.formula, &self.vocab, mapping)? });
        }
        for s in &self.schemas {
            let inner: BTreeMap<String, String> =
                mapping.iter().filter(|(k, _)| s.permitted.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect();
            out.schemas.push(Schema {
                name: s.name.clone(),
                template: rename_vocab(&s.template, &self.vocab, mapping)?,
                designated: s.designated.clone(),
                permitted: s.permitted.rename(&inner)?,
            });
        }
        Ok(out)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "(theory {}", self.id);
        for (k, v) in &self.params {
            let _ = write!(out, " ({k} {v})");
        }
        out.push_str(")\n");
        out.push_str(&self.vocab.to_file_string());
        for a in &self.axioms {
            let _ = writeln!(out, "(axiom {} {})", a.name, a.formula);
        }
        for s in &self.schemas {
            let _ = write!(out, "(schema {} (", s.name);
            let _ = write!(out, "{}", s.designated.join(" "));
            out.push_str(") (");
            let decls: Vec<String> = s.permitted.symbols().iter().map(Symbol::to_string).collect();
            out.push_str(&decls.join(" "));
            let _ = writeln!(out, ") {})", s.template);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Theory, FormulaError> {
        let items = sexpr::read_all(text)?;
        let syn = |pos: usize, msg: &str| FormulaError::Syntax { pos, msg: msg.to_string() };
        let header = items.first().ok_or_else(|| syn(0, "missing theory header"))?;
        let h = header.as_list().ok_or_else(|| syn(header.pos(), "expected (theory id ...)"))?;
        if h.first().and_then(SExpr::as_atom) != Some("theory") || h.len() < 2 {
            return Err(syn(header.pos(), "expected (theory id ...)"));
        }
        let id = h[1].as_atom().ok_or_else(|| syn(h[1].pos(), "expected theory id"))?.to_string();
        let mut params = BTreeMap::new();
        for p in &h[2..] {
            match p.as_list() {
                Some([SExpr::Atom { text: k, .. }, SExpr::Atom { text: v, .. }]) => {
                    params.insert(k.clone(), v.clone());
                }
                _ => return Err(syn(p.pos(), "expected (key value)")),
            }
        }
        let mut vocab = Vocabulary::new();
        let mut axiom_items = Vec::new();
        let mut schema_items = Vec::new();
        for item in &items[1..] {
            match item.as_list().and_then(|l| l.first()).and_then(SExpr::as_atom) {
                Some("rel" | "fun" | "const") => vocab.add(symbol_from_sexpr(item)?)?,
                Some("axiom") => axiom_items.push(item),
                Some("schema") => schema_items.push(item),
                _ => return Err(syn(item.pos(), "expected declaration, axiom or schema")),
            }
        }
        let mut theory = Theory { id, params, vocab, axioms: Vec::new(), schemas: Vec::new() };
        for item in schema_items {
            let l = item.as_list().unwrap();
            if l.len() != 5 {
                return Err(syn(item.pos(), "expected (schema name (vars) (vocab) template)"));
            }
            let name = l[1].as_atom().ok_or_else(|| syn(l[1].pos(), "expected schema name"))?;
            let designated = l[2]
                .as_list()
                .ok_or_else(|| syn(l[2].pos(), "expected variable list"))?
                .iter()
                .map(|e| e.as_atom().map(str::to_string).ok_or_else(|| syn(e.pos(), "expected variable")))
                .collect::<Result<Vec<_>, _>>()?;
            let mut permitted = Vocabulary::new();
            for d in l[3].as_list().ok_or_else(|| syn(l[3].pos(), "expected vocabulary list"))? {
                permitted.add(symbol_from_sexpr(d)?)?;
            }
            let scope = theory.vocab.union(&permitted)?;
            let template = reparse(&l[4], text, &scope, true)?;
            theory.add_schema(Schema::new(name, template, designated, permitted)?)?;
        }
        for item in axiom_items {
            let l = item.as_list().unwrap();
            if l.len() != 3 {
                return Err(syn(item.pos(), "expected (axiom name formula)"));
            }
            let name = l[1].as_atom().ok_or_else(|| syn(l[1].pos(), "expected axiom name"))?;
            let f = reparse(&l[2], text, &theory.vocab, false)?;
            theory.add_axiom(name, f)?;
        }
        Ok(theory)
    }
}

impl Default for Theory {
    fn default() -> Self {
        Theory::new("", Vocabulary::new())
    }
}

/// Parses a sub-expression of `text` so that error positions stay absolute.
fn reparse(e: &SExpr, text: &str, vocab: &Vocabulary, allow_hole: bool) -> Result<Formula, FormulaError> {
    let start = e.pos();
    let end = span_end(text, start);
    let slice = &text[start..end];
    parse_formula_with(slice, vocab, ParseOptions { allow_hole }).map_err(|err| shift(err, start))
}

fn span_end(text: &str, start: usize) -> usize {
    let bytes = text.as_bytes();
    if bytes[start] != b'(' {
        return start + text[start..].find(|c: char| c.is_whitespace() || c == '(' || c == ')' || c == ';').unwrap_or(text.len() - start);
    }
    let (mut depth, mut i) = (0usize, start);
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return i + 1;
                }
            }
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            _ => {}
        }
        i += 1;
    }
    text.len()
}

fn shift(err: FormulaError, by: usize) -> FormulaError {
    match err {
        FormulaError::Syntax { pos, msg } => FormulaError::Syntax { pos: pos + by, msg },
        FormulaError::UnknownSymbol { pos, name } => FormulaError::UnknownSymbol { pos: pos + by, name },
        FormulaError::Arity { pos, name, expected, found } => {
            FormulaError::Arity { pos: pos + by, name, expected, found }
        }
        FormulaError::KindMismatch { pos, name, expected, found } => {
            FormulaError::KindMismatch { pos: pos + by, name, expected, found }
        }
        other => other,
    }
}

/// Name of a symbol in the k-th copy of a vocabulary: `S` becomes `S1`,
/// `0` becomes `0_1`, `+` becomes `+_1`.
pub fn copy_name(name: &str, k: usize) -> String {
    match name.chars().last() {
        Some(c) if c.is_alphabetic() => format!("{name}{k}"),
        _ => format!("{name}_{k}"),
    }
}

fn copy_mapping(vocab: &Vocabulary, k: usize) -> BTreeMap<String, String> {
    vocab.symbols().iter().map(|s| (s.name.clone(), copy_name(&s.name, k))).collect()
}

fn fmla(text: &str, vocab: &Vocabulary) -> Formula {
    parse_formula(text, vocab).unwrap_or_else(|e| panic!("built-in axiom {text}: {e}"))
}

fn template(text: &str, vocab: &Vocabulary) -> Formula {
    parse_formula_with(text, vocab, ParseOptions { allow_hole: true })
        .unwrap_or_else(|e| panic!("built-in template {text}: {e}"))
}

struct Params<'a> {
    raw: &'a BTreeMap<String, String>,
    allowed: &'a [&'a str],
}

impl Params<'_> {
    fn check(&self, id: &str) -> Result<(), FormulaError> {
        match self.raw.keys().find(|k| !self.allowed.contains(&k.as_str())) {
            Some(k) => Err(FormulaError::BadParams(format!("'{id}' does not take parameter '{k}'"))),
            None => Ok(()),
        }
    }

    fn flag(&self, key: &str) -> Result<bool, FormulaError> {
        match self.raw.get(key).map(String::as_str) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(v) => Err(FormulaError::BadParams(format!("{key}={v} is not a boolean"))),
        }
    }

    fn num(&self, key: &str) -> Result<Option<usize>, FormulaError> {
        self.raw
            .get(key)
            .map(|v| v.parse().map_err(|_| FormulaError::BadParams(format!("{key}={v} is not a number"))))
            .transpose()
    }

    fn name(&self, key: &str, default: &str) -> Result<String, FormulaError> {
        let v = self.raw.get(key).cloned().unwrap_or_else(|| default.to_string());
        if !sexpr::is_identifier(&v) {
            return Err(FormulaError::BadParams(format!("{key}={v} is not a symbol name")));
        }
        Ok(v)
    }
}

/// Builds one of the theories in [`THEORY_IDS`].
pub fn build_theory(id: &str, params: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    let mut t = match id {
        "succ-core" => succ_core(params)?,
        "pa-fo" => pa_fo(params)?,
        "pa2" => pa2(params)?,
        "t1t2" => t1t2(params)?,
        "pa-star-pair" => pa_star_pair(params)?,
        "zf-fragment" => zf_fragment(params)?,
        "zf-doubled" => zf_doubled(params)?,
        "gamma" => gamma(params)?,
        "linear-order" => linear_order(params)?,
        "at-least" => at_least(params)?,
        _ => return Err(FormulaError::UnknownId(id.to_string())),
    };
    t.id = id.to_string();
    t.params = params.clone();
    for a in &t.axioms {
        check_formula(&a.formula, &t.vocab)?;
    }
    Ok(t)
}

fn succ_vocab() -> Vocabulary {
    Vocabulary::from_symbols([Symbol::function("S", 1), Symbol::constant("0")]).unwrap()
}

fn succ_axioms(t: &mut Theory) -> Result<(), FormulaError> {
    let v = succ_vocab();
    t.add_axiom("succ-injective", fmla("(forall x (forall y (-> (= (S x) (S y)) (= x y))))", &v))?;
    t.add_axiom("zero-not-successor", fmla("(forall x (not (= (S x) 0)))", &v))
}

/// Copy `k` of a successor-style theory relativized to `N_k`, together with
/// the closure axioms for its constants and functions.
fn relativized_copy(base: &Theory, k: usize, also_so: bool) -> Result<Theory, FormulaError> {
    let map = copy_mapping(&base.vocab, k);
    let copy = base.renamed(&map)?;
    let n = copy_name("N", k);
    let mut vocab = Vocabulary::new().with(Symbol::relation(n.clone(), 1))?;
    vocab = vocab.union(&copy.vocab)?;
    let mut out = Theory::new(base.id.clone(), vocab);
    for a in &copy.axioms {
        out.add_axiom(a.name.clone(), relativize(&a.formula, &n, also_so)?)?;
    }
    for (name, f) in closure_axioms(&copy.vocab, &n) {
        out.add_axiom(name, f)?;
    }
    Ok(out)
}

fn closure_axioms(vocab: &Vocabulary, n: &str) -> Vec<(String, Formula)> {
    let mut out = Vec::new();
    for s in vocab.symbols() {
        match s.kind {
            SymbolKind::Constant => {
                out.push((format!("{n}-contains-{}", s.name), Formula::atom1(n, Term::constant(s.name.clone()))));
            }
            SymbolKind::Function => {
                let vars: Vec<String> = (0..s.arity).map(|i| format!("x{i}")).collect();
                let args: Vec<Term> = vars.iter().map(|v| Term::var(v.clone())).collect();
                let pre = Formula::conj(args.iter().map(|a| Formula::atom1(n, a.clone())).collect());
                let post = Formula::atom1(n, Term::app(s.name.clone(), args));
                out.push((format!("{n}-closed-{}", s.name), Formula::forall_all(vars, Formula::implies(pre, post))));
            }
            SymbolKind::Relation => {}
        }
    }
    out
}

fn succ_core(raw: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    let p = Params { raw, allowed: &["copy", "doubled"] };
    p.check("succ-core")?;
    let mut base = Theory::new("succ-core", succ_vocab());
    succ_axioms(&mut base)?;
    let copy = p.num("copy")?;
    if p.flag("doubled")? {
        if copy.is_some() {
            return Err(FormulaError::BadParams("copy and doubled are exclusive".into()));
        }
        return join(relativized_copy(&base, 1, false)?, relativized_copy(&base, 2, false)?);
    }
    match copy {
        Some(0) => Err(FormulaError::BadParams("copies are numbered from 1".into())),
        Some(k) => base.renamed(&copy_mapping(&base.vocab, k)),
        None => Ok(base),
    }
}

fn join(a: Theory, b: Theory) -> Result<Theory, FormulaError> {
    let mut out = Theory::new(a.id.clone(), a.vocab.union(&b.vocab)?);
    out.axioms = a.axioms.into_iter().chain(b.axioms).collect();
    for s in a.schemas.into_iter().chain(b.schemas) {
        out.add_schema(s)?;
    }
    Ok(out)
}

fn arith_vocab() -> Vocabulary {
    Vocabulary::from_symbols([
        Symbol::function("+", 2),
        Symbol::function("*", 2),
        Symbol::constant("0"),
        Symbol::constant("1"),
    ])
    .unwrap()
}

fn arith_axioms(t: &mut Theory) -> Result<(), FormulaError> {
    let v = arith_vocab();
    let list = [
        ("succ-not-zero", "(forall x (not (= (+ x 1) 0)))"),
        ("succ-injective", "(forall x (forall y (-> (= (+ x 1) (+ y 1)) (= x y))))"),
        ("add-zero", "(forall x (= (+ x 0) x))"),
        ("add-succ", "(forall x (forall y (= (+ x (+ y 1)) (+ (+ x y) 1))))"),
        ("mul-zero", "(forall x (= (* x 0) 0))"),
        ("mul-succ", "(forall x (forall y (= (* x (+ y 1)) (+ (* x y) x))))"),
    ];
    for (name, text) in list {
        t.add_axiom(name, fmla(text, &v))?;
    }
    Ok(())
}

fn arith_induction(t: &mut Theory, k: Option<usize>, relativized: bool, permitted: Vocabulary) -> Result<(), FormulaError> {
    let name = |s: &str| k.map(|k| copy_name(s, k)).unwrap_or_else(|| s.to_string());
    let (zero, one, plus) = (name("0"), name("1"), name("+"));
    let text = if relativized {
        let n = name("N");
        format!(
            "(-> (and ($psi {zero}) (forall x (-> (and ({n} x) ($psi x)) ($psi ({plus} x {one}))))) (forall x (-> ({n} x) ($psi x))))"
        )
    } else {
        format!("(-> (and ($psi {zero}) (forall x (-> ($psi x) ($psi ({plus} x {one}))))) (forall x ($psi x)))")
    };
    let scope = t.vocab.union(&permitted)?;
    let tpl = template(&text, &scope);
    t.add_schema(Schema::new(format!("{}induction", k.map(|k| format!("{k}-")).unwrap_or_default()), tpl, vec!["x".into()], permitted)?)
}

fn pa_fo(raw: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    let p = Params { raw, allowed: &["copy", "relativize", "joint"] };
    p.check("pa-fo")?;
    let copy = p.num("copy")?;
    let (rel, joint) = (p.flag("relativize")?, p.flag("joint")?);
    let mut base = Theory::new("pa-fo", arith_vocab());
    arith_axioms(&mut base)?;
    let Some(k) = copy else {
        if rel || joint {
            return Err(FormulaError::BadParams("relativize and joint need a copy number".into()));
        }
        let permitted = base.vocab.clone();
        arith_induction(&mut base, None, false, permitted)?;
        return Ok(base);
    };
    if k == 0 {
        return Err(FormulaError::BadParams("copies are numbered from 1".into()));
    }
    let mut t = if rel { relativized_copy(&base, k, false)? } else { base.renamed(&copy_mapping(&base.vocab, k))? };
    let permitted = if joint {
        // Relativized copies also admit the ambient {+,*,0,1}; same-domain
        // copies share only the two copied vocabularies.
        let mut v = if rel { arith_vocab() } else { Vocabulary::new() };
        for j in [1, 2] {
            v = v.union(&arith_vocab().rename(&copy_mapping(&arith_vocab(), j))?)?;
        }
        v
    } else {
        t.vocab.clone()
    };
    arith_induction(&mut t, Some(k), rel, permitted)?;
    Ok(t)
}

fn pa_star_pair(raw: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    Params { raw, allowed: &[] }.check("pa-star-pair")?;
    let mut parts = Vec::new();
    for k in ["1", "2"] {
        let mut params = BTreeMap::new();
        params.insert("copy".to_string(), k.to_string());
        params.insert("joint".to_string(), "true".to_string());
        parts.push(pa_fo(&params)?);
    }
    let b = parts.pop().unwrap();
    join(parts.pop().unwrap(), b)
}

fn pa2(raw: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    let p = Params { raw, allowed: &["copy", "relativize"] };
    p.check("pa2")?;
    let mut base = Theory::new("pa2", succ_vocab());
    succ_axioms(&mut base)?;
    base.add_axiom(
        "induction",
        fmla("(forall2 (X 1) (-> (and (X 0) (forall x (-> (X x) (X (S x))))) (forall x (X x))))", &succ_vocab()),
    )?;
    match (p.num("copy")?, p.flag("relativize")?) {
        (None, false) => Ok(base),
        (None, true) | (Some(0), _) => Err(FormulaError::BadParams("relativize needs a copy number ≥ 1".into())),
        (Some(k), false) => base.renamed(&copy_mapping(&base.vocab, k)),
        (Some(k), true) => relativized_copy(&base, k, true),
    }
}

fn t1t2(raw: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    Params { raw, allowed: &[] }.check("t1t2")?;
    let mut base = Theory::new("t1t2", succ_vocab());
    succ_axioms(&mut base)?;
    let t1 = relativized_copy(&base, 1, false)?;
    let t2 = relativized_copy(&base, 2, false)?;
    let mut t = join(t1, t2)?;
    let joint = t.vocab.clone();
    for k in [1, 2] {
        let (n, s, z) = (copy_name("N", k), copy_name("S", k), copy_name("0", k));
        let tpl = template(
            &format!("(-> (and ($psi {z}) (forall x (-> (and ({n} x) ($psi x)) ($psi ({s} x))))) (forall x (-> ({n} x) ($psi x))))"),
            &joint,
        );
        t.add_schema(Schema::new(format!("{k}-induction"), tpl, vec!["x".into()], joint.clone())?)?;
    }
    Ok(t)
}

fn zf_axioms(t: &mut Theory, mem: &str) -> Result<(), FormulaError> {
    let v = Vocabulary::new().with(Symbol::relation("in", 2))?;
    let list = [
        ("extensionality", "(forall x (forall y (-> (forall z (<-> (in z x) (in z y))) (= x y))))"),
        ("pairing", "(forall x (forall y (exists z (and (in x z) (in y z)))))"),
        ("union", "(forall x (exists y (forall z (forall w (-> (and (in z w) (in w x)) (in z y))))))"),
        ("power-set", "(forall x (exists y (forall z (-> (forall w (-> (in w z) (in w x))) (in z y)))))"),
        ("empty-set", "(exists x (forall y (not (in y x))))"),
        (
            "infinity",
            "(exists x (and (exists e (and (in e x) (forall y (not (in y e))))) (forall y (-> (in y x) (exists z (and (in z x) (forall w (<-> (in w z) (or (in w y) (= w y))))))))))",
        ),
    ];
    let map: BTreeMap<String, String> = [("in".to_string(), mem.to_string())].into();
    for (name, text) in list {
        t.add_axiom(name, rename_vocab(&fmla(text, &v), &v, &map)?)?;
    }
    Ok(())
}

fn zf_theory(mem: &str, other: Option<&str>) -> Result<Theory, FormulaError> {
    let mut vocab = Vocabulary::new().with(Symbol::relation(mem, 2))?;
    if let Some(o) = other {
        if o == mem {
            return Err(FormulaError::BadParams("the two membership symbols must differ".into()));
        }
        vocab.add(Symbol::relation(o, 2))?;
    }
    let mut t = Theory::new("zf-fragment", vocab.clone());
    zf_axioms(&mut t, mem)?;
    let found = fmla(
        &format!("(forall x (-> (exists y ({mem} y x)) (exists y (and ({mem} y x) (not (exists z (and ({mem} z y) ({mem} z x))))))))"),
        &vocab,
    );
    t.axioms.insert(1, Axiom { name: "foundation".into(), formula: found });
    let sep = template(&format!("(forall a (exists b (forall x (<-> ({mem} x b) (and ({mem} x a) ($psi x))))))"), &vocab);
    t.add_schema(Schema::new("separation", sep, vec!["x".into()], vocab.clone())?)?;
    let rep = template(
        &format!(
            "(forall a (-> (forall x (-> ({mem} x a) (exists y (forall w (<-> ($psi x w) (= w y)))))) (exists b (forall y (-> (exists x (and ({mem} x a) ($psi x y))) ({mem} y b))))))"
        ),
        &vocab,
    );
    t.add_schema(Schema::new("replacement", rep, vec!["x".into(), "y".into()], vocab)?)?;
    Ok(t)
}

fn zf_fragment(raw: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    let p = Params { raw, allowed: &["mem", "other"] };
    p.check("zf-fragment")?;
    let mem = p.name("mem", "in")?;
    let other = raw.get("other").map(|_| p.name("other", "")).transpose()?;
    zf_theory(&mem, other.as_deref())
}

fn zf_doubled(raw: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    let p = Params { raw, allowed: &["e1", "e2"] };
    p.check("zf-doubled")?;
    let (e1, e2) = (p.name("e1", "E1")?, p.name("e2", "E2")?);
    let a = zf_theory(&e1, Some(&e2))?;
    let mut b = zf_theory(&e2, Some(&e1))?;
    for s in &mut b.schemas {
        s.name = format!("{}'", s.name);
    }
    for ax in &mut b.axioms {
        ax.name = format!("{}'", ax.name);
    }
    join(a, b)
}

fn gamma(raw: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    let p = Params { raw, allowed: &["mem"] };
    p.check("gamma")?;
    let mem = p.name("mem", "in")?;
    let vocab = Vocabulary::new().with(Symbol::relation(mem.clone(), 2))?;
    let mut t = Theory::new("gamma", vocab.clone());
    zf_axioms(&mut t, &mem)?;
    let so = [
        (
            "foundation",
            format!("(forall2 (X 1) (-> (exists x (X x)) (exists x (and (X x) (forall y (-> ({mem} y x) (not (X y))))))))"),
        ),
        (
            "separation",
            format!("(forall2 (X 1) (forall a (exists b (forall x (<-> ({mem} x b) (and ({mem} x a) (X x)))))))"),
        ),
        (
            "replacement",
            format!("(forall2 (fun F 1) (forall a (exists b (forall y (<-> ({mem} y b) (exists x (and ({mem} x a) (= y (F x)))))))))"),
        ),
    ];
    for (name, text) in so {
        t.add_axiom(name, fmla(&text, &vocab))?;
    }
    t.add_axiom("ia0", ia0(&mem))?;
    Ok(t)
}

fn linear_order(raw: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    let p = Params { raw, allowed: &["rel", "size"] };
    p.check("linear-order")?;
    let r = p.name("rel", "<")?;
    let vocab = Vocabulary::new().with(Symbol::relation(r.clone(), 2))?;
    let mut t = Theory::new("linear-order", vocab.clone());
    t.add_axiom("irreflexive", fmla(&format!("(forall x (not ({r} x x)))"), &vocab))?;
    t.add_axiom(
        "transitive",
        fmla(&format!("(forall x (forall y (forall z (-> (and ({r} x y) ({r} y z)) ({r} x z)))))"), &vocab),
    )?;
    t.add_axiom(
        "total",
        fmla(&format!("(forall x (forall y (or ({r} x y) (= x y) ({r} y x))))"), &vocab),
    )?;
    if let Some(k) = p.num("size")? {
        if k == 0 {
            return Err(FormulaError::BadParams("size must be at least 1".into()));
        }
        t.add_axiom(format!("exactly-{k}"), exactly(k))?;
    }
    Ok(t)
}

fn at_least(raw: &BTreeMap<String, String>) -> Result<Theory, FormulaError> {
    let p = Params { raw, allowed: &["k", "rel"] };
    p.check("at-least")?;
    let k = p.num("k")?.unwrap_or(2);
    let r = p.name("rel", "R")?;
    let mut t = Theory::new("at-least", Vocabulary::new().with(Symbol::relation(r, 2))?);
    t.add_axiom(format!("at-least-{k}"), at_least_k(k))?;
    Ok(t)
}

fn distinct(vars: &[String]) -> Vec<Formula> {
    let mut out = Vec::new();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            out.push(Formula::not(Formula::eq(Term::var(vars[i].clone()), Term::var(vars[j].clone()))));
        }
    }
    out
}

fn at_least_k(k: usize) -> Formula {
    let vars: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    Formula::exists_all(vars.clone(), Formula::conj(distinct(&vars)))
}

fn exactly(k: usize) -> Formula {
    let vars: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    let cover = Formula::forall(
        "y",
        Formula::disj(vars.iter().map(|v| Formula::eq(Term::var("y"), Term::var(v.clone()))).collect()),
    );
    let mut parts = distinct(&vars);
    parts.push(cover);
    Formula::exists_all(vars, Formula::conj(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_params() -> BTreeMap<String, String> {
        BTreeMap::new()
    }

    fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
        kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn succ_core_axioms() {
        let t = build_theory("succ-core", &no_params()).unwrap();
        let shown: Vec<String> = t.axioms.iter().map(|a| a.formula.to_string()).collect();
        assert_eq!(
            shown,
            vec!["(forall x (forall y (-> (= (S x) (S y)) (= x y))))", "(forall x (not (= (S x) 0)))"]
        );
    }

    #[test]
    fn doubled_succ_core_is_relativized() {
        let t = build_theory("succ-core", &params(&[("doubled", "true")])).unwrap();
        assert_eq!(t.vocab.len(), 6);
        let shown: Vec<String> = t.axioms.iter().map(|a| a.formula.to_string()).collect();
        assert!(shown.contains(&"(forall x (-> (N1 x) (not (= (S1 x) 0_1))))".to_string()));
        assert!(shown.contains(&"(N2 0_2)".to_string()));
        assert!(shown.contains(&"(forall x0 (-> (N2 x0) (N2 (S2 x0))))".to_string()));
    }

    #[test]
    fn pa2_induction_sentence() {
        let t = build_theory("pa2", &no_params()).unwrap();
        assert_eq!(t.axioms.len(), 3);
        assert_eq!(
            t.axioms[2].formula.to_string(),
            "(forall2 (X 1) (-> (and (X 0) (forall x (-> (X x) (X (S x))))) (forall x (X x))))"
        );
    }

    #[test]
    fn t1t2_has_cross_vocabulary_schemas() {
        let t = build_theory("t1t2", &no_params()).unwrap();
        assert_eq!(t.schemas.len(), 2);
        assert_eq!(t.schemas[0].permitted.len(), 6);
        let first = t.expand(1);
        assert!(first.len() > t.axioms.len());
        assert!(first.iter().all(|a| a.formula.is_sentence()));
    }

    #[test]
    fn every_id_builds_and_round_trips() {
        for id in THEORY_IDS {
            let t = build_theory(id, &no_params()).unwrap();
            let text = t.to_file_string();
            let back = Theory::parse(&text).unwrap_or_else(|e| panic!("{id}: {e}\n{text}"));
            assert_eq!(back.axioms, t.axioms, "{id}");
            assert_eq!(back.schemas, t.schemas, "{id}");
            assert_eq!(back.vocab, t.vocab, "{id}");
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(build_theory("nope", &no_params()), Err(FormulaError::UnknownId(_))));
        assert!(build_theory("succ-core", &params(&[("copy", "1"), ("doubled", "true")])).is_err());
        assert!(build_theory("pa2", &params(&[("relativize", "true")])).is_err());
        assert!(build_theory("zf-fragment", &params(&[("bogus", "1")])).is_err());
    }

    #[test]
    fn copy_names() {
        assert_eq!(copy_name("S", 1), "S1");
        assert_eq!(copy_name("0", 2), "0_2");
        assert_eq!(copy_name("+", 1), "+_1");
    }
}
