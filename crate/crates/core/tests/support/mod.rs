#![allow(dead_code)]

use catbench::formula::{Formula, SoVar, Symbol, Term, Vocabulary};
use catbench::structures::{tuple_at, FiniteStructure};
use rand::Rng;

/// `{R/2, P/1, f/1, c}`.
pub fn mixed_vocab() -> Vocabulary {
    Vocabulary::from_symbols([
        Symbol::relation("R", 2),
        Symbol::relation("P", 1),
        Symbol::function("f", 1),
        Symbol::constant("c"),
    ])
    .unwrap()
}

pub fn binary_vocab() -> Vocabulary {
    Vocabulary::from_symbols([Symbol::relation("R", 2)]).unwrap()
}

pub fn succ_vocab() -> Vocabulary {
    Vocabulary::from_symbols([Symbol::function("S", 1), Symbol::constant("0")]).unwrap()
}

const VARS: [&str; 4] = ["x", "y", "z", "w"];

fn random_term<R: Rng>(rng: &mut R, depth: usize) -> Term {
    match rng.gen_range(0..if depth == 0 { 2 } else { 3 }) {
        0 => Term::var(VARS[rng.gen_range(0..VARS.len())]),
        1 => Term::constant("c"),
        _ => Term::app1("f", random_term(rng, depth - 1)),
    }
}

/// Random formula over [`mixed_vocab`]; second-order binders appear when
/// `so` is set. Free variables are allowed.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize, so: bool) -> Formula {
    random_formula_in(rng, depth, so, &mut Vec::new())
}

fn random_formula_in<R: Rng>(rng: &mut R, depth: usize, so: bool, sovars: &mut Vec<SoVar>) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        let pick = rng.gen_range(0..if sovars.is_empty() { 5 } else { 6 });
        return match pick {
            0 => Formula::atom2("R", random_term(rng, 1), random_term(rng, 1)),
            1 => Formula::atom1("P", random_term(rng, 1)),
            2 => Formula::eq(random_term(rng, 1), random_term(rng, 1)),
            3 => {
                if rng.gen() {
                    Formula::True
                } else {
                    Formula::False
                }
            }
            4 => Formula::atom1("P", Term::var("x")),
            _ => {
                let visible: Vec<&SoVar> =
                    sovars.iter().enumerate().filter(|(i, v)| sovars[i + 1..].iter().all(|w| w.name != v.name)).map(|(_, v)| v).collect();
                let v = visible[rng.gen_range(0..visible.len())].clone();
                let args = (0..v.arity).map(|_| random_term(rng, 0)).collect();
                Formula::atom(v.name, args)
            }
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..if so { 10 } else { 8 }) {
        0 => Formula::Not(Box::new(random_formula_in(rng, d, so, sovars))),
        1 | 2 => {
            let k = rng.gen_range(2..=3);
            let parts = (0..k).map(|_| random_formula_in(rng, d, so, sovars)).collect();
            if rng.gen() {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        3 => Formula::Implies(
            Box::new(random_formula_in(rng, d, so, sovars)),
            Box::new(random_formula_in(rng, d, so, sovars)),
        ),
        4 => Formula::Iff(
            Box::new(random_formula_in(rng, d, so, sovars)),
            Box::new(random_formula_in(rng, d, so, sovars)),
        ),
        5 | 6 => Formula::Forall(VARS[rng.gen_range(0..VARS.len())].to_string(), Box::new(random_formula_in(rng, d, so, sovars))),
        7 => Formula::Exists(VARS[rng.gen_range(0..VARS.len())].to_string(), Box::new(random_formula_in(rng, d, so, sovars))),
        _ => {
            let v = SoVar::rel(if rng.gen() { "X" } else { "Y" }, rng.gen_range(1..=2));
            sovars.push(v.clone());
            let body = random_formula_in(rng, d, so, sovars);
            sovars.pop();
            if rng.gen() {
                Formula::Forall2(v, Box::new(body))
            } else {
                Formula::Exists2(v, Box::new(body))
            }
        }
    }
}

/// Uniformly random interpretation of `vocab` on `n` elements.
pub fn random_structure<R: Rng>(rng: &mut R, vocab: &Vocabulary, n: usize) -> FiniteStructure {
    let mut s = FiniteStructure::new(vocab.clone(), n).unwrap();
    for r in vocab.relations() {
        for i in 0..n.pow(r.arity as u32) {
            if rng.gen() {
                s.set_rel(&r.name, &tuple_at(n, r.arity, i), true).unwrap();
            }
        }
    }
    for f in vocab.functions() {
        for i in 0..n.pow(f.arity as u32) {
            s.set_fun(&f.name, &tuple_at(n, f.arity, i), rng.gen_range(0..n)).unwrap();
        }
    }
    for c in vocab.constants() {
        s.set_const(&c.name, rng.gen_range(0..n)).unwrap();
    }
    s
}

/// Every `{R/2}` structure on `n` elements.
pub fn all_binary(n: usize) -> Vec<FiniteStructure> {
    let cells = n * n;
    (0u64..1 << cells)
        .map(|mask| {
            let mut s = FiniteStructure::new(binary_vocab(), n).unwrap();
            for i in 0..cells {
                if mask >> i & 1 == 1 {
                    s.set_rel("R", &tuple_at(n, 2, i), true).unwrap();
                }
            }
            s
        })
        .collect()
}

/// Every map `{0..n} → {0..n}` as a table.
pub fn all_maps(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|t| (0..n).map(move |v| [t.clone(), vec![v]].concat())).collect();
    }
    out
}

/// `(S, 0)` structure from a successor table and zero.
pub fn succ_structure(table: &[usize], zero: usize) -> FiniteStructure {
    let mut s = FiniteStructure::new(succ_vocab(), table.len()).unwrap();
    for (i, &v) in table.iter().enumerate() {
        s.set_fun("S", &[i], v).unwrap();
    }
    s.set_const("0", zero).unwrap();
    s
}

/// Rank-`n` Hintikka sentence of a relational structure: true in `B`
/// exactly when `B` agrees with `a` on all sentences of quantifier rank
/// at most `n`.
pub fn hintikka(a: &FiniteStructure, n: usize) -> Formula {
    hintikka_at(a, &mut Vec::new(), n)
}

fn var(i: usize) -> String {
    format!("v{i}")
}

fn hintikka_at(a: &FiniteStructure, tuple: &mut Vec<usize>, n: usize) -> Formula {
    if n == 0 {
        let mut lits = Vec::new();
        for i in 0..tuple.len() {
            for j in i + 1..tuple.len() {
                let eq = Formula::eq(Term::var(var(i)), Term::var(var(j)));
                lits.push(if tuple[i] == tuple[j] { eq } else { Formula::not(eq) });
            }
        }
        for r in a.vocab().relations() {
            let k = tuple.len();
            for idx in 0..k.pow(r.arity as u32) {
                let pos = tuple_at(k, r.arity, idx);
                let args: Vec<usize> = pos.iter().map(|&p| tuple[p]).collect();
                let atom = Formula::atom(r.name.clone(), pos.iter().map(|&p| Term::var(var(p))).collect());
                lits.push(if a.holds_named(&r.name, &args).unwrap() { atom } else { Formula::not(atom) });
            }
        }
        return Formula::And(lits);
    }
    let x = var(tuple.len());
    let mut forth = Vec::new();
    let mut back = Vec::new();
    for e in 0..a.size() {
        tuple.push(e);
        let h = hintikka_at(a, tuple, n - 1);
        tuple.pop();
        forth.push(Formula::exists(x.clone(), h.clone()));
        back.push(h);
    }
    forth.push(Formula::forall(x, Formula::Or(back)));
    Formula::And(forth)
}

/// Every interpretation of `vocab` on `n` elements, in a fixed order.
pub fn all_structures(vocab: &Vocabulary, n: usize) -> Vec<FiniteStructure> {
    // one digit per table cell: relations in base 2, functions and constants in base n
    let mut cells: Vec<(String, Vec<usize>, usize)> = Vec::new();
    for r in vocab.relations() {
        for i in 0..n.pow(r.arity as u32) {
            cells.push((r.name.clone(), tuple_at(n, r.arity, i), 2));
        }
    }
    for f in vocab.functions() {
        for i in 0..n.pow(f.arity as u32) {
            cells.push((f.name.clone(), tuple_at(n, f.arity, i), n));
        }
    }
    for c in vocab.constants() {
        cells.push((c.name.clone(), Vec::new(), n));
    }
    let mut digits = vec![0usize; cells.len()];
    let mut out = Vec::new();
    loop {
        let mut s = FiniteStructure::new(vocab.clone(), n).unwrap();
        for ((name, args, _), &d) in cells.iter().zip(&digits) {
            match vocab.get(name).map(|sym| sym.kind) {
                Some(catbench::formula::SymbolKind::Relation) => s.set_rel(name, args, d == 1).unwrap(),
                Some(catbench::formula::SymbolKind::Function) => s.set_fun(name, args, d).unwrap(),
                _ => s.set_const(name, d).unwrap(),
            }
        }
        out.push(s);
        let mut k = 0;
        loop {
            if k == digits.len() {
                return out;
            }
            digits[k] += 1;
            if digits[k] < cells[k].2 {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}
