use std::collections::{BTreeMap, BTreeSet};

use super::syntax::{fresh_name, Formula, SoKind, SoVar, Term};
use super::vocab::{SymbolKind, Vocabulary};
use super::FormulaError;

/// Relativizes every first-order quantifier of `phi` to the unary predicate
/// `u`; with `also_so`, second-order quantifiers are restricted to relations
/// whose fields lie in `u` and functions that map `u` into `u`.
pub fn relativize(phi: &Formula, u: &str, also_so: bool) -> Result<Formula, FormulaError> {
    check_relativizer(phi, u, &mut Vec::new())?;
    Ok(rel(phi, u, also_so))
}

fn check_relativizer(phi: &Formula, u: &str, so: &mut Vec<String>) -> Result<(), FormulaError> {
    let bad = || FormulaError::BadRelativizer(u.to_string());
    match phi {
        Formula::Atom(r, args) => {
            if r == u && (args.len() != 1 || so.iter().any(|s| s == u)) {
                return Err(bad());
            }
            let mut heads = BTreeSet::new();
            args.iter().for_each(|t| t.heads(&mut heads));
            if heads.contains(u) {
                return Err(bad());
            }
            Ok(())
        }
        Formula::Eq(a, b) => {
            let mut heads = BTreeSet::new();
            a.heads(&mut heads);
            b.heads(&mut heads);
            if heads.contains(u) {
                return Err(bad());
            }
            Ok(())
        }
        Formula::Forall2(sv, body) | Formula::Exists2(sv, body) => {
            if sv.name == u {
                return Err(bad());
            }
            so.push(sv.name.clone());
            let r = check_relativizer(body, u, so);
            so.pop();
            r
        }
        _ => phi.children().into_iter().try_for_each(|c| check_relativizer(c, u, so)),
    }
}

fn rel(phi: &Formula, u: &str, also_so: bool) -> Formula {
    match phi {
        Formula::Forall(v, body) => Formula::forall(
            v.clone(),
            Formula::implies(Formula::atom1(u, Term::var(v.clone())), rel(body, u, also_so)),
        ),
        Formula::Exists(v, body) => Formula::exists(
            v.clone(),
            Formula::and2(Formula::atom1(u, Term::var(v.clone())), rel(body, u, also_so)),
        ),
        Formula::Forall2(sv, body) if also_so => {
            let inner = rel(body, u, also_so);
            let guard = so_guard(sv, u, &inner);
            Formula::forall2(sv.clone(), Formula::implies(guard, inner))
        }
        Formula::Exists2(sv, body) if also_so => {
            let inner = rel(body, u, also_so);
            let guard = so_guard(sv, u, &inner);
            Formula::exists2(sv.clone(), Formula::and2(guard, inner))
        }
        _ => phi.map_children(|c| rel(c, u, also_so)),
    }
}

/// Containment of a second-order variable's field (relations) or closure of
/// `u` under it (functions).
pub(crate) fn so_guard(sv: &SoVar, u: &str, body: &Formula) -> Formula {
    let mut avoid = body.all_names();
    avoid.insert(u.to_string());
    avoid.insert(sv.name.clone());
    let mut vars = Vec::new();
    for i in 0..sv.arity {
        let v = fresh_name(&format!("g{i}"), &avoid);
        avoid.insert(v.clone());
        vars.push(v);
    }
    let args: Vec<Term> = vars.iter().map(|v| Term::var(v.clone())).collect();
    let in_u = Formula::conj(args.iter().map(|t| Formula::atom1(u, t.clone())).collect());
    let core = match sv.kind {
        SoKind::Rel => Formula::implies(Formula::atom(sv.name.clone(), args.clone()), in_u),
        SoKind::Fun if sv.arity == 0 => Formula::atom1(u, Term::constant(sv.name.clone())),
        SoKind::Fun => Formula::implies(in_u, Formula::atom1(u, Term::app(sv.name.clone(), args.clone()))),
    };
    Formula::forall_all(vars, core)
}

/// Simultaneous renaming of vocabulary symbols. Bound variables are only
/// renamed where a target name would otherwise be captured.
pub fn rename_vocab(
    phi: &Formula,
    vocab: &Vocabulary,
    mapping: &BTreeMap<String, String>,
) -> Result<Formula, FormulaError> {
    let effective: BTreeMap<String, String> =
        mapping.iter().filter(|(k, v)| k != v).map(|(k, v)| (k.clone(), v.clone())).collect();
    let mut targets: BTreeMap<&str, &str> = BTreeMap::new();
    for (src, dst) in mapping {
        if !vocab.contains(src) {
            return Err(FormulaError::UnknownSymbol { pos: 0, name: src.clone() });
        }
        if let Some(prev) = targets.insert(dst, src) {
            return Err(FormulaError::NonInjective(format!("'{prev}' and '{src}' both map to '{dst}'")));
        }
        if !super::sexpr::is_identifier(dst) {
            return Err(FormulaError::BadSymbol(dst.clone()));
        }
        if vocab.contains(dst) && !mapping.contains_key(dst) {
            return Err(FormulaError::NonInjective(format!("'{src}' maps onto the unrenamed symbol '{dst}'")));
        }
    }
    if effective.is_empty() {
        return Ok(phi.clone());
    }
    let target_names: BTreeSet<String> = effective.values().cloned().collect();
    let constant_targets: BTreeSet<String> = effective
        .iter()
        .filter(|(k, _)| vocab.get(k).map(|s| s.kind == SymbolKind::Constant).unwrap_or(false))
        .map(|(_, v)| v.clone())
        .collect();
    Ok(ren(phi, &effective, &target_names, &constant_targets, &BTreeSet::new()))
}

fn ren(
    phi: &Formula,
    map: &BTreeMap<String, String>,
    targets: &BTreeSet<String>,
    const_targets: &BTreeSet<String>,
    shadowed: &BTreeSet<String>,
) -> Formula {
    let mut head = |h: &str| -> Option<String> {
        if shadowed.contains(h) {
            None
        } else {
            map.get(h).cloned()
        }
    };
    match phi {
        Formula::Atom(r, args) => {
            let r2 = head(r).unwrap_or_else(|| r.clone());
            Formula::Atom(r2, args.iter().map(|t| t.map_heads(&mut head)).collect())
        }
        Formula::Eq(a, b) => Formula::Eq(a.map_heads(&mut head), b.map_heads(&mut head)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let (v2, body2) = if const_targets.contains(v) {
                let mut avoid = body.all_names();
                avoid.extend(targets.iter().cloned());
                avoid.extend(map.keys().cloned());
                let fresh = fresh_name(v, &avoid);
                (fresh.clone(), body.substitute_var(v, Term::Var(fresh)))
            } else {
                (v.clone(), (**body).clone())
            };
            let inner = ren(&body2, map, targets, const_targets, shadowed);
            if matches!(phi, Formula::Forall(..)) {
                Formula::forall(v2, inner)
            } else {
                Formula::exists(v2, inner)
            }
        }
        Formula::Forall2(sv, body) | Formula::Exists2(sv, body) => {
            let (sv2, body2) = if targets.contains(&sv.name) {
                let mut avoid = body.all_names();
                avoid.extend(targets.iter().cloned());
                avoid.extend(map.keys().cloned());
                let fresh = fresh_name(&sv.name, &avoid);
                (SoVar { name: fresh.clone(), ..sv.clone() }, body.rename_bound_head(&sv.name, &fresh))
            } else {
                (sv.clone(), (**body).clone())
            };
            let mut sh = shadowed.clone();
            sh.insert(sv2.name.clone());
            let inner = ren(&body2, map, targets, const_targets, &sh);
            if matches!(phi, Formula::Forall2(..)) {
                Formula::forall2(sv2, inner)
            } else {
                Formula::exists2(sv2, inner)
            }
        }
        _ => phi.map_children(|c| ren(c, map, targets, const_targets, shadowed)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Symbol};

    fn rvocab() -> Vocabulary {
        Vocabulary::from_symbols([Symbol::relation("P", 1), Symbol::relation("R", 2), Symbol::relation("U", 1)])
            .unwrap()
    }

    #[test]
    fn relativizes_quantifiers() {
        let v = rvocab();
        let f = parse_formula("(forall x (P x))", &v).unwrap();
        assert_eq!(relativize(&f, "U", false).unwrap().to_string(), "(forall x (-> (U x) (P x)))");
        let g = parse_formula("(exists x (exists y (R x y)))", &v).unwrap();
        assert_eq!(
            relativize(&g, "U", false).unwrap().to_string(),
            "(exists x (and (U x) (exists y (and (U y) (R x y)))))"
        );
        let q = parse_formula("(or (P c) (not (R c c)))", &v).unwrap();
        assert_eq!(relativize(&q, "U", true).unwrap(), q);
    }

    #[test]
    fn relativizer_misuse() {
        let v = Vocabulary::from_symbols([Symbol::relation("U", 2)]).unwrap();
        let f = parse_formula("(forall x (U x x))", &v).unwrap();
        assert!(relativize(&f, "U", false).is_err());
        let g = parse_formula("(exists2 (U 1) (forall x (U x)))", &Vocabulary::new()).unwrap();
        assert!(relativize(&g, "U", true).is_err());
    }

    #[test]
    fn second_order_guards() {
        let f = parse_formula("(exists2 (X 1) (forall x (X x)))", &Vocabulary::new()).unwrap();
        assert_eq!(
            relativize(&f, "U", true).unwrap().to_string(),
            "(exists2 (X 1) (and (forall g0 (-> (X g0) (U g0))) (forall x (-> (U x) (X x)))))"
        );
        let g = parse_formula("(forall2 (fun F 2) true)", &Vocabulary::new()).unwrap();
        assert_eq!(
            relativize(&g, "U", true).unwrap().to_string(),
            "(forall2 (fun F 2) (-> (forall g0 (forall g1 (-> (and (U g0) (U g1)) (U (F g0 g1))))) true))"
        );
    }

    #[test]
    fn renames_membership() {
        let v = Vocabulary::from_symbols([Symbol::relation("in", 2)]).unwrap();
        let f = parse_formula("(in x y)", &v).unwrap();
        let m: BTreeMap<_, _> = [("in".to_string(), "E1".to_string())].into();
        assert_eq!(rename_vocab(&f, &v, &m).unwrap().to_string(), "(E1 x y)");
        let id: BTreeMap<_, _> = [("in".to_string(), "in".to_string())].into();
        assert_eq!(rename_vocab(&f, &v, &id).unwrap(), f);
    }

    #[test]
    fn rejects_non_injective_maps() {
        let v = rvocab();
        let f = parse_formula("(P x)", &v).unwrap();
        let m: BTreeMap<_, _> = [("P".to_string(), "Q".to_string()), ("U".to_string(), "Q".to_string())].into();
        assert!(matches!(rename_vocab(&f, &v, &m), Err(FormulaError::NonInjective(_))));
        let m: BTreeMap<_, _> = [("P".to_string(), "U".to_string())].into();
        assert!(matches!(rename_vocab(&f, &v, &m), Err(FormulaError::NonInjective(_))));
        // swaps are injective
        let m: BTreeMap<_, _> = [("P".to_string(), "U".to_string()), ("U".to_string(), "P".to_string())].into();
        let g = parse_formula("(and (P x) (U x))", &v).unwrap();
        assert_eq!(rename_vocab(&g, &v, &m).unwrap().to_string(), "(and (U x) (P x))");
    }

    #[test]
    fn avoids_capture_by_so_binders() {
        let v = Vocabulary::from_symbols([Symbol::relation("E", 2)]).unwrap();
        let f = parse_formula("(exists2 (E1 2) (forall x (-> (E x x) (E1 x x))))", &v).unwrap();
        let m: BTreeMap<_, _> = [("E".to_string(), "E1".to_string())].into();
        let g = rename_vocab(&f, &v, &m).unwrap();
        match &g {
            Formula::Exists2(sv, _) => assert_ne!(sv.name, "E1"),
            other => panic!("{other}"),
        }
        assert!(g.free_heads().contains("E1"));
    }
}
