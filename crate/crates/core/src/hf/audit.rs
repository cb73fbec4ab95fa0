use std::collections::HashSet;

use serde::Serialize;

use super::{HfError, Universe};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HfAuditEntry {
    pub axiom: &'static str,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HfAuditReport {
    pub urelements: Vec<String>,
    pub max_stage: usize,
    pub entries: Vec<HfAuditEntry>,
}

impl HfAuditReport {
    pub fn entry(&self, axiom: &str) -> Option<&HfAuditEntry> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{} {}", if e.verdict { "ok  " } else { "FAIL" }, e.axiom));
            if let Some(w) = &e.witness {
                out.push_str(&format!("  [{w}]"));
            }
            if let Some(n) = e.note {
                out.push_str(&format!("  ({n})"));
            }
            out.push('\n');
        }
        out
    }
}

const BOUNDARY: &str = "failure at the top stage is a truncation effect";
const REPLACEMENT_READING: &str =
    "closure reading: for every set x and every map F from x into the domain, F[x] is in the domain";
const REPLACEMENT_CAP: u64 = 1 << 22;

/// Elements from the top stage down, canonical order within a stage.
fn boundary_first(u: &Universe) -> Vec<usize> {
    let mut v: Vec<usize> = (0..u.len()).collect();
    v.sort_by_key(|&i| std::cmp::Reverse(u.stage_index(i)));
    v
}

/// Axiom-by-axiom check of a truncated domain. Closure properties that fail
/// only because of the truncation carry a boundary note.
pub fn audit_axioms(u: &Universe) -> HfAuditReport {
    let name = |i: usize| u.element(i).to_string();
    let sets: Vec<usize> = (0..u.len()).filter(|&i| u.is_set(i)).collect();
    let top = boundary_first(u);
    let mut entries = Vec::new();
    let mut push = |axiom, witness: Option<String>, note| {
        entries.push(HfAuditEntry { axiom, verdict: witness.is_none(), witness, note })
    };

    // Extensionality: distinct sets have distinct members.
    let mut seen = HashSet::new();
    let ext = sets.iter().find(|&&x| !seen.insert(u.members(x).to_vec())).map(|&x| name(x));
    push("extensionality", ext, None);

    // Foundation: every nonempty set has a member disjoint from it.
    let found = sets
        .iter()
        .find(|&&x| {
            !u.members(x).is_empty() && !u.members(x).iter().any(|&y| u.members(y).iter().all(|z| !u.is_member(*z, x)))
        })
        .map(|&x| name(x));
    push("foundation", found, None);

    // Separation, full reading: every subset of a member is present.
    let mut sep = None;
    'sep: for &x in &sets {
        let m = u.members(x);
        for mask in 0u64..(1u64 << m.len().min(40)) {
            let sub: Vec<usize> = (0..m.len()).filter(|&i| mask >> i & 1 == 1).map(|i| m[i]).collect();
            if u.lookup_set(&sub).is_none() {
                sep = Some(format!("x={}, subset missing", name(x)));
                break 'sep;
            }
        }
    }
    push("separation", sep, None);

    // Pairing.
    let mut pair = None;
    // distinct pairs first, then singletons
    let candidates = top.iter().enumerate().flat_map(|(k, &a)| top[k + 1..].iter().map(move |&b| (a, b)));
    let singles = top.iter().map(|&a| (a, a));
    'pair: for (a, b) in candidates.chain(singles) {
        {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let p = if lo == hi { vec![lo] } else { vec![lo, hi] };
            if u.lookup_set(&p).is_none() {
                pair = Some(format!("a={}, b={}", name(a), name(b)));
                break 'pair;
            }
        }
    }
    let note = pair.as_ref().map(|_| BOUNDARY);
    push("pairing", pair, note);

    // Union.
    let mut union = None;
    for &x in top.iter().filter(|&&x| u.is_set(x)) {
        let mut all: Vec<usize> = u.members(x).iter().flat_map(|&y| u.members(y).iter().copied()).collect();
        all.sort_unstable();
        all.dedup();
        if u.lookup_set(&all).is_none() {
            union = Some(format!("x={}", name(x)));
            break;
        }
    }
    let note = union.as_ref().map(|_| BOUNDARY);
    push("union", union, note);

    // Power set.
    let mut power = None;
    for &x in top.iter().filter(|&&x| u.is_set(x)) {
        let m = u.members(x);
        let complete = m.len() < 40
            && (0u64..(1u64 << m.len())).all(|mask| {
                let sub: Vec<usize> = (0..m.len()).filter(|&i| mask >> i & 1 == 1).map(|i| m[i]).collect();
                u.lookup_set(&sub).is_some()
            });
        // P(x) needs all subsets and the set of them.
        let present = complete && {
            let subs: Vec<usize> = (0u64..(1u64 << m.len()))
                .map(|mask| {
                    let sub: Vec<usize> = (0..m.len()).filter(|&i| mask >> i & 1 == 1).map(|i| m[i]).collect();
                    u.lookup_set(&sub).unwrap()
                })
                .collect();
            let mut subs = subs;
            subs.sort_unstable();
            u.lookup_set(&subs).is_some()
        };
        if !present {
            power = Some(format!("x={}", name(x)));
            break;
        }
    }
    let note = power.as_ref().map(|_| BOUNDARY);
    push("power-set", power, note);

    // Replacement, closure reading.
    let mut repl = None;
    let mut by_size: Vec<usize> = sets.iter().copied().filter(|&x| !u.members(x).is_empty()).collect();
    by_size.sort_by_key(|&x| (u.members(x).len(), x));
    let mut checked = 0u64;
    'repl: for &x in &by_size {
        let m = u.members(x);
        let mut digits = vec![0usize; m.len()];
        loop {
            checked += 1;
            if checked > REPLACEMENT_CAP {
                break 'repl;
            }
            let mut image: Vec<usize> = digits.iter().map(|&d| top[d]).collect();
            image.sort_unstable();
            image.dedup();
            if u.lookup_set(&image).is_none() {
                let f: Vec<String> = m.iter().zip(&digits).map(|(&a, &d)| format!("{}->{}", name(a), name(top[d]))).collect();
                let img: Vec<String> = image.iter().map(|&i| name(i)).collect();
                repl = Some(format!("x={}, F: {}, image {{{}}}", name(x), f.join(" "), img.join(",")));
                break 'repl;
            }
            let mut i = digits.len();
            loop {
                if i == 0 {
                    continue 'repl;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < top.len() {
                    break;
                }
                digits[i] = 0;
            }
        }
    }
    let capped = repl.is_none() && checked > REPLACEMENT_CAP;
    entries.push(HfAuditEntry {
        axiom: "replacement",
        verdict: repl.is_none(),
        witness: repl.or_else(|| capped.then(|| format!("search stopped after {REPLACEMENT_CAP} maps"))),
        note: Some(REPLACEMENT_READING),
    });

    // Choice: the canonical least member of each member of a family of
    // nonempty sets gives a selector set.
    let mut choice = None;
    for &x in &sets {
        let m = u.members(x);
        if m.is_empty() || !m.iter().all(|&y| u.is_set(y) && !u.members(y).is_empty()) {
            continue;
        }
        let mut sel: Vec<usize> = m.iter().map(|&y| u.members(y)[0]).collect();
        sel.sort_unstable();
        sel.dedup();
        if u.lookup_set(&sel).is_none() {
            choice = Some(format!("x={}", name(x)));
            break;
        }
    }
    entries.push(HfAuditEntry {
        axiom: "choice",
        verdict: choice.is_none(),
        witness: choice,
        note: Some("selector: canonical least member"),
    });

    HfAuditReport { urelements: u.urelements().to_vec(), max_stage: u.max_stage(), entries }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdomainCheck {
    /// Member of an element of N′ that is missing from N′.
    pub transitivity: Option<String>,
    /// Set of the domain outside N′ whose members all lie in N′.
    pub supertransitivity: Option<String>,
}

impl SubdomainCheck {
    pub fn passes(&self) -> bool {
        self.transitivity.is_none() && self.supertransitivity.is_none()
    }
}

fn check_mask(u: &Universe, inside: &[bool]) -> SubdomainCheck {
    let transitivity = (0..u.len())
        .filter(|&x| inside[x])
        .find_map(|x| u.members(x).iter().find(|&&y| !inside[y]))
        .map(|&y| u.element(y).to_string());
    let supertransitivity = (0..u.len())
        .find(|&y| !inside[y] && u.is_set(y) && u.members(y).iter().all(|&z| inside[z]))
        .map(|y| u.element(y).to_string());
    SubdomainCheck { transitivity, supertransitivity }
}

/// The two hypotheses for a given N′ (element indices).
pub fn check_subdomain(u: &Universe, sub: &[usize]) -> SubdomainCheck {
    let mut inside = vec![false; u.len()];
    for &i in sub {
        inside[i] = true;
    }
    check_mask(u, &inside)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    pub candidates: u64,
    /// Every N′ meeting both hypotheses.
    pub passing: Vec<Vec<String>>,
    pub only_whole_domain: bool,
}

/// Enumerates every N′ ⊆ N_r containing the urelements and reports those
/// that are transitive and contain each set of the domain included in them.
pub fn check_lemma1(u: &Universe, limit: usize) -> Result<Lemma1Report, HfError> {
    if u.len() > limit || u.len() > 40 {
        return Err(HfError::LimitExceeded { stage: u.max_stage(), size: u.len().to_string(), limit });
    }
    let free: Vec<usize> = (0..u.len()).filter(|&i| u.is_set(i)).collect();
    let member_mask: Vec<u64> = (0..u.len()).map(|i| u.members(i).iter().fold(0u64, |m, &y| m | 1 << y)).collect();
    let ur_mask: u64 = (0..u.len()).filter(|&i| !u.is_set(i)).fold(0, |m, i| m | 1 << i);
    let mut passing: Vec<Vec<String>> = Vec::new();
    let mut candidates = 0u64;
    for choice in 0u64..(1u64 << free.len()) {
        candidates += 1;
        let inside = free.iter().enumerate().filter(|(k, _)| choice >> k & 1 == 1).fold(ur_mask, |m, (_, &i)| m | 1 << i);
        let transitive = (0..u.len()).all(|x| inside >> x & 1 == 0 || member_mask[x] & !inside == 0);
        if !transitive {
            continue;
        }
        let supertransitive =
            free.iter().all(|&y| inside >> y & 1 == 1 || member_mask[y] & !inside != 0);
        if supertransitive {
            passing.push((0..u.len()).filter(|&i| inside >> i & 1 == 1).map(|i| u.element(i).to_string()).collect());
        }
    }
    let only_whole_domain = passing.len() == 1 && passing[0].len() == u.len();
    Ok(Lemma1Report { candidates, passing, only_whole_domain })
}

/// Same question by backtracking in stage order. Members precede their
/// sets, so both hypotheses are decided when an element is reached; this
/// covers universes far beyond the bitmask enumeration.
pub fn search_lemma1(u: &Universe) -> Lemma1Report {
    let mut inside = vec![false; u.len()];
    let mut passing = Vec::new();
    let mut nodes = 0u64;
    let mut stack: Vec<(usize, bool)> = vec![(0, true), (0, false)];
    while let Some((i, choice)) = stack.pop() {
        nodes += 1;
        if i == u.len() {
            continue;
        }
        let all_in = u.members(i).iter().all(|&y| inside[y]);
        let ok = if !u.is_set(i) {
            choice
        } else if choice {
            all_in
        } else {
            !all_in
        };
        if !ok {
            continue;
        }
        inside[i] = choice;
        if i + 1 == u.len() {
            passing.push((0..u.len()).filter(|&k| inside[k]).map(|k| u.element(k).to_string()).collect());
        } else {
            stack.push((i + 1, true));
            stack.push((i + 1, false));
        }
    }
    if u.is_empty() {
        passing.push(Vec::new());
    }
    let only_whole_domain = passing.len() == 1 && passing[0].len() == u.len();
    Lemma1Report { candidates: nodes, passing, only_whole_domain }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hf::{build_universe, HFSet, DEFAULT_UNIVERSE_LIMIT};

    #[test]
    fn pure_stage_three() {
        let u = build_universe(&[], 3, DEFAULT_UNIVERSE_LIMIT).unwrap();
        let r = audit_axioms(&u);
        for ok in ["extensionality", "foundation", "separation", "union", "choice"] {
            assert!(r.entry(ok).unwrap().verdict, "{}", r.render());
        }
        let pairing = r.entry("pairing").unwrap();
        assert!(!pairing.verdict);
        let w = pairing.witness.as_ref().unwrap();
        assert_eq!(w, "a={{{}}}, b={{},{{}}}");
        assert_eq!(r.entry("power-set").unwrap().witness.as_deref(), Some("x={{{}}}"));
        let repl = r.entry("replacement").unwrap();
        assert!(repl.witness.as_ref().unwrap().starts_with("x={{}}, F: {}->{{{}}}"), "{:?}", repl.witness);
    }

    #[test]
    fn lemma1_small() {
        let u = build_universe(&[], 3, DEFAULT_UNIVERSE_LIMIT).unwrap();
        let e = u.index_of(&HFSet::empty()).unwrap();
        let one = u.index_of(&HFSet::parse("{{}}").unwrap()).unwrap();
        let c = check_subdomain(&u, &[e, one]);
        assert_eq!(c.transitivity, None);
        assert_eq!(c.supertransitivity.as_deref(), Some("{{{}}}"));
        let all: Vec<usize> = (0..u.len()).collect();
        assert!(check_subdomain(&u, &all).passes());
        let rep = check_lemma1(&u, 20).unwrap();
        assert!(rep.only_whole_domain);
        assert_eq!(rep.candidates, 16);
        let searched = search_lemma1(&u);
        assert_eq!(searched.passing, rep.passing);
    }
}
