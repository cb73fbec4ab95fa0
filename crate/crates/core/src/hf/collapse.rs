use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{HFSet, HfError};

/// Nodes with edges `(a, b)` meaning `a ∈ b`. Marked urelement nodes take
/// their node name as urelement id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MembershipDigraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub urelements: Vec<String>,
}

struct Indexed {
    preds: Vec<BTreeSet<usize>>,
    ur: Vec<bool>,
}

impl MembershipDigraph {
    pub fn from_indices(n: usize, edges: &[(usize, usize)], urelements: &[usize]) -> Self {
        let name = |i: usize| format!("n{i}");
        MembershipDigraph {
            nodes: (0..n).map(name).collect(),
            edges: edges.iter().map(|&(a, b)| (name(a), name(b))).collect(),
            urelements: urelements.iter().map(|&i| name(i)).collect(),
        }
    }

    /// Membership among a list of values; urelement nodes are named by id,
    /// set nodes by their literal.
    pub fn of_values(values: &[HFSet]) -> Self {
        let name = |x: &HFSet| match x {
            HFSet::Ur(id) => id.to_string(),
            HFSet::Set(_) => x.to_string(),
        };
        let mut edges = Vec::new();
        for a in values {
            for b in values {
                if b.contains(a) {
                    edges.push((name(a), name(b)));
                }
            }
        }
        MembershipDigraph {
            nodes: values.iter().map(name).collect(),
            edges,
            urelements: values.iter().filter(|x| x.is_ur()).map(name).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HfError> {
        serde_json::from_str(text).map_err(|e| HfError::Input(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn indexed(&self) -> Result<Indexed, HfError> {
        let mut pos = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if pos.insert(n.as_str(), i).is_some() {
                return Err(HfError::Input(format!("duplicate node '{n}'")));
            }
        }
        let lookup = |n: &str| pos.get(n).copied().ok_or_else(|| HfError::Input(format!("unknown node '{n}'")));
        let mut preds = vec![BTreeSet::new(); self.nodes.len()];
        for (a, b) in &self.edges {
            preds[lookup(b)?].insert(lookup(a)?);
        }
        let mut ur = vec![false; self.nodes.len()];
        for u in &self.urelements {
            ur[lookup(u)?] = true;
        }
        if let Some(i) = (0..self.nodes.len()).find(|&i| ur[i] && !preds[i].is_empty()) {
            return Err(HfError::UrelementHasMembers(self.nodes[i].clone()));
        }
        Ok(Indexed { preds, ur })
    }
}

/// ∈-recursion: each set node goes to the set of the values of its
/// ∈-predecessors.
pub fn mostowski_collapse(g: &MembershipDigraph) -> Result<Vec<HFSet>, HfError> {
    let ix = g.indexed()?;
    let n = g.nodes.len();
    // Kahn's algorithm on the predecessor relation.
    let mut succs = vec![Vec::new(); n];
    let mut pending: Vec<usize> = ix.preds.iter().map(|p| p.len()).collect();
    for (b, ps) in ix.preds.iter().enumerate() {
        for &a in ps {
            succs[a].push(b);
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
    let mut k = 0;
    while k < order.len() {
        let a = order[k];
        k += 1;
        for &b in &succs[a] {
            pending[b] -= 1;
            if pending[b] == 0 {
                order.push(b);
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| pending[i] > 0) {
        return Err(HfError::IllFounded(g.nodes[i].clone()));
    }
    let mut seen: HashMap<&BTreeSet<usize>, usize> = HashMap::new();
    for i in 0..n {
        if ix.ur[i] {
            continue;
        }
        if let Some(&j) = seen.get(&ix.preds[i]) {
            return Err(HfError::NonExtensional(g.nodes[j].clone(), g.nodes[i].clone()));
        }
        seen.insert(&ix.preds[i], i);
    }
    let mut value: Vec<Option<HFSet>> = vec![None; n];
    for &i in &order {
        value[i] = Some(if ix.ur[i] {
            HFSet::ur(&g.nodes[i])
        } else {
            HFSet::set(ix.preds[i].iter().map(|&p| value[p].clone().expect("predecessor first")).collect())
        });
    }
    Ok(value.into_iter().map(|v| v.expect("all nodes ordered")).collect())
}

/// Whether `values` is an injective map preserving and reflecting ∈.
pub fn verify_collapse(g: &MembershipDigraph, values: &[HFSet]) -> Result<bool, HfError> {
    let ix = g.indexed()?;
    let n = g.nodes.len();
    if values.len() != n || values.iter().collect::<BTreeSet<_>>().len() != n {
        return Ok(false);
    }
    for a in 0..n {
        for b in 0..n {
            if ix.preds[b].contains(&a) != values[b].contains(&values[a]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A random extensional, acyclic digraph on `n` nodes with shuffled names.
/// Some sources are marked as urelements.
pub fn random_extensional_digraph<R: Rng>(rng: &mut R, n: usize) -> MembershipDigraph {
    let mut preds: Vec<BTreeSet<usize>> = Vec::new();
    let mut ur = Vec::new();
    let mut used_sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    while preds.len() < n {
        let i = preds.len();
        if rng.gen_bool(0.15) {
            preds.push(BTreeSet::new());
            ur.push(i);
            continue;
        }
        let mut tries = 0;
        loop {
            let p: BTreeSet<usize> = (0..i).filter(|_| rng.gen_bool(0.4)).collect();
            if used_sets.insert(p.clone()) {
                preds.push(p);
                break;
            }
            tries += 1;
            if tries > 50 {
                // every small subset is taken; fall back to a fresh urelement
                preds.push(BTreeSet::new());
                ur.push(i);
                break;
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges: Vec<(usize, usize)> =
        preds.iter().enumerate().flat_map(|(b, ps)| ps.iter().map(move |&a| (a, b))).map(|(a, b)| (perm[a], perm[b])).collect();
    let urs: Vec<usize> = ur.iter().map(|&i| perm[i]).collect();
    MembershipDigraph::from_indices(n, &edges, &urs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn three_node_collapse() {
        let g = MembershipDigraph::from_indices(3, &[(0, 1), (0, 2), (1, 2)], &[]);
        let v = mostowski_collapse(&g).unwrap();
        let text: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(text, ["{}", "{{}}", "{{},{{}}}"]);
        assert!(verify_collapse(&g, &v).unwrap());
    }

    #[test]
    fn bad_inputs() {
        let twins = MembershipDigraph::from_indices(2, &[], &[]);
        assert_eq!(mostowski_collapse(&twins), Err(HfError::NonExtensional("n0".into(), "n1".into())));
        let cycle = MembershipDigraph::from_indices(2, &[(0, 1), (1, 0)], &[]);
        assert!(matches!(mostowski_collapse(&cycle), Err(HfError::IllFounded(_))));
        let ur_with_member = MembershipDigraph::from_indices(2, &[(0, 1)], &[1]);
        assert_eq!(mostowski_collapse(&ur_with_member), Err(HfError::UrelementHasMembers("n1".into())));
        let marked_twins = MembershipDigraph::from_indices(2, &[], &[0, 1]);
        assert_eq!(mostowski_collapse(&marked_twins).unwrap(), vec![HFSet::ur("n0"), HFSet::ur("n1")]);
    }

    #[test]
    fn random_digraphs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=12 {
            let g = random_extensional_digraph(&mut rng, n);
            let v = mostowski_collapse(&g).unwrap();
            assert!(verify_collapse(&g, &v).unwrap());
        }
    }
}
