use std::collections::{BTreeMap, HashMap};

use super::{HFSet, HfError};

pub const DEFAULT_UNIVERSE_LIMIT: usize = 1 << 12;

/// The cumulative stages `N₀ ⊆ … ⊆ N_r` over a list of urelements.
/// Elements are ordered by stage, then canonically.
#[derive(Clone, Debug)]
pub struct Universe {
    urelements: Vec<String>,
    r: usize,
    elements: Vec<HFSet>,
    index: HashMap<HFSet, usize>,
    stage: Vec<usize>,
    members: Vec<Vec<usize>>,
    stage_sizes: Vec<usize>,
}

/// Builds `N_r`; `N₀` is the urelements and `N_{α+1} = N_α ∪ P(N_α)`.
pub fn build_universe(urelements: &[&str], r: usize, limit: usize) -> Result<Universe, HfError> {
    let mut ids: Vec<String> = urelements.iter().map(|s| s.to_string()).collect();
    ids.sort();
    ids.dedup();
    if ids.len() != urelements.len() {
        return Err(HfError::Input("duplicate urelement ids".into()));
    }
    let mut elements: Vec<HFSet> = ids.iter().map(|u| HFSet::ur(u)).collect();
    if elements.len() > limit {
        return Err(HfError::LimitExceeded { stage: 0, size: elements.len().to_string(), limit });
    }
    let mut index: HashMap<HFSet, usize> = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mut stage = vec![0; elements.len()];
    let mut stage_sizes = vec![elements.len()];
    for alpha in 1..=r {
        let prev = elements.len();
        // N_{α-1} is transitive, so every set in it is one of its subsets.
        if prev >= 63 || (1usize << prev) + ids.len() > limit {
            return Err(HfError::LimitExceeded { stage: alpha, size: format!("{} + 2^{prev}", ids.len()), limit });
        }
        let next_size = (1usize << prev) + ids.len();
        let mut fresh = Vec::new();
        for mask in 0u64..(1u64 << prev) {
            let children: Vec<HFSet> = (0..prev).filter(|&i| mask >> i & 1 == 1).map(|i| elements[i].clone()).collect();
            let x = HFSet::set(children);
            if !index.contains_key(&x) {
                fresh.push(x);
            }
        }
        fresh.sort();
        for x in fresh {
            index.insert(x.clone(), elements.len());
            elements.push(x);
            stage.push(alpha);
        }
        debug_assert_eq!(elements.len(), next_size);
        stage_sizes.push(elements.len());
    }
    let members = elements
        .iter()
        .map(|x| x.members().iter().map(|m| index[m]).collect())
        .collect();
    Ok(Universe { urelements: ids, r, elements, index, stage, members, stage_sizes })
}

impl Universe {
    pub fn urelements(&self) -> &[String] {
        &self.urelements
    }

    pub fn max_stage(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HFSet] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &HFSet {
        &self.elements[i]
    }

    pub fn index_of(&self, x: &HFSet) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// `|N_0|, …, |N_r|`.
    pub fn stage_sizes(&self) -> &[usize] {
        &self.stage_sizes
    }

    /// Indices of `N_α`: a prefix of the element list.
    pub fn stage_elements(&self, alpha: usize) -> std::ops::Range<usize> {
        0..self.stage_sizes[alpha.min(self.r)]
    }

    pub fn stage_index(&self, i: usize) -> usize {
        self.stage[i]
    }

    pub fn members(&self, i: usize) -> &[usize] {
        &self.members[i]
    }

    pub fn is_set(&self, i: usize) -> bool {
        !self.elements[i].is_ur()
    }

    pub fn is_member(&self, a: usize, b: usize) -> bool {
        self.members[b].binary_search(&a).is_ok()
    }

    /// First stage containing `x`.
    pub fn stage_of(&self, x: &HFSet) -> Result<usize, HfError> {
        self.index_of(x).map(|i| self.stage[i]).ok_or_else(|| HfError::NotInUniverse(x.to_string()))
    }

    /// The `HFSet` whose members are the given indices, if it is present.
    pub fn lookup_set(&self, members: &[usize]) -> Option<usize> {
        self.index_of(&HFSet::set(members.iter().map(|&m| self.elements[m].clone()).collect()))
    }
}

/// An ∈-isomorphism between two universes, as an index map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub map: Vec<usize>,
}

impl Lift {
    pub fn pairs<'u>(&'u self, u: &'u Universe, v: &'u Universe) -> impl Iterator<Item = (&'u HFSet, &'u HFSet)> + 'u {
        self.map.iter().enumerate().map(move |(i, &j)| (u.element(i), v.element(j)))
    }
}

/// Extends a bijection of urelements to the sets over them, then checks
/// that the result is an ∈-isomorphism `N_r(A) → N_r(A′)`.
pub fn lift_urelement_bijection(u: &Universe, v: &Universe, f0: &BTreeMap<String, String>) -> Result<Lift, HfError> {
    if u.max_stage() != v.max_stage() {
        return Err(HfError::Mismatch(format!("stages {} and {}", u.max_stage(), v.max_stage())));
    }
    if u.urelements().len() != v.urelements().len() {
        return Err(HfError::Mismatch(format!(
            "{} and {} urelements",
            u.urelements().len(),
            v.urelements().len()
        )));
    }
    let domain_ok = f0.len() == u.urelements().len() && u.urelements().iter().all(|a| f0.contains_key(a));
    let mut images: Vec<&String> = f0.values().collect();
    images.sort();
    images.dedup();
    let range_ok = images.len() == f0.len() && images.iter().all(|b| v.urelements().contains(b));
    if !domain_ok || !range_ok {
        return Err(HfError::Mismatch("f₀ is not a bijection between the urelements".into()));
    }
    let rename = |id: &str| f0.get(id).map(|b| HFSet::ur(b));
    let mut map = Vec::with_capacity(u.len());
    for x in u.elements() {
        let y = x.map_urelements(&rename).expect("total on urelements");
        let j = v.index_of(&y).ok_or_else(|| HfError::Mismatch(format!("image {y} of {x} is missing")))?;
        map.push(j);
    }
    let lift = Lift { map };
    verify_iso(u, v, &lift)?;
    Ok(lift)
}

/// Checks that `lift` is a bijection preserving and reflecting ∈ and
/// urelement-ness.
pub fn verify_iso(u: &Universe, v: &Universe, lift: &Lift) -> Result<(), HfError> {
    if u.len() != v.len() || lift.map.len() != u.len() {
        return Err(HfError::Mismatch("sizes differ".into()));
    }
    let mut hit = vec![false; v.len()];
    for (i, &j) in lift.map.iter().enumerate() {
        if std::mem::replace(&mut hit[j], true) {
            return Err(HfError::Mismatch(format!("not injective at {}", u.element(i))));
        }
        if u.is_set(i) != v.is_set(j) {
            return Err(HfError::Mismatch(format!("{} changes kind", u.element(i))));
        }
    }
    for a in 0..u.len() {
        for b in 0..u.len() {
            if u.is_member(a, b) != v.is_member(lift.map[a], lift.map[b]) {
                return Err(HfError::Mismatch(format!("∈ not preserved at {} ∈ {}", u.element(a), u.element(b))));
            }
        }
    }
    Ok(())
}

/// Every ∈-automorphism of the universe that fixes the urelements, by
/// backtracking over images in stage order. Stops after `cap` finds.
pub fn automorphisms_fixing_urelements(u: &Universe, cap: usize) -> Vec<Vec<usize>> {
    let n = u.len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for i in 0..n {
        if !u.is_set(i) {
            map[i] = i;
            used[i] = true;
        }
    }
    let order: Vec<usize> = (0..n).filter(|&i| u.is_set(i)).collect();
    let mut found = Vec::new();
    search(u, &order, 0, &mut map, &mut used, &mut found, cap);
    found
}

fn search(
    u: &Universe,
    order: &[usize],
    k: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    found: &mut Vec<Vec<usize>>,
    cap: usize,
) {
    if found.len() >= cap {
        return;
    }
    let Some(&x) = order.get(k) else {
        found.push(map.clone());
        return;
    };
    for y in 0..u.len() {
        if used[y] || !u.is_set(y) || u.stage_index(y) != u.stage_index(x) || u.members(y).len() != u.members(x).len() {
            continue;
        }
        // ∈ must agree with every element mapped so far, in both directions.
        let consistent = (0..u.len()).filter(|&z| map[z] != usize::MAX).all(|z| {
            u.is_member(z, x) == u.is_member(map[z], y) && u.is_member(x, z) == u.is_member(y, map[z])
        });
        if consistent {
            map[x] = y;
            used[y] = true;
            search(u, order, k + 1, map, used, found, cap);
            map[x] = usize::MAX;
            used[y] = false;
        }
    }
}
