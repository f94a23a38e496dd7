//! The five mapping properties in the presence of identifiers, checked on
//! relations given as finite sets of (source, target) pairs.

use std::collections::{BTreeMap, BTreeSet};

use super::{canonicalize_ids, kboth_to_v11, IdInstance, IdToken, KSchema};
use crate::error::Result;
use crate::perm::permutations_fixing;
use crate::relmodel::Value;

/// A schema mapping as a finite relation between instances.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdRelation {
    pub pairs: BTreeSet<(IdInstance, IdInstance)>,
}

impl IdRelation {
    pub fn new(pairs: impl IntoIterator<Item = (IdInstance, IdInstance)>) -> Self {
        IdRelation {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn sources(&self) -> BTreeSet<&IdInstance> {
        self.pairs.iter().map(|p| &p.0).collect()
    }

    pub fn targets(&self) -> BTreeSet<&IdInstance> {
        self.pairs.iter().map(|p| &p.1).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyVerdict {
    Holds,
    Fails(String),
}

impl PropertyVerdict {
    pub fn holds(&self) -> bool {
        *self == PropertyVerdict::Holds
    }
}

fn fail(msg: String) -> Result<PropertyVerdict> {
    Ok(PropertyVerdict::Fails(msg))
}

/// Every listed source is related to something.
pub fn check_total(rel: &IdRelation, sources: &[IdInstance]) -> Result<PropertyVerdict> {
    let covered = rel.sources();
    match sources.iter().find(|s| !covered.contains(s)) {
        Some(s) => fail(format!("{s} has no image")),
        None => Ok(PropertyVerdict::Holds),
    }
}

/// Every listed target is related from something.
pub fn check_surjective(rel: &IdRelation, targets: &[IdInstance]) -> Result<PropertyVerdict> {
    let covered = rel.targets();
    match targets.iter().find(|t| !covered.contains(t)) {
        Some(t) => fail(format!("{t} has no preimage")),
        None => Ok(PropertyVerdict::Holds),
    }
}

/// Images of one source are all equal up to ids.
pub fn check_functional_up_to_ids(rel: &IdRelation) -> Result<PropertyVerdict> {
    let mut image_class: BTreeMap<&IdInstance, IdInstance> = BTreeMap::new();
    for (i, j) in &rel.pairs {
        let cj = canonicalize_ids(j)?;
        match image_class.get(i) {
            Some(prev) if *prev != cj => return fail(format!("{i} has images {prev} and {cj}")),
            Some(_) => {}
            None => {
                image_class.insert(i, cj);
            }
        }
    }
    Ok(PropertyVerdict::Holds)
}

/// Sources sharing an image are equal up to ids.
pub fn check_injective_up_to_ids(rel: &IdRelation) -> Result<PropertyVerdict> {
    let mut source_class: BTreeMap<&IdInstance, IdInstance> = BTreeMap::new();
    for (i, j) in &rel.pairs {
        let ci = canonicalize_ids(i)?;
        match source_class.get(j) {
            Some(prev) if *prev != ci => return fail(format!("{j} has preimages {prev} and {ci}")),
            Some(_) => {}
            None => {
                source_class.insert(j, ci);
            }
        }
    }
    Ok(PropertyVerdict::Holds)
}

/// Closed under every permutation of `domain ∪ constants` fixing the
/// constants, applied to values only.
pub fn check_generic_for_values(
    rel: &IdRelation,
    domain: &[Value],
    constants: &BTreeSet<Value>,
) -> Result<PropertyVerdict> {
    let carrier: Vec<Value> = domain.iter().chain(constants).copied().collect();
    for p in permutations_fixing(&carrier, constants) {
        for (i, j) in &rel.pairs {
            let moved = (i.permute_values(&p), j.permute_values(&p));
            if !rel.pairs.contains(&moved) {
                return fail(format!("({i}, {j}) is related but its image under {p} is not"));
            }
        }
    }
    Ok(PropertyVerdict::Holds)
}

/// Closed under every permutation of the identifiers `#1..#id_universe`.
pub fn check_generic_for_ids(rel: &IdRelation, id_universe: u32) -> Result<PropertyVerdict> {
    let ids: Vec<Value> = (1..=id_universe).map(Value).collect();
    for p in permutations_fixing(&ids, &BTreeSet::new()) {
        let rename: BTreeMap<IdToken, IdToken> = ids.iter().map(|&v| (IdToken(v.0), IdToken(p.apply_or_fix(v).0))).collect();
        for (i, j) in &rel.pairs {
            let moved = (i.rename_ids(&rename), j.rename_ids(&rename));
            if !rel.pairs.contains(&moved) {
                return fail(format!("({i}, {j}) is related but its id-renamed copy is not"));
            }
        }
    }
    Ok(PropertyVerdict::Holds)
}

/// Partial injections from the first `n_values` values into `#1..#max_ids`:
/// every K_both instance over that universe.
pub fn kboth_instances(n_values: usize, max_ids: u32) -> Vec<IdInstance> {
    let mut out = vec![IdInstance::empty(1, 1)];
    for v in 0..n_values as u32 {
        let mut next = Vec::new();
        for inst in &out {
            next.push(inst.clone());
            let used = inst.ids();
            for id in (1..=max_ids).map(IdToken).filter(|i| !used.contains(i)) {
                let mut grown = inst.clone();
                grown.insert((vec![id], vec![Value(v)])).expect("double arity (1,1)");
                next.push(grown);
            }
        }
        out = next;
    }
    debug_assert!(out.iter().all(|i| KSchema::Both.satisfies(i)));
    out.sort();
    out
}

/// Projection as a relation over the bounded id universe.
pub fn kboth_to_v11_relation(n_values: usize, max_ids: u32) -> Result<IdRelation> {
    let mut pairs = Vec::new();
    for i in kboth_instances(n_values, max_ids) {
        let j = kboth_to_v11(&i)?;
        pairs.push((i, j));
    }
    Ok(IdRelation::new(pairs))
}

/// Id attachment as a relation: every unary instance is related to every
/// K_both instance with the same values, over the bounded id universe.
pub fn v11_to_kboth_relation(n_values: usize, max_ids: u32) -> Result<IdRelation> {
    let mut pairs = Vec::new();
    for j in kboth_instances(n_values, max_ids) {
        pairs.push((kboth_to_v11(&j)?, j));
    }
    Ok(IdRelation::new(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unary_instances(n: usize) -> Vec<IdInstance> {
        (0u32..1 << n)
            .map(|mask| {
                let vals: Vec<u32> = (0..n as u32).filter(|i| mask >> i & 1 == 1).collect();
                IdInstance::unary(&vals)
            })
            .collect()
    }

    #[test]
    fn remark_mappings_have_all_five_properties() {
        let (n, m) = (2, 3);
        let dom: Vec<Value> = (0..n as u32).map(Value).collect();
        let fwd = kboth_to_v11_relation(n, m).unwrap();
        let back = v11_to_kboth_relation(n, m).unwrap();
        let ks = kboth_instances(n, m);
        let us = unary_instances(n);
        for (rel, sources, targets) in [(&fwd, &ks, &us), (&back, &us, &ks)] {
            assert!(check_total(rel, sources).unwrap().holds());
            assert!(check_functional_up_to_ids(rel).unwrap().holds());
            assert!(check_injective_up_to_ids(rel).unwrap().holds());
            assert!(check_generic_for_values(rel, &dom, &BTreeSet::new()).unwrap().holds());
            assert!(check_generic_for_ids(rel, m).unwrap().holds());
            assert!(check_surjective(rel, targets).unwrap().holds());
        }
    }

    #[test]
    fn failures_are_detected() {
        let a = IdInstance::pairs(&[(1, 0)]);
        let b = IdInstance::pairs(&[(1, 1)]);
        let u = |v: u32| IdInstance::unary(&[v]);
        // Both sources collapse onto one target.
        let collapse = IdRelation::new([(a.clone(), u(0)), (b.clone(), u(0))]);
        assert!(!check_injective_up_to_ids(&collapse).unwrap().holds());
        assert!(!check_generic_for_values(&collapse, &[Value(0), Value(1)], &BTreeSet::new()).unwrap().holds());
        // One source, two unrelated images.
        let split = IdRelation::new([(a.clone(), u(0)), (a.clone(), u(1))]);
        assert!(!check_functional_up_to_ids(&split).unwrap().holds());
        assert!(!check_total(&split, &[a.clone(), b.clone()]).unwrap().holds());
        assert!(!check_surjective(&split, &[u(0), u(1), u(2)]).unwrap().holds());
        // Fixed id choice breaks id genericity.
        let fixed_id = IdRelation::new([(u(0), a)]);
        assert!(!check_generic_for_ids(&fixed_id, 2).unwrap().holds());
    }

    #[test]
    fn kboth_universe_size() {
        // Partial injections from 2 values into 2 ids: 1 + 4 + 2.
        assert_eq!(kboth_instances(2, 2).len(), 7);
    }
}
