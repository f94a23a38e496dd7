//! Automorphisms, orbits, and the quantified genericity / injectivity checks.
//!
//! Groups are stored as explicit element sets, so carriers are capped at
//! [`MAX_CARRIER`] values.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use crate::counting::factorial;
use crate::enumeration::{DomainSpec, Enumerator};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::mappings::MappingEntry;
use crate::perm::{permutations_fixing, Permutation};
use crate::relmodel::{Instance, SchemaDesc, Value};

pub const MAX_CARRIER: usize = 8;

/// Anything built from values that a domain permutation acts on.
pub trait Structure: Clone + Ord + Hash + Send + Sync {
    fn adom(&self) -> BTreeSet<Value>;
    /// Image under `perm`, extended by the identity outside its carrier.
    fn permute(&self, perm: &Permutation) -> Self;
}

impl Structure for Instance {
    fn adom(&self) -> BTreeSet<Value> {
        Instance::adom(self)
    }

    fn permute(&self, perm: &Permutation) -> Self {
        self.permute_extended(perm)
    }
}

/// A total function between structures with a finite constant set.
pub trait Transform: Sync {
    type Source: Structure;
    type Target: Structure;

    fn constants(&self) -> BTreeSet<Value>;
    fn forward(&self, source: &Self::Source) -> Result<Self::Target>;
}

fn check_carrier_size(movable: usize) -> Result<()> {
    if movable > MAX_CARRIER {
        return Err(Error::resource(
            format!("permutations of a {movable}-value carrier"),
            factorial(movable),
            factorial(MAX_CARRIER).try_into().unwrap_or(u64::MAX),
        ));
    }
    Ok(())
}

/// A finite permutation group stored by its elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismSet {
    carrier: Vec<Value>,
    fixed: BTreeSet<Value>,
    elements: BTreeSet<Permutation>,
}

impl AutomorphismSet {
    /// Validates the group axioms and that every element fixes `fixed`.
    pub fn new(
        carrier: impl IntoIterator<Item = Value>,
        fixed: BTreeSet<Value>,
        elements: BTreeSet<Permutation>,
    ) -> Result<Self> {
        let carrier: Vec<Value> = carrier.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let bad = |m: &str| Err(Error::Consistency(format!("automorphism set: {m}")));
        if !elements.contains(&Permutation::identity(carrier.iter().copied())) {
            return bad("identity missing");
        }
        for p in &elements {
            if p.carrier() != carrier.as_slice() {
                return bad("element over a different carrier");
            }
            if !p.fixes_all(&fixed) {
                return bad("element moves a fixed value");
            }
            if !elements.contains(&p.inverse()) {
                return bad("not closed under inverse");
            }
            for q in &elements {
                if !elements.contains(&p.compose(q)?) {
                    return bad("not closed under composition");
                }
            }
        }
        Ok(AutomorphismSet {
            carrier,
            fixed,
            elements,
        })
    }

    pub fn carrier(&self) -> &[Value] {
        &self.carrier
    }

    pub fn fixed(&self) -> &BTreeSet<Value> {
        &self.fixed
    }

    pub fn elements(&self) -> &BTreeSet<Permutation> {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    /// Elements in cycle notation, in element order.
    pub fn cycle_notation(&self, name: impl Fn(Value) -> String) -> Vec<String> {
        self.elements.iter().map(|p| p.cycle_notation(&name)).collect()
    }
}

impl fmt::Display for AutomorphismSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.cycle_notation(|v| v.default_name()).join(", "))
    }
}

/// All permutations of `carrier` fixing `fixed` that map `s` to itself.
pub fn automorphism_group<S: Structure>(
    s: &S,
    carrier: &BTreeSet<Value>,
    fixed: &BTreeSet<Value>,
) -> Result<AutomorphismSet> {
    if !s.adom().is_subset(carrier) {
        return Err(Error::usage("automorphism_group: active domain not inside the carrier"));
    }
    if !fixed.is_subset(carrier) {
        return Err(Error::usage("automorphism_group: fixed values not inside the carrier"));
    }
    check_carrier_size(carrier.len())?;
    let carrier_vec: Vec<Value> = carrier.iter().copied().collect();
    let elements = permutations_fixing(&carrier_vec, fixed)
        .into_iter()
        .filter(|p| s.permute(p) == *s)
        .collect();
    AutomorphismSet::new(carrier_vec, fixed.clone(), elements)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit<S> {
    pub representative: S,
    pub members: BTreeSet<S>,
}

impl<S> Orbit<S> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Partitions `items` into orbits under `perms`; each representative is the
/// least member. `items` must be closed under `perms`.
pub fn orbits_of<S: Structure>(items: &[S], perms: &[Permutation]) -> Vec<Orbit<S>> {
    let mut sorted: Vec<&S> = items.iter().collect();
    sorted.sort();
    let mut seen: BTreeSet<S> = BTreeSet::new();
    let mut out = Vec::new();
    for s in sorted {
        if seen.contains(s) {
            continue;
        }
        let members: BTreeSet<S> = perms.iter().map(|p| s.permute(p)).chain([s.clone()]).collect();
        seen.extend(members.iter().cloned());
        out.push(Orbit {
            representative: s.clone(),
            members,
        });
    }
    out
}

/// Isomorphism classes of `schema` over `dom` under permutations fixing `fixed`.
pub fn orbits(schema: &SchemaDesc, dom: &DomainSpec, fixed: &BTreeSet<Value>) -> Result<Vec<Orbit<Instance>>> {
    let values = dom.values();
    let instances = Enumerator::default().enumerate_over(schema, &values)?;
    let carrier: Vec<Value> = values.iter().copied().chain(fixed.iter().copied()).collect();
    check_carrier_size(carrier.iter().filter(|v| !fixed.contains(v)).count())?;
    Ok(orbits_of(&instances, &permutations_fixing(&carrier, fixed)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenericityVerdict<S> {
    Pass { instances: usize, permutations: usize },
    /// `forward(perm(instance)) != perm(forward(instance))`.
    Counterexample { instance: S, perm: Permutation },
}

impl<S> GenericityVerdict<S> {
    pub fn passed(&self) -> bool {
        matches!(self, GenericityVerdict::Pass { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InjectivityVerdict<S> {
    Pass { instances: usize },
    /// Two distinct sources with the same image, `first < second`.
    Collision { first: S, second: S },
}

impl<S> InjectivityVerdict<S> {
    pub fn passed(&self) -> bool {
        matches!(self, InjectivityVerdict::Pass { .. })
    }
}

/// Checks `forward(π(I)) = π(forward(I))` for every source and every
/// permutation of `domain ∪ C` fixing `C`. Sources are visited in the given
/// order and the first counterexample is reported.
pub fn check_genericity_over<T: Transform>(
    t: &T,
    sources: &[T::Source],
    domain: &[Value],
    exec: Exec,
) -> Result<GenericityVerdict<T::Source>> {
    let constants = t.constants();
    let carrier: Vec<Value> = domain.iter().copied().chain(constants.iter().copied()).collect();
    check_carrier_size(carrier.iter().collect::<BTreeSet<_>>().len() - constants.len())?;
    let perms = permutations_fixing(&carrier, &constants);
    let found = exec.find_first(sources, |s| {
        let image = match t.forward(s) {
            Ok(j) => j,
            Err(e) => return Some(Err(e)),
        };
        for p in &perms {
            match t.forward(&s.permute(p)) {
                Ok(j) if j == image.permute(p) => {}
                Ok(_) => {
                    return Some(Ok(GenericityVerdict::Counterexample {
                        instance: s.clone(),
                        perm: p.clone(),
                    }))
                }
                Err(e) => return Some(Err(e)),
            }
        }
        None
    });
    match found {
        Some(r) => r,
        None => Ok(GenericityVerdict::Pass {
            instances: sources.len(),
            permutations: perms.len(),
        }),
    }
}

/// Checks that `forward` is injective on `sources`. The reported pair is the
/// one whose later member comes first in source order.
pub fn check_injectivity_over<T: Transform>(
    t: &T,
    sources: &[T::Source],
    exec: Exec,
) -> Result<InjectivityVerdict<T::Source>> {
    let images = exec.map(sources, |s| t.forward(s));
    let mut first_seen: HashMap<T::Target, usize> = HashMap::with_capacity(images.len());
    for (i, img) in images.into_iter().enumerate() {
        let img = img?;
        if let Some(&j) = first_seen.get(&img) {
            return Ok(InjectivityVerdict::Collision {
                first: sources[j].clone(),
                second: sources[i].clone(),
            });
        }
        first_seen.insert(img, i);
    }
    Ok(InjectivityVerdict::Pass { instances: sources.len() })
}

fn catalog_sources(map: &MappingEntry, dom: &DomainSpec, en: &Enumerator) -> Result<(Vec<Value>, Vec<Instance>)> {
    let values = map.domain_values(dom.size());
    let sources = en.enumerate_over(&map.source, &values)?;
    Ok((values, sources))
}

/// Exhaustive genericity check of a catalog mapping over its source
/// instances on an n-value domain.
pub fn check_genericity(map: &MappingEntry, dom: &DomainSpec) -> Result<GenericityVerdict<Instance>> {
    check_genericity_with(map, dom, &Enumerator::default())
}

pub fn check_genericity_with(
    map: &MappingEntry,
    dom: &DomainSpec,
    en: &Enumerator,
) -> Result<GenericityVerdict<Instance>> {
    let (values, sources) = catalog_sources(map, dom, en)?;
    check_genericity_over(map, &sources, &values, en.exec)
}

pub fn check_injectivity(map: &MappingEntry, dom: &DomainSpec) -> Result<InjectivityVerdict<Instance>> {
    check_injectivity_with(map, dom, &Enumerator::default())
}

pub fn check_injectivity_with(
    map: &MappingEntry,
    dom: &DomainSpec,
    en: &Enumerator,
) -> Result<InjectivityVerdict<Instance>> {
    let (_, sources) = catalog_sources(map, dom, en)?;
    check_injectivity_over(map, &sources, en.exec)
}

/// Outcome of an automorphism-based search for possible generic images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub instance: Instance,
    pub target: String,
    pub carrier: Vec<Value>,
    pub fixed: BTreeSet<Value>,
    pub group: AutomorphismSet,
    /// Target instances over the carrier that were compared.
    pub examined: usize,
    pub candidates: Vec<Instance>,
}

impl ObstructionReport {
    pub fn is_obstruction(&self) -> bool {
        self.candidates.is_empty()
    }
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |vs: &mut dyn Iterator<Item = &Value>| vs.map(|v| v.default_name()).collect::<Vec<_>>().join(",");
        writeln!(f, "instance: {}", self.instance)?;
        writeln!(f, "target: {}", self.target)?;
        writeln!(f, "carrier: {{{}}}", names(&mut self.carrier.iter()))?;
        writeln!(f, "fixed: {{{}}}", names(&mut self.fixed.iter()))?;
        writeln!(f, "group order: {}", self.group.order())?;
        writeln!(f, "group: {}", self.group)?;
        writeln!(f, "examined: {}", self.examined)?;
        writeln!(f, "candidates: {}", self.candidates.len())
    }
}

/// Every `J` of `target` over `adom(I) ∪ fixed` with the same automorphism
/// group as `I`, both groups taken over that carrier.
pub fn obstruction_report(inst: &Instance, fixed: &BTreeSet<Value>, target: &SchemaDesc) -> Result<ObstructionReport> {
    let carrier: BTreeSet<Value> = inst.adom().union(fixed).copied().collect();
    let group = automorphism_group(inst, &carrier, fixed)?;
    let carrier_vec: Vec<Value> = carrier.iter().copied().collect();
    let pool = Enumerator::default().enumerate_over(target, &carrier_vec)?;
    let mut candidates = Vec::new();
    for j in &pool {
        if automorphism_group(j, &carrier, fixed)? == group {
            candidates.push(j.clone());
        }
    }
    Ok(ObstructionReport {
        instance: inst.clone(),
        target: target.name.clone(),
        carrier: carrier_vec,
        fixed: fixed.clone(),
        group,
        examined: pool.len(),
        candidates,
    })
}

pub fn find_image_candidates(inst: &Instance, fixed: &BTreeSet<Value>, target: &SchemaDesc) -> Result<Vec<Instance>> {
    Ok(obstruction_report(inst, fixed, target)?.candidates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Value {
        Value(i)
    }

    fn set(vs: &[u32]) -> BTreeSet<Value> {
        vs.iter().map(|&i| Value(i)).collect()
    }

    fn three_cycle() -> Instance {
        Instance::pairs(&[(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn three_cycle_group() {
        let g = automorphism_group(&three_cycle(), &set(&[0, 1, 2]), &BTreeSet::new()).unwrap();
        assert_eq!(g.order(), 3);
        let c = set(&[0, 1, 2]);
        let rot = Permutation::from_cycles(c.clone(), &[&[v(0), v(1), v(2)]]).unwrap();
        let tau = Permutation::from_cycles(c, &[&[v(1), v(2)]]).unwrap();
        assert!(g.contains(&rot));
        assert!(g.contains(&rot.inverse()));
        assert!(!g.contains(&tau));
    }

    #[test]
    fn small_groups() {
        let g = automorphism_group(&Instance::empty(2), &set(&[0]), &BTreeSet::new()).unwrap();
        assert_eq!(g.order(), 1);
        let g = automorphism_group(&Instance::pairs(&[(0, 1), (1, 0)]), &set(&[0, 1]), &BTreeSet::new()).unwrap();
        assert_eq!(g.order(), 2);
        let g = automorphism_group(&Instance::pairs(&[(0, 1), (1, 0)]), &set(&[0, 1]), &set(&[0])).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn automorphism_preconditions() {
        let i = three_cycle();
        assert!(matches!(
            automorphism_group(&i, &set(&[0, 1]), &BTreeSet::new()),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            automorphism_group(&i, &set(&[0, 1, 2]), &set(&[7])),
            Err(Error::Usage(_))
        ));
        let big = set(&[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        assert!(matches!(
            automorphism_group(&i, &big, &BTreeSet::new()),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn axioms_are_enforced() {
        let c = set(&[0, 1, 2]);
        let rot = Permutation::from_cycles(c.clone(), &[&[v(0), v(1), v(2)]]).unwrap();
        let id = Permutation::identity(c.clone());
        let half: BTreeSet<Permutation> = [id.clone(), rot.clone()].into();
        assert!(AutomorphismSet::new(c.clone(), BTreeSet::new(), half).is_err());
        let no_id: BTreeSet<Permutation> = [rot].into();
        assert!(AutomorphismSet::new(c, BTreeSet::new(), no_id).is_err());
    }

    #[test]
    fn orbit_examples() {
        let s0 = SchemaDesc::new("S0", 2);
        let o = orbits(&s0, &DomainSpec::new(1), &BTreeSet::new()).unwrap();
        assert_eq!(o.len(), 2);
        let o = orbits(&s0, &DomainSpec::new(0), &BTreeSet::new()).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].representative, Instance::empty(2));

        let s9 = SchemaDesc::new("S9", 2).key([1]).ind([1, 2], [2, 1]);
        let o = orbits(&s9, &DomainSpec::new(2), &BTreeSet::new()).unwrap();
        let sizes: Vec<usize> = o.iter().map(|o| o.len()).collect();
        assert_eq!(sizes, vec![1, 2, 1, 1]);
    }

    #[test]
    fn obstruction_against_symm() {
        let symm = SchemaDesc::new("S4", 2).ind([1, 2], [2, 1]);
        let r = obstruction_report(&three_cycle(), &BTreeSet::new(), &symm).unwrap();
        assert_eq!(r.examined, 64);
        assert_eq!(r.group.order(), 3);
        assert!(r.is_obstruction());

        let digraph = SchemaDesc::new("S0", 2);
        let c = find_image_candidates(&three_cycle(), &BTreeSet::new(), &digraph).unwrap();
        assert!(c.contains(&three_cycle()));

        let c = find_image_candidates(&Instance::empty(2), &BTreeSet::new(), &symm).unwrap();
        assert_eq!(c, vec![Instance::empty(2)]);
    }
}
