//! Exhaustive enumeration of schema instances over a bounded domain.
//!
//! The search walks subsets of the `n^arity` candidate tuples in increasing
//! position order. Keys are monotone (a subset of a key-satisfying set
//! satisfies the key), so they prune the walk; inclusion dependencies are
//! checked at every visited subset. The top level is split by the smallest
//! chosen position, which gives disjoint subranges for the parallel strategy.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::perm::{permutations_fixing, Permutation};
use crate::relmodel::{Instance, SchemaDesc, Value};

pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// A finite domain `D` of `size` values, interned as `0..size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainSpec {
    size: usize,
    names: Option<Vec<String>>,
}

impl DomainSpec {
    pub fn new(size: usize) -> Self {
        DomainSpec { size, names: None }
    }

    pub fn with_names(names: Vec<String>) -> Result<Self> {
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(Error::usage("domain names must be distinct"));
        }
        Ok(DomainSpec {
            size: names.len(),
            names: Some(names),
        })
    }

    /// Domain named `a`, `b`, `c`, ... (at most 26 values).
    pub fn letters(size: usize) -> Self {
        assert!(size <= 26, "letter domains hold at most 26 values");
        DomainSpec {
            size,
            names: Some((0..size).map(|i| ((b'a' + i as u8) as char).to_string()).collect()),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn names(&self) -> Vec<String> {
        match &self.names {
            Some(n) => n.clone(),
            None => (0..self.size).map(|i| format!("v{i}")).collect(),
        }
    }

    pub fn values(&self) -> Vec<Value> {
        (0..self.size as u32).map(Value).collect()
    }
}

/// Upper bound on the number of candidate subsets the search may visit.
pub fn search_estimate(schema: &SchemaDesc, n: usize) -> BigUint {
    let n_big = BigUint::from(n);
    let all = BigUint::from(2u32).pow(n_big.clone().pow(schema.arity as u32));
    schema
        .keys
        .iter()
        .map(|k| {
            let rest = n_big.clone().pow((schema.arity - k.columns().len()) as u32);
            let slots = n_big.clone().pow(k.columns().len() as u32);
            (BigUint::one() + rest).pow(slots.to_u32().unwrap_or(u32::MAX))
        })
        .chain(std::iter::once(all))
        .min()
        .expect("at least one estimate")
}

struct SearchSpace {
    arity: usize,
    values: Vec<Value>,
    positions: Vec<Vec<u32>>,
    /// Per key: the projection code of every position and the code-space size.
    keys: Vec<(Vec<usize>, usize)>,
    /// Per IND: lhs and rhs projection codes per position, and code-space size.
    inds: Vec<(Vec<usize>, Vec<usize>, usize)>,
}

impl SearchSpace {
    fn new(schema: &SchemaDesc, values: &[Value]) -> Result<Self> {
        schema.validate()?;
        if !(1..=3).contains(&schema.arity) {
            return Err(Error::usage(format!("enumeration supports arity 1..3, not {}", schema.arity)));
        }
        let n = values.len();
        let total = n.pow(schema.arity as u32);
        let positions: Vec<Vec<u32>> = (0..total)
            .map(|mut p| {
                let mut digits = vec![0u32; schema.arity];
                for d in digits.iter_mut().rev() {
                    *d = (p % n) as u32;
                    p /= n;
                }
                digits
            })
            .collect();
        let code = |digits: &[u32], cols: &[usize]| cols.iter().fold(0usize, |acc, &c| acc * n + digits[c - 1] as usize);
        let keys = schema
            .keys
            .iter()
            .map(|k| {
                let codes = positions.iter().map(|d| code(d, k.columns())).collect();
                (codes, n.pow(k.columns().len() as u32))
            })
            .collect();
        let inds = schema
            .inds
            .iter()
            .map(|i| {
                let l = positions.iter().map(|d| code(d, i.lhs())).collect();
                let r = positions.iter().map(|d| code(d, i.rhs())).collect();
                (l, r, n.pow(i.lhs().len() as u32))
            })
            .collect();
        Ok(SearchSpace {
            arity: schema.arity,
            values: values.to_vec(),
            positions,
            keys,
            inds,
        })
    }

    fn len(&self) -> usize {
        self.positions.len()
    }

    fn inds_hold(&self, chosen: &[u32], scratch: &mut Vec<bool>) -> bool {
        for (lhs, rhs, size) in &self.inds {
            scratch.clear();
            scratch.resize(*size, false);
            for &p in chosen {
                scratch[rhs[p as usize]] = true;
            }
            if chosen.iter().any(|&p| !scratch[lhs[p as usize]]) {
                return false;
            }
        }
        true
    }

    fn instance(&self, chosen: &[u32]) -> Instance {
        let mut inst = Instance::empty(self.arity);
        for &p in chosen {
            let t = self.positions[p as usize].iter().map(|&d| self.values[d as usize]).collect();
            inst.insert(t).expect("arity matches");
        }
        inst
    }

    /// Depth-first walk of key-consistent subsets below `chosen`, calling
    /// `visit` on each subset satisfying the INDs. Stops when `visit` breaks.
    fn walk<B>(
        &self,
        chosen: &mut Vec<u32>,
        used: &mut [Vec<bool>],
        scratch: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[u32]) -> std::ops::ControlFlow<B>,
    ) -> std::ops::ControlFlow<B> {
        if self.inds_hold(chosen, scratch) {
            visit(chosen)?;
        }
        let start = chosen.last().map_or(0, |&p| p as usize + 1);
        for p in start..self.len() {
            if self.keys.iter().zip(used.iter()).any(|((codes, _), u)| u[codes[p]]) {
                continue;
            }
            for ((codes, _), u) in self.keys.iter().zip(used.iter_mut()) {
                u[codes[p]] = true;
            }
            chosen.push(p as u32);
            let flow = self.walk(chosen, used, scratch, visit);
            chosen.pop();
            for ((codes, _), u) in self.keys.iter().zip(used.iter_mut()) {
                u[codes[p]] = false;
            }
            flow?;
        }
        std::ops::ControlFlow::Continue(())
    }

    /// Walks the subtree whose smallest chosen position is `first`
    /// (`None` is the empty subset alone).
    fn walk_subtree<B>(
        &self,
        first: Option<usize>,
        visit: &mut dyn FnMut(&[u32]) -> std::ops::ControlFlow<B>,
    ) -> std::ops::ControlFlow<B> {
        let mut scratch = Vec::new();
        match first {
            None => {
                if self.inds_hold(&[], &mut scratch) {
                    visit(&[])?;
                }
                std::ops::ControlFlow::Continue(())
            }
            Some(p) => {
                let mut used: Vec<Vec<bool>> = self.keys.iter().map(|(_, size)| vec![false; *size]).collect();
                for ((codes, _), u) in self.keys.iter().zip(used.iter_mut()) {
                    u[codes[p]] = true;
                }
                let mut chosen = vec![p as u32];
                self.walk(&mut chosen, &mut used, &mut scratch, visit)
            }
        }
    }

    fn roots(&self) -> Vec<Option<usize>> {
        std::iter::once(None).chain((0..self.len()).map(Some)).collect()
    }
}

/// Enumeration settings: search budget and execution strategy.
#[derive(Clone, Copy, Debug)]
pub struct Enumerator {
    pub budget: u64,
    pub exec: Exec,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator {
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
        }
    }
}

impl Enumerator {
    pub fn new(budget: u64, exec: Exec) -> Self {
        Enumerator { budget, exec }
    }

    fn check_budget(&self, schema: &SchemaDesc, n: usize) -> Result<()> {
        let estimate = search_estimate(schema, n);
        if estimate > BigUint::from(self.budget) {
            return Err(Error::resource(
                format!("enumerating {} over {n} values", schema.name),
                estimate,
                self.budget,
            ));
        }
        Ok(())
    }

    /// All instances of `schema` with active domain inside `dom`, in canonical order.
    pub fn enumerate(&self, schema: &SchemaDesc, dom: &DomainSpec) -> Result<Vec<Instance>> {
        self.enumerate_over(schema, &dom.values())
    }

    /// As [`Enumerator::enumerate`] with an explicit set of carrier values.
    pub fn enumerate_over(&self, schema: &SchemaDesc, values: &[Value]) -> Result<Vec<Instance>> {
        let values = dedup_sorted(values);
        self.check_budget(schema, values.len())?;
        let space = SearchSpace::new(schema, &values)?;
        let roots = space.roots();
        let chunks: Vec<Vec<Instance>> = self.exec.map(&roots, |&root| {
            let mut out = Vec::new();
            let _ = space.walk_subtree::<()>(root, &mut |chosen| {
                out.push(space.instance(chosen));
                std::ops::ControlFlow::Continue(())
            });
            out
        });
        let mut all: Vec<Instance> = chunks.into_iter().flatten().collect();
        all.sort();
        Ok(all)
    }

    pub fn count(&self, schema: &SchemaDesc, dom: &DomainSpec) -> Result<BigUint> {
        self.check_budget(schema, dom.size())?;
        let space = SearchSpace::new(schema, &dom.values())?;
        let roots = space.roots();
        let counts: Vec<u64> = self.exec.map(&roots, |&root| {
            let mut c = 0u64;
            let _ = space.walk_subtree::<()>(root, &mut |_| {
                c += 1;
                std::ops::ControlFlow::Continue(())
            });
            c
        });
        Ok(counts.into_iter().map(BigUint::from).sum())
    }

    /// First instance (in walk order) satisfying `pred`, visiting at most
    /// `budget` subsets. No up-front estimate is required, so this works on
    /// schemas too large to enumerate when a witness appears early.
    pub fn find_instance<F>(&self, schema: &SchemaDesc, dom: &DomainSpec, pred: F) -> Result<Option<Instance>>
    where
        F: Fn(&Instance) -> bool + Sync + Send,
    {
        let space = SearchSpace::new(schema, &dom.values())?;
        let roots = space.roots();
        let visited = AtomicU64::new(0);
        let budget = self.budget;
        let found = self.exec.find_first(&roots, |&root| {
            let flow = space.walk_subtree(root, &mut |chosen| {
                if visited.fetch_add(1, Ordering::Relaxed) >= budget {
                    return std::ops::ControlFlow::Break(Err(()));
                }
                let inst = space.instance(chosen);
                if pred(&inst) {
                    std::ops::ControlFlow::Break(Ok(inst))
                } else {
                    std::ops::ControlFlow::Continue(())
                }
            });
            match flow {
                std::ops::ControlFlow::Break(r) => Some(r),
                std::ops::ControlFlow::Continue(()) => None,
            }
        });
        match found {
            None => Ok(None),
            Some(Ok(inst)) => Ok(Some(inst)),
            Some(Err(())) => Err(Error::resource(
                format!("searching {} over {} values", schema.name, dom.size()),
                search_estimate(schema, dom.size()),
                budget,
            )),
        }
    }
}

fn dedup_sorted(values: &[Value]) -> Vec<Value> {
    values.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

pub fn enumerate_instances(schema: &SchemaDesc, dom: &DomainSpec) -> Result<Vec<Instance>> {
    Enumerator::default().enumerate(schema, dom)
}

pub fn count_instances(schema: &SchemaDesc, dom: &DomainSpec) -> Result<BigUint> {
    Enumerator::default().count(schema, dom)
}

/// All permutations of the domain fixing `fixed` pointwise.
pub fn enumerate_permutations(dom: &DomainSpec, fixed: &BTreeSet<Value>) -> Result<Vec<Permutation>> {
    let values = dom.values();
    if let Some(v) = fixed.iter().find(|v| !values.contains(v)) {
        return Err(Error::usage(format!("fixed value {} outside the domain", v.default_name())));
    }
    Ok(permutations_fixing(&values, fixed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s9() -> SchemaDesc {
        SchemaDesc::new("S9", 2).key([1]).ind([1, 2], [2, 1])
    }

    #[test]
    fn symm_deg1_at_two() {
        let got = enumerate_instances(&s9(), &DomainSpec::new(2)).unwrap();
        let want = vec![
            Instance::empty(2),
            Instance::pairs(&[(0, 0)]),
            Instance::pairs(&[(1, 1)]),
            Instance::pairs(&[(0, 0), (1, 1)]),
            Instance::pairs(&[(0, 1), (1, 0)]),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn empty_domain() {
        for s in [s9(), SchemaDesc::new("S0", 2), SchemaDesc::new("T1", 3).key([1])] {
            assert_eq!(enumerate_instances(&s, &DomainSpec::new(0)).unwrap(), vec![Instance::empty(s.arity)]);
        }
    }

    #[test]
    fn counts_at_two() {
        let d = DomainSpec::new(2);
        let s0 = SchemaDesc::new("S0", 2);
        let s1 = SchemaDesc::new("S1", 2).ind([1], [2]);
        let s3 = SchemaDesc::new("S3", 2).ind([1], [2]).ind([2], [1]);
        let s6 = SchemaDesc::new("S6", 2).key([1]).ind([1], [2]);
        assert_eq!(count_instances(&s0, &d).unwrap(), BigUint::from(16u32));
        assert_eq!(count_instances(&s1, &d).unwrap(), BigUint::from(12u32));
        assert_eq!(count_instances(&s3, &d).unwrap(), BigUint::from(10u32));
        assert_eq!(count_instances(&s6, &d).unwrap(), BigUint::from(5u32));
    }

    #[test]
    fn permutations() {
        let d3 = DomainSpec::new(3);
        assert_eq!(enumerate_permutations(&d3, &BTreeSet::new()).unwrap().len(), 6);
        let all: BTreeSet<Value> = d3.values().into_iter().collect();
        assert_eq!(enumerate_permutations(&d3, &all).unwrap().len(), 1);
        let d4 = DomainSpec::new(4);
        assert_eq!(enumerate_permutations(&d4, &BTreeSet::from([Value(3)])).unwrap().len(), 6);
        assert!(enumerate_permutations(&d3, &BTreeSet::from([Value(7)])).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let s0 = SchemaDesc::new("S0", 2);
        match enumerate_instances(&s0, &DomainSpec::new(5)) {
            Err(Error::Resource { estimate, .. }) => assert_eq!(estimate, BigUint::from(1u64 << 25)),
            other => panic!("expected resource error, got {other:?}"),
        }
        let tiny = Enumerator::new(10, Exec::Sequential);
        assert!(tiny.count(&s0, &DomainSpec::new(2)).is_err());
        // a lazy search finds an early witness even where full enumeration is refused
        let t0 = SchemaDesc::new("T0", 3);
        let hit = Enumerator::default()
            .find_instance(&t0, &DomainSpec::new(3), |i| i.len() == 2)
            .unwrap();
        assert_eq!(hit.map(|i| i.len()), Some(2));
    }

    #[test]
    fn sequential_matches_default() {
        let s5 = SchemaDesc::new("S5", 2).key([1]);
        let d = DomainSpec::new(3);
        let a = Enumerator::new(DEFAULT_BUDGET, Exec::Sequential).enumerate(&s5, &d).unwrap();
        let b = Enumerator::default().enumerate(&s5, &d).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
    }
}
