//! Tagging a family of k unary relations into one binary relation: each
//! element is paired with the constant of every relation containing it.

use std::collections::BTreeSet;
use std::fmt;

use crate::equivariance::{Structure, Transform};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::relmodel::{Instance, Value};

/// An instance of a vocabulary of k unary relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnaryFamily {
    pub sets: Vec<BTreeSet<Value>>,
}

impl UnaryFamily {
    pub fn new(sets: Vec<BTreeSet<Value>>) -> Self {
        UnaryFamily { sets }
    }

    pub fn from_slices(sets: &[&[u32]]) -> Self {
        UnaryFamily {
            sets: sets.iter().map(|s| s.iter().map(|&v| Value(v)).collect()).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    /// All k-tuples of subsets of `values`, in canonical order.
    pub fn enumerate(k: usize, values: &[Value]) -> Vec<UnaryFamily> {
        let subsets: Vec<BTreeSet<Value>> = (0u64..1 << values.len())
            .map(|mask| {
                values
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let mut out = vec![UnaryFamily::new(Vec::new())];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|f| {
                    subsets.iter().map(move |s| {
                        let mut sets = f.sets.clone();
                        sets.push(s.clone());
                        UnaryFamily::new(sets)
                    })
                })
                .collect();
        }
        out.sort();
        out
    }
}

impl fmt::Display for UnaryFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let names: Vec<String> = s.iter().map(|v| v.default_name()).collect();
            write!(f, "S{}={{{}}}", i + 1, names.join(","))?;
        }
        Ok(())
    }
}

impl Structure for UnaryFamily {
    fn adom(&self) -> BTreeSet<Value> {
        self.sets.iter().flatten().copied().collect()
    }

    fn permute(&self, perm: &Permutation) -> Self {
        UnaryFamily {
            sets: self
                .sets
                .iter()
                .map(|s| s.iter().map(|&v| perm.apply_or_fix(v)).collect())
                .collect(),
        }
    }
}

/// The tagging mapping for a fixed k, with constants `c1..ck`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaggingMap {
    pub k: usize,
}

pub fn map_unary_tagging(k: usize) -> TaggingMap {
    TaggingMap { k }
}

impl TaggingMap {
    pub fn tag_constant(i: usize) -> Value {
        Value::constant(i as u32)
    }

    pub fn tag(&self, family: &UnaryFamily) -> Result<Instance> {
        if family.k() != self.k {
            return Err(Error::usage(format!("tagging expects {} relations, got {}", self.k, family.k())));
        }
        if family.adom().iter().any(|v| v.is_constant()) {
            return Err(Error::usage("tagging: a data value collides with a tag constant"));
        }
        Instance::from_tuples(
            2,
            family
                .sets
                .iter()
                .enumerate()
                .flat_map(|(i, s)| s.iter().map(move |&v| vec![v, Self::tag_constant(i + 1)])),
        )
    }

    /// Groups the pairs by their tag.
    pub fn untag(&self, inst: &Instance) -> Result<UnaryFamily> {
        let mut sets = vec![BTreeSet::new(); self.k];
        for t in inst.tuples() {
            let slot = (1..=self.k)
                .find(|&i| Self::tag_constant(i) == t[1])
                .ok_or_else(|| Error::Recovery(format!("untag: {} is not a tag", t[1].default_name())))?;
            if t[0].is_constant() {
                return Err(Error::Recovery("untag: tagged element is a constant".into()));
            }
            sets[slot - 1].insert(t[0]);
        }
        Ok(UnaryFamily::new(sets))
    }
}

impl Transform for TaggingMap {
    type Source = UnaryFamily;
    type Target = Instance;

    fn constants(&self) -> BTreeSet<Value> {
        (1..=self.k).map(Self::tag_constant).collect()
    }

    fn forward(&self, source: &UnaryFamily) -> Result<Instance> {
        self.tag(source)
    }
}
