use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::relmodel::Value;

/// A bijection on a finite carrier of values.
///
/// The carrier is kept sorted; `image[i]` is the image of `carrier[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    carrier: Vec<Value>,
    image: Vec<Value>,
}

impl Permutation {
    pub fn identity(carrier: impl IntoIterator<Item = Value>) -> Self {
        let carrier: Vec<Value> = carrier.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        Permutation {
            image: carrier.clone(),
            carrier,
        }
    }

    /// Builds the permutation sending `from[i]` to `to[i]`.
    pub fn from_mapping(from: &[Value], to: &[Value]) -> Result<Self> {
        if from.len() != to.len() {
            return Err(Error::usage("permutation: source and image lengths differ"));
        }
        let mut pairs: Vec<(Value, Value)> = from.iter().copied().zip(to.iter().copied()).collect();
        pairs.sort();
        let carrier: Vec<Value> = pairs.iter().map(|p| p.0).collect();
        let image: Vec<Value> = pairs.iter().map(|p| p.1).collect();
        let mut sorted_image = image.clone();
        sorted_image.sort();
        if carrier.windows(2).any(|w| w[0] == w[1]) || sorted_image != carrier {
            return Err(Error::usage("permutation: mapping is not a bijection of its carrier"));
        }
        Ok(Permutation { carrier, image })
    }

    /// Builds a permutation of `carrier` from disjoint cycles.
    pub fn from_cycles(carrier: impl IntoIterator<Item = Value>, cycles: &[&[Value]]) -> Result<Self> {
        let mut p = Permutation::identity(carrier);
        let mut seen = BTreeSet::new();
        for cycle in cycles {
            for (i, &v) in cycle.iter().enumerate() {
                if !seen.insert(v) {
                    return Err(Error::usage("permutation: cycles are not disjoint"));
                }
                let next = cycle[(i + 1) % cycle.len()];
                let slot = p
                    .index_of(v)
                    .ok_or_else(|| Error::usage(format!("permutation: {v:?} outside carrier")))?;
                if p.index_of(next).is_none() {
                    return Err(Error::usage(format!("permutation: {next:?} outside carrier")));
                }
                p.image[slot] = next;
            }
        }
        Ok(p)
    }

    fn index_of(&self, v: Value) -> Option<usize> {
        self.carrier.binary_search(&v).ok()
    }

    pub fn carrier(&self) -> &[Value] {
        &self.carrier
    }

    pub fn get(&self, v: Value) -> Option<Value> {
        self.index_of(v).map(|i| self.image[i])
    }

    /// Image of `v`, treating the permutation as the identity outside its carrier.
    pub fn apply_or_fix(&self, v: Value) -> Value {
        self.get(v).unwrap_or(v)
    }

    pub fn is_identity(&self) -> bool {
        self.carrier == self.image
    }

    pub fn fixes_all<'a>(&self, values: impl IntoIterator<Item = &'a Value>) -> bool {
        values.into_iter().all(|&v| self.apply_or_fix(v) == v)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.carrier != other.carrier {
            return Err(Error::usage("permutation: composing over different carriers"));
        }
        let image = other.image.iter().map(|&v| self.apply_or_fix(v)).collect();
        Ok(Permutation {
            carrier: self.carrier.clone(),
            image,
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut pairs: Vec<(Value, Value)> =
            self.image.iter().copied().zip(self.carrier.iter().copied()).collect();
        pairs.sort();
        Permutation {
            carrier: pairs.iter().map(|p| p.0).collect(),
            image: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// Nontrivial cycles, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<Value>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.carrier {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            seen.insert(start);
            let mut cur = self.apply_or_fix(start);
            while cur != start {
                seen.insert(cur);
                cycle.push(cur);
                cur = self.apply_or_fix(cur);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle notation such as `(a b c)(d e)`; the identity prints as `()`.
    pub fn cycle_notation(&self, name: impl Fn(Value) -> String) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| format!("({})", c.iter().map(|&v| name(v)).collect::<Vec<_>>().join(" ")))
            .collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation(|v| v.default_name()))
    }
}

/// All permutations of `carrier` fixing every value of `fixed`, in
/// lexicographic order of their image sequences.
pub fn permutations_fixing(carrier: &[Value], fixed: &BTreeSet<Value>) -> Vec<Permutation> {
    let carrier: Vec<Value> = carrier.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let movable: Vec<Value> = carrier.iter().copied().filter(|v| !fixed.contains(v)).collect();
    let mut out = Vec::new();
    let mut arrangement = movable.clone();
    loop {
        let mut from = Vec::with_capacity(carrier.len());
        let mut to = Vec::with_capacity(carrier.len());
        for &v in &carrier {
            from.push(v);
            to.push(match movable.binary_search(&v) {
                Ok(i) => arrangement[i],
                Err(_) => v,
            });
        }
        out.push(Permutation::from_mapping(&from, &to).expect("arrangement is a bijection"));
        if !next_permutation(&mut arrangement) {
            break;
        }
    }
    out
}

fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}
