//! Values, instances, single-relation schemas and constraint satisfaction.
//!
//! Column indices are 1-based in every public interface.

pub(crate) mod text;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub use text::{parse_instance, parse_schema, write_instance, write_instance_blocks, write_schema, Symbols};

/// Values at or above this index are reserved for mapping constants.
const CONSTANT_BASE: u32 = 1 << 30;

/// An atomic data value, interned to a dense index.
///
/// Only equality is meaningful; the index order is used for canonical output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Value(pub u32);

impl Value {
    /// The `i`-th reserved constant, printed as `c{i}`.
    pub fn constant(i: u32) -> Value {
        Value(CONSTANT_BASE + i)
    }

    pub fn is_constant(self) -> bool {
        self.0 >= CONSTANT_BASE
    }

    pub fn default_name(self) -> String {
        if self.is_constant() {
            format!("c{}", self.0 - CONSTANT_BASE)
        } else {
            format!("v{}", self.0)
        }
    }
}

pub type Tuple = Vec<Value>;

/// A finite relation: a set of equal-length tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    arity: usize,
    tuples: BTreeSet<Tuple>,
}

impl Instance {
    pub fn empty(arity: usize) -> Self {
        Instance {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    pub fn from_tuples<I, T>(arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<Tuple>,
    {
        let mut inst = Instance::empty(arity);
        for t in tuples {
            inst.insert(t.into())?;
        }
        Ok(inst)
    }

    /// Binary instance from index pairs; convenient in tests.
    pub fn pairs(pairs: &[(u32, u32)]) -> Self {
        Instance {
            arity: 2,
            tuples: pairs.iter().map(|&(a, b)| vec![Value(a), Value(b)]).collect(),
        }
    }

    /// Ternary instance from index triples.
    pub fn triples(triples: &[(u32, u32, u32)]) -> Self {
        Instance {
            arity: 3,
            tuples: triples.iter().map(|&(a, b, c)| vec![Value(a), Value(b), Value(c)]).collect(),
        }
    }

    pub fn insert(&mut self, tuple: Tuple) -> Result<bool> {
        if tuple.len() != self.arity {
            return Err(Error::usage(format!(
                "tuple of length {} in an instance of arity {}",
                tuple.len(),
                self.arity
            )));
        }
        Ok(self.tuples.insert(tuple))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[Value]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Tuple> + '_ {
        self.tuples.iter()
    }

    pub fn into_tuples(self) -> BTreeSet<Tuple> {
        self.tuples
    }

    pub fn adom(&self) -> BTreeSet<Value> {
        adom(self)
    }

    /// Image under `perm`, extended by the identity outside its carrier.
    pub fn permute_extended(&self, perm: &Permutation) -> Instance {
        Instance {
            arity: self.arity,
            tuples: self
                .tuples
                .iter()
                .map(|t| t.iter().map(|&v| perm.apply_or_fix(v)).collect())
                .collect(),
        }
    }

    /// Swaps the two columns of a binary instance.
    pub fn transpose(&self) -> Instance {
        Instance {
            arity: self.arity,
            tuples: self.tuples.iter().map(|t| t.iter().rev().copied().collect()).collect(),
        }
    }

    fn project(&self, cols: &[usize]) -> BTreeSet<Vec<Value>> {
        self.tuples
            .iter()
            .map(|t| cols.iter().map(|&c| t[c - 1]).collect())
            .collect()
    }
}

/// Canonical order: arity, then tuple count, then lexicographic tuple order.
impl Ord for Instance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arity
            .cmp(&other.arity)
            .then(self.tuples.len().cmp(&other.tuples.len()))
            .then_with(|| self.tuples.iter().cmp(other.tuples.iter()))
    }
}

impl PartialOrd for Instance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.tuples.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let names: Vec<String> = t.iter().map(|v| v.default_name()).collect();
            write!(f, "({})", names.join(","))?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct KeyConstraint {
    columns: Vec<usize>,
}

impl KeyConstraint {
    pub fn new(columns: impl IntoIterator<Item = usize>) -> Self {
        let columns: BTreeSet<usize> = columns.into_iter().collect();
        KeyConstraint {
            columns: columns.into_iter().collect(),
        }
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn validate(&self, arity: usize) -> Result<()> {
        if self.columns.is_empty() {
            return Err(Error::Constraint("key with no columns".into()));
        }
        if let Some(c) = self.columns.iter().find(|&&c| c == 0 || c > arity) {
            return Err(Error::Constraint(format!("key column {c} outside 1..{arity}")));
        }
        Ok(())
    }
}

impl From<Vec<usize>> for KeyConstraint {
    fn from(columns: Vec<usize>) -> Self {
        KeyConstraint::new(columns)
    }
}

impl From<KeyConstraint> for Vec<usize> {
    fn from(k: KeyConstraint) -> Self {
        k.columns
    }
}

impl fmt::Display for KeyConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "key{{{}}}", join(&self.columns))
    }
}

/// `R[lhs] ⊆ R[rhs]` on a single relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InclusionDependency {
    lhs: Vec<usize>,
    rhs: Vec<usize>,
}

impl InclusionDependency {
    pub fn new(lhs: impl IntoIterator<Item = usize>, rhs: impl IntoIterator<Item = usize>) -> Self {
        InclusionDependency {
            lhs: lhs.into_iter().collect(),
            rhs: rhs.into_iter().collect(),
        }
    }

    pub fn lhs(&self) -> &[usize] {
        &self.lhs
    }

    pub fn rhs(&self) -> &[usize] {
        &self.rhs
    }

    pub fn validate(&self, arity: usize) -> Result<()> {
        if self.lhs.len() != self.rhs.len() || self.lhs.is_empty() {
            return Err(Error::Constraint(format!("{self}: sides must be nonempty and of equal length")));
        }
        for side in [&self.lhs, &self.rhs] {
            if side.iter().any(|&c| c == 0 || c > arity) {
                return Err(Error::Constraint(format!("{self}: column outside 1..{arity}")));
            }
            let distinct: BTreeSet<_> = side.iter().collect();
            if distinct.len() != side.len() {
                return Err(Error::Constraint(format!("{self}: repeated column")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for InclusionDependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R[{}]⊆R[{}]", join(&self.lhs), join(&self.rhs))
    }
}

fn join(cols: &[usize]) -> String {
    cols.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

/// A single-relation schema: arity plus keys and inclusion dependencies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemaDesc {
    pub name: String,
    pub arity: usize,
    #[serde(default)]
    pub keys: Vec<KeyConstraint>,
    #[serde(default)]
    pub inds: Vec<InclusionDependency>,
}

impl SchemaDesc {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        SchemaDesc {
            name: name.into(),
            arity,
            keys: Vec::new(),
            inds: Vec::new(),
        }
    }

    pub fn key(mut self, columns: impl IntoIterator<Item = usize>) -> Self {
        self.keys.push(KeyConstraint::new(columns));
        self
    }

    pub fn ind(mut self, lhs: impl IntoIterator<Item = usize>, rhs: impl IntoIterator<Item = usize>) -> Self {
        self.inds.push(InclusionDependency::new(lhs, rhs));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.arity == 0 {
            return Err(Error::Constraint(format!("{}: arity must be positive", self.name)));
        }
        for k in &self.keys {
            k.validate(self.arity)?;
        }
        for i in &self.inds {
            i.validate(self.arity)?;
        }
        Ok(())
    }

    /// The schema obtained by reversing the column order (binary: swapping columns).
    pub fn transposed(&self, name: impl Into<String>) -> SchemaDesc {
        let flip = |c: usize| self.arity + 1 - c;
        SchemaDesc {
            name: name.into(),
            arity: self.arity,
            keys: self.keys.iter().map(|k| KeyConstraint::new(k.columns.iter().map(|&c| flip(c)))).collect(),
            inds: self
                .inds
                .iter()
                .map(|i| InclusionDependency::new(i.lhs.iter().map(|&c| flip(c)), i.rhs.iter().map(|&c| flip(c))))
                .collect(),
        }
    }

    /// Same keys and INDs, ignoring order and name.
    pub fn same_constraints(&self, other: &SchemaDesc) -> bool {
        let a: BTreeSet<_> = self.keys.iter().collect();
        let b: BTreeSet<_> = other.keys.iter().collect();
        let c: BTreeSet<_> = self.inds.iter().collect();
        let d: BTreeSet<_> = other.inds.iter().collect();
        self.arity == other.arity && a == b && c == d
    }
}

impl fmt::Display for SchemaDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<String> = self.keys.iter().map(|k| k.to_string()).collect();
        let inds: Vec<String> = self.inds.iter().map(|i| i.to_string()).collect();
        write!(
            f,
            "{} (arity {}; keys: {}; inds: {})",
            self.name,
            self.arity,
            if keys.is_empty() { "none".into() } else { keys.join(", ") },
            if inds.is_empty() { "none".into() } else { inds.join(", ") },
        )
    }
}

pub fn satisfies_key(inst: &Instance, key: &KeyConstraint) -> Result<bool> {
    key.validate(inst.arity)?;
    let mut seen = BTreeSet::new();
    for t in &inst.tuples {
        let proj: Vec<Value> = key.columns.iter().map(|&c| t[c - 1]).collect();
        if !seen.insert(proj) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn satisfies_ind(inst: &Instance, ind: &InclusionDependency) -> Result<bool> {
    ind.validate(inst.arity)?;
    let rhs = inst.project(&ind.rhs);
    Ok(inst.project(&ind.lhs).is_subset(&rhs))
}

pub fn satisfies_schema(inst: &Instance, schema: &SchemaDesc) -> Result<bool> {
    if inst.arity != schema.arity {
        return Err(Error::usage(format!(
            "instance of arity {} checked against {} of arity {}",
            inst.arity, schema.name, schema.arity
        )));
    }
    for k in &schema.keys {
        if !satisfies_key(inst, k)? {
            return Ok(false);
        }
    }
    for i in &schema.inds {
        if !satisfies_ind(inst, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn adom(inst: &Instance) -> BTreeSet<Value> {
    inst.tuples.iter().flatten().copied().collect()
}

/// Componentwise image of `inst`; every value must lie in the carrier of `perm`.
pub fn apply_permutation(inst: &Instance, perm: &Permutation) -> Result<Instance> {
    let mut tuples = BTreeSet::new();
    for t in &inst.tuples {
        let img = t
            .iter()
            .map(|&v| {
                perm.get(v)
                    .ok_or_else(|| Error::usage(format!("value {} outside the permutation carrier", v.default_name())))
            })
            .collect::<Result<Tuple>>()?;
        tuples.insert(img);
    }
    Ok(Instance {
        arity: inst.arity,
        tuples,
    })
}

/// The nine directed-graph classes of single binary relation schemas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum GraphClassLabel {
    DIGRAPH,
    SOURCE_FREE,
    SOURCE_SINK_FREE,
    SYMM,
    OUTDEG_LE1,
    CYCLES,
    OUTDEG1,
    SYMM_DEG1,
    PATHS_CYCLES,
}

impl GraphClassLabel {
    pub const ALL: [GraphClassLabel; 9] = [
        GraphClassLabel::DIGRAPH,
        GraphClassLabel::SOURCE_FREE,
        GraphClassLabel::SOURCE_SINK_FREE,
        GraphClassLabel::SYMM,
        GraphClassLabel::OUTDEG_LE1,
        GraphClassLabel::CYCLES,
        GraphClassLabel::OUTDEG1,
        GraphClassLabel::SYMM_DEG1,
        GraphClassLabel::PATHS_CYCLES,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphClassLabel::DIGRAPH => "DIGRAPH",
            GraphClassLabel::SOURCE_FREE => "SOURCE_FREE",
            GraphClassLabel::SOURCE_SINK_FREE => "SOURCE_SINK_FREE",
            GraphClassLabel::SYMM => "SYMM",
            GraphClassLabel::OUTDEG_LE1 => "OUTDEG_LE1",
            GraphClassLabel::CYCLES => "CYCLES",
            GraphClassLabel::OUTDEG1 => "OUTDEG1",
            GraphClassLabel::SYMM_DEG1 => "SYMM_DEG1",
            GraphClassLabel::PATHS_CYCLES => "PATHS_CYCLES",
        }
    }

    /// Name of the Table-1 schema that represents this class.
    pub fn representative(self) -> &'static str {
        match self {
            GraphClassLabel::DIGRAPH => "S0",
            GraphClassLabel::SOURCE_FREE => "S1",
            GraphClassLabel::SOURCE_SINK_FREE => "S3",
            GraphClassLabel::SYMM => "S4",
            GraphClassLabel::OUTDEG_LE1 => "S5",
            GraphClassLabel::CYCLES => "S6",
            GraphClassLabel::OUTDEG1 => "S7",
            GraphClassLabel::SYMM_DEG1 => "S9",
            GraphClassLabel::PATHS_CYCLES => "S15",
        }
    }
}

impl fmt::Display for GraphClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace(['&', '-', ' '], "_");
        GraphClassLabel::ALL
            .into_iter()
            .find(|l| l.name() == norm)
            .ok_or_else(|| Error::usage(format!("unknown graph class {s:?}")))
    }
}

/// Classifies a binary instance by degree and symmetry predicates, without
/// going through the key/IND checker.
pub fn classify_graph(inst: &Instance) -> Result<BTreeSet<GraphClassLabel>> {
    use GraphClassLabel::*;
    if inst.arity != 2 {
        return Err(Error::usage(format!("classify_graph needs arity 2, got {}", inst.arity)));
    }
    let mut outdeg: BTreeMap<Value, usize> = BTreeMap::new();
    let mut indeg: BTreeMap<Value, usize> = BTreeMap::new();
    for t in &inst.tuples {
        *outdeg.entry(t[0]).or_default() += 1;
        *indeg.entry(t[1]).or_default() += 1;
        outdeg.entry(t[1]).or_default();
        indeg.entry(t[0]).or_default();
    }
    let nodes: Vec<Value> = outdeg.keys().copied().collect();
    let out = |v: &Value| outdeg[v];
    let inn = |v: &Value| indeg[v];
    let symmetric = inst.tuples.iter().all(|t| inst.contains(&[t[1], t[0]]));

    let mut labels = BTreeSet::from([DIGRAPH]);
    if nodes.iter().all(|v| inn(v) >= 1) {
        labels.insert(SOURCE_FREE);
    }
    if nodes.iter().all(|v| inn(v) >= 1 && out(v) >= 1) {
        labels.insert(SOURCE_SINK_FREE);
    }
    if symmetric {
        labels.insert(SYMM);
    }
    if nodes.iter().all(|v| out(v) <= 1) {
        labels.insert(OUTDEG_LE1);
    }
    if nodes.iter().all(|v| inn(v) == 1 && out(v) == 1) {
        labels.insert(CYCLES);
    }
    if nodes.iter().all(|v| out(v) == 1) {
        labels.insert(OUTDEG1);
    }
    if symmetric && nodes.iter().all(|v| out(v) == 1) {
        labels.insert(SYMM_DEG1);
    }
    if nodes.iter().all(|v| inn(v) <= 1 && out(v) <= 1) {
        labels.insert(PATHS_CYCLES);
    }
    Ok(labels)
}

/// Groups tuples by a column; handy for functional readings of keyed relations.
pub(crate) fn lookup_by_column(inst: &Instance, key_col: usize, val_col: usize) -> HashMap<Value, Value> {
    inst.tuples.iter().map(|t| (t[key_col - 1], t[val_col - 1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use GraphClassLabel::*;

    const A: u32 = 0;
    const B: u32 = 1;
    const C: u32 = 2;

    fn s3() -> SchemaDesc {
        SchemaDesc::new("S3", 2).ind([1], [2]).ind([2], [1])
    }

    fn s6() -> SchemaDesc {
        SchemaDesc::new("S6", 2).key([1]).ind([1], [2])
    }

    #[test]
    fn key_examples() {
        let k1 = KeyConstraint::new([1]);
        assert!(!satisfies_key(&Instance::pairs(&[(A, B), (A, C)]), &k1).unwrap());
        assert!(satisfies_key(&Instance::empty(2), &k1).unwrap());
        assert!(satisfies_key(&Instance::pairs(&[(A, B), (B, C), (C, A)]), &k1).unwrap());
        let bad = KeyConstraint::new([3]);
        assert!(matches!(satisfies_key(&Instance::empty(2), &bad), Err(Error::Constraint(_))));
    }

    #[test]
    fn ind_examples() {
        assert!(!satisfies_ind(&Instance::pairs(&[(A, B)]), &InclusionDependency::new([1], [2])).unwrap());
        let sym = InclusionDependency::new([1, 2], [2, 1]);
        assert!(satisfies_ind(&Instance::pairs(&[(A, B), (B, A)]), &sym).unwrap());
        assert!(satisfies_ind(&Instance::pairs(&[(A, A)]), &InclusionDependency::new([2], [1])).unwrap());
        let bad = InclusionDependency::new([1, 2], [1]);
        assert!(satisfies_ind(&Instance::empty(2), &bad).is_err());
        let repeated = InclusionDependency::new([1, 1], [1, 2]);
        assert!(satisfies_ind(&Instance::empty(2), &repeated).is_err());
    }

    #[test]
    fn schema_examples() {
        assert!(satisfies_schema(&Instance::pairs(&[(A, B), (B, C), (C, A)]), &s6()).unwrap());
        assert!(!satisfies_schema(&Instance::pairs(&[(A, B)]), &s3()).unwrap());
        assert!(satisfies_schema(&Instance::empty(2), &s6()).unwrap());
        assert!(matches!(
            satisfies_schema(&Instance::empty(3), &s6()),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn adom_examples() {
        assert_eq!(adom(&Instance::pairs(&[(A, B)])), BTreeSet::from([Value(A), Value(B)]));
        assert!(adom(&Instance::empty(2)).is_empty());
        assert_eq!(adom(&Instance::pairs(&[(A, A), (A, B)])), BTreeSet::from([Value(A), Value(B)]));
    }

    #[test]
    fn permutation_examples() {
        let carrier = [Value(A), Value(B), Value(C)];
        let swap = Permutation::from_cycles(carrier, &[&[Value(A), Value(B)]]).unwrap();
        assert_eq!(apply_permutation(&Instance::pairs(&[(A, B)]), &swap).unwrap(), Instance::pairs(&[(B, A)]));
        let id = Permutation::identity(carrier);
        assert_eq!(apply_permutation(&Instance::pairs(&[(A, A)]), &id).unwrap(), Instance::pairs(&[(A, A)]));
        let rot = Permutation::from_cycles(carrier, &[&[Value(A), Value(B), Value(C)]]).unwrap();
        let tri = Instance::pairs(&[(A, B), (B, C), (C, A)]);
        assert_eq!(apply_permutation(&tri, &rot).unwrap(), tri);
        let small = Permutation::identity([Value(A)]);
        assert!(apply_permutation(&Instance::pairs(&[(A, B)]), &small).is_err());
    }

    #[test]
    fn classify_examples() {
        let all: BTreeSet<_> = GraphClassLabel::ALL.into_iter().collect();
        assert_eq!(classify_graph(&Instance::pairs(&[(A, B), (B, A)])).unwrap(), all);
        assert_eq!(
            classify_graph(&Instance::pairs(&[(A, B)])).unwrap(),
            BTreeSet::from([DIGRAPH, OUTDEG_LE1, PATHS_CYCLES])
        );
        assert_eq!(classify_graph(&Instance::empty(2)).unwrap(), all);
        assert!(classify_graph(&Instance::empty(3)).is_err());
    }

    #[test]
    fn canonical_order_is_size_first() {
        let mut v = vec![
            Instance::pairs(&[(A, A), (A, B)]),
            Instance::pairs(&[(B, B)]),
            Instance::empty(2),
            Instance::pairs(&[(A, B)]),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Instance::empty(2),
                Instance::pairs(&[(A, B)]),
                Instance::pairs(&[(B, B)]),
                Instance::pairs(&[(A, A), (A, B)]),
            ]
        );
    }

    #[test]
    fn transposed_schema() {
        let s5 = SchemaDesc::new("S5", 2).key([1]);
        let s10 = SchemaDesc::new("S10", 2).key([2]);
        assert!(s5.transposed("x").same_constraints(&s10));
        let s7 = SchemaDesc::new("S7", 2).key([1]).ind([2], [1]);
        let s11 = SchemaDesc::new("S11", 2).key([2]).ind([1], [2]);
        assert!(s7.transposed("x").same_constraints(&s11));
    }
}
