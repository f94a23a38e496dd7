//! Relations with identifier columns: equality up to ids, class enumeration
//! and class automorphisms for the four (1,1) key schemas.

mod properties;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::equivariance::{automorphism_group, AutomorphismSet, Structure};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::relmodel::text::content_lines;
use crate::relmodel::{Symbols, Value};

pub use properties::{
    check_functional_up_to_ids, check_generic_for_ids, check_generic_for_values, check_injective_up_to_ids,
    check_surjective, check_total, kboth_instances, kboth_to_v11_relation, v11_to_kboth_relation, IdRelation, PropertyVerdict,
};

/// An identifier, printed `#i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdToken(pub u32);

impl fmt::Display for IdToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub type IdTuple = (Vec<IdToken>, Vec<Value>);

/// A relation of double arity (k, l): k identifier columns, then l value
/// columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdInstance {
    id_arity: usize,
    val_arity: usize,
    tuples: BTreeSet<IdTuple>,
}

impl IdInstance {
    pub fn empty(id_arity: usize, val_arity: usize) -> Self {
        IdInstance {
            id_arity,
            val_arity,
            tuples: BTreeSet::new(),
        }
    }

    pub fn from_tuples(id_arity: usize, val_arity: usize, tuples: impl IntoIterator<Item = IdTuple>) -> Result<Self> {
        let mut out = Self::empty(id_arity, val_arity);
        for t in tuples {
            out.insert(t)?;
        }
        Ok(out)
    }

    /// (1,1) instance from `(id, value)` index pairs.
    pub fn pairs(pairs: &[(u32, u32)]) -> Self {
        Self::from_tuples(1, 1, pairs.iter().map(|&(i, v)| (vec![IdToken(i)], vec![Value(v)])))
            .expect("pairs have double arity (1,1)")
    }

    /// (0,1) instance holding the given values.
    pub fn unary(values: &[u32]) -> Self {
        Self::from_tuples(0, 1, values.iter().map(|&v| (vec![], vec![Value(v)]))).expect("double arity (0,1)")
    }

    pub fn insert(&mut self, t: IdTuple) -> Result<bool> {
        if t.0.len() != self.id_arity || t.1.len() != self.val_arity {
            return Err(Error::usage(format!(
                "tuple of double arity ({},{}) in a ({},{}) relation",
                t.0.len(),
                t.1.len(),
                self.id_arity,
                self.val_arity
            )));
        }
        Ok(self.tuples.insert(t))
    }

    pub fn id_arity(&self) -> usize {
        self.id_arity
    }

    pub fn val_arity(&self) -> usize {
        self.val_arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &IdTuple> + '_ {
        self.tuples.iter()
    }

    pub fn ids(&self) -> BTreeSet<IdToken> {
        self.tuples.iter().flat_map(|t| t.0.iter().copied()).collect()
    }

    /// Data values only; identifiers are not part of the active domain.
    pub fn value_adom(&self) -> BTreeSet<Value> {
        self.tuples.iter().flat_map(|t| t.1.iter().copied()).collect()
    }

    pub fn permute_values(&self, perm: &Permutation) -> IdInstance {
        self.map_parts(|i| i, |v| perm.apply_or_fix(v))
    }

    /// Renames identifiers; ids missing from `rename` are kept.
    pub fn rename_ids(&self, rename: &BTreeMap<IdToken, IdToken>) -> IdInstance {
        self.map_parts(|i| rename.get(&i).copied().unwrap_or(i), |v| v)
    }

    fn map_parts(&self, fi: impl Fn(IdToken) -> IdToken, fv: impl Fn(Value) -> Value) -> IdInstance {
        IdInstance {
            id_arity: self.id_arity,
            val_arity: self.val_arity,
            tuples: self
                .tuples
                .iter()
                .map(|(ids, vals)| (ids.iter().map(|&i| fi(i)).collect(), vals.iter().map(|&v| fv(v)).collect()))
                .collect(),
        }
    }
}

impl fmt::Display for IdInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (ids, vals)) in self.tuples.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            let parts: Vec<String> = ids
                .iter()
                .map(|i| i.to_string())
                .chain(vals.iter().map(|v| v.default_name()))
                .collect();
            write!(f, "({})", parts.join(","))?;
        }
        f.write_str("}")
    }
}

/// Renames identifiers to `#1..#m`, ordering them by the sorted list of
/// value tuples each one carries. Identifiers with equal profiles are
/// interchangeable, so the result depends only on the `=_id` class.
pub fn canonicalize_ids(inst: &IdInstance) -> Result<IdInstance> {
    match inst.id_arity {
        0 => Ok(inst.clone()),
        1 => {
            let mut profiles: BTreeMap<IdToken, Vec<Vec<Value>>> = BTreeMap::new();
            for (ids, vals) in &inst.tuples {
                profiles.entry(ids[0]).or_default().push(vals.clone());
            }
            let mut order: Vec<(Vec<Vec<Value>>, IdToken)> = profiles.into_iter().map(|(i, mut p)| {
                p.sort();
                (p, i)
            }).collect();
            order.sort();
            let rename = order
                .iter()
                .enumerate()
                .map(|(n, (_, i))| (*i, IdToken(n as u32 + 1)))
                .collect();
            Ok(inst.rename_ids(&rename))
        }
        k => Err(Error::usage(format!("canonical forms cover identifier arity 0 and 1, not {k}"))),
    }
}

pub fn eq_up_to_ids(a: &IdInstance, b: &IdInstance) -> Result<bool> {
    if (a.id_arity, a.val_arity) != (b.id_arity, b.val_arity) {
        return Err(Error::usage("eq_up_to_ids: double arities differ"));
    }
    Ok(canonicalize_ids(a)? == canonicalize_ids(b)?)
}

/// The four (1,1) schemas with keys only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KSchema {
    None,
    Id,
    Val,
    Both,
}

impl KSchema {
    pub const ALL: [KSchema; 4] = [KSchema::None, KSchema::Id, KSchema::Val, KSchema::Both];

    pub fn name(self) -> &'static str {
        match self {
            KSchema::None => "K_none",
            KSchema::Id => "K_id",
            KSchema::Val => "K_val",
            KSchema::Both => "K_both",
        }
    }

    fn id_key(self) -> bool {
        matches!(self, KSchema::Id | KSchema::Both)
    }

    fn val_key(self) -> bool {
        matches!(self, KSchema::Val | KSchema::Both)
    }

    pub fn satisfies(self, inst: &IdInstance) -> bool {
        if (inst.id_arity, inst.val_arity) != (1, 1) {
            return false;
        }
        let key_ok = |col: fn(&IdTuple) -> u32| {
            let mut seen = BTreeSet::new();
            inst.tuples.iter().all(|t| seen.insert(col(t)))
        };
        (!self.id_key() || key_ok(|t| t.0[0].0)) && (!self.val_key() || key_ok(|t| t.1[0].0))
    }
}

impl fmt::Display for KSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for KSchema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        KSchema::ALL
            .into_iter()
            .find(|k| k.name().to_ascii_lowercase() == norm || k.name()[2..].to_ascii_lowercase() == norm)
            .ok_or_else(|| Error::usage(format!("unknown identifier schema {s:?}")))
    }
}

/// An `=_id` class, held by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdClass {
    pub canonical: IdInstance,
    pub size_ids: usize,
}

impl IdClass {
    pub fn of(inst: &IdInstance) -> Result<IdClass> {
        Ok(IdClass {
            canonical: canonicalize_ids(inst)?,
            size_ids: inst.ids().len(),
        })
    }
}

/// Value permutations act on classes; equality is equality up to ids.
impl Structure for IdClass {
    fn adom(&self) -> BTreeSet<Value> {
        self.canonical.value_adom()
    }

    fn permute(&self, perm: &Permutation) -> Self {
        IdClass::of(&self.canonical.permute_values(perm)).expect("identifier arity is supported")
    }
}

pub const MAX_CLASS_VALUES: usize = 4;
pub const MAX_CLASS_IDS: usize = 6;

/// One representative per `=_id` class of `schema` with values among the
/// first `n_values` and at most `max_ids` identifiers, in canonical order.
pub fn enumerate_id_classes(schema: KSchema, n_values: usize, max_ids: usize) -> Result<Vec<IdClass>> {
    if n_values > MAX_CLASS_VALUES || max_ids > MAX_CLASS_IDS {
        return Err(Error::resource(
            format!("{schema} classes over {n_values} values and {max_ids} ids"),
            crate::counting::binomial((1 << n_values) - 1 + max_ids, max_ids),
            crate::counting::binomial((1 << MAX_CLASS_VALUES) - 1 + MAX_CLASS_IDS, MAX_CLASS_IDS)
                .try_into()
                .unwrap_or(u64::MAX),
        ));
    }
    // A class is a multiset of nonempty value sets, one per identifier.
    let subsets: Vec<Vec<Value>> = (1u32..1 << n_values)
        .map(|mask| (0..n_values as u32).filter(|i| mask >> i & 1 == 1).map(Value).collect())
        .collect();
    let mut out = BTreeSet::new();
    let mut choice: Vec<usize> = Vec::new();
    collect_multisets(&subsets, max_ids, &mut choice, &mut |choice| {
        let inst = IdInstance::from_tuples(
            1,
            1,
            choice.iter().enumerate().flat_map(|(id, &s)| {
                subsets[s].iter().map(move |&v| (vec![IdToken(id as u32 + 1)], vec![v]))
            }),
        )
        .expect("double arity (1,1)");
        if schema.satisfies(&inst) {
            out.insert(IdClass::of(&inst).expect("arity (1,1)"));
        }
    });
    Ok(out.into_iter().collect())
}

fn collect_multisets(subsets: &[Vec<Value>], max_len: usize, choice: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    visit(choice);
    if choice.len() == max_len {
        return;
    }
    let start = choice.last().copied().unwrap_or(0);
    for s in start..subsets.len() {
        choice.push(s);
        collect_multisets(subsets, max_len, choice, visit);
        choice.pop();
    }
}

/// Value permutations of `adom ∪ fixed`, fixing `fixed`, that map the class
/// to itself.
pub fn class_automorphisms(cls: &IdClass, fixed: &BTreeSet<Value>) -> Result<AutomorphismSet> {
    let carrier: BTreeSet<Value> = cls.canonical.value_adom().union(fixed).copied().collect();
    automorphism_group(cls, &carrier, fixed)
}

/// Number of identifiers each value is attached to.
pub fn attachment_counts(inst: &IdInstance) -> BTreeMap<Value, usize> {
    let mut counts = BTreeMap::new();
    for (_, vals) in &inst.tuples {
        for &v in vals {
            *counts.entry(v).or_default() += 1;
        }
    }
    counts
}

/// Permutations of the class's values that preserve attachment counts: the
/// group generated by cycles of count-equivalent values.
pub fn count_equivalence_group(cls: &IdClass) -> Result<AutomorphismSet> {
    let counts = attachment_counts(&cls.canonical);
    let carrier: Vec<Value> = counts.keys().copied().collect();
    let elements = crate::perm::permutations_fixing(&carrier, &BTreeSet::new())
        .into_iter()
        .filter(|p| counts.iter().all(|(&v, c)| counts[&p.apply_or_fix(v)] == *c))
        .collect();
    AutomorphismSet::new(carrier, BTreeSet::new(), elements)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleCheck {
    Pass { classes: usize, multi_cycle_automorphisms: usize },
    Counterexample { class: IdClass, automorphism: Permutation, cycle: Vec<Value> },
}

impl CycleCheck {
    pub fn passed(&self) -> bool {
        matches!(self, CycleCheck::Pass { .. })
    }
}

/// For every K_id class in bounds: each automorphism made of two or more
/// disjoint cycles has every one of its cycles as an automorphism too.
pub fn kid_cycle_property_check(n_values: usize, max_ids: usize) -> Result<CycleCheck> {
    let classes = enumerate_id_classes(KSchema::Id, n_values, max_ids)?;
    let mut multi = 0;
    for cls in &classes {
        let group = class_automorphisms(cls, &BTreeSet::new())?;
        for p in group.elements() {
            let cycles = p.cycles();
            if cycles.len() < 2 {
                continue;
            }
            multi += 1;
            for c in cycles {
                let single = Permutation::from_cycles(group.carrier().iter().copied(), &[&c])?;
                if !group.contains(&single) {
                    return Ok(CycleCheck::Counterexample {
                        class: cls.clone(),
                        automorphism: p.clone(),
                        cycle: c,
                    });
                }
            }
        }
    }
    Ok(CycleCheck::Pass {
        classes: classes.len(),
        multi_cycle_automorphisms: multi,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundednessRow {
    pub max_ids: usize,
    pub kid: usize,
    pub kval: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundednessReport {
    pub n_values: usize,
    pub rows: Vec<BoundednessRow>,
    /// K_val counts agree for every tested max_ids ≥ n_values.
    pub kval_stable: bool,
    /// K_id counts grow at every step of the tested range.
    pub kid_strictly_increasing: bool,
}

impl BoundednessReport {
    /// Bounded K_val against growing K_id; with no values both are trivially
    /// constant.
    pub fn separates(&self) -> bool {
        self.kval_stable && (self.n_values == 0 || self.kid_strictly_increasing)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("max_ids,K_id,K_val\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.max_ids, r.kid, r.kval));
        }
        out
    }
}

impl fmt::Display for BoundednessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class counts over {} values (finite surrogate for unbounded growth)", self.n_values)?;
        for r in &self.rows {
            writeln!(f, "  max_ids={}  K_id={}  K_val={}", r.max_ids, r.kid, r.kval)?;
        }
        writeln!(f, "  K_val stable: {}", self.kval_stable)?;
        writeln!(f, "  K_id strictly increasing: {}", self.kid_strictly_increasing)
    }
}

pub fn kval_boundedness_report(n_values: usize, max_ids: std::ops::RangeInclusive<usize>) -> Result<BoundednessReport> {
    let mut rows = Vec::new();
    for m in max_ids {
        rows.push(BoundednessRow {
            max_ids: m,
            kid: enumerate_id_classes(KSchema::Id, n_values, m)?.len(),
            kval: enumerate_id_classes(KSchema::Val, n_values, m)?.len(),
        });
    }
    let settled: Vec<usize> = rows.iter().filter(|r| r.max_ids >= n_values).map(|r| r.kval).collect();
    let kval_stable = settled.windows(2).all(|w| w[0] == w[1]);
    let kid_strictly_increasing = rows.windows(2).all(|w| w[0].kid < w[1].kid);
    Ok(BoundednessReport {
        n_values,
        rows,
        kval_stable,
        kid_strictly_increasing,
    })
}

/// K_both to the unary vocabulary: keep the value column.
pub fn kboth_to_v11(inst: &IdInstance) -> Result<IdInstance> {
    if !KSchema::Both.satisfies(inst) {
        return Err(Error::usage("input is not a K_both instance"));
    }
    IdInstance::from_tuples(0, 1, inst.tuples.iter().map(|(_, vals)| (vec![], vals.clone())))
}

/// The unary vocabulary to K_both: one fresh identifier per value, in value
/// order.
pub fn v11_to_kboth(inst: &IdInstance) -> Result<IdInstance> {
    if (inst.id_arity, inst.val_arity) != (0, 1) {
        return Err(Error::usage("input is not a unary value instance"));
    }
    IdInstance::from_tuples(
        1,
        1,
        inst.tuples
            .iter()
            .enumerate()
            .map(|(n, (_, vals))| (vec![IdToken(n as u32 + 1)], vals.clone())),
    )
}

pub type IdTransform = fn(&IdInstance) -> Result<IdInstance>;

/// The two directions between K_both and the unary vocabulary.
pub fn map_kboth_unary() -> (IdTransform, IdTransform) {
    (kboth_to_v11, v11_to_kboth)
}

/// Parses one tuple per line: `id_arity` tokens starting with `#`, then
/// `val_arity` value names.
pub fn parse_id_instance(text: &str, id_arity: usize, val_arity: usize, symbols: &mut Symbols) -> Result<IdInstance> {
    let mut out = IdInstance::empty(id_arity, val_arity);
    for (line, content) in content_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let err = |msg: String| Error::Parse { line, msg };
        if tokens.len() != id_arity + val_arity {
            return Err(err(format!("expected {} tokens, found {}", id_arity + val_arity, tokens.len())));
        }
        let ids = tokens[..id_arity]
            .iter()
            .map(|t| {
                t.strip_prefix('#')
                    .and_then(|d| d.parse::<u32>().ok())
                    .map(IdToken)
                    .ok_or_else(|| err(format!("{t:?} is not an identifier like #1")))
            })
            .collect::<Result<Vec<_>>>()?;
        let vals = tokens[id_arity..]
            .iter()
            .map(|t| symbols.intern(t).map_err(|e| err(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        out.insert((ids, vals))?;
    }
    Ok(out)
}

pub fn write_id_instance(inst: &IdInstance, symbols: &Symbols) -> String {
    let mut out = String::new();
    for (ids, vals) in &inst.tuples {
        let parts: Vec<String> = ids
            .iter()
            .map(|i| i.to_string())
            .chain(vals.iter().map(|&v| symbols.name(v)))
            .collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: u32 = 0;
    const B: u32 = 1;
    const C: u32 = 2;
    const D: u32 = 3;

    fn v(i: u32) -> Value {
        Value(i)
    }

    #[test]
    fn canonical_examples() {
        let c = canonicalize_ids(&IdInstance::pairs(&[(7, A), (3, B)])).unwrap();
        assert_eq!(c, IdInstance::pairs(&[(1, A), (2, B)]));
        assert_eq!(canonicalize_ids(&IdInstance::empty(1, 1)).unwrap(), IdInstance::empty(1, 1));
        let c = canonicalize_ids(&IdInstance::pairs(&[(2, A), (1, A)])).unwrap();
        assert_eq!(c, IdInstance::pairs(&[(1, A), (2, A)]));
    }

    #[test]
    fn naive_form_trap() {
        // Equal up to ids, but a first-occurrence renaming would tell them apart.
        let x = IdInstance::pairs(&[(1, A), (2, A), (1, B)]);
        let y = IdInstance::pairs(&[(2, A), (1, A), (2, B)]);
        assert!(eq_up_to_ids(&x, &y).unwrap());
    }

    #[test]
    fn equality_examples() {
        let e = |a: &[(u32, u32)], b: &[(u32, u32)]| eq_up_to_ids(&IdInstance::pairs(a), &IdInstance::pairs(b)).unwrap();
        assert!(e(&[(1, A)], &[(9, A)]));
        assert!(!e(&[(1, A)], &[(1, B)]));
        assert!(e(&[(1, A), (1, B)], &[(2, A), (2, B)]));
        assert!(eq_up_to_ids(&IdInstance::pairs(&[]), &IdInstance::unary(&[])).is_err());
    }

    #[test]
    fn class_counts() {
        assert_eq!(enumerate_id_classes(KSchema::Val, 1, 3).unwrap().len(), 2);
        assert_eq!(enumerate_id_classes(KSchema::Id, 1, 3).unwrap().len(), 4);
        for k in KSchema::ALL {
            assert_eq!(enumerate_id_classes(k, 0, 3).unwrap().len(), 1);
        }
        assert!(matches!(
            enumerate_id_classes(KSchema::None, 5, 2),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn four_tuple_instance() {
        let cls = IdClass::of(&IdInstance::pairs(&[(1, A), (1, B), (2, C), (2, D)])).unwrap();
        let g = class_automorphisms(&cls, &BTreeSet::new()).unwrap();
        let carrier = [v(A), v(B), v(C), v(D)];
        let p = |cs: &[&[Value]]| Permutation::from_cycles(carrier, cs).unwrap();
        assert!(g.contains(&p(&[&[v(A), v(C)], &[v(B), v(D)]])));
        assert!(!g.contains(&p(&[&[v(A), v(C)]])));
        assert!(!g.contains(&p(&[&[v(B), v(D)]])));
        assert_eq!(g.order(), 8);
    }

    #[test]
    fn small_class_groups() {
        let g = class_automorphisms(&IdClass::of(&IdInstance::empty(1, 1)).unwrap(), &BTreeSet::new()).unwrap();
        assert_eq!(g.order(), 1);
        let cls = IdClass::of(&IdInstance::pairs(&[(1, A), (2, B)])).unwrap();
        let g = class_automorphisms(&cls, &BTreeSet::new()).unwrap();
        assert!(g.contains(&Permutation::from_cycles([v(A), v(B)], &[&[v(A), v(B)]]).unwrap()));
    }

    #[test]
    fn kboth_round_trip() {
        let (fwd, back) = map_kboth_unary();
        let i = IdInstance::pairs(&[(1, A), (2, B)]);
        assert_eq!(fwd(&i).unwrap(), IdInstance::unary(&[A, B]));
        assert!(eq_up_to_ids(&back(&fwd(&i).unwrap()).unwrap(), &i).unwrap());
        let i = IdInstance::pairs(&[(5, A)]);
        assert_eq!(back(&fwd(&i).unwrap()).unwrap(), IdInstance::pairs(&[(1, A)]));
        assert!(fwd(&IdInstance::empty(1, 1)).unwrap().is_empty());
        assert!(back(&IdInstance::empty(0, 1)).unwrap().is_empty());
        assert!(fwd(&IdInstance::pairs(&[(1, A), (1, B)])).is_err());
    }

    #[test]
    fn id_text_format() {
        let mut sy = Symbols::new();
        let i = parse_id_instance("-- K_val\n#1 a\n#1 b\n#2 c\n", 1, 1, &mut sy).unwrap();
        assert_eq!(i.len(), 3);
        assert_eq!(write_id_instance(&i, &sy), "#1 a\n#1 b\n#2 c\n");
        assert!(parse_id_instance("1 a\n", 1, 1, &mut sy).is_err());
        assert!(parse_id_instance("#1 #2\n", 1, 1, &mut sy).is_err());
        assert!(parse_id_instance("#1\n", 1, 1, &mut sy).is_err());
    }

    #[test]
    fn kschema_names() {
        assert_eq!("K_val".parse::<KSchema>().unwrap(), KSchema::Val);
        assert_eq!("both".parse::<KSchema>().unwrap(), KSchema::Both);
        assert!("K_x".parse::<KSchema>().is_err());
    }
}
