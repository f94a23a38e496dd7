//! Catalog of generic schema mappings with their exact inverses.

mod tagging;
mod ternary;

use std::collections::BTreeSet;

use crate::enumeration::Enumerator;
use crate::equivariance::{
    check_genericity_over, check_injectivity_over, GenericityVerdict, InjectivityVerdict, Transform,
};
use crate::error::{Error, Result};
use crate::lattice::catalog::schema;
use crate::relmodel::{satisfies_schema, Instance, SchemaDesc, Value};

pub use tagging::{map_unary_tagging, TaggingMap, UnaryFamily};
pub use ternary::{f0, f0_case, F0Case};

type ForwardFn = fn(&Instance) -> Result<Instance>;
type InverseFn = fn(&Instance) -> Result<Instance>;

/// A named total mapping between two single-relation schemas.
#[derive(Clone, Debug)]
pub struct MappingEntry {
    pub name: &'static str,
    pub source: SchemaDesc,
    pub target: SchemaDesc,
    pub constants: BTreeSet<Value>,
    /// False for the deliberately non-generic entries kept for negative tests.
    pub expected_generic: bool,
    forward: ForwardFn,
    inverse: Option<InverseFn>,
    domain: fn(usize) -> Vec<Value>,
}

fn standard_domain(n: usize) -> Vec<Value> {
    (0..n as u32).map(Value).collect()
}

fn natural_domain(n: usize) -> Vec<Value> {
    (1..=n as u32).map(Value).collect()
}

fn cat(name: &str) -> SchemaDesc {
    schema(name).expect("catalog schema")
}

impl MappingEntry {
    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    /// The n-element source domain the checkers quantify over.
    pub fn domain_values(&self, n: usize) -> Vec<Value> {
        (self.domain)(n)
    }

    /// Raw forward evaluation, without constraint checks.
    pub fn forward(&self, inst: &Instance) -> Result<Instance> {
        (self.forward)(inst)
    }
}

impl Transform for MappingEntry {
    type Source = Instance;
    type Target = Instance;

    fn constants(&self) -> BTreeSet<Value> {
        self.constants.clone()
    }

    fn forward(&self, source: &Instance) -> Result<Instance> {
        (self.forward)(source)
    }
}

/// Forward image of a source instance, validated against both schemas.
pub fn apply_mapping(map: &MappingEntry, inst: &Instance) -> Result<Instance> {
    if !satisfies_schema(inst, &map.source)? {
        return Err(Error::usage(format!("{}: input is not an instance of {}", map.name, map.source.name)));
    }
    let out = (map.forward)(inst)?;
    if !satisfies_schema(&out, &map.target)? {
        return Err(Error::Consistency(format!(
            "{}: image {out} violates {}",
            map.name, map.target.name
        )));
    }
    Ok(out)
}

/// Recovers the preimage of `image`; fails with a recovery error when
/// `image` is not in the forward image.
pub fn invert(map: &MappingEntry, image: &Instance) -> Result<Instance> {
    let inverse = map
        .inverse
        .ok_or_else(|| Error::usage(format!("{} has no inverse", map.name)))?;
    let not_image = || Error::Recovery(format!("{}: {image} is not in the image", map.name));
    let pre = inverse(image).map_err(|_| not_image())?;
    if !satisfies_schema(&pre, &map.source)? || (map.forward)(&pre)? != *image {
        return Err(not_image());
    }
    Ok(pre)
}

fn transpose(inst: &Instance) -> Result<Instance> {
    Ok(inst.transpose())
}

/// Column swap between a swap-equivalent pair, such as S5 and S10.
pub fn map_swap_columns(source: &SchemaDesc, target: &SchemaDesc) -> Result<MappingEntry> {
    if source.arity != 2 || !source.transposed("").same_constraints(target) {
        return Err(Error::usage(format!(
            "{} and {} are not related by a column swap",
            source.name, target.name
        )));
    }
    Ok(MappingEntry {
        name: "swap",
        source: source.clone(),
        target: target.clone(),
        constants: BTreeSet::new(),
        expected_generic: true,
        forward: transpose,
        inverse: Some(transpose),
        domain: standard_domain,
    })
}

fn sources_and_sinks(inst: &Instance) -> (BTreeSet<Value>, BTreeSet<Value>) {
    let first: BTreeSet<Value> = inst.tuples().map(|t| t[0]).collect();
    let second: BTreeSet<Value> = inst.tuples().map(|t| t[1]).collect();
    let sources = first.difference(&second).copied().collect();
    let sinks = second.difference(&first).copied().collect();
    (sources, sinks)
}

fn m_forward(inst: &Instance) -> Result<Instance> {
    let (sources, sinks) = sources_and_sinks(inst);
    let mut out = inst.clone();
    for &s in &sources {
        out.insert(vec![s, s])?;
    }
    for &t in &sinks {
        for &s in &sources {
            out.insert(vec![t, s])?;
        }
    }
    Ok(out)
}

fn m_inverse(image: &Instance) -> Result<Instance> {
    // Original sources: looped nodes with a second outgoing edge.
    let sources: BTreeSet<Value> = image
        .tuples()
        .filter(|t| t[0] == t[1])
        .map(|t| t[0])
        .filter(|&x| image.tuples().any(|t| t[0] == x && t[1] != x))
        .collect();
    let unlooped: Vec<Vec<Value>> = image
        .tuples()
        .filter(|t| !(t[0] == t[1] && sources.contains(&t[0])))
        .cloned()
        .collect();
    // Original sinks: whatever still points at a source.
    let sinks: BTreeSet<Value> = unlooped
        .iter()
        .filter(|t| sources.contains(&t[1]))
        .map(|t| t[0])
        .collect();
    Instance::from_tuples(
        2,
        unlooped
            .into_iter()
            .filter(|t| !(sinks.contains(&t[0]) && sources.contains(&t[1]))),
    )
}

/// OUTDEG_LE1 into SOURCE_SINK_FREE: loop every source, and point every sink
/// at every source.
pub fn map_outdegle1_to_ssfree() -> MappingEntry {
    MappingEntry {
        name: "m",
        source: cat("S5"),
        target: cat("S3"),
        constants: BTreeSet::new(),
        expected_generic: true,
        forward: m_forward,
        inverse: Some(m_inverse),
        domain: standard_domain,
    }
}

fn close_sinks_forward(inst: &Instance) -> Result<Instance> {
    let (_, sinks) = sources_and_sinks(inst);
    let mut out = inst.clone();
    for &t in &sinks {
        out.insert(vec![t, t])?;
    }
    Ok(out)
}

fn close_sinks_inverse(image: &Instance) -> Result<Instance> {
    let entered_from_elsewhere =
        |x: Value| image.tuples().any(|t| t[1] == x && t[0] != x);
    Instance::from_tuples(
        2,
        image
            .tuples()
            .filter(|t| !(t[0] == t[1] && entered_from_elsewhere(t[0])))
            .cloned(),
    )
}

/// PATHS_CYCLES into OUTDEG1: add a self-loop at every sink.
pub fn map_close_sinks() -> MappingEntry {
    MappingEntry {
        name: "close_sinks",
        source: cat("S15"),
        target: cat("S7"),
        constants: BTreeSet::new(),
        expected_generic: true,
        forward: close_sinks_forward,
        inverse: Some(close_sinks_inverse),
        domain: standard_domain,
    }
}

/// T1 into T6, tuple by tuple.
pub fn map_t1_to_t6() -> MappingEntry {
    MappingEntry {
        name: "f",
        source: cat("T1"),
        target: cat("T6"),
        constants: BTreeSet::new(),
        expected_generic: true,
        forward: ternary::forward,
        inverse: Some(ternary::inverse),
        domain: standard_domain,
    }
}

fn prime_forward(inst: &Instance) -> Result<Instance> {
    let enc = |t: &Vec<Value>| -> Result<Vec<Value>> {
        2u32.checked_pow(t[0].0)
            .and_then(|a| 3u32.checked_pow(t[1].0).and_then(|b| a.checked_mul(b)))
            .filter(|&v| !Value(v).is_constant())
            .map(|v| vec![Value(v)])
            .ok_or_else(|| Error::usage("prime_encode: value too large to encode"))
    };
    Instance::from_tuples(1, inst.tuples().map(enc).collect::<Result<Vec<_>>>()?)
}

/// Pairs of naturals to the unary relation `{2^x 3^y}`. Injective but not
/// generic; values are read as the naturals they index.
pub fn map_prime_encode() -> MappingEntry {
    MappingEntry {
        name: "prime_encode",
        source: cat("S0"),
        target: SchemaDesc::new("V11", 1),
        constants: BTreeSet::new(),
        expected_generic: false,
        forward: prime_forward,
        inverse: None,
        domain: natural_domain,
    }
}

fn identity(inst: &Instance) -> Result<Instance> {
    Ok(inst.clone())
}

pub fn map_identity_s0() -> MappingEntry {
    MappingEntry {
        name: "identity_s0",
        source: cat("S0"),
        target: cat("S0"),
        constants: BTreeSet::new(),
        expected_generic: true,
        forward: identity,
        inverse: Some(identity),
        domain: standard_domain,
    }
}

fn swap_entry(name: &'static str, a: &str, b: &str) -> MappingEntry {
    let mut e = map_swap_columns(&cat(a), &cat(b)).expect("catalog swap pair");
    e.name = name;
    e
}

/// Every named mapping, in a fixed order.
pub fn catalog() -> Vec<MappingEntry> {
    vec![
        map_outdegle1_to_ssfree(),
        map_close_sinks(),
        map_t1_to_t6(),
        swap_entry("swap_s2_s1", "S2", "S1"),
        swap_entry("swap_s10_s5", "S10", "S5"),
        swap_entry("swap_s11_s7", "S11", "S7"),
        map_identity_s0(),
        map_prime_encode(),
    ]
}

pub fn mapping_by_name(name: &str) -> Result<MappingEntry> {
    catalog()
        .into_iter()
        .find(|m| m.name.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::usage(format!("unknown mapping {name:?}")))
}

/// Outcome of checking one mapping exhaustively on one domain size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingCheck {
    pub name: &'static str,
    pub n: usize,
    pub sources: usize,
    /// First source whose image violates the target schema.
    pub target_violation: Option<Instance>,
    pub genericity: GenericityVerdict<Instance>,
    pub injectivity: InjectivityVerdict<Instance>,
    /// First source that does not survive `invert ∘ apply`; absent when the
    /// mapping has no inverse.
    pub round_trip_failure: Option<Instance>,
}

impl MappingCheck {
    /// Whether every check came out as the catalog declares.
    pub fn as_expected(&self, expected_generic: bool) -> bool {
        self.target_violation.is_none()
            && self.genericity.passed() == expected_generic
            && self.injectivity.passed()
            && self.round_trip_failure.is_none()
    }

    pub fn all_passed(&self) -> bool {
        self.as_expected(true)
    }
}

/// Target validity, genericity, injectivity and round trip on every source
/// instance over an n-value domain.
pub fn verify_mapping(map: &MappingEntry, n: usize, en: &Enumerator) -> Result<MappingCheck> {
    let sources = en.enumerate_over(&map.source, &map.domain_values(n))?;
    let images = en.exec.map(&sources, |i| (map.forward)(i));
    let mut target_violation = None;
    let mut round_trip_failure = None;
    for (i, j) in sources.iter().zip(images) {
        let j = j?;
        if target_violation.is_none() && !satisfies_schema(&j, &map.target)? {
            target_violation = Some(i.clone());
        }
        if map.inverse.is_some() && round_trip_failure.is_none() && invert(map, &j).ok().as_ref() != Some(i) {
            round_trip_failure = Some(i.clone());
        }
    }
    let values = map.domain_values(n);
    Ok(MappingCheck {
        name: map.name,
        n,
        sources: sources.len(),
        target_violation,
        genericity: check_genericity_over(map, &sources, &values, en.exec)?,
        injectivity: check_injectivity_over(map, &sources, en.exec)?,
        round_trip_failure,
    })
}
