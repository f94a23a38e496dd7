//! Catalog equivalences, strong inclusion, and Hasse diagrams assembled from
//! checkable evidence.

pub mod catalog;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use crate::counting::{compare_growth, formula_count, latin_crossover, FormulaLabel, LATIN_CROSSOVER};
use crate::enumeration::{DomainSpec, Enumerator};
use crate::equivariance::obstruction_report;
use crate::error::{Error, Result};
use crate::mappings::{map_close_sinks, map_outdegle1_to_ssfree, map_swap_columns, map_t1_to_t6, verify_mapping, MappingEntry};
use crate::relmodel::{satisfies_schema, GraphClassLabel, Instance, SchemaDesc};

pub use catalog::{binary_catalog, class_schema, schema, ternary_catalog, CatalogEntry, EquivalenceKind};

/// Horizon for the count comparisons behind strictness and incomparability.
pub const GROWTH_HORIZON: usize = 12;

/// Expected covers of the binary diagram, lower class first.
pub const BINARY_COVERS: [(&str, &str); 9] = [
    ("SYMM_DEG1", "SYMM"),
    ("SYMM_DEG1", "CYCLES"),
    ("CYCLES", "PATHS_CYCLES"),
    ("PATHS_CYCLES", "OUTDEG1"),
    ("OUTDEG1", "OUTDEG_LE1"),
    ("OUTDEG_LE1", "SOURCE_SINK_FREE"),
    ("SYMM", "SOURCE_SINK_FREE"),
    ("SOURCE_SINK_FREE", "SOURCE_FREE"),
    ("SOURCE_FREE", "DIGRAPH"),
];

/// Expected ternary chain, least capacity first.
pub const TERNARY_CHAIN: [&str; 8] = ["T3", "T2", "T7", "T1", "T6", "T5", "T4", "T0"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InclusionVerdict {
    SubsetStrict,
    Equal,
    /// An instance of the lower schema that violates the upper one.
    NotSubset { witness: Instance },
}

impl InclusionVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            InclusionVerdict::SubsetStrict => "SUBSET_STRICT",
            InclusionVerdict::Equal => "EQUAL",
            InclusionVerdict::NotSubset { .. } => "NOT_SUBSET",
        }
    }
}

/// Compares the instance sets of two schemas of equal arity for every n in
/// `ns`, by lazy witness searches in both directions.
pub fn strong_inclusion(
    lower: &SchemaDesc,
    upper: &SchemaDesc,
    ns: std::ops::RangeInclusive<usize>,
    en: &Enumerator,
) -> Result<Vec<(usize, InclusionVerdict)>> {
    if lower.arity != upper.arity {
        return Err(Error::usage(format!(
            "strong_inclusion: {} has arity {}, {} has arity {}",
            lower.name, lower.arity, upper.name, upper.arity
        )));
    }
    let mut out = Vec::new();
    for n in ns {
        let dom = DomainSpec::new(n);
        let escape = en.find_instance(lower, &dom, |i| !satisfies_schema(i, upper).unwrap_or(false))?;
        let verdict = match escape {
            Some(witness) => InclusionVerdict::NotSubset { witness },
            None => match en.find_instance(upper, &dom, |i| !satisfies_schema(i, lower).unwrap_or(false))? {
                Some(_) => InclusionVerdict::SubsetStrict,
                None => InclusionVerdict::Equal,
            },
        };
        out.push((n, verdict));
    }
    Ok(out)
}

/// One checked row of the table equivalences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceRow {
    pub left: String,
    pub right: String,
    pub kind: EquivalenceKind,
    pub n: usize,
    pub left_count: usize,
    pub right_count: usize,
    /// Empty on success, otherwise a description of the difference.
    pub diff: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub n_max: usize,
    pub rows: Vec<EquivalenceRow>,
}

impl EquivalenceReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.diff.is_none())
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "equivalences verified up to n = {}", self.n_max)?;
        for r in &self.rows {
            let rel = match r.kind {
                EquivalenceKind::Logical => "==",
                EquivalenceKind::Generic => "~swap",
            };
            write!(f, "  {:<4} {:<6} {:<4} n={} |{}|={} |{}|={}", r.left, rel, r.right, r.n, r.left, r.left_count, r.right, r.right_count)?;
            match &r.diff {
                None => writeln!(f, "  ok")?,
                Some(d) => writeln!(f, "  FAIL: {d}")?,
            }
        }
        Ok(())
    }
}

fn first_missing<'a>(a: &'a [Instance], b: &[Instance]) -> Option<&'a Instance> {
    a.iter().find(|i| b.binary_search(i).is_err())
}

fn check_logical(left: &[Instance], right: &[Instance]) -> Option<String> {
    if let Some(i) = first_missing(left, right) {
        return Some(format!("{i} only on the left"));
    }
    first_missing(right, left).map(|i| format!("{i} only on the right"))
}

fn check_swap(map: &MappingEntry, left: &[Instance], right: &[Instance]) -> Result<Option<String>> {
    let mut images = Vec::with_capacity(left.len());
    for i in left {
        let j = map.forward(i)?;
        if right.binary_search(&j).is_err() {
            return Ok(Some(format!("image of {i} is not on the right")));
        }
        images.push(j);
    }
    images.sort();
    images.dedup();
    if images.len() != left.len() {
        return Ok(Some("swap is not injective".into()));
    }
    if images.len() != right.len() {
        return Ok(Some("swap is not onto the right-hand side".into()));
    }
    Ok(None)
}

/// Checks every declared equivalence of the binary catalog for n ≤ n_max:
/// equal instance sets for logical pairs, a column-swap bijection for
/// generic pairs.
pub fn verify_table1_equivalences(n_max: usize, en: &Enumerator) -> Result<EquivalenceReport> {
    if n_max > 4 {
        return Err(Error::usage("verify_table1_equivalences supports n_max <= 4"));
    }
    let mut rows = Vec::new();
    for e in binary_catalog() {
        let Some((other, kind)) = e.declared_equivalent_to else { continue };
        let right_schema = schema(other).expect("declared partner is in the catalog");
        for n in 0..=n_max {
            let dom = DomainSpec::new(n);
            let left = en.enumerate(&e.schema, &dom)?;
            let right = en.enumerate(&right_schema, &dom)?;
            let diff = match kind {
                EquivalenceKind::Logical => check_logical(&left, &right),
                EquivalenceKind::Generic => check_swap(&map_swap_columns(&e.schema, &right_schema)?, &left, &right)?,
            };
            rows.push(EquivalenceRow {
                left: e.schema.name.clone(),
                right: other.to_string(),
                kind,
                n,
                left_count: left.len(),
                right_count: right.len(),
                diff,
            });
        }
    }
    Ok(EquivalenceReport { n_max, rows })
}

/// Evidence attached to an ordered pair of classes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FactKind {
    /// Strict inclusion of instance sets at the verification size, with no
    /// violation below it.
    StrongInclusion,
    /// Inclusion with no violation up to the verification size, strictness
    /// not yet visible there.
    InclusionDeferred,
    /// A named mapping checked injective, generic and target-valid.
    Mapping(String),
    /// The upper count exceeds the lower one for every tested n ≥ c.
    CountStrict { minimal_c: usize },
    /// The counts cross in both directions, so neither side injects into the
    /// other on every domain.
    NoAbsolute { lower_wins_at: usize, upper_wins_at: usize },
    /// No target instance has the automorphism group of the certificate.
    Obstruction { certificate: String },
}

impl FactKind {
    pub fn is_order_edge(&self) -> bool {
        matches!(self, FactKind::StrongInclusion | FactKind::InclusionDeferred | FactKind::Mapping(_))
    }

    pub fn short(&self) -> String {
        match self {
            FactKind::StrongInclusion => "STRONG_INCLUSION".into(),
            FactKind::InclusionDeferred => "INCLUSION(strictness deferred)".into(),
            FactKind::Mapping(m) => format!("MAPPING({m})"),
            FactKind::CountStrict { minimal_c } => format!("COUNT_STRICT({minimal_c})"),
            FactKind::NoAbsolute { lower_wins_at, upper_wins_at } => {
                format!("NO_ABSOLUTE(n={lower_wins_at} vs n={upper_wins_at})")
            }
            FactKind::Obstruction { certificate } => format!("OBSTRUCTION({certificate})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DominanceFact {
    pub lower: String,
    pub upper: String,
    pub kind: FactKind,
    pub verified_up_to_n: usize,
}

impl fmt::Display for DominanceFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.kind.is_order_edge() || matches!(self.kind, FactKind::CountStrict { .. }) {
            "<="
        } else {
            "incomparable"
        };
        write!(
            f,
            "{} {} {}: {} (verified up to n={})",
            self.lower,
            rel,
            self.upper,
            self.kind.short(),
            self.verified_up_to_n
        )
    }
}

/// A covering graph with the evidence behind it.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HasseGraph {
    pub nodes: Vec<String>,
    /// Covering pairs (lower, upper), in node order.
    pub edges: Vec<(String, String)>,
    /// Evidence per covering edge.
    pub annotations: BTreeMap<(String, String), Vec<FactKind>>,
    /// Every fact gathered, including the ones removed by the reduction.
    pub facts: Vec<DominanceFact>,
}

impl HasseGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, lower: &str, upper: &str) -> bool {
        self.edges.iter().any(|(a, b)| a == lower && b == upper)
    }

    /// Structured text listing every fact and the covering edges.
    pub fn report(&self) -> String {
        let mut out = format!("nodes ({}): {}\n", self.nodes.len(), self.nodes.join(" "));
        out.push_str(&format!("covering edges ({}):\n", self.edges.len()));
        for e in &self.edges {
            let ev: Vec<String> = self.annotations.get(e).into_iter().flatten().map(|k| k.short()).collect();
            out.push_str(&format!("  {} -> {}  [{}]\n", e.0, e.1, ev.join(", ")));
        }
        out.push_str(&format!("facts ({}):\n", self.facts.len()));
        for fact in &self.facts {
            out.push_str(&format!("  {fact}\n"));
        }
        out
    }
}

/// Deterministic DOT rendering, edges pointing from lower to upper.
pub fn export_dot(h: &HasseGraph) -> String {
    let mut out = String::from("digraph hasse {\n");
    if !h.nodes.is_empty() {
        out.push_str("  rankdir=BT;\n  node [shape=box];\n");
    }
    for n in &h.nodes {
        out.push_str(&format!("  \"{n}\";\n"));
    }
    for e in &h.edges {
        let label: Vec<String> = h.annotations.get(e).into_iter().flatten().map(|k| k.short()).collect();
        out.push_str(&format!("  \"{}\" -> \"{}\" [label=\"{}\"];\n", e.0, e.1, label.join("\\n")));
    }
    out.push_str("}\n");
    out
}

/// Reflexive-transitive closure over node indices.
fn closure(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                let via = reach[k].clone();
                for (r, v) in reach[i].iter_mut().zip(via) {
                    *r |= v;
                }
            }
        }
    }
    reach
}

/// Builds the covering graph from order facts; extra facts are attached to
/// the covering edges they concern.
fn assemble(nodes: Vec<String>, facts: Vec<DominanceFact>) -> Result<(HasseGraph, Vec<Vec<bool>>)> {
    let index: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let order: Vec<(usize, usize)> = facts
        .iter()
        .filter(|f| f.kind.is_order_edge())
        .map(|f| (index[f.lower.as_str()], index[f.upper.as_str()]))
        .collect();
    let n = nodes.len();
    let reach = closure(n, &order);
    for i in 0..n {
        for j in i + 1..n {
            if reach[i][j] && reach[j][i] {
                return Err(Error::Consistency(format!(
                    "{} and {} are each below the other",
                    nodes[i], nodes[j]
                )));
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && reach[i][j] && !(0..n).any(|k| k != i && k != j && reach[i][k] && reach[k][j]) {
                edges.push((nodes[i].clone(), nodes[j].clone()));
            }
        }
    }
    let mut annotations: BTreeMap<(String, String), Vec<FactKind>> = BTreeMap::new();
    for e in &edges {
        let mut kinds: Vec<FactKind> = facts
            .iter()
            .filter(|f| f.lower == e.0 && f.upper == e.1)
            .map(|f| f.kind.clone())
            .collect();
        kinds.sort();
        annotations.insert(e.clone(), kinds);
    }
    let mut facts = facts;
    facts.sort();
    Ok((
        HasseGraph {
            nodes,
            edges,
            annotations,
            facts,
        },
        reach,
    ))
}

/// Accepts `lower ≤ upper` when no violation shows up for n ≤ n_verify.
fn inclusion_fact(
    lower: &SchemaDesc,
    upper: &SchemaDesc,
    lower_name: &str,
    upper_name: &str,
    n_verify: usize,
    require_strict: bool,
    en: &Enumerator,
) -> Result<Option<DominanceFact>> {
    let rows = strong_inclusion(lower, upper, 0..=n_verify, en)?;
    if rows.iter().any(|(_, v)| matches!(v, InclusionVerdict::NotSubset { .. })) {
        return Ok(None);
    }
    let strict = matches!(rows.last(), Some((_, InclusionVerdict::SubsetStrict)));
    let kind = match (strict, require_strict) {
        (true, _) => FactKind::StrongInclusion,
        (false, true) => return Ok(None),
        (false, false) => FactKind::InclusionDeferred,
    };
    Ok(Some(DominanceFact {
        lower: lower_name.to_string(),
        upper: upper_name.to_string(),
        kind,
        verified_up_to_n: n_verify,
    }))
}

fn mapping_fact(map: &MappingEntry, lower: &str, upper: &str, n_verify: usize, en: &Enumerator) -> Result<Option<DominanceFact>> {
    for n in 0..=n_verify {
        if !verify_mapping(map, n, en)?.all_passed() {
            return Ok(None);
        }
    }
    Ok(Some(DominanceFact {
        lower: lower.to_string(),
        upper: upper.to_string(),
        kind: FactKind::Mapping(map.name.to_string()),
        verified_up_to_n: n_verify,
    }))
}

/// The 3-cycle whose automorphism group no symmetric graph shares.
pub fn three_cycle() -> Instance {
    Instance::pairs(&[(0, 1), (1, 2), (2, 0)])
}

/// Dominance diagram over the given binary classes (all nine when `None`).
pub fn build_binary_hasse(n_verify: usize, subset: Option<&[GraphClassLabel]>, en: &Enumerator) -> Result<HasseGraph> {
    use GraphClassLabel::*;
    let labels: Vec<GraphClassLabel> = GraphClassLabel::ALL
        .into_iter()
        .filter(|l| subset.is_none_or(|s| s.contains(l)))
        .collect();
    let names: Vec<String> = labels.iter().map(|l| l.name().to_string()).collect();
    let mut facts = Vec::new();

    for &a in &labels {
        for &b in &labels {
            if a != b {
                if let Some(f) = inclusion_fact(&class_schema(a), &class_schema(b), a.name(), b.name(), n_verify, true, en)? {
                    facts.push(f);
                }
            }
        }
    }
    let has = |l: GraphClassLabel| labels.contains(&l);
    if has(OUTDEG_LE1) && has(SOURCE_SINK_FREE) {
        facts.extend(mapping_fact(&map_outdegle1_to_ssfree(), OUTDEG_LE1.name(), SOURCE_SINK_FREE.name(), n_verify, en)?);
    }
    if has(PATHS_CYCLES) && has(OUTDEG1) {
        facts.extend(mapping_fact(&map_close_sinks(), PATHS_CYCLES.name(), OUTDEG1.name(), n_verify, en)?);
    }

    let (_, reach) = assemble(names.clone(), facts.clone())?;
    let n = labels.len();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (FormulaLabel::from(labels[i]), FormulaLabel::from(labels[j]));
            let g = compare_growth(b, a, GROWTH_HORIZON);
            if reach[i][j] {
                // An injection forces F_a <= F_b everywhere.
                if let Some(r) = g.rows.iter().find(|r| r.fa < r.fb) {
                    return Err(Error::Consistency(format!(
                        "{} <= {} is asserted but the counts disagree at n={}",
                        labels[i], labels[j], r.n
                    )));
                }
                if let Some(c) = g.minimal_c {
                    facts.push(DominanceFact {
                        lower: names[i].clone(),
                        upper: names[j].clone(),
                        kind: FactKind::CountStrict { minimal_c: c },
                        verified_up_to_n: GROWTH_HORIZON,
                    });
                }
            } else if i < j && !reach[j][i] {
                let lower_wins = g.rows.iter().find(|r| r.fa < r.fb).map(|r| r.n);
                let upper_wins = g.rows.iter().find(|r| r.fa > r.fb).map(|r| r.n);
                if let (Some(lw), Some(uw)) = (lower_wins, upper_wins) {
                    facts.push(DominanceFact {
                        lower: names[i].clone(),
                        upper: names[j].clone(),
                        kind: FactKind::NoAbsolute {
                            lower_wins_at: lw,
                            upper_wins_at: uw,
                        },
                        verified_up_to_n: GROWTH_HORIZON,
                    });
                }
            }
        }
    }
    if has(CYCLES) && has(SYMM) {
        let report = obstruction_report(&three_cycle(), &Default::default(), &class_schema(SYMM))?;
        if report.is_obstruction() {
            facts.push(DominanceFact {
                lower: CYCLES.name().into(),
                upper: SYMM.name().into(),
                kind: FactKind::Obstruction {
                    certificate: format!(
                        "3-cycle, |Aut|={}, {} symmetric graphs checked",
                        report.group.order(),
                        report.examined
                    ),
                },
                verified_up_to_n: 3,
            });
        } else {
            return Err(Error::Consistency("the 3-cycle has a symmetric graph with the same automorphisms".into()));
        }
    }
    Ok(assemble(names, facts)?.0)
}

/// The ternary key-only schemas with the chain pairs checked by enumeration
/// and the T1 → T6 step carried by the encoding `f`.
pub fn build_ternary_chain(n_verify: usize, en: &Enumerator) -> Result<HasseGraph> {
    if n_verify > 3 {
        return Err(Error::usage("build_ternary_chain supports n_verify <= 3"));
    }
    let names: Vec<String> = ternary_catalog().into_iter().map(|e| e.schema.name).collect();
    let pairs = [("T3", "T2"), ("T2", "T7"), ("T7", "T1"), ("T6", "T5"), ("T5", "T4"), ("T4", "T0")];
    let mut facts = Vec::new();
    for (lo, up) in pairs {
        match inclusion_fact(&schema(lo).unwrap(), &schema(up).unwrap(), lo, up, n_verify, false, en)? {
            Some(f) => facts.push(f),
            None => return Err(Error::Consistency(format!("{lo} is not included in {up}"))),
        }
    }
    match mapping_fact(&map_t1_to_t6(), "T1", "T6", n_verify, en)? {
        Some(f) => facts.push(f),
        None => return Err(Error::Consistency("the encoding f failed its checks".into())),
    }
    if latin_crossover(16) == Some(LATIN_CROSSOVER) {
        facts.push(DominanceFact {
            lower: "T1".into(),
            upper: "T6".into(),
            kind: FactKind::CountStrict {
                minimal_c: LATIN_CROSSOVER,
            },
            verified_up_to_n: 16,
        });
    }
    Ok(assemble(names, facts)?.0)
}

/// Instance counts of every ternary catalog schema at size n.
pub fn ternary_counts(n: usize, en: &Enumerator) -> Result<Vec<(String, BigUint)>> {
    ternary_catalog()
        .into_iter()
        .map(|e| Ok((e.schema.name.clone(), en.count(&e.schema, &DomainSpec::new(n))?)))
        .collect()
}

/// Formula value for a class, as used by the strictness evidence.
pub fn class_count(label: GraphClassLabel, n: usize) -> BigUint {
    formula_count(label.into(), n)
}
