//! The fixed schema catalogs: binary S0..S19, ternary T0..T7, and the
//! identifier schemas.

use std::fmt;

use crate::relmodel::{GraphClassLabel, SchemaDesc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquivalenceKind {
    /// Same instance set on every domain.
    Logical,
    /// Related by swapping the two columns.
    Generic,
}

impl fmt::Display for EquivalenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivalenceKind::Logical => "logical",
            EquivalenceKind::Generic => "generic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub schema: SchemaDesc,
    pub declared_class: Option<GraphClassLabel>,
    pub declared_equivalent_to: Option<(&'static str, EquivalenceKind)>,
}

fn binary(name: &str) -> SchemaDesc {
    SchemaDesc::new(name, 2)
}

fn entry(
    schema: SchemaDesc,
    class: Option<GraphClassLabel>,
    equiv: Option<(&'static str, EquivalenceKind)>,
) -> CatalogEntry {
    CatalogEntry {
        schema,
        declared_class: class,
        declared_equivalent_to: equiv,
    }
}

/// S0..S19 in table order.
pub fn binary_catalog() -> Vec<CatalogEntry> {
    use EquivalenceKind::{Generic as G, Logical as L};
    use GraphClassLabel::*;
    let symm = |s: SchemaDesc| s.ind([1, 2], [2, 1]);
    let both = |s: SchemaDesc| s.ind([1], [2]).ind([2], [1]);
    vec![
        entry(binary("S0"), Some(DIGRAPH), None),
        entry(binary("S1").ind([1], [2]), Some(SOURCE_FREE), None),
        entry(binary("S2").ind([2], [1]), None, Some(("S1", G))),
        entry(both(binary("S3")), Some(SOURCE_SINK_FREE), None),
        entry(symm(binary("S4")), Some(SYMM), None),
        entry(binary("S5").key([1]), Some(OUTDEG_LE1), None),
        entry(binary("S6").key([1]).ind([1], [2]), Some(CYCLES), None),
        entry(binary("S7").key([1]).ind([2], [1]), Some(OUTDEG1), None),
        entry(both(binary("S8").key([1])), None, Some(("S6", L))),
        entry(symm(binary("S9").key([1])), Some(SYMM_DEG1), None),
        entry(binary("S10").key([2]), None, Some(("S5", G))),
        entry(binary("S11").key([2]).ind([1], [2]), None, Some(("S7", G))),
        entry(binary("S12").key([2]).ind([2], [1]), None, Some(("S6", L))),
        entry(both(binary("S13").key([2])), None, Some(("S6", L))),
        entry(symm(binary("S14").key([2])), None, Some(("S9", L))),
        entry(binary("S15").key([1]).key([2]), Some(PATHS_CYCLES), None),
        entry(binary("S16").key([1]).key([2]).ind([1], [2]), None, Some(("S6", L))),
        entry(binary("S17").key([1]).key([2]).ind([2], [1]), None, Some(("S6", L))),
        entry(both(binary("S18").key([1]).key([2])), None, Some(("S6", L))),
        entry(symm(binary("S19").key([1]).key([2])), None, Some(("S9", L))),
    ]
}

/// T0..T7: ternary schemas with key constraints only.
pub fn ternary_catalog() -> Vec<CatalogEntry> {
    let t = |name: &str| SchemaDesc::new(name, 3);
    [
        t("T0"),
        t("T1").key([1]),
        t("T2").key([1]).key([2]),
        t("T3").key([1]).key([2]).key([3]),
        t("T4").key([1, 2]),
        t("T5").key([1, 2]).key([1, 3]),
        t("T6").key([1, 2]).key([1, 3]).key([2, 3]),
        t("T7").key([1]).key([2, 3]),
    ]
    .into_iter()
    .map(|s| entry(s, None, None))
    .collect()
}

/// Looks up a catalog schema by name (`S0`..`S19`, `T0`..`T7`), or by the
/// class label of a binary representative.
pub fn schema(name: &str) -> Option<SchemaDesc> {
    let key = name.trim();
    binary_catalog()
        .into_iter()
        .chain(ternary_catalog())
        .find(|e| e.schema.name.eq_ignore_ascii_case(key))
        .map(|e| e.schema)
        .or_else(|| key.parse::<GraphClassLabel>().ok().map(class_schema))
}

/// The representative schema of a binary class.
pub fn class_schema(label: GraphClassLabel) -> SchemaDesc {
    schema(label.representative()).expect("representatives are in the catalog")
}
