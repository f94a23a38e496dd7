use infocap::enumeration::Enumerator;
use infocap::lattice::{
    build_binary_hasse, build_ternary_chain, export_dot, strong_inclusion, schema, ternary_counts,
    verify_table1_equivalences, FactKind, InclusionVerdict,
};

const BINARY_GOLDEN: [(&str, &str); 9] = [
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

#[test]
fn binary_hasse_matches_golden() {
    let h = build_binary_hasse(3, None, &Enumerator::default()).unwrap();
    assert_eq!(h.nodes.len(), 9);
    let mut got: Vec<(String, String)> = h.edges.clone();
    got.sort();
    let mut want: Vec<(String, String)> = BINARY_GOLDEN.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    want.sort();
    assert_eq!(got, want, "{}", h.report());
    let ann = &h.annotations[&("OUTDEG_LE1".to_string(), "SOURCE_SINK_FREE".to_string())];
    assert!(ann.contains(&FactKind::Mapping("m".into())));
    let ann = &h.annotations[&("PATHS_CYCLES".to_string(), "OUTDEG1".to_string())];
    assert!(ann.contains(&FactKind::Mapping("close_sinks".into())));
    assert!(h
        .facts
        .iter()
        .any(|f| f.lower == "CYCLES" && f.upper == "SYMM" && matches!(f.kind, FactKind::Obstruction { .. })));
    for e in &h.edges {
        assert!(
            h.annotations[e].iter().any(|k| matches!(k, FactKind::CountStrict { .. })),
            "{e:?} lacks count strictness"
        );
    }
}

#[test]
fn binary_dot_is_stable() {
    let a = export_dot(&build_binary_hasse(3, None, &Enumerator::default()).unwrap());
    let b = export_dot(&build_binary_hasse(3, None, &Enumerator::new(1 << 24, infocap::Exec::Sequential)).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.matches(" -> ").count(), 9);
}

#[test]
fn ternary_chain() {
    let h = build_ternary_chain(2, &Enumerator::default()).unwrap();
    let chain = ["T3", "T2", "T7", "T1", "T6", "T5", "T4", "T0"];
    assert_eq!(h.edges.len(), 7, "{}", h.report());
    for w in chain.windows(2) {
        assert!(h.has_edge(w[0], w[1]), "{} -> {} missing\n{}", w[0], w[1], h.report());
    }
    let ann = &h.annotations[&("T1".to_string(), "T6".to_string())];
    assert!(ann.contains(&FactKind::Mapping("f".into())));
    assert!(ann.contains(&FactKind::CountStrict { minimal_c: 8 }));
    let counts = ternary_counts(2, &Enumerator::default()).unwrap();
    let c = |n: &str| counts.iter().find(|(m, _)| m == n).unwrap().1.clone();
    for w in chain.windows(2) {
        if (w[0], w[1]) != ("T1", "T6") {
            assert!(c(w[0]) < c(w[1]), "{} vs {}", w[0], w[1]);
        }
    }
}

#[test]
fn ternary_strong_chains_at_three() {
    let pairs = [("T3", "T2"), ("T2", "T7"), ("T7", "T1"), ("T6", "T5"), ("T5", "T4"), ("T4", "T0")];
    for (lo, up) in pairs {
        let r = strong_inclusion(&schema(lo).unwrap(), &schema(up).unwrap(), 2..=3, &Enumerator::default()).unwrap();
        assert!(r.iter().all(|(_, v)| *v == InclusionVerdict::SubsetStrict), "{lo} {up}");
    }
}

#[test]
fn table_equivalences_up_to_four() {
    let r = verify_table1_equivalences(4, &Enumerator::default()).unwrap();
    assert!(r.all_passed(), "{r}");
}
